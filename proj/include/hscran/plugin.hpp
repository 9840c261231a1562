#ifndef HSCRAN_PLUGIN_HPP
#define HSCRAN_PLUGIN_HPP

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstdint>
#include <cstring>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include "hscran/error.hpp"
#include "hscran/wire.hpp"

namespace hscran {

/// One plugin process started with `/bin/sh -c <command>`, its stdin and stdout
/// joined to a local stream socket. The process runs in its own process group so
/// a timeout kills the whole tree.
class PluginProcess {
public:
    using Clock = std::chrono::steady_clock;

    explicit PluginProcess(const std::string& command) {
        int sv[2];
        if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, sv) != 0)
            throw Error(ErrorCode::PluginCrash, std::string("socketpair: ") + std::strerror(errno));
        const pid_t pid = ::fork();
        if (pid < 0) {
            ::close(sv[0]);
            ::close(sv[1]);
            throw Error(ErrorCode::PluginCrash, std::string("fork: ") + std::strerror(errno));
        }
        if (pid == 0) {
            ::setpgid(0, 0);
            ::dup2(sv[1], STDIN_FILENO);
            ::dup2(sv[1], STDOUT_FILENO);
            ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
            ::_exit(127);
        }
        ::close(sv[1]);
        fd_ = sv[0];
        pid_ = pid;
    }

    PluginProcess(const PluginProcess&) = delete;
    PluginProcess& operator=(const PluginProcess&) = delete;

    ~PluginProcess() { terminate(); }

    /// Sends one framed message.
    void send(std::span<const std::uint8_t> bytes, Clock::time_point deadline) {
        std::size_t done = 0;
        while (done < bytes.size()) {
            wait_ready(POLLOUT, deadline);
            const ssize_t n = ::send(fd_, bytes.data() + done, bytes.size() - done, MSG_NOSIGNAL);
            if (n < 0) {
                if (errno == EINTR || errno == EAGAIN) continue;
                // peer is gone; the read side reports crash or truncation
                return;
            }
            done += static_cast<std::size_t>(n);
        }
    }

    /// Reads one framed message (length prefix included).
    std::vector<std::uint8_t> receive(Clock::time_point deadline) {
        std::vector<std::uint8_t> buf;
        std::size_t want = 4;
        while (buf.size() < want) {
            wait_ready(POLLIN, deadline);
            std::uint8_t chunk[65536];
            const std::size_t ask = std::min(sizeof chunk, want - buf.size());
            const ssize_t n = ::recv(fd_, chunk, ask, 0);
            if (n < 0) {
                if (errno == EINTR || errno == EAGAIN) continue;
                on_eof(buf.empty());
            }
            if (n == 0) on_eof(buf.empty());
            buf.insert(buf.end(), chunk, chunk + n);
            if (want == 4 && buf.size() == 4) {
                const std::uint32_t len = wire::Reader(buf).u32();
                if (len > wire::kMaxMessage) wire::violation("response length prefix too large");
                want = 4 + std::size_t{len};
            }
        }
        return buf;
    }

    /// Closes the request side and reaps the process, killing it after `grace`.
    void finish(std::chrono::milliseconds grace) {
        if (fd_ >= 0) ::shutdown(fd_, SHUT_WR);
        const auto deadline = Clock::now() + grace;
        while (pid_ > 0) {
            if (reap(false)) break;
            if (Clock::now() >= deadline) {
                terminate();
                break;
            }
            ::usleep(1000);
        }
        close_fd();
    }

    void terminate() {
        if (pid_ > 0) {
            ::kill(-pid_, SIGKILL);
            ::kill(pid_, SIGKILL);
            reap(true);
        }
        close_fd();
    }

    std::optional<int> exit_status() const { return status_; }

private:
    [[noreturn]] void on_eof(bool nothing_read) {
        if (nothing_read) {
            finish(std::chrono::milliseconds(2000));
            if (status_ && (!WIFEXITED(*status_) || WEXITSTATUS(*status_) != 0))
                throw Error(ErrorCode::PluginCrash, "plugin exited without a response (status " + describe() + ")");
            wire::violation("plugin closed its output without a response");
        }
        terminate();
        wire::violation("truncated response");
    }

    std::string describe() const {
        if (!status_) return "unknown";
        if (WIFEXITED(*status_)) return "exit " + std::to_string(WEXITSTATUS(*status_));
        if (WIFSIGNALED(*status_)) return "signal " + std::to_string(WTERMSIG(*status_));
        return "?";
    }

    void wait_ready(short events, Clock::time_point deadline) {
        for (;;) {
            const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
            if (left <= 0) {
                terminate();
                throw Error(ErrorCode::PluginTimeout, "plugin did not answer in time");
            }
            pollfd p{fd_, events, 0};
            const int r = ::poll(&p, 1, static_cast<int>(std::min<long long>(left, 1000)));
            if (r > 0) return;
            if (r < 0 && errno != EINTR) throw Error(ErrorCode::PluginCrash, std::string("poll: ") + std::strerror(errno));
        }
    }

    bool reap(bool block) {
        int st = 0;
        const pid_t r = ::waitpid(pid_, &st, block ? 0 : WNOHANG);
        if (r == pid_) {
            status_ = st;
            pid_ = -1;
            return true;
        }
        return false;
    }

    void close_fd() {
        if (fd_ >= 0) ::close(fd_);
        fd_ = -1;
    }

    int fd_ = -1;
    pid_t pid_ = -1;
    std::optional<int> status_;
};

/// Client side of the codec plugin protocol. By default each request runs in a
/// fresh process; if the plugin advertises persistent mode in its Capabilities
/// answer the first process is kept and reused. One request in flight at a time.
class PluginClient {
public:
    explicit PluginClient(std::string command, std::chrono::milliseconds timeout = std::chrono::seconds(30))
        : command_(std::move(command)), timeout_(timeout) {}

    ~PluginClient() {
        if (session_) session_->finish(std::chrono::milliseconds(500));
    }

    PluginClient(const PluginClient&) = delete;
    PluginClient& operator=(const PluginClient&) = delete;

    wire::CapabilitiesResponse capabilities() {
        return wire::parse_capabilities_response(roundtrip(wire::capabilities_request()));
    }

    wire::EncodeResponse encode(const wire::EncodeRequest& req) {
        negotiate();
        return wire::parse_encode_response(roundtrip(wire::serialize(req)));
    }

    wire::DecodeResponse decode(const wire::DecodeRequest& req) {
        negotiate();
        return wire::parse_decode_response(roundtrip(wire::serialize(req)));
    }

    bool persistent() const { return session_ != nullptr; }

private:
    void negotiate() {
        if (negotiated_) return;
        negotiated_ = true;
        auto proc = std::make_unique<PluginProcess>(command_);
        const auto deadline = PluginProcess::Clock::now() + timeout_;
        proc->send(wire::capabilities_request(), deadline);
        const auto caps = wire::parse_capabilities_response(wire::parse_frame(proc->receive(deadline)));
        if (caps.persistent()) session_ = std::move(proc);
        else proc->finish(std::chrono::milliseconds(2000));
    }

    wire::Message roundtrip(const std::vector<std::uint8_t>& request) {
        const auto deadline = PluginProcess::Clock::now() + timeout_;
        if (session_) {
            try {
                session_->send(request, deadline);
                return wire::parse_frame(session_->receive(deadline));
            } catch (...) {
                session_.reset();
                throw;
            }
        }
        PluginProcess proc(command_);
        proc.send(request, deadline);
        auto reply = proc.receive(deadline);
        proc.finish(std::chrono::milliseconds(2000));
        return wire::parse_frame(reply);
    }

    std::string command_;
    std::chrono::milliseconds timeout_;
    bool negotiated_ = false;
    std::unique_ptr<PluginProcess> session_;
};

} // namespace hscran

#endif // HSCRAN_PLUGIN_HPP
