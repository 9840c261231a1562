// Protocol test double for the codec plugin interface.
//
// Modes:
//   echo      answers Capabilities, echoes every other request back unchanged
//   codec     a conforming plugin backed by the builtin transform codec
//   odd       Encode answers carry an odd-length vector
//   truncate  writes half of a valid answer, then exits
//   crash     exits with status 3 on Encode/Decode without answering
//   hang      never answers Encode/Decode

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>

#include "hscran/codec.hpp"
#include "hscran/wire.hpp"

namespace {

using namespace hscran;

bool read_exact(std::uint8_t* dst, std::size_t n) {
    while (n > 0) {
        const ssize_t r = ::read(STDIN_FILENO, dst, n);
        if (r <= 0) return false;
        dst += r;
        n -= static_cast<std::size_t>(r);
    }
    return true;
}

void write_all(const std::vector<std::uint8_t>& b, std::size_t n) {
    std::size_t done = 0;
    while (done < n) {
        const ssize_t w = ::write(STDOUT_FILENO, b.data() + done, n - done);
        if (w <= 0) return;
        done += static_cast<std::size_t>(w);
    }
}

void write_all(const std::vector<std::uint8_t>& b) { write_all(b, b.size()); }

std::optional<std::vector<std::uint8_t>> read_frame() {
    std::vector<std::uint8_t> buf(4);
    if (!read_exact(buf.data(), 4)) return std::nullopt;
    const std::uint32_t len = wire::Reader(buf).u32();
    if (len > wire::kMaxMessage) return std::nullopt;
    buf.resize(4 + std::size_t{len});
    if (!read_exact(buf.data() + 4, len)) return std::nullopt;
    return buf;
}

std::vector<std::uint8_t> codec_answer(const wire::Message& msg) {
    if (msg.op == wire::Op::Encode) {
        const auto q = wire::parse_encode_request(msg);
        ImageFrame img(q.width, q.height);
        img.data = q.pixels;
        CodecSpec spec;
        spec.target_cbr = q.target_cbr;
        const auto v = builtin_encode(img, spec);
        return wire::serialize(
            wire::EncodeResponse{static_cast<std::uint32_t>(v.values.size()), {v.values.begin(), v.values.end()}});
    }
    const auto q = wire::parse_decode_request(msg);
    // Decode has no CBR field; the vector length determines it.
    CodecSpec spec;
    spec.target_cbr = static_cast<double>(q.values.size() / 2) / (double(q.width) * q.height * 3);
    const std::vector<double> vals(q.values.begin(), q.values.end());
    const auto img = builtin_decode(vals, q.width, q.height, spec);
    return wire::serialize(wire::DecodeResponse{img.data});
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hscran codec plugin protocol stub"};
    std::string mode = "echo";
    bool persistent = false;
    app.add_option("--mode", mode, "echo | codec | odd | truncate | crash | hang")
        ->check(CLI::IsMember({"echo", "codec", "odd", "truncate", "crash", "hang"}));
    app.add_flag("--persistent", persistent, "advertise persistent mode and serve until EOF");
    CLI11_PARSE(app, argc, argv);

    for (;;) {
        const auto frame = read_frame();
        if (!frame) return 0;
        wire::Message msg;
        try {
            msg = wire::parse_frame(*frame);
        } catch (const std::exception& e) {
            write_all(wire::error_message(e.what()));
            return 2;
        }

        if (msg.op == wire::Op::Capabilities) {
            write_all(wire::serialize(wire::CapabilitiesResponse{persistent ? wire::kFlagPersistent : std::uint8_t{0}}));
        } else if (mode == "echo") {
            write_all(*frame);
        } else if (mode == "crash") {
            return 3;
        } else if (mode == "hang") {
            std::this_thread::sleep_for(std::chrono::hours(1));
        } else {
            std::vector<std::uint8_t> answer;
            try {
                answer = codec_answer(msg);
                if (mode == "odd" && msg.op == wire::Op::Encode) {
                    auto resp = wire::parse_encode_response(wire::parse_frame(answer));
                    resp.values.pop_back();
                    wire::Writer w;
                    w.u32(resp.original_len - 1);
                    w.floats(resp.values);
                    answer = wire::frame(wire::Op::Encode, w.take());
                }
            } catch (const std::exception& e) {
                write_all(wire::error_message(e.what()));
                return 2;
            }
            if (mode == "truncate") {
                write_all(answer, answer.size() / 2);
                return 0;
            }
            write_all(answer);
        }
        if (!persistent) return 0;
    }
}
