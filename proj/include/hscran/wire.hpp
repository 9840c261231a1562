#ifndef HSCRAN_WIRE_HPP
#define HSCRAN_WIRE_HPP

#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hscran/error.hpp"

namespace hscran::wire {

// Codec plugin protocol. Every message is
//
//   u32 length (bytes that follow) | "HSCC" | u8 version (0x01) | u8 op | body
//
// with all integers and floats little-endian. Variable-length fields are
// prefixed by a u32 element count.
//
//   Capabilities  request: (empty)
//                 response: u8 flags (bit 0: persistent mode)
//   Encode        request: u32 width, u32 height, f32 snr_hint, f32 target_cbr, u32 n, u8 pixels[n]
//                 response: u32 original_len, u32 n, f32 values[n]        (n even)
//   Decode        request: u32 width, u32 height, f32 snr_hint, u32 original_len, u32 n, f32 values[n]
//                 response: u32 n, u8 pixels[n]
//   Error         response only: u32 n, u8 utf8[n]

inline constexpr std::string_view kMagic = "HSCC";
inline constexpr std::uint8_t kVersion = 0x01;
inline constexpr std::uint32_t kMaxMessage = 256u << 20;

enum class Op : std::uint8_t {
    Encode = 0x01,
    Decode = 0x02,
    Capabilities = 0x03,
    Error = 0x7F,
};

inline constexpr std::uint8_t kFlagPersistent = 0x01;

[[noreturn]] inline void violation(const std::string& what) { throw Error(ErrorCode::ProtocolViolation, what); }

class Writer {
public:
    void u8(std::uint8_t v) { buf_.push_back(v); }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
    void bytes(std::span<const std::uint8_t> b) {
        u32(static_cast<std::uint32_t>(b.size()));
        buf_.insert(buf_.end(), b.begin(), b.end());
    }
    void floats(std::span<const float> f) {
        u32(static_cast<std::uint32_t>(f.size()));
        for (float v : f) f32(v);
    }
    std::vector<std::uint8_t> take() { return std::move(buf_); }

private:
    std::vector<std::uint8_t> buf_;
};

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> data) : data_(data) {}

    std::uint8_t u8() {
        need(1);
        return data_[pos_++];
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= std::uint32_t{data_[pos_ + i]} << (8 * i);
        pos_ += 4;
        return v;
    }
    float f32() { return std::bit_cast<float>(u32()); }
    std::vector<std::uint8_t> bytes() {
        const std::uint32_t n = u32();
        need(n);
        std::vector<std::uint8_t> out(data_.begin() + pos_, data_.begin() + pos_ + n);
        pos_ += n;
        return out;
    }
    std::vector<float> floats() {
        const std::uint32_t n = u32();
        if (static_cast<std::uint64_t>(n) * 4 > data_.size() - pos_) violation("float vector overruns message");
        std::vector<float> out(n);
        for (auto& v : out) v = f32();
        return out;
    }
    void finish() const {
        if (pos_ != data_.size()) violation("trailing bytes in message body");
    }

private:
    void need(std::size_t n) const {
        if (data_.size() - pos_ < n) violation("message body truncated");
    }

    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
};

struct Message {
    Op op = Op::Capabilities;
    std::vector<std::uint8_t> body;
};

inline std::vector<std::uint8_t> frame(Op op, std::span<const std::uint8_t> body) {
    Writer w;
    w.u32(static_cast<std::uint32_t>(kMagic.size() + 2 + body.size()));
    for (char c : kMagic) w.u8(static_cast<std::uint8_t>(c));
    w.u8(kVersion);
    w.u8(static_cast<std::uint8_t>(op));
    auto out = w.take();
    out.insert(out.end(), body.begin(), body.end());
    return out;
}

/// Header check for the 6 bytes after the length prefix.
inline Message parse_payload(std::span<const std::uint8_t> payload) {
    if (payload.size() < 6) violation("message shorter than header");
    if (std::memcmp(payload.data(), kMagic.data(), 4) != 0) violation("bad magic");
    if (payload[4] != kVersion) violation("unsupported version " + std::to_string(payload[4]));
    const auto op = payload[5];
    if (op != 0x01 && op != 0x02 && op != 0x03 && op != 0x7F) violation("unknown op " + std::to_string(op));
    return {static_cast<Op>(op), {payload.begin() + 6, payload.end()}};
}

/// Parses one complete framed message (length prefix included).
inline Message parse_frame(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 4) violation("missing length prefix");
    Reader r(bytes.first(4));
    const std::uint32_t len = r.u32();
    if (bytes.size() - 4 != len) violation("length prefix does not match message size");
    return parse_payload(bytes.subspan(4));
}

struct EncodeRequest {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    float snr_hint = 0.0f;
    float target_cbr = 0.0f;
    std::vector<std::uint8_t> pixels;
    friend bool operator==(const EncodeRequest&, const EncodeRequest&) = default;
};

struct EncodeResponse {
    std::uint32_t original_len = 0;
    std::vector<float> values;
    friend bool operator==(const EncodeResponse&, const EncodeResponse&) = default;
};

struct DecodeRequest {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    float snr_hint = 0.0f;
    std::uint32_t original_len = 0;
    std::vector<float> values;
    friend bool operator==(const DecodeRequest&, const DecodeRequest&) = default;
};

struct DecodeResponse {
    std::vector<std::uint8_t> pixels;
    friend bool operator==(const DecodeResponse&, const DecodeResponse&) = default;
};

struct CapabilitiesResponse {
    std::uint8_t flags = 0;
    bool persistent() const { return (flags & kFlagPersistent) != 0; }
    friend bool operator==(const CapabilitiesResponse&, const CapabilitiesResponse&) = default;
};

inline std::vector<std::uint8_t> serialize(const EncodeRequest& m) {
    Writer w;
    w.u32(m.width);
    w.u32(m.height);
    w.f32(m.snr_hint);
    w.f32(m.target_cbr);
    w.bytes(m.pixels);
    return frame(Op::Encode, w.take());
}

inline std::vector<std::uint8_t> serialize(const EncodeResponse& m) {
    Writer w;
    w.u32(m.original_len);
    w.floats(m.values);
    return frame(Op::Encode, w.take());
}

inline std::vector<std::uint8_t> serialize(const DecodeRequest& m) {
    Writer w;
    w.u32(m.width);
    w.u32(m.height);
    w.f32(m.snr_hint);
    w.u32(m.original_len);
    w.floats(m.values);
    return frame(Op::Decode, w.take());
}

inline std::vector<std::uint8_t> serialize(const DecodeResponse& m) {
    Writer w;
    w.bytes(m.pixels);
    return frame(Op::Decode, w.take());
}

inline std::vector<std::uint8_t> serialize(const CapabilitiesResponse& m) {
    Writer w;
    w.u8(m.flags);
    return frame(Op::Capabilities, w.take());
}

inline std::vector<std::uint8_t> capabilities_request() { return frame(Op::Capabilities, {}); }

inline std::vector<std::uint8_t> error_message(std::string_view text) {
    Writer w;
    w.bytes({reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
    return frame(Op::Error, w.take());
}

inline void expect_op(const Message& m, Op op) {
    if (m.op == Op::Error) {
        Reader r(m.body);
        const auto text = r.bytes();
        violation("plugin reported error: " + std::string(text.begin(), text.end()));
    }
    if (m.op != op) violation("response op does not match request");
}

inline EncodeRequest parse_encode_request(const Message& m) {
    expect_op(m, Op::Encode);
    Reader r(m.body);
    EncodeRequest q;
    q.width = r.u32();
    q.height = r.u32();
    q.snr_hint = r.f32();
    q.target_cbr = r.f32();
    q.pixels = r.bytes();
    r.finish();
    if (q.pixels.size() != std::size_t{q.width} * q.height * 3) violation("pixel count does not match geometry");
    return q;
}

inline EncodeResponse parse_encode_response(const Message& m) {
    expect_op(m, Op::Encode);
    Reader r(m.body);
    EncodeResponse p;
    p.original_len = r.u32();
    p.values = r.floats();
    r.finish();
    if (p.values.size() % 2 != 0) violation("encode response vector length is odd");
    if (p.original_len > p.values.size()) violation("original_len exceeds vector length");
    return p;
}

inline DecodeRequest parse_decode_request(const Message& m) {
    expect_op(m, Op::Decode);
    Reader r(m.body);
    DecodeRequest q;
    q.width = r.u32();
    q.height = r.u32();
    q.snr_hint = r.f32();
    q.original_len = r.u32();
    q.values = r.floats();
    r.finish();
    if (q.original_len > q.values.size()) violation("original_len exceeds vector length");
    return q;
}

inline DecodeResponse parse_decode_response(const Message& m) {
    expect_op(m, Op::Decode);
    Reader r(m.body);
    DecodeResponse p;
    p.pixels = r.bytes();
    r.finish();
    return p;
}

inline CapabilitiesResponse parse_capabilities_response(const Message& m) {
    expect_op(m, Op::Capabilities);
    Reader r(m.body);
    CapabilitiesResponse p;
    p.flags = r.u8();
    r.finish();
    return p;
}

} // namespace hscran::wire

#endif // HSCRAN_WIRE_HPP
