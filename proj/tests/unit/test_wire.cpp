#include <gtest/gtest.h>

#include <map>

#include "fixture_io.hpp"

using namespace hscran;
using namespace hscran::wire;
using hscran::test::Engine;

namespace {

std::map<std::string, std::vector<std::uint8_t>> golden() {
    std::map<std::string, std::vector<std::uint8_t>> out;
    for (const auto& line : test::fixture_lines("wire_golden.txt")) {
        std::istringstream in(line);
        std::string name, hex;
        in >> name >> hex;
        out[name] = test::from_hex(hex);
    }
    return out;
}

const std::vector<std::uint8_t> kPixels = [] {
    std::vector<std::uint8_t> p(12);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = static_cast<std::uint8_t>((7 * i) & 0xFF);
    return p;
}();
const std::vector<float> kValues{0.5f, -1.25f, 3.0f, 0.0f};

template <class F>
ErrorCode code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::Io;
}

} // namespace

TEST(WireGolden, SerializeMatchesFixtures) {
    const auto g = golden();
    EXPECT_EQ(capabilities_request(), g.at("capabilities_request"));
    EXPECT_EQ(serialize(CapabilitiesResponse{1}), g.at("capabilities_response_persistent"));
    EXPECT_EQ(serialize(CapabilitiesResponse{0}), g.at("capabilities_response_oneshot"));
    EXPECT_EQ(serialize(EncodeRequest{2, 2, 0.0f, 0.25f, kPixels}), g.at("encode_request"));
    EXPECT_EQ(serialize(EncodeResponse{3, kValues}), g.at("encode_response"));
    EXPECT_EQ(serialize(DecodeRequest{2, 2, 10.0f, 3, kValues}), g.at("decode_request"));
    EXPECT_EQ(serialize(DecodeResponse{kPixels}), g.at("decode_response"));
    EXPECT_EQ(error_message("oops"), g.at("error_response"));
}

TEST(WireGolden, ParseFixtures) {
    const auto g = golden();
    EXPECT_TRUE(parse_capabilities_response(parse_frame(g.at("capabilities_response_persistent"))).persistent());
    EXPECT_FALSE(parse_capabilities_response(parse_frame(g.at("capabilities_response_oneshot"))).persistent());
    EXPECT_EQ(parse_encode_request(parse_frame(g.at("encode_request"))), (EncodeRequest{2, 2, 0.0f, 0.25f, kPixels}));
    EXPECT_EQ(parse_encode_response(parse_frame(g.at("encode_response"))), (EncodeResponse{3, kValues}));
    EXPECT_EQ(parse_decode_request(parse_frame(g.at("decode_request"))), (DecodeRequest{2, 2, 10.0f, 3, kValues}));
    EXPECT_EQ(parse_decode_response(parse_frame(g.at("decode_response"))), DecodeResponse{kPixels});
    const auto m = parse_frame(g.at("capabilities_request"));
    EXPECT_EQ(m.op, Op::Capabilities);
    EXPECT_TRUE(m.body.empty());
}

TEST(WireGolden, HeaderLayout) {
    const auto f = capabilities_request();
    ASSERT_EQ(f.size(), 10u);
    EXPECT_EQ(f[0], 6); // little-endian length
    EXPECT_EQ(std::string(f.begin() + 4, f.begin() + 8), "HSCC");
    EXPECT_EQ(f[8], 0x01);
    EXPECT_EQ(f[9], 0x03);
}

TEST(WireMalformed, HeaderErrors) {
    auto f = capabilities_request();
    auto bad = f;
    bad[4] = 'X';
    EXPECT_EQ(code_of([&] { parse_frame(bad); }), ErrorCode::ProtocolViolation);
    bad = f;
    bad[8] = 0x02;
    EXPECT_EQ(code_of([&] { parse_frame(bad); }), ErrorCode::ProtocolViolation);
    bad = f;
    bad[9] = 0x09;
    EXPECT_EQ(code_of([&] { parse_frame(bad); }), ErrorCode::ProtocolViolation);
    bad = f;
    bad[0] = 7;
    EXPECT_EQ(code_of([&] { parse_frame(bad); }), ErrorCode::ProtocolViolation);
    EXPECT_EQ(code_of([&] { parse_frame(std::span(f).first(3)); }), ErrorCode::ProtocolViolation);
    EXPECT_EQ(code_of([&] { parse_frame(std::span(f).first(8)); }), ErrorCode::ProtocolViolation);
}

TEST(WireMalformed, BodyErrors) {
    const auto g = golden();
    // every strict prefix of a valid body is rejected once the length is fixed up
    const auto full = g.at("encode_response");
    for (std::size_t cut = 10; cut < full.size(); ++cut) {
        std::vector<std::uint8_t> f(full.begin(), full.begin() + cut);
        const auto len = static_cast<std::uint32_t>(cut - 4);
        for (int i = 0; i < 4; ++i) f[i] = static_cast<std::uint8_t>(len >> (8 * i));
        EXPECT_EQ(code_of([&] { parse_encode_response(parse_frame(f)); }), ErrorCode::ProtocolViolation) << cut;
    }
    // trailing byte
    Writer w;
    w.u8(1);
    w.u8(0);
    EXPECT_EQ(code_of([&] { parse_capabilities_response(parse_frame(frame(Op::Capabilities, w.take()))); }),
              ErrorCode::ProtocolViolation);
    // odd vector length
    EXPECT_EQ(code_of([&] { parse_encode_response(parse_frame(serialize(EncodeResponse{1, {1.0f, 2.0f, 3.0f}}))); }),
              ErrorCode::ProtocolViolation);
    // original_len beyond the vector
    EXPECT_EQ(code_of([&] { parse_encode_response(parse_frame(serialize(EncodeResponse{5, kValues}))); }),
              ErrorCode::ProtocolViolation);
    EXPECT_EQ(code_of([&] { parse_decode_request(parse_frame(serialize(DecodeRequest{2, 2, 0, 5, kValues}))); }),
              ErrorCode::ProtocolViolation);
    // pixel count does not match geometry
    EXPECT_EQ(code_of([&] { parse_encode_request(parse_frame(serialize(EncodeRequest{3, 2, 0, 0.1f, kPixels}))); }),
              ErrorCode::ProtocolViolation);
    // op mismatch and plugin-reported errors
    EXPECT_EQ(code_of([&] { parse_decode_response(parse_frame(serialize(EncodeResponse{0, {}}))); }),
              ErrorCode::ProtocolViolation);
    try {
        parse_encode_response(parse_frame(g.at("error_response")));
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("oops"), std::string::npos);
    }
}

TEST(WireProperty, RandomMessagesRoundTrip) {
    Engine e(1);
    for (int i = 0; i < 300; ++i) {
        const auto w = static_cast<std::uint32_t>(test::uniform(e, 0, 20));
        const auto h = static_cast<std::uint32_t>(test::uniform(e, 0, 20));
        EncodeRequest q{w, h, float(test::uniform_real(e, -30, 30)), float(test::uniform_real(e, 0, 0.5)),
                        test::random_bytes(e, std::size_t{w} * h * 3)};
        EXPECT_EQ(parse_encode_request(parse_frame(serialize(q))), q);

        std::vector<float> v(2 * test::uniform(e, 0, 50));
        for (auto& x : v) x = float(test::uniform_real(e, -100, 100));
        const auto orig = static_cast<std::uint32_t>(test::uniform(e, 0, v.size()));
        EXPECT_EQ(parse_encode_response(parse_frame(serialize(EncodeResponse{orig, v}))), (EncodeResponse{orig, v}));
        const DecodeRequest d{w, h, 1.5f, orig, v};
        EXPECT_EQ(parse_decode_request(parse_frame(serialize(d))), d);
        const DecodeResponse r{test::random_bytes(e, test::uniform(e, 0, 100))};
        EXPECT_EQ(parse_decode_response(parse_frame(serialize(r))), r);
    }
}
