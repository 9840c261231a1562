#ifndef HSCRAN_DCI_HPP
#define HSCRAN_DCI_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hscran/bits.hpp"
#include "hscran/crc.hpp"
#include "hscran/error.hpp"
#include "hscran/types.hpp"

namespace hscran {

/// Extended downlink control record. Body layout (MSB first, 56 bits):
///
///   resource_type 1 | rb_start 8 | rb_count 8 | modulation 2 |
///   payload_len 16 | gain_q 16 | reserved 5
///
/// followed by CRC-16/CCITT-FALSE over the 7 body bytes (72 bits total).
/// payload_len counts complex symbols for semantic payloads and frame bytes for
/// non-semantic ones. gain_q is the quantized power-normalization gain
/// (g = gain_q / 1024) and is 0 for non-semantic payloads.
struct Dci {
    ResourceType resource_type = ResourceType::NonSemantic;
    std::uint32_t rb_start = 0;
    std::uint32_t rb_count = 0;
    Modulation modulation = Modulation::QPSK;
    std::uint32_t payload_len = 0;
    std::uint32_t gain_q = 0;

    friend bool operator==(const Dci&, const Dci&) = default;
};

inline constexpr std::size_t kDciBodyBits = 56;
inline constexpr std::size_t kDciBits = 72;
inline constexpr std::size_t kDciCandidates = 4;
inline constexpr double kGainScale = 1024.0;

inline std::uint32_t quantize_gain(double g) {
    const double q = std::round(g * kGainScale);
    return static_cast<std::uint32_t>(std::clamp(q, 1.0, 65535.0));
}

inline double dequantize_gain(std::uint32_t gain_q) { return static_cast<double>(gain_q) / kGainScale; }

inline Bits encode_dci(const Dci& d) {
    auto range = [](const char* name, std::uint32_t v, std::uint32_t max) {
        if (v > max) throw Error(ErrorCode::FieldRange, std::string(name) + "=" + std::to_string(v));
    };
    range("rb_start", d.rb_start, 0xFF);
    range("rb_count", d.rb_count, 0xFF);
    range("modulation", static_cast<std::uint32_t>(d.modulation), 2);
    range("payload_len", d.payload_len, 0xFFFF);
    range("gain_q", d.gain_q, 0xFFFF);
    range("resource_type", static_cast<std::uint32_t>(d.resource_type), 1);

    Bits bits;
    bits.reserve(kDciBits);
    append_field(bits, static_cast<std::uint64_t>(d.resource_type), 1);
    append_field(bits, d.rb_start, 8);
    append_field(bits, d.rb_count, 8);
    append_field(bits, static_cast<std::uint64_t>(d.modulation), 2);
    append_field(bits, d.payload_len, 16);
    append_field(bits, d.gain_q, 16);
    append_field(bits, 0, 5);
    const auto body = bits_to_bytes(bits);
    append_field(bits, crc16_ccitt_false(body), 16);
    return bits;
}

inline Dci decode_dci(std::span<const std::uint8_t> bits) {
    if (bits.size() != kDciBits)
        throw Error(ErrorCode::LengthMismatch, "DCI codeword must be 72 bits, got " + std::to_string(bits.size()));
    const auto body = bits_to_bytes(bits.first(kDciBodyBits));
    const auto crc = static_cast<std::uint16_t>(read_field(bits, kDciBodyBits, 16));
    if (crc16_ccitt_false(body) != crc) throw Error(ErrorCode::CrcMismatch, "DCI CRC check failed");

    Dci d;
    std::size_t pos = 0;
    auto take = [&](int w) {
        const auto v = read_field(bits, pos, w);
        pos += w;
        return static_cast<std::uint32_t>(v);
    };
    d.resource_type = static_cast<ResourceType>(take(1));
    d.rb_start = take(8);
    d.rb_count = take(8);
    const auto mod = take(2);
    if (mod > 2) throw Error(ErrorCode::FieldRange, "modulation code 3 is undefined");
    d.modulation = static_cast<Modulation>(mod);
    d.payload_len = take(16);
    d.gain_q = take(16);
    return d;
}

/// Lays up to four codewords at fixed 72-bit candidate positions from bit 0.
/// Unused positions and the tail of the region are zero.
inline Bits pack_control_region(std::span<const Dci> dcis, std::size_t region_bits) {
    if (dcis.size() > kDciCandidates)
        throw Error(ErrorCode::TooManyDcis, std::to_string(dcis.size()) + " DCIs, control region holds 4");
    if (region_bits < kDciCandidates * kDciBits)
        throw Error(ErrorCode::InvalidConfig, "control region smaller than 4 DCI candidates");
    Bits region(region_bits, 0);
    for (std::size_t i = 0; i < dcis.size(); ++i) {
        const auto cw = encode_dci(dcis[i]);
        std::copy(cw.begin(), cw.end(), region.begin() + static_cast<std::ptrdiff_t>(i * kDciBits));
    }
    return region;
}

/// Per-candidate blind decoding result: empty where the CRC or field check fails.
using DciCandidates = std::array<std::optional<Dci>, kDciCandidates>;

inline DciCandidates decode_candidates(std::span<const std::uint8_t> region) {
    if (region.size() < kDciCandidates * kDciBits)
        throw Error(ErrorCode::LengthMismatch, "control region shorter than 4 DCI candidates");
    DciCandidates out;
    for (std::size_t i = 0; i < kDciCandidates; ++i) {
        try {
            out[i] = decode_dci(region.subspan(i * kDciBits, kDciBits));
        } catch (const Error&) {
        }
    }
    return out;
}

/// Valid DCIs in candidate-position order.
inline std::vector<Dci> unpack_control_region(std::span<const std::uint8_t> region) {
    std::vector<Dci> out;
    for (const auto& c : decode_candidates(region))
        if (c) out.push_back(*c);
    return out;
}

} // namespace hscran

#endif // HSCRAN_DCI_HPP
