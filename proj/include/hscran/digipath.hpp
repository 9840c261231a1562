#ifndef HSCRAN_DIGIPATH_HPP
#define HSCRAN_DIGIPATH_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hscran/bits.hpp"
#include "hscran/crc.hpp"
#include "hscran/error.hpp"
#include "hscran/rng.hpp"
#include "hscran/types.hpp"

namespace hscran {

namespace detail {

inline double axis_scale(int bits_per_axis) {
    switch (bits_per_axis) {
    case 1: return 1.0 / std::sqrt(2.0);
    case 2: return 1.0 / std::sqrt(10.0);
    case 3: return 1.0 / std::sqrt(42.0);
    }
    return 0.0;
}

// Gray-coded PAM level (unnormalized odd integer) for the MSB-first axis label.
inline double pam_level(unsigned label, int bits_per_axis) {
    auto s = [&](int i) { return 1.0 - 2.0 * ((label >> (bits_per_axis - 1 - i)) & 1u); };
    switch (bits_per_axis) {
    case 1: return s(0);
    case 2: return s(0) * (2.0 - s(1));
    case 3: return s(0) * (4.0 - s(1) * (2.0 - s(2)));
    }
    return 0.0;
}

// Nearest level; ties resolve to the smaller label. Distances within 1e-12 count
// as ties so that midpoints survive rounding of the level scale.
inline unsigned pam_decide(double x, int bits_per_axis) {
    const double scale = axis_scale(bits_per_axis);
    unsigned best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (unsigned label = 0; label < (1u << bits_per_axis); ++label) {
        const double d = std::abs(x - pam_level(label, bits_per_axis) * scale);
        if (d < best_d - 1e-12) {
            best_d = d;
            best = label;
        }
    }
    return best;
}

} // namespace detail

/// Gray-mapped square QAM at unit mean power. The first half of each symbol's
/// bits selects the I level, the second half the Q level. A trailing partial
/// symbol is zero-padded.
inline std::vector<cplx> qam_modulate(std::span<const std::uint8_t> bits, Modulation order) {
    const int bps = bits_per_symbol(order);
    const int half = bps / 2;
    const double scale = detail::axis_scale(half);
    const std::size_t n_sym = (bits.size() + bps - 1) / bps;
    std::vector<cplx> out(n_sym);
    for (std::size_t s = 0; s < n_sym; ++s) {
        unsigned i_label = 0, q_label = 0;
        for (int b = 0; b < bps; ++b) {
            const std::size_t idx = s * bps + b;
            const unsigned bit = idx < bits.size() ? (bits[idx] & 1u) : 0u;
            if (b < half) i_label = (i_label << 1) | bit;
            else q_label = (q_label << 1) | bit;
        }
        out[s] = {detail::pam_level(i_label, half) * scale, detail::pam_level(q_label, half) * scale};
    }
    return out;
}

/// Hard-decision minimum-distance demapping.
inline Bits qam_demodulate(std::span<const cplx> symbols, Modulation order) {
    const int bps = bits_per_symbol(order);
    const int half = bps / 2;
    Bits bits;
    bits.reserve(symbols.size() * bps);
    for (const cplx& y : symbols) {
        append_field(bits, detail::pam_decide(y.real(), half), half);
        append_field(bits, detail::pam_decide(y.imag(), half), half);
    }
    return bits;
}

inline std::size_t qam_symbols_for_bits(std::size_t n_bits, Modulation order) {
    const auto bps = static_cast<std::size_t>(bits_per_symbol(order));
    return (n_bits + bps - 1) / bps;
}

// Text frame: length (u16, big-endian) | payload | CRC-32 (big-endian) over
// length and payload.

inline constexpr std::size_t kFrameOverhead = 6;
inline constexpr std::size_t kMaxFramePayload = 0xFFFF;

inline std::vector<std::uint8_t> frame_bytes(std::span<const std::uint8_t> payload) {
    if (payload.size() > kMaxFramePayload) throw Error(ErrorCode::InvalidRequest, "text payload exceeds 65535 bytes");
    std::vector<std::uint8_t> frame;
    frame.reserve(payload.size() + kFrameOverhead);
    frame.push_back(static_cast<std::uint8_t>(payload.size() >> 8));
    frame.push_back(static_cast<std::uint8_t>(payload.size() & 0xFF));
    frame.insert(frame.end(), payload.begin(), payload.end());
    const std::uint32_t crc = crc32_ieee(frame);
    for (int shift = 24; shift >= 0; shift -= 8) frame.push_back(static_cast<std::uint8_t>(crc >> shift));
    return frame;
}

inline Bits frame_text(std::span<const std::uint8_t> payload) { return bytes_to_bits(frame_bytes(payload)); }

inline Bits frame_text(std::string_view text) {
    const auto* p = reinterpret_cast<const std::uint8_t*>(text.data());
    return frame_text(std::span<const std::uint8_t>(p, text.size()));
}

/// Bits beyond the frame (modulation padding) are ignored.
inline std::vector<std::uint8_t> unframe_text(std::span<const std::uint8_t> bits) {
    const auto bytes = bits_to_bytes(bits);
    if (bytes.size() < kFrameOverhead) throw Error(ErrorCode::FrameCorrupt, "frame shorter than header and CRC");
    const std::size_t len = (std::size_t{bytes[0]} << 8) | bytes[1];
    if (bytes.size() < len + kFrameOverhead) throw Error(ErrorCode::FrameCorrupt, "frame length field exceeds data");
    const std::size_t crc_pos = 2 + len;
    std::uint32_t crc = 0;
    for (int i = 0; i < 4; ++i) crc = (crc << 8) | bytes[crc_pos + i];
    if (crc32_ieee(std::span<const std::uint8_t>(bytes).first(crc_pos)) != crc)
        throw Error(ErrorCode::FrameCorrupt, "frame CRC-32 mismatch");
    return {bytes.begin() + 2, bytes.begin() + static_cast<std::ptrdiff_t>(crc_pos)};
}

/// Q(x) = P(N(0,1) > x).
inline double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

inline double qpsk_theory_ber(double ebn0_db) { return q_function(std::sqrt(2.0 * std::pow(10.0, ebn0_db / 10.0))); }

struct BerPoint {
    double ebn0_db = 0.0;
    std::size_t n_bits = 0;
    std::size_t errors = 0;
    double ber() const { return n_bits ? static_cast<double>(errors) / static_cast<double>(n_bits) : 0.0; }
};

/// Uncoded symbol-level AWGN simulation. Symbols have unit energy, so
/// Eb = 1 / bits_per_symbol and the complex noise variance is N0 = Eb / (Eb/N0).
inline BerPoint simulate_awgn_ber(Modulation order, double ebn0_db, std::size_t n_bits, std::uint64_t seed) {
    const int bps = bits_per_symbol(order);
    const double n0 = (1.0 / bps) / std::pow(10.0, ebn0_db / 10.0);
    Rng rng(seed);
    BerPoint p{ebn0_db, 0, 0};
    constexpr std::size_t kChunk = 1u << 15;
    Bits bits;
    while (p.n_bits < n_bits) {
        std::size_t n = std::min(kChunk, n_bits - p.n_bits);
        n -= n % bps;
        if (n == 0) break;
        bits.resize(n);
        for (auto& b : bits) b = rng.bit();
        auto sym = qam_modulate(bits, order);
        for (auto& s : sym) s += rng.complex_normal(n0);
        const auto rx = qam_demodulate(sym, order);
        for (std::size_t i = 0; i < n; ++i) p.errors += rx[i] != bits[i];
        p.n_bits += n;
    }
    return p;
}

} // namespace hscran

#endif // HSCRAN_DIGIPATH_HPP
