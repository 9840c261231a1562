#ifndef HSCRAN_BITS_HPP
#define HSCRAN_BITS_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "hscran/types.hpp"

namespace hscran {

// All bit/byte conversions in this library are most-significant-bit first.

inline void append_field(Bits& out, std::uint64_t value, int width) {
    for (int b = width - 1; b >= 0; --b)
        out.push_back(static_cast<std::uint8_t>((value >> b) & 1u));
}

inline std::uint64_t read_field(std::span<const std::uint8_t> bits, std::size_t pos, int width) {
    if (pos + static_cast<std::size_t>(width) > bits.size()) throw std::out_of_range("bit field");
    std::uint64_t v = 0;
    for (int b = 0; b < width; ++b) v = (v << 1) | (bits[pos + b] & 1u);
    return v;
}

inline Bits bytes_to_bits(std::span<const std::uint8_t> bytes) {
    Bits bits;
    bits.reserve(bytes.size() * 8);
    for (std::uint8_t byte : bytes) append_field(bits, byte, 8);
    return bits;
}

/// Trailing bits that do not fill a byte are ignored.
inline std::vector<std::uint8_t> bits_to_bytes(std::span<const std::uint8_t> bits) {
    std::vector<std::uint8_t> bytes(bits.size() / 8);
    for (std::size_t i = 0; i < bytes.size(); ++i)
        bytes[i] = static_cast<std::uint8_t>(read_field(bits, i * 8, 8));
    return bytes;
}

} // namespace hscran

#endif // HSCRAN_BITS_HPP
