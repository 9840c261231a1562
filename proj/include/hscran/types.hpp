#ifndef HSCRAN_TYPES_HPP
#define HSCRAN_TYPES_HPP

#include <complex>
#include <cstdint>
#include <string_view>
#include <vector>

namespace hscran {

using cplx = std::complex<double>;

/// One bit per element, values 0 or 1.
using Bits = std::vector<std::uint8_t>;

/// The 1-bit DCI "ResourceType" field.
enum class ResourceType : std::uint8_t {
    NonSemantic = 0,
    Semantic = 1,
};

enum class Modulation : std::uint8_t {
    QPSK = 0,
    QAM16 = 1,
    QAM64 = 2,
};

constexpr int bits_per_symbol(Modulation m) noexcept {
    switch (m) {
    case Modulation::QPSK: return 2;
    case Modulation::QAM16: return 4;
    case Modulation::QAM64: return 6;
    }
    return 0;
}

constexpr std::string_view to_string(ResourceType t) noexcept {
    return t == ResourceType::Semantic ? "semantic" : "non-semantic";
}

constexpr std::string_view to_string(Modulation m) noexcept {
    switch (m) {
    case Modulation::QPSK: return "qpsk";
    case Modulation::QAM16: return "16qam";
    case Modulation::QAM64: return "64qam";
    }
    return "?";
}

} // namespace hscran

#endif // HSCRAN_TYPES_HPP
