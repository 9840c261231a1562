#ifndef HSCRAN_SEMPATH_HPP
#define HSCRAN_SEMPATH_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "hscran/error.hpp"
#include "hscran/types.hpp"

namespace hscran {

/// Output of a semantic codec: the flattened real code and codec metadata.
struct SemanticVector {
    std::vector<double> values;
    std::size_t width = 0;
    std::size_t height = 0;
};

struct NormalizedSymbols {
    std::vector<cplx> symbols;
    /// Scale applied to the packed symbols.
    double gain = 1.0;
};

/// Adjacent reals become (re, im) of one point; an odd tail is padded with 0.
inline std::vector<cplx> pack_pairs(std::span<const double> v) {
    std::vector<cplx> s((v.size() + 1) / 2);
    for (std::size_t i = 0; i < s.size(); ++i)
        s[i] = {v[2 * i], 2 * i + 1 < v.size() ? v[2 * i + 1] : 0.0};
    return s;
}

/// Packs pairs and scales to unit mean power per complex symbol,
/// g = sqrt(k / sum |s_i|^2). An all-zero input keeps g = 1.
inline NormalizedSymbols pack_and_normalize(std::span<const double> v) {
    NormalizedSymbols out{pack_pairs(v), 1.0};
    double energy = 0.0;
    for (const auto& s : out.symbols) energy += std::norm(s);
    if (energy > 0.0) {
        out.gain = std::sqrt(static_cast<double>(out.symbols.size()) / energy);
        for (auto& s : out.symbols) s *= out.gain;
    }
    return out;
}

inline std::vector<double> denormalize_and_unpack(std::span<const cplx> s, double gain, std::size_t original_len) {
    if (!(gain > 0.0)) throw Error(ErrorCode::InvalidGain, "semantic gain must be positive");
    if (original_len > 2 * s.size()) throw Error(ErrorCode::LengthMismatch, "original length exceeds 2x symbols");
    std::vector<double> v(original_len);
    for (std::size_t i = 0; i < original_len; ++i) {
        const cplx& z = s[i / 2];
        v[i] = ((i % 2) ? z.imag() : z.real()) / gain;
    }
    return v;
}

} // namespace hscran

#endif // HSCRAN_SEMPATH_HPP
