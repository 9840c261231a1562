#ifndef HSCRAN_CHANNEL_HPP
#define HSCRAN_CHANNEL_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "hscran/rng.hpp"
#include "hscran/types.hpp"

namespace hscran {

enum class Fading { None, FlatRayleigh };

struct ChannelSpec {
    /// +inf disables noise.
    double snr_db = std::numeric_limits<double>::infinity();
    Fading fading = Fading::None;
    std::uint64_t fading_seed = 0;
    std::size_t delay_samples = 0;
    std::uint64_t seed = 0;
};

inline double mean_power(std::span<const cplx> x) {
    if (x.empty()) return 0.0;
    double acc = 0.0;
    for (const auto& v : x) acc += std::norm(v);
    return acc / static_cast<double>(x.size());
}

/// Block-fading coefficient for the whole burst: 1, or CN(0,1) drawn from fading_seed.
inline cplx channel_gain(const ChannelSpec& spec) {
    if (spec.fading == Fading::None) return {1.0, 0.0};
    Rng rng(spec.fading_seed);
    return rng.complex_normal(1.0);
}

/// Prepends the delay, applies the burst gain, then adds complex AWGN whose
/// variance is set from the mean power of the faded input samples. The noise
/// covers the delay region too.
inline std::vector<cplx> apply_channel(std::span<const cplx> input, const ChannelSpec& spec) {
    const cplx h = channel_gain(spec);
    std::vector<cplx> out(spec.delay_samples + input.size(), cplx{});
    for (std::size_t i = 0; i < input.size(); ++i) out[spec.delay_samples + i] = h * input[i];
    if (std::isinf(spec.snr_db) && spec.snr_db > 0) return out;

    const double p_sig = mean_power(std::span<const cplx>(out).subspan(spec.delay_samples));
    const double var = p_sig / std::pow(10.0, spec.snr_db / 10.0);
    Rng rng(spec.seed);
    for (auto& v : out) v += rng.complex_normal(var);
    return out;
}

} // namespace hscran

#endif // HSCRAN_CHANNEL_HPP
