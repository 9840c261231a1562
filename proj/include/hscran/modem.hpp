#ifndef HSCRAN_MODEM_HPP
#define HSCRAN_MODEM_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hscran/digipath.hpp"
#include "hscran/error.hpp"
#include "hscran/fft.hpp"
#include "hscran/grid.hpp"
#include "hscran/types.hpp"

namespace hscran {

struct SampleStream {
    std::vector<cplx> samples;
    /// Informational only; the simulator is rate-agnostic.
    double sample_rate_hint = 0.0;
};

inline constexpr std::size_t kPssLength = 127;

struct PssConfig {
    unsigned n_id2 = 0;
};

/// BPSK m-sequence: d(n) = 1 - 2 x((n + 43 n_id2) mod 127),
/// x(i+7) = (x(i+4) + x(i)) mod 2, [x(6)..x(0)] = [1,1,1,0,1,1,0].
inline std::vector<double> generate_pss(const PssConfig& cfg) {
    if (cfg.n_id2 > 2) throw Error(ErrorCode::InvalidConfig, "n_id2 must be 0, 1 or 2");
    std::array<std::uint8_t, kPssLength> x{};
    const std::array<std::uint8_t, 7> init{0, 1, 1, 0, 1, 1, 1}; // x(0)..x(6)
    std::copy(init.begin(), init.end(), x.begin());
    for (std::size_t i = 0; i + 7 < kPssLength; ++i) x[i + 7] = (x[i + 4] + x[i]) % 2;
    std::vector<double> d(kPssLength);
    for (std::size_t n = 0; n < kPssLength; ++n) d[n] = 1.0 - 2.0 * x[(n + 43 * cfg.n_id2) % kPssLength];
    return d;
}

/// First used-subcarrier index of the DC-centered PSS.
inline std::size_t pss_first_subcarrier(const GridConfig& cfg) {
    if (cfg.used_subcarriers < kPssLength) throw Error(ErrorCode::InvalidConfig, "used band narrower than the PSS");
    return (cfg.used_subcarriers - kPssLength) / 2;
}

inline void insert_pss(ResourceGrid& grid, const PssConfig& pss) {
    const auto d = generate_pss(pss);
    const std::size_t k0 = pss_first_subcarrier(grid.config());
    for (std::size_t slot = 0; slot < grid.n_slots(); ++slot) {
        auto row = grid.symbol(slot, kPssSymbol);
        std::fill(row.begin(), row.end(), cplx{});
        for (std::size_t n = 0; n < kPssLength; ++n) row[k0 + n] = d[n];
    }
}

/// FFT bin of used subcarrier k. The lower half of the band sits on negative
/// frequencies, the upper half on positive ones, and DC stays empty.
inline std::size_t subcarrier_bin(const GridConfig& cfg, std::size_t k) {
    const std::size_t half = cfg.used_subcarriers / 2;
    return k < half ? cfg.fft_size - half + k : k - half + 1;
}

namespace detail {

inline void modulate_symbol(Dft& dft, const GridConfig& cfg, std::span<const cplx> res, cplx* out) {
    auto buf = dft.buffer();
    std::fill(buf.begin(), buf.end(), cplx{});
    for (std::size_t k = 0; k < res.size(); ++k) buf[subcarrier_bin(cfg, k)] = res[k];
    dft.inverse();
    std::copy(buf.end() - static_cast<std::ptrdiff_t>(cfg.cp_len), buf.end(), out);
    std::copy(buf.begin(), buf.end(), out + cfg.cp_len);
}

} // namespace detail

/// Unitary IDFT per OFDM symbol with the last cp_len samples prepended.
inline SampleStream ofdm_modulate(const ResourceGrid& grid) {
    const auto& cfg = grid.config();
    Dft dft(cfg.fft_size);
    SampleStream s;
    s.samples.resize(grid.n_symbols() * cfg.samples_per_symbol());
    for (std::size_t i = 0; i < grid.n_symbols(); ++i)
        detail::modulate_symbol(dft, cfg, grid.symbol(i), s.samples.data() + i * cfg.samples_per_symbol());
    return s;
}

inline ResourceGrid ofdm_demodulate(std::span<const cplx> samples, std::size_t offset, std::size_t n_slots,
                                    const GridConfig& cfg) {
    cfg.validate();
    const std::size_t need = n_slots * cfg.samples_per_slot();
    if (offset > samples.size() || samples.size() - offset < need)
        throw Error(ErrorCode::Truncated, "stream holds fewer than " + std::to_string(n_slots) + " slots from offset " +
                                              std::to_string(offset));
    ResourceGrid grid(cfg, n_slots);
    Dft dft(cfg.fft_size);
    auto buf = dft.buffer();
    for (std::size_t i = 0; i < grid.n_symbols(); ++i) {
        const cplx* sym = samples.data() + offset + i * cfg.samples_per_symbol() + cfg.cp_len;
        std::copy(sym, sym + cfg.fft_size, buf.begin());
        dft.forward();
        auto row = grid.symbol(i);
        for (std::size_t k = 0; k < row.size(); ++k) row[k] = buf[subcarrier_bin(cfg, k)];
    }
    return grid;
}

/// Time-domain PSS symbol including its cyclic prefix (the correlation template).
inline std::vector<cplx> pss_time_symbol(const GridConfig& cfg, const PssConfig& pss) {
    std::vector<cplx> res(cfg.used_subcarriers, cplx{});
    const auto d = generate_pss(pss);
    const std::size_t k0 = pss_first_subcarrier(cfg);
    for (std::size_t n = 0; n < kPssLength; ++n) res[k0 + n] = d[n];
    Dft dft(cfg.fft_size);
    std::vector<cplx> out(cfg.samples_per_symbol());
    detail::modulate_symbol(dft, cfg, res, out.data());
    return out;
}

struct SyncOptions {
    /// Minimum peak |c| over mean |c| for a detection. On noise alone |c| is
    /// Rayleigh, so one lag exceeds t times the mean with probability
    /// exp(-pi t^2 / 4); at 5 that is 3e-9, under 1% over a 256-slot capture.
    double threshold = 5.0;
};

struct SyncResult {
    std::size_t offset = 0;
    double peak = 0.0;
    double peak_to_average = 0.0;
};

/// c(t) = sum_n r(t + n) conj(p(n)) for every full-overlap lag t, computed with
/// one zero-padded FFT pair.
inline std::vector<double> pss_correlation(std::span<const cplx> samples, std::span<const cplx> tmpl) {
    if (samples.size() < tmpl.size()) return {};
    std::size_t m = 1;
    while (m < samples.size()) m <<= 1;
    Dft dft(m);
    auto buf = dft.buffer();

    std::fill(buf.begin(), buf.end(), cplx{});
    std::copy(tmpl.begin(), tmpl.end(), buf.begin());
    dft.forward();
    std::vector<cplx> tmpl_f(buf.begin(), buf.end());

    std::fill(buf.begin(), buf.end(), cplx{});
    std::copy(samples.begin(), samples.end(), buf.begin());
    dft.forward();
    for (std::size_t i = 0; i < m; ++i) buf[i] *= std::conj(tmpl_f[i]);
    dft.inverse();

    const double rescale = std::sqrt(static_cast<double>(m));
    std::vector<double> mag(samples.size() - tmpl.size() + 1);
    for (std::size_t t = 0; t < mag.size(); ++t) mag[t] = std::abs(buf[t]) * rescale;
    return mag;
}

/// Timing acquisition on the PSS. Picks the correlation argmax (smallest lag on
/// ties), then steps back whole slots while the earlier slot's PSS still shows at
/// least half the peak, so the burst start is returned rather than a later repeat.
inline SyncResult detect_pss(std::span<const cplx> samples, const GridConfig& cfg, const PssConfig& pss,
                             const SyncOptions& opt = {}) {
    const auto tmpl = pss_time_symbol(cfg, pss);
    if (samples.size() < tmpl.size()) throw Error(ErrorCode::Truncated, "stream shorter than one OFDM symbol");
    const auto mag = pss_correlation(samples, tmpl);

    std::size_t best = 0;
    double sum = 0.0;
    for (std::size_t t = 0; t < mag.size(); ++t) {
        sum += mag[t];
        if (mag[t] > mag[best]) best = t;
    }
    const double mean = sum / static_cast<double>(mag.size());
    SyncResult r{best, mag[best], mean > 0.0 ? mag[best] / mean : 0.0};
    if (!(r.peak_to_average >= opt.threshold))
        throw Error(ErrorCode::NotFound, "PSS peak-to-average " + std::to_string(r.peak_to_average) +
                                             " below threshold " + std::to_string(opt.threshold));
    const std::size_t slot = cfg.samples_per_slot();
    while (r.offset >= slot && mag[r.offset - slot] >= 0.5 * mag[best]) r.offset -= slot;
    return r;
}

// Pilots: symbol 1 of every slot carries the same QPSK sequence drawn from a
// 16-bit Fibonacci LFSR (x^16 + x^14 + x^13 + x^11 + 1) seeded with pilot_seed.

inline constexpr std::uint16_t kDefaultPilotSeed = 0xACE1;

inline Bits lfsr16_bits(std::uint16_t seed, std::size_t n) {
    if (seed == 0) throw Error(ErrorCode::InvalidConfig, "pilot LFSR seed must be nonzero");
    Bits out(n);
    std::uint16_t s = seed;
    for (auto& b : out) {
        b = static_cast<std::uint8_t>(s & 1u);
        const unsigned fb = (s ^ (s >> 2) ^ (s >> 3) ^ (s >> 5)) & 1u;
        s = static_cast<std::uint16_t>((s >> 1) | (fb << 15));
    }
    return out;
}

inline std::vector<cplx> pilot_sequence(const GridConfig& cfg, std::uint16_t seed) {
    return qam_modulate(lfsr16_bits(seed, 2 * cfg.used_subcarriers), Modulation::QPSK);
}

inline void insert_pilots(ResourceGrid& grid, std::uint16_t seed) {
    const auto pilots = pilot_sequence(grid.config(), seed);
    for (std::size_t slot = 0; slot < grid.n_slots(); ++slot) {
        auto row = grid.symbol(slot, kPilotSymbol);
        std::copy(pilots.begin(), pilots.end(), row.begin());
    }
}

struct EqualizerOptions {
    /// Half-width (in subcarriers) of the moving average applied to the per-
    /// subcarrier least-squares estimates. 0 keeps the raw LS estimate.
    std::size_t smoothing = 6;
};

struct Equalized {
    ResourceGrid grid;
    /// Channel estimate per [slot][subcarrier].
    std::vector<cplx> channel;
    /// Nonzero where the estimate is zero and the REs could not be equalized.
    std::vector<std::uint8_t> zero_channel;

    bool is_zero(std::size_t slot, std::size_t sc) const {
        return zero_channel[slot * grid.config().used_subcarriers + sc] != 0;
    }
};

/// Per-slot single-tap equalization from the pilot symbol. Symbols after the
/// pilot are divided by the slot's estimate; zero estimates leave zeros and are
/// flagged.
inline Equalized equalize(const ResourceGrid& rx, std::uint16_t pilot_seed, const EqualizerOptions& opt = {}) {
    const auto& cfg = rx.config();
    const std::size_t nsc = cfg.used_subcarriers;
    const auto pilots = pilot_sequence(cfg, pilot_seed);
    Equalized eq{rx, std::vector<cplx>(rx.n_slots() * nsc), std::vector<std::uint8_t>(rx.n_slots() * nsc, 0)};
    std::vector<cplx> ls(nsc);
    for (std::size_t slot = 0; slot < rx.n_slots(); ++slot) {
        const auto y = rx.symbol(slot, kPilotSymbol);
        for (std::size_t k = 0; k < nsc; ++k) ls[k] = y[k] / pilots[k];
        cplx* h = eq.channel.data() + slot * nsc;
        for (std::size_t k = 0; k < nsc; ++k) {
            const std::size_t lo = k >= opt.smoothing ? k - opt.smoothing : 0;
            const std::size_t hi = std::min(nsc - 1, k + opt.smoothing);
            cplx acc{};
            for (std::size_t j = lo; j <= hi; ++j) acc += ls[j];
            h[k] = acc / static_cast<double>(hi - lo + 1);
            if (ls[k] == cplx{} || h[k] == cplx{}) eq.zero_channel[slot * nsc + k] = 1;
        }
        for (std::size_t sym = kControlSymbol; sym < cfg.symbols_per_slot; ++sym) {
            auto row = eq.grid.symbol(slot, sym);
            for (std::size_t k = 0; k < nsc; ++k)
                row[k] = eq.zero_channel[slot * nsc + k] ? cplx{} : row[k] / h[k];
        }
    }
    return eq;
}

/// Throws ZeroChannel if any subcarrier of the allocation lost its channel in
/// the first n_slots slots.
inline void require_channel(const Equalized& eq, const RbAllocation& alloc, std::size_t n_slots) {
    for (std::size_t slot = 0; slot < std::min(n_slots, eq.grid.n_slots()); ++slot)
        for (std::size_t k = alloc.first_subcarrier(); k < alloc.first_subcarrier() + alloc.n_subcarriers(); ++k)
            if (eq.is_zero(slot, k))
                throw Error(ErrorCode::ZeroChannel, "zero channel estimate on subcarrier " + std::to_string(k) +
                                                        " in slot " + std::to_string(slot));
}

} // namespace hscran

#endif // HSCRAN_MODEM_HPP
