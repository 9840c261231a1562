#ifndef HSCRAN_TESTS_SUPPORT_HPP
#define HSCRAN_TESTS_SUPPORT_HPP

// Small hand-rolled generators for property tests. Every generator takes the
// engine explicitly so a failing case can be replayed from its seed.

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "hscran/hscran.hpp"

namespace hscran {

inline void PrintTo(ErrorCode c, std::ostream* os) { *os << to_string(c); }

} // namespace hscran

namespace hscran::test {

using Engine = std::mt19937_64;

inline std::size_t uniform(Engine& e, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(e);
}

inline double uniform_real(Engine& e, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(e);
}

inline Bits random_bits(Engine& e, std::size_t n) {
    Bits b(n);
    for (auto& x : b) x = static_cast<std::uint8_t>(e() & 1u);
    return b;
}

inline std::vector<std::uint8_t> random_bytes(Engine& e, std::size_t n) {
    std::vector<std::uint8_t> b(n);
    for (auto& x : b) x = static_cast<std::uint8_t>(e());
    return b;
}

inline std::vector<cplx> random_symbols(Engine& e, std::size_t n) {
    std::normal_distribution<double> g;
    std::vector<cplx> v(n);
    for (auto& x : v) x = {g(e), g(e)};
    return v;
}

/// Valid grid configurations with at least `min_rbs` RBs and a used band that
/// leaves the DC bin free. 12 RBs is the floor for carrying a control region.
inline GridConfig random_grid_config(Engine& e, std::size_t min_rbs = 1) {
    static constexpr std::size_t ffts[] = {128, 256, 512};
    GridConfig c;
    do c.fft_size = ffts[uniform(e, 0, 2)];
    while ((c.fft_size - 1) / kRbSubcarriers < min_rbs);
    const std::size_t max_rbs = (c.fft_size - 1) / kRbSubcarriers;
    c.used_subcarriers = kRbSubcarriers * uniform(e, min_rbs, max_rbs);
    c.cp_len = uniform(e, 0, c.fft_size / 4);
    c.symbols_per_slot = uniform(e, 4, 14);
    return c;
}

inline Dci random_dci(Engine& e) {
    Dci d;
    d.resource_type = static_cast<ResourceType>(e() & 1u);
    d.rb_start = static_cast<std::uint32_t>(uniform(e, 0, 255));
    d.rb_count = static_cast<std::uint32_t>(uniform(e, 0, 255));
    d.modulation = static_cast<Modulation>(uniform(e, 0, 2));
    d.payload_len = static_cast<std::uint32_t>(uniform(e, 0, 0xFFFF));
    d.gain_q = static_cast<std::uint32_t>(uniform(e, 0, 0xFFFF));
    return d;
}

inline ImageFrame random_image(Engine& e, std::size_t w, std::size_t h) {
    ImageFrame f(w, h);
    for (auto& p : f.data) p = static_cast<std::uint8_t>(e());
    return f;
}

/// Smooth synthetic frame: gradients plus a few low-frequency ripples, closer
/// to natural-image statistics than uniform noise.
inline ImageFrame smooth_image(Engine& e, std::size_t w, std::size_t h) {
    ImageFrame f(w, h);
    const double a = uniform_real(e, 0.02, 0.1), b = uniform_real(e, 0.02, 0.1);
    for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x < w; ++x)
            for (std::size_t c = 0; c < 3; ++c) {
                const double v = 128.0 + 60.0 * std::sin(a * double(x) + double(c)) + 50.0 * std::cos(b * double(y));
                f.at(x, y, c) = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
            }
    return f;
}

inline std::filesystem::path data_dir() { return HSCRAN_TEST_DATA_DIR; }

inline std::vector<ImageFrame> corpus() {
    std::vector<std::filesystem::path> paths;
    for (const auto& entry : std::filesystem::directory_iterator(data_dir() / "corpus"))
        if (entry.path().extension() == ".ppm") paths.push_back(entry.path());
    std::sort(paths.begin(), paths.end());
    std::vector<ImageFrame> out;
    for (const auto& p : paths) out.push_back(read_ppm(p));
    return out;
}

} // namespace hscran::test

#endif // HSCRAN_TESTS_SUPPORT_HPP
