#include <gtest/gtest.h>

#include "support.hpp"

using namespace hscran;
using hscran::test::Engine;

namespace {

std::vector<double> random_values(Engine& e, std::size_t n, double lo = -10.0, double hi = 10.0) {
    std::vector<double> v(n);
    for (auto& x : v) x = test::uniform_real(e, lo, hi);
    return v;
}

double rel_error(std::span<const double> a, std::span<const double> b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += (a[i] - b[i]) * (a[i] - b[i]);
        den += b[i] * b[i];
    }
    return std::sqrt(num / den);
}

} // namespace

TEST(Sempath, PacksAdjacentPairs) {
    const double v[] = {1, 2, 3, 4};
    EXPECT_EQ(pack_pairs(v), (std::vector<cplx>{{1, 2}, {3, 4}}));
    const double odd[] = {1, 2, 3};
    EXPECT_EQ(pack_pairs(odd), (std::vector<cplx>{{1, 2}, {3, 0}}));
}

TEST(Sempath, ThreeFourNormalisesToUnitPower) {
    const double v[] = {3, 4};
    const auto n = pack_and_normalize(v);
    EXPECT_DOUBLE_EQ(n.gain, 0.2);
    ASSERT_EQ(n.symbols.size(), 1u);
    EXPECT_NEAR(n.symbols[0].real(), 0.6, 1e-15);
    EXPECT_NEAR(n.symbols[0].imag(), 0.8, 1e-15);
}

TEST(Sempath, AllZeroKeepsUnitGain) {
    const double v[] = {0, 0, 0, 0};
    const auto n = pack_and_normalize(v);
    EXPECT_EQ(n.gain, 1.0);
    EXPECT_EQ(n.symbols, (std::vector<cplx>(2)));
}

TEST(SempathProperty, MeanPowerIsOne) {
    Engine e(1);
    for (int trial = 0; trial < 500; ++trial) {
        const auto v = random_values(e, test::uniform(e, 1, 2000), -test::uniform_real(e, 0.01, 50), 50);
        const auto n = pack_and_normalize(v);
        double p = 0.0;
        for (const auto& s : n.symbols) p += std::norm(s);
        EXPECT_NEAR(p / double(n.symbols.size()), 1.0, 1e-12);
    }
}

TEST(Sempath, ExactGainRoundTrip) {
    Engine e(2);
    const auto v = random_values(e, 10000);
    const auto n = pack_and_normalize(v);
    const auto back = denormalize_and_unpack(n.symbols, n.gain, v.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) worst = std::max(worst, std::abs(back[i] - v[i]));
    EXPECT_LE(worst, 1e-6);
}

TEST(Sempath, OddLengthDropsTrailingPad) {
    const double v[] = {1, -2, 3};
    const auto n = pack_and_normalize(v);
    const auto back = denormalize_and_unpack(n.symbols, n.gain, 3);
    ASSERT_EQ(back.size(), 3u);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(back[i], v[i], 1e-12);
}

TEST(Sempath, Errors) {
    const cplx s[] = {{1, 1}};
    auto code = [&](double g, std::size_t len) {
        try {
            denormalize_and_unpack(s, g, len);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::Io;
    };
    EXPECT_EQ(code(0.0, 2), ErrorCode::InvalidGain);
    EXPECT_EQ(code(-1.0, 2), ErrorCode::InvalidGain);
    EXPECT_EQ(code(1.0, 3), ErrorCode::LengthMismatch);
}

// The receiver divides by the dequantized gain g_hat while the transmitter used
// the exact g. Component-wise v_rx = v * g / g_hat, so the relative vector error
// is |g - g_hat| / g_hat <= (0.5/1024) / g_hat. That is <= 2^-10 whenever g_hat >= 0.5.
TEST(SempathProperty, QuantisedGainErrorBound) {
    Engine e(3);
    for (int trial = 0; trial < 300; ++trial) {
        const double amp = test::uniform_real(e, 0.05, 4.0);
        const auto v = random_values(e, test::uniform(e, 2, 4000), -amp, amp);
        const auto n = pack_and_normalize(v);
        const double g_hat = dequantize_gain(quantize_gain(n.gain));
        const auto back = denormalize_and_unpack(n.symbols, g_hat, v.size());
        const double err = rel_error(back, v);
        EXPECT_LE(err, (0.5 / 1024.0) / g_hat * (1 + 1e-9));
        if (g_hat >= 0.5) EXPECT_LE(err, std::ldexp(1.0, -10));
    }
}

// Transmitting with the quantized gain itself removes the mismatch: the
// receiver inverts exactly what was applied.
TEST(SempathProperty, TransmitWithQuantisedGainIsExact) {
    Engine e(4);
    for (int trial = 0; trial < 200; ++trial) {
        const auto v = random_values(e, test::uniform(e, 2, 4000));
        const double g_hat = dequantize_gain(quantize_gain(pack_and_normalize(v).gain));
        auto s = pack_pairs(v);
        for (auto& x : s) x *= g_hat;
        EXPECT_LE(rel_error(denormalize_and_unpack(s, g_hat, v.size()), v), 1e-12);
    }
}

TEST(Sempath, AwgnMseScalesWithInverseGainSquared) {
    Engine e(5);
    const auto v = random_values(e, 200000, -3, 3);
    const auto n = pack_and_normalize(v);
    const double noise_var = 0.1; // per complex symbol
    Rng rng(6);
    auto rx = n.symbols;
    for (auto& s : rx) s += rng.complex_normal(noise_var);
    const auto back = denormalize_and_unpack(rx, n.gain, v.size());
    double mse = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) mse += (back[i] - v[i]) * (back[i] - v[i]);
    mse /= double(v.size());
    // each real component carries half the complex noise variance
    EXPECT_NEAR(mse / (noise_var / 2.0 / (n.gain * n.gain)), 1.0, 0.05);
}
