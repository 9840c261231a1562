#ifndef HSCRAN_METRICS_HPP
#define HSCRAN_METRICS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "hscran/error.hpp"
#include "hscran/image.hpp"

namespace hscran {

/// Complex channel symbols per source sample (W x H x 3).
inline double measure_cbr(std::size_t n_complex_symbols, std::size_t width, std::size_t height) {
    const std::size_t samples = width * height * ImageFrame::channels;
    if (samples == 0) throw Error(ErrorCode::BadDimensions, "zero-sized frame");
    return static_cast<double>(n_complex_symbols) / static_cast<double>(samples);
}

inline void require_same_shape(const ImageFrame& a, const ImageFrame& b) {
    if (a.width != b.width || a.height != b.height || !a.valid() || !b.valid())
        throw Error(ErrorCode::LengthMismatch, "image shapes differ");
}

/// 10 log10(255^2 / MSE) over all samples; +inf for identical images.
inline double psnr(const ImageFrame& a, const ImageFrame& b) {
    require_same_shape(a, b);
    double se = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        const double d = static_cast<double>(a.data[i]) - static_cast<double>(b.data[i]);
        se += d * d;
    }
    if (se == 0.0) return std::numeric_limits<double>::infinity();
    const double mse = se / static_cast<double>(a.data.size());
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

/// Single-channel double plane.
struct Plane {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<double> v;

    double& operator()(std::size_t x, std::size_t y) { return v[y * width + x]; }
    double operator()(std::size_t x, std::size_t y) const { return v[y * width + x]; }
};

inline Plane luma(const ImageFrame& img) {
    Plane p{img.width, img.height, std::vector<double>(img.width * img.height)};
    for (std::size_t i = 0; i < p.v.size(); ++i)
        p.v[i] = 0.299 * img.data[3 * i] + 0.587 * img.data[3 * i + 1] + 0.114 * img.data[3 * i + 2];
    return p;
}

namespace ssim_detail {

inline constexpr std::size_t kWindow = 11;
inline constexpr double kSigma = 1.5;
inline constexpr double kC1 = (0.01 * 255.0) * (0.01 * 255.0);
inline constexpr double kC2 = (0.03 * 255.0) * (0.03 * 255.0);
inline constexpr std::array<double, 5> kWeights{0.0448, 0.2856, 0.3001, 0.2363, 0.1333};

inline std::array<double, kWindow> gaussian() {
    std::array<double, kWindow> g{};
    double sum = 0.0;
    for (std::size_t i = 0; i < kWindow; ++i) {
        const double x = static_cast<double>(i) - 5.0;
        g[i] = std::exp(-x * x / (2.0 * kSigma * kSigma));
        sum += g[i];
    }
    for (auto& v : g) v /= sum;
    return g;
}

// Separable Gaussian filter over full-overlap positions only.
inline Plane filter_valid(const Plane& in) {
    static const auto g = gaussian();
    const std::size_t ow = in.width - kWindow + 1;
    const std::size_t oh = in.height - kWindow + 1;
    Plane tmp{ow, in.height, std::vector<double>(ow * in.height)};
    for (std::size_t y = 0; y < in.height; ++y)
        for (std::size_t x = 0; x < ow; ++x) {
            double acc = 0.0;
            for (std::size_t i = 0; i < kWindow; ++i) acc += g[i] * in(x + i, y);
            tmp(x, y) = acc;
        }
    Plane out{ow, oh, std::vector<double>(ow * oh)};
    for (std::size_t y = 0; y < oh; ++y)
        for (std::size_t x = 0; x < ow; ++x) {
            double acc = 0.0;
            for (std::size_t i = 0; i < kWindow; ++i) acc += g[i] * tmp(x, y + i);
            out(x, y) = acc;
        }
    return out;
}

inline Plane product(const Plane& a, const Plane& b) {
    Plane p{a.width, a.height, std::vector<double>(a.v.size())};
    for (std::size_t i = 0; i < p.v.size(); ++i) p.v[i] = a.v[i] * b.v[i];
    return p;
}

inline Plane downsample(const Plane& in) {
    Plane out{in.width / 2, in.height / 2, {}};
    out.v.resize(out.width * out.height);
    for (std::size_t y = 0; y < out.height; ++y)
        for (std::size_t x = 0; x < out.width; ++x)
            out(x, y) = 0.25 * (in(2 * x, 2 * y) + in(2 * x + 1, 2 * y) + in(2 * x, 2 * y + 1) +
                                in(2 * x + 1, 2 * y + 1));
    return out;
}

struct ScaleStats {
    double cs = 0.0;   // mean contrast-structure term
    double ssim = 0.0; // mean luminance x contrast-structure
};

inline ScaleStats scale_stats(const Plane& x, const Plane& y) {
    const Plane mx = filter_valid(x);
    const Plane my = filter_valid(y);
    const Plane exx = filter_valid(product(x, x));
    const Plane eyy = filter_valid(product(y, y));
    const Plane exy = filter_valid(product(x, y));
    double cs_sum = 0.0, ssim_sum = 0.0;
    for (std::size_t i = 0; i < mx.v.size(); ++i) {
        const double sxx = exx.v[i] - mx.v[i] * mx.v[i];
        const double syy = eyy.v[i] - my.v[i] * my.v[i];
        const double sxy = exy.v[i] - mx.v[i] * my.v[i];
        const double cs = (2.0 * sxy + kC2) / (sxx + syy + kC2);
        const double l = (2.0 * mx.v[i] * my.v[i] + kC1) / (mx.v[i] * mx.v[i] + my.v[i] * my.v[i] + kC1);
        cs_sum += cs;
        ssim_sum += l * cs;
    }
    const double n = static_cast<double>(mx.v.size());
    return {cs_sum / n, ssim_sum / n};
}

} // namespace ssim_detail

/// Number of dyadic scales whose coarsest plane still fits the 11-tap window, capped at 5.
inline std::size_t ms_ssim_scales(std::size_t width, std::size_t height) {
    std::size_t d = std::min(width, height);
    std::size_t m = 0;
    while (m < ssim_detail::kWeights.size() && d >= ssim_detail::kWindow) {
        ++m;
        d /= 2;
    }
    return m;
}

struct MsSsim {
    double score = 0.0;
    /// Scales actually used; fewer than 5 means the weights were renormalized.
    std::size_t scales = 0;
};

/// Single-scale SSIM on luma (the last-scale term of MS-SSIM).
inline double ssim(const ImageFrame& a, const ImageFrame& b) {
    require_same_shape(a, b);
    if (std::min(a.width, a.height) < ssim_detail::kWindow) throw Error(ErrorCode::TooSmall, "image below 11x11");
    return ssim_detail::scale_stats(luma(a), luma(b)).ssim;
}

/// Five-scale MS-SSIM on luma. Negative per-scale terms are clamped to 0 so the
/// score stays in [0, 1]. Images with min side < 176 use fewer scales.
inline MsSsim ms_ssim(const ImageFrame& a, const ImageFrame& b) {
    require_same_shape(a, b);
    const std::size_t m = ms_ssim_scales(a.width, a.height);
    if (m == 0) throw Error(ErrorCode::TooSmall, "image below 11x11");
    double wsum = 0.0;
    for (std::size_t j = 0; j < m; ++j) wsum += ssim_detail::kWeights[j];

    Plane x = luma(a), y = luma(b);
    double score = 1.0;
    for (std::size_t j = 0; j < m; ++j) {
        const auto st = ssim_detail::scale_stats(x, y);
        const double w = ssim_detail::kWeights[j] / wsum;
        const double term = (j + 1 == m) ? st.ssim : st.cs;
        score *= std::pow(std::max(term, 0.0), w);
        if (j + 1 < m) {
            x = ssim_detail::downsample(x);
            y = ssim_detail::downsample(y);
        }
    }
    return {score, m};
}

} // namespace hscran

#endif // HSCRAN_METRICS_HPP
