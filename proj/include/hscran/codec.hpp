#ifndef HSCRAN_CODEC_HPP
#define HSCRAN_CODEC_HPP

#include <algorithm>
#include <array>
#include <cfenv>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "hscran/error.hpp"
#include "hscran/image.hpp"
#include "hscran/sempath.hpp"

namespace hscran {

enum class CodecKind { Builtin, Plugin };

struct CodecSpec {
    CodecKind kind = CodecKind::Builtin;
    /// Shell command line that starts the plugin (Plugin kind only).
    std::string plugin_cmd;
    double target_cbr = 0.0417;
    /// SNR the encoder conditions on; 0 when there is no feedback.
    double snr_hint_db = 0.0;
    bool strict_plugin = false;
    /// Frame geometry of the semantic service, known to both ends of the link.
    std::size_t frame_width = 256;
    std::size_t frame_height = 256;

    void validate() const {
        if (!(target_cbr > 0.0 && target_cbr <= 0.5))
            throw Error(ErrorCode::InvalidConfig, "target_cbr must be in (0, 0.5]");
    }
};

/// Complex symbols k for a frame: round(cbr * W * H * 3). Encoders emit 2k reals.
inline std::size_t symbol_budget(double target_cbr, std::size_t width, std::size_t height) {
    return static_cast<std::size_t>(std::llround(target_cbr * static_cast<double>(width * height * 3)));
}

namespace dct_detail {

inline constexpr std::size_t kBlock = 8;
inline constexpr std::size_t kCoeffs = 64;

struct Tables {
    std::array<std::array<double, kBlock>, kBlock> basis{}; // basis[u][x]
    std::array<std::size_t, kCoeffs> zigzag{};             // scan position -> row-major index

    Tables() {
        for (std::size_t u = 0; u < kBlock; ++u) {
            const double a = u == 0 ? std::sqrt(1.0 / kBlock) : std::sqrt(2.0 / kBlock);
            for (std::size_t x = 0; x < kBlock; ++x)
                basis[u][x] = a * std::cos((2.0 * x + 1.0) * u * std::numbers::pi / (2.0 * kBlock));
        }
        std::size_t n = 0;
        for (std::size_t s = 0; s < 2 * kBlock - 1; ++s) {
            for (std::size_t i = 0; i < kBlock; ++i) {
                // odd diagonals run top-right to bottom-left, even ones the other way
                const std::size_t row = (s % 2 == 0) ? s - i : i;
                const std::size_t col = s - row;
                if (s < i || row >= kBlock || col >= kBlock) continue;
                zigzag[n++] = row * kBlock + col;
            }
        }
    }
};

inline const Tables& tables() {
    static const Tables t;
    return t;
}

inline void forward(const std::array<double, kCoeffs>& in, std::array<double, kCoeffs>& out) {
    const auto& c = tables().basis;
    std::array<double, kCoeffs> tmp{};
    for (std::size_t y = 0; y < kBlock; ++y)
        for (std::size_t u = 0; u < kBlock; ++u) {
            double acc = 0.0;
            for (std::size_t x = 0; x < kBlock; ++x) acc += c[u][x] * in[y * kBlock + x];
            tmp[y * kBlock + u] = acc;
        }
    for (std::size_t v = 0; v < kBlock; ++v)
        for (std::size_t u = 0; u < kBlock; ++u) {
            double acc = 0.0;
            for (std::size_t y = 0; y < kBlock; ++y) acc += c[v][y] * tmp[y * kBlock + u];
            out[v * kBlock + u] = acc;
        }
}

inline void inverse(const std::array<double, kCoeffs>& in, std::array<double, kCoeffs>& out) {
    const auto& c = tables().basis;
    std::array<double, kCoeffs> tmp{};
    for (std::size_t v = 0; v < kBlock; ++v)
        for (std::size_t x = 0; x < kBlock; ++x) {
            double acc = 0.0;
            for (std::size_t u = 0; u < kBlock; ++u) acc += c[u][x] * in[v * kBlock + u];
            tmp[v * kBlock + x] = acc;
        }
    for (std::size_t y = 0; y < kBlock; ++y)
        for (std::size_t x = 0; x < kBlock; ++x) {
            double acc = 0.0;
            for (std::size_t v = 0; v < kBlock; ++v) acc += c[v][y] * tmp[v * kBlock + x];
            out[y * kBlock + x] = acc;
        }
}

struct Layout {
    std::size_t blocks_x = 0, blocks_y = 0, n_blocks = 0;
    std::size_t base = 0, extra = 0;

    Layout(std::size_t width, std::size_t height, std::size_t n_reals) {
        blocks_x = (width + kBlock - 1) / kBlock;
        blocks_y = (height + kBlock - 1) / kBlock;
        n_blocks = 3 * blocks_x * blocks_y;
        base = n_reals / n_blocks;
        extra = n_reals % n_blocks;
        if (base > kCoeffs || (base == kCoeffs && extra > 0))
            throw Error(ErrorCode::InvalidConfig, "coefficient budget exceeds 64 per block");
    }

    std::size_t kept(std::size_t block) const { return base + (block < extra ? 1 : 0); }
};

} // namespace dct_detail

/// Deterministic transform codec: centered pixels, 8x8 orthonormal DCT per
/// channel, zig-zag scan, and a global budget of 2k reals spread evenly over
/// blocks (channel-major, raster order; the first R mod n_blocks blocks keep one
/// extra coefficient). Frames are edge-replicated to multiples of 8.
inline SemanticVector builtin_encode(const ImageFrame& img, const CodecSpec& spec) {
    spec.validate();
    if (img.width == 0 || img.height == 0 || !img.valid()) throw Error(ErrorCode::BadDimensions, "empty frame");
    using namespace dct_detail;
    const std::size_t n_reals = 2 * symbol_budget(spec.target_cbr, img.width, img.height);
    const Layout lay(img.width, img.height, n_reals);
    const auto& zz = tables().zigzag;

    SemanticVector out{{}, img.width, img.height};
    out.values.reserve(n_reals);
    std::array<double, kCoeffs> px{}, co{};
    std::size_t block = 0;
    for (std::size_t ch = 0; ch < 3; ++ch)
        for (std::size_t by = 0; by < lay.blocks_y; ++by)
            for (std::size_t bx = 0; bx < lay.blocks_x; ++bx, ++block) {
                const std::size_t keep = lay.kept(block);
                if (keep == 0) continue;
                for (std::size_t y = 0; y < kBlock; ++y)
                    for (std::size_t x = 0; x < kBlock; ++x) {
                        const std::size_t sx = std::min(bx * kBlock + x, img.width - 1);
                        const std::size_t sy = std::min(by * kBlock + y, img.height - 1);
                        px[y * kBlock + x] = img.at(sx, sy, ch) / 255.0 - 0.5;
                    }
                forward(px, co);
                for (std::size_t i = 0; i < keep; ++i) out.values.push_back(co[zz[i]]);
            }
    return out;
}

inline ImageFrame builtin_decode(std::span<const double> values, std::size_t width, std::size_t height,
                                 const CodecSpec& spec) {
    spec.validate();
    if (width == 0 || height == 0) throw Error(ErrorCode::BadDimensions, "empty frame");
    using namespace dct_detail;
    const std::size_t n_reals = 2 * symbol_budget(spec.target_cbr, width, height);
    if (values.size() != n_reals)
        throw Error(ErrorCode::LengthMismatch, "expected " + std::to_string(n_reals) + " values, got " +
                                                   std::to_string(values.size()));
    const Layout lay(width, height, n_reals);
    const auto& zz = tables().zigzag;

    const int saved_round = std::fegetround();
    std::fesetround(FE_TONEAREST);
    ImageFrame img(width, height);
    std::array<double, kCoeffs> px{}, co{};
    std::size_t block = 0, pos = 0;
    for (std::size_t ch = 0; ch < 3; ++ch)
        for (std::size_t by = 0; by < lay.blocks_y; ++by)
            for (std::size_t bx = 0; bx < lay.blocks_x; ++bx, ++block) {
                co.fill(0.0);
                const std::size_t keep = lay.kept(block);
                for (std::size_t i = 0; i < keep; ++i) co[zz[i]] = values[pos++];
                inverse(co, px);
                for (std::size_t y = 0; y < kBlock; ++y)
                    for (std::size_t x = 0; x < kBlock; ++x) {
                        const std::size_t sx = bx * kBlock + x, sy = by * kBlock + y;
                        if (sx >= width || sy >= height) continue;
                        const double v = std::clamp((px[y * kBlock + x] + 0.5) * 255.0, 0.0, 255.0);
                        img.at(sx, sy, ch) = static_cast<std::uint8_t>(std::nearbyint(v));
                    }
            }
    std::fesetround(saved_round);
    return img;
}

} // namespace hscran

#endif // HSCRAN_CODEC_HPP
