#ifndef HSCRAN_SEMANTIC_CODEC_HPP
#define HSCRAN_SEMANTIC_CODEC_HPP

#include <chrono>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "hscran/codec.hpp"
#include "hscran/error.hpp"
#include "hscran/image.hpp"
#include "hscran/plugin.hpp"
#include "hscran/wire.hpp"

namespace hscran {

inline bool is_plugin_failure(ErrorCode c) {
    return c == ErrorCode::PluginTimeout || c == ErrorCode::ProtocolViolation || c == ErrorCode::PluginCrash;
}

/// Dispatches to the builtin codec or an external plugin. Plugin failures fall
/// back to the builtin codec (recorded in `notes()`) unless strict_plugin is set.
class SemanticCodec {
public:
    explicit SemanticCodec(CodecSpec spec, std::chrono::milliseconds plugin_timeout = std::chrono::seconds(30))
        : spec_(std::move(spec)) {
        spec_.validate();
        if (spec_.kind == CodecKind::Plugin) {
            if (spec_.plugin_cmd.empty()) throw Error(ErrorCode::InvalidConfig, "plugin codec needs a command");
            plugin_ = std::make_unique<PluginClient>(spec_.plugin_cmd, plugin_timeout);
        }
    }

    const CodecSpec& spec() const noexcept { return spec_; }

    /// Real-valued code of exactly 2k values.
    std::vector<double> encode(const ImageFrame& img) {
        if (plugin_) {
            try {
                return plugin_encode(img);
            } catch (const Error& e) {
                fallback_or_throw(e, "encode");
            }
        }
        return builtin_encode(img, spec_).values;
    }

    ImageFrame decode(std::span<const double> values, std::size_t width, std::size_t height) {
        if (plugin_) {
            try {
                return plugin_decode(values, width, height);
            } catch (const Error& e) {
                fallback_or_throw(e, "decode");
            }
        }
        return builtin_decode(values, width, height, spec_);
    }

    const std::vector<std::string>& notes() const noexcept { return notes_; }

private:
    void fallback_or_throw(const Error& e, const char* what) {
        if (!is_plugin_failure(e.code()) || spec_.strict_plugin) throw;
        notes_.push_back(std::string("plugin ") + what + " failed (" + e.what() + "); fell back to builtin codec");
    }

    std::vector<double> plugin_encode(const ImageFrame& img) {
        wire::EncodeRequest req{static_cast<std::uint32_t>(img.width), static_cast<std::uint32_t>(img.height),
                                static_cast<float>(spec_.snr_hint_db), static_cast<float>(spec_.target_cbr),
                                img.data};
        const auto resp = plugin_->encode(req);
        const std::size_t expect = 2 * symbol_budget(spec_.target_cbr, img.width, img.height);
        if (resp.values.size() != expect)
            wire::violation("encode returned " + std::to_string(resp.values.size()) + " values, expected " +
                            std::to_string(expect));
        return {resp.values.begin(), resp.values.end()};
    }

    ImageFrame plugin_decode(std::span<const double> values, std::size_t width, std::size_t height) {
        wire::DecodeRequest req{static_cast<std::uint32_t>(width), static_cast<std::uint32_t>(height),
                                static_cast<float>(spec_.snr_hint_db), static_cast<std::uint32_t>(values.size()),
                                std::vector<float>(values.begin(), values.end())};
        auto resp = plugin_->decode(req);
        ImageFrame img(width, height);
        if (resp.pixels.size() != img.data.size()) wire::violation("decode returned wrong pixel count");
        img.data = std::move(resp.pixels);
        return img;
    }

    CodecSpec spec_;
    std::unique_ptr<PluginClient> plugin_;
    std::vector<std::string> notes_;
};

} // namespace hscran

#endif // HSCRAN_SEMANTIC_CODEC_HPP
