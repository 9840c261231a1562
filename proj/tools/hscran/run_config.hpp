#ifndef HSCRAN_TOOLS_RUN_CONFIG_HPP
#define HSCRAN_TOOLS_RUN_CONFIG_HPP

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hscran/hscran.hpp"

namespace hscran::cli {

/// Everything a run depends on. Resolved as flag > config file > default and
/// echoed verbatim into the report.
struct RunConfig {
    std::vector<std::string> images;
    std::string text = "hello from the non-semantic path";
    double snr_db = 30.0;
    std::string fading = "none";
    std::uint64_t fading_seed = 7;
    std::size_t delay = 0;
    std::uint64_t seed = 1;
    GridConfig grid{};
    std::string codec = "builtin";
    std::string plugin_cmd;
    bool strict_plugin = false;
    double target_cbr = 0.0417;
    double snr_hint_db = 0.0;
    std::string modulation = "qpsk";
    unsigned n_id2 = 0;
    std::uint16_t pilot_seed = kDefaultPilotSeed;
    std::string out = "hscran_out";
    std::string image_format = "ppm";
    std::size_t trials = 10;
    std::vector<double> snr_list{0.0, 5.0, 10.0, 20.0};
};

inline Modulation parse_modulation(const std::string& s) {
    if (s == "qpsk") return Modulation::QPSK;
    if (s == "16qam") return Modulation::QAM16;
    if (s == "64qam") return Modulation::QAM64;
    throw Error(ErrorCode::InvalidConfig, "unknown modulation '" + s + "'");
}

inline Fading parse_fading(const std::string& s) {
    if (s == "none") return Fading::None;
    if (s == "rayleigh") return Fading::FlatRayleigh;
    throw Error(ErrorCode::InvalidConfig, "unknown fading '" + s + "'");
}

inline CodecSpec codec_spec(const RunConfig& c, std::size_t width, std::size_t height) {
    CodecSpec s;
    if (c.codec == "plugin") s.kind = CodecKind::Plugin;
    else if (c.codec != "builtin") throw Error(ErrorCode::InvalidConfig, "unknown codec '" + c.codec + "'");
    s.plugin_cmd = c.plugin_cmd;
    s.strict_plugin = c.strict_plugin;
    s.target_cbr = c.target_cbr;
    s.snr_hint_db = c.snr_hint_db;
    s.frame_width = width;
    s.frame_height = height;
    s.validate();
    return s;
}

inline LinkOptions link_options(const RunConfig& c) {
    LinkOptions o;
    o.pss.n_id2 = c.n_id2;
    o.pilot_seed = c.pilot_seed;
    o.text_modulation = parse_modulation(c.modulation);
    return o;
}

inline ChannelSpec channel_spec(const RunConfig& c, double snr_db, std::uint64_t seed) {
    return {snr_db, parse_fading(c.fading), c.fading_seed, c.delay, seed};
}

inline nlohmann::json snr_json(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

inline nlohmann::json to_json(const RunConfig& c) {
    nlohmann::json snrs = nlohmann::json::array();
    for (double v : c.snr_list) snrs.push_back(snr_json(v));
    return {{"images", c.images},
            {"text", c.text},
            {"snr_db", snr_json(c.snr_db)},
            {"fading", c.fading},
            {"fading_seed", c.fading_seed},
            {"delay", c.delay},
            {"seed", c.seed},
            {"grid",
             {{"fft_size", c.grid.fft_size},
              {"used_subcarriers", c.grid.used_subcarriers},
              {"cp_len", c.grid.cp_len},
              {"symbols_per_slot", c.grid.symbols_per_slot}}},
            {"codec", c.codec},
            {"plugin_cmd", c.plugin_cmd},
            {"strict_plugin", c.strict_plugin},
            {"target_cbr", c.target_cbr},
            {"snr_hint_db", c.snr_hint_db},
            {"modulation", c.modulation},
            {"n_id2", c.n_id2},
            {"pilot_seed", c.pilot_seed},
            {"out", c.out},
            {"image_format", c.image_format},
            {"trials", c.trials},
            {"snr_list", snrs}};
}

namespace detail {

inline double json_double(const nlohmann::json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        return std::stod(s);
    }
    return j.get<double>();
}

} // namespace detail

/// Applies the keys present in a JSON config file; unknown keys are rejected.
inline void apply_json(RunConfig& c, const nlohmann::json& j) {
    for (const auto& [key, v] : j.items()) {
        if (key == "images") c.images = v.get<std::vector<std::string>>();
        else if (key == "text") c.text = v.get<std::string>();
        else if (key == "snr_db") c.snr_db = detail::json_double(v);
        else if (key == "fading") c.fading = v.get<std::string>();
        else if (key == "fading_seed") c.fading_seed = v.get<std::uint64_t>();
        else if (key == "delay") c.delay = v.get<std::size_t>();
        else if (key == "seed") c.seed = v.get<std::uint64_t>();
        else if (key == "grid") {
            for (const auto& [gk, gv] : v.items()) {
                if (gk == "fft_size") c.grid.fft_size = gv.get<std::size_t>();
                else if (gk == "used_subcarriers") c.grid.used_subcarriers = gv.get<std::size_t>();
                else if (gk == "cp_len") c.grid.cp_len = gv.get<std::size_t>();
                else if (gk == "symbols_per_slot") c.grid.symbols_per_slot = gv.get<std::size_t>();
                else throw Error(ErrorCode::InvalidConfig, "unknown grid key '" + gk + "'");
            }
        } else if (key == "codec") c.codec = v.get<std::string>();
        else if (key == "plugin_cmd") c.plugin_cmd = v.get<std::string>();
        else if (key == "strict_plugin") c.strict_plugin = v.get<bool>();
        else if (key == "target_cbr") c.target_cbr = v.get<double>();
        else if (key == "snr_hint_db") c.snr_hint_db = v.get<double>();
        else if (key == "modulation") c.modulation = v.get<std::string>();
        else if (key == "n_id2") c.n_id2 = v.get<unsigned>();
        else if (key == "pilot_seed") c.pilot_seed = v.get<std::uint16_t>();
        else if (key == "out") c.out = v.get<std::string>();
        else if (key == "image_format") c.image_format = v.get<std::string>();
        else if (key == "trials") c.trials = v.get<std::size_t>();
        else if (key == "snr_list") {
            c.snr_list.clear();
            for (const auto& s : v) c.snr_list.push_back(detail::json_double(s));
        } else
            throw Error(ErrorCode::InvalidConfig, "unknown config key '" + key + "'");
    }
}

inline nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open config " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, path + ": " + e.what());
    }
}

/// Deterministic 256x256-style test card used when no image is supplied:
/// color ramps, a checkerboard quadrant and a filled disc.
inline ImageFrame test_card(std::size_t w = 256, std::size_t h = 256) {
    ImageFrame img(w, h);
    for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x < w; ++x) {
            const double fx = double(x) / double(w), fy = double(y) / double(h);
            double r = 255.0 * fx, g = 255.0 * fy, b = 255.0 * (1.0 - fx) * (1.0 - fy);
            if (x >= w / 2 && y >= h / 2 && ((x / 16 + y / 16) % 2 == 0)) r = g = b = 230.0;
            const double dx = fx - 0.3, dy = fy - 0.7;
            if (dx * dx + dy * dy < 0.02) {
                r = 250.0;
                g = 200.0;
                b = 40.0;
            }
            img.at(x, y, 0) = static_cast<std::uint8_t>(std::lround(r));
            img.at(x, y, 1) = static_cast<std::uint8_t>(std::lround(g));
            img.at(x, y, 2) = static_cast<std::uint8_t>(std::lround(b));
        }
    return img;
}

} // namespace hscran::cli

#endif // HSCRAN_TOOLS_RUN_CONFIG_HPP
