// hscran: end-to-end runs, BER calibration and SNR sweeps.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "run_config.hpp"

namespace {

using namespace hscran;
using namespace hscran::cli;
namespace fs = std::filesystem;

/// Flags bound to a scratch config; after parsing, only the flags actually
/// given are copied over the file/default values.
struct FlagOverlay {
    RunConfig flags;
    std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> copies;

    template <class T>
    CLI::Option* add(CLI::App* app, const std::string& name, T RunConfig::*field, const std::string& help) {
        auto* opt = app->add_option(name, flags.*field, help);
        copies.emplace_back(opt, [this, field](RunConfig& c) { c.*field = flags.*field; });
        return opt;
    }

    CLI::Option* add_grid(CLI::App* app, const std::string& name, std::size_t GridConfig::*field,
                          const std::string& help) {
        auto* opt = app->add_option(name, flags.grid.*field, help);
        copies.emplace_back(opt, [this, field](RunConfig& c) { c.grid.*field = flags.grid.*field; });
        return opt;
    }

    void flag(CLI::App* app, const std::string& name, bool RunConfig::*field, const std::string& help) {
        auto* opt = app->add_flag(name, flags.*field, help);
        copies.emplace_back(opt, [this, field](RunConfig& c) { c.*field = flags.*field; });
    }

    RunConfig resolve(const std::string& config_path) const {
        RunConfig c;
        if (!config_path.empty()) apply_json(c, load_json_file(config_path));
        for (const auto& [opt, copy] : copies)
            if (opt->count() > 0) copy(c);
        return c;
    }
};

void add_run_options(CLI::App* app, FlagOverlay& o, bool with_snr_list) {
    o.add(app, "--image", &RunConfig::images, "input frame(s), PPM or PNG; a test card is used when absent");
    o.add(app, "--text", &RunConfig::text, "text message for the non-semantic path");
    if (!with_snr_list) o.add(app, "--snr-db", &RunConfig::snr_db, "channel SNR in dB (inf disables noise)");
    o.add(app, "--fading", &RunConfig::fading, "none | rayleigh")->check(CLI::IsMember({"none", "rayleigh"}));
    o.add(app, "--fading-seed", &RunConfig::fading_seed, "seed of the block-fading draw");
    o.add(app, "--delay", &RunConfig::delay, "leading delay in samples");
    o.add(app, "--seed", &RunConfig::seed, "noise seed");
    o.add_grid(app, "--fft-size", &GridConfig::fft_size, "FFT size");
    o.add_grid(app, "--used-subcarriers", &GridConfig::used_subcarriers, "occupied subcarriers (multiple of 12)");
    o.add_grid(app, "--cp-len", &GridConfig::cp_len, "cyclic prefix length");
    o.add_grid(app, "--symbols-per-slot", &GridConfig::symbols_per_slot, "OFDM symbols per slot");
    o.add(app, "--codec", &RunConfig::codec, "builtin | plugin")->check(CLI::IsMember({"builtin", "plugin"}));
    o.add(app, "--plugin-cmd", &RunConfig::plugin_cmd, "shell command that starts the codec plugin");
    o.flag(app, "--strict-plugin", &RunConfig::strict_plugin, "fail instead of falling back to the builtin codec");
    o.add(app, "--target-cbr", &RunConfig::target_cbr, "channel bandwidth ratio");
    o.add(app, "--snr-hint-db", &RunConfig::snr_hint_db, "SNR hint passed to the codec");
    o.add(app, "--modulation", &RunConfig::modulation, "qpsk | 16qam | 64qam (text path)")
        ->check(CLI::IsMember({"qpsk", "16qam", "64qam"}));
    o.add(app, "--n-id2", &RunConfig::n_id2, "PSS sequence index 0..2");
    o.add(app, "--pilot-seed", &RunConfig::pilot_seed, "pilot LFSR seed");
    if (with_snr_list) {
        o.add(app, "--snr-db", &RunConfig::snr_list, "comma separated SNR points")->delimiter(',');
        o.add(app, "--trials", &RunConfig::trials, "seeded trials per SNR point");
    } else {
        o.add(app, "--out", &RunConfig::out, "output directory");
        o.add(app, "--image-format", &RunConfig::image_format, "ppm | png")->check(CLI::IsMember({"ppm", "png"}));
    }
}

std::vector<ImageFrame> load_frames(const RunConfig& c) {
    std::vector<ImageFrame> frames;
    for (const auto& p : c.images) frames.push_back(read_image(p));
    if (frames.empty()) frames.push_back(test_card());
    for (const auto& f : frames)
        if (f.width != frames[0].width || f.height != frames[0].height)
            throw Error(ErrorCode::BadDimensions, "all frames must share one geometry");
    return frames;
}

std::vector<ServiceRequest> build_requests(const std::vector<ImageFrame>& frames, const std::string& text) {
    std::vector<ServiceRequest> reqs;
    for (const auto& f : frames) reqs.push_back(ServiceRequest::video(f));
    if (!text.empty()) reqs.push_back(ServiceRequest::text(text));
    return reqs;
}

std::string fmt(double v, int prec = 4) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    std::ostringstream s;
    s << std::fixed << std::setprecision(prec) << v;
    return s.str();
}

int cmd_simulate(const RunConfig& c, bool timings) {
    const auto t0 = std::chrono::steady_clock::now();
    c.grid.validate();
    const auto frames = load_frames(c);
    const auto reqs = build_requests(frames, c.text);
    const auto spec = codec_spec(c, frames[0].width, frames[0].height);
    const auto out = run_burst(reqs, c.grid, spec, channel_spec(c, c.snr_db, c.seed), link_options(c));
    const auto t1 = std::chrono::steady_clock::now();

    fs::create_directories(c.out);
    std::size_t frame_i = 0;
    std::string rx_text;
    bool text_ok = false;
    if (out.rx)
        for (const auto& p : out.rx->payloads) {
            if (p.frame) {
                const auto ext = c.image_format == "png" ? ".png" : ".ppm";
                write_image(fs::path(c.out) / ("rx_frame_" + std::to_string(frame_i++) + ext), *p.frame);
            }
            if (p.text) rx_text = *p.text;
        }
    {
        std::ofstream t(fs::path(c.out) / "rx_text.txt", std::ios::binary);
        t << rx_text;
    }

    const LinkReport& r = out.report;
    double psnr_sum = 0.0, ms_sum = 0.0;
    std::size_t n_sem = 0;
    for (const auto& p : r.payloads) {
        if (p.type == ResourceType::Semantic) {
            psnr_sum += *p.psnr_db;
            ms_sum += *p.ms_ssim;
            ++n_sem;
        } else {
            text_ok = text_ok || p.text_ok.value_or(false);
        }
    }
    const double mean_psnr = n_sem ? psnr_sum / double(n_sem) : 0.0;
    const double mean_ms = n_sem ? ms_sum / double(n_sem) : 0.0;
    const bool success = r.sync_found && r.decoded() > 0;

    nlohmann::json summary{{"success", success},
                           {"payloads", r.payloads.size()},
                           {"decoded", r.decoded()},
                           {"text_ok", text_ok}};
    if (n_sem) {
        summary["mean_psnr_db"] = hscran::detail::number_or_null(mean_psnr);
        summary["mean_ms_ssim"] = hscran::detail::number_or_null(mean_ms);
    }
    const nlohmann::json report{{"schema_version", kReportSchemaVersion},
                                {"config", to_json(c)},
                                {"runs", nlohmann::json::array({to_json(r)})},
                                {"summary", summary}};
    {
        std::ofstream j(fs::path(c.out) / "report.json", std::ios::binary);
        j << report.dump(2) << '\n';
    }
    if (timings) {
        const auto ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        std::ofstream j(fs::path(c.out) / "timings.json", std::ios::binary);
        j << nlohmann::json{{"simulate_ms", ms}}.dump(2) << '\n';
    }

    std::cout << "sync=" << (r.sync_found ? "ok" : "lost:" + r.sync_error) << " offset=" << r.sync_offset_found
              << "/" << r.sync_offset_true << " dci=" << r.dcis_recovered << "/" << r.dcis_sent
              << " decoded=" << r.decoded() << "/" << r.payloads.size();
    if (n_sem) std::cout << " psnr=" << fmt(mean_psnr, 2) << "dB ms_ssim=" << fmt(mean_ms);
    std::cout << " text=" << (text_ok ? "ok" : "fail") << " snr=" << fmt(c.snr_db, 1) << "dB\n";
    for (const auto& n : r.codec_notes) std::cerr << "note: " << n << '\n';
    return success ? 0 : 1;
}

int cmd_ber(const std::string& modulation, const std::vector<double>& snrs, std::size_t n_bits,
            std::uint64_t seed) {
    const Modulation m = parse_modulation(modulation);
    std::cout << "snr_db,ber,n_bits,theory_ber\n";
    for (std::size_t i = 0; i < snrs.size(); ++i) {
        const auto p = simulate_awgn_ber(m, snrs[i], n_bits, seed + i);
        std::cout << fmt(snrs[i], 2) << ',' << std::setprecision(8) << std::scientific << p.ber()
                  << std::defaultfloat << ',' << p.n_bits << ',';
        if (m == Modulation::QPSK) std::cout << std::scientific << qpsk_theory_ber(snrs[i]) << std::defaultfloat;
        std::cout << '\n';
    }
    return 0;
}

int cmd_sweep(const RunConfig& c) {
    c.grid.validate();
    const auto frames = load_frames(c);
    const auto reqs = build_requests(frames, c.text);
    const auto spec = codec_spec(c, frames[0].width, frames[0].height);
    const auto link = link_options(c);
    std::cout << "snr_db,psnr_db,ms_ssim,text_ok_rate\n";
    for (double snr : c.snr_list) {
        double psnr_sum = 0.0, ms_sum = 0.0;
        std::size_t n_sem = 0, text_ok = 0, n_text = 0;
        for (std::size_t t = 0; t < c.trials; ++t) {
            ChannelSpec ch = channel_spec(c, snr, c.seed + t);
            ch.fading_seed = c.fading_seed + t;
            const auto out = run_burst(reqs, c.grid, spec, ch, link);
            for (const auto& p : out.report.payloads) {
                if (p.type == ResourceType::Semantic) {
                    psnr_sum += *p.psnr_db;
                    ms_sum += *p.ms_ssim;
                    ++n_sem;
                } else {
                    ++n_text;
                    text_ok += p.text_ok.value_or(false);
                }
            }
        }
        std::cout << fmt(snr, 2) << ',' << (n_sem ? fmt(psnr_sum / double(n_sem)) : "") << ','
                  << (n_sem ? fmt(ms_sum / double(n_sem), 6) : "") << ','
                  << (n_text ? fmt(double(text_ok) / double(n_text)) : "") << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hybrid semantic/non-semantic OFDM downlink link simulator"};
    app.require_subcommand(1);

    auto* sim = app.add_subcommand("simulate", "one burst: transmit, channel, receive, report");
    FlagOverlay sim_flags;
    std::string sim_config;
    bool timings = false;
    sim->add_option("--config", sim_config, "JSON config file (flags override it)");
    sim->add_flag("--timings", timings, "also write timings.json (kept out of report.json)");
    add_run_options(sim, sim_flags, false);

    auto* ber = app.add_subcommand("ber", "AWGN BER calibration of the digital path, CSV on stdout");
    std::string ber_mod = "qpsk";
    std::vector<double> ber_snrs{0.0, 4.0, 8.0};
    std::size_t ber_bits = 1000000;
    std::uint64_t ber_seed = 1;
    ber->add_option("--modulation", ber_mod, "qpsk | 16qam | 64qam")->check(CLI::IsMember({"qpsk", "16qam", "64qam"}));
    ber->add_option("--snr-db", ber_snrs, "comma separated Eb/N0 points in dB")->delimiter(',');
    ber->add_option("--n-bits", ber_bits, "bits per point");
    ber->add_option("--seed", ber_seed, "seed of the first point");

    auto* sweep = app.add_subcommand("sweep", "per-SNR averages over seeded trials, CSV on stdout");
    FlagOverlay sweep_flags;
    std::string sweep_config;
    sweep->add_option("--config", sweep_config, "JSON config file (flags override it)");
    add_run_options(sweep, sweep_flags, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sim) return cmd_simulate(sim_flags.resolve(sim_config), timings);
        if (*ber) return cmd_ber(ber_mod, ber_snrs, ber_bits, ber_seed);
        if (*sweep) return cmd_sweep(sweep_flags.resolve(sweep_config));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
