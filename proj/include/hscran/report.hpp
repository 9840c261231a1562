#ifndef HSCRAN_REPORT_HPP
#define HSCRAN_REPORT_HPP

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hscran/channel.hpp"
#include "hscran/metrics.hpp"
#include "hscran/pipeline.hpp"

namespace hscran {

inline constexpr int kReportSchemaVersion = 1;

struct PayloadReport {
    std::size_t index = 0;
    ResourceType type = ResourceType::NonSemantic;
    std::size_t rb_start = 0, rb_count = 0, n_symbols = 0;
    std::string status = "dropped";
    std::string error;
    // semantic
    std::optional<double> cbr, psnr_db, ms_ssim, vector_rel_error;
    std::size_t ms_ssim_scales = 0;
    std::uint32_t gain_q = 0;
    // non-semantic
    std::optional<bool> text_ok;
    std::optional<double> ber;
    std::size_t bit_errors = 0, bits = 0;
};

/// Scored outcome of one burst. Every transmitted payload appears exactly once.
struct LinkReport {
    bool sync_found = false;
    std::string sync_error;
    std::size_t sync_offset_found = 0;
    std::size_t sync_offset_true = 0;
    double sync_peak_to_average = 0.0;
    std::size_t burst_slots = 0;
    std::size_t dcis_sent = 0;
    std::size_t dcis_recovered = 0;
    std::size_t control_crc_failures = 0;
    std::vector<PayloadReport> payloads;
    std::vector<std::string> codec_notes;
    double snr_db = 0.0;
    std::uint64_t channel_seed = 0;
    std::uint64_t fading_seed = 0;

    std::size_t decoded() const {
        std::size_t n = 0;
        for (const auto& p : payloads) n += p.status == "ok";
        return n;
    }
};

/// Image the receiver presents when a semantic payload is lost: an empty (all
/// zero) frame buffer of the session geometry.
inline ImageFrame concealment_frame(std::size_t w, std::size_t h) { return ImageFrame(w, h, 0); }

inline double relative_error(std::span<const double> rx, std::span<const double> tx) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < tx.size(); ++i) {
        const double r = i < rx.size() ? rx[i] : 0.0;
        num += (r - tx[i]) * (r - tx[i]);
        den += tx[i] * tx[i];
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

/// Scores a receive result (or a sync failure when rx is empty) against the
/// transmit ground truth. Receiver output never depends on this step.
inline LinkReport score_link(const TxRecord& tx, const RxResult* rx, const ChannelSpec& ch,
                             const std::string& sync_error = {}) {
    LinkReport r;
    r.sync_found = rx != nullptr;
    r.sync_error = sync_error;
    r.sync_offset_true = ch.delay_samples;
    r.burst_slots = tx.n_slots;
    r.dcis_sent = tx.payloads.size();
    r.codec_notes = tx.codec_notes;
    r.snr_db = ch.snr_db;
    r.channel_seed = ch.seed;
    r.fading_seed = ch.fading_seed;
    if (rx) {
        r.sync_offset_found = rx->sync.offset;
        r.sync_peak_to_average = rx->sync.peak_to_average;
        r.dcis_recovered = rx->dcis_recovered;
        r.control_crc_failures = rx->control_crc_failures;
        for (const auto& n : rx->codec_notes) r.codec_notes.push_back(n);
    }

    for (std::size_t i = 0; i < tx.payloads.size(); ++i) {
        const TxPayload& t = tx.payloads[i];
        PayloadReport p;
        p.index = i;
        p.type = t.type;
        p.rb_start = t.alloc.rb_start;
        p.rb_count = t.alloc.rb_count;
        p.n_symbols = t.n_symbols;
        p.gain_q = t.dci.gain_q;
        p.error = rx ? "DciLost" : "SyncLost";

        const RxPayload* got = nullptr;
        if (rx)
            for (const auto& q : rx->payloads)
                if (q.position == i) got = &q;
        if (got) {
            p.status = std::string(to_string(got->status));
            p.error = got->error;
        }

        if (t.type == ResourceType::Semantic) {
            const auto& src = *t.source_frame;
            p.cbr = measure_cbr(t.n_symbols, src.width, src.height);
            const bool ok = got && got->status == PayloadStatus::Ok && got->frame;
            const ImageFrame shown = ok ? *got->frame : concealment_frame(src.width, src.height);
            p.psnr_db = psnr(src, shown);
            const auto ms = ms_ssim(src, shown);
            p.ms_ssim = ms.score;
            p.ms_ssim_scales = ms.scales;
            if (ok) p.vector_rel_error = relative_error(got->semantic_values, t.semantic_values);
        } else {
            p.text_ok = got && got->status == PayloadStatus::Ok && got->text == t.text;
            if (got && !got->hard_bits.empty()) {
                p.bits = t.frame_bits.size();
                for (std::size_t b = 0; b < p.bits; ++b)
                    p.bit_errors += b >= got->hard_bits.size() || got->hard_bits[b] != t.frame_bits[b];
                p.ber = static_cast<double>(p.bit_errors) / static_cast<double>(p.bits);
            }
        }
        r.payloads.push_back(std::move(p));
    }
    return r;
}

namespace detail {

inline nlohmann::json number_or_null(const std::optional<double>& v) {
    if (!v) return nullptr;
    if (std::isinf(*v)) return *v > 0 ? "inf" : "-inf";
    if (std::isnan(*v)) return "nan";
    return *v;
}

} // namespace detail

inline nlohmann::json to_json(const LinkReport& r) {
    using nlohmann::json;
    json payloads = json::array();
    for (const auto& p : r.payloads) {
        json j{{"index", p.index},       {"resource_type", static_cast<int>(p.type)},
               {"kind", to_string(p.type)}, {"rb_start", p.rb_start},
               {"rb_count", p.rb_count}, {"n_symbols", p.n_symbols},
               {"status", p.status},     {"error", p.error}};
        if (p.type == ResourceType::Semantic) {
            j["cbr"] = detail::number_or_null(p.cbr);
            j["psnr_db"] = detail::number_or_null(p.psnr_db);
            j["ms_ssim"] = detail::number_or_null(p.ms_ssim);
            j["ms_ssim_scales"] = p.ms_ssim_scales;
            j["gain_q"] = p.gain_q;
            j["vector_rel_error"] = detail::number_or_null(p.vector_rel_error);
        } else {
            j["text_ok"] = p.text_ok.value_or(false);
            j["ber"] = detail::number_or_null(p.ber);
            j["bit_errors"] = p.bit_errors;
            j["bits"] = p.bits;
        }
        payloads.push_back(std::move(j));
    }
    return json{{"sync",
                 {{"found", r.sync_found},
                  {"error", r.sync_error},
                  {"offset_found", r.sync_offset_found},
                  {"offset_true", r.sync_offset_true},
                  {"peak_to_average", r.sync_peak_to_average}}},
                {"burst_slots", r.burst_slots},
                {"dcis_sent", r.dcis_sent},
                {"dcis_recovered", r.dcis_recovered},
                {"control_crc_failures", r.control_crc_failures},
                {"snr_db", detail::number_or_null(r.snr_db)},
                {"seeds", {{"channel", r.channel_seed}, {"fading", r.fading_seed}}},
                {"codec_notes", r.codec_notes},
                {"payloads", std::move(payloads)}};
}

} // namespace hscran

#endif // HSCRAN_REPORT_HPP
