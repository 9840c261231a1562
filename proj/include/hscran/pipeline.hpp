#ifndef HSCRAN_PIPELINE_HPP
#define HSCRAN_PIPELINE_HPP

#include <algorithm>
#include <array>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hscran/codec.hpp"
#include "hscran/dci.hpp"
#include "hscran/digipath.hpp"
#include "hscran/error.hpp"
#include "hscran/grid.hpp"
#include "hscran/image.hpp"
#include "hscran/modem.hpp"
#include "hscran/semantic_codec.hpp"
#include "hscran/sempath.hpp"

namespace hscran {

struct ServiceRequest {
    std::variant<ImageFrame, std::string> content;
    std::optional<ResourceType> hint{};

    static ServiceRequest video(ImageFrame f) { return {std::move(f), std::nullopt}; }
    static ServiceRequest text(std::string t) { return {std::move(t), std::nullopt}; }

    bool is_video() const { return std::holds_alternative<ImageFrame>(content); }
};

/// Video frames go semantic, text goes non-semantic, unless a hint overrides.
inline ResourceType classify(const ServiceRequest& req) {
    if (req.hint) return *req.hint;
    return req.is_video() ? ResourceType::Semantic : ResourceType::NonSemantic;
}

/// Link parameters both ends agree on in advance.
struct LinkOptions {
    PssConfig pss{};
    std::uint16_t pilot_seed = kDefaultPilotSeed;
    Modulation text_modulation = Modulation::QPSK;
    EqualizerOptions equalizer{};
    SyncOptions sync{};
    /// Upper bound on slots the receiver demodulates from one capture.
    std::size_t max_slots = 256;
};

/// Transmit-side ground truth for one payload, used only for scoring.
struct TxPayload {
    ResourceType type = ResourceType::NonSemantic;
    RbAllocation alloc{};
    Dci dci{};
    std::size_t n_symbols = 0;
    std::size_t slots_needed = 0;
    // semantic
    std::optional<ImageFrame> source_frame;
    std::vector<double> semantic_values;
    double exact_gain = 0.0;
    double sent_gain = 0.0;
    // non-semantic
    std::string text;
    Bits frame_bits;
};

struct TxRecord {
    GridConfig grid{};
    std::size_t n_slots = 0;
    std::vector<TxPayload> payloads;
    std::vector<std::string> codec_notes;
};

struct Burst {
    ResourceGrid grid;
    TxRecord record;
};

/// Builds the frequency-domain burst: per slot PSS, pilots and the control
/// region (the same DCIs repeated in every slot), then the payload REs.
/// Semantic symbols are scaled by the quantized gain carried in the DCI so the
/// receiver inverts exactly the scale that was applied.
inline Burst build_burst(std::span<const ServiceRequest> requests, const GridConfig& cfg, SemanticCodec& codec,
                         const LinkOptions& opt = {}) {
    cfg.validate();
    if (requests.empty() || requests.size() > kMaxPayloadsPerBurst)
        throw Error(ErrorCode::InvalidRequest, "a burst carries 1 to 4 payloads");

    TxRecord rec;
    rec.grid = cfg;
    std::vector<std::vector<cplx>> symbols;
    std::vector<AllocationRequest> alloc_reqs;

    for (const auto& req : requests) {
        TxPayload p;
        p.type = classify(req);
        if (p.type == ResourceType::Semantic) {
            if (!req.is_video()) throw Error(ErrorCode::InvalidRequest, "no semantic codec for text payloads");
            const auto& frame = std::get<ImageFrame>(req.content);
            const auto& spec = codec.spec();
            if (frame.width != spec.frame_width || frame.height != spec.frame_height)
                throw Error(ErrorCode::InvalidRequest, "frame geometry differs from the codec session geometry");
            p.source_frame = frame;
            p.semantic_values = codec.encode(frame);
            const auto norm = pack_and_normalize(p.semantic_values);
            p.exact_gain = norm.gain;
            p.dci.gain_q = quantize_gain(norm.gain);
            p.sent_gain = dequantize_gain(p.dci.gain_q);
            auto s = pack_pairs(p.semantic_values);
            for (auto& v : s) v *= p.sent_gain;
            p.dci.payload_len = static_cast<std::uint32_t>(s.size());
            symbols.push_back(std::move(s));
        } else {
            if (req.is_video()) throw Error(ErrorCode::InvalidRequest, "no digital path for video payloads");
            p.text = std::get<std::string>(req.content);
            const auto frame = frame_bytes({reinterpret_cast<const std::uint8_t*>(p.text.data()), p.text.size()});
            p.frame_bits = bytes_to_bits(frame);
            p.dci.modulation = opt.text_modulation;
            p.dci.payload_len = static_cast<std::uint32_t>(frame.size());
            symbols.push_back(qam_modulate(p.frame_bits, opt.text_modulation));
        }
        if (p.dci.payload_len > 0xFFFF) throw Error(ErrorCode::InvalidRequest, "payload exceeds DCI length field");
        p.dci.resource_type = p.type;
        p.n_symbols = symbols.back().size();
        alloc_reqs.push_back({p.type, p.n_symbols, std::nullopt});
        rec.payloads.push_back(std::move(p));
    }

    const auto plan = allocate(alloc_reqs, cfg);
    rec.n_slots = plan.burst_slots;
    std::vector<Dci> dcis;
    for (std::size_t i = 0; i < rec.payloads.size(); ++i) {
        auto& p = rec.payloads[i];
        p.alloc = plan.allocations[i];
        p.slots_needed = plan.slots_needed[i];
        p.dci.rb_start = static_cast<std::uint32_t>(p.alloc.rb_start);
        p.dci.rb_count = static_cast<std::uint32_t>(p.alloc.rb_count);
        dcis.push_back(p.dci);
    }

    ResourceGrid grid(cfg, rec.n_slots);
    insert_pss(grid, opt.pss);
    insert_pilots(grid, opt.pilot_seed);
    const auto control = qam_modulate(pack_control_region(dcis, 2 * cfg.used_subcarriers), Modulation::QPSK);
    for (std::size_t slot = 0; slot < rec.n_slots; ++slot) {
        auto row = grid.symbol(slot, kControlSymbol);
        std::copy(control.begin(), control.end(), row.begin());
    }
    for (std::size_t i = 0; i < rec.payloads.size(); ++i) map_payload(grid, rec.payloads[i].alloc, symbols[i]);
    rec.codec_notes = codec.notes();
    return {std::move(grid), std::move(rec)};
}

inline std::pair<SampleStream, TxRecord> transmit(std::span<const ServiceRequest> requests, const GridConfig& cfg,
                                                  SemanticCodec& codec, const LinkOptions& opt = {}) {
    auto burst = build_burst(requests, cfg, codec, opt);
    return {ofdm_modulate(burst.grid), std::move(burst.record)};
}

enum class PayloadStatus { Ok, FrameCorrupt, Dropped };

constexpr std::string_view to_string(PayloadStatus s) noexcept {
    switch (s) {
    case PayloadStatus::Ok: return "ok";
    case PayloadStatus::FrameCorrupt: return "FrameCorrupt";
    case PayloadStatus::Dropped: return "dropped";
    }
    return "?";
}

struct RxPayload {
    /// DCI candidate position the payload was announced in.
    std::size_t position = 0;
    Dci dci{};
    PayloadStatus status = PayloadStatus::Dropped;
    std::string error;
    std::vector<double> semantic_values;
    std::optional<ImageFrame> frame;
    Bits hard_bits;
    std::optional<std::string> text;
};

struct RxResult {
    SyncResult sync{};
    std::size_t slots_demodulated = 0;
    std::size_t burst_slots = 0;
    std::size_t dcis_recovered = 0;
    /// Non-empty control candidates (summed over slots) that failed CRC.
    std::size_t control_crc_failures = 0;
    std::vector<RxPayload> payloads;
    std::vector<std::string> codec_notes;
};

namespace detail {

inline std::size_t payload_symbols(const Dci& d) {
    if (d.resource_type == ResourceType::Semantic) return d.payload_len;
    return qam_symbols_for_bits(std::size_t{d.payload_len} * 8, d.modulation);
}

inline void decode_payload(RxPayload& out, const Equalized& eq, SemanticCodec& codec, std::size_t n_slots) {
    const auto& cfg = eq.grid.config();
    const Dci& d = out.dci;
    const RbAllocation alloc{d.rb_start, d.rb_count, d.resource_type, out.position};
    check_allocation(cfg, alloc);
    const std::size_t n_sym = payload_symbols(d);
    const std::size_t slots = slots_for(cfg, alloc.rb_count, n_sym);
    if (slots > n_slots)
        throw Error(ErrorCode::Truncated, "payload needs " + std::to_string(slots) + " slots, capture holds " +
                                              std::to_string(n_slots));
    require_channel(eq, alloc, slots);
    const auto symbols = demap_payload(eq.grid, alloc, n_sym);

    if (d.resource_type == ResourceType::Semantic) {
        if (d.gain_q == 0) throw Error(ErrorCode::InvalidGain, "semantic DCI carries gain_q = 0");
        out.semantic_values = denormalize_and_unpack(symbols, dequantize_gain(d.gain_q), 2 * n_sym);
        out.frame = codec.decode(out.semantic_values, codec.spec().frame_width, codec.spec().frame_height);
        out.status = PayloadStatus::Ok;
        return;
    }
    out.hard_bits = qam_demodulate(symbols, d.modulation);
    out.hard_bits.resize(std::size_t{d.payload_len} * 8);
    try {
        const auto bytes = unframe_text(out.hard_bits);
        out.text = std::string(bytes.begin(), bytes.end());
        out.status = PayloadStatus::Ok;
    } catch (const Error& e) {
        out.status = PayloadStatus::FrameCorrupt;
        out.error = std::string(to_string(e.code()));
    }
}

} // namespace detail

/// Receive chain: PSS timing, OFDM demodulation of every whole slot in the
/// capture, pilot equalization, blind DCI decoding (first valid copy of each
/// candidate position across slots wins), then per-DCI dispatch on the resource
/// type. Payload failures are recorded and never stop other payloads.
inline RxResult receive(std::span<const cplx> samples, const GridConfig& cfg, SemanticCodec& codec,
                        const LinkOptions& opt = {}) {
    cfg.validate();
    RxResult rx;
    rx.sync = detect_pss(samples, cfg, opt.pss, opt.sync);
    const std::size_t avail = std::min(opt.max_slots, (samples.size() - rx.sync.offset) / cfg.samples_per_slot());
    if (avail == 0) throw Error(ErrorCode::Truncated, "no complete slot after the detected PSS");
    rx.slots_demodulated = avail;

    const auto grid = ofdm_demodulate(samples, rx.sync.offset, avail, cfg);
    const auto eq = equalize(grid, opt.pilot_seed, opt.equalizer);

    DciCandidates found;
    for (std::size_t slot = 0; slot < avail; ++slot) {
        const auto row = eq.grid.symbol(slot, kControlSymbol);
        const auto bits = qam_demodulate(row, Modulation::QPSK);
        const auto cands = decode_candidates(bits);
        for (std::size_t p = 0; p < kDciCandidates; ++p) {
            if (cands[p]) {
                if (!found[p]) found[p] = cands[p];
                continue;
            }
            const auto cw = std::span<const std::uint8_t>(bits).subspan(p * kDciBits, kDciBits);
            if (std::any_of(cw.begin(), cw.end(), [](std::uint8_t b) { return b != 0; })) ++rx.control_crc_failures;
        }
    }

    for (std::size_t p = 0; p < kDciCandidates; ++p) {
        if (!found[p]) continue;
        ++rx.dcis_recovered;
        RxPayload out;
        out.position = p;
        out.dci = *found[p];
        try {
            const std::size_t n_sym = detail::payload_symbols(out.dci);
            if (out.dci.rb_count > 0)
                rx.burst_slots = std::max(rx.burst_slots, slots_for(cfg, out.dci.rb_count, n_sym));
            detail::decode_payload(out, eq, codec, avail);
        } catch (const Error& e) {
            out.status = PayloadStatus::Dropped;
            out.error = std::string(to_string(e.code()));
            out.frame.reset();
        }
        rx.payloads.push_back(std::move(out));
    }
    rx.codec_notes = codec.notes();
    return rx;
}

} // namespace hscran

#endif // HSCRAN_PIPELINE_HPP
