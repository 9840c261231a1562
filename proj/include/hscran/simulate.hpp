#ifndef HSCRAN_SIMULATE_HPP
#define HSCRAN_SIMULATE_HPP

#include <chrono>
#include <optional>
#include <span>

#include "hscran/channel.hpp"
#include "hscran/pipeline.hpp"
#include "hscran/report.hpp"

namespace hscran {

struct BurstOutcome {
    TxRecord tx;
    std::optional<RxResult> rx;
    LinkReport report;
    SampleStream tx_stream;
    std::vector<cplx> rx_samples;
};

/// transmit -> channel -> receive -> score, with separate codec instances on
/// each side. Sync failures are reported, not thrown.
inline BurstOutcome run_burst(std::span<const ServiceRequest> requests, const GridConfig& grid,
                              const CodecSpec& codec_spec, const ChannelSpec& channel, const LinkOptions& link = {},
                              std::chrono::milliseconds plugin_timeout = std::chrono::seconds(30)) {
    BurstOutcome out;
    SemanticCodec tx_codec(codec_spec, plugin_timeout);
    auto [stream, record] = transmit(requests, grid, tx_codec, link);
    out.tx = std::move(record);
    out.tx_stream = std::move(stream);
    out.rx_samples = apply_channel(out.tx_stream.samples, channel);

    SemanticCodec rx_codec(codec_spec, plugin_timeout);
    try {
        out.rx = receive(out.rx_samples, grid, rx_codec, link);
        out.report = score_link(out.tx, &*out.rx, channel);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NotFound && e.code() != ErrorCode::Truncated) throw;
        out.report = score_link(out.tx, nullptr, channel, std::string(to_string(e.code())));
    }
    return out;
}

} // namespace hscran

#endif // HSCRAN_SIMULATE_HPP
