#ifndef HSCRAN_GRID_HPP
#define HSCRAN_GRID_HPP

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hscran/error.hpp"
#include "hscran/types.hpp"

namespace hscran {

// Slot layout: one synchronization, one pilot and one control symbol, then data.
inline constexpr std::size_t kPssSymbol = 0;
inline constexpr std::size_t kPilotSymbol = 1;
inline constexpr std::size_t kControlSymbol = 2;
inline constexpr std::size_t kFirstDataSymbol = 3;

inline constexpr std::size_t kRbSubcarriers = 12;
inline constexpr std::size_t kMaxPayloadsPerBurst = 4;

struct GridConfig {
    std::size_t fft_size = 256;
    std::size_t used_subcarriers = 240;
    std::size_t cp_len = 32;
    std::size_t symbols_per_slot = 14;

    std::size_t n_rbs() const noexcept { return used_subcarriers / kRbSubcarriers; }
    std::size_t data_symbols_per_slot() const noexcept { return symbols_per_slot - kFirstDataSymbol; }
    std::size_t samples_per_symbol() const noexcept { return fft_size + cp_len; }
    std::size_t samples_per_slot() const noexcept { return symbols_per_slot * samples_per_symbol(); }

    /// Throws InvalidConfig. The DC bin is never used, so the used band must be
    /// strictly narrower than the transform.
    void validate() const {
        auto fail = [](const std::string& m) { throw Error(ErrorCode::InvalidConfig, m); };
        if (fft_size == 0) fail("fft_size must be positive");
        if (used_subcarriers == 0 || used_subcarriers % kRbSubcarriers != 0)
            fail("used_subcarriers must be a positive multiple of 12");
        if (used_subcarriers >= fft_size) fail("used_subcarriers must be < fft_size (DC bin is reserved)");
        if (cp_len >= fft_size) fail("cp_len must be < fft_size");
        if (symbols_per_slot < 4) fail("symbols_per_slot must be >= 4");
    }

    friend bool operator==(const GridConfig&, const GridConfig&) = default;
};

/// Complex resource elements indexed [slot][symbol][subcarrier], stored flat.
class ResourceGrid {
public:
    ResourceGrid() = default;
    ResourceGrid(const GridConfig& config, std::size_t n_slots)
        : config_(config), n_slots_(n_slots),
          cells_(n_slots * config.symbols_per_slot * config.used_subcarriers, cplx{}) {
        config_.validate();
    }

    const GridConfig& config() const noexcept { return config_; }
    std::size_t n_slots() const noexcept { return n_slots_; }
    std::size_t size() const noexcept { return cells_.size(); }

    cplx& at(std::size_t slot, std::size_t symbol, std::size_t subcarrier) {
        return cells_[index(slot, symbol, subcarrier)];
    }
    const cplx& at(std::size_t slot, std::size_t symbol, std::size_t subcarrier) const {
        return cells_[index(slot, symbol, subcarrier)];
    }

    std::span<cplx> symbol(std::size_t slot, std::size_t sym) {
        return {cells_.data() + index(slot, sym, 0), config_.used_subcarriers};
    }
    std::span<const cplx> symbol(std::size_t slot, std::size_t sym) const {
        return {cells_.data() + index(slot, sym, 0), config_.used_subcarriers};
    }

    /// Flat OFDM-symbol access in burst order (slot-major).
    std::span<const cplx> symbol(std::size_t flat) const {
        return {cells_.data() + flat * config_.used_subcarriers, config_.used_subcarriers};
    }
    std::span<cplx> symbol(std::size_t flat) {
        return {cells_.data() + flat * config_.used_subcarriers, config_.used_subcarriers};
    }
    std::size_t n_symbols() const noexcept { return n_slots_ * config_.symbols_per_slot; }

    std::span<const cplx> cells() const noexcept { return cells_; }
    std::span<cplx> cells() noexcept { return cells_; }

    friend bool operator==(const ResourceGrid&, const ResourceGrid&) = default;

private:
    std::size_t index(std::size_t slot, std::size_t symbol, std::size_t sc) const {
        if (slot >= n_slots_ || symbol >= config_.symbols_per_slot || sc >= config_.used_subcarriers)
            throw std::out_of_range("resource grid index");
        return (slot * config_.symbols_per_slot + symbol) * config_.used_subcarriers + sc;
    }

    GridConfig config_{};
    std::size_t n_slots_ = 0;
    std::vector<cplx> cells_;
};

struct RbAllocation {
    std::size_t rb_start = 0;
    std::size_t rb_count = 0;
    ResourceType resource_type = ResourceType::NonSemantic;
    std::size_t payload_id = 0;

    std::size_t rb_end() const noexcept { return rb_start + rb_count; }
    std::size_t first_subcarrier() const noexcept { return rb_start * kRbSubcarriers; }
    std::size_t n_subcarriers() const noexcept { return rb_count * kRbSubcarriers; }

    friend bool operator==(const RbAllocation&, const RbAllocation&) = default;
};

struct AllocationRequest {
    ResourceType resource_type = ResourceType::NonSemantic;
    std::size_t n_symbols_needed = 0;
    /// Explicit RB count; when empty the burst policy decides.
    std::optional<std::size_t> rb_count{};
};

struct AllocationPlan {
    std::vector<RbAllocation> allocations;
    std::vector<std::size_t> slots_needed;
    std::size_t burst_slots = 0;
};

/// Complex symbols an allocation holds per slot.
inline std::size_t slot_capacity(const GridConfig& config, std::size_t rb_count) {
    return config.data_symbols_per_slot() * rb_count * kRbSubcarriers;
}

inline std::size_t slots_for(const GridConfig& config, std::size_t rb_count, std::size_t n_symbols) {
    const std::size_t per_slot = slot_capacity(config, rb_count);
    return (n_symbols + per_slot - 1) / per_slot;
}

inline void check_allocation(const GridConfig& config, const RbAllocation& alloc) {
    if (alloc.rb_count == 0 || alloc.rb_end() > config.n_rbs())
        throw Error(ErrorCode::FieldRange, "allocation [" + std::to_string(alloc.rb_start) + ", " +
                                               std::to_string(alloc.rb_end()) + ") outside " +
                                               std::to_string(config.n_rbs()) + " RBs");
}

/// First-fit RB allocation in request order from RB 0. Requests without an explicit
/// rb_count share the remaining RBs equally; the remainder goes to the first
/// semantic such request (or the first one if none is semantic). The same frequency
/// partition repeats in every slot of the burst.
inline AllocationPlan allocate(std::span<const AllocationRequest> requests, const GridConfig& config) {
    config.validate();
    if (requests.empty()) throw Error(ErrorCode::InvalidRequest, "no requests");
    if (requests.size() > kMaxPayloadsPerBurst)
        throw Error(ErrorCode::InvalidRequest, "at most 4 requests per burst");

    const std::size_t n_rbs = config.n_rbs();
    std::size_t fixed = 0;
    std::size_t n_auto = 0;
    for (const auto& r : requests) {
        if (r.n_symbols_needed == 0) throw Error(ErrorCode::InvalidRequest, "n_symbols_needed must be >= 1");
        if (r.rb_count) {
            if (*r.rb_count == 0) throw Error(ErrorCode::InvalidRequest, "explicit rb_count must be >= 1");
            fixed += *r.rb_count;
        } else {
            ++n_auto;
        }
    }
    if (fixed > n_rbs) throw Error(ErrorCode::CapacityExceeded, "requested RBs exceed grid");

    std::vector<std::size_t> counts(requests.size(), 0);
    if (n_auto > 0) {
        const std::size_t free = n_rbs - fixed;
        const std::size_t share = free / n_auto;
        if (share == 0) throw Error(ErrorCode::CapacityExceeded, "not enough RBs for every payload");
        std::optional<std::size_t> remainder_to;
        for (std::size_t i = 0; i < requests.size(); ++i) {
            if (requests[i].rb_count) continue;
            counts[i] = share;
            if (!remainder_to) remainder_to = i;
            else if (requests[i].resource_type == ResourceType::Semantic &&
                     requests[*remainder_to].resource_type != ResourceType::Semantic)
                remainder_to = i;
        }
        counts[*remainder_to] += free % n_auto;
    }

    AllocationPlan plan;
    std::size_t next_rb = 0;
    for (std::size_t i = 0; i < requests.size(); ++i) {
        const std::size_t count = requests[i].rb_count ? *requests[i].rb_count : counts[i];
        RbAllocation a{next_rb, count, requests[i].resource_type, i};
        next_rb += count;
        plan.slots_needed.push_back(slots_for(config, count, requests[i].n_symbols_needed));
        plan.burst_slots = std::max(plan.burst_slots, plan.slots_needed.back());
        plan.allocations.push_back(a);
    }
    return plan;
}

inline std::size_t payload_capacity(const ResourceGrid& grid, const RbAllocation& alloc) {
    return grid.n_slots() * slot_capacity(grid.config(), alloc.rb_count);
}

/// Visits the allocation's data REs in mapping order: slot, then data symbol,
/// then subcarrier ascending. Stops after `limit` elements.
template <class Grid, class Fn>
void for_each_data_re(Grid& grid, const RbAllocation& alloc, std::size_t limit, Fn&& fn) {
    const auto& cfg = grid.config();
    const std::size_t sc0 = alloc.first_subcarrier();
    const std::size_t sc1 = sc0 + alloc.n_subcarriers();
    std::size_t n = 0;
    for (std::size_t slot = 0; slot < grid.n_slots(); ++slot)
        for (std::size_t sym = kFirstDataSymbol; sym < cfg.symbols_per_slot; ++sym) {
            auto row = grid.symbol(slot, sym);
            for (std::size_t sc = sc0; sc < sc1; ++sc) {
                if (n == limit) return;
                fn(row[sc], n++);
            }
        }
}

inline void map_payload(ResourceGrid& grid, const RbAllocation& alloc, std::span<const cplx> symbols) {
    check_allocation(grid.config(), alloc);
    if (symbols.size() > payload_capacity(grid, alloc))
        throw Error(ErrorCode::Overflow, std::to_string(symbols.size()) + " symbols exceed allocation capacity " +
                                             std::to_string(payload_capacity(grid, alloc)));
    for_each_data_re(grid, alloc, symbols.size(), [&](cplx& re, std::size_t i) { re = symbols[i]; });
}

inline std::vector<cplx> demap_payload(const ResourceGrid& grid, const RbAllocation& alloc, std::size_t n_symbols) {
    check_allocation(grid.config(), alloc);
    if (n_symbols > payload_capacity(grid, alloc))
        throw Error(ErrorCode::Overflow, "demap request exceeds allocation capacity");
    std::vector<cplx> out(n_symbols);
    for_each_data_re(grid, alloc, n_symbols, [&](const cplx& re, std::size_t i) { out[i] = re; });
    return out;
}

} // namespace hscran

#endif // HSCRAN_GRID_HPP
