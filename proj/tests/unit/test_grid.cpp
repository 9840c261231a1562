#include <gtest/gtest.h>

#include <set>

#include "support.hpp"

using namespace hscran;
using hscran::test::Engine;

namespace {

// Closed-form position of the i-th payload symbol, written independently of
// the library's nested traversal.
struct Re {
    std::size_t slot, symbol, sc;
};

Re position_of(const GridConfig& c, const RbAllocation& a, std::size_t i) {
    const std::size_t width = a.rb_count * 12;
    const std::size_t per_slot = width * (c.symbols_per_slot - 3);
    const std::size_t within = i % per_slot;
    return {i / per_slot, 3 + within / width, a.rb_start * 12 + within % width};
}

} // namespace

TEST(GridConfig, DefaultsAndDerived) {
    GridConfig c;
    EXPECT_EQ(c.fft_size, 256u);
    EXPECT_EQ(c.used_subcarriers, 240u);
    EXPECT_EQ(c.cp_len, 32u);
    EXPECT_EQ(c.symbols_per_slot, 14u);
    EXPECT_EQ(c.n_rbs(), 20u);
    EXPECT_EQ(c.data_symbols_per_slot(), 11u);
    EXPECT_EQ(c.samples_per_slot(), 14u * 288u);
    EXPECT_NO_THROW(c.validate());
}

TEST(GridConfig, RejectsInvalid) {
    auto bad = [](GridConfig c) {
        try {
            c.validate();
        } catch (const Error& e) {
            return e.code() == ErrorCode::InvalidConfig;
        }
        return false;
    };
    GridConfig c;
    c.used_subcarriers = 250;
    EXPECT_TRUE(bad(c));
    c = {};
    c.used_subcarriers = 0;
    EXPECT_TRUE(bad(c));
    c = {};
    c.used_subcarriers = 264;
    EXPECT_TRUE(bad(c));
    c = {};
    c.cp_len = 256;
    EXPECT_TRUE(bad(c));
    c = {};
    c.symbols_per_slot = 3;
    EXPECT_TRUE(bad(c));
    c = {};
    c.fft_size = 0;
    EXPECT_TRUE(bad(c));
}

TEST(ResourceGrid, ZeroInitialisedWithExpectedCellCount) {
    GridConfig c;
    ResourceGrid g(c, 3);
    EXPECT_EQ(g.cells().size(), 3u * 14u * 240u);
    for (const auto& x : g.cells()) EXPECT_EQ(x, cplx{});
    EXPECT_THROW(g.at(3, 0, 0), std::out_of_range);
    EXPECT_THROW(g.at(0, 14, 0), std::out_of_range);
    EXPECT_THROW(g.at(0, 0, 240), std::out_of_range);
}

TEST(Allocate, TwoRequestsSplitEvenly) {
    GridConfig c;
    const AllocationRequest reqs[] = {{ResourceType::Semantic, 5000, {}}, {ResourceType::NonSemantic, 100, {}}};
    const auto plan = allocate(reqs, c);
    ASSERT_EQ(plan.allocations.size(), 2u);
    EXPECT_EQ(plan.allocations[0].rb_start, 0u);
    EXPECT_EQ(plan.allocations[0].rb_count, 10u);
    EXPECT_EQ(plan.allocations[1].rb_start, 10u);
    EXPECT_EQ(plan.allocations[1].rb_count, 10u);
    // 5000 / (11 * 120) = 3.79 -> 4 slots; 100 fits in one
    EXPECT_EQ(plan.slots_needed, (std::vector<std::size_t>{4, 1}));
    EXPECT_EQ(plan.burst_slots, 4u);
}

TEST(Allocate, RemainderGoesToSemantic) {
    GridConfig c;
    const AllocationRequest reqs[] = {
        {ResourceType::NonSemantic, 10, {}}, {ResourceType::Semantic, 10, {}}, {ResourceType::NonSemantic, 10, {}}};
    const auto plan = allocate(reqs, c);
    EXPECT_EQ(plan.allocations[0].rb_count, 6u);
    EXPECT_EQ(plan.allocations[1].rb_count, 8u);
    EXPECT_EQ(plan.allocations[2].rb_count, 6u);
    EXPECT_EQ(plan.allocations[1].rb_start, 6u);
    EXPECT_EQ(plan.allocations[2].rb_start, 14u);
}

TEST(Allocate, SingleRequestTakesEverything) {
    GridConfig c;
    const AllocationRequest reqs[] = {{ResourceType::Semantic, 8199, {}}};
    const auto plan = allocate(reqs, c);
    EXPECT_EQ(plan.allocations[0].rb_count, 20u);
    EXPECT_EQ(plan.slots_needed[0], 4u); // ceil(8199 / 2640)
}

TEST(Allocate, ExactOneSlotCapacity) {
    GridConfig c;
    const AllocationRequest reqs[] = {{ResourceType::NonSemantic, 11 * 12, 1}};
    EXPECT_EQ(allocate(reqs, c).slots_needed[0], 1u);
    const AllocationRequest more[] = {{ResourceType::NonSemantic, 11 * 12 + 1, 1}};
    EXPECT_EQ(allocate(more, c).slots_needed[0], 2u);
}

TEST(Allocate, Errors) {
    GridConfig c;
    auto code = [&](std::vector<AllocationRequest> r) {
        try {
            allocate(r, c);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::Io;
    };
    EXPECT_EQ(code({{ResourceType::Semantic, 0, {}}}), ErrorCode::InvalidRequest);
    EXPECT_EQ(code({}), ErrorCode::InvalidRequest);
    EXPECT_EQ(code(std::vector<AllocationRequest>(5, {ResourceType::NonSemantic, 1, {}})), ErrorCode::InvalidRequest);
    EXPECT_EQ(code({{ResourceType::Semantic, 1, 15}, {ResourceType::NonSemantic, 1, 6}}), ErrorCode::CapacityExceeded);
    EXPECT_EQ(code({{ResourceType::Semantic, 1, 20}, {ResourceType::NonSemantic, 1, {}}}), ErrorCode::CapacityExceeded);
}

TEST(AllocateProperty, NeverOverlapsOrOverflows) {
    Engine e(11);
    for (int trial = 0; trial < 2000; ++trial) {
        const GridConfig c = test::random_grid_config(e);
        const std::size_t n = test::uniform(e, 1, 4);
        std::vector<AllocationRequest> reqs;
        for (std::size_t i = 0; i < n; ++i) {
            AllocationRequest r{static_cast<ResourceType>(e() & 1u), test::uniform(e, 1, 50000), {}};
            if (e() % 3 == 0) r.rb_count = test::uniform(e, 1, 8);
            reqs.push_back(r);
        }
        AllocationPlan plan;
        try {
            plan = allocate(reqs, c);
        } catch (const Error& err) {
            EXPECT_EQ(err.code(), ErrorCode::CapacityExceeded);
            continue;
        }
        std::vector<int> owner(c.n_rbs(), -1);
        std::size_t longest = 0;
        for (std::size_t i = 0; i < plan.allocations.size(); ++i) {
            const auto& a = plan.allocations[i];
            ASSERT_GE(a.rb_count, 1u);
            ASSERT_LE(a.rb_start + a.rb_count, c.n_rbs());
            for (std::size_t rb = a.rb_start; rb < a.rb_end(); ++rb) {
                ASSERT_EQ(owner[rb], -1) << "overlap at RB " << rb;
                owner[rb] = static_cast<int>(i);
            }
            const std::size_t cap = a.rb_count * 12 * (c.symbols_per_slot - 3);
            EXPECT_EQ(plan.slots_needed[i], (reqs[i].n_symbols_needed + cap - 1) / cap);
            longest = std::max(longest, plan.slots_needed[i]);
        }
        EXPECT_EQ(plan.burst_slots, longest);
    }
}

TEST(MapPayload, EmptyLeavesGridUnchanged) {
    GridConfig c;
    ResourceGrid g(c, 2);
    map_payload(g, {0, 5, ResourceType::Semantic, 0}, {});
    EXPECT_EQ(g, ResourceGrid(c, 2));
    EXPECT_TRUE(demap_payload(g, {0, 5, ResourceType::Semantic, 0}, 0).empty());
}

TEST(MapPayload, FirstSymbolLandsAtSlot0Symbol3Subcarrier0) {
    GridConfig c;
    ResourceGrid g(c, 1);
    const cplx one[] = {{1.5, -2.0}};
    map_payload(g, {0, 2, ResourceType::NonSemantic, 0}, one);
    EXPECT_EQ(g.at(0, 3, 0), one[0]);
    std::size_t nonzero = 0;
    for (const auto& x : g.cells()) nonzero += x != cplx{};
    EXPECT_EQ(nonzero, 1u);
}

TEST(MapPayload, OverflowAtCapacityPlusOne) {
    GridConfig c;
    ResourceGrid g(c, 2);
    const RbAllocation a{3, 4, ResourceType::Semantic, 0};
    const std::size_t cap = 2 * 11 * 48;
    EXPECT_EQ(payload_capacity(g, a), cap);
    std::vector<cplx> fits(cap, {1.0, 0.0}), over(cap + 1, {1.0, 0.0});
    EXPECT_NO_THROW(map_payload(g, a, fits));
    try {
        map_payload(g, a, over);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Overflow);
    }
    EXPECT_THROW(demap_payload(g, a, cap + 1), Error);
}

TEST(MapPayload, RejectsAllocationOutsideGrid) {
    GridConfig c;
    ResourceGrid g(c, 1);
    EXPECT_THROW(map_payload(g, {18, 3, ResourceType::Semantic, 0}, {}), Error);
    EXPECT_THROW(map_payload(g, {0, 0, ResourceType::Semantic, 0}, {}), Error);
}

TEST(MapPayload, ThousandRandomSymbolsRoundTrip) {
    Engine e(3);
    GridConfig c;
    ResourceGrid g(c, 1);
    const RbAllocation a{0, 10, ResourceType::Semantic, 0};
    const auto x = test::random_symbols(e, 1000);
    map_payload(g, a, x);
    EXPECT_EQ(demap_payload(g, a, 1000), x);
    EXPECT_EQ(demap_payload(ResourceGrid(c, 1), a, 1000), std::vector<cplx>(1000));
}

TEST(MapPayloadProperty, OrderMatchesClosedFormAndRoundTripsBitwise) {
    Engine e(5);
    for (int trial = 0; trial < 300; ++trial) {
        const GridConfig c = test::random_grid_config(e);
        const std::size_t slots = test::uniform(e, 1, 3);
        ResourceGrid g(c, slots);
        const std::size_t count = test::uniform(e, 1, c.n_rbs());
        const RbAllocation a{test::uniform(e, 0, c.n_rbs() - count), count, ResourceType::Semantic, 0};
        const std::size_t n = test::uniform(e, 0, payload_capacity(g, a));
        const auto x = test::random_symbols(e, n);
        map_payload(g, a, x);

        for (std::size_t i = 0; i < n; ++i) {
            const Re p = position_of(c, a, i);
            ASSERT_EQ(g.at(p.slot, p.symbol, p.sc), x[i]) << "trial " << trial << " index " << i;
        }
        std::size_t nonzero = 0;
        for (const auto& v : g.cells()) nonzero += v != cplx{};
        EXPECT_LE(nonzero, n);

        const auto y = demap_payload(g, a, n);
        ASSERT_EQ(y.size(), n);
        EXPECT_EQ(0, std::memcmp(x.data(), y.data(), n * sizeof(cplx)));
        EXPECT_EQ(y, demap_payload(g, a, n));
    }
}
