#pragma once

// Depth-first enumeration of self-avoiding walks inside a domain.
//
// The search runs on an arena: the mid-edges reachable from the start within
// the length cap, each with its neighbours grouped by the endpoint they share.
// Walks are tallied as exact integer counts (by length, endpoint, winding
// mod 48, renewal count); weights x^len and phases are applied once at the end.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hexwalk/cyclo.hpp"
#include "hexwalk/domains.hpp"
#include "hexwalk/lattice.hpp"
#include "json.hpp"

namespace hexwalk {

namespace acc {
inline constexpr unsigned WeightSum = 1u << 0;
inline constexpr unsigned PerEndpoint = 1u << 1;
inline constexpr unsigned Phase = 1u << 2;
inline constexpr unsigned Renewal = 1u << 3;
inline constexpr unsigned Touch = 1u << 4;
inline constexpr unsigned Collector = 1u << 5;
} // namespace acc

inline constexpr int kDefaultHardCap = 40;
inline constexpr std::uint64_t kDefaultBudget = 10'000'000'000ULL;

struct EndpointFilter {
    enum class Mode { Any, Sides, Mids };
    Mode mode = Mode::Any;
    std::vector<SideLabel> sides;
    std::vector<MidEdge> mids;
    int min_length = 0;

    static EndpointFilter any() { return {}; }
    static EndpointFilter on_sides(std::vector<SideLabel> s, int min_length = 0);
    static EndpointFilter at_mids(std::vector<MidEdge> m, int min_length = 0);

    /// Endpoint test ignoring min_length.
    bool accepts(const Domain& d, MidEdge m) const;
    nlohmann::json to_json() const;
};

struct EnumSpec {
    Domain domain;
    MidEdge start{};
    int max_length = 0;
    EndpointFilter filter;
    unsigned accumulators = acc::WeightSum;
    CycNum x = constant(Constant::Xc);
    int sigma_eighths = 5;
    /// Each entry's on_line() defines one renewal line.
    std::vector<HalfPlaneConstraint> renewal_lines;
    /// A walk is "touched" when it visits a mid-edge satisfying this constraint.
    std::optional<HalfPlaneConstraint> touch_region;
    std::size_t collect_cap = 1'000'000;
    std::uint64_t budget = kDefaultBudget;
    /// Length cap for unbounded domains; bounded ones are guarded by the budget.
    int hard_cap = kDefaultHardCap;

    /// Everything that determines the result; budget and hard cap excluded.
    nlohmann::json canonical_json() const;
};

struct EnumResult {
    int max_length = 0;
    bool truncated = false;
    std::uint64_t walks_visited = 0;
    unsigned accumulators = 0;

    /// Accepted walks by length.
    std::vector<std::uint64_t> count_by_length;
    /// Mid-edges passing the endpoint test, sorted; tallies are indexed by slot.
    std::vector<MidEdge> endpoints;
    std::vector<std::uint64_t> endpoint_length;  // [slot][len]
    std::vector<std::uint64_t> endpoint_winding; // [slot][len][w mod 48]
    int renewal_lines = 0;
    std::vector<std::uint64_t> endpoint_renewal; // [slot][len][N], N in 0..renewal_lines
    std::vector<std::uint64_t> endpoint_touch;   // [slot][len]
    std::vector<Walk> walks;
    bool collector_overflow = false;

    CycNum weight_sum;
    std::map<MidEdge, CycNum> per_endpoint;
    std::map<MidEdge, CycNum> phase_sum;

    std::uint64_t total_walks() const;
    std::optional<std::size_t> slot_of(MidEdge m) const;
    std::uint64_t length_tally(std::size_t slot, int len) const;
    std::uint64_t winding_tally(std::size_t slot, int len, int wmod) const;
    std::uint64_t renewal_tally(std::size_t slot, int len, int n) const;
    std::uint64_t touch_tally(std::size_t slot, int len) const;

    /// Applies weight x per step and phase zeta^(-s w) to the integer tallies.
    void finalize(const CycNum& x, int sigma_eighths);

    nlohmann::json to_json() const;
    static EnumResult from_json(const nlohmann::json& j);
};

using WalkVisitor = std::function<void(std::span<const MidEdge> walk, int winding)>;

/// Serial enumeration in lexicographic order of neighbour choices.
EnumResult enumerate(const EnumSpec& spec);

/// As enumerate, also calling `visitor` on every accepted walk in order.
EnumResult enumerate(const EnumSpec& spec, const WalkVisitor& visitor);

/// Prefix-partitioned enumeration on `workers` threads; identical result.
EnumResult parallel_enumerate(const EnumSpec& spec, int workers);

/// Number of self-avoiding walks of exactly n steps from the origin.
std::uint64_t count_saws(int n, int hard_cap = kDefaultHardCap, std::uint64_t budget = kDefaultBudget);

/// Counts for n = 0..n_max from a single enumeration.
std::vector<std::uint64_t> count_saws_upto(int n_max, int workers = 1, int hard_cap = kDefaultHardCap,
                                           std::uint64_t budget = kDefaultBudget);

/// One JSON array of [xq, yq] pairs per line.
void write_walks_ndjson(const std::vector<Walk>& walks, const std::string& path);

nlohmann::json walk_to_json(const Walk& w);
Walk walk_from_json(const nlohmann::json& j);

} // namespace hexwalk
