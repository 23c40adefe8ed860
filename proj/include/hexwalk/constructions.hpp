#pragma once

// Walk surgery: renewal times, Hammersley-Welsh unfolding, bridge
// decomposition, triangle concatenations, displacement statistics.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hexwalk/cyclo.hpp"
#include "hexwalk/domains.hpp"
#include "hexwalk/errors.hpp"
#include "hexwalk/lattice.hpp"
#include "json.hpp"

namespace hexwalk {

/// Line i + 1/2 + e^{2 pi i/3} R on the grid: 3 xq + yq = 12 i + 6.
HalfPlaneConstraint renewal_line(int i);

struct RenewalProfile {
    Walk walk;
    int k = 0;
    std::vector<int> indices;
    int N = 0;

    nlohmann::json to_json() const;
};

/// Requires a walk from the origin inside Tria_{2k+1}.
RenewalProfile renewal_times(const Walk& walk, int k);

/// From the bottom line y = 0 to the line y = (sqrt 3 / 2) h inside Strip_h,
/// h = end height; the trivial walk is a bridge of height 0.
bool is_bridge(const Walk& walk);
/// Height index h of a bridge.
int bridge_height(const Walk& walk);

/// x_0 <= x_t <= x_n for every t.
bool is_x_bridge(const Walk& walk);

struct UnfoldResult {
    Walk bridge;
    int reflections = 0;
};

/// Hammersley-Welsh unfolding along the x axis by reflections in vertical
/// lattice mirrors. Heights are untouched.
UnfoldResult hw_unfold(const Walk& walk);

struct DecompositionRecord {
    int n = 0;
    int m = 0;
    int s = 0;
    int w = 0;
    int i0 = 0;
    Walk alpha;
    Walk tau;
    std::vector<Walk> bridges;    // b(i0, j), j = 0..s-1
    std::vector<Walk> connectors; // c(i0, j), j = 0..s
    std::vector<int> visits;      // I(i0, j)
    /// Sum_j I(i, j) for every i in [0, m).
    std::vector<int> visit_sums;

    nlohmann::json to_json() const;
};

/// Lines y = (sqrt 3 / 2)(j m + i); s = floor(w / m) - 1; w defaults to the
/// bridge height and must satisfy m <= w <= height.
DecompositionRecord bridge_decompose(const Walk& bridge, int m, int w = -1);

/// alpha, then c(0), b(0), c(1), ..., c(s), then tau.
Walk reconstruct(const DecompositionRecord& rec);

enum class ConcatenationFault {
    EmptyWalk,
    ParameterRange,
    BadStart,
    OutsideDomain,
    WrongEndSide,
    MissingThirdWalk,
    UnexpectedThirdWalk,
    EndpointMismatch,
    SelfIntersection,
    LeavesHalfPlane,
    NotOnRealAxis,
    DistanceBound
};

std::string to_string(ConcatenationFault f);

class ConcatenationError : public ContractError {
public:
    ConcatenationError(ConcatenationFault fault, const std::string& what)
        : ContractError(to_string(fault) + ": " + what), fault_(fault) {}
    ConcatenationFault fault() const { return fault_; }

private:
    ConcatenationFault fault_;
};

struct GluingParams {
    int T = 1;
    int k = 1;
    int i = 4;
};

/// Trapezoid bottom-side length (in lattice units) of Trap_{2i+1,x}.
mpq_class trapezoid_bottom_length(int i, MidEdge x);

/// gamma1 (Tria_{2k+1}, origin to its right side) + gamma2 (Trap_{2i+1,x}
/// from x, to its bottom side, or to its right side followed by gamma3 in
/// y + e^{4 pi i/3} Tria_{2r} to the real axis). Returns the U-walk or throws
/// ConcatenationError naming the first violated constraint.
Walk gm_concatenate(const Walk& g1, const Walk& g2, const std::optional<Walk>& g3, const GluingParams& p);

struct GluingTriple {
    Walk g1, g2;
    std::optional<Walk> g3;
    GluingParams params;
};

/// Random admissible triple: each piece grown uniformly at random inside its
/// domain until it stops on its target side; case (a) or (b) with equal odds.
GluingTriple random_gluing_triple(std::mt19937_64& rng, int T = 1);

struct PreimageSurvey {
    int k = 0;
    int i = 0;
    /// Distinct glued walks gamma1 + gamma2 in the upper half-plane.
    std::uint64_t walks = 0;
    /// Number of admissible splittings -> number of glued walks.
    std::map<int, std::uint64_t> splittings;
    int max_splittings = 0;

    nlohmann::json to_json() const;
};

/// Every gamma1 in Tria_{2k+1} from 0 to its right side with at most
/// `max_renewals` renewal times, glued to every gamma2 in Trap_{2i+1,x} from
/// its endpoint x to the bottom side. For each self-avoiding result, counts
/// the cut points t at which it splits into another such pair.
PreimageSurvey preimage_survey(int k, int i, int max_renewals, std::uint64_t budget = 100'000'000);

struct DisplacementStats {
    int n = 0;
    std::uint64_t walks = 0;
    /// max_k |gamma_k|^2 as a reduced fraction -> number of walks.
    std::map<mpq_class, std::uint64_t> squared_max;
    /// max_k p_{pi/2}(gamma_k) in units of sqrt(3)/12 -> count.
    std::map<int, std::uint64_t> max_p_pi2;
    /// max_k p_{pi/6}(gamma_k) in units of sqrt(3)/24 -> count.
    std::map<int, std::uint64_t> max_p_pi6;

    /// n, sq_displacement_num, sq_displacement_den, count.
    std::string to_csv() const;
    nlohmann::json to_json() const;
};

/// Exact distribution over all SAWs of length n from the origin.
DisplacementStats displacement_stats(int n, int cap = 14);

} // namespace hexwalk
