#pragma once

// Partition functions at the critical weight: exact values on triangles and
// trapezoids, two-sided brackets on strips, lower bounds on the half-plane.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hexwalk/cyclo.hpp"
#include "hexwalk/domains.hpp"
#include "hexwalk/enumerator.hpp"
#include "json.hpp"

namespace hexwalk {

class ResultCache;

struct RunContext {
    int workers = 1;
    ResultCache* cache = nullptr;
    std::uint64_t budget = kDefaultBudget;
    /// Weight per step; x_c unless overridden.
    std::optional<CycNum> x;
    /// Largest k for which Tria_{2k+1} may be enumerated.
    int triangle_cap = 4;
    /// Largest length cap for strips and the half-plane.
    int length_cap = 30;
    /// Largest trapezoid, in mid-edges.
    int trapezoid_mids = 120;

    CycNum weight() const;
};

struct PartitionBracket {
    std::string target;
    int k = 0;
    int cap = 0;
    CycNum lower;
    std::optional<CycNum> upper;
    /// lower is the full sum (no truncation).
    bool exact = false;

    /// upper - lower, when an upper bound exists.
    std::optional<CycNum> width() const;
    /// lower <= upper, or no upper bound.
    bool consistent() const;
    nlohmann::json to_json(int digits = 12) const;
};

/// Everything read off one complete enumeration of Tria_{2k+1} from the origin.
struct TriangleData {
    int k = 0;
    CycNum D;
    CycNum A;
    std::uint64_t walks = 0;
    /// D_{2k+1}(x) for x on the right or left side.
    std::map<MidEdge, CycNum> D_at;
    /// Weighted renewal-count sums: sum over walks to x of N(gamma) x^len.
    std::map<MidEdge, CycNum> N_weighted;
    /// Walk weights to x split by N: [x][N].
    std::map<MidEdge, std::vector<CycNum>> by_renewals;
};

TriangleData triangle_data(int k, const RunContext& ctx = {});

struct TriangleValues {
    CycNum D;
    CycNum A;
};

/// (D_{2k+1}, A_{2k+1}^triangle).
TriangleValues triangle_D(int k, const RunContext& ctx = {});

/// D_n for any n >= 0: D_0 = 1/cos(pi/8), D_{2k+2} = D_{2k+1}.
CycNum D_index(int n, const RunContext& ctx = {});

/// cos(3pi/8) A + cos(pi/8) D - 1.
CycNum eq22_residual(const TriangleValues& v);

/// B_k bracket: lower from the truncated bridge series, upper from
/// 1 - cos(3pi/8) A_k with A_k truncated at the same cap.
PartitionBracket strip_B(int k, int cap, const RunContext& ctx = {});

/// Truncated A_k (walks in Strip_k returning to the real axis, length > 0).
PartitionBracket strip_A(int k, int cap, const RunContext& ctx = {});

/// Per-length counts of A_k walks, for term-by-term comparisons.
std::vector<std::uint64_t> strip_A_counts(int k, int cap, const RunContext& ctx = {});
/// Per-length counts of A_{2k+1}^triangle walks.
std::vector<std::uint64_t> triangle_A_counts(int k, const RunContext& ctx = {});

/// Truncated G_k for k in [k_min, k_max] (lower bounds only).
std::vector<PartitionBracket> halfplane_G(int k_min, int k_max, int cap, const RunContext& ctx = {});

/// Truncated sum over k >= k_min of G_k: every U-walk within the cap ending
/// on the positive real axis at or beyond (k_min, 0).
CycNum halfplane_G_tail(int k_min, int cap, const RunContext& ctx = {});

struct TrapezoidValues {
    int i = 0;
    MidEdge x{};
    CycNum FR, FL, FT, FB;
    CycNum D_minus;
    /// The same quantities on the full rotated triangle.
    CycNum D_rot, A_rot;
    std::uint64_t walks = 0;

    /// cos(3pi/8) FL + cos(pi/8)(FR + FT) + cos(pi/4) FB - 1.
    CycNum identity_residual() const;
    /// cos(pi/4) FB - cos(pi/8) D^-.
    CycNum fb_margin() const;
    nlohmann::json to_json(int digits = 12) const;
};

TrapezoidValues trapezoid_F(int i, MidEdge x, const RunContext& ctx = {});

/// D^-_{2i+1,x}: walks in Tria_{2i+1,x} from x to its right side visiting a
/// mid-edge strictly below the real axis.
CycNum D_minus(int i, MidEdge x, const RunContext& ctx = {});

struct RenewalExpectation {
    int k = 0;
    CycNum expectation;
    CycNum bound;
    /// 8 * bound.
    CycNum M;
    bool within() const;
};

RenewalExpectation renewal_expectation(int k, const RunContext& ctx = {});

/// 2 cos(pi/8) D_{ceil((k+1)/2)} / D_{2k+1} * sum_{i <= floor((k+1)/2)} D_i.
CycNum renewal_bound(int k, const RunContext& ctx = {});

struct EndpointD {
    CycNum D;
    CycNum D_ren;
};

std::map<MidEdge, EndpointD> per_endpoint_D(int k, const RunContext& ctx = {});

/// Delta_{k,i}: walks in T_{k,i} from 0 to its right or left side.
CycNum offset_delta(int k, int i, const RunContext& ctx = {});

struct AuditTerm {
    std::string name;
    std::string status; // pass, fail, inconclusive
    std::string detail;
};

nlohmann::json to_json(const AuditTerm& t);

/// T^4 D_{18T}^5 <= 2^17 (sum_{i<=3T} D_i)^4 sum_{k=T}^{21T} G_k, with G lower
/// bounds at `cap`; inconclusive whenever a needed D is beyond the exact table.
/// Also runs the surrogate smoke test with every D index clamped to the
/// exact table D_0..D_{2 table_k + 2}.
std::vector<AuditTerm> recurrence_audit(int T, int cap, int table_k, const RunContext& ctx = {});

/// Case (a)/(b) classification for the given T; D^- needs Tria_{2i+1} with
/// i up to 5T-1, so it is reported inconclusive beyond the triangle cap.
std::vector<AuditTerm> case_report(int T, const RunContext& ctx = {});

/// D_T <= 100 T^{-1e-10} for T = 1..n_max; true at any computable size.
std::vector<AuditTerm> vacuous_decay_check(int n_max, const RunContext& ctx = {});

} // namespace hexwalk
