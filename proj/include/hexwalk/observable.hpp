#pragma once

// F(z) = sum over walks a -> z inside the domain of exp(-i sigma W) x^len.

#include <map>
#include <optional>
#include <vector>

#include "hexwalk/cyclo.hpp"
#include "hexwalk/domains.hpp"
#include "hexwalk/lattice.hpp"
#include "json.hpp"

namespace hexwalk {

class ResultCache;

struct ObservableField {
    Domain domain;
    MidEdge a{};
    int sigma_eighths = 5;
    CycNum x;
    int cap = 0;
    std::map<MidEdge, CycNum> values;
    /// Winding classes (mod 48) met by walks ending at each mid-edge.
    std::map<MidEdge, std::vector<int>> windings;
    bool exact = false;
    std::uint64_t walks = 0;

    CycNum value(MidEdge z) const;

    nlohmann::json to_json() const;
};

struct ObservableOptions {
    int sigma_eighths = 5;
    std::optional<CycNum> x;
    /// Length cap; negative means "all walks" for bounded domains.
    int cap = -1;
    int workers = 1;
    ResultCache* cache = nullptr;
    std::uint64_t budget = 10'000'000'000ULL;
};

ObservableField compute_observable(const Domain& domain, MidEdge a, const ObservableOptions& opts = {});

/// Unit direction of p - v as a power of zeta (p a mid-edge of vertex v).
int direction_exponent(LatticeVertex v, MidEdge p);

/// (p-v)F(p) + (q-v)F(q) + (r-v)F(r) over the three mid-edges at v.
CycNum vertex_residual(const ObservableField& field, LatticeVertex v);

/// Mid-edges of the domain with exactly one endpoint among its interior vertices.
std::vector<MidEdge> contour_boundary(const Domain& domain);

/// Sum of vertex residuals over all interior vertices.
CycNum contour_integral(const ObservableField& field);

/// Direct boundary sum of (p - v_in(p)) F(p); equal to contour_integral.
CycNum boundary_contour_sum(const ObservableField& field);

/// Winding (units of pi/3) forced on every walk from a to the boundary
/// mid-edge z of a convex built-in domain.
int predicted_boundary_winding(const Domain& domain, MidEdge a, MidEdge z);

} // namespace hexwalk
