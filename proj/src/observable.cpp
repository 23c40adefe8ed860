#include "hexwalk/observable.hpp"

#include <algorithm>
#include <set>

#include "hexwalk/cache.hpp"
#include "hexwalk/enumerator.hpp"
#include "hexwalk/errors.hpp"

namespace hexwalk {

namespace {

std::set<LatticeVertex> vertex_set(const Domain& d) {
    const auto vs = d.interior_vertices();
    return {vs.begin(), vs.end()};
}

// The endpoint of a boundary mid-edge that lies in V(domain).
LatticeVertex inner_endpoint(const std::set<LatticeVertex>& inner, MidEdge p) {
    const auto ends = endpoints(p);
    const bool in0 = inner.count(ends[0]) > 0;
    const bool in1 = inner.count(ends[1]) > 0;
    if (in0 == in1) throw ContractError(to_string(p) + " is not a boundary mid-edge");
    return in0 ? ends[0] : ends[1];
}

// (p - v) = (sqrt 3 / 6) zeta^d.
CycNum lever(LatticeVertex v, MidEdge p) {
    static const CycNum scale = constant(Constant::Sqrt3) * CycNum(mpq_class(1, 6));
    return scale.times_zeta_pow(direction_exponent(v, p));
}

} // namespace

CycNum ObservableField::value(MidEdge z) const {
    auto it = values.find(z);
    return it == values.end() ? CycNum() : it->second;
}

nlohmann::json ObservableField::to_json() const {
    nlohmann::json vals = nlohmann::json::array();
    for (const auto& [m, v] : values) {
        nlohmann::json e{{"mid", {m.xq, m.yq}}, {"value", v}};
        auto it = windings.find(m);
        if (it != windings.end()) e["winding_mod48"] = it->second;
        vals.push_back(e);
    }
    return {{"domain", domain.to_json()}, {"a", {a.xq, a.yq}}, {"sigma_eighths", sigma_eighths},
            {"x", x}, {"cap", cap}, {"exact", exact}, {"walks", walks}, {"values", vals}};
}

ObservableField compute_observable(const Domain& domain, MidEdge a, const ObservableOptions& opts) {
    int cap = opts.cap;
    if (cap < 0) {
        if (!domain.bounded()) throw ContractError("an explicit length cap is required on " + domain.name());
        cap = std::max<int>(0, static_cast<int>(domain.mids().size()) - 1);
    }
    EnumSpec spec;
    spec.domain = domain;
    spec.start = a;
    spec.max_length = cap;
    spec.accumulators = acc::Phase;
    if (opts.x) spec.x = *opts.x;
    spec.sigma_eighths = opts.sigma_eighths;
    spec.budget = opts.budget;
    const EnumResult r = run_enumeration(spec, opts.workers, opts.cache);

    ObservableField f;
    f.domain = domain;
    f.a = a;
    f.sigma_eighths = opts.sigma_eighths;
    f.x = spec.x;
    f.cap = cap;
    f.values = r.phase_sum;
    f.exact = domain.bounded() && !r.truncated;
    f.walks = r.total_walks();
    for (std::size_t s = 0; s < r.endpoints.size(); ++s)
        for (int w = 0; w < CycNum::kOrder; ++w)
            for (int l = 0; l <= r.max_length; ++l)
                if (r.winding_tally(s, l, w)) {
                    f.windings[r.endpoints[s]].push_back(w);
                    break;
                }
    return f;
}

int direction_exponent(LatticeVertex v, MidEdge p) {
    const int dx = p.xq - v.xq;
    const int dy = p.yq - v.yq;
    if (dx == 0 && dy == -2) return 36;
    if (dx == 1 && dy == 1) return 4;
    if (dx == -1 && dy == 1) return 20;
    if (dx == 0 && dy == 2) return 12;
    if (dx == 1 && dy == -1) return 44;
    if (dx == -1 && dy == -1) return 28;
    throw ContractError(to_string(p) + " is not a mid-edge of the vertex at (" + std::to_string(v.xq) + "," +
                        std::to_string(v.yq) + ")");
}

CycNum vertex_residual(const ObservableField& field, LatticeVertex v) {
    if (!field.exact) throw ContractError("vertex relation needs an exact field");
    CycNum sum;
    for (MidEdge p : mids_around(v)) {
        if (!field.domain.contains(p)) throw ContractError("mid-edge " + to_string(p) + " outside the domain");
        sum += lever(v, p) * field.value(p);
    }
    return sum;
}

std::vector<MidEdge> contour_boundary(const Domain& domain) {
    if (!domain.bounded()) throw ContractError("contour of unbounded domain " + domain.name());
    const auto inner = vertex_set(domain);
    std::vector<MidEdge> out;
    for (MidEdge m : domain.mids()) {
        const auto ends = endpoints(m);
        if ((inner.count(ends[0]) > 0) != (inner.count(ends[1]) > 0)) out.push_back(m);
    }
    return out;
}

CycNum contour_integral(const ObservableField& field) {
    if (!field.domain.bounded()) throw ContractError("contour of unbounded domain " + field.domain.name());
    const auto boundary = contour_boundary(field.domain);
    if (!std::binary_search(boundary.begin(), boundary.end(), field.a))
        throw ContractError("start " + to_string(field.a) + " is not on the boundary");
    CycNum sum;
    for (LatticeVertex v : field.domain.interior_vertices()) sum += vertex_residual(field, v);
    return sum;
}

CycNum boundary_contour_sum(const ObservableField& field) {
    if (!field.exact) throw ContractError("contour sum needs an exact field");
    const auto inner = vertex_set(field.domain);
    CycNum sum;
    for (MidEdge p : contour_boundary(field.domain)) sum += lever(inner_endpoint(inner, p), p) * field.value(p);
    return sum;
}

int predicted_boundary_winding(const Domain& domain, MidEdge a, MidEdge z) {
    if (domain.kind() == DomainKind::Explicit || !domain.bounded())
        throw ContractError("boundary winding is predicted only for bounded polygons");
    if (a == z) return 0;
    const auto inner = vertex_set(domain);
    // Outward directions of the exit edges, in units of pi/6.
    const int alpha_a = direction_exponent(inner_endpoint(inner, a), a) / 4;
    const int alpha_z = direction_exponent(inner_endpoint(inner, z), z) / 4;
    int theta = ((alpha_z - alpha_a) % 12 + 12) % 12;
    if (theta == 0) {
        const int dx = z.xq - a.xq;
        const int dy = z.yq - a.yq;
        const auto& cs = domain.constraints();
        auto side = std::find_if(cs.begin(), cs.end(), [&](const HalfPlaneConstraint& h) {
            return h.on_line(a) && h.on_line(z);
        });
        if (side == cs.end()) throw ContractError("no common side for " + to_string(a) + " and " + to_string(z));
        if (side->a * dy - 3 * side->b * dx <= 0) theta = 12;
    }
    return (theta - 6) / 2;
}

} // namespace hexwalk
