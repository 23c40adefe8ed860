#include "hexwalk/constructions.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "hexwalk/enumerator.hpp"

namespace hexwalk {

namespace {

std::vector<MidEdge> slice(const Walk& w, std::size_t first, std::size_t last) {
    return {w.mids().begin() + static_cast<std::ptrdiff_t>(first), w.mids().begin() + static_cast<std::ptrdiff_t>(last) + 1};
}

// Reflects the part after the last maximum about that maximum until the walk
// ends at its maximum. w[0] must be a minimum.
std::vector<MidEdge> unfold_half(std::vector<MidEdge> w, int& reflections) {
    for (;;) {
        int top = w[0].xq;
        std::size_t at = 0;
        for (std::size_t t = 0; t < w.size(); ++t)
            if (w[t].xq >= top) {
                top = w[t].xq;
                at = t;
            }
        if (at + 1 == w.size()) return w;
        for (std::size_t t = at + 1; t < w.size(); ++t) w[t] = reflect_vertical_line(w[t], top);
        ++reflections;
    }
}

bool all_inside(const Walk& w, const Domain& d) {
    return std::all_of(w.mids().begin(), w.mids().end(), [&](MidEdge m) { return d.contains(m); });
}

// One uniform random growth inside d from start until stuck; nullopt when it
// stops somewhere `accept` rejects.
template <class Accept>
std::optional<Walk> grow(const Domain& d, MidEdge start, std::mt19937_64& rng, Accept accept) {
    std::vector<MidEdge> path{start};
    std::set<MidEdge> seen{start};
    std::optional<LatticeVertex> entry;
    for (;;) {
        const MidEdge cur = path.back();
        std::vector<Neighbor> options;
        for (const auto& nb : neighbors(cur))
            if ((!entry || nb.via != *entry) && d.contains(nb.mid) && !seen.count(nb.mid)) options.push_back(nb);
        if (options.empty()) break;
        const auto& pick = options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
        entry = pick.via;
        path.push_back(pick.mid);
        seen.insert(pick.mid);
    }
    if (!accept(path.back(), path.size() - 1)) return std::nullopt;
    return Walk(std::move(path));
}

template <class Accept>
Walk grow_until(const Domain& d, MidEdge start, std::mt19937_64& rng, Accept accept) {
    for (int attempt = 0; attempt < 1'000'000; ++attempt)
        if (auto w = grow(d, start, rng, accept)) return *w;
    throw ResourceError("random growth in " + d.name() + " found no admissible walk");
}

} // namespace

HalfPlaneConstraint renewal_line(int i) { return {3, 1, 12L * i + 6, SideLabel::Generic}; }

nlohmann::json RenewalProfile::to_json() const {
    return {{"walk", walk_to_json(walk)}, {"k", k}, {"renewal_indices", indices}, {"N", N}};
}

RenewalProfile renewal_times(const Walk& walk, int k) {
    if (walk.empty() || walk.front() != MidEdge{0, 0}) throw ContractError("renewal times need a walk from the origin");
    const Domain tri = Domain::triangle(k);
    if (!all_inside(walk, tri)) throw ContractError("walk leaves " + tri.name());
    RenewalProfile p{walk, k, {}, 0};
    for (int i = 0; i <= k; ++i) {
        const auto line = renewal_line(i);
        // Each side line meets edges only at their midpoints, so every visit
        // to a mid-edge on it is one crossing.
        const auto hits = std::count_if(walk.mids().begin(), walk.mids().end(), [&](MidEdge m) { return line.on_line(m); });
        if (hits == 1) p.indices.push_back(i);
    }
    p.N = static_cast<int>(p.indices.size());
    return p;
}

bool is_bridge(const Walk& walk) {
    if (walk.empty() || walk.front().yq != 0) return false;
    const int top = walk.back().yq;
    if (top < 0 || top % 6 != 0) return false;
    return std::all_of(walk.mids().begin(), walk.mids().end(), [&](MidEdge m) { return m.yq >= 0 && m.yq <= top; });
}

int bridge_height(const Walk& walk) {
    if (!is_bridge(walk)) throw ContractError("not a bridge");
    return walk.back().yq / 6;
}

bool is_x_bridge(const Walk& walk) {
    if (walk.empty()) return false;
    const int lo = walk.front().xq, hi = walk.back().xq;
    return std::all_of(walk.mids().begin(), walk.mids().end(), [&](MidEdge m) { return lo <= m.xq && m.xq <= hi; });
}

UnfoldResult hw_unfold(const Walk& walk) {
    if (walk.empty()) throw ContractError("cannot unfold an empty walk");
    const auto& g = walk.mids();
    const std::size_t n = g.size() - 1;
    std::size_t t0 = 0;
    for (std::size_t t = 1; t <= n; ++t)
        if (g[t].xq < g[t0].xq) t0 = t;
    UnfoldResult out;
    if (t0 == 0) {
        out.bridge = Walk::trusted(unfold_half(g, out.reflections));
        return out;
    }
    std::vector<MidEdge> first(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(t0) + 1);
    std::reverse(first.begin(), first.end());
    auto b1 = unfold_half(std::move(first), out.reflections);
    // An interior minimum is a vertical mid-edge on an even column; only a
    // final slanted minimum needs the neighbouring mirror.
    const int x_min = g[t0].xq;
    const int axis = x_min % 2 == 0 ? x_min : x_min - 1;
    for (auto& m : b1) m = reflect_vertical_line(m, axis);
    std::reverse(b1.begin(), b1.end());
    ++out.reflections;
    if (t0 < n) {
        auto b2 = unfold_half(std::vector<MidEdge>(g.begin() + static_cast<std::ptrdiff_t>(t0), g.end()), out.reflections);
        b1.insert(b1.end(), b2.begin() + 1, b2.end());
    }
    out.bridge = Walk::trusted(std::move(b1));
    return out;
}

nlohmann::json DecompositionRecord::to_json() const {
    nlohmann::json bs = nlohmann::json::array(), cs = nlohmann::json::array();
    for (const auto& b : bridges) bs.push_back(walk_to_json(b));
    for (const auto& c : connectors) cs.push_back(walk_to_json(c));
    return {{"n", n},          {"m", m},          {"s", s},          {"w", w},
            {"i0", i0},        {"alpha", walk_to_json(alpha)},         {"tau", walk_to_json(tau)},
            {"bridges", bs},   {"connectors", cs}, {"visits", visits}, {"visit_sums", visit_sums}};
}

DecompositionRecord bridge_decompose(const Walk& bridge, int m, int w) {
    const int height = bridge_height(bridge);
    if (w < 0) w = height;
    if (m < 1) throw ContractError("m must be positive");
    if (w < m || w > height)
        throw ContractError("height " + std::to_string(height) + " too small for m = " + std::to_string(m) +
                            ", w = " + std::to_string(w));
    const auto& g = bridge.mids();
    const std::size_t n = g.size() - 1;
    const int s = w / m - 1;

    struct Times {
        std::vector<std::size_t> lo, hi;
        std::vector<int> visits;
        int total = 0;
    };
    auto times_for = [&](int i) {
        Times t;
        std::size_t prev_hi = 0;
        for (int j = 0; j <= s; ++j) {
            const int yq = 6 * (j * m + i);
            std::size_t hi = 0;
            for (std::size_t u = 0; u <= n; ++u)
                if (g[u].yq == yq) hi = u;
            std::size_t lo = prev_hi;
            while (g[lo].yq != yq) ++lo;
            int count = 0;
            for (std::size_t u = lo; u <= hi; ++u)
                if (g[u].yq == yq) ++count;
            t.lo.push_back(lo);
            t.hi.push_back(hi);
            t.visits.push_back(count);
            t.total += count;
            prev_hi = hi;
        }
        return t;
    };

    DecompositionRecord rec;
    rec.n = static_cast<int>(n);
    rec.m = m;
    rec.s = s;
    rec.w = w;
    std::optional<Times> best;
    for (int i = 0; i < m; ++i) {
        Times t = times_for(i);
        rec.visit_sums.push_back(t.total);
        if (!best || t.total < best->total) {
            best = std::move(t);
            rec.i0 = i;
        }
    }
    const Times& t = *best;
    rec.alpha = Walk::trusted(slice(bridge, 0, t.lo[0]));
    for (int j = 0; j <= s; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        rec.connectors.push_back(Walk::trusted(slice(bridge, t.lo[ju], t.hi[ju])));
        if (j < s) rec.bridges.push_back(Walk::trusted(slice(bridge, t.hi[ju], t.lo[ju + 1])));
    }
    rec.tau = Walk::trusted(slice(bridge, t.hi[static_cast<std::size_t>(s)], n));
    rec.visits = t.visits;
    return rec;
}

Walk reconstruct(const DecompositionRecord& rec) {
    std::vector<MidEdge> out = rec.alpha.mids();
    auto append = [&](const Walk& piece) {
        if (piece.empty() || out.back() != piece.front()) throw ContractError("decomposition pieces do not chain");
        out.insert(out.end(), piece.mids().begin() + 1, piece.mids().end());
    };
    for (std::size_t j = 0; j < rec.connectors.size(); ++j) {
        append(rec.connectors[j]);
        if (j < rec.bridges.size()) append(rec.bridges[j]);
    }
    append(rec.tau);
    return Walk(std::move(out));
}

std::string to_string(ConcatenationFault f) {
    switch (f) {
    case ConcatenationFault::EmptyWalk: return "empty-walk";
    case ConcatenationFault::ParameterRange: return "parameter-range";
    case ConcatenationFault::BadStart: return "bad-start";
    case ConcatenationFault::OutsideDomain: return "outside-domain";
    case ConcatenationFault::WrongEndSide: return "wrong-end-side";
    case ConcatenationFault::MissingThirdWalk: return "missing-third-walk";
    case ConcatenationFault::UnexpectedThirdWalk: return "unexpected-third-walk";
    case ConcatenationFault::EndpointMismatch: return "endpoint-mismatch";
    case ConcatenationFault::SelfIntersection: return "self-intersection";
    case ConcatenationFault::LeavesHalfPlane: return "leaves-half-plane";
    case ConcatenationFault::NotOnRealAxis: return "not-on-real-axis";
    case ConcatenationFault::DistanceBound: return "distance-bound";
    }
    return "unknown";
}

mpq_class trapezoid_bottom_length(int i, MidEdge x) {
    const Domain trap = Domain::trapezoid(i, x);
    std::optional<mpq_class> left, right;
    for (const auto& h : trap.constraints()) {
        if (h.a == 0) continue;
        const mpq_class at_axis = ratio(h.c, h.a);
        if (h.label == SideLabel::LeftSide) left = at_axis;
        if (h.label == SideLabel::RightSide) right = at_axis;
    }
    if (!left || !right) throw ContractError("trapezoid without slanted sides");
    mpq_class len = (*right - *left) / 4;
    return abs(len);
}

Walk gm_concatenate(const Walk& g1, const Walk& g2, const std::optional<Walk>& g3, const GluingParams& p) {
    using F = ConcatenationFault;
    if (g1.empty() || g2.empty() || (g3 && g3->empty())) throw ConcatenationError(F::EmptyWalk, "every piece needs a mid-edge");
    if (p.T < 1 || p.k < p.T || p.k > 2 * p.T - 1 || p.i < 4 * p.T || p.i > 5 * p.T - 1)
        throw ConcatenationError(F::ParameterRange, "need T <= k <= 2T-1 and 4T <= i <= 5T-1");
    if (g1.front() != MidEdge{0, 0}) throw ConcatenationError(F::BadStart, "gamma1 must start at the origin");
    const Domain tri = Domain::triangle(p.k);
    if (!all_inside(g1, tri)) throw ConcatenationError(F::OutsideDomain, "gamma1 leaves " + tri.name());
    if (!tri.on_side(g1.back(), SideLabel::RightSide))
        throw ConcatenationError(F::WrongEndSide, "gamma1 must end on the right side of " + tri.name());

    const MidEdge x = g1.back();
    if (g2.front() != x) throw ConcatenationError(F::EndpointMismatch, "gamma2 must start at " + to_string(x));
    const Domain trap = Domain::trapezoid(p.i, x);
    if (!all_inside(g2, trap)) throw ConcatenationError(F::OutsideDomain, "gamma2 leaves " + trap.name());
    const MidEdge y = g2.back();
    int two_r = 0;
    if (g2.length() > 0 && trap.on_side(y, SideLabel::BottomSide)) {
        if (g3) throw ConcatenationError(F::UnexpectedThirdWalk, "gamma2 already ends on the real axis");
    } else if (g2.length() > 0 && trap.on_side(y, SideLabel::RightSide)) {
        if (!g3) throw ConcatenationError(F::MissingThirdWalk, "gamma2 ends on the right side at " + to_string(y));
        two_r = y.yq / 3;
        if (g3->front() != y) throw ConcatenationError(F::EndpointMismatch, "gamma3 must start at " + to_string(y));
        const Domain small = Domain::small_triangle(y, two_r);
        if (!all_inside(*g3, small)) throw ConcatenationError(F::OutsideDomain, "gamma3 leaves " + small.name());
        if (!small.on_side(g3->back(), SideLabel::RealAxis))
            throw ConcatenationError(F::WrongEndSide, "gamma3 must end on the real axis");
    } else {
        throw ConcatenationError(F::WrongEndSide, "gamma2 must end on the bottom or right side of " + trap.name());
    }

    std::vector<MidEdge> all = g1.mids();
    all.insert(all.end(), g2.mids().begin() + 1, g2.mids().end());
    if (g3) all.insert(all.end(), g3->mids().begin() + 1, g3->mids().end());
    if (!Walk::is_valid_sequence(all)) throw ConcatenationError(F::SelfIntersection, "concatenation is not self-avoiding");
    for (MidEdge m : all)
        if (m.yq < 0) throw ConcatenationError(F::LeavesHalfPlane, to_string(m) + " lies below the real axis");
    const MidEdge e = all.back();
    if (e.yq != 0) throw ConcatenationError(F::NotOnRealAxis, "ends at " + to_string(e));
    const mpq_class reach = 2 * p.T + trapezoid_bottom_length(p.i, x) + two_r;
    if (ratio(std::abs(e.xq), 4) > reach)
        throw ConcatenationError(F::DistanceBound, "endpoint " + to_string(e) + " beyond 2T + l + 2r = " + reach.get_str());
    return Walk(std::move(all));
}

GluingTriple random_gluing_triple(std::mt19937_64& rng, int T) {
    GluingTriple out;
    out.params.T = T;
    out.params.k = std::uniform_int_distribution<int>(T, 2 * T - 1)(rng);
    out.params.i = std::uniform_int_distribution<int>(4 * T, 5 * T - 1)(rng);
    const bool case_a = std::bernoulli_distribution(0.5)(rng);

    const Domain tri = Domain::triangle(out.params.k);
    out.g1 = grow_until(tri, {0, 0}, rng, [&](MidEdge m, std::size_t) { return tri.on_side(m, SideLabel::RightSide); });
    const MidEdge x = out.g1.back();
    const Domain trap = Domain::trapezoid(out.params.i, x);
    if (case_a) {
        out.g2 = grow_until(trap, x, rng, [&](MidEdge m, std::size_t len) {
            return len > 0 && trap.on_side(m, SideLabel::BottomSide);
        });
        return out;
    }
    out.g2 = grow_until(trap, x, rng, [&](MidEdge m, std::size_t len) {
        return len > 0 && m.yq > 0 && trap.on_side(m, SideLabel::RightSide);
    });
    const MidEdge y = out.g2.back();
    const Domain small = Domain::small_triangle(y, y.yq / 3);
    out.g3 = grow_until(small, y, rng, [&](MidEdge m, std::size_t) { return small.on_side(m, SideLabel::RealAxis); });
    return out;
}

nlohmann::json PreimageSurvey::to_json() const {
    auto hist = nlohmann::json::array();
    for (const auto& [n, c] : splittings) hist.push_back({{"splittings", n}, {"walks", c}});
    return {{"k", k}, {"i", i}, {"walks", walks}, {"max_splittings", max_splittings}, {"histogram", hist}};
}

PreimageSurvey preimage_survey(int k, int i, int max_renewals, std::uint64_t budget) {
    if (k < 0 || i < 0) throw ContractError("preimage survey needs k, i >= 0");
    const Domain tri = Domain::triangle(k);
    auto collect = [&](const Domain& d, MidEdge start, SideLabel side, int min_length) {
        EnumSpec spec;
        spec.domain = d;
        spec.start = start;
        spec.max_length = static_cast<int>(d.mids().size()) - 1;
        spec.filter = EndpointFilter::on_sides({side}, min_length);
        spec.accumulators = acc::Collector;
        spec.collect_cap = budget;
        spec.budget = budget;
        EnumResult r = enumerate(spec);
        if (r.collector_overflow) throw ResourceError("preimage survey exceeds its walk budget");
        return std::move(r.walks);
    };
    auto admissible = [&](std::span<const MidEdge> w, std::size_t t) {
        std::vector<MidEdge> head(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(t) + 1);
        if (!tri.on_side(head.back(), SideLabel::RightSide)) return false;
        if (renewal_times(Walk::trusted(std::move(head)), k).N > max_renewals) return false;
        const Domain trap = Domain::trapezoid(i, w[t]);
        for (std::size_t s = t; s < w.size(); ++s)
            if (!trap.contains(w[s])) return false;
        return trap.on_side(w.back(), SideLabel::BottomSide);
    };

    PreimageSurvey out;
    out.k = k;
    out.i = i;
    std::map<MidEdge, std::vector<Walk>> tails;
    for (const auto& g1 : collect(tri, {0, 0}, SideLabel::RightSide, 0)) {
        if (renewal_times(g1, k).N > max_renewals) continue;
        const MidEdge x = g1.back();
        auto it = tails.find(x);
        if (it == tails.end())
            it = tails.emplace(x, collect(Domain::trapezoid(i, x), x, SideLabel::BottomSide, 1)).first;
        for (const auto& g2 : it->second) {
            std::vector<MidEdge> all = g1.mids();
            all.insert(all.end(), g2.mids().begin() + 1, g2.mids().end());
            if (!Walk::is_valid_sequence(all)) continue;
            if (std::any_of(all.begin(), all.end(), [](MidEdge m) { return m.yq < 0; })) continue;
            // Count each glued walk once: at its first admissible cut.
            std::size_t exit = 0;
            while (exit < all.size() && tri.contains(all[exit])) ++exit;
            int count = 0;
            std::size_t first = all.size();
            for (std::size_t t = 0; t < exit && t + 1 < all.size(); ++t)
                if (admissible(all, t)) {
                    ++count;
                    first = std::min(first, t);
                }
            if (first != g1.length()) continue;
            ++out.walks;
            ++out.splittings[count];
            out.max_splittings = std::max(out.max_splittings, count);
        }
    }
    return out;
}

std::string DisplacementStats::to_csv() const {
    std::ostringstream os;
    os << "n,sq_displacement_num,sq_displacement_den,count\n";
    for (const auto& [v, c] : squared_max)
        os << n << ',' << v.get_num().get_str() << ',' << v.get_den().get_str() << ',' << c << '\n';
    return os.str();
}

nlohmann::json DisplacementStats::to_json() const {
    nlohmann::json hist = nlohmann::json::array(), p2 = nlohmann::json::array(), p6 = nlohmann::json::array();
    for (const auto& [v, c] : squared_max) hist.push_back({{"sq_displacement", v.get_str()}, {"count", c}});
    for (const auto& [v, c] : max_p_pi2) p2.push_back({{"max_p_pi2", ratio(v, 12).get_str() + "*sqrt3"}, {"count", c}});
    for (const auto& [v, c] : max_p_pi6) p6.push_back({{"max_p_pi6", ratio(v, 24).get_str() + "*sqrt3"}, {"count", c}});
    return {{"n", n}, {"walks", walks}, {"squared_max", hist}, {"max_p_pi2", p2}, {"max_p_pi6", p6}};
}

DisplacementStats displacement_stats(int n, int cap) {
    if (n < 0) throw ContractError("n must be nonnegative");
    if (n > cap) throw ResourceError("n = " + std::to_string(n) + " exceeds the displacement cap " + std::to_string(cap));
    DisplacementStats st;
    st.n = n;
    EnumSpec spec;
    spec.domain = Domain::plane();
    spec.max_length = n;
    std::map<int, std::uint64_t> raw;
    enumerate(spec, [&](std::span<const MidEdge> w, int) {
        if (static_cast<int>(w.size()) != n + 1) return;
        int sq = 0, p2 = w[0].yq, p6 = 3 * w[0].xq + w[0].yq;
        for (MidEdge m : w) {
            sq = std::max(sq, 3 * m.xq * m.xq + m.yq * m.yq);
            p2 = std::max(p2, m.yq);
            p6 = std::max(p6, 3 * m.xq + m.yq);
        }
        ++raw[sq];
        ++st.max_p_pi2[p2];
        ++st.max_p_pi6[p6];
        ++st.walks;
    });
    for (const auto& [sq, c] : raw) {
        st.squared_max[ratio(sq, 48)] += c;
    }
    return st;
}

} // namespace hexwalk
