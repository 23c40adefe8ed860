#include "hexwalk/audit.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "hexwalk/errors.hpp"
#include "hexwalk/observable.hpp"

namespace hexwalk {

namespace {

std::string dec(const CycNum& v) { return approximate(v, 12).first; }

AuditTerm check(std::string name, bool ok, std::string detail) {
    return {std::move(name), ok ? "pass" : "fail", std::move(detail)};
}

std::pair<int, int> range_or(const VerifyParams& p, int lo, int hi) { return p.k_range.value_or(std::pair{lo, hi}); }

std::string kname(const char* what, int k) { return std::string(what) + "(k=" + std::to_string(k) + ")"; }

ObservableOptions observable_options(const VerifyParams& p) {
    ObservableOptions o;
    o.x = p.ctx.x;
    o.workers = p.ctx.workers;
    o.cache = p.ctx.cache;
    o.budget = p.ctx.budget;
    return o;
}

std::vector<std::pair<int, MidEdge>> trapezoids(const VerifyParams& p) {
    auto t = default_trapezoids();
    if (p.slow) t.push_back({4, {1, 3}});
    return t;
}

struct Instance {
    std::string name;
    Domain domain;
    MidEdge a;
};

std::vector<Instance> observable_instances(const VerifyParams& p) {
    std::vector<Instance> out;
    const auto [lo, hi] = range_or(p, 0, 3);
    for (int k = lo; k <= hi; ++k) {
        if (k > p.ctx.triangle_cap)
            throw ResourceError("Tria_" + std::to_string(2 * k + 1) + " exceeds the triangle cap");
        out.push_back({"Tria_" + std::to_string(2 * k + 1), Domain::triangle(k), MidEdge{0, 0}});
    }
    for (const auto& [i, x] : trapezoids(p)) {
        Domain d = Domain::trapezoid(i, x);
        out.push_back({d.name(), d, x});
    }
    return out;
}

std::vector<AuditTerm> suite_vertex(const VerifyParams& p) {
    std::vector<AuditTerm> out;
    for (const auto& inst : observable_instances(p)) {
        const auto field = compute_observable(inst.domain, inst.a, observable_options(p));
        const auto verts = inst.domain.interior_vertices();
        std::size_t bad = 0;
        std::string first;
        for (const auto& v : verts) {
            const CycNum r = vertex_residual(field, v);
            if (r.is_zero()) continue;
            if (bad++ == 0)
                first = "; first nonzero at vertex (" + std::to_string(v.xq) + "," + std::to_string(v.yq) +
                        "): re " + approximate(r).first + ", im " + approximate(r).second;
        }
        out.push_back(check("vertex-relation:" + inst.name, bad == 0,
                            std::to_string(verts.size()) + " interior vertices, " + std::to_string(bad) +
                                " nonzero residuals, " + std::to_string(field.walks) + " walks" + first));
    }
    return out;
}

std::vector<AuditTerm> suite_contour(const VerifyParams& p) {
    std::vector<AuditTerm> out;
    for (const auto& inst : observable_instances(p)) {
        const auto field = compute_observable(inst.domain, inst.a, observable_options(p));
        const CycNum telescoped = contour_integral(field);
        const CycNum direct = boundary_contour_sum(field);
        out.push_back(check("contour:" + inst.name, telescoped.is_zero() && direct.is_zero(),
                            "telescoped re " + dec(telescoped) + ", direct re " + dec(direct)));
        out.push_back(check("contour-agreement:" + inst.name, telescoped == direct,
                            "telescoped and direct boundary sums compared exactly"));
        std::size_t mismatched = 0, checked = 0;
        for (const auto& z : contour_boundary(inst.domain)) {
            auto it = field.windings.find(z);
            if (it == field.windings.end()) continue;
            const int w = predicted_boundary_winding(inst.domain, inst.a, z);
            const int wmod = ((w % 48) + 48) % 48;
            ++checked;
            if (it->second.size() != 1 || it->second.front() != wmod) ++mismatched;
        }
        out.push_back(check("boundary-winding:" + inst.name, mismatched == 0,
                            std::to_string(checked) + " reached boundary mid-edges, " + std::to_string(mismatched) +
                                " with a winding other than the predicted one"));
    }
    return out;
}

std::vector<AuditTerm> suite_eq22(const VerifyParams& p) {
    std::vector<AuditTerm> out;
    const auto [lo, hi] = range_or(p, 0, p.slow ? 4 : 2);
    for (int k = lo; k <= hi; ++k) {
        const auto v = triangle_D(k, p.ctx);
        const CycNum r = eq22_residual(v);
        out.push_back(check(kname("eq22", k), r.is_zero(),
                            "D=" + dec(v.D) + ", A=" + dec(v.A) + ", residual re " + dec(r) + " im " +
                                approximate(r).second));
        if (k == 0) {
            const CycNum two_xc = CycNum(2) * constant(Constant::Xc);
            out.push_back(check("eq22-forced(D_1=2x_c,A_1=0)", v.D == two_xc && v.A.is_zero(),
                                "D_1=" + dec(v.D) + ", 2x_c=" + dec(two_xc) + ", A_1=" + dec(v.A)));
        }
    }
    return out;
}

std::vector<int> caps_for(int cap) {
    std::vector<int> caps{cap / 2, (3 * cap) / 4, cap};
    caps.erase(std::unique(caps.begin(), caps.end()), caps.end());
    return caps;
}

std::string caps_text(const std::vector<int>& caps) {
    std::string s;
    for (int c : caps) s += (s.empty() ? "" : ",") + std::to_string(c);
    return s;
}

std::vector<AuditTerm> suite_eq21(const VerifyParams& p) {
    std::vector<AuditTerm> out;
    const auto [lo, hi] = range_or(p, 1, 3);
    const auto caps = caps_for(p.cap);
    for (int k = lo; k <= hi; ++k) {
        std::vector<CycNum> widths;
        bool consistent = true;
        for (int cap : caps) {
            const auto b = strip_B(k, cap, p.ctx);
            consistent = consistent && b.consistent();
            widths.push_back(*b.width());
        }
        out.push_back(check(kname("eq21-nonempty", k), consistent, "lower <= upper at L=" + caps_text(caps)));
        const bool narrow = compare_real(widths.back(), CycNum(mpq_class(1, 10))) <= 0;
        out.push_back(check(kname("eq21-width", k), narrow,
                            "width at L=" + std::to_string(caps.back()) + " is " + dec(widths.back()) + " (<= 0.1)"));
        bool shrinking = true;
        std::string trail;
        for (std::size_t j = 0; j < widths.size(); ++j) {
            trail += (j ? " > " : "") + dec(widths[j]);
            if (j > 0) shrinking = shrinking && compare_real(widths[j], widths[j - 1]) < 0;
        }
        out.push_back(check(kname("eq21-shrinking", k), shrinking, "widths " + trail));
    }
    return out;
}

std::vector<AuditTerm> suite_trapezoid(const VerifyParams& p) {
    std::vector<AuditTerm> out;
    for (const auto& [i, x] : trapezoids(p)) {
        const auto t = trapezoid_F(i, x, p.ctx);
        const std::string name = Domain::trapezoid(i, x).name();
        const CycNum r = t.identity_residual();
        out.push_back(check("trapezoid-identity:" + name, r.is_zero(),
                            "FL=" + dec(t.FL) + " FR=" + dec(t.FR) + " FT=" + dec(t.FT) + " FB=" + dec(t.FB) +
                                ", residual " + dec(r)));
        out.push_back(check("trapezoid-FB-bound:" + name, real_sign(t.fb_margin()) >= 0,
                            "cos(pi/4) FB - cos(pi/8) D^- = " + dec(t.fb_margin()) + ", D^-=" + dec(t.D_minus)));
    }
    return out;
}

std::vector<AuditTerm> suite_monotonicity(const VerifyParams& p) {
    std::vector<AuditTerm> out;
    const int kmax = p.k_range ? p.k_range->second : (p.slow ? 4 : 2);
    if (kmax > p.ctx.triangle_cap) throw ResourceError("D_" + std::to_string(2 * kmax + 1) + " exceeds the triangle cap");
    CycNum prev = D_index(0, p.ctx);
    std::string trail = "D_0=" + dec(prev);
    bool ok = true;
    for (int k = 0; k <= kmax; ++k) {
        const CycNum d = D_index(2 * k + 1, p.ctx);
        ok = ok && compare_real(d, prev) <= 0;
        trail += " >= D_" + std::to_string(2 * k + 1) + "=" + dec(d);
        prev = d;
    }
    out.push_back(check("D-nonincreasing(k<=" + std::to_string(kmax) + ")", ok, trail));

    const int bmax = 3;
    std::vector<PartitionBracket> B;
    for (int k = 0; k <= bmax; ++k) B.push_back(strip_B(k, p.cap, p.ctx));
    bool consistent = true;
    for (int k = 0; k < bmax; ++k)
        consistent = consistent && compare_real(B[static_cast<std::size_t>(k) + 1].lower,
                                                *B[static_cast<std::size_t>(k)].upper) <= 0;
    out.push_back(check("B-nonincreasing-consistent(k<=3)", consistent,
                        "lower(B_{k+1}) <= upper(B_k) at L=" + std::to_string(p.cap)));

    for (int k = 0; k <= bmax && k <= 2 * p.ctx.triangle_cap + 2; ++k) {
        if (k > 2 * kmax + 2) break;
        const CycNum rhs = constant(Constant::CosPi8) * D_index(k, p.ctx);
        const auto& b = B[static_cast<std::size_t>(k)];
        out.push_back(check(kname("B-upper-vs-D", k), compare_real(*b.upper, rhs) <= 0,
                            "upper(B_k)=" + dec(*b.upper) + " <= cos(pi/8) D_k=" + dec(rhs)));
    }

    for (int k = 0; k <= std::min(kmax, 2); ++k) {
        const int h = 2 * k + 1;
        const auto tri = triangle_A_counts(k, p.ctx);
        const auto strip = strip_A_counts(h, p.cap, p.ctx);
        bool dominated = true;
        const std::size_t n = std::min(tri.size(), strip.size());
        for (std::size_t l = 0; l < n; ++l) dominated = dominated && tri[l] <= strip[l];
        out.push_back(check(kname("A-triangle-le-A-strip", k), dominated,
                            "term-by-term through length " + std::to_string(n ? n - 1 : 0)));
    }
    return out;
}

std::vector<AuditTerm> suite_halfplane(const VerifyParams& p) {
    std::vector<AuditTerm> out;
    const CycNum bound = CycNum(1) / (CycNum(2) * constant(Constant::Cos3Pi8));
    for (int cap : caps_for(p.cap)) {
        const CycNum sum = halfplane_G_tail(1, cap, p.ctx);
        out.push_back(check("G-sum(L=" + std::to_string(cap) + ")", compare_real(sum, bound) <= 0,
                            "truncated sum " + dec(sum) + " <= 1/(2cos(3pi/8)) = " + dec(bound)));
    }
    const auto [lo, hi] = range_or(p, 1, 2);
    for (int T = lo; T <= hi; ++T) {
        const CycNum tail = halfplane_G_tail(T, p.cap, p.ctx);
        const CycNum rhs = constant(Constant::CosPi8) * bound * D_index(2 * T - 1, p.ctx);
        out.push_back(check("G-tail(T=" + std::to_string(T) + ")", compare_real(tail, rhs) <= 0,
                            "truncated tail " + dec(tail) + " <= cos(pi/8)/(2cos(3pi/8)) D_" +
                                std::to_string(2 * T - 1) + " = " + dec(rhs)));
    }
    return out;
}

std::vector<AuditTerm> suite_renewal(const VerifyParams& p) {
    std::vector<AuditTerm> out;
    const auto [lo, hi] = range_or(p, 1, p.slow ? 3 : 2);
    for (int k = lo; k <= hi; ++k) {
        const auto e = renewal_expectation(k, p.ctx);
        out.push_back(check(kname("renewal-expectation", k), e.within(),
                            "E[N]=" + dec(e.expectation) + " <= bound " + dec(e.bound) + ", M_k=" + dec(e.M)));

        const auto td = triangle_data(k, p.ctx);
        CycNum total, total_ren;
        bool ren_le = true;
        for (const auto& [x, v] : per_endpoint_D(k, p.ctx)) {
            total += v.D;
            total_ren += v.D_ren;
            ren_le = ren_le && compare_real(v.D_ren, v.D) <= 0;
        }
        out.push_back(check(kname("endpoint-decomposition", k), total == td.D && ren_le,
                            "sum_x D(x) = D exactly; D^ren(x) <= D(x) at every endpoint"));
        // Markov: the mass with N > M is at most E[N] D / M.
        const CycNum excess = td.D - total_ren;
        out.push_back(check(kname("markov", k), compare_real(excess * e.M, e.expectation * td.D) <= 0,
                            "D - D^ren = " + dec(excess)));
        for (int i = 0; i <= k; ++i) {
            const CycNum delta = offset_delta(k, i, p.ctx);
            const CycNum d = D_index(2 * i + 1, p.ctx);
            out.push_back(check("offset-delta(k=" + std::to_string(k) + ",i=" + std::to_string(i) + ")",
                                compare_real(delta, d) <= 0,
                                "Delta=" + dec(delta) + " <= D_" + std::to_string(2 * i + 1) + "=" + dec(d)));
        }
    }
    return out;
}

std::vector<AuditTerm> suite_brackets(const VerifyParams& p) {
    std::vector<AuditTerm> out;
    const auto caps = caps_for(p.cap);
    for (int k = 0; k <= 3; ++k) {
        std::vector<PartitionBracket> bs;
        for (int cap : caps) bs.push_back(strip_B(k, cap, p.ctx));
        bool ok = true;
        for (std::size_t j = 0; j < bs.size(); ++j) {
            ok = ok && bs[j].consistent();
            if (j > 0)
                ok = ok && compare_real(bs[j - 1].lower, bs[j].lower) <= 0 &&
                     compare_real(*bs[j].upper, *bs[j - 1].upper) <= 0;
        }
        out.push_back(check(kname("B-bracket-nested", k), ok, "lower rises, upper falls over L=" + caps_text(caps)));
    }
    {
        const int kmax = caps.front() / 2 + 1;
        bool ok = true;
        std::vector<PartitionBracket> prev;
        for (int cap : caps) {
            auto cur = halfplane_G(1, kmax, cap, p.ctx);
            for (std::size_t j = 0; j < cur.size(); ++j) {
                ok = ok && real_sign(cur[j].lower) >= 0;
                if (!prev.empty()) ok = ok && compare_real(prev[j].lower, cur[j].lower) <= 0;
            }
            prev = std::move(cur);
        }
        out.push_back(check("G-lower-monotone-in-cap", ok,
                            "G_1..G_" + std::to_string(kmax) + " over L=" + caps_text(caps)));
    }
    const int table_k = std::min(p.slow ? 4 : 3, p.ctx.triangle_cap);
    for (auto& t : recurrence_audit(1, p.cap, table_k, p.ctx)) out.push_back(std::move(t));
    for (auto& t : vacuous_decay_check(2 * std::min(p.slow ? 4 : 2, p.ctx.triangle_cap) + 2, p.ctx))
        out.push_back(std::move(t));
    if (p.slow)
        for (auto& t : case_report(1, p.ctx)) out.push_back(std::move(t));
    else
        out.push_back({"case-ab(T=1)", "inconclusive", "needs Tria_9 and D^- on Tria_9; run with --slow"});
    return out;
}

using SuiteFn = std::function<std::vector<AuditTerm>(const VerifyParams&)>;

const std::map<std::string, SuiteFn>& registry() {
    static const std::map<std::string, SuiteFn> r{
        {"vertex-relation", suite_vertex}, {"contour", suite_contour},         {"eq21", suite_eq21},
        {"eq22", suite_eq22},              {"trapezoid", suite_trapezoid},     {"monotonicity", suite_monotonicity},
        {"lemma27", suite_halfplane},        {"lemma31", suite_renewal},         {"bracket-consistency", suite_brackets},
    };
    return r;
}

} // namespace

std::vector<std::pair<int, MidEdge>> default_trapezoids() {
    return {{2, {5, 3}}, {3, {5, 3}}, {2, {3, 9}}, {3, {3, 9}}, {3, {5, 15}}};
}

bool SuiteReport::failed() const {
    return std::any_of(checks.begin(), checks.end(), [](const AuditTerm& t) { return t.status == "fail"; });
}

nlohmann::json SuiteReport::to_json() const {
    nlohmann::json j{{"suite", suite}, {"status", failed() ? "fail" : "pass"}, {"checks", nlohmann::json::array()}};
    for (const auto& t : checks) j["checks"].push_back(hexwalk::to_json(t));
    return j;
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"vertex-relation", "contour",      "eq21",
                                                "eq22",            "trapezoid",    "monotonicity",
                                                "lemma27",         "lemma31",      "bracket-consistency"};
    return names;
}

SuiteReport run_suite(const std::string& name, const VerifyParams& params) {
    if (params.cap < 1) throw ContractError("cap must be positive");
    const auto& r = registry();
    auto it = r.find(name);
    if (it == r.end()) throw ContractError("unknown verify suite '" + name + "'");
    return {name, it->second(params)};
}

} // namespace hexwalk
