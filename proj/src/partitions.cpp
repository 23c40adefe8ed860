#include "hexwalk/partitions.hpp"

#include <algorithm>

#include "hexwalk/cache.hpp"
#include "hexwalk/errors.hpp"

namespace hexwalk {

namespace {

ResultCache* cache_of(const RunContext& ctx) {
    static ResultCache process_cache;
    return ctx.cache ? ctx.cache : &process_cache;
}

EnumResult run(EnumSpec spec, const RunContext& ctx) {
    spec.x = ctx.weight();
    spec.budget = ctx.budget;
    return run_enumeration(spec, ctx.workers, cache_of(ctx));
}

std::vector<CycNum> powers(const CycNum& x, int n) {
    std::vector<CycNum> p(static_cast<std::size_t>(n) + 1);
    p[0] = CycNum(1);
    for (std::size_t l = 1; l < p.size(); ++l) p[l] = p[l - 1] * x;
    return p;
}

CycNum scaled(const CycNum& v, std::uint64_t count) {
    CycNum out = v;
    out *= mpz_class(std::to_string(count));
    return out;
}

// Sum over lengths >= min_len of tally(len) x^len.
template <class Tally>
CycNum weigh(const std::vector<CycNum>& xp, int max_len, int min_len, Tally tally) {
    CycNum sum;
    for (int l = min_len; l <= max_len; ++l)
        if (auto c = tally(l)) sum += scaled(xp[static_cast<std::size_t>(l)], c);
    return sum;
}

int full_length(const Domain& d) { return std::max<int>(0, static_cast<int>(d.mids().size()) - 1); }

void check_triangle(int k, const RunContext& ctx) {
    if (k < 0) throw ContractError("triangle index must be nonnegative");
    if (k > ctx.triangle_cap)
        throw ResourceError("Tria_" + std::to_string(2 * k + 1) + " exceeds the triangle cap Tria_" +
                            std::to_string(2 * ctx.triangle_cap + 1));
}

void check_length(int cap, const RunContext& ctx) {
    if (cap < 0) throw ContractError("length cap must be nonnegative");
    if (cap > ctx.length_cap)
        throw ResourceError("length cap " + std::to_string(cap) + " exceeds the configured limit " +
                            std::to_string(ctx.length_cap));
}

std::string dec(const CycNum& v, int digits = 12) { return approximate(v, digits).first; }

EnumSpec strip_spec(int k, int cap) {
    if (k < 0) throw ContractError("strip height must be nonnegative");
    EnumSpec spec;
    spec.domain = Domain::strip(k);
    spec.max_length = cap;
    spec.filter = EndpointFilter::on_sides({SideLabel::RealAxis, SideLabel::TopLine});
    spec.accumulators = acc::PerEndpoint;
    return spec;
}

struct RotatedData {
    CycNum D_rot, A_rot, D_minus;
    std::uint64_t walks = 0;
};

RotatedData rotated_data(int i, MidEdge x, const RunContext& ctx) {
    check_triangle(i, ctx);
    EnumSpec spec;
    spec.domain = Domain::rotated_triangle(i, x);
    spec.start = x;
    spec.max_length = full_length(spec.domain);
    spec.accumulators = acc::PerEndpoint | acc::Touch;
    spec.touch_region = HalfPlaneConstraint{0, 1, -1, SideLabel::Generic};
    const EnumResult r = run(spec, ctx);
    const auto xp = powers(ctx.weight(), r.max_length);
    const auto sides = spec.domain.boundary_sides();
    RotatedData out;
    out.walks = r.total_walks();
    for (std::size_t s = 0; s < r.endpoints.size(); ++s) {
        auto it = sides.find(r.endpoints[s]);
        if (it == sides.end()) continue;
        const auto len = [&](int l) { return r.length_tally(s, l); };
        switch (it->second) {
        case SideLabel::LeftSide: out.A_rot += weigh(xp, r.max_length, 1, len); break;
        case SideLabel::RightSide:
            out.D_rot += weigh(xp, r.max_length, 0, len);
            out.D_minus += weigh(xp, r.max_length, 0, [&](int l) { return r.touch_tally(s, l); });
            break;
        case SideLabel::TopSide: out.D_rot += weigh(xp, r.max_length, 0, len); break;
        default: break;
        }
    }
    return out;
}

CycNum cos_pi8() { return constant(Constant::CosPi8); }
CycNum cos_3pi8() { return constant(Constant::Cos3Pi8); }
CycNum cos_pi4() { return constant(Constant::CosPi4); }

AuditTerm term(std::string name, bool ok, std::string detail) {
    return {std::move(name), ok ? "pass" : "fail", std::move(detail)};
}

} // namespace

CycNum RunContext::weight() const { return x ? *x : constant(Constant::Xc); }

std::optional<CycNum> PartitionBracket::width() const {
    if (!upper) return std::nullopt;
    return *upper - lower;
}

bool PartitionBracket::consistent() const { return !upper || compare_real(lower, *upper) <= 0; }

nlohmann::json PartitionBracket::to_json(int digits) const {
    nlohmann::json j{{"target", target}, {"k", k}, {"cap", cap}, {"lower", lower}, {"exact", exact},
                     {"lower_decimal", approximate(lower, digits).first}};
    if (upper) {
        j["upper"] = *upper;
        j["upper_decimal"] = approximate(*upper, digits).first;
        j["width_decimal"] = approximate(*upper - lower, digits).first;
    } else {
        j["upper"] = nullptr;
    }
    return j;
}

TriangleData triangle_data(int k, const RunContext& ctx) {
    check_triangle(k, ctx);
    EnumSpec spec;
    spec.domain = Domain::triangle(k);
    spec.max_length = full_length(spec.domain);
    spec.accumulators = acc::PerEndpoint | acc::Renewal;
    for (int i = 0; i <= k; ++i) spec.renewal_lines.push_back({3, 1, 12L * i + 6, SideLabel::Generic});
    const EnumResult r = run(spec, ctx);
    const auto xp = powers(ctx.weight(), r.max_length);

    TriangleData td;
    td.k = k;
    td.walks = r.total_walks();
    for (std::size_t s = 0; s < r.endpoints.size(); ++s) {
        const MidEdge m = r.endpoints[s];
        const auto len = [&](int l) { return r.length_tally(s, l); };
        if (spec.domain.on_side(m, SideLabel::RealAxis)) td.A += weigh(xp, r.max_length, 1, len);
        if (!spec.domain.on_side(m, SideLabel::RightSide) && !spec.domain.on_side(m, SideLabel::LeftSide)) continue;
        const CycNum d = weigh(xp, r.max_length, 0, len);
        if (d.is_zero()) continue;
        td.D += d;
        td.D_at[m] = d;
        auto& split = td.by_renewals[m];
        split.assign(static_cast<std::size_t>(r.renewal_lines) + 1, CycNum());
        CycNum nw;
        for (int n = 0; n <= r.renewal_lines; ++n) {
            split[static_cast<std::size_t>(n)] =
                weigh(xp, r.max_length, 0, [&](int l) { return r.renewal_tally(s, l, n); });
            nw += split[static_cast<std::size_t>(n)] * CycNum(n);
        }
        td.N_weighted[m] = nw;
    }
    return td;
}

TriangleValues triangle_D(int k, const RunContext& ctx) {
    const auto td = triangle_data(k, ctx);
    return {td.D, td.A};
}

CycNum D_index(int n, const RunContext& ctx) {
    if (n < 0) throw ContractError("D index must be nonnegative");
    if (n == 0) return cos_pi8().inverse();
    return triangle_D((n - 1) / 2, ctx).D;
}

CycNum eq22_residual(const TriangleValues& v) { return cos_3pi8() * v.A + cos_pi8() * v.D - CycNum(1); }

PartitionBracket strip_A(int k, int cap, const RunContext& ctx) {
    check_length(cap, ctx);
    const EnumSpec spec = strip_spec(k, cap);
    const EnumResult r = run(spec, ctx);
    const auto xp = powers(ctx.weight(), cap);
    PartitionBracket b{"A", k, cap, CycNum(), std::nullopt, !r.truncated};
    for (std::size_t s = 0; s < r.endpoints.size(); ++s)
        if (spec.domain.on_side(r.endpoints[s], SideLabel::RealAxis))
            b.lower += weigh(xp, cap, 1, [&](int l) { return r.length_tally(s, l); });
    return b;
}

PartitionBracket strip_B(int k, int cap, const RunContext& ctx) {
    check_length(cap, ctx);
    const EnumSpec spec = strip_spec(k, cap);
    const EnumResult r = run(spec, ctx);
    const auto xp = powers(ctx.weight(), cap);
    PartitionBracket b{"B", k, cap, CycNum(), std::nullopt, !r.truncated};
    CycNum a;
    for (std::size_t s = 0; s < r.endpoints.size(); ++s) {
        const auto len = [&](int l) { return r.length_tally(s, l); };
        if (spec.domain.on_side(r.endpoints[s], SideLabel::TopLine)) b.lower += weigh(xp, cap, 0, len);
        if (spec.domain.on_side(r.endpoints[s], SideLabel::RealAxis)) a += weigh(xp, cap, 1, len);
    }
    b.upper = CycNum(1) - cos_3pi8() * a;
    return b;
}

std::vector<std::uint64_t> strip_A_counts(int k, int cap, const RunContext& ctx) {
    check_length(cap, ctx);
    const EnumSpec spec = strip_spec(k, cap);
    const EnumResult r = run(spec, ctx);
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(cap) + 1, 0);
    for (std::size_t s = 0; s < r.endpoints.size(); ++s)
        if (spec.domain.on_side(r.endpoints[s], SideLabel::RealAxis))
            for (int l = 1; l <= cap; ++l) counts[static_cast<std::size_t>(l)] += r.length_tally(s, l);
    return counts;
}

std::vector<std::uint64_t> triangle_A_counts(int k, const RunContext& ctx) {
    check_triangle(k, ctx);
    EnumSpec spec;
    spec.domain = Domain::triangle(k);
    spec.max_length = full_length(spec.domain);
    spec.accumulators = acc::PerEndpoint | acc::Renewal;
    for (int i = 0; i <= k; ++i) spec.renewal_lines.push_back({3, 1, 12L * i + 6, SideLabel::Generic});
    const EnumResult r = run(spec, ctx);
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(r.max_length) + 1, 0);
    for (std::size_t s = 0; s < r.endpoints.size(); ++s)
        if (spec.domain.on_side(r.endpoints[s], SideLabel::RealAxis))
            for (int l = 1; l <= r.max_length; ++l) counts[static_cast<std::size_t>(l)] += r.length_tally(s, l);
    return counts;
}

std::vector<PartitionBracket> halfplane_G(int k_min, int k_max, int cap, const RunContext& ctx) {
    if (k_min < 1 || k_max < k_min) throw ContractError("G range must satisfy 1 <= k_min <= k_max");
    check_length(cap, ctx);
    std::vector<MidEdge> targets;
    for (int k = k_min; k <= k_max; ++k) targets.push_back({4 * k, 0});
    EnumSpec spec;
    spec.domain = Domain::half_plane();
    spec.max_length = cap;
    spec.filter = EndpointFilter::at_mids(targets);
    spec.accumulators = acc::PerEndpoint;
    const EnumResult r = run(spec, ctx);
    const auto xp = powers(ctx.weight(), cap);
    std::vector<PartitionBracket> out;
    for (int k = k_min; k <= k_max; ++k) {
        PartitionBracket b{"G", k, cap, CycNum(), std::nullopt, false};
        if (auto s = r.slot_of({4 * k, 0}))
            b.lower = weigh(xp, cap, 0, [&](int l) { return r.length_tally(*s, l); });
        out.push_back(b);
    }
    return out;
}

CycNum halfplane_G_tail(int k_min, int cap, const RunContext& ctx) {
    // A walk of length L stays within x-distance L/2 of the start.
    const int k_max = std::max(k_min, cap / 2 + 1);
    CycNum sum;
    for (const auto& b : halfplane_G(k_min, k_max, cap, ctx)) sum += b.lower;
    return sum;
}

CycNum TrapezoidValues::identity_residual() const {
    return cos_3pi8() * FL + cos_pi8() * (FR + FT) + cos_pi4() * FB - CycNum(1);
}

CycNum TrapezoidValues::fb_margin() const { return cos_pi4() * FB - cos_pi8() * D_minus; }

nlohmann::json TrapezoidValues::to_json(int digits) const {
    auto entry = [&](const CycNum& v) { return nlohmann::json{{"exact", v}, {"decimal", dec(v, digits)}}; };
    return {{"i", i},
            {"x", {x.xq, x.yq}},
            {"walks", walks},
            {"F_R", entry(FR)},
            {"F_L", entry(FL)},
            {"F_T", entry(FT)},
            {"F_B", entry(FB)},
            {"D_minus", entry(D_minus)},
            {"D_rot", entry(D_rot)},
            {"A_rot", entry(A_rot)},
            {"identity_residual", identity_residual()}};
}

TrapezoidValues trapezoid_F(int i, MidEdge x, const RunContext& ctx) {
    check_triangle(i, ctx);
    const Domain trap = Domain::trapezoid(i, x);
    const auto n = trap.mids().size();
    if (n > static_cast<std::size_t>(ctx.trapezoid_mids))
        throw ResourceError(trap.name() + " has " + std::to_string(n) + " mid-edges, above the limit " +
                            std::to_string(ctx.trapezoid_mids));
    EnumSpec spec;
    spec.domain = trap;
    spec.start = x;
    spec.max_length = full_length(trap);
    spec.accumulators = acc::PerEndpoint;
    const EnumResult r = run(spec, ctx);
    const auto xp = powers(ctx.weight(), r.max_length);
    const auto sides = trap.boundary_sides();

    TrapezoidValues v;
    v.i = i;
    v.x = x;
    v.walks = r.total_walks();
    for (std::size_t s = 0; s < r.endpoints.size(); ++s) {
        auto it = sides.find(r.endpoints[s]);
        if (it == sides.end()) continue;
        const auto len = [&](int l) { return r.length_tally(s, l); };
        switch (it->second) {
        case SideLabel::RightSide: v.FR += weigh(xp, r.max_length, 0, len); break;
        case SideLabel::LeftSide: v.FL += weigh(xp, r.max_length, 1, len); break;
        case SideLabel::TopSide: v.FT += weigh(xp, r.max_length, 0, len); break;
        case SideLabel::BottomSide:
        case SideLabel::RealAxis: v.FB += weigh(xp, r.max_length, 0, len); break;
        default: break;
        }
    }
    const RotatedData rot = rotated_data(i, x, ctx);
    v.D_rot = rot.D_rot;
    v.A_rot = rot.A_rot;
    v.D_minus = rot.D_minus;
    return v;
}

CycNum D_minus(int i, MidEdge x, const RunContext& ctx) { return rotated_data(i, x, ctx).D_minus; }

bool RenewalExpectation::within() const { return compare_real(expectation, bound) <= 0; }

CycNum renewal_bound(int k, const RunContext& ctx) {
    CycNum sum;
    for (int i = 0; i <= (k + 1) / 2; ++i) sum += D_index(i, ctx);
    return CycNum(2) * cos_pi8() * D_index((k + 2) / 2, ctx) / D_index(2 * k + 1, ctx) * sum;
}

RenewalExpectation renewal_expectation(int k, const RunContext& ctx) {
    const auto td = triangle_data(k, ctx);
    RenewalExpectation e;
    e.k = k;
    CycNum total;
    for (const auto& [m, v] : td.N_weighted) total += v;
    e.expectation = total / td.D;
    e.bound = renewal_bound(k, ctx);
    e.M = CycNum(8) * e.bound;
    return e;
}

std::map<MidEdge, EndpointD> per_endpoint_D(int k, const RunContext& ctx) {
    const auto td = triangle_data(k, ctx);
    const CycNum M = CycNum(8) * renewal_bound(k, ctx);
    std::map<MidEdge, EndpointD> out;
    for (const auto& [m, d] : td.D_at) {
        EndpointD e{d, CycNum()};
        const auto& split = td.by_renewals.at(m);
        for (std::size_t n = 0; n < split.size(); ++n)
            if (compare_real(CycNum(static_cast<long>(n)), M) <= 0) e.D_ren += split[n];
        out[m] = e;
    }
    return out;
}

CycNum offset_delta(int k, int i, const RunContext& ctx) {
    check_triangle(k, ctx);
    EnumSpec spec;
    spec.domain = Domain::offset_triangle(k, i);
    spec.max_length = full_length(spec.domain);
    spec.filter = EndpointFilter::on_sides({SideLabel::RightSide, SideLabel::LeftSide});
    spec.accumulators = acc::WeightSum;
    return run(spec, ctx).weight_sum;
}

nlohmann::json to_json(const AuditTerm& t) {
    return {{"name", t.name}, {"status", t.status}, {"detail", t.detail}};
}

std::vector<AuditTerm> recurrence_audit(int T, int cap, int table_k, const RunContext& ctx) {
    if (T < 1) throw ContractError("recurrence audit needs T >= 1");
    std::vector<AuditTerm> out;
    const int table_max = 2 * table_k + 2;
    const std::string suffix = "(T=" + std::to_string(T) + ")";

    const auto G = halfplane_G(T, 21 * T, cap, ctx);
    CycNum g_sum;
    bool nonneg = true;
    for (const auto& b : G) {
        g_sum += b.lower;
        nonneg = nonneg && real_sign(b.lower) >= 0;
    }
    out.push_back(term("rhs-nonnegative" + suffix, nonneg,
                       "G_k lower bounds for k=" + std::to_string(T) + ".." + std::to_string(21 * T) +
                           " at cap " + std::to_string(cap) + ", sum " + dec(g_sum)));

    if (18 * T > table_max) {
        out.push_back({"recurrence" + suffix, "inconclusive",
                       "D_" + std::to_string(18 * T) + " beyond exact range at default caps (exact table ends at D_" +
                           std::to_string(table_max) + ")"});
    } else {
        CycNum dsum;
        for (int i = 0; i <= 3 * T; ++i) dsum += D_index(i, ctx);
        const CycNum lhs = CycNum(T).pow(4) * D_index(18 * T, ctx).pow(5);
        const CycNum rhs = CycNum(1L << 17) * dsum.pow(4) * g_sum;
        const bool ok = compare_real(lhs, rhs) <= 0;
        out.push_back({"recurrence" + suffix, ok ? "pass" : "inconclusive",
                       "lhs " + dec(lhs) + ", rhs (G truncated) " + dec(rhs)});
    }

    auto clamped = [&](int n) { return D_index(std::min(n, table_max), ctx); };
    CycNum dsum;
    for (int i = 0; i <= 3 * T; ++i) dsum += clamped(i);
    const CycNum lhs = CycNum(T).pow(4) * clamped(18 * T).pow(5);
    const CycNum rhs = CycNum(1L << 17) * dsum.pow(4) * g_sum;
    out.push_back(term("surrogate-smoke-test" + suffix, compare_real(lhs, rhs) <= 0,
                       "indices clamped to D_" + std::to_string(table_max) + ": lhs " + dec(lhs) + ", rhs " + dec(rhs)));
    return out;
}

std::vector<AuditTerm> case_report(int T, const RunContext& ctx) {
    if (T < 1) throw ContractError("case report needs T >= 1");
    const std::string suffix = "(T=" + std::to_string(T) + ")";
    if (5 * T - 1 > ctx.triangle_cap || 2 * T - 1 > ctx.triangle_cap)
        return {{"case-ab" + suffix, "inconclusive",
                 "needs Tria_" + std::to_string(10 * T - 1) + ", beyond the triangle cap Tria_" +
                     std::to_string(2 * ctx.triangle_cap + 1)}};
    CycNum in_sigma, total;
    std::string members;
    for (int k = T; k <= 2 * T - 1; ++k) {
        const auto td = triangle_data(k, ctx);
        total += td.D;
        const Domain tri = Domain::triangle(k);
        for (const auto& [x, d] : td.D_at) {
            if (!tri.on_side(x, SideLabel::RightSide)) continue;
            for (int i = 4 * T; i <= 5 * T - 1; ++i) {
                if (compare_real(D_minus(i, x, ctx) * CycNum(4), D_index(2 * i + 1, ctx)) < 0) continue;
                in_sigma += d;
                members += " " + to_string(x) + "(i_x=" + std::to_string(i) + ")";
                break;
            }
        }
    }
    const bool case_a = compare_real(in_sigma * CycNum(4), total) >= 0;
    return {{"case-ab" + suffix, "pass",
             std::string(case_a ? "case (a)" : "case (b)") + ": Sigma-mass " + dec(in_sigma) + " vs D-mass/4 " +
                 dec(total / CycNum(4)) + "; Sigma =" + (members.empty() ? " {}" : members)}};
}

std::vector<AuditTerm> vacuous_decay_check(int n_max, const RunContext& ctx) {
    // T^{-1e-10} > 0.99 for every T below e^{1e8}, so D_T <= 99 suffices.
    std::vector<AuditTerm> out;
    for (int t = 1; t <= n_max; ++t) {
        const CycNum d = D_index(t, ctx);
        out.push_back(term("decay-D_" + std::to_string(t), compare_real(d, CycNum(99)) <= 0,
                           "D_" + std::to_string(t) + " = " + dec(d) + " <= 100 T^(-1e-10) (vacuous at this size)"));
    }
    return out;
}

} // namespace hexwalk
