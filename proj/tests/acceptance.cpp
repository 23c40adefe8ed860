// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.
// Exit status 0 only when all pass.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <string>

#include "CLI11.hpp"
#include "hexwalk/audit.hpp"
#include "hexwalk/constructions.hpp"
#include "hexwalk/enumerator.hpp"
#include "hexwalk/observable.hpp"
#include "hexwalk/partitions.hpp"
#include "oracles.hpp"

using namespace hexwalk;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) detail = "first failure: " + what;
        pass = pass && ok;
    }
};

Outcome from_suites(std::initializer_list<const char*> names, const VerifyParams& params) {
    Outcome o;
    std::size_t checks = 0;
    for (const char* name : names) {
        const auto report = run_suite(name, params);
        for (const auto& t : report.checks) {
            ++checks;
            o.require(t.status == "pass", t.name + " (" + t.status + "): " + t.detail);
        }
    }
    if (o.pass) o.detail = std::to_string(checks) + " checks";
    return o;
}

Outcome enumerator_equivalence() {
    Outcome o;
    std::mt19937_64 rng(20240501);
    std::size_t walks = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const int x0 = static_cast<int>(rng() % 17) - 8, y0 = static_cast<int>(rng() % 25) - 12;
        const int hw = 4 + static_cast<int>(rng() % 7), hh = 6 + static_cast<int>(rng() % 12);
        const oracle::Box vbox{x0 - hw, x0 + hw, y0 - hh, y0 + hh};
        std::vector<LatticeVertex> verts;
        for (int x = vbox.xmin; x <= vbox.xmax; ++x)
            for (int y = vbox.ymin; y <= vbox.ymax; ++y)
                if (oracle::vertex({x, y})) verts.push_back({x, y});
        if (verts.empty()) continue;
        std::vector<oracle::Pt> pool;
        for (oracle::Pt p : oracle::mids_in({vbox.xmin - 2, vbox.xmax + 2, vbox.ymin - 2, vbox.ymax + 2})) {
            const auto [a, b] = oracle::ends(p);
            if (vbox.inside(a) || vbox.inside(b)) pool.push_back(p);
        }
        const oracle::Pt s = pool[rng() % pool.size()];
        EnumSpec spec;
        spec.domain = Domain::explicit_vertices(verts);
        spec.start = {s.first, s.second};
        spec.max_length = 8;
        spec.accumulators = acc::Collector;
        std::vector<std::vector<oracle::Pt>> got;
        for (const auto& w : enumerate(spec).walks) got.push_back(oracle::pts(w));
        std::sort(got.begin(), got.end());
        const auto expect = oracle::walks(s, pool, 8);
        walks += expect.size();
        o.require(got == expect, "box " + std::to_string(trial));
    }
    for (int k : {2, 3}) {
        EnumSpec spec;
        spec.domain = Domain::triangle(k);
        spec.max_length = static_cast<int>(spec.domain.mids().size());
        spec.accumulators = acc::WeightSum | acc::PerEndpoint | acc::Phase | acc::Renewal;
        for (int i = 0; i <= k; ++i) spec.renewal_lines.push_back(renewal_line(i));
        const std::string serial = enumerate(spec).to_json().dump();
        for (int workers : {1, 2, 4, 8})
            o.require(parallel_enumerate(spec, workers).to_json().dump() == serial,
                      "Tria_" + std::to_string(2 * k + 1) + " with " + std::to_string(workers) + " workers");
    }
    if (o.pass) o.detail = "20 boxes, " + std::to_string(walks) + " walks; Tria_5, Tria_7 identical on 1/2/4/8 workers";
    return o;
}

Outcome constructions(bool slow) {
    Outcome o;
    // Bridges of length <= 12 from the origin.
    std::size_t bridges = 0, records = 0;
    {
        EnumSpec spec;
        spec.domain = Domain::half_plane();
        spec.max_length = 12;
        spec.accumulators = acc::Collector;
        spec.collect_cap = 10'000'000;
        for (const auto& w : enumerate(spec).walks) {
            if (!is_bridge(w)) continue;
            ++bridges;
            const int h = bridge_height(w);
            for (int m = 1; m <= std::min(3, h); ++m) {
                const auto rec = bridge_decompose(w, m);
                ++records;
                o.require(reconstruct(rec).mids() == w.mids(), "round trip, m=" + std::to_string(m));
                for (int sum : rec.visit_sums) o.require(sum * m <= rec.n + 1, "visit bound, m=" + std::to_string(m));
            }
        }
    }
    // Unfolding of every SAW of length <= 10.
    std::size_t saws = 0;
    {
        EnumSpec spec;
        spec.domain = Domain::plane();
        spec.max_length = 10;
        enumerate(spec, [&](std::span<const MidEdge> g, int) {
            ++saws;
            const Walk w(std::vector<MidEdge>(g.begin(), g.end()));
            const auto u = hw_unfold(w);
            int top_w = g.front().yq, top_u = u.bridge.front().yq;
            for (auto m : g) top_w = std::max(top_w, m.yq);
            for (auto m : u.bridge.mids()) top_u = std::max(top_u, m.yq);
            o.require(Walk::is_valid_sequence(u.bridge.mids()) && is_x_bridge(u.bridge) &&
                          u.bridge.length() == w.length(),
                      "unfold of " + walk_to_json(w).dump());
            o.require(top_u >= top_w, "max height dropped for " + walk_to_json(w).dump());
        });
    }
    // Gluing fuzz.
    std::mt19937_64 rng(7);
    for (int t = 0; t < 1000; ++t) {
        const auto tr = random_gluing_triple(rng);
        try {
            const Walk u = gm_concatenate(tr.g1, tr.g2, tr.g3, tr.params);
            bool upper = true;
            for (auto m : u.mids()) upper = upper && m.yq >= 0;
            o.require(oracle::saw(oracle::pts(u)) && upper && u.front() == MidEdge{0, 0} && u.back().yq == 0,
                      "fuzz triple " + std::to_string(t));
        } catch (const ConcatenationError& e) {
            o.require(false, "fuzz triple " + std::to_string(t) + ": " + e.what());
        }
    }
    // Splittings of glued walks.
    std::string survey;
    std::vector<std::pair<int, int>> cases{{1, 2}, {2, 2}, {1, 3}};
    if (slow) cases.push_back({2, 3});
    for (auto [k, i] : cases) {
        const auto s = preimage_survey(k, i, k + 1);
        o.require(s.walks > 0 && s.max_splittings == 1, "preimage survey k=" + std::to_string(k));
        survey += " (" + std::to_string(k) + "," + std::to_string(i) + "):" + std::to_string(s.walks);
    }
    if (o.pass)
        o.detail = std::to_string(bridges) + " bridges / " + std::to_string(records) + " decompositions, " +
                   std::to_string(saws) + " SAWs unfolded, 1000 glued triples, unique splittings" + survey;
    return o;
}

Outcome sensitivity() {
    Outcome o;
    RunContext ctx;
    ctx.x = parse_rational("1/2");
    const CycNum r = eq22_residual(triangle_D(1, ctx));
    o.require(!r.is_zero(), "triangle identity residual vanished at x = 1/2");
    ObservableOptions opts;
    opts.x = ctx.x;
    const Domain d = Domain::triangle(1);
    const auto field = compute_observable(d, {0, 0}, opts);
    std::string vertex_detail;
    for (auto v : d.interior_vertices()) {
        const CycNum res = vertex_residual(field, v);
        if (!res.is_zero() && vertex_detail.empty()) {
            const auto [re, im] = approximate(res, 8);
            vertex_detail = "vertex (" + std::to_string(v.xq) + "," + std::to_string(v.yq) + ") residual " + re + " + " + im + "i";
        }
    }
    o.require(!vertex_detail.empty(), "vertex residuals all vanished at x = 1/2");
    if (o.pass) o.detail = "triangle residual " + approximate(r, 8).first + "; " + vertex_detail;
    return o;
}

Outcome counting() {
    Outcome o;
    const auto brute = oracle::saw_counts(8);
    const int n_max = 20;
    const auto c = count_saws_upto(n_max);
    o.require(c[0] == 1 && c[1] == 4, "c_0 = 1, c_1 = 4");
    for (int n = 0; n <= 8; ++n) o.require(c[static_cast<std::size_t>(n)] == brute[static_cast<std::size_t>(n)], "c_" + std::to_string(n) + " vs oracle");
    const CycNum mu = constant(Constant::Mu);
    CycNum mu_pow(1);
    for (int n = 0; n <= n_max; ++n) {
        o.require(compare_real(CycNum(mpq_class(std::to_string(c[static_cast<std::size_t>(n)]))), mu_pow) >= 0,
                  "c_" + std::to_string(n) + " >= mu^" + std::to_string(n));
        mu_pow *= mu;
    }
    if (o.pass) o.detail = "c_0..c_8 match the oracle; c_n >= mu^n for n <= 20 (c_20 = " + std::to_string(c[20]) + ")";
    return o;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hexwalk acceptance runner"};
    bool slow = false;
    int workers = 1;
    app.add_flag("--slow", slow, "include the k = 3, 4 triangles and Trap_9");
    app.add_option("--workers", workers, "enumeration threads");
    CLI11_PARSE(app, argc, argv);

    VerifyParams params;
    params.slow = slow;
    params.ctx.workers = workers;

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"vertex relation", [&] { return from_suites({"vertex-relation"}, params); }},
        {"contour identity", [&] { return from_suites({"contour"}, params); }},
        {"triangle identity", [&] { return from_suites({"eq22"}, params); }},
        {"trapezoid identity", [&] { return from_suites({"trapezoid"}, params); }},
        {"strip bracket", [&] { return from_suites({"eq21"}, params); }},
        {"monotonicity", [&] { return from_suites({"monotonicity"}, params); }},
        {"half-plane bounds", [&] { return from_suites({"lemma27"}, params); }},
        {"renewal expectation", [&] { return from_suites({"lemma31"}, params); }},
        {"enumerator oracle", enumerator_equivalence},
        {"constructions", [&] { return constructions(slow); }},
        {"sensitivity controls", sensitivity},
        {"counting sanity", counting},
    };

    int failed = 0;
    for (std::size_t n = 0; n < criteria.size(); ++n) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[n].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failed += !o.pass;
        std::printf("%s %2zu %-21s %7.1fs  %s\n", o.pass ? "PASS" : "FAIL", n + 1, criteria[n].first.c_str(), secs,
                    o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed%s\n", static_cast<int>(criteria.size()) - failed, criteria.size(),
                slow ? " (slow)" : "");
    return failed == 0 ? 0 : 1;
}
