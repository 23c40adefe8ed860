#include <filesystem>
#include <random>

#include "doctest.h"
#include "hexwalk/cache.hpp"
#include "hexwalk/enumerator.hpp"
#include "hexwalk/errors.hpp"
#include "oracles.hpp"

using namespace hexwalk;

namespace {

std::vector<std::vector<oracle::Pt>> collected(const EnumSpec& spec) {
    std::vector<std::vector<oracle::Pt>> out;
    for (const auto& w : enumerate(spec).walks) out.push_back(oracle::pts(w));
    std::sort(out.begin(), out.end());
    return out;
}

EnumSpec collect_spec(const Domain& d, MidEdge start, int L) {
    EnumSpec spec;
    spec.domain = d;
    spec.start = start;
    spec.max_length = L;
    spec.accumulators = acc::Collector | acc::WeightSum | acc::PerEndpoint;
    return spec;
}

} // namespace

TEST_CASE("full lattice at L = 1 and L = 2") {
    EnumSpec spec = collect_spec(Domain::plane(), {0, 0}, 1);
    auto r = enumerate(spec);
    CHECK(r.count_by_length == std::vector<std::uint64_t>{1, 4});
    spec.max_length = 2;
    r = enumerate(spec);
    CHECK(r.count_by_length == std::vector<std::uint64_t>{1, 4, 8});
    CHECK(collected(spec) == oracle::walks({0, 0}, oracle::mids_in({-6, 6, -9, 9}), 2));
}

TEST_CASE("Tria_1 walks to the slanted sides") {
    EnumSpec spec = collect_spec(Domain::triangle(0), {0, 0}, 2);
    spec.filter = EndpointFilter::on_sides({SideLabel::RightSide, SideLabel::LeftSide});
    const auto r = enumerate(spec);
    REQUIRE(r.walks.size() == 2);
    for (const auto& w : r.walks) CHECK(w.length() == 1);
    const CycNum two_xc = CycNum(2) * constant(Constant::Xc);
    CHECK(r.weight_sum == two_xc);
    CHECK(constant(Constant::CosPi8) * r.weight_sum == CycNum(1));
}

TEST_CASE("c_n against generate-and-filter") {
    CHECK(count_saws(0) == 1);
    CHECK(count_saws(1) == 4);
    const auto brute = oracle::saw_counts(7);
    const auto fast = count_saws_upto(7);
    CHECK(fast == brute);
    CHECK_THROWS_AS(count_saws(41), ResourceError);
}

TEST_CASE("random boxes: collected walks equal brute force") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 6; ++trial) {
        const int x0 = static_cast<int>(rng() % 9) - 4, y0 = static_cast<int>(rng() % 13) - 6;
        const oracle::Box vbox{x0 - 6, x0 + 6, y0 - 8, y0 + 8};
        std::vector<LatticeVertex> verts;
        for (int x = vbox.xmin; x <= vbox.xmax; ++x)
            for (int y = vbox.ymin; y <= vbox.ymax; ++y)
                if (oracle::vertex({x, y})) verts.push_back({x, y});
        const Domain d = Domain::explicit_vertices(verts);
        std::vector<oracle::Pt> pool;
        for (oracle::Pt p : oracle::mids_in({vbox.xmin - 2, vbox.xmax + 2, vbox.ymin - 2, vbox.ymax + 2})) {
            const auto [a, b] = oracle::ends(p);
            if (vbox.inside(a) || vbox.inside(b)) pool.push_back(p);
        }
        CHECK(d.mids().size() == pool.size());
        const oracle::Pt s = pool[rng() % pool.size()];
        const int L = 6;
        CAPTURE(trial);
        CHECK(collected(collect_spec(d, {s.first, s.second}, L)) == oracle::walks(s, pool, L));
    }
}

TEST_CASE("parallel runs serialize identically") {
    EnumSpec spec;
    spec.domain = Domain::triangle(2);
    spec.max_length = static_cast<int>(spec.domain.mids().size()) - 1;
    spec.accumulators = acc::WeightSum | acc::PerEndpoint | acc::Phase | acc::Renewal;
    for (int i = 0; i <= 2; ++i) spec.renewal_lines.push_back({3, 1, 12L * i + 6, SideLabel::Generic});
    const std::string serial = enumerate(spec).to_json().dump();
    for (int workers : {1, 2, 4, 8}) CHECK(parallel_enumerate(spec, workers).to_json().dump() == serial);
}

TEST_CASE("weight sums grow with the cap and every prefix is a walk") {
    EnumSpec spec = collect_spec(Domain::strip(2), {0, 0}, 1);
    CycNum prev;
    for (int L = 1; L <= 9; ++L) {
        spec.max_length = L;
        const auto r = enumerate(spec);
        CHECK(compare_real(prev, r.weight_sum) < 0);
        prev = r.weight_sum;
        std::set<std::vector<MidEdge>> all;
        for (const auto& w : r.walks) all.insert(w.mids());
        for (const auto& w : r.walks) {
            if (w.length() == 0) continue;
            std::vector<MidEdge> prefix(w.mids().begin(), w.mids().end() - 1);
            CHECK(all.count(prefix) == 1);
        }
    }
}

TEST_CASE("budget and contract failures are loud") {
    EnumSpec spec;
    spec.domain = Domain::triangle(3);
    spec.max_length = 80;
    spec.budget = 1000;
    CHECK_THROWS_AS(enumerate(spec), ResourceError);
    spec.start = {1, -3};
    CHECK_THROWS_AS(enumerate(spec), ContractError);
}

TEST_CASE("results survive a JSON round trip and the on-disk cache") {
    EnumSpec spec;
    spec.domain = Domain::triangle(1);
    spec.max_length = 16;
    spec.accumulators = acc::PerEndpoint | acc::Phase | acc::Touch;
    spec.touch_region = HalfPlaneConstraint{1, 0, 0, SideLabel::Generic};
    const auto r = enumerate(spec);
    CHECK(EnumResult::from_json(r.to_json()).to_json() == r.to_json());

    const auto dir = std::filesystem::temp_directory_path() / "hexwalk_cache_test";
    std::filesystem::remove_all(dir);
    {
        ResultCache cache(dir.string());
        CHECK_FALSE(cache.get(spec).has_value());
        cache.put(spec, r);
        CHECK(cache.size() == 1);
    }
    {
        ResultCache cache(dir.string());
        CHECK(cache.size() == 1);
        const auto hit = cache.get(spec);
        REQUIRE(hit.has_value());
        CHECK(hit->to_json() == r.to_json());
        CHECK(cache.hits() == 1);
        EnumSpec other = spec;
        other.max_length = 15;
        CHECK(ResultCache::key(other) != ResultCache::key(spec));
        CHECK(run_enumeration(other, 2, &cache).to_json() == enumerate(other).to_json());
        cache.clear();
        CHECK(cache.size() == 0);
    }
    std::filesystem::remove_all(dir);
}
