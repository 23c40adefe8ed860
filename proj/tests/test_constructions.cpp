#include <random>

#include "doctest.h"
#include "hexwalk/constructions.hpp"
#include "hexwalk/enumerator.hpp"
#include "oracles.hpp"

using namespace hexwalk;

namespace {

std::vector<Walk> all_walks(const Domain& d, MidEdge start, int L, EndpointFilter f = {}) {
    EnumSpec spec;
    spec.domain = d;
    spec.start = start;
    spec.max_length = L;
    spec.filter = std::move(f);
    spec.accumulators = acc::Collector;
    return enumerate(spec).walks;
}

ConcatenationFault fault_of(const Walk& g1, const Walk& g2, const std::optional<Walk>& g3, GluingParams p) {
    try {
        gm_concatenate(g1, g2, g3, p);
    } catch (const ConcatenationError& e) {
        return e.fault();
    }
    FAIL("expected a concatenation error");
    return ConcatenationFault::EmptyWalk;
}

} // namespace

TEST_CASE("renewal times agree with the crossing oracle") {
    for (int k = 0; k <= 2; ++k) {
        const Domain tri = Domain::triangle(k);
        for (const auto& w : all_walks(tri, {0, 0}, static_cast<int>(tri.mids().size()))) {
            const auto p = renewal_times(w, k);
            std::vector<int> expect;
            for (int i = 0; i <= k; ++i)
                if (oracle::line_events(oracle::pts(w), i) == 1) expect.push_back(i);
            CHECK(p.indices == expect);
            if (tri.on_side(w.back(), SideLabel::RightSide) && p.N > 0) CHECK(p.indices.back() == k);
        }
    }
    CHECK(renewal_times(Walk({{0, 0}, {1, 3}}), 0).N == 1);
    CHECK(renewal_times(Walk({{0, 0}, {-1, 3}}), 0).N == 0);
    CHECK_THROWS_AS(renewal_times(Walk({{1, 3}}), 0), ContractError);
}

TEST_CASE("unfolding yields x-bridges without lowering the walk") {
    for (const auto& w : all_walks(Domain::plane(), {0, 0}, 7)) {
        const auto u = hw_unfold(w);
        CHECK(is_x_bridge(u.bridge));
        CHECK(u.bridge.length() == w.length());
        CHECK(Walk::is_valid_sequence(u.bridge.mids()));
        int top_w = w.front().yq, top_u = u.bridge.front().yq;
        for (auto m : w.mids()) top_w = std::max(top_w, m.yq);
        for (auto m : u.bridge.mids()) top_u = std::max(top_u, m.yq);
        CHECK(top_u >= top_w);
        if (is_x_bridge(w)) {
            CHECK(u.reflections == 0);
            CHECK(u.bridge.mids() == w.mids());
        }
        const auto again = hw_unfold(u.bridge);
        CHECK(again.bridge.mids() == u.bridge.mids());
    }
}

TEST_CASE("bridge decomposition round-trips") {
    const Walk straight({{0, 0}, {1, 3}, {2, 6}, {1, 9}, {0, 12}, {1, 15}, {2, 18}});
    REQUIRE(is_bridge(straight));
    CHECK(bridge_height(straight) == 3);
    const auto rec = bridge_decompose(straight, 1);
    CHECK(reconstruct(rec).mids() == straight.mids());

    int tested = 0;
    for (int h = 1; h <= 3; ++h)
        for (const auto& b : all_walks(Domain::strip(h), {0, 0}, 9, EndpointFilter::on_sides({SideLabel::TopLine}))) {
            REQUIRE(is_bridge(b));
            for (int m = 1; m <= h; ++m) {
                const auto r = bridge_decompose(b, m);
                CHECK(reconstruct(r).mids() == b.mids());
                for (int sum : r.visit_sums) CHECK(sum * m <= r.n + 1);
                ++tested;
            }
        }
    CHECK(tested > 100);
    CHECK_THROWS_AS(bridge_decompose(straight, 4), ContractError);
    CHECK_THROWS_AS(bridge_decompose(Walk({{0, 0}, {1, 3}, {3, 3}}), 1), ContractError);
}

TEST_CASE("gluing rejects malformed triples by name") {
    const GluingParams p{1, 1, 4};
    const Walk g1({{0, 0}, {1, 3}, {3, 3}, {5, 3}});
    CHECK(fault_of(Walk(), g1, std::nullopt, p) == ConcatenationFault::EmptyWalk);
    CHECK(fault_of(g1, Walk({{5, 3}}), std::nullopt, p) == ConcatenationFault::WrongEndSide);
    CHECK(fault_of(g1, Walk({{5, 3}}), std::nullopt, {1, 1, 3}) == ConcatenationFault::ParameterRange);
    CHECK(fault_of(Walk({{1, 3}, {0, 0}}), g1, std::nullopt, p) == ConcatenationFault::BadStart);
    CHECK(fault_of(Walk({{0, 0}, {1, 3}}), g1, std::nullopt, p) == ConcatenationFault::WrongEndSide);
    CHECK(fault_of(g1, Walk({{4, 0}}), std::nullopt, p) == ConcatenationFault::EndpointMismatch);
}

TEST_CASE("random admissible triples glue into U-walks") {
    std::mt19937_64 rng(99);
    for (int t = 0; t < 60; ++t) {
        const auto tr = random_gluing_triple(rng);
        const Walk u = gm_concatenate(tr.g1, tr.g2, tr.g3, tr.params);
        CHECK(oracle::saw(oracle::pts(u)));
        CHECK(u.front() == MidEdge{0, 0});
        CHECK(u.back().yq == 0);
        for (auto m : u.mids()) CHECK(m.yq >= 0);
    }
}

TEST_CASE("glued walks split in exactly one way") {
    const auto s = preimage_survey(1, 2, 2);
    CHECK(s.walks == 144);
    CHECK(s.max_splittings == 1);
    CHECK(s.splittings.at(1) == s.walks);
}

TEST_CASE("displacement statistics") {
    const auto d0 = displacement_stats(0);
    CHECK(d0.walks == 1);
    CHECK(d0.squared_max.at(0) == 1);
    const auto d1 = displacement_stats(1);
    CHECK(d1.walks == 4);
    CHECK(d1.squared_max.at(mpq_class(1, 4)) == 4);
    CHECK(d1.to_csv().find("1,1,4,4") != std::string::npos);
    for (int n = 2; n <= 6; ++n) {
        const auto d = displacement_stats(n);
        std::uint64_t total = 0;
        for (const auto& [k, c] : d.squared_max) total += c;
        CHECK(total == d.walks);
        CHECK(d.walks == count_saws(n));
    }
    CHECK_THROWS_AS(displacement_stats(15), ResourceError);
}
