#include <optional>
#include <random>
#include <set>

#include "doctest.h"
#include "hexwalk/errors.hpp"
#include "hexwalk/lattice.hpp"
#include "oracles.hpp"

using namespace hexwalk;

namespace {

std::vector<MidEdge> ball(int r) {
    std::vector<MidEdge> out;
    for (int x = -4 * r; x <= 4 * r; ++x)
        for (int y = -6 * r; y <= 6 * r; ++y)
            if (is_valid(MidEdge{x, y})) out.push_back({x, y});
    return out;
}

} // namespace

TEST_CASE("validity predicate matches the geometric mid-edge oracle") {
    for (int x = -14; x <= 14; ++x)
        for (int y = -20; y <= 20; ++y) {
            CAPTURE(x);
            CAPTURE(y);
            CHECK(is_valid(MidEdge{x, y}) == oracle::mid({x, y}));
            CHECK(is_vertex(LatticeVertex{x, y}) == oracle::vertex({x, y}));
        }
    CHECK(is_valid(MidEdge{0, 0}));
    CHECK(kind(MidEdge{0, 0}) == EdgeKind::Vertical);
    CHECK(kind(MidEdge{1, 3}) == EdgeKind::Slanted);
    CHECK_THROWS_AS(require_valid(MidEdge{1, 0}), ContractError);
    CHECK_THROWS_AS(neighbors(MidEdge{2, 0}), ContractError);
}

TEST_CASE("origin neighbours split two per endpoint") {
    const auto nb = neighbors(MidEdge{0, 0});
    std::map<LatticeVertex, int> per;
    for (const auto& n : nb) ++per[n.via];
    CHECK(per.size() == 2);
    for (const auto& [v, c] : per) CHECK(c == 2);
    const auto e = endpoints(MidEdge{0, 0});
    CHECK(per.count(e[0]) == 1);
    CHECK(per.count(e[1]) == 1);
}

TEST_CASE("slanted neighbours of (1,3)") {
    std::set<MidEdge> got;
    for (const auto& n : neighbors(MidEdge{1, 3})) got.insert(n.mid);
    CHECK(got == std::set<MidEdge>{{0, 0}, {-1, 3}, {2, 6}, {3, 3}});
}

TEST_CASE("4-regularity, distance 1/2, symmetry and sqrt(3)/6 to the shared vertex") {
    for (MidEdge m : ball(20)) {
        const auto nb = neighbors(m);
        for (std::size_t j = 0; j < nb.size(); ++j) {
            CHECK(is_valid(nb[j].mid));
            CHECK(squared_distance(nb[j].mid.xq - m.xq, nb[j].mid.yq - m.yq) == mpq_class(1, 4));
            CHECK(squared_distance(nb[j].via.xq - m.xq, nb[j].via.yq - m.yq) == mpq_class(1, 12));
            if (j) CHECK(nb[j - 1].mid < nb[j].mid);
            bool back = false;
            for (const auto& n2 : neighbors(nb[j].mid)) back = back || n2.mid == m;
            CHECK(back);
        }
    }
}

TEST_CASE("every vertex meets three mid-edges") {
    for (int x = -12; x <= 12; ++x)
        for (int y = -18; y <= 18; ++y) {
            const LatticeVertex v{x, y};
            if (!is_vertex(v)) continue;
            for (MidEdge m : mids_around(v)) {
                CHECK(is_valid(m));
                const auto e = endpoints(m);
                CHECK((e[0] == v || e[1] == v));
            }
        }
}

TEST_CASE("embedding") {
    CHECK(embed(MidEdge{0, 0}) == ExactPoint{0, 0});
    // (1/4, sqrt3/4): y/sqrt3 = 1/4
    CHECK(embed(MidEdge{1, 3}) == ExactPoint{mpq_class(1, 4), mpq_class(1, 4)});
    CHECK(embed(MidEdge{2, 6}) == ExactPoint{mpq_class(1, 2), mpq_class(1, 2)});
    CHECK(is_valid(MidEdge{2, 6}));
    CHECK(kind(MidEdge{2, 6}) == EdgeKind::Vertical);
}

TEST_CASE("projections") {
    const auto p = embed(MidEdge{1, 3});
    CHECK(project(embed(MidEdge{0, 0}), ProjectionAngle::Pi2) == Surd{0, 0});
    CHECK(project(p, ProjectionAngle::Pi2) == Surd{0, mpq_class(1, 4)});
    // (1/4) cos(pi/6) + (sqrt3/4) sin(pi/6) = sqrt3/8 + sqrt3/8
    CHECK(project(p, ProjectionAngle::Pi6) == Surd{0, mpq_class(1, 4)});
}

TEST_CASE("turn signs and winding") {
    CHECK(turn_sign({0, 0}, {1, 3}, {3, 3}) == -1);
    CHECK(turn_sign({0, 0}, {1, 3}, {2, 6}) == 1);
    CHECK_THROWS_AS(turn_sign({0, 0}, {1, 3}, {0, 0}), ContractError);
    CHECK_THROWS_AS(turn_sign({0, 0}, {1, 3}, {-1, 3}), ContractError);
    CHECK_THROWS_AS(turn_sign({0, 0}, {3, 3}, {4, 6}), ContractError);

    CHECK(Walk({{0, 0}}).winding() == 0);
    // Clockwise around the hexagon centred at (2,0).
    const Walk arc({{0, 0}, {1, 3}, {3, 3}, {4, 0}, {3, -3}, {1, -3}});
    CHECK(arc.winding() == -5);
    CHECK(arc.reversed().winding() == 5);

    // Zigzag: alternating signs.
    const Walk zig({{0, 0}, {1, 3}, {2, 6}, {3, 9}, {4, 12}});
    std::vector<int> turns;
    for (std::size_t i = 1; i + 1 < zig.mids().size(); ++i) turns.push_back(turn_sign(zig[i - 1], zig[i], zig[i + 1]));
    for (std::size_t i = 1; i < turns.size(); ++i) CHECK(turns[i] == -turns[i - 1]);
}

TEST_CASE("winding additivity, reversal and rotation invariance on random walks") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<MidEdge> w{{0, 0}};
        std::set<LatticeVertex> used;
        std::optional<LatticeVertex> entry;
        for (int s = 0; s < 25; ++s) {
            std::vector<Neighbor> opts;
            for (const auto& n : neighbors(w.back()))
                if ((!entry || n.via != *entry) && !used.count(n.via)) {
                    bool fresh = true;
                    for (auto m : w) fresh = fresh && m != n.mid;
                    if (fresh) opts.push_back(n);
                }
            if (opts.empty()) break;
            const auto& pick = opts[rng() % opts.size()];
            used.insert(pick.via);
            entry = pick.via;
            w.push_back(pick.mid);
        }
        const Walk walk(w);
        CHECK(oracle::saw(oracle::pts(walk)));
        CHECK(walk.winding() == -walk.reversed().winding());
        for (std::size_t cut = 0; cut < w.size(); ++cut)
            CHECK(walk.winding() == walk.sub(0, cut).winding() + walk.sub(cut, w.size() - 1).winding());
        std::vector<MidEdge> rot;
        for (auto m : w) rot.push_back(rotate_about_center(m, 2, 0, 1));
        REQUIRE(Walk::is_valid_sequence(rot));
        CHECK(Walk(rot).winding() == walk.winding());
    }
}

TEST_CASE("walk validation agrees with the junction oracle") {
    std::mt19937_64 rng(11);
    const auto pool = ball(2);
    int valid = 0;
    for (int trial = 0; trial < 4000; ++trial) {
        std::vector<MidEdge> seq{pool[rng() % pool.size()]};
        const int len = 1 + static_cast<int>(rng() % 6);
        for (int s = 0; s < len; ++s) seq.push_back(neighbors(seq.back())[rng() % 4].mid);
        std::vector<oracle::Pt> p;
        for (auto m : seq) p.push_back({m.xq, m.yq});
        const bool ok = Walk::is_valid_sequence(seq);
        CHECK(ok == oracle::saw(p));
        valid += ok;
        if (!ok) CHECK_THROWS_AS(Walk{seq}, ContractError);
    }
    CHECK(valid > 0);
}

TEST_CASE("vertical mirrors map the lattice to itself") {
    for (MidEdge m : ball(6))
        for (int axis : {-4, 0, 2, 6}) {
            const MidEdge r = reflect_vertical_line(m, axis);
            CHECK(is_valid(r));
            CHECK(reflect_vertical_line(r, axis) == m);
        }
    CHECK_THROWS_AS(reflect_vertical_line({0, 0}, 1), ContractError);
}
