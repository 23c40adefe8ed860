#include <cmath>

#include "doctest.h"
#include "hexwalk/errors.hpp"
#include "hexwalk/observable.hpp"
#include "oracles.hpp"

using namespace hexwalk;

TEST_CASE("the vertex relation holds at the critical point") {
    for (int k : {0, 1, 2}) {
        const Domain d = Domain::triangle(k);
        const auto field = compute_observable(d, {0, 0});
        CHECK(field.exact);
        CAPTURE(k);
        for (auto v : d.interior_vertices()) CHECK(vertex_residual(field, v).is_zero());
    }
}

TEST_CASE("the vertex relation fails away from x_c") {
    ObservableOptions opts;
    opts.x = parse_rational("1/2");
    const Domain d = Domain::triangle(1);
    const auto field = compute_observable(d, {0, 0}, opts);
    bool any = false;
    for (auto v : d.interior_vertices()) any = any || !vertex_residual(field, v).is_zero();
    CHECK(any);
}

TEST_CASE("sigma = 0 and x = 1 count walks") {
    ObservableOptions opts;
    opts.sigma_eighths = 0;
    opts.x = CycNum(1);
    opts.cap = 7;
    const Domain d = Domain::triangle(2);
    const auto field = compute_observable(d, {0, 0}, opts);
    CHECK_FALSE(field.exact);
    std::vector<oracle::Pt> pool;
    for (auto m : d.mids()) pool.push_back({m.xq, m.yq});
    std::map<oracle::Pt, long> ends;
    for (const auto& w : oracle::walks({0, 0}, pool, 7)) ++ends[w.back()];
    for (auto m : d.mids()) CHECK(field.value(m) == CycNum(ends[{m.xq, m.yq}]));
}

TEST_CASE("the discrete contour integral vanishes") {
    for (const Domain& d : {Domain::triangle(1), Domain::triangle(2), Domain::trapezoid(1, {5, 3})}) {
        const MidEdge a = d.kind() == DomainKind::Trapezoid ? MidEdge{5, 3} : MidEdge{0, 0};
        const auto field = compute_observable(d, a);
        CHECK(contour_integral(field).is_zero());
        CHECK(boundary_contour_sum(field).is_zero());
    }
}

TEST_CASE("boundary windings are forced") {
    const Domain d = Domain::triangle(2);
    const auto field = compute_observable(d, {0, 0});
    for (const auto& [z, label] : d.boundary_sides()) {
        const auto it = field.windings.find(z);
        REQUIRE(it != field.windings.end());
        const int w = predicted_boundary_winding(d, {0, 0}, z);
        CAPTURE(z.xq);
        CAPTURE(z.yq);
        CHECK(it->second == std::vector<int>{((w % 48) + 48) % 48});
        if (label == SideLabel::RightSide) CHECK(w == -1);
        if (label == SideLabel::LeftSide) CHECK(w == 1);
        if (label == SideLabel::RealAxis && z.xq > 0) CHECK(w == -3);
        if (label == SideLabel::RealAxis && z.xq < 0) CHECK(w == 3);
    }
    CHECK_THROWS_AS(predicted_boundary_winding(Domain::plane(), {0, 0}, {1, 3}), ContractError);
}

TEST_CASE("direction exponents match the embedding") {
    for (int x = -6; x <= 6; ++x)
        for (int y = -10; y <= 10; ++y) {
            const LatticeVertex v{x, y};
            if (!is_vertex(v)) continue;
            for (MidEdge p : mids_around(v)) {
                const double angle = std::atan2((p.yq - v.yq) * std::sqrt(3.0) / 12.0, (p.xq - v.xq) / 4.0);
                const int e = direction_exponent(v, p);
                CHECK(std::abs(std::remainder(e * M_PI / 24.0 - angle, 2 * M_PI)) < 1e-9);
            }
        }
}
