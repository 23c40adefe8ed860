#include "hexwalk/lattice.hpp"

#include <algorithm>

#include "hexwalk/errors.hpp"

namespace hexwalk {

namespace {

constexpr int pmod(int a, int n) {
    int r = a % n;
    return r < 0 ? r + n : r;
}

bool valid_vertical(int xq, int yq) {
    return pmod(yq, 6) == 0 && pmod(xq, 2) == 0 && pmod(xq / 2, 2) == pmod(yq / 6, 2);
}

bool is_type_a(LatticeVertex v) { return pmod(v.yq, 6) == 2; }

LatticeVertex other_endpoint(MidEdge m, LatticeVertex v) {
    return {2 * m.xq - v.xq, 2 * m.yq - v.yq};
}

} // namespace

bool is_valid(MidEdge m) noexcept {
    if (pmod(m.yq, 6) == 3) return pmod(m.xq, 2) == 1;
    return valid_vertical(m.xq, m.yq);
}

bool is_vertex(LatticeVertex v) noexcept {
    switch (pmod(v.yq, 6)) {
    case 2: return valid_vertical(v.xq, v.yq - 2);
    case 4: return valid_vertical(v.xq, v.yq + 2);
    default: return false;
    }
}

bool is_hexagon_center(int xq, int yq) noexcept {
    return pmod(yq, 6) == 0 && pmod(xq, 2) == 0 && pmod(xq / 2 - yq / 6, 2) == 1;
}

void require_valid(MidEdge m) {
    if (!is_valid(m)) throw ContractError("invalid mid-edge " + to_string(m));
}

EdgeKind kind(MidEdge m) {
    require_valid(m);
    return pmod(m.yq, 6) == 0 ? EdgeKind::Vertical : EdgeKind::Slanted;
}

std::array<LatticeVertex, 2> endpoints(MidEdge m) {
    if (kind(m) == EdgeKind::Vertical) return {{{m.xq, m.yq - 2}, {m.xq, m.yq + 2}}};
    LatticeVertex lower{m.xq - 1, m.yq - 1};
    if (!is_vertex(lower)) lower = {m.xq + 1, m.yq - 1};
    return {lower, other_endpoint(m, lower)};
}

std::array<MidEdge, 3> mids_around(LatticeVertex v) {
    if (!is_vertex(v)) throw ContractError("not a lattice vertex");
    std::array<MidEdge, 3> out;
    if (is_type_a(v))
        out = {{{v.xq, v.yq - 2}, {v.xq - 1, v.yq + 1}, {v.xq + 1, v.yq + 1}}};
    else
        out = {{{v.xq, v.yq + 2}, {v.xq - 1, v.yq - 1}, {v.xq + 1, v.yq - 1}}};
    std::sort(out.begin(), out.end());
    return out;
}

std::array<Neighbor, 4> neighbors(MidEdge m) {
    std::array<Neighbor, 4> out;
    std::size_t n = 0;
    for (auto v : endpoints(m))
        for (auto q : mids_around(v))
            if (q != m) out[n++] = {q, v};
    std::sort(out.begin(), out.end(),
              [](const Neighbor& a, const Neighbor& b) { return a.mid < b.mid; });
    return out;
}

bool adjacent(MidEdge a, MidEdge b) {
    if (a == b) return false;
    for (const auto& nb : neighbors(a))
        if (nb.mid == b) return true;
    return false;
}

LatticeVertex shared_vertex(MidEdge a, MidEdge b) {
    for (const auto& nb : neighbors(a))
        if (nb.mid == b) return nb.via;
    throw ContractError("mid-edges " + to_string(a) + " and " + to_string(b) + " are not adjacent");
}

mpq_class ratio(long num, long den) {
    mpq_class q(num, den);
    q.canonicalize();
    return q;
}

ExactPoint embed(MidEdge m) {
    require_valid(m);
    return {ratio(m.xq, 4), ratio(m.yq, 12)};
}

ExactPoint embed(LatticeVertex v) {
    if (!is_vertex(v)) throw ContractError("not a lattice vertex");
    return {ratio(v.xq, 4), ratio(v.yq, 12)};
}

mpq_class squared_distance(int dxq, int dyq) {
    // (dxq/4)^2 + 3 (dyq/12)^2
    mpq_class r = ratio(dxq * dxq, 16) + ratio(dyq * dyq, 48);
    r.canonicalize();
    return r;
}

Surd project(const ExactPoint& p, ProjectionAngle angle) {
    switch (angle) {
    case ProjectionAngle::Pi2: return {0, p.y_over_sqrt3};
    case ProjectionAngle::Pi6:
        // x cos(pi/6) + y sin(pi/6) = sqrt(3) (x/2 + y_over_sqrt3/2)
        return {0, mpq_class(p.x / 2 + p.y_over_sqrt3 / 2)};
    }
    throw ContractError("unsupported projection angle");
}

int step_turn(MidEdge from, MidEdge to) {
    const LatticeVertex v = shared_vertex(from, to);
    const auto ends_from = endpoints(from);
    const auto ends_to = endpoints(to);
    const LatticeVertex back = ends_from[0] == v ? ends_from[1] : ends_from[0];
    const LatticeVertex ahead = ends_to[0] == v ? ends_to[1] : ends_to[0];
    // Both grid axes carry positive scale factors, so the sign survives.
    const long dx1 = v.xq - back.xq, dy1 = v.yq - back.yq;
    const long dx2 = ahead.xq - v.xq, dy2 = ahead.yq - v.yq;
    return dx1 * dy2 - dy1 * dx2 > 0 ? 1 : -1;
}

int turn_sign(MidEdge a, MidEdge b, MidEdge c) {
    if (a == c || shared_vertex(a, b) == shared_vertex(b, c))
        throw ContractError("segment backtracks through a single vertex");
    return step_turn(b, c);
}

MidEdge rotate_about_center(MidEdge m, int cxq, int cyq, int sixths) {
    if (!is_hexagon_center(cxq, cyq)) throw ContractError("rotation centre is not a hexagon centre");
    int dx = m.xq - cxq, dy = m.yq - cyq;
    for (int k = 0; k < pmod(sixths, 6); ++k) {
        const int nx = (dx - dy) / 2;
        const int ny = (3 * dx + dy) / 2;
        dx = nx;
        dy = ny;
    }
    return {cxq + dx, cyq + dy};
}

MidEdge reflect_vertical_line(MidEdge m, int axis) {
    if (pmod(axis, 2) != 0) throw ContractError("mirror column must be even");
    return {2 * axis - m.xq, m.yq};
}

Walk::Walk(std::vector<MidEdge> mids) : mids_(std::move(mids)) {
    if (!is_valid_sequence(mids_)) throw ContractError("sequence is not a self-avoiding walk");
}

Walk Walk::trusted(std::vector<MidEdge> mids) {
    Walk w;
    w.mids_ = std::move(mids);
    return w;
}

bool Walk::is_valid_sequence(std::span<const MidEdge> mids) {
    if (mids.empty()) return false;
    for (auto m : mids)
        if (!is_valid(m)) return false;
    std::vector<MidEdge> sorted(mids.begin(), mids.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
    for (std::size_t i = 1; i < mids.size(); ++i)
        if (!adjacent(mids[i - 1], mids[i])) return false;
    for (std::size_t i = 1; i + 1 < mids.size(); ++i)
        if (shared_vertex(mids[i - 1], mids[i]) == shared_vertex(mids[i], mids[i + 1])) return false;
    return true;
}

int Walk::winding() const {
    int w = 0;
    for (std::size_t i = 1; i < mids_.size(); ++i) w += step_turn(mids_[i - 1], mids_[i]);
    return w;
}

Walk Walk::reversed() const {
    Walk r;
    r.mids_.assign(mids_.rbegin(), mids_.rend());
    return r;
}

Walk Walk::sub(std::size_t first, std::size_t last) const {
    if (first > last || last >= mids_.size()) throw ContractError("sub-walk range out of bounds");
    Walk r;
    r.mids_.assign(mids_.begin() + static_cast<long>(first), mids_.begin() + static_cast<long>(last) + 1);
    return r;
}

std::string to_string(MidEdge m) {
    return "[" + std::to_string(m.xq) + "," + std::to_string(m.yq) + "]";
}

} // namespace hexwalk
