#pragma once

// Brute-force references that share no code with the library: adjacency from
// squared distances, self-avoidance from junction points, walks by generating
// every adjacent sequence and filtering.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "hexwalk/lattice.hpp"

namespace oracle {

using Pt = std::pair<int, int>;

// |p - q|^2 in units of 1/48 on the (xq, yq) grid.
inline int sq48(Pt p, Pt q) {
    const int dx = p.first - q.first, dy = p.second - q.second;
    return 3 * dx * dx + dy * dy;
}

// Hexagon centres sit on yq = 6b with xq = 2 + 4a + 2b.
inline bool hex_centre(Pt p) {
    if (p.second % 6 != 0) return false;
    const int b = p.second / 6;
    const int r = p.first - 2 - 2 * b;
    return r % 4 == 0;
}

// Lattice vertices: points at distance sqrt(3)/3 from three hexagon centres.
inline bool vertex(Pt p) {
    int near = 0;
    for (int dx = -4; dx <= 4; ++dx)
        for (int dy = -8; dy <= 8; ++dy)
            if (hex_centre({p.first + dx, p.second + dy}) && sq48(p, {p.first + dx, p.second + dy}) == 16) ++near;
    return near == 3;
}

// Mid-edges: midpoints of two vertices at distance sqrt(3)/3.
inline bool mid(Pt p) {
    for (int dx = -2; dx <= 2; ++dx)
        for (int dy = -2; dy <= 2; ++dy) {
            const Pt a{p.first + dx, p.second + dy}, b{p.first - dx, p.second - dy};
            if ((dx || dy) && sq48(a, b) == 16 && vertex(a) && vertex(b)) return true;
        }
    return false;
}

// Edge endpoints of a mid-edge, memoized.
inline std::pair<Pt, Pt> ends(Pt p) {
    static std::map<Pt, std::pair<Pt, Pt>> memo;
    if (auto it = memo.find(p); it != memo.end()) return it->second;
    std::pair<Pt, Pt> found{p, p};
    for (int dx = -2; dx <= 2; ++dx)
        for (int dy = -2; dy <= 2; ++dy) {
            const Pt a{p.first + dx, p.second + dy}, b{p.first - dx, p.second - dy};
            if ((dx || dy) && sq48(a, b) == 16 && vertex(a) && vertex(b)) found = std::minmax(a, b);
        }
    memo.emplace(p, found);
    return found;
}

// Adjacent mid-edges share an endpoint; the shared one is the junction.
inline bool junction(Pt p, Pt q, Pt& out) {
    const auto [a, b] = ends(p);
    const auto [c, d] = ends(q);
    if (p == q) return false;
    for (Pt u : {a, b})
        for (Pt v : {c, d})
            if (u == v) {
                out = u;
                return true;
            }
    return false;
}

// Self-avoiding on the honeycomb: consecutive mid-edges adjacent and every
// junction vertex used once. A repeated mid-edge repeats a junction.
inline bool saw(const std::vector<Pt>& w) {
    std::set<Pt> used;
    for (std::size_t t = 1; t < w.size(); ++t) {
        Pt v;
        if (!junction(w[t - 1], w[t], v)) return false;
        if (!used.insert(v).second) return false;
    }
    std::set<Pt> mids(w.begin(), w.end());
    return mids.size() == w.size();
}

struct Box {
    int xmin, xmax, ymin, ymax;
    bool inside(Pt p) const { return xmin <= p.first && p.first <= xmax && ymin <= p.second && p.second <= ymax; }
};

inline std::vector<Pt> mids_in(const Box& b) {
    std::vector<Pt> out;
    for (int x = b.xmin; x <= b.xmax; ++x)
        for (int y = b.ymin; y <= b.ymax; ++y)
            if (mid({x, y})) out.push_back({x, y});
    return out;
}

// All adjacency-respecting sequences from `start` over `pool` with at most
// max_len steps, then filtered by saw(). Returns sorted walks.
inline std::vector<std::vector<Pt>> walks(Pt start, const std::vector<Pt>& pool, int max_len) {
    std::map<Pt, std::vector<Pt>> adj;
    for (Pt p : pool)
        for (Pt q : pool) {
            Pt v;
            if (sq48(p, q) <= 16 && junction(p, q, v)) adj[p].push_back(q);
        }
    std::vector<std::vector<Pt>> all{{start}}, frontier{{start}};
    for (int l = 1; l <= max_len; ++l) {
        std::vector<std::vector<Pt>> next;
        for (const auto& w : frontier)
            for (Pt q : adj[w.back()]) {
                auto e = w;
                e.push_back(q);
                next.push_back(std::move(e));
            }
        for (const auto& w : next) all.push_back(w);
        frontier = std::move(next);
    }
    std::vector<std::vector<Pt>> out;
    for (auto& w : all)
        if (saw(w)) out.push_back(std::move(w));
    std::sort(out.begin(), out.end());
    return out;
}

// c_n from the origin: the plane restricted to a box large enough for n steps.
inline std::vector<std::uint64_t> saw_counts(int n_max) {
    const Box box{-2 * n_max - 2, 2 * n_max + 2, -3 * n_max - 3, 3 * n_max + 3};
    std::vector<std::uint64_t> c(static_cast<std::size_t>(n_max) + 1, 0);
    for (const auto& w : walks({0, 0}, mids_in(box), n_max)) ++c[w.size() - 1];
    return c;
}

// Renewal line 3 xq + yq = 12 i + 6, crossed along the embedded polyline
// mid -> junction vertex -> mid. Events: a point on the line, or a strict
// sign change between consecutive points.
inline int line_events(const std::vector<Pt>& w, int i) {
    std::vector<Pt> poly{w.front()};
    for (std::size_t t = 1; t < w.size(); ++t) {
        Pt v;
        junction(w[t - 1], w[t], v);
        poly.push_back(v);
        poly.push_back(w[t]);
    }
    auto sgn = [&](Pt p) {
        const long f = 3L * p.first + p.second - (12L * i + 6);
        return (f > 0) - (f < 0);
    };
    int events = 0;
    for (std::size_t j = 0; j < poly.size(); ++j) {
        const int s = sgn(poly[j]);
        if (s == 0) {
            if (j == 0 || sgn(poly[j - 1]) != 0) ++events;
        } else if (j > 0 && sgn(poly[j - 1]) == -s) {
            ++events;
        }
    }
    return events;
}

inline std::vector<Pt> pts(const hexwalk::Walk& w) {
    std::vector<Pt> out;
    for (auto m : w.mids()) out.push_back({m.xq, m.yq});
    return out;
}

} // namespace oracle
