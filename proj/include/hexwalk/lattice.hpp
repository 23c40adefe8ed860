#pragma once

// Exact geometry of the hexagonal lattice and its mid-edge graph.
//
// Embedding: every edge has length sqrt(3)/3, hexagon centres form a triangular
// lattice with unit spacing, and the origin is the midpoint of a vertical edge
// whose neighbouring hexagon centres sit at (-1/2, 0) and (1/2, 0).
//
// All points are stored on the integer grid (xq, yq) meaning
// (x, y) = (xq / 4, yq * sqrt(3) / 12).
//
//   hexagon centre    : yq = 6b,            xq = 2 + 4a + 2b
//   vertical mid-edge : yq = 0 (mod 6), xq even, xq/2 = yq/6 (mod 2)
//   slanted mid-edge  : yq = 3 (mod 6), xq odd
//   lattice vertex    : type A at yq = 2 (mod 6), type B at yq = 4 (mod 6)
//
// A type A vertex v meets the mid-edges v+(0,-2), v+(-1,1), v+(1,1);
// a type B vertex meets v+(0,2), v+(-1,-1), v+(1,-1).

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace hexwalk {

struct MidEdge {
    int xq = 0;
    int yq = 0;
    friend auto operator<=>(const MidEdge&, const MidEdge&) = default;
};

struct LatticeVertex {
    int xq = 0;
    int yq = 0;
    friend auto operator<=>(const LatticeVertex&, const LatticeVertex&) = default;
};

enum class EdgeKind { Vertical, Slanted };

bool is_valid(MidEdge m) noexcept;
bool is_vertex(LatticeVertex v) noexcept;
bool is_hexagon_center(int xq, int yq) noexcept;

/// Throws ContractError when m is not a mid-edge of the grid.
void require_valid(MidEdge m);

EdgeKind kind(MidEdge m);

/// Both endpoints of the edge carrying m, lower one first.
std::array<LatticeVertex, 2> endpoints(MidEdge m);

/// The three mid-edges around a lattice vertex, sorted by coordinates.
std::array<MidEdge, 3> mids_around(LatticeVertex v);

struct Neighbor {
    MidEdge mid;
    LatticeVertex via;
    friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// The four adjacent mid-edges, sorted lexicographically by (xq, yq).
std::array<Neighbor, 4> neighbors(MidEdge m);

/// Shared vertex of two adjacent mid-edges; ContractError otherwise.
LatticeVertex shared_vertex(MidEdge a, MidEdge b);
bool adjacent(MidEdge a, MidEdge b);

/// num/den in canonical form (gmpxx does not reduce two-argument constructions).
mpq_class ratio(long num, long den);

/// a + b*sqrt(3) with rational a, b.
struct Surd {
    mpq_class rational;
    mpq_class sqrt3;
    friend bool operator==(const Surd& l, const Surd& r) {
        return l.rational == r.rational && l.sqrt3 == r.sqrt3;
    }
};

/// Exact point (x, y*sqrt(3)).
struct ExactPoint {
    mpq_class x;
    mpq_class y_over_sqrt3;
    friend bool operator==(const ExactPoint& l, const ExactPoint& r) {
        return l.x == r.x && l.y_over_sqrt3 == r.y_over_sqrt3;
    }
};

ExactPoint embed(MidEdge m);
ExactPoint embed(LatticeVertex v);

/// Squared Euclidean distance between grid points, exact.
mpq_class squared_distance(int dxq, int dyq);

enum class ProjectionAngle { Pi2, Pi6 };

/// Inner product of p with (cos t, sin t), t in {pi/2, pi/6}.
Surd project(const ExactPoint& p, ProjectionAngle angle);

/// Turn (+1 counterclockwise, -1 clockwise) made at the vertex shared by
/// `from` and `to` when the walk steps from `from` to `to`.
int step_turn(MidEdge from, MidEdge to);

/// Turn made at the vertex joining b and c on the segment a -> b -> c.
/// Requires adjacency, distinct mid-edges and distinct junction vertices.
int turn_sign(MidEdge a, MidEdge b, MidEdge c);

/// Rotation by k * pi/3 (counterclockwise) about a hexagon centre.
MidEdge rotate_about_center(MidEdge m, int cxq, int cyq, int sixths);

/// Mirror in the vertical line through grid column xq = axis (axis even).
MidEdge reflect_vertical_line(MidEdge m, int axis);

/// Self-avoiding walk on the mid-edge graph.
///
/// Invariants: consecutive mid-edges adjacent, all mid-edges distinct, and the
/// two steps around every interior mid-edge use both endpoints of its edge.
/// Together these are equivalent to visiting each lattice vertex at most once.
class Walk {
public:
    Walk() = default;
    explicit Walk(std::vector<MidEdge> mids);

    /// Validity test without throwing.
    static bool is_valid_sequence(std::span<const MidEdge> mids);

    /// Skips validation; for sequences produced by the enumerator.
    static Walk trusted(std::vector<MidEdge> mids);

    std::size_t length() const { return mids_.empty() ? 0 : mids_.size() - 1; }
    const std::vector<MidEdge>& mids() const { return mids_; }
    const MidEdge& operator[](std::size_t i) const { return mids_[i]; }
    const MidEdge& front() const { return mids_.front(); }
    const MidEdge& back() const { return mids_.back(); }
    bool empty() const { return mids_.empty(); }

    /// Total rotation in units of pi/3.
    int winding() const;
    Walk reversed() const;
    Walk sub(std::size_t first, std::size_t last) const;

    friend bool operator==(const Walk&, const Walk&) = default;

private:
    std::vector<MidEdge> mids_;
};

std::string to_string(MidEdge m);

} // namespace hexwalk
