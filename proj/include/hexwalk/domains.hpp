#pragma once

// Closed lattice domains described by half-planes a*xq + b*yq <= c on the
// integer grid, plus explicit vertex-set domains.
//
// Every side line used here meets edges of the honeycomb only at their
// midpoints, so a mid-edge is inside a convex domain iff it satisfies all
// constraints, and corners of the built-in polygons are hexagon centres.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hexwalk/lattice.hpp"
#include "json.hpp"

namespace hexwalk {

enum class SideLabel { RealAxis, BottomSide, RightSide, LeftSide, TopSide, TopLine, Generic };

std::string to_string(SideLabel s);
SideLabel side_label_from_string(const std::string& s);

struct HalfPlaneConstraint {
    long a = 0;
    long b = 0;
    long c = 0;
    SideLabel label = SideLabel::Generic;

    long value(MidEdge m) const { return a * m.xq + b * m.yq; }
    bool satisfied(MidEdge m) const { return value(m) <= c; }
    bool on_line(MidEdge m) const { return value(m) == c; }

    friend bool operator==(const HalfPlaneConstraint&, const HalfPlaneConstraint&) = default;
};

/// The region rotated by -pi/3 about the grid origin.
HalfPlaneConstraint rotate_minus_sixth(const HalfPlaneConstraint& h);
/// The region translated by the grid vector (dxq, dyq).
HalfPlaneConstraint translate(const HalfPlaneConstraint& h, int dxq, int dyq);

enum class DomainKind {
    Strip,
    Triangle,
    RotatedTriangle,
    Trapezoid,
    HalfPlane,
    OffsetTriangle,
    SmallTriangle,
    Explicit,
    Plane
};

struct GridBox {
    int xmin = 0, xmax = 0, ymin = 0, ymax = 0;
};

class Domain {
public:
    /// 0 <= y <= (sqrt 3 / 2) k.
    static Domain strip(int k);
    /// Tria_{2k+1}: corners (-k-1/2, 0), (k+1/2, 0), (0, (sqrt 3 / 2)(2k+1)).
    static Domain triangle(int k);
    /// x + e^{-i pi/3} Tria_{2i+1}. Corners are hexagon centres (and x a
    /// boundary mid-edge) only when 3 xq + yq = 6 (mod 12), as on every
    /// triangle's right side.
    static Domain rotated_triangle(int i, MidEdge x);
    /// rotated_triangle(i, x) intersected with the upper half-plane.
    static Domain trapezoid(int i, MidEdge x);
    /// y >= 0.
    static Domain half_plane();
    /// Tria_{2k+1} cut on the right by the line through (i + 1/2, 0) parallel
    /// to its right side; 0 <= i <= k.
    static Domain offset_triangle(int k, int i);
    /// y + e^{4 pi i/3} Tria_{two_r}; two_r odd.
    static Domain small_triangle(MidEdge y, int two_r);
    /// Mid-edges with at least one endpoint in the given vertex set.
    static Domain explicit_vertices(std::vector<LatticeVertex> vertices);
    /// The whole lattice.
    static Domain plane();

    /// Reads one "xq yq" vertex per line; blank lines and '#' comments skipped.
    static Domain load_vertex_file(const std::string& path);

    DomainKind kind() const { return kind_; }
    bool bounded() const { return bounded_; }
    const std::vector<HalfPlaneConstraint>& constraints() const { return constraints_; }
    const std::vector<LatticeVertex>& vertices() const { return vertices_; }
    int param_k() const { return k_; }
    int param_i() const { return i_; }
    MidEdge anchor() const { return anchor_; }

    bool contains(MidEdge m) const;
    /// True when m is inside and lies on a side carrying `label`.
    bool on_side(MidEdge m, SideLabel label) const;

    /// Smallest grid box containing every mid-edge of a bounded domain.
    GridBox bounding_box() const;
    std::vector<MidEdge> mids_in_box(const GridBox& box) const;
    /// Sorted mid-edges of a bounded domain.
    std::vector<MidEdge> mids() const;

    /// Boundary mid-edges with their labels. Ties go to the first label in the
    /// order RealAxis/BottomSide, RightSide, LeftSide, TopSide, TopLine.
    std::map<MidEdge, SideLabel> boundary_sides() const;

    /// Vertices all three of whose mid-edges lie in the domain.
    std::vector<LatticeVertex> interior_vertices() const;

    std::string name() const;

    nlohmann::json to_json() const;
    static Domain from_json(const nlohmann::json& j);

    friend bool operator==(const Domain& a, const Domain& b) {
        return a.kind_ == b.kind_ && a.constraints_ == b.constraints_ && a.vertices_ == b.vertices_;
    }

private:
    DomainKind kind_ = DomainKind::Plane;
    bool bounded_ = false;
    int k_ = 0;
    int i_ = 0;
    MidEdge anchor_{};
    std::vector<HalfPlaneConstraint> constraints_;
    std::vector<LatticeVertex> vertices_;
    std::set<LatticeVertex> vertex_set_;
};

} // namespace hexwalk
