#include "hexwalk/domains.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <numeric>
#include <sstream>

#include "hexwalk/errors.hpp"

namespace hexwalk {

namespace {

int label_rank(SideLabel s) {
    switch (s) {
    case SideLabel::RealAxis:
    case SideLabel::BottomSide: return 0;
    case SideLabel::RightSide: return 1;
    case SideLabel::LeftSide: return 2;
    case SideLabel::TopSide: return 3;
    case SideLabel::TopLine: return 4;
    case SideLabel::Generic: return 5;
    }
    return 6;
}

std::vector<HalfPlaneConstraint> triangle_constraints(int k) {
    const long side = 12L * k + 6;
    return {{0, -1, 0, SideLabel::RealAxis},
            {3, 1, side, SideLabel::RightSide},
            {-3, 1, side, SideLabel::LeftSide}};
}

// Tria_{two_r} for odd two_r.
std::vector<HalfPlaneConstraint> triangle_constraints_width(int width) {
    if (width < 1 || width % 2 == 0) throw ContractError("triangle width must be a positive odd integer");
    return triangle_constraints((width - 1) / 2);
}

std::vector<HalfPlaneConstraint> rotated_translated(std::vector<HalfPlaneConstraint> cs, int sixths,
                                                    MidEdge to, const std::array<SideLabel, 3>& relabel) {
    for (std::size_t n = 0; n < cs.size(); ++n) {
        for (int s = 0; s < sixths; ++s) cs[n] = rotate_minus_sixth(cs[n]);
        cs[n] = translate(cs[n], to.xq, to.yq);
        cs[n].label = relabel[n];
    }
    return cs;
}

// Exact intersection of two constraint lines; false when parallel.
bool intersect(const HalfPlaneConstraint& p, const HalfPlaneConstraint& q, mpq_class& x, mpq_class& y) {
    const long det = p.a * q.b - p.b * q.a;
    if (det == 0) return false;
    x = ratio(p.c * q.b - p.b * q.c, det);
    y = ratio(p.a * q.c - p.c * q.a, det);
    x.canonicalize();
    y.canonicalize();
    return true;
}

int floor_q(const mpq_class& q) {
    mpz_class r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return static_cast<int>(r.get_si());
}

int ceil_q(const mpq_class& q) {
    mpz_class r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return static_cast<int>(r.get_si());
}

const char* kind_name(DomainKind k) {
    switch (k) {
    case DomainKind::Strip: return "strip";
    case DomainKind::Triangle: return "triangle";
    case DomainKind::RotatedTriangle: return "rotated_triangle";
    case DomainKind::Trapezoid: return "trapezoid";
    case DomainKind::HalfPlane: return "half_plane";
    case DomainKind::OffsetTriangle: return "offset_triangle";
    case DomainKind::SmallTriangle: return "small_triangle";
    case DomainKind::Explicit: return "explicit";
    case DomainKind::Plane: return "plane";
    }
    return "?";
}

} // namespace

std::string to_string(SideLabel s) {
    switch (s) {
    case SideLabel::RealAxis: return "RealAxis";
    case SideLabel::BottomSide: return "BottomSide";
    case SideLabel::RightSide: return "RightSide";
    case SideLabel::LeftSide: return "LeftSide";
    case SideLabel::TopSide: return "TopSide";
    case SideLabel::TopLine: return "TopLine";
    case SideLabel::Generic: return "Generic";
    }
    return "?";
}

SideLabel side_label_from_string(const std::string& s) {
    for (auto l : {SideLabel::RealAxis, SideLabel::BottomSide, SideLabel::RightSide, SideLabel::LeftSide,
                   SideLabel::TopSide, SideLabel::TopLine, SideLabel::Generic})
        if (to_string(l) == s) return l;
    throw ParseError("unknown side label '" + s + "'");
}

HalfPlaneConstraint rotate_minus_sixth(const HalfPlaneConstraint& h) {
    // q lies in the rotated region iff R_{+pi/3} q lies in the original one,
    // and R_{+pi/3}(xq, yq) = ((xq - yq)/2, (3xq + yq)/2).
    return {h.a + 3 * h.b, h.b - h.a, 2 * h.c, h.label};
}

HalfPlaneConstraint translate(const HalfPlaneConstraint& h, int dxq, int dyq) {
    return {h.a, h.b, h.c + h.a * dxq + h.b * dyq, h.label};
}

Domain Domain::strip(int k) {
    if (k < 0) throw ContractError("strip height must be nonnegative");
    Domain d;
    d.kind_ = DomainKind::Strip;
    d.k_ = k;
    d.constraints_ = {{0, -1, 0, SideLabel::RealAxis}, {0, 1, 6L * k, SideLabel::TopLine}};
    return d;
}

Domain Domain::triangle(int k) {
    if (k < 0) throw ContractError("triangle index must be nonnegative");
    Domain d;
    d.kind_ = DomainKind::Triangle;
    d.bounded_ = true;
    d.k_ = k;
    d.constraints_ = triangle_constraints(k);
    return d;
}

Domain Domain::rotated_triangle(int i, MidEdge x) {
    require_valid(x);
    if (i < 0) throw ContractError("triangle index must be nonnegative");
    Domain d;
    d.kind_ = DomainKind::RotatedTriangle;
    d.bounded_ = true;
    d.i_ = i;
    d.anchor_ = x;
    // base -> left, right -> right, left -> top
    d.constraints_ = rotated_translated(triangle_constraints(i), 1, x,
                                        {SideLabel::LeftSide, SideLabel::RightSide, SideLabel::TopSide});
    return d;
}

Domain Domain::trapezoid(int i, MidEdge x) {
    Domain d = rotated_triangle(i, x);
    d.kind_ = DomainKind::Trapezoid;
    d.constraints_.push_back({0, -1, 0, SideLabel::BottomSide});
    return d;
}

Domain Domain::half_plane() {
    Domain d;
    d.kind_ = DomainKind::HalfPlane;
    d.constraints_ = {{0, -1, 0, SideLabel::RealAxis}};
    return d;
}

Domain Domain::offset_triangle(int k, int i) {
    if (i < 0 || i > k) throw ContractError("offset triangle needs 0 <= i <= k");
    Domain d;
    d.kind_ = DomainKind::OffsetTriangle;
    d.bounded_ = true;
    d.k_ = k;
    d.i_ = i;
    const long side = 12L * k + 6;
    d.constraints_ = {{0, -1, 0, SideLabel::RealAxis},
                      {3, 1, 12L * i + 6, SideLabel::RightSide},
                      {-3, 1, side, SideLabel::LeftSide}};
    return d;
}

Domain Domain::small_triangle(MidEdge y, int two_r) {
    require_valid(y);
    Domain d;
    d.kind_ = DomainKind::SmallTriangle;
    d.bounded_ = true;
    d.k_ = two_r;
    d.anchor_ = y;
    // base -> left, right -> real axis, left -> right
    d.constraints_ = rotated_translated(triangle_constraints_width(two_r), 2, y,
                                        {SideLabel::LeftSide, SideLabel::RealAxis, SideLabel::RightSide});
    return d;
}

Domain Domain::explicit_vertices(std::vector<LatticeVertex> vertices) {
    for (auto v : vertices)
        if (!is_vertex(v)) throw ContractError("not a lattice vertex: (" + std::to_string(v.xq) + "," +
                                               std::to_string(v.yq) + ")");
    std::sort(vertices.begin(), vertices.end());
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
    if (vertices.empty()) throw ContractError("explicit domain needs at least one vertex");
    Domain d;
    d.kind_ = DomainKind::Explicit;
    d.bounded_ = true;
    d.vertex_set_ = std::set<LatticeVertex>(vertices.begin(), vertices.end());
    d.vertices_ = std::move(vertices);
    return d;
}

Domain Domain::plane() { return Domain{}; }

Domain Domain::load_vertex_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open vertex file '" + path + "'");
    std::vector<LatticeVertex> vs;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ss(line);
        LatticeVertex v;
        std::string rest;
        if (!(ss >> v.xq >> v.yq) || (ss >> rest))
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected two integers");
        if (!is_vertex(v)) throw ParseError(path + ":" + std::to_string(lineno) + ": not a lattice vertex");
        vs.push_back(v);
    }
    return explicit_vertices(std::move(vs));
}

bool Domain::contains(MidEdge m) const {
    if (!is_valid(m)) return false;
    if (kind_ == DomainKind::Explicit) {
        for (auto v : endpoints(m))
            if (vertex_set_.count(v)) return true;
        return false;
    }
    return std::all_of(constraints_.begin(), constraints_.end(),
                       [&](const HalfPlaneConstraint& h) { return h.satisfied(m); });
}

bool Domain::on_side(MidEdge m, SideLabel label) const {
    if (!contains(m)) return false;
    if (kind_ == DomainKind::Explicit) {
        if (label != SideLabel::Generic) return false;
        for (auto v : endpoints(m))
            if (!vertex_set_.count(v)) return true;
        return false;
    }
    return std::any_of(constraints_.begin(), constraints_.end(),
                       [&](const HalfPlaneConstraint& h) { return h.label == label && h.on_line(m); });
}

GridBox Domain::bounding_box() const {
    if (!bounded_) throw ContractError("bounding box of an unbounded domain");
    GridBox box{0, 0, 0, 0};
    bool first = true;
    auto grow = [&](int x0, int x1, int y0, int y1) {
        if (first) {
            box = {x0, x1, y0, y1};
            first = false;
            return;
        }
        box.xmin = std::min(box.xmin, x0);
        box.xmax = std::max(box.xmax, x1);
        box.ymin = std::min(box.ymin, y0);
        box.ymax = std::max(box.ymax, y1);
    };
    if (kind_ == DomainKind::Explicit) {
        for (auto v : vertices_) grow(v.xq - 1, v.xq + 1, v.yq - 2, v.yq + 2);
        return box;
    }
    for (std::size_t p = 0; p < constraints_.size(); ++p)
        for (std::size_t q = p + 1; q < constraints_.size(); ++q) {
            mpq_class x, y;
            if (!intersect(constraints_[p], constraints_[q], x, y)) continue;
            bool inside = true;
            for (const auto& h : constraints_) {
                const mpq_class v = h.a * x + h.b * y;
                if (v > h.c) inside = false;
            }
            if (inside) grow(floor_q(x), ceil_q(x), floor_q(y), ceil_q(y));
        }
    if (first) throw ContractError("domain has no corners");
    return box;
}

std::vector<MidEdge> Domain::mids_in_box(const GridBox& box) const {
    std::vector<MidEdge> out;
    for (int x = box.xmin; x <= box.xmax; ++x)
        for (int y = box.ymin; y <= box.ymax; ++y) {
            const MidEdge m{x, y};
            if (contains(m)) out.push_back(m);
        }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<MidEdge> Domain::mids() const { return mids_in_box(bounding_box()); }

std::map<MidEdge, SideLabel> Domain::boundary_sides() const {
    if (!bounded_) throw ContractError("boundary_sides needs a bounded domain");
    std::map<MidEdge, SideLabel> out;
    for (auto m : mids()) {
        if (kind_ == DomainKind::Explicit) {
            if (on_side(m, SideLabel::Generic)) out[m] = SideLabel::Generic;
            continue;
        }
        std::optional<SideLabel> best;
        for (const auto& h : constraints_)
            if (h.on_line(m) && (!best || label_rank(h.label) < label_rank(*best))) best = h.label;
        if (best) out[m] = *best;
    }
    return out;
}

std::vector<LatticeVertex> Domain::interior_vertices() const {
    std::set<LatticeVertex> seen;
    std::vector<LatticeVertex> out;
    for (auto m : mids())
        for (auto v : endpoints(m)) {
            if (!seen.insert(v).second) continue;
            const auto around = mids_around(v);
            if (std::all_of(around.begin(), around.end(), [&](MidEdge p) { return contains(p); }))
                out.push_back(v);
        }
    std::sort(out.begin(), out.end());
    return out;
}

std::string Domain::name() const {
    auto mid = [](MidEdge m) { return std::to_string(m.xq) + "," + std::to_string(m.yq); };
    switch (kind_) {
    case DomainKind::Strip: return "Strip_" + std::to_string(k_);
    case DomainKind::Triangle: return "Tria_" + std::to_string(2 * k_ + 1);
    case DomainKind::RotatedTriangle: return "Tria_" + std::to_string(2 * i_ + 1) + ",(" + mid(anchor_) + ")";
    case DomainKind::Trapezoid: return "Trap_" + std::to_string(2 * i_ + 1) + ",(" + mid(anchor_) + ")";
    case DomainKind::HalfPlane: return "U";
    case DomainKind::OffsetTriangle: return "T_" + std::to_string(k_) + "," + std::to_string(i_);
    case DomainKind::SmallTriangle: return "SmallTria_" + std::to_string(k_) + ",(" + mid(anchor_) + ")";
    case DomainKind::Explicit: return "Explicit[" + std::to_string(vertices_.size()) + "]";
    case DomainKind::Plane: return "H";
    }
    return "?";
}

nlohmann::json Domain::to_json() const {
    nlohmann::json j;
    j["kind"] = kind_name(kind_);
    switch (kind_) {
    case DomainKind::Strip:
    case DomainKind::Triangle: j["k"] = k_; break;
    case DomainKind::RotatedTriangle:
    case DomainKind::Trapezoid:
        j["i"] = i_;
        j["x"] = {anchor_.xq, anchor_.yq};
        break;
    case DomainKind::OffsetTriangle:
        j["k"] = k_;
        j["i"] = i_;
        break;
    case DomainKind::SmallTriangle:
        j["two_r"] = k_;
        j["y"] = {anchor_.xq, anchor_.yq};
        break;
    case DomainKind::Explicit: {
        auto arr = nlohmann::json::array();
        for (auto v : vertices_) arr.push_back({v.xq, v.yq});
        j["vertices"] = arr;
        break;
    }
    case DomainKind::HalfPlane:
    case DomainKind::Plane: break;
    }
    return j;
}

Domain Domain::from_json(const nlohmann::json& j) {
    try {
        const std::string kind = j.at("kind").get<std::string>();
        auto mid = [](const nlohmann::json& a) { return MidEdge{a.at(0).get<int>(), a.at(1).get<int>()}; };
        if (kind == "strip") return strip(j.at("k").get<int>());
        if (kind == "triangle") return triangle(j.at("k").get<int>());
        if (kind == "rotated_triangle") return rotated_triangle(j.at("i").get<int>(), mid(j.at("x")));
        if (kind == "trapezoid") return trapezoid(j.at("i").get<int>(), mid(j.at("x")));
        if (kind == "half_plane") return half_plane();
        if (kind == "offset_triangle") return offset_triangle(j.at("k").get<int>(), j.at("i").get<int>());
        if (kind == "small_triangle") return small_triangle(mid(j.at("y")), j.at("two_r").get<int>());
        if (kind == "plane") return plane();
        if (kind == "explicit") {
            std::vector<LatticeVertex> vs;
            for (const auto& v : j.at("vertices")) vs.push_back({v.at(0).get<int>(), v.at(1).get<int>()});
            return explicit_vertices(std::move(vs));
        }
        throw ParseError("unknown domain kind '" + kind + "'");
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed domain JSON: ") + e.what());
    }
}

} // namespace hexwalk
