#include "adsim/workspace.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace adsim {

namespace {

// Signed tolerance for polygon membership: projection results land on edges
// up to one rounding error, and the membership postcondition must accept them.
constexpr double kEdgeTol = 1e-12;

double cross2(const Vec& o, const Vec& a, const Vec& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

Vec closest_on_segment(const Vec& a, const Vec& b, const Vec& x) {
    const Vec ab = b - a;
    const double len_sq = ab.norm_sq();
    if (len_sq == 0.0) return a;
    double t = (x - a).dot(ab) / len_sq;
    t = std::clamp(t, 0.0, 1.0);
    return a + t * ab;
}

}  // namespace

Workspace Workspace::interval(double lo, double hi) {
    if (!(hi > lo)) throw std::invalid_argument("workspace: interval needs hi > lo");
    Workspace ws;
    ws.kind_ = Kind::Interval;
    ws.dim_ = 1;
    ws.lo_ = Vec(lo);
    ws.hi_ = Vec(hi);
    ws.diameter_ = hi - lo;
    return ws;
}

Workspace Workspace::box(const Vec& lo, const Vec& hi) {
    if (lo.dim != hi.dim || lo.dim < 1 || lo.dim > 3)
        throw std::invalid_argument("workspace: box bounds must share dimension 1..3");
    for (int i = 0; i < lo.dim; ++i)
        if (!(hi[i] > lo[i])) throw std::invalid_argument("workspace: box needs positive side lengths");
    Workspace ws;
    ws.kind_ = lo.dim == 1 ? Kind::Interval : Kind::Box;
    ws.dim_ = lo.dim;
    ws.lo_ = lo;
    ws.hi_ = hi;
    ws.diameter_ = dist(lo, hi);
    return ws;
}

Workspace Workspace::polygon(std::vector<Vec> ccw_vertices) {
    const std::size_t n = ccw_vertices.size();
    if (n < 3) throw std::invalid_argument("workspace: polygon needs >= 3 vertices");
    for (const Vec& v : ccw_vertices)
        if (v.dim != 2) throw std::invalid_argument("workspace: polygon vertices must be 2-D");
    for (std::size_t i = 0; i < n; ++i) {
        const Vec& o = ccw_vertices[i];
        const Vec& a = ccw_vertices[(i + 1) % n];
        const Vec& b = ccw_vertices[(i + 2) % n];
        if (!(cross2(o, a, b) > 0.0))
            throw std::invalid_argument("workspace: polygon must be strictly convex and counterclockwise");
    }
    Workspace ws;
    ws.kind_ = Kind::Polygon;
    ws.dim_ = 2;
    ws.vertices_ = std::move(ccw_vertices);
    Vec lo = ws.vertices_[0], hi = ws.vertices_[0];
    for (const Vec& v : ws.vertices_) {
        for (int i = 0; i < 2; ++i) {
            lo[i] = std::min(lo[i], v[i]);
            hi[i] = std::max(hi[i], v[i]);
        }
    }
    ws.lo_ = lo;
    ws.hi_ = hi;
    double d2 = 0.0;
    for (const Vec& a : ws.vertices_)
        for (const Vec& b : ws.vertices_) d2 = std::max(d2, dist_sq(a, b));
    ws.diameter_ = std::sqrt(d2);
    return ws;
}

bool Workspace::contains(const Vec& x) const {
    if (x.dim != dim_) return false;
    if (kind_ != Kind::Polygon) {
        for (int i = 0; i < dim_; ++i)
            if (x[i] < lo_[i] || x[i] > hi_[i]) return false;
        return true;
    }
    const std::size_t n = vertices_.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (cross2(vertices_[i], vertices_[(i + 1) % n], x) < -kEdgeTol * diameter_) return false;
    }
    return true;
}

Vec Workspace::project(const Vec& x) const {
    if (x.dim != dim_) throw std::invalid_argument("workspace: projecting point of wrong dimension");
    if (kind_ != Kind::Polygon) {
        Vec p = x;
        for (int i = 0; i < dim_; ++i) p[i] = std::clamp(x[i], lo_[i], hi_[i]);
        return p;
    }
    if (contains(x)) return x;
    const std::size_t n = vertices_.size();
    Vec best = vertices_[0];
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec cand = closest_on_segment(vertices_[i], vertices_[(i + 1) % n], x);
        const double d2 = dist_sq(cand, x);
        if (d2 < best_d2) {
            best_d2 = d2;
            best = cand;
        }
    }
    return best;
}

}  // namespace adsim
