#pragma once

#include <vector>

#include "adsim/vec.hpp"

namespace adsim {

// Compact convex workspace Q: an interval, an axis-aligned box, or a convex
// 2-D polygon (counterclockwise vertex list). Supports membership tests and
// exact Euclidean projection; those two operations are all the algorithms
// ever need from Q.
class Workspace {
  public:
    enum class Kind { Interval, Box, Polygon };

    static Workspace interval(double lo, double hi);
    static Workspace box(const Vec& lo, const Vec& hi);
    static Workspace polygon(std::vector<Vec> ccw_vertices);
    static Workspace unit_square() { return box(Vec(0.0, 0.0), Vec(1.0, 1.0)); }

    Kind kind() const { return kind_; }
    int dim() const { return dim_; }

    bool contains(const Vec& x) const;
    Vec project(const Vec& x) const;
    double diameter() const { return diameter_; }

    // Axis-aligned bounding box (equals the region for interval/box kinds).
    const Vec& bounds_lo() const { return lo_; }
    const Vec& bounds_hi() const { return hi_; }
    const std::vector<Vec>& vertices() const { return vertices_; }

  private:
    Workspace() = default;

    Kind kind_ = Kind::Box;
    int dim_ = 0;
    Vec lo_, hi_;                 // bounding box
    std::vector<Vec> vertices_;   // polygon only
    double diameter_ = 0.0;
};

}  // namespace adsim
