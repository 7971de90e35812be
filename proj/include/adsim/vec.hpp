#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <cstddef>

namespace adsim {

// Point/vector in R^q for q in {1,2,3}. Fixed capacity, runtime dimension;
// mixing dimensions is a programming error (asserted, not checked at runtime
// in release builds).
struct Vec {
    std::array<double, 3> c{0.0, 0.0, 0.0};
    int dim = 0;

    Vec() = default;
    explicit Vec(double x) : c{x, 0.0, 0.0}, dim(1) {}
    Vec(double x, double y) : c{x, y, 0.0}, dim(2) {}
    Vec(double x, double y, double z) : c{x, y, z}, dim(3) {}

    static Vec zero(int d) {
        Vec v;
        v.dim = d;
        return v;
    }
    static Vec ones(int d) {
        Vec v;
        v.dim = d;
        for (int i = 0; i < d; ++i) v.c[i] = 1.0;
        return v;
    }

    double& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
    double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }

    Vec& operator+=(const Vec& o) {
        assert(dim == o.dim);
        for (int i = 0; i < dim; ++i) c[i] += o.c[i];
        return *this;
    }
    Vec& operator-=(const Vec& o) {
        assert(dim == o.dim);
        for (int i = 0; i < dim; ++i) c[i] -= o.c[i];
        return *this;
    }
    Vec& operator*=(double s) {
        for (int i = 0; i < dim; ++i) c[i] *= s;
        return *this;
    }

    friend Vec operator+(Vec a, const Vec& b) { return a += b; }
    friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
    friend Vec operator*(Vec a, double s) { return a *= s; }
    friend Vec operator*(double s, Vec a) { return a *= s; }

    friend bool operator==(const Vec& a, const Vec& b) {
        if (a.dim != b.dim) return false;
        for (int i = 0; i < a.dim; ++i)
            if (a.c[i] != b.c[i]) return false;
        return true;
    }

    double dot(const Vec& o) const {
        assert(dim == o.dim);
        double s = 0.0;
        for (int i = 0; i < dim; ++i) s += c[i] * o.c[i];
        return s;
    }
    double norm_sq() const { return dot(*this); }
    double norm() const { return std::sqrt(norm_sq()); }

    bool finite() const {
        for (int i = 0; i < dim; ++i)
            if (!std::isfinite(c[i])) return false;
        return true;
    }
};

inline double dist_sq(const Vec& a, const Vec& b) { return (a - b).norm_sq(); }
inline double dist(const Vec& a, const Vec& b) { return (a - b).norm(); }

}  // namespace adsim
