#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace adsim {

// Servicing-cost function c(z,p) = f(||z-p||), restricted to a closed family
// so scenario files stay serializable. f is increasing and C^1 on [0, diam Q];
// the value at an exact coincidence is handled by the 0/||0|| := 0 convention
// at the call sites, never by evaluating deriv at a kink.
struct CostSpec {
    enum class Kind { Linear, Quadratic, Power };

    Kind kind = Kind::Quadratic;
    double speed = 1.0;  // Linear: f(x) = x / speed
    double alpha = 2.0;  // Power: f(x) = x^alpha, alpha >= 1

    static CostSpec linear(double v) {
        if (!(v > 0.0)) throw std::invalid_argument("cost: linear speed must be > 0");
        CostSpec c;
        c.kind = Kind::Linear;
        c.speed = v;
        return c;
    }
    static CostSpec quadratic() {
        CostSpec c;
        c.kind = Kind::Quadratic;
        return c;
    }
    static CostSpec power(double a) {
        if (!(a >= 1.0)) throw std::invalid_argument("cost: power exponent must be >= 1");
        CostSpec c;
        c.kind = Kind::Power;
        c.alpha = a;
        return c;
    }

    double value(double x) const {
        switch (kind) {
            case Kind::Linear: return x / speed;
            case Kind::Quadratic: return x * x;
            case Kind::Power: return std::pow(x, alpha);
        }
        return 0.0;
    }

    double deriv(double x) const {
        switch (kind) {
            case Kind::Linear: return 1.0 / speed;
            case Kind::Quadratic: return 2.0 * x;
            case Kind::Power: return alpha * std::pow(x, alpha - 1.0);
        }
        return 0.0;
    }

    std::string describe() const {
        switch (kind) {
            case Kind::Linear: return "linear " + std::to_string(speed);
            case Kind::Quadratic: return "quadratic";
            case Kind::Power: return "power " + std::to_string(alpha);
        }
        return "";
    }
};

}  // namespace adsim
