#include "adsim/events.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace adsim::events {

namespace {

constexpr long kRejectionCap = 1000000;

[[noreturn]] void throw_degenerate() {
    throw std::domain_error(
        "events: degenerate distribution, rejection sampling exceeded 1e6 attempts without landing in Q");
}

}  // namespace

SpatialDistribution SpatialDistribution::uniform(Workspace ws) {
    SpatialDistribution d(std::move(ws));
    d.kind_ = Kind::Uniform;
    return d;
}

SpatialDistribution SpatialDistribution::gaussian_mixture(Workspace ws,
                                                          std::vector<MixtureComponent> components) {
    if (components.empty()) throw std::invalid_argument("events: mixture needs at least one component");
    double total = 0.0;
    for (const auto& comp : components) {
        if (!(comp.weight > 0.0)) throw std::invalid_argument("events: mixture weights must be positive");
        if (!(comp.sigma > 0.0)) throw std::invalid_argument("events: mixture sigmas must be positive");
        if (comp.mean.dim != ws.dim())
            throw std::invalid_argument("events: mixture mean dimension mismatch");
        total += comp.weight;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("events: mixture weights must sum to 1");
    SpatialDistribution d(std::move(ws));
    d.kind_ = Kind::GaussianMixture;
    d.components_ = std::move(components);
    return d;
}

SpatialDistribution SpatialDistribution::ring(Workspace ws, const Vec& center, double radius) {
    if (ws.dim() != 2) throw std::invalid_argument("events: ring distribution needs a 2-D workspace");
    if (!(radius > 0.0)) throw std::invalid_argument("events: ring radius must be positive");
    // The circle must lie inside Q; probe a dense set of angles once.
    for (int i = 0; i < 360; ++i) {
        const double a = 2.0 * M_PI * i / 360.0;
        const Vec p(center[0] + radius * std::cos(a), center[1] + radius * std::sin(a));
        if (!ws.contains(p)) throw std::invalid_argument("events: ring support must be contained in Q");
    }
    SpatialDistribution d(std::move(ws));
    d.kind_ = Kind::Ring;
    d.ring_center_ = center;
    d.ring_radius_ = radius;
    return d;
}

Vec SpatialDistribution::sample(Rng& rng) const {
    switch (kind_) {
        case Kind::Uniform: {
            const Vec& lo = ws_.bounds_lo();
            const Vec& hi = ws_.bounds_hi();
            if (ws_.kind() != Workspace::Kind::Polygon) {
                Vec z = Vec::zero(ws_.dim());
                for (int i = 0; i < ws_.dim(); ++i) z[i] = rng.uniform(lo[i], hi[i]);
                return z;
            }
            for (long attempt = 0; attempt < kRejectionCap; ++attempt) {
                const Vec z(rng.uniform(lo[0], hi[0]), rng.uniform(lo[1], hi[1]));
                if (ws_.contains(z)) return z;
            }
            throw_degenerate();
        }
        case Kind::GaussianMixture: {
            for (long attempt = 0; attempt < kRejectionCap; ++attempt) {
                double u = rng.uniform01();
                std::size_t pick = components_.size() - 1;
                for (std::size_t i = 0; i < components_.size(); ++i) {
                    if (u < components_[i].weight) {
                        pick = i;
                        break;
                    }
                    u -= components_[i].weight;
                }
                const MixtureComponent& comp = components_[pick];
                Vec z = comp.mean;
                for (int i = 0; i < ws_.dim(); ++i) z[i] += comp.sigma * rng.normal();
                if (ws_.contains(z)) return z;
            }
            throw_degenerate();
        }
        case Kind::Ring: {
            const double a = rng.uniform(0.0, 2.0 * M_PI);
            return Vec(ring_center_[0] + ring_radius_ * std::cos(a),
                       ring_center_[1] + ring_radius_ * std::sin(a));
        }
    }
    throw std::logic_error("events: unknown distribution kind");
}

MarkovTarget markov_advance(const MarkovTarget& t, double xi) {
    MarkovTarget out = t;
    out.theta = t.decay * t.theta + xi;
    return out;
}

Vec markov_point(const MarkovTarget& t) {
    return Vec(t.center[0] + t.radius * std::cos(t.theta), t.center[1] + t.radius * std::sin(t.theta));
}

std::pair<MarkovTarget, Vec> markov_step(const MarkovTarget& t, Rng& rng) {
    const double xi = rng.uniform(-t.noise_half_width, t.noise_half_width);
    const MarkovTarget next = markov_advance(t, xi);
    return {next, markov_point(next)};
}

PoissonStream::PoissonStream(double rate, SpatialDistribution spatial, ServiceLaw service)
    : rate_(rate), spatial_(std::move(spatial)), service_(service) {
    if (!(rate > 0.0)) throw std::invalid_argument("events: Poisson rate must be positive");
    if (!(service.mean >= 0.0)) throw std::invalid_argument("events: service mean must be nonnegative");
}

PoissonStream::Arrival PoissonStream::next(Rng& rng) {
    last_time_ += rng.exponential(1.0 / rate_);
    return Arrival{last_time_, spatial_.sample(rng), service_.sample(rng)};
}

TypedEventLaw::TypedEventLaw(std::array<double, 3> probs, SpatialDistribution dist_a,
                             SpatialDistribution dist_b, SpatialDistribution dist_ab)
    : probs_(probs) {
    for (double p : probs_)
        if (!(p >= 0.0)) throw std::invalid_argument("events: type probabilities must be nonnegative");
    const double total = probs_[0] + probs_[1] + probs_[2];
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("events: type probabilities must sum to 1");
    dists_.reserve(3);
    dists_.push_back(std::move(dist_a));
    dists_.push_back(std::move(dist_b));
    dists_.push_back(std::move(dist_ab));
}

std::pair<EventType, Vec> TypedEventLaw::sample(Rng& rng) const {
    const double u = rng.uniform01();
    EventType type = EventType::AB;
    if (u < probs_[0])
        type = EventType::A;
    else if (u < probs_[0] + probs_[1])
        type = EventType::B;
    const auto idx = static_cast<std::size_t>(type);
    return {type, dists_[idx].sample(rng)};
}

}  // namespace adsim::events
