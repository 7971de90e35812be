#pragma once

#include <array>
#include <utility>
#include <vector>

#include "adsim/rng.hpp"
#include "adsim/vec.hpp"
#include "adsim/workspace.hpp"

namespace adsim::events {

// Every sampler here takes the generator by reference and owns no hidden
// state, so identical seeds reproduce identical event streams bit-for-bit.

class SpatialDistribution {
  public:
    enum class Kind { Uniform, GaussianMixture, Ring };

    struct MixtureComponent {
        double weight;
        Vec mean;
        double sigma;
    };

    static SpatialDistribution uniform(Workspace ws);
    static SpatialDistribution gaussian_mixture(Workspace ws, std::vector<MixtureComponent> components);
    static SpatialDistribution ring(Workspace ws, const Vec& center, double radius);

    Vec sample(Rng& rng) const;
    Kind kind() const { return kind_; }
    const Workspace& workspace() const { return ws_; }
    const std::vector<MixtureComponent>& components() const { return components_; }
    const Vec& ring_center() const { return ring_center_; }
    double ring_radius() const { return ring_radius_; }

  private:
    explicit SpatialDistribution(Workspace ws) : ws_(std::move(ws)) {}

    Kind kind_ = Kind::Uniform;
    Workspace ws_;
    std::vector<MixtureComponent> components_;
    Vec ring_center_;
    double ring_radius_ = 0.0;
};

// Single target on a circle of radius R: theta' = decay * theta + xi with xi
// uniform on [-noise_half_width, noise_half_width].
struct MarkovTarget {
    double radius = 1.0;
    double decay = 0.95;
    double noise_half_width = 0.5;
    double theta = 0.0;
    Vec center = Vec(0.0, 0.0);
};

MarkovTarget markov_advance(const MarkovTarget& t, double xi);
Vec markov_point(const MarkovTarget& t);
std::pair<MarkovTarget, Vec> markov_step(const MarkovTarget& t, Rng& rng);

struct ServiceLaw {
    enum class Kind { Deterministic, Exponential };
    Kind kind = Kind::Deterministic;
    double mean = 0.1;

    double second_moment() const {
        return kind == Kind::Deterministic ? mean * mean : 2.0 * mean * mean;
    }
    double sample(Rng& rng) const {
        return kind == Kind::Deterministic ? mean : rng.exponential(mean);
    }
};

// Space-time Poisson process: exponential inter-arrival gaps, iid locations,
// iid service requirements.
class PoissonStream {
  public:
    PoissonStream(double rate, SpatialDistribution spatial, ServiceLaw service);

    struct Arrival {
        double time;
        Vec location;
        double service_time;
    };

    Arrival next(Rng& rng);
    double rate() const { return rate_; }
    const ServiceLaw& service() const { return service_; }
    const SpatialDistribution& spatial() const { return spatial_; }

  private:
    double rate_;
    SpatialDistribution spatial_;
    ServiceLaw service_;
    double last_time_ = 0.0;
};

enum class EventType { A, B, AB };

class TypedEventLaw {
  public:
    TypedEventLaw(std::array<double, 3> probs, SpatialDistribution dist_a, SpatialDistribution dist_b,
                  SpatialDistribution dist_ab);

    std::pair<EventType, Vec> sample(Rng& rng) const;
    const std::array<double, 3>& probs() const { return probs_; }

  private:
    std::array<double, 3> probs_;  // (lambda_a, lambda_b, lambda_ab)
    std::vector<SpatialDistribution> dists_;
};

}  // namespace adsim::events
