#include "adsim/geometry.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "adsim/mc.hpp"

namespace adsim::geom {

Vec saturate(const Vec& u, double bound) {
    if (!(bound > 0.0)) throw std::invalid_argument("geometry: saturation bound must be positive");
    const double n = u.norm();
    if (n <= bound) return u;
    return u * (bound / n);
}

std::size_t nearest_index(const Vec& z, std::span<const Vec> points) {
    if (points.empty()) throw std::invalid_argument("geometry: nearest_index needs a nonempty point list");
    std::size_t best = 0;
    double best_d2 = dist_sq(z, points[0]);
    for (std::size_t i = 1; i < points.size(); ++i) {
        const double d2 = dist_sq(z, points[i]);
        if (d2 < best_d2) {
            best_d2 = d2;
            best = i;
        }
    }
    return best;
}

void GeneralizedDiagram::validate() const {
    if (generators.empty()) throw std::invalid_argument("geometry: diagram needs at least one generator");
    if (weights.size() != generators.size())
        throw std::invalid_argument("geometry: diagram weight count must match generator count");
    for (std::size_t i = 0; i < generators.size(); ++i)
        for (std::size_t j = i + 1; j < generators.size(); ++j)
            if (generators[i] == generators[j])
                throw std::invalid_argument("geometry: diagram generators must be pairwise distinct");
}

std::size_t cell_owner(const Vec& z, const GeneralizedDiagram& d) {
    std::size_t best = 0;
    double best_score = d.cost.value(dist(z, d.generators[0])) - d.weights[0];
    for (std::size_t i = 1; i < d.generators.size(); ++i) {
        const double score = d.cost.value(dist(z, d.generators[i])) - d.weights[i];
        if (score < best_score) {
            best_score = score;
            best = i;
        }
    }
    return best;
}

namespace {

// Integer counts -> frequencies that sum to exactly 1.0 in floating point,
// in any summation order. Entries are snapped down onto the 2^-40 grid
// (where double addition is exact for values in [0,1]) and the last entry
// absorbs the residual, which keeps it >= count_last/samples >= 0. The snap
// moves each entry by less than 1e-12, far below any Monte Carlo noise.
std::vector<double> counts_to_frequencies(const std::vector<long>& counts, long samples) {
    constexpr double kGrid = 0x1.0p-40;
    const std::size_t n = counts.size();
    std::vector<double> freq(n);
    if (n == 1) {
        freq[0] = 1.0;
        return freq;
    }
    double others = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const auto ticks = (static_cast<__int128>(counts[i]) << 40) / samples;
        freq[i] = static_cast<double>(static_cast<std::int64_t>(ticks)) * kGrid;
        others += freq[i];
    }
    freq[n - 1] = 1.0 - others;
    return freq;
}

}  // namespace

std::vector<double> estimate_cell_measures(const GeneralizedDiagram& d,
                                           const events::SpatialDistribution& law, long samples,
                                           std::uint64_t seed) {
    d.validate();
    if (samples < 1) throw std::invalid_argument("geometry: estimate_cell_measures needs samples >= 1");
    const std::size_t n = d.generators.size();
    using Counts = std::vector<long>;
    Counts total = mc::run_chunked<Counts>(
        samples, seed,
        [&](Counts& part, Rng& rng, long count) {
            part.assign(n, 0);
            for (long s = 0; s < count; ++s) part[cell_owner(law.sample(rng), d)]++;
        },
        [&](Counts& acc, const Counts& part) {
            if (acc.empty()) acc.assign(n, 0);
            for (std::size_t i = 0; i < n; ++i) acc[i] += part[i];
        });
    return counts_to_frequencies(total, samples);
}

namespace serial {

std::vector<double> estimate_cell_measures(const GeneralizedDiagram& d,
                                           const events::SpatialDistribution& law, long samples,
                                           std::uint64_t seed) {
    d.validate();
    if (samples < 1) throw std::invalid_argument("geometry: estimate_cell_measures needs samples >= 1");
    std::vector<long> counts(d.generators.size(), 0);
    Rng rng(seed);
    for (long s = 0; s < samples; ++s) counts[cell_owner(law.sample(rng), d)]++;
    return counts_to_frequencies(counts, samples);
}

}  // namespace serial

OwnershipRaster render_ownership_raster(const GeneralizedDiagram& d, const Workspace& ws, int width,
                                        int height) {
    d.validate();
    if (ws.dim() != 2)
        throw std::domain_error("geometry: ownership raster is only defined for 2-D workspaces");
    if (width < 2 || height < 2)
        throw std::invalid_argument("geometry: raster needs resolution >= 2 per axis");
    OwnershipRaster raster;
    raster.width = width;
    raster.height = height;
    raster.cells = static_cast<int>(d.generators.size());
    raster.owner.assign(static_cast<std::size_t>(width) * height, -1);
    const Vec& lo = ws.bounds_lo();
    const Vec& hi = ws.bounds_hi();
    const double dx = (hi[0] - lo[0]) / width;
    const double dy = (hi[1] - lo[1]) / height;
#pragma omp parallel for schedule(static)
    for (int iy = 0; iy < height; ++iy) {
        for (int ix = 0; ix < width; ++ix) {
            const Vec z(lo[0] + (ix + 0.5) * dx, lo[1] + (iy + 0.5) * dy);
            if (!ws.contains(z)) continue;
            raster.owner[static_cast<std::size_t>(iy) * width + ix] =
                static_cast<int>(cell_owner(z, d));
        }
    }
    return raster;
}

void write_raster(const OwnershipRaster& raster, std::ostream& os) {
    os << raster.width << ' ' << raster.height << ' ' << raster.cells << '\n';
    for (int iy = 0; iy < raster.height; ++iy) {
        for (int ix = 0; ix < raster.width; ++ix) {
            if (ix) os << ' ';
            os << raster.at(ix, iy);
        }
        os << '\n';
    }
}

}  // namespace adsim::geom
