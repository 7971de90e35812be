#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "adsim/cost.hpp"
#include "adsim/events.hpp"
#include "adsim/vec.hpp"
#include "adsim/workspace.hpp"

namespace adsim::geom {

// Truncation [sat(u)]_b: u unchanged when ||u|| <= b, else rescaled to norm b.
// sat(0, b) = 0 by the 0/||0|| convention.
Vec saturate(const Vec& u, double bound);

// Smallest index attaining min ||z - p_i||. Ties break to the lowest index so
// the simulator stays deterministic.
std::size_t nearest_index(const Vec& z, std::span<const Vec> points);

// Generalized Voronoi diagram: cell i owns z when f(||z-g_i||) - w_i is
// minimal. Equal weights with quadratic or linear cost reduce to the plain
// nearest-generator rule; cells may be empty.
struct GeneralizedDiagram {
    std::vector<Vec> generators;
    std::vector<double> weights;
    CostSpec cost;

    void validate() const;  // nonempty, pairwise-distinct generators, matching weight count
};

std::size_t cell_owner(const Vec& z, const GeneralizedDiagram& d);

// Empirical cell probabilities over `samples` iid draws. Entries are
// nonnegative and sum to exactly 1.0: the per-cell counts are integers, and
// the smallest count's frequency is defined as one minus the others.
std::vector<double> estimate_cell_measures(const GeneralizedDiagram& d,
                                           const events::SpatialDistribution& law, long samples,
                                           std::uint64_t seed);

namespace serial {
// Single-stream loop kept as the reference implementation for the chunked
// OpenMP kernel above; statistically equivalent, different sample sequence.
std::vector<double> estimate_cell_measures(const GeneralizedDiagram& d,
                                           const events::SpatialDistribution& law, long samples,
                                           std::uint64_t seed);
}  // namespace serial

// Row-major grid of owner indices sampled at pixel centers; -1 marks pixels
// outside Q. Row 0 sits at the low-y edge of the bounding box.
struct OwnershipRaster {
    int width = 0;
    int height = 0;
    int cells = 0;
    std::vector<int> owner;

    int at(int ix, int iy) const { return owner[static_cast<std::size_t>(iy) * width + ix]; }
};

OwnershipRaster render_ownership_raster(const GeneralizedDiagram& d, const Workspace& ws, int width,
                                        int height);

// One-line header "width height n", then one row of owner indices per line.
void write_raster(const OwnershipRaster& raster, std::ostream& os);

}  // namespace adsim::geom
