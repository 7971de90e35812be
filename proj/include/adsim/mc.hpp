#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "adsim/rng.hpp"

namespace adsim::mc {

// Scalar Monte Carlo estimate with its standard error.
struct Estimate {
    double value = 0.0;
    double se = 0.0;
};

// Sample budgets are split into fixed-size chunks, each with its own
// substream derived from (seed, chunk index). Partials are combined in chunk
// order, so the result is identical for any thread count, including the
// OpenMP-disabled build.
inline constexpr long kChunkSize = 1 << 14;

// Partial must be default-constructible; fill(partial, rng, count) accumulates
// `count` samples; merge(total, partial) folds partials in chunk order.
template <class Partial, class Fill, class Merge>
Partial run_chunked(long samples, std::uint64_t seed, Fill fill, Merge merge) {
    const long num_chunks = (samples + kChunkSize - 1) / kChunkSize;
    std::vector<Partial> partials(static_cast<std::size_t>(num_chunks));
#pragma omp parallel for schedule(static)
    for (long chunk = 0; chunk < num_chunks; ++chunk) {
        Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(chunk));
        const long count = std::min(kChunkSize, samples - chunk * kChunkSize);
        fill(partials[static_cast<std::size_t>(chunk)], rng, count);
    }
    Partial total;
    for (const Partial& p : partials) merge(total, p);
    return total;
}

// Mean / standard-error accumulator for one scalar statistic.
struct MomentSum {
    double sum = 0.0;
    double sum_sq = 0.0;
    long count = 0;

    void add(double x) {
        sum += x;
        sum_sq += x * x;
        ++count;
    }
    void merge(const MomentSum& o) {
        sum += o.sum;
        sum_sq += o.sum_sq;
        count += o.count;
    }
    Estimate estimate() const {
        if (count == 0) return {};
        const double mean = sum / static_cast<double>(count);
        double var = sum_sq / static_cast<double>(count) - mean * mean;
        if (var < 0.0) var = 0.0;
        return {mean, std::sqrt(var / static_cast<double>(count))};
    }
};

}  // namespace adsim::mc
