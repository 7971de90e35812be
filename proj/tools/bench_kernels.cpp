// Throughput comparison between the serial reference estimators and the
// chunked OpenMP kernels. Both paths are exercised with the same workload;
// the chunked results are thread-count independent by construction.

#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "adsim/coverage.hpp"
#include "adsim/geometry.hpp"
#include "adsim/partition.hpp"

using namespace adsim;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

template <class Fn>
double time_call(Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    return seconds_since(start);
}

}  // namespace

int main(int argc, char** argv) {
    long samples = 4000000;
    if (argc > 1) samples = std::atol(argv[1]);

    const Workspace ws = Workspace::unit_square();
    const auto law = events::SpatialDistribution::uniform(ws);
    const int n = 16;
    std::vector<Vec> generators = partition::default_generators(n, ws);
    std::vector<double> weights(n, 0.0);
    for (int i = 0; i < n; ++i) weights[i] = 0.01 * i;
    const geom::GeneralizedDiagram diagram{generators, weights, CostSpec::quadratic()};

    partition::PartitionState pstate;
    pstate.generators = generators;
    pstate.weights = weights;
    pstate.rates.assign(n, 1.0 / n);
    pstate.cost = CostSpec::quadratic();
    pstate.schedule = coverage::StepsizeSchedule::harmonic(1.0, 0.01);

#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP disabled (serial chunked kernels)\n");
#endif
    std::printf("samples = %ld, cells = %d\n\n", samples, n);
    std::printf("%-24s %12s %12s %8s\n", "kernel", "serial [s]", "chunked [s]", "speedup");

    {
        const double ts = time_call(
            [&] { (void)geom::serial::estimate_cell_measures(diagram, law, samples, 42); });
        const double tp =
            time_call([&] { (void)geom::estimate_cell_measures(diagram, law, samples, 42); });
        std::printf("%-24s %12.3f %12.3f %8.2f\n", "cell_measures", ts, tp, ts / tp);
    }
    {
        const double ts = time_call([&] {
            (void)coverage::serial::deterministic_gradient(generators, law, CostSpec::quadratic(),
                                                           samples, 42);
        });
        const double tp = time_call([&] {
            (void)coverage::deterministic_gradient(generators, law, CostSpec::quadratic(), samples, 42);
        });
        std::printf("%-24s %12.3f %12.3f %8.2f\n", "coverage_gradient", ts, tp, ts / tp);
    }
    {
        const double ts = time_call([&] {
            (void)coverage::serial::objective_estimate(generators, law, CostSpec::quadratic(), samples,
                                                       42);
        });
        const double tp = time_call([&] {
            (void)coverage::objective_estimate(generators, law, CostSpec::quadratic(), samples, 42);
        });
        std::printf("%-24s %12.3f %12.3f %8.2f\n", "coverage_objective", ts, tp, ts / tp);
    }
    {
        const double ts = time_call([&] { (void)partition::serial::dual_value(pstate, law, samples, 42); });
        const double tp = time_call([&] { (void)partition::dual_value(pstate, law, samples, 42); });
        std::printf("%-24s %12.3f %12.3f %8.2f\n", "partition_dual", ts, tp, ts / tp);
    }
    return 0;
}
