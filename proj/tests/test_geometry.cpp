#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "adsim/geometry.hpp"
#include "adsim/rng.hpp"

using namespace adsim;

namespace {

const Workspace kSquare = Workspace::unit_square();

Vec random_point(Rng& rng, double lo, double hi, int dim) {
    Vec v = Vec::zero(dim);
    for (int i = 0; i < dim; ++i) v[i] = rng.uniform(lo, hi);
    return v;
}

}  // namespace

TEST_CASE("projection onto boxes") {
    CHECK(kSquare.project(Vec(0.3, 0.4)) == Vec(0.3, 0.4));
    CHECK(kSquare.project(Vec(1.5, 0.5)) == Vec(1.0, 0.5));
    CHECK(kSquare.project(Vec(-1.0, -1.0)) == Vec(0.0, 0.0));
}

TEST_CASE("projection is idempotent and 1-Lipschitz") {
    const Workspace poly = Workspace::polygon({Vec(0, 0), Vec(1, 0), Vec(1.3, 0.9), Vec(0.4, 1.4)});
    const Workspace line = Workspace::interval(-2.0, 3.0);
    Rng rng(123);
    for (int trial = 0; trial < 2000; ++trial) {
        const Vec a2 = random_point(rng, -3, 4, 2);
        const Vec b2 = random_point(rng, -3, 4, 2);
        for (const Workspace* ws : {&kSquare, &poly}) {
            const Vec pa = ws->project(a2);
            const Vec pb = ws->project(b2);
            CHECK(ws->contains(pa));
            CHECK(ws->project(pa) == pa);
            CHECK(dist(pa, pb) <= dist(a2, b2) + 1e-12);
        }
        const Vec a1 = random_point(rng, -5, 6, 1);
        const Vec pa1 = line.project(a1);
        CHECK(line.contains(pa1));
        CHECK(line.project(pa1) == pa1);
    }
}

TEST_CASE("saturation clamps the norm and preserves direction") {
    CHECK(geom::saturate(Vec(3, 4), 10.0) == Vec(3, 4));
    const Vec clipped = geom::saturate(Vec(3, 4), 1.0);
    CHECK(clipped[0] == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(clipped[1] == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(geom::saturate(Vec(0, 0), 1.0) == Vec(0, 0));

    Rng rng(7);
    for (int trial = 0; trial < 2000; ++trial) {
        const Vec u = random_point(rng, -4, 4, 2);
        const double b = rng.uniform(0.01, 3.0);
        const Vec s = geom::saturate(u, b);
        CHECK(s.norm() <= b * (1 + 1e-12));
        if (u.norm() <= b) CHECK(s == u);
    }
}

TEST_CASE("nearest generator, lowest-index ties") {
    const std::vector<Vec> pts1{Vec(0.25), Vec(0.75)};
    CHECK(geom::nearest_index(Vec(0.3), pts1) == 0);
    CHECK(geom::nearest_index(Vec(0.5), pts1) == 0);  // exact tie
    const std::vector<Vec> single{Vec(0.0, 0.0)};
    CHECK(geom::nearest_index(Vec(0.0, 0.0), single) == 0);
    CHECK_THROWS_AS(geom::nearest_index(Vec(0.0), {}), std::invalid_argument);
}

TEST_CASE("generalized cell ownership") {
    geom::GeneralizedDiagram d{{Vec(0.25), Vec(0.75)}, {0.0, 0.0}, CostSpec::quadratic()};
    CHECK(geom::cell_owner(Vec(0.29), d) == 0);
    d.weights = {0.0, 0.2};
    CHECK(geom::cell_owner(Vec(0.29), d) == 0);  // 0.0016 < 0.0116
    CHECK(geom::cell_owner(Vec(0.3), d) == 0);   // both scores 0.0025, tie to low index
    CHECK(geom::cell_owner(Vec(0.31), d) == 1);
}

TEST_CASE("zero weights reduce ownership to nearest index") {
    Rng rng(99);
    for (const CostSpec& cost : {CostSpec::quadratic(), CostSpec::linear(2.0)}) {
        std::vector<Vec> gens;
        for (int i = 0; i < 5; ++i) gens.push_back(random_point(rng, 0, 1, 2));
        const geom::GeneralizedDiagram d{gens, std::vector<double>(5, 0.0), cost};
        for (int trial = 0; trial < 3000; ++trial) {
            const Vec z = random_point(rng, 0, 1, 2);
            CHECK(geom::cell_owner(z, d) == geom::nearest_index(z, gens));
        }
    }
}

TEST_CASE("cell measures: single cell owns everything") {
    const geom::GeneralizedDiagram d{{Vec(0.4, 0.4)}, {0.0}, CostSpec::quadratic()};
    const auto law = events::SpatialDistribution::uniform(kSquare);
    const auto m = geom::estimate_cell_measures(d, law, 1000, 5);
    REQUIRE(m.size() == 1);
    CHECK(m[0] == 1.0);
}

TEST_CASE("cell measures match analytic bisectors in 1-D") {
    const Workspace line = Workspace::interval(0, 1);
    const auto law = events::SpatialDistribution::uniform(line);
    geom::GeneralizedDiagram d{{Vec(0.25), Vec(0.75)}, {0.0, 0.0}, CostSpec::quadratic()};
    auto m = geom::estimate_cell_measures(d, law, 1000000, 11);
    CHECK(std::abs(m[0] - 0.5) < 0.002);

    // power bisector: (b-0.25)^2 = (b-0.75)^2 - 0.2  =>  b = 0.3
    d.weights = {0.0, 0.2};
    m = geom::estimate_cell_measures(d, law, 1000000, 11);
    CHECK(std::abs(m[0] - 0.3) < 0.002);
    CHECK(std::abs(m[1] - 0.7) < 0.002);
}

TEST_CASE("cell measures sum to exactly one and are reproducible") {
    Rng rng(2024);
    const auto law = events::SpatialDistribution::uniform(kSquare);
    for (int n : {2, 3, 7, 10}) {
        std::vector<Vec> gens;
        std::vector<double> weights;
        for (int i = 0; i < n; ++i) {
            gens.push_back(random_point(rng, 0, 1, 2));
            weights.push_back(rng.uniform(-0.1, 0.1));
        }
        const geom::GeneralizedDiagram d{gens, weights, CostSpec::quadratic()};
        const auto a = geom::estimate_cell_measures(d, law, 30000, 77);
        const auto b = geom::estimate_cell_measures(d, law, 30000, 77);
        CHECK(a == b);
        double total = 0.0;
        for (double f : a) {
            CHECK(f >= 0.0);
            total += f;
        }
        CHECK(total == 1.0);
        // reversed accumulation order agrees bit for bit as well
        double reversed = 0.0;
        for (auto it = a.rbegin(); it != a.rend(); ++it) reversed += *it;
        CHECK(reversed == 1.0);
    }
}

TEST_CASE("serial reference agrees with the chunked kernel") {
    const Workspace line = Workspace::interval(0, 1);
    const auto law = events::SpatialDistribution::uniform(line);
    const geom::GeneralizedDiagram d{{Vec(0.25), Vec(0.75)}, {0.0, 0.2}, CostSpec::quadratic()};
    const long samples = 400000;
    const auto chunked = geom::estimate_cell_measures(d, law, samples, 3);
    const auto serial = geom::serial::estimate_cell_measures(d, law, samples, 3);
    const double se = std::sqrt(0.3 * 0.7 / samples);
    CHECK(std::abs(chunked[0] - serial[0]) < 6 * se);
#ifdef _OPENMP
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const auto one_thread = geom::estimate_cell_measures(d, law, samples, 3);
    omp_set_num_threads(4);
    const auto four_threads = geom::estimate_cell_measures(d, law, samples, 3);
    omp_set_num_threads(saved);
    CHECK(one_thread == chunked);
    CHECK(four_threads == chunked);
#endif
}

TEST_CASE("empirical 1-D boundary approaches the power bisector") {
    const Workspace line = Workspace::interval(0, 1);
    const auto law = events::SpatialDistribution::uniform(line);
    const geom::GeneralizedDiagram d{{Vec(0.25), Vec(0.75)}, {0.0, 0.2}, CostSpec::quadratic()};
    double previous_error = 1.0;
    for (long samples : {1000L, 100000L}) {
        Rng rng(404);
        double left_max = 0.0;
        for (long s = 0; s < samples; ++s) {
            const Vec z = law.sample(rng);
            if (geom::cell_owner(z, d) == 0) left_max = std::max(left_max, z[0]);
        }
        const double error = std::abs(left_max - 0.3);
        CHECK(error < previous_error);
        previous_error = error;
    }
    CHECK(previous_error < 1e-3);
}

TEST_CASE("ownership raster") {
    SUBCASE("single cell owns every pixel") {
        const geom::GeneralizedDiagram d{{Vec(0.5, 0.5)}, {0.0}, CostSpec::quadratic()};
        const auto raster = geom::render_ownership_raster(d, kSquare, 16, 16);
        for (int v : raster.owner) CHECK(v == 0);
    }

    SUBCASE("equal weights split along the perpendicular bisector") {
        const geom::GeneralizedDiagram d{{Vec(0.25, 0.5), Vec(0.75, 0.5)}, {0.0, 0.0},
                                         CostSpec::quadratic()};
        const auto raster = geom::render_ownership_raster(d, kSquare, 64, 64);
        for (int iy = 0; iy < 64; ++iy)
            for (int ix = 0; ix < 64; ++ix) {
                const double x = (ix + 0.5) / 64.0;
                if (x < 0.5 - 1.0 / 64) CHECK(raster.at(ix, iy) == 0);
                if (x > 0.5 + 1.0 / 64) CHECK(raster.at(ix, iy) == 1);
            }
    }

    SUBCASE("a dominated cell can be empty") {
        const geom::GeneralizedDiagram d{{Vec(0.5, 0.5), Vec(0.52, 0.5)}, {2.0, 0.0},
                                         CostSpec::quadratic()};
        const auto raster = geom::render_ownership_raster(d, kSquare, 48, 48);
        for (int v : raster.owner) CHECK(v == 0);
    }

    SUBCASE("pixels outside a polygon are marked") {
        const Workspace tri = Workspace::polygon({Vec(0, 0), Vec(1, 0), Vec(0.5, 1)});
        const geom::GeneralizedDiagram d{{Vec(0.5, 0.3)}, {0.0}, CostSpec::quadratic()};
        const auto raster = geom::render_ownership_raster(d, tri, 32, 32);
        int outside = 0;
        for (int v : raster.owner) outside += v < 0;
        CHECK(outside > 100);  // roughly half the bounding box
        CHECK(raster.at(16, 8) == 0);
    }

    SUBCASE("1-D workspaces are rejected") {
        const geom::GeneralizedDiagram d{{Vec(0.5)}, {0.0}, CostSpec::quadratic()};
        CHECK_THROWS_AS(geom::render_ownership_raster(d, Workspace::interval(0, 1), 8, 8),
                        std::domain_error);
    }

    SUBCASE("text format has the one-line header") {
        const geom::GeneralizedDiagram d{{Vec(0.25, 0.5), Vec(0.75, 0.5)}, {0.0, 0.0},
                                         CostSpec::quadratic()};
        const auto raster = geom::render_ownership_raster(d, kSquare, 4, 2);
        std::ostringstream os;
        geom::write_raster(raster, os);
        const std::string text = os.str();
        CHECK(text.substr(0, 6) == "4 2 2\n");
        CHECK(std::count(text.begin(), text.end(), '\n') == 3);
    }
}

TEST_CASE("diagram validation") {
    geom::GeneralizedDiagram d{{Vec(0.2, 0.2), Vec(0.2, 0.2)}, {0.0, 0.0}, CostSpec::quadratic()};
    CHECK_THROWS_AS(d.validate(), std::invalid_argument);
    d.generators[1] = Vec(0.4, 0.4);
    CHECK_NOTHROW(d.validate());
    d.weights.pop_back();
    CHECK_THROWS_AS(d.validate(), std::invalid_argument);
}

TEST_CASE("workspace construction rejects degenerate regions") {
    CHECK_THROWS_AS(Workspace::interval(1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Workspace::box(Vec(0, 0), Vec(1, 0)), std::invalid_argument);
    // clockwise ordering
    CHECK_THROWS_AS(Workspace::polygon({Vec(0, 0), Vec(0.5, 1), Vec(1, 0)}), std::invalid_argument);
    // collinear vertex
    CHECK_THROWS_AS(Workspace::polygon({Vec(0, 0), Vec(0.5, 0), Vec(1, 0), Vec(0.5, 1)}),
                    std::invalid_argument);
}
