#include <cmath>
#include <map>
#include <sstream>

#include "doctest.h"
#include "uavnet/geometry.hpp"
#include "uavnet/rng.hpp"

using namespace uavnet;

TEST_SUITE("geometry") {

TEST_CASE("transmission range formula") {
    // ln e = 1: r = (1/e)^(1/3)
    CHECK(transmission_range(std::exp(1.0), 1.0) ==
          doctest::Approx(std::cbrt(1.0 / std::exp(1.0))).epsilon(1e-12));
    CHECK(transmission_range(std::exp(1.0), 1.0) == doctest::Approx(0.7165).epsilon(1e-3));
    CHECK(transmission_range(100, 1.0) == doctest::Approx(0.3583).epsilon(1e-3));
    CHECK(transmission_range(1e4, 1.0) == doctest::Approx(0.0972).epsilon(1e-3));
    CHECK_THROWS_AS(transmission_range(1, 1.0), std::invalid_argument);

    // strictly decreasing for n >= 3
    double prev = transmission_range(3, 1.0);
    for (double n : {4.0, 8.0, 20.0, 100.0, 1e4, 1e6}) {
        double r = transmission_range(n, 1.0);
        CHECK(r < prev);
        prev = r;
    }
}

TEST_CASE("transmission range is a pure function") {
    double a = transmission_range(1234, 0.7);
    double b = transmission_range(1234, 0.7);
    CHECK(a == b);
}

TEST_CASE("cube grid construction") {
    CubeGrid g = build_cube_grid(100, 0.4, 1.0);
    CHECK(g.side == doctest::Approx(0.1433).epsilon(1e-3));
    CHECK(g.K == 7);
    CHECK_FALSE(g.degenerate);

    CubeGrid g2 = build_cube_grid(1e4, 0.4, 1.0);
    CHECK(g2.side == doctest::Approx(0.0389).epsilon(1e-2));
    CHECK(g2.K == 26);

    // s = 0.5 exactly
    CubeGrid g3;
    g3.side = 0.5;
    g3.K = static_cast<int>(std::ceil(1.0 / 0.5));
    CHECK(g3.K == 2);

    // degenerate grid collapses to one cube with the warning flag set
    CubeGrid g4 = build_cube_grid(2.1, 0.99, 3.0);
    CHECK(g4.K == 1);
    CHECK(g4.degenerate);
}

TEST_CASE("cube index with boundary fold") {
    CubeGrid g{0.1433, 7, false};
    CHECK(cube_index({0, 0, 0}, g) == CubeIndex{0, 0, 0});
    CHECK(cube_index({1, 1, 1}, g) == CubeIndex{6, 6, 6});
    CHECK(cube_index({0.5, 0.1, 0.9}, g) == CubeIndex{3, 0, 6});
    CHECK_THROWS_AS(cube_index({1.2, 0, 0}, g), std::domain_error);
    CHECK_THROWS_AS(cube_index({-0.1, 0, 0}, g), std::domain_error);
}

TEST_CASE("cube L1 distance") {
    CHECK(cube_l1_distance({0, 0, 0}, {0, 0, 0}) == 0);
    CHECK(cube_l1_distance({0, 0, 0}, {1, 1, 0}) == 2);
    CHECK(cube_l1_distance({2, 5, 1}, {0, 0, 3}) == 9);
    CHECK(cube_l1_distance({2, 5, 1}, {0, 0, 3}) == cube_l1_distance({0, 0, 3}, {2, 5, 1}));
}

TEST_CASE("node placement: determinism and uniformity") {
    auto r1 = make_rng(42);
    auto r2 = make_rng(42);
    auto a = place_nodes(2, r1);
    auto b = place_nodes(2, r2);
    CHECK(a[0].x == b[0].x);
    CHECK(a[1].z == b[1].z);

    auto rng = make_rng(7);
    auto pts = place_nodes(10000, rng);
    double mx = 0, my = 0, mz = 0;
    int octant[8] = {0};
    for (const auto& p : pts) {
        mx += p.x;
        my += p.y;
        mz += p.z;
        octant[(p.x > 0.5) * 4 + (p.y > 0.5) * 2 + (p.z > 0.5)]++;
    }
    CHECK(mx / 10000 == doctest::Approx(0.5).epsilon(0.02));
    CHECK(my / 10000 == doctest::Approx(0.5).epsilon(0.02));
    CHECK(mz / 10000 == doctest::Approx(0.5).epsilon(0.02));
    // binomial: 1250 +/- 4 sigma, sigma = sqrt(1e4 * 1/8 * 7/8) = 33.07
    for (int o = 0; o < 8; ++o) CHECK(std::abs(octant[o] - 1250) < 4 * 33.07 + 1);
}

TEST_CASE("base station lattice") {
    // r = 0.5 exactly: solve c_r so that r(n=100) = 0.5
    double cr = 0.5 / transmission_range(100, 1.0);
    BaseStationGrid bs = place_base_stations(100, cr);
    CHECK(bs.m == 4);
    CHECK(bs.centers[0][0] == doctest::Approx(0.25));
    CHECK(bs.centers[0][1] == doctest::Approx(0.25));

    CHECK(place_base_stations(100, 1.0).m == 9);
    CHECK(place_base_stations(1e4, 1.0).m == 100);
}

TEST_CASE("BS association: nearest with low-index ties") {
    double cr = 0.5 / transmission_range(100, 1.0);
    BaseStationGrid bs = place_base_stations(100, cr);  // 2x2
    CHECK(associate_bs({0.25, 0.25, 0.9}, bs) == 0);
    CHECK(associate_bs({0.5, 0.5, 0.3}, bs) == 0);  // four-way tie -> lowest index

    BaseStationGrid bs9 = place_base_stations(100, 1.0);  // 3x3
    int idx = associate_bs({0.9, 0.1, 0.3}, bs9);
    CHECK(bs9.centers[idx][0] == doctest::Approx(0.8333).epsilon(1e-3));
    CHECK(bs9.centers[idx][1] == doctest::Approx(0.1667).epsilon(1e-3));
}

TEST_CASE("BS association partitions the square into equal lattice cells") {
    BaseStationGrid bs = place_base_stations(100, 1.0);  // 3x3
    auto rng = make_rng(3);
    std::map<int, int> counts;
    const int trials = 90000;
    for (int t = 0; t < trials; ++t) {
        Point3 p{uniform01(rng), uniform01(rng), uniform01(rng)};
        int idx = associate_bs(p, bs);
        // nearest lattice center is the enclosing grid cell
        int ci = std::min(static_cast<int>(p.x * bs.side), bs.side - 1);
        int cj = std::min(static_cast<int>(p.y * bs.side), bs.side - 1);
        CHECK(idx == cj * bs.side + ci);
        counts[idx]++;
    }
    for (const auto& [idx, c] : counts)
        CHECK(std::abs(c - trials / 9) < 5 * std::sqrt(trials / 9.0));
}

TEST_CASE("cube occupancy is measure-preserving") {
    // exact-fit grid: K*s = 1, so every cube has the same true mass and the
    // +/-5% band sits at ~4.5 sigma of the per-cube count
    CubeGrid g{0.2, 5, false};
    auto rng = make_rng(11);
    std::vector<int> counts(g.K * g.K * g.K, 0);
    const int samples = 1000000;
    for (int t = 0; t < samples; ++t) {
        Point3 p{uniform01(rng), uniform01(rng), uniform01(rng)};
        CubeIndex c = cube_index(p, g);
        counts[(c.i * g.K + c.j) * g.K + c.k]++;
    }
    const double expected = static_cast<double>(samples) / (g.K * g.K * g.K);
    for (int idx = 0; idx < static_cast<int>(counts.size()); ++idx)
        CHECK(std::abs(counts[idx] - expected) < 0.05 * expected);
}

TEST_CASE("BS density tracks the cube grid") {
    // m s^2 stays within the c1^2 (1 +/- 2/sqrt(m))^2 band
    for (double n : {100.0, 500.0, 2000.0, 1e4}) {
        double c1 = 0.4;
        CubeGrid g = build_cube_grid(n, c1, 1.0);
        BaseStationGrid bs = place_base_stations(n, 1.0);
        double ms2 = bs.m * g.side * g.side;
        double lo = c1 * c1 * std::pow(1.0 - 2.0 / std::sqrt(bs.m), 2);
        double hi = c1 * c1 * std::pow(1.0 + 2.0 / std::sqrt(bs.m), 2);
        CHECK(ms2 >= lo);
        CHECK(ms2 <= hi);
    }
}

TEST_CASE("config round trip and validation") {
    NetworkConfig cfg;
    cfg.n = 321;
    cfg.alpha = 1.5;
    cfg.q0 = 12;
    cfg.seed = 99;
    std::stringstream ss;
    save_config(ss, cfg);
    NetworkConfig back = parse_config(ss);
    CHECK(back.n == 321);
    CHECK(back.alpha == doctest::Approx(1.5));
    CHECK(back.q0 == doctest::Approx(12));
    CHECK(back.seed == 99);

    NetworkConfig bad;
    bad.n = 1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = NetworkConfig{};
    bad.delta = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = NetworkConfig{};
    bad.c1 = 1.5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    std::stringstream junk("nonsense = 3\n");
    CHECK_THROWS_AS(parse_config(junk), std::invalid_argument);
}

}  // TEST_SUITE
