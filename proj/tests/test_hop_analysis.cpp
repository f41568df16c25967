#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "uavnet/hop_analysis.hpp"
#include "uavnet/rng.hpp"
#include "uavnet/sympoly.hpp"
#include "uavnet/topology.hpp"

using namespace uavnet;

namespace {

// Brute-force joint law over (q, destination) by enumerating every group:
// P(D = k, Q = q) = P(q) sum_{G contains k} prod w_i / sigma_q * v_k / sum_{j in G} v_j.
// Oracle for the quadrature-based exact engine; feasible for n - 1 <= 12.
std::vector<std::vector<double>> brute_dest_joint(const std::vector<double>& w,
                                                  const std::vector<double>& v, int n_minus_1,
                                                  const DegreeSampler& deg) {
    const int N = n_minus_1;
    std::vector<std::vector<double>> joint(N + 1, std::vector<double>(N, 0.0));
    for (int q = 1; q <= N; ++q) {
        long double sigma_q = 0;
        std::vector<long double> mass(N, 0.0L);
        for (unsigned mask = 0; mask < (1u << N); ++mask) {
            if (__builtin_popcount(mask) != q) continue;
            long double prod = 1;
            long double vsum = 0;
            for (int i = 0; i < N; ++i)
                if (mask & (1u << i)) {
                    prod *= w[i];
                    vsum += v[i];
                }
            sigma_q += prod;
            for (int i = 0; i < N; ++i)
                if (mask & (1u << i)) mass[i] += prod * v[i] / vsum;
        }
        for (int k = 0; k < N; ++k)
            joint[q][k] = deg.pmf(q) * static_cast<double>(mass[k] / sigma_q);
    }
    return joint;
}

}  // namespace

TEST_SUITE("hop_analysis") {

TEST_CASE("shell cube counts") {
    CHECK(shell_cube_count(1) == 6);
    CHECK(shell_cube_count(2) == 18);
    CHECK(shell_cube_count(5) == 102);
    CHECK_THROWS_AS(shell_cube_count(0), std::domain_error);

    // untruncated shells match the closed form when far from walls
    CubeIndex center{25, 25, 25};
    for (int x = 1; x <= 10; ++x)
        CHECK(shell_cube_count_truncated(center, x, 51) == shell_cube_count(x));

    // at a corner the truncated shell is smaller
    CHECK(shell_cube_count_truncated({0, 0, 0}, 2, 51) < shell_cube_count(2));

    // shells partition the grid: sum over x of |shell(x)| = K^3 - 1
    CubeIndex src{1, 2, 3};
    const int K = 6;
    long long total = 0;
    for (int x = 1; x <= 3 * (K - 1); ++x) total += shell_cube_count_truncated(src, x, K);
    CHECK(total == static_cast<long long>(K) * K * K - 1);
}

TEST_CASE("exact destination law matches subset enumeration") {
    auto rng = make_rng(2025);
    for (int trial = 0; trial < 4; ++trial) {
        const int n = 9 + trial;  // 9..12 nodes
        NetworkConfig cfg;
        cfg.n = n;
        cfg.alpha = 0.8 + 0.4 * trial;
        cfg.beta = 0.5 + 0.3 * trial;
        cfg.gamma = 1.6 + 0.3 * trial;
        cfg.L = 2;
        auto pos = place_nodes(n, rng);

        // candidate weights exactly as the engine builds them
        CubeGrid grid = build_cube_grid(cfg);
        const double floor = grid.side;
        const int N = n - 1;
        std::vector<double> w(N), v(N);
        for (int i = 1; i <= N; ++i) {
            double dx = pos[i].x - pos[0].x, dy = pos[i].y - pos[0].y, dz = pos[i].z - pos[0].z;
            double d = std::max(std::sqrt(dx * dx + dy * dy + dz * dz), floor);
            w[i - 1] = std::pow(d, -cfg.alpha);
            v[i - 1] = std::pow(d, -cfg.beta);
        }
        DegreeSampler deg(n, cfg.gamma);
        auto joint = brute_dest_joint(w, v, N, deg);

        AnalysisOptions opts;
        opts.sources = {0};
        HopAnalysis exact = analyze_exact(pos, cfg, opts);

        // compare the hop pmf against the brute-force law binned the same way
        std::vector<double> ref_pmf(exact.hop.pmf.size(), 0.0);
        std::vector<CubeIndex> cubes(n);
        for (int i = 0; i < n; ++i) cubes[i] = cube_index(pos[i], grid);
        for (int q = 1; q <= N; ++q)
            for (int k = 0; k < N; ++k)
                ref_pmf[cube_l1_distance(cubes[0], cubes[k + 1])] += joint[q][k];

        for (size_t x = 0; x < ref_pmf.size(); ++x)
            CHECK(exact.hop.pmf[x] == doctest::Approx(ref_pmf[x]).epsilon(1e-6));
    }
}

TEST_CASE("exact mode: totals, n = 2 point mass, cap refusal") {
    NetworkConfig cfg;
    cfg.n = 30;
    cfg.alpha = 1;
    cfg.beta = 0.5;
    cfg.gamma = 2;
    cfg.L = 2;
    auto rng = make_rng(5);
    auto pos = place_nodes(30, rng);
    HopAnalysis a = analyze_exact(pos, cfg);
    CHECK(a.hop.total() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(a.cls.total() == doctest::Approx(1.0).epsilon(1e-9));

    NetworkConfig two = cfg;
    two.n = 2;
    auto pos2 = place_nodes(2, rng);
    HopAnalysis a2 = analyze_exact(pos2, two);
    CubeGrid g = build_cube_grid(two);
    int x = cube_l1_distance(cube_index(pos2[0], g), cube_index(pos2[1], g));
    CHECK(a2.hop.pmf[x] == doctest::Approx(1.0));

    NetworkConfig big = cfg;
    big.n = 600;
    std::vector<Point3> fake(600);
    CHECK_THROWS_AS(analyze_exact(fake, big), std::invalid_argument);
}

TEST_CASE("exact vs Monte-Carlo hop law") {
    NetworkConfig cfg;
    cfg.n = 30;
    cfg.alpha = 1;
    cfg.beta = 0.5;
    cfg.gamma = 2;
    cfg.L = 3;
    auto rng = make_rng(12);
    auto pos = place_nodes(30, rng);

    HopAnalysis exact = analyze_exact(pos, cfg);
    const std::uint64_t S = 600000;
    HopAnalysis mc = analyze_mc(pos, cfg, S, 404);

    for (size_t x = 0; x < exact.hop.pmf.size(); ++x) {
        double p = exact.hop.pmf[x];
        double se = std::sqrt(std::max(p * (1 - p), 1e-12) / S);
        CHECK(std::abs(mc.hop.pmf[x] - p) <= 3.5 * se + 1e-6);
    }
    // class masses agree as well
    double se = 1.0 / std::sqrt(static_cast<double>(S));
    CHECK(std::abs(mc.cls.pr1a - exact.cls.pr1a) <= 4 * se);
    CHECK(std::abs(mc.cls.pr2a - exact.cls.pr2a) <= 4 * se);
    CHECK(std::abs(mc.cls.prc() - exact.cls.prc()) <= 4 * se);
    // truncated moments
    CHECK(mc.moments.e_prime == doctest::Approx(exact.moments.e_prime).epsilon(0.05));
}

TEST_CASE("flow class probabilities: degenerate thresholds") {
    NetworkConfig cfg;
    cfg.n = 40;
    cfg.alpha = 1;
    cfg.beta = 0.5;
    cfg.gamma = 2;
    auto rng = make_rng(8);
    auto pos = place_nodes(40, rng);
    CubeGrid g = build_cube_grid(cfg);

    // L at the grid diameter: everything is ad hoc
    cfg.L = static_cast<double>(max_hops(g));
    HopAnalysis all_adhoc = analyze_exact(pos, cfg);
    CHECK(all_adhoc.cls.pr1c == doctest::Approx(0.0));
    CHECK(all_adhoc.cls.pr2c == doctest::Approx(0.0));
    CHECK(all_adhoc.cls.pra() == doctest::Approx(1.0).epsilon(1e-9));

    // L = 0 with x = 0 flows excluded: no ad hoc mass at all
    cfg.L = 0;
    AnalysisOptions no_x0;
    no_x0.include_x0 = false;
    HopAnalysis none = analyze_exact(pos, cfg, no_x0);
    CHECK(none.cls.pr1a == doctest::Approx(0.0));
    CHECK(none.cls.pr2a == doctest::Approx(0.0));
    CHECK(none.cls.total() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(none.hop.pmf[0] == 0.0);
}

TEST_CASE("truncated moments: edge values and monotonicity") {
    NetworkConfig cfg;
    cfg.n = 50;
    cfg.alpha = 1;
    cfg.beta = 1;
    cfg.gamma = 2;
    auto rng = make_rng(9);
    auto pos = place_nodes(50, rng);

    cfg.L = 0;
    HopAnalysis at0 = analyze_exact(pos, cfg);
    CHECK(at0.moments.e_prime == doctest::Approx(0.0));
    CHECK(at0.moments.ef == doctest::Approx(0.0));

    CubeGrid g = build_cube_grid(cfg);
    double prev = -1;
    for (int L = 0; L <= max_hops(g); L += 3) {
        cfg.L = L;
        HopAnalysis a = analyze_exact(pos, cfg);
        CHECK(a.moments.e_prime >= prev);
        CHECK(a.moments.e_prime ==
              doctest::Approx(a.moments.e1_prime + a.moments.e2_prime).epsilon(1e-12));
        // ef = n e' s^3
        CHECK(a.moments.ef ==
              doctest::Approx(50.0 * a.moments.e_prime * std::pow(g.side, 3)).epsilon(1e-12));
        prev = a.moments.e_prime;
    }

    // constant once L reaches the diameter
    cfg.L = max_hops(g);
    double e_at_max = analyze_exact(pos, cfg).moments.e_prime;
    cfg.L = max_hops(g) + 5;
    CHECK(analyze_exact(pos, cfg).moments.e_prime == doctest::Approx(e_at_max));
}

TEST_CASE("MC analysis is deterministic and thread-count independent") {
    NetworkConfig cfg;
    cfg.n = 120;
    cfg.alpha = 1.5;
    cfg.beta = 0.5;
    cfg.gamma = 2;
    cfg.L = 3;
    auto rng = make_rng(10);
    auto pos = place_nodes(120, rng);

    AnalysisOptions serial;
    serial.exec = Exec::Serial;
    AnalysisOptions parallel;
    parallel.exec = Exec::OpenMP;
    HopAnalysis a = analyze_mc(pos, cfg, 40000, 7, serial);
    HopAnalysis b = analyze_mc(pos, cfg, 40000, 7, parallel);
    CHECK(a.hop.pmf == b.hop.pmf);
    CHECK(a.cls.pr1a == b.cls.pr1a);
    CHECK(a.moments.e_prime == b.moments.e_prime);

    HopAnalysis c = analyze_mc(pos, cfg, 40000, 7, serial);
    CHECK(a.hop.pmf == c.hop.pmf);
}

TEST_CASE("exact analysis parallel equals serial") {
    NetworkConfig cfg;
    cfg.n = 60;
    cfg.alpha = 1;
    cfg.beta = 1;
    cfg.gamma = 2;
    cfg.L = 2;
    auto rng = make_rng(13);
    auto pos = place_nodes(60, rng);
    AnalysisOptions serial;
    serial.exec = Exec::Serial;
    AnalysisOptions parallel;
    parallel.exec = Exec::OpenMP;
    HopAnalysis a = analyze_exact(pos, cfg, serial);
    HopAnalysis b = analyze_exact(pos, cfg, parallel);
    CHECK(a.hop.pmf == b.hop.pmf);
    CHECK(a.cls.pr1a == b.cls.pr1a);
}

TEST_CASE("order tracking: pr1a scales like r^3 L^3 at beta = 0") {
    // finite-n check across a 8x n range; factor-4 band on the ratio
    NetworkConfig cfg;
    cfg.alpha = 1;
    cfg.beta = 0;
    cfg.gamma = 2;
    cfg.L = 2;
    double lo = 1e30, hi = 0;
    for (int n : {500, 1000, 2000, 4000}) {
        cfg.n = n;
        auto rng = make_rng(1000 + n);
        auto pos = place_nodes(n, rng);
        HopAnalysis a = analyze_mc(pos, cfg, 200000, 55);
        double r3 = std::log(n) / n;
        double ratio = a.cls.pr1a / (r3 * 8.0);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    CHECK(hi / lo < 4.0);
}

TEST_CASE("hop csv export shape") {
    NetworkConfig cfg;
    cfg.n = 20;
    cfg.L = 2;
    auto rng = make_rng(3);
    auto pos = place_nodes(20, rng);
    HopAnalysis a = analyze_exact(pos, cfg);
    std::ostringstream hop_csv, cls_csv;
    write_hop_csv(hop_csv, cfg, 3, a.hop, true);
    write_class_csv(cls_csv, cfg, 3, a.cls, true);
    CHECK(hop_csv.str().find("n,alpha,beta,gamma,L,seed,x,p") == 0);
    CHECK(cls_csv.str().find("n,alpha,beta,gamma,L,seed,pr1a,pr1c,pr2a,pr2c") == 0);
}

}  // TEST_SUITE
