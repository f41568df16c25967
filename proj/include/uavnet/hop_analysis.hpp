#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "uavnet/config.hpp"
#include "uavnet/geometry.hpp"
#include "uavnet/parallel.hpp"

namespace uavnet {

/// Number of grid cubes at L1 distance x from a source cube on an unbounded
/// grid: 4x^2 + 2. Throws std::domain_error for x < 1.
long long shell_cube_count(int x);

/// In-bounds variant on a K^3 grid.
long long shell_cube_count_truncated(const CubeIndex& src, int x, int K);

/// Hop-count pmf over {0, 1, .., 3(K-1)}.
struct HopDistribution {
    std::vector<double> pmf;

    int x_max() const { return static_cast<int>(pmf.size()) - 1; }
    double total() const;
    double mean() const;
};

/// Probability split by source class (leader/normal) and transmission mode.
struct FlowClassProbs {
    double pr1a = 0, pr1c = 0, pr2a = 0, pr2c = 0;

    double pra() const { return pr1a + pr2a; }
    double prc() const { return pr1c + pr2c; }
    double total() const { return pr1a + pr1c + pr2a + pr2c; }
};

/// Truncated hop moments E'[X] = sum_{x<=L} x P(X=x), split by source class,
/// and the per-cube flow load E[F] = n E'[X] s^3.
struct HopMoments {
    double e1_prime = 0;
    double e2_prime = 0;
    double e_prime = 0;
    double ef = 0;
};

struct AnalysisOptions {
    Exec exec = Exec::OpenMP;
    /// Exact mode refuses instances above this many nodes.
    int exact_cap = 500;
    /// Sources to average over; empty means all. Exact mode cost is linear in
    /// the source count, so large instances can pass a deterministic subset.
    std::vector<int> sources;
    /// Count same-cube destinations (x = 0) as ad hoc flows. When false the
    /// joint law is conditioned on x >= 1.
    bool include_x0 = true;
    /// Exact mode: compute degrees only up to this value and condition the
    /// law on Q <= q_cap (0 = full support). Large instances with a light
    /// degree tail use this to bound the O(n^2 q_cap) cost.
    int q_cap = 0;
};

/// Exact and Monte-Carlo analyses share one result bundle since they are
/// computed from the same joint law over (degree, destination).
struct HopAnalysis {
    HopDistribution hop;
    FlowClassProbs cls;
    HopMoments moments;
    double q0 = 0;
    std::uint64_t samples = 0;  ///< 0 for exact mode
};

/// Full-law computation: for each admissible degree q the exact destination
/// marginal P(D = o_k | Q = q) is evaluated (the group stage is marginalized
/// analytically), then mass is binned by cube distance and leader split.
/// O(n^2 q) work per source; refuses n > opts.exact_cap.
HopAnalysis analyze_exact(std::span<const Point3> positions, const NetworkConfig& cfg,
                          const AnalysisOptions& opts = {});

/// Empirical law from sampled (degree, group, destination) triples.
/// Samples are assigned to sources round-robin with per-source RNG streams,
/// so results are independent of thread count.
HopAnalysis analyze_mc(std::span<const Point3> positions, const NetworkConfig& cfg,
                       std::uint64_t samples, std::uint64_t seed,
                       const AnalysisOptions& opts = {});

enum class AnalysisMode { Exact, MonteCarlo };

HopDistribution hop_distribution_exact(std::span<const Point3> positions,
                                       const NetworkConfig& cfg,
                                       const AnalysisOptions& opts = {});
HopDistribution hop_distribution_mc(std::span<const Point3> positions,
                                    const NetworkConfig& cfg, std::uint64_t samples,
                                    std::uint64_t seed, const AnalysisOptions& opts = {});
FlowClassProbs flow_class_probs(std::span<const Point3> positions, const NetworkConfig& cfg,
                                AnalysisMode mode, std::uint64_t samples = 100000,
                                std::uint64_t seed = 1, const AnalysisOptions& opts = {});
HopMoments truncated_hop_moments(std::span<const Point3> positions, const NetworkConfig& cfg,
                                 AnalysisMode mode, std::uint64_t samples = 100000,
                                 std::uint64_t seed = 1, const AnalysisOptions& opts = {});

/// CSV rows keyed by (n, alpha, beta, gamma, L, seed).
void write_hop_csv(std::ostream& out, const NetworkConfig& cfg, std::uint64_t seed,
                   const HopDistribution& hop, bool header);
void write_class_csv(std::ostream& out, const NetworkConfig& cfg, std::uint64_t seed,
                     const FlowClassProbs& cls, bool header);

}  // namespace uavnet
