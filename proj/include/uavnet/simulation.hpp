#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "uavnet/config.hpp"
#include "uavnet/geometry.hpp"
#include "uavnet/parallel.hpp"
#include "uavnet/topology.hpp"

namespace uavnet {

enum class FlowMode { AdHoc, Cellular };

struct Flow {
    int src = -1;
    int dst = -1;
    int hops = 0;  ///< L1 cube distance, used for mode classification
    FlowMode mode = FlowMode::AdHoc;
    NodeClass src_class = NodeClass::Normal;
    std::vector<CubeIndex> path;  ///< routed cubes, ad hoc flows only
};

/// Per-cube transit counts for ad hoc flows and per-BS endpoint counts for
/// cellular flows.
struct LoadMap {
    int K = 1;
    std::vector<std::int32_t> cube_transits;  // K^3, x-major
    std::vector<std::int32_t> bs_uplink;
    std::vector<std::int32_t> bs_downlink;

    std::int64_t total_transits() const;
    std::int32_t max_transit() const;
};

/// Smallest admissible TDMA cluster edge: M = ceil((2 + delta)/c1).
int mac_cluster_parameter(double delta, double c1);

/// Raw per-node ad hoc throughput per the TDMA schedule: W_a/(max(ef,1) M^3).
double per_node_adhoc_throughput(double ef, int M, double W_a);
/// Order-normalized form with the M^3 constant dropped: W_a/max(ef,1).
double per_node_adhoc_throughput_normalized(double ef, double W_a);

/// Cellular network throughput, demand-capped: min(m, n_c) * W_c.
double cellular_throughput(int m, double W_c, int n_c);

/// Immutable per-round world shared by flow generation and load accounting.
struct Topology {
    std::vector<Point3> positions;
    CubeGrid grid;
    BaseStationGrid bs;
    double q0 = 0;
};

Topology build_topology(const NetworkConfig& cfg, std::mt19937_64& rng);

/// One flow per source: degree, contact group, destination, then mode by
/// hops <= L. Same-cube destinations (hops = 0) are always ad hoc.
std::vector<Flow> generate_flows(const Topology& topo, const NetworkConfig& cfg,
                                 std::mt19937_64& rng);

/// Routes ad hoc flows (filling their paths) and accumulates the load map.
LoadMap accumulate_load(std::vector<Flow>& flows, const Topology& topo);

struct RoundResult {
    int n_a = 0;
    int n_c = 0;
    double ef_avg = 0;             ///< mean ad hoc transits per cube
    double f_max = 0;              ///< bottleneck cube transit count
    double hops_adhoc_mean = 0;    ///< mean hops over ad hoc flows
    double hops_all_mean = 0;      ///< mean hops over all flows
    double lambda_a_n = 0;         ///< raw per-node ad hoc throughput (Wa/(ef M^3))
    double lambda_a = 0;           ///< n_a * Wa / max(ef_avg, 1)
    double lambda_a_bottleneck = 0;///< n_a * Wa / max(f_max, 1)
    double lambda_c = 0;
    double lambda_total = 0;       ///< lambda_a + lambda_c
};

struct SimResult {
    NetworkConfig config;
    int M = 1;
    int m = 1;
    double q0 = 0;
    std::vector<RoundResult> rounds;

    // Means over rounds, folded in round order.
    double n_a = 0, n_c = 0;
    double ef_avg = 0, f_max = 0;
    double hops_adhoc_mean = 0, hops_all_mean = 0;
    double lambda_a_n = 0, lambda_a = 0, lambda_a_bottleneck = 0;
    double lambda_c = 0, lambda_total = 0;
    // Standard errors of the per-round means.
    double sem_lambda_total = 0, sem_hops_adhoc = 0, sem_ef = 0;
};

/// Runs cfg.rounds independent rounds under the (seed, round) stream schedule
/// and aggregates. Rounds execute in parallel under Exec::OpenMP with the
/// merge done in round order, so results match Exec::Serial bit for bit.
SimResult simulate(const NetworkConfig& cfg, Exec exec = Exec::OpenMP);

/// Pinned CSV schema:
/// n,alpha,beta,gamma,L,Wa,Wc,seed,rounds,na,nc,ef_avg,f_max,lambda_a,lambda_c,lambda_total
extern const char* kSimCsvHeader;
void write_sim_csv_row(std::ostream& out, const SimResult& res);

/// Per-round JSONL records.
void write_sim_jsonl(std::ostream& out, const SimResult& res);

}  // namespace uavnet
