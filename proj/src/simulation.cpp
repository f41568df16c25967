#include "uavnet/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "uavnet/rng.hpp"
#include "uavnet/sympoly.hpp"
#include "uavnet/voxel_route.hpp"

namespace uavnet {

std::int64_t LoadMap::total_transits() const {
    return std::accumulate(cube_transits.begin(), cube_transits.end(), std::int64_t{0});
}

std::int32_t LoadMap::max_transit() const {
    if (cube_transits.empty()) return 0;
    return *std::max_element(cube_transits.begin(), cube_transits.end());
}

int mac_cluster_parameter(double delta, double c1) {
    if (delta <= 0 || c1 <= 0 || c1 > 1)
        throw std::invalid_argument("mac_cluster_parameter: need delta > 0, 0 < c1 <= 1");
    return static_cast<int>(std::ceil((2.0 + delta) / c1));
}

double per_node_adhoc_throughput(double ef, int M, double W_a) {
    if (ef < 0) throw std::invalid_argument("per_node_adhoc_throughput: ef must be >= 0");
    return W_a / (std::max(ef, 1.0) * static_cast<double>(M) * M * M);
}

double per_node_adhoc_throughput_normalized(double ef, double W_a) {
    if (ef < 0) throw std::invalid_argument("per_node_adhoc_throughput: ef must be >= 0");
    return W_a / std::max(ef, 1.0);
}

double cellular_throughput(int m, double W_c, int n_c) {
    if (m < 1) throw std::invalid_argument("cellular_throughput: m must be >= 1");
    return static_cast<double>(std::min(m, n_c)) * W_c;
}

Topology build_topology(const NetworkConfig& cfg, std::mt19937_64& rng) {
    Topology topo;
    topo.positions = place_nodes(cfg.n, rng);
    topo.grid = build_cube_grid(cfg);
    topo.bs = place_base_stations(static_cast<double>(cfg.n), cfg.c_r);
    topo.q0 = resolve_q0(cfg);
    return topo;
}

std::vector<Flow> generate_flows(const Topology& topo, const NetworkConfig& cfg,
                                 std::mt19937_64& rng) {
    const int n = static_cast<int>(topo.positions.size());
    const double floor = topo.grid.side;
    const double L = std::min(cfg.L, static_cast<double>(max_hops(topo.grid)));
    DegreeSampler degrees(n, cfg.gamma);

    std::vector<CubeIndex> cubes(n);
    for (int i = 0; i < n; ++i) cubes[i] = cube_index(topo.positions[i], topo.grid);

    std::vector<Flow> flows;
    flows.reserve(n);
    std::vector<double> dist(n - 1);
    for (int src = 0; src < n; ++src) {
        WeightVector w = distance_weights(topo.positions, src, cfg.alpha, floor);
        for (int i = 0, c = 0; i < n; ++i) {
            if (i == src) continue;
            double dx = topo.positions[i].x - topo.positions[src].x;
            double dy = topo.positions[i].y - topo.positions[src].y;
            double dz = topo.positions[i].z - topo.positions[src].z;
            dist[c++] = std::sqrt(dx * dx + dy * dy + dz * dz);
        }
        GroupSampler sampler(w);
        int q = degrees.sample(rng);
        auto members = sampler.sample(q, rng);
        int dest_pos = select_destination(members, dist, cfg.beta, floor, rng);
        int cand = members[dest_pos];
        int dst = cand < src ? cand : cand + 1;

        Flow f;
        f.src = src;
        f.dst = dst;
        f.hops = cube_l1_distance(cubes[src], cubes[dst]);
        f.mode = static_cast<double>(f.hops) <= L ? FlowMode::AdHoc : FlowMode::Cellular;
        f.src_class = classify_node(static_cast<double>(q), topo.q0);
        flows.push_back(std::move(f));
    }
    return flows;
}

LoadMap accumulate_load(std::vector<Flow>& flows, const Topology& topo) {
    const int K = topo.grid.K;
    LoadMap load;
    load.K = K;
    load.cube_transits.assign(static_cast<size_t>(K) * K * K, 0);
    load.bs_uplink.assign(topo.bs.m, 0);
    load.bs_downlink.assign(topo.bs.m, 0);

    for (auto& f : flows) {
        if (f.mode == FlowMode::AdHoc) {
            f.path = route_segment(topo.positions[f.src], topo.positions[f.dst], topo.grid);
            for (const auto& c : f.path)
                ++load.cube_transits[(static_cast<size_t>(c.i) * K + c.j) * K + c.k];
        } else {
            ++load.bs_uplink[associate_bs(topo.positions[f.src], topo.bs)];
            ++load.bs_downlink[associate_bs(topo.positions[f.dst], topo.bs)];
        }
    }
    return load;
}

namespace {

RoundResult run_round(const NetworkConfig& cfg, std::uint64_t round, int M, int m) {
    auto place_rng = make_rng(cfg.seed, round, 0x706c616365ULL);
    auto flow_rng = make_rng(cfg.seed, round, 0x666c6f77ULL);

    Topology topo = build_topology(cfg, place_rng);
    std::vector<Flow> flows = generate_flows(topo, cfg, flow_rng);
    LoadMap load = accumulate_load(flows, topo);

    RoundResult r;
    double hops_adhoc = 0, hops_all = 0;
    for (const auto& f : flows) {
        hops_all += f.hops;
        if (f.mode == FlowMode::AdHoc) {
            ++r.n_a;
            hops_adhoc += f.hops;
        } else {
            ++r.n_c;
        }
    }
    const int n = static_cast<int>(flows.size());
    r.hops_all_mean = n ? hops_all / n : 0.0;
    r.hops_adhoc_mean = r.n_a ? hops_adhoc / r.n_a : 0.0;
    r.ef_avg = static_cast<double>(load.total_transits()) /
               static_cast<double>(load.cube_transits.size());
    r.f_max = static_cast<double>(load.max_transit());
    r.lambda_a_n = per_node_adhoc_throughput(r.ef_avg, M, cfg.W_a);
    r.lambda_a = r.n_a * per_node_adhoc_throughput_normalized(r.ef_avg, cfg.W_a);
    r.lambda_a_bottleneck = r.n_a * per_node_adhoc_throughput_normalized(r.f_max, cfg.W_a);
    r.lambda_c = cellular_throughput(m, cfg.W_c, r.n_c);
    r.lambda_total = r.lambda_a + r.lambda_c;
    return r;
}

double mean_of(const std::vector<RoundResult>& rounds, double RoundResult::*field) {
    double acc = 0;
    for (const auto& r : rounds) acc += r.*field;
    return rounds.empty() ? 0.0 : acc / static_cast<double>(rounds.size());
}

double sem_of(const std::vector<RoundResult>& rounds, double RoundResult::*field, double mean) {
    const size_t n = rounds.size();
    if (n < 2) return 0.0;
    double ss = 0;
    for (const auto& r : rounds) {
        double d = r.*field - mean;
        ss += d * d;
    }
    return std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
}

}  // namespace

SimResult simulate(const NetworkConfig& cfg, Exec exec) {
    cfg.validate();
    SimResult res;
    res.config = cfg;
    res.M = mac_cluster_parameter(cfg.delta, cfg.c1);
    res.m = place_base_stations(static_cast<double>(cfg.n), cfg.c_r).m;
    res.q0 = resolve_q0(cfg);
    res.rounds.resize(cfg.rounds);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (exec == Exec::OpenMP)
#endif
    for (int round = 0; round < cfg.rounds; ++round)
        res.rounds[round] = run_round(cfg, static_cast<std::uint64_t>(round), res.M, res.m);

    auto n_field = [&](auto field) { return mean_of(res.rounds, field); };
    double na = 0, nc = 0;
    for (const auto& r : res.rounds) {
        na += r.n_a;
        nc += r.n_c;
    }
    res.n_a = na / res.rounds.size();
    res.n_c = nc / res.rounds.size();
    res.ef_avg = n_field(&RoundResult::ef_avg);
    res.f_max = n_field(&RoundResult::f_max);
    res.hops_adhoc_mean = n_field(&RoundResult::hops_adhoc_mean);
    res.hops_all_mean = n_field(&RoundResult::hops_all_mean);
    res.lambda_a_n = n_field(&RoundResult::lambda_a_n);
    res.lambda_a = n_field(&RoundResult::lambda_a);
    res.lambda_a_bottleneck = n_field(&RoundResult::lambda_a_bottleneck);
    res.lambda_c = n_field(&RoundResult::lambda_c);
    res.lambda_total = n_field(&RoundResult::lambda_total);
    res.sem_lambda_total = sem_of(res.rounds, &RoundResult::lambda_total, res.lambda_total);
    res.sem_hops_adhoc = sem_of(res.rounds, &RoundResult::hops_adhoc_mean, res.hops_adhoc_mean);
    res.sem_ef = sem_of(res.rounds, &RoundResult::ef_avg, res.ef_avg);
    return res;
}

const char* kSimCsvHeader =
    "n,alpha,beta,gamma,L,Wa,Wc,seed,rounds,na,nc,ef_avg,f_max,lambda_a,lambda_c,lambda_total";

void write_sim_csv_row(std::ostream& out, const SimResult& res) {
    const auto& c = res.config;
    out << c.n << ',' << c.alpha << ',' << c.beta << ',' << c.gamma << ',' << c.L << ',' << c.W_a
        << ',' << c.W_c << ',' << c.seed << ',' << c.rounds << ',' << res.n_a << ',' << res.n_c
        << ',' << res.ef_avg << ',' << res.f_max << ',' << res.lambda_a << ',' << res.lambda_c
        << ',' << res.lambda_total << '\n';
}

void write_sim_jsonl(std::ostream& out, const SimResult& res) {
    const auto& c = res.config;
    for (size_t i = 0; i < res.rounds.size(); ++i) {
        const auto& r = res.rounds[i];
        out << "{\"n\":" << c.n << ",\"alpha\":" << c.alpha << ",\"beta\":" << c.beta
            << ",\"gamma\":" << c.gamma << ",\"L\":" << c.L << ",\"Wa\":" << c.W_a
            << ",\"Wc\":" << c.W_c << ",\"seed\":" << c.seed << ",\"round\":" << i
            << ",\"na\":" << r.n_a << ",\"nc\":" << r.n_c << ",\"ef_avg\":" << r.ef_avg
            << ",\"f_max\":" << r.f_max << ",\"hops_adhoc_mean\":" << r.hops_adhoc_mean
            << ",\"hops_all_mean\":" << r.hops_all_mean << ",\"lambda_a\":" << r.lambda_a
            << ",\"lambda_c\":" << r.lambda_c << ",\"lambda_total\":" << r.lambda_total << "}\n";
    }
}

}  // namespace uavnet
