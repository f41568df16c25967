// Command-line driver: single runs, parameter sweeps, closed-form queries,
// hybrid-vs-pure comparisons, and topology dumps.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "uavnet/experiment.hpp"
#include "uavnet/geometry.hpp"
#include "uavnet/hop_analysis.hpp"
#include "uavnet/rng.hpp"
#include "uavnet/scaling_laws.hpp"
#include "uavnet/simulation.hpp"
#include "uavnet/sympoly.hpp"
#include "uavnet/topology.hpp"

namespace {

using namespace uavnet;

struct CommonOpts {
    NetworkConfig cfg;
    std::string config_file;
};

void add_config_flags(CLI::App* app, CommonOpts& opts) {
    app->add_option("--config", opts.config_file, "flat key = value config file")
        ->envname("SIM_CONFIG");
    app->add_option("--n", opts.cfg.n, "node count")->envname("SIM_N");
    app->add_option("--alpha", opts.cfg.alpha, "concentration factor")->envname("SIM_ALPHA");
    app->add_option("--beta", opts.cfg.beta, "communication activity factor")
        ->envname("SIM_BETA");
    app->add_option("--gamma", opts.cfg.gamma, "clustering factor")->envname("SIM_GAMMA");
    app->add_option("--L", opts.cfg.L, "hop threshold")->envname("SIM_L");
    app->add_option("--wa", opts.cfg.W_a, "ad hoc bandwidth")->envname("SIM_WA");
    app->add_option("--wc", opts.cfg.W_c, "cellular bandwidth")->envname("SIM_WC");
    app->add_option("--delta", opts.cfg.delta, "guard zone factor")->envname("SIM_DELTA");
    app->add_option("--c1", opts.cfg.c1, "cube side constant")->envname("SIM_C1");
    app->add_option("--cr", opts.cfg.c_r, "range constant")->envname("SIM_CR");
    app->add_option("--q0", opts.cfg.q0, "leader degree threshold (<=0: auto)")
        ->envname("SIM_Q0");
    app->add_option("--seed", opts.cfg.seed, "RNG seed")->envname("SIM_SEED");
    app->add_option("--rounds", opts.cfg.rounds, "Monte-Carlo rounds")->envname("SIM_ROUNDS");
}

// --config file loads first, explicit flags override.
void finalize_config(const CLI::App* app, CommonOpts& opts) {
    if (opts.config_file.empty()) return;
    NetworkConfig from_file = load_config_file(opts.config_file);
    NetworkConfig defaults;
    auto keep = [&](auto NetworkConfig::* field, const char* flag) {
        if (app->count(flag) == 0) opts.cfg.*field = from_file.*field;
        (void)defaults;
    };
    keep(&NetworkConfig::n, "--n");
    keep(&NetworkConfig::alpha, "--alpha");
    keep(&NetworkConfig::beta, "--beta");
    keep(&NetworkConfig::gamma, "--gamma");
    keep(&NetworkConfig::L, "--L");
    keep(&NetworkConfig::W_a, "--wa");
    keep(&NetworkConfig::W_c, "--wc");
    keep(&NetworkConfig::delta, "--delta");
    keep(&NetworkConfig::c1, "--c1");
    keep(&NetworkConfig::c_r, "--cr");
    keep(&NetworkConfig::q0, "--q0");
    keep(&NetworkConfig::seed, "--seed");
    keep(&NetworkConfig::rounds, "--rounds");
}

void append_sim_csv(const std::string& path, const SimResult& res) {
    bool fresh = true;
    {
        std::ifstream probe(path);
        fresh = !probe.good() || probe.peek() == std::ifstream::traits_type::eof();
    }
    std::ofstream out(path, std::ios::app);
    if (!out) throw std::runtime_error("cannot open " + path);
    if (fresh) out << kSimCsvHeader << '\n';
    write_sim_csv_row(out, res);
}

void print_sim(const SimResult& res) {
    std::cout << "n=" << res.config.n << " L=" << res.config.L << " seed=" << res.config.seed
              << " rounds=" << res.config.rounds << " q0=" << res.q0 << " M=" << res.M
              << " m=" << res.m << "\n"
              << "  na=" << res.n_a << " nc=" << res.n_c << " ef_avg=" << res.ef_avg
              << " f_max=" << res.f_max << "\n"
              << "  hops_adhoc=" << res.hops_adhoc_mean << " hops_all=" << res.hops_all_mean
              << "\n"
              << "  lambda_a=" << res.lambda_a << " lambda_c=" << res.lambda_c
              << " lambda_total=" << res.lambda_total << " (+/- " << res.sem_lambda_total
              << ")\n";
}

int cmd_theory(const NetworkConfig& cfg) {
    ThroughputLaw law =
        adhoc_throughput_law(cfg.alpha, cfg.beta, cfg.gamma, static_cast<double>(cfg.n));
    double n = static_cast<double>(cfg.n);
    double L = std::max(1.0, cfg.L);
    std::cout << "region: " << law.region << "\n";
    std::cout << "lambda_a ~ " << law.lambda_a.str() << "\n";
    std::cout << "lambda_a(" << cfg.n << ", L=" << L
              << ") = " << law.lambda_a.eval(n, L) * cfg.W_a << "\n";
    if (law.optimal_L) {
        std::cout << "optimal_L ~ " << law.optimal_L->str() << "\n";
        std::cout << "optimal_L(" << cfg.n << ") = " << law.optimal_L_value(n) << "\n";
    } else {
        std::cout << "optimal_L: unconstrained (throughput is L-independent)\n";
    }
    switch (law.dominant_class) {
        case DominantClass::Leader: std::cout << "dominant: leader\n"; break;
        case DominantClass::Normal: std::cout << "dominant: normal\n"; break;
        case DominantClass::Mixed: std::cout << "dominant: mixed\n"; break;
        case DominantClass::Independent: std::cout << "dominant: independent\n"; break;
    }
    OrderTerm total = total_throughput_order(cfg);
    std::cout << "lambda_total ~ " << total.str() << "\n";
    std::cout << "lambda_total(" << cfg.n << ", L=" << L << ") = " << total.eval(n, L) << "\n";
    OrderTerm ef = ef_order(cfg.alpha, cfg.beta, cfg.gamma);
    std::cout << "E[F] ~ " << ef.str() << " = " << ef.eval(n, L) << "\n";
    return 0;
}

int run_plan(const ExperimentPlan& plan) {
    auto records = run_sweep(plan);
    if (!plan.csv_path.empty()) emit_file(records, EmitFormat::Csv, plan.csv_path);
    if (!plan.jsonl_path.empty()) emit_file(records, EmitFormat::Jsonl, plan.jsonl_path);
    if (!plan.summary_path.empty()) {
        std::ofstream out(plan.summary_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open " + plan.summary_path);
        emit_summary(records, out);
    }
    if (plan.csv_path.empty() && plan.jsonl_path.empty() && plan.summary_path.empty())
        emit_summary(records, std::cout);
    if (plan.axis == SweepAxis::L) {
        OptimalL best = find_optimal_L(records);
        std::cerr << "optimal swept L = " << best.L << " (mean lambda_total = " << best.lambda
                  << ")\n";
    }
    bool any_unsupported = false, any_supported = false;
    for (const auto& r : records) {
        if (r.overlay_unsupported) any_unsupported = true;
        if (r.overlay) any_supported = true;
    }
    if (plan.comparison == Comparison::TheoryOverlay && any_unsupported && !any_supported)
        return 2;
    return 0;
}

int cmd_topology(const NetworkConfig& cfg, const std::string& out_path) {
    auto rng = make_rng(cfg.seed, 0, 0x746f706fULL);
    Topology topo = build_topology(cfg, rng);
    const int n = cfg.n;
    const double floor = topo.grid.side;
    DegreeSampler degrees(n, cfg.gamma);

    TopologyDump dump;
    dump.degrees.resize(n);
    dump.groups.resize(n);
    dump.destinations.assign(n, -1);
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
        int q = degrees.sample(rng);
        auto members = sample_contact_group(w, q, rng);
        ContactGroup group = make_contact_group(src, members);
        dump.degrees[src] = q;
        dump.groups[src] = group.members;
        int pos = select_destination(members, dist, cfg.beta, floor, rng);
        dump.destinations[src] = group.members[pos];
    }

    if (out_path.empty() || out_path == "-") {
        write_topology(std::cout, topo.positions, dump, topo.q0);
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open " + out_path);
        write_topology(out, topo.positions, dump, topo.q0);
    }
    return 0;
}

int cmd_analyze(const NetworkConfig& cfg, const std::string& mode, std::uint64_t samples,
                const std::string& pmf_path, const std::string& probs_path) {
    auto rng = make_rng(cfg.seed, 0, 0x616e616cULL);
    auto positions = place_nodes(cfg.n, rng);
    HopAnalysis hp;
    if (mode == "exact") hp = analyze_exact(positions, cfg);
    else hp = analyze_mc(positions, cfg, samples, cfg.seed);

    std::cout << "q0=" << hp.q0 << " E'[X]=" << hp.moments.e_prime
              << " (leader " << hp.moments.e1_prime << ", normal " << hp.moments.e2_prime
              << ") E[F]=" << hp.moments.ef << "\n";
    std::cout << "pr1a=" << hp.cls.pr1a << " pr1c=" << hp.cls.pr1c << " pr2a=" << hp.cls.pr2a
              << " pr2c=" << hp.cls.pr2c << " (sum " << hp.cls.total() << ")\n";
    std::cout << "mean hops = " << hp.hop.mean() << "\n";
    if (!pmf_path.empty()) {
        std::ofstream out(pmf_path, std::ios::binary);
        write_hop_csv(out, cfg, cfg.seed, hp.hop, true);
    }
    if (!probs_path.empty()) {
        std::ofstream out(probs_path, std::ios::binary);
        write_class_csv(out, cfg, cfg.seed, hp.cls, true);
    }
    return 0;
}

int cmd_compare(const NetworkConfig& cfg, const std::vector<double>& l_values, int seeds,
                const std::string& csv_path) {
    ExperimentPlan plan;
    plan.base = cfg;
    plan.base.rounds = 1;
    plan.axis = SweepAxis::L;
    plan.values = l_values;
    plan.seeds = seeds;
    plan.comparison = Comparison::PureAdhocBaseline;
    plan.csv_path = csv_path;
    auto records = run_sweep(plan);
    if (!csv_path.empty()) emit_file(records, EmitFormat::Csv, csv_path);

    emit_summary(records, std::cout);
    OptimalL best = find_optimal_L(records);
    double pure_lambda = 0, pure_hops = 0;
    int count = 0;
    for (const auto& r : records) {
        if (r.value == plan.values.front() && r.baseline) {
            pure_lambda += r.baseline->lambda_total;
            pure_hops += r.baseline->hops_adhoc_mean;
            ++count;
        }
    }
    if (count) {
        pure_lambda /= count;
        pure_hops /= count;
        std::cout << "# hybrid best: L=" << best.L << " lambda_total=" << best.lambda << "\n";
        std::cout << "# pure ad hoc: lambda_total=" << pure_lambda << " hops=" << pure_hops
                  << "\n";
        std::cout << "# hybrid/pure = " << (pure_lambda > 0 ? best.lambda / pure_lambda : 0)
                  << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hybrid ad hoc / cellular network simulator with scale-free traffic"};
    app.require_subcommand(1);

    // run <plan-file>
    auto* run = app.add_subcommand("run", "execute an experiment plan file");
    std::string plan_path;
    run->add_option("plan", plan_path, "plan file")->required();

    // sweep-l / sweep-n
    CommonOpts sweep_opts;
    std::string sweep_values, sweep_csv, sweep_jsonl, sweep_summary, sweep_comparison = "none";
    int sweep_seeds = 32;
    auto* sweep_l = app.add_subcommand("sweep-l", "sweep the hop threshold L");
    auto* sweep_n = app.add_subcommand("sweep-n", "sweep the node count n");
    for (auto* sc : {sweep_l, sweep_n}) {
        add_config_flags(sc, sweep_opts);
        sc->add_option("--values", sweep_values, "comma-separated sweep values")->required();
        sc->add_option("--seeds", sweep_seeds, "seeds per sweep point");
        sc->add_option("--csv", sweep_csv, "records CSV path");
        sc->add_option("--jsonl", sweep_jsonl, "records JSONL path");
        sc->add_option("--summary", sweep_summary, "summary CSV path");
        sc->add_option("--comparison", sweep_comparison,
                       "none | pure_adhoc_baseline | theory_overlay");
    }

    // theory
    CommonOpts theory_opts;
    auto* theory = app.add_subcommand("theory", "closed-form throughput laws");
    add_config_flags(theory, theory_opts);

    // compare
    CommonOpts compare_opts;
    std::string compare_values = "1,2,3,4,6,8,12,16", compare_csv;
    int compare_seeds = 16;
    auto* compare = app.add_subcommand("compare", "hybrid vs pure ad hoc across an L sweep");
    add_config_flags(compare, compare_opts);
    compare->add_option("--values", compare_values, "comma-separated L values");
    compare->add_option("--seeds", compare_seeds, "paired seeds");
    compare->add_option("--csv", compare_csv, "records CSV path");

    // simulate (single point)
    CommonOpts sim_opts;
    std::string sim_csv, sim_jsonl;
    auto* simc = app.add_subcommand("simulate", "single configuration run");
    add_config_flags(simc, sim_opts);
    simc->add_option("--csv", sim_csv, "append result row to CSV");
    simc->add_option("--jsonl", sim_jsonl, "write per-round JSONL");

    // analyze
    CommonOpts an_opts;
    std::string an_mode = "mc", an_pmf, an_probs;
    std::uint64_t an_samples = 100000;
    auto* analyze = app.add_subcommand("analyze", "hop distribution and flow-class analysis");
    add_config_flags(analyze, an_opts);
    analyze->add_option("--mode", an_mode, "exact | mc");
    analyze->add_option("--samples", an_samples, "Monte-Carlo samples (mc mode)");
    analyze->add_option("--csv-pmf", an_pmf, "hop pmf CSV path");
    analyze->add_option("--csv-probs", an_probs, "flow-class CSV path");

    // topology
    CommonOpts topo_opts;
    std::string topo_out;
    auto* topo = app.add_subcommand("topology", "dump one realized topology");
    add_config_flags(topo, topo_opts);
    topo->add_option("--out", topo_out, "output path ('-' for stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return run_plan(load_plan_file(plan_path));
        if (sweep_l->parsed() || sweep_n->parsed()) {
            finalize_config(sweep_l->parsed() ? sweep_l : sweep_n, sweep_opts);
            ExperimentPlan plan;
            plan.base = sweep_opts.cfg;
            plan.base.rounds = 1;
            plan.axis = sweep_l->parsed() ? SweepAxis::L : SweepAxis::N;
            {
                std::stringstream ss(sweep_values);
                std::string item;
                while (std::getline(ss, item, ','))
                    if (!item.empty()) plan.values.push_back(std::stod(item));
            }
            plan.seeds = sweep_seeds;
            if (sweep_comparison == "pure_adhoc_baseline")
                plan.comparison = Comparison::PureAdhocBaseline;
            else if (sweep_comparison == "theory_overlay")
                plan.comparison = Comparison::TheoryOverlay;
            plan.csv_path = sweep_csv;
            plan.jsonl_path = sweep_jsonl;
            plan.summary_path = sweep_summary;
            return run_plan(plan);
        }
        if (theory->parsed()) {
            finalize_config(theory, theory_opts);
            return cmd_theory(theory_opts.cfg);
        }
        if (compare->parsed()) {
            finalize_config(compare, compare_opts);
            std::vector<double> values;
            std::stringstream ss(compare_values);
            std::string item;
            while (std::getline(ss, item, ','))
                if (!item.empty()) values.push_back(std::stod(item));
            return cmd_compare(compare_opts.cfg, values, compare_seeds, compare_csv);
        }
        if (simc->parsed()) {
            finalize_config(simc, sim_opts);
            SimResult res = simulate(sim_opts.cfg);
            print_sim(res);
            if (!sim_csv.empty()) append_sim_csv(sim_csv, res);
            if (!sim_jsonl.empty()) {
                std::ofstream out(sim_jsonl, std::ios::binary);
                write_sim_jsonl(out, res);
            }
            return 0;
        }
        if (analyze->parsed()) {
            finalize_config(analyze, an_opts);
            return cmd_analyze(an_opts.cfg, an_mode, an_samples, an_pmf, an_probs);
        }
        if (topo->parsed()) {
            finalize_config(topo, topo_opts);
            return cmd_topology(topo_opts.cfg, topo_out);
        }
    } catch (const uavnet::unsupported_regime& e) {
        std::cerr << "unsupported regime: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
