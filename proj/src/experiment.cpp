#include "uavnet/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "uavnet/geometry.hpp"
#include "uavnet/scaling_laws.hpp"

namespace uavnet {

std::string axis_name(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::L: return "L";
        case SweepAxis::N: return "n";
        case SweepAxis::Alpha: return "alpha";
        case SweepAxis::Beta: return "beta";
        case SweepAxis::Gamma: return "gamma";
    }
    return "?";
}

SweepAxis axis_from_name(const std::string& name) {
    std::string k = name;
    for (auto& c : k) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (k == "l") return SweepAxis::L;
    if (k == "n") return SweepAxis::N;
    if (k == "alpha") return SweepAxis::Alpha;
    if (k == "beta") return SweepAxis::Beta;
    if (k == "gamma") return SweepAxis::Gamma;
    throw std::invalid_argument("plan: unknown sweep axis '" + name + "'");
}

void ExperimentPlan::validate() const {
    base.validate();
    if (values.empty()) throw std::invalid_argument("plan: sweep value list is empty");
    for (size_t i = 1; i < values.size(); ++i)
        if (values[i] <= values[i - 1])
            throw std::invalid_argument("plan: sweep values must be strictly increasing");
    if (axis == SweepAxis::N)
        for (double v : values)
            if (v < 8) throw std::invalid_argument("plan: n sweep values must be >= 8");
    if (seeds < 1) throw std::invalid_argument("plan: seeds must be >= 1");
}

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<double> parse_value_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
}

Comparison comparison_from_name(const std::string& name) {
    if (name == "none") return Comparison::None;
    if (name == "pure_adhoc_baseline") return Comparison::PureAdhocBaseline;
    if (name == "theory_overlay") return Comparison::TheoryOverlay;
    throw std::invalid_argument("plan: unknown comparison '" + name + "'");
}

}  // namespace

ExperimentPlan parse_plan(std::istream& in) {
    ExperimentPlan plan;
    plan.base.rounds = 1;  // replication comes from the seed grid
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("plan: expected 'key = value', got: " + line);
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        for (auto& c : key) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));

        if (key == "sweep") plan.axis = axis_from_name(value);
        else if (key == "values") plan.values = parse_value_list(value);
        else if (key == "seeds") plan.seeds = std::stoi(value);
        else if (key == "comparison") plan.comparison = comparison_from_name(value);
        else if (key == "csv") plan.csv_path = value;
        else if (key == "jsonl") plan.jsonl_path = value;
        else if (key == "summary") plan.summary_path = value;
        else apply_config_kv(plan.base, key, value);
    }
    plan.validate();
    return plan;
}

ExperimentPlan load_plan_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("plan: cannot open " + path);
    return parse_plan(in);
}

namespace {

NetworkConfig config_at(const ExperimentPlan& plan, double value, int seed_index) {
    NetworkConfig cfg = plan.base;
    switch (plan.axis) {
        case SweepAxis::L: cfg.L = value; break;
        case SweepAxis::N: cfg.n = static_cast<int>(value); break;
        case SweepAxis::Alpha: cfg.alpha = value; break;
        case SweepAxis::Beta: cfg.beta = value; break;
        case SweepAxis::Gamma: cfg.gamma = value; break;
    }
    cfg.seed = plan.base.seed + static_cast<std::uint64_t>(seed_index);
    return cfg;
}

NetworkConfig pure_adhoc_config(const NetworkConfig& hybrid) {
    NetworkConfig cfg = hybrid;
    CubeGrid grid = build_cube_grid(cfg);
    cfg.L = static_cast<double>(max_hops(grid));
    cfg.W_a = hybrid.W();
    cfg.W_c = 0.0;
    return cfg;
}

TheoryOverlay make_overlay(const NetworkConfig& cfg) {
    ThroughputLaw law =
        adhoc_throughput_law(cfg.alpha, cfg.beta, cfg.gamma, static_cast<double>(cfg.n));
    TheoryOverlay ov;
    ov.region = law.region;
    double L = std::max(cfg.L, 1.0);
    ov.lambda_a = law.lambda_a.eval(static_cast<double>(cfg.n), L) * cfg.W_a;
    ov.optimal_L = law.optimal_L_value(static_cast<double>(cfg.n));
    ov.ef = ef_order(cfg.alpha, cfg.beta, cfg.gamma).eval(static_cast<double>(cfg.n), L);
    ov.na = flow_count_orders(cfg.alpha, cfg.beta, cfg.gamma)
                .na.eval(static_cast<double>(cfg.n), L);
    return ov;
}

}  // namespace

std::vector<ExperimentRecord> run_sweep(const ExperimentPlan& plan, Exec exec) {
    plan.validate();
    const int points = static_cast<int>(plan.values.size());
    const int total = points * plan.seeds;
    std::vector<ExperimentRecord> records(total);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (exec == Exec::OpenMP)
#endif
    for (int t = 0; t < total; ++t) {
        const int vi = t / plan.seeds;
        const int si = t % plan.seeds;
        auto t0 = std::chrono::steady_clock::now();

        ExperimentRecord& rec = records[t];
        rec.axis = plan.axis;
        rec.value = plan.values[vi];
        rec.seed_index = si;
        NetworkConfig cfg = config_at(plan, rec.value, si);
        rec.sim = simulate(cfg, Exec::Serial);

        if (plan.comparison == Comparison::PureAdhocBaseline)
            rec.baseline = simulate(pure_adhoc_config(cfg), Exec::Serial);
        else if (plan.comparison == Comparison::TheoryOverlay) {
            try {
                rec.overlay = make_overlay(cfg);
            } catch (const unsupported_regime&) {
                rec.overlay_unsupported = true;
            }
        }
        rec.wall_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
    }
    return records;
}

SlopeFit fit_loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("fit_loglog_slope: size mismatch");
    std::vector<double> lx, ly;
    int dropped = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        if (x[i] > 0 && y[i] > 0) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(y[i]));
        } else {
            ++dropped;
        }
    }
    if (dropped)
        std::cerr << "fit_loglog_slope: dropped " << dropped << " non-positive point(s)\n";
    const int m = static_cast<int>(lx.size());
    if (m < 3) throw std::invalid_argument("fit_loglog_slope: need at least 3 positive points");

    double mx = 0, my = 0;
    for (int i = 0; i < m; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0, sxy = 0;
    for (int i = 0; i < m; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0) throw std::invalid_argument("fit_loglog_slope: degenerate x values");
    SlopeFit fit;
    fit.slope = sxy / sxx;
    fit.used = m;
    fit.dropped = dropped;
    double ss_res = 0;
    for (int i = 0; i < m; ++i) {
        double r = ly[i] - my - fit.slope * (lx[i] - mx);
        ss_res += r * r;
    }
    fit.stderr_ = m > 2 ? std::sqrt(ss_res / (m - 2) / sxx) : 0.0;
    return fit;
}

double record_field(const ExperimentRecord& rec, const std::string& field) {
    const SimResult& s = rec.sim;
    if (field == "value") return rec.value;
    if (field == "n") return static_cast<double>(s.config.n);
    if (field == "L") return s.config.L;
    if (field == "alpha") return s.config.alpha;
    if (field == "beta") return s.config.beta;
    if (field == "gamma") return s.config.gamma;
    if (field == "na") return s.n_a;
    if (field == "nc") return s.n_c;
    if (field == "ef_avg") return s.ef_avg;
    if (field == "f_max") return s.f_max;
    if (field == "hops_adhoc_mean") return s.hops_adhoc_mean;
    if (field == "hops_all_mean") return s.hops_all_mean;
    if (field == "lambda_a") return s.lambda_a;
    if (field == "lambda_c") return s.lambda_c;
    if (field == "lambda_total") return s.lambda_total;
    if (field == "lambda_a_bottleneck") return s.lambda_a_bottleneck;
    throw std::invalid_argument("record_field: unknown field '" + field + "'");
}

SlopeFit fit_loglog_slope(std::span<const ExperimentRecord> records,
                          const std::string& x_field, const std::string& y_field) {
    // Average y over seeds per sweep value, then fit on the means.
    std::map<double, std::pair<double, int>> by_value;
    std::map<double, double> xs;
    for (const auto& rec : records) {
        auto& slot = by_value[rec.value];
        slot.first += record_field(rec, y_field);
        slot.second += 1;
        xs[rec.value] = record_field(rec, x_field);
    }
    std::vector<double> x, y;
    for (const auto& [value, acc] : by_value) {
        x.push_back(xs[value]);
        y.push_back(acc.first / acc.second);
    }
    return fit_loglog_slope(x, y);
}

OptimalL find_optimal_L(std::span<const ExperimentRecord> records) {
    if (records.empty()) throw std::invalid_argument("find_optimal_L: no records");
    std::map<double, std::pair<double, int>> by_value;
    for (const auto& rec : records) {
        auto& slot = by_value[rec.value];
        slot.first += rec.sim.lambda_total;
        slot.second += 1;
    }
    OptimalL best{0, -1.0};
    for (const auto& [value, acc] : by_value) {
        double mean = acc.first / acc.second;
        if (mean > best.lambda) {  // strict: ties keep the smallest L
            best.lambda = mean;
            best.L = value;
        }
    }
    return best;
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

const char* kRecordColumns =
    "sweep_axis,sweep_value,seed_index,n,alpha,beta,gamma,L,Wa,Wc,delta,c1,cr,q0,seed,rounds,"
    "na,nc,ef_avg,f_max,hops_adhoc_mean,hops_all_mean,lambda_a_n,lambda_a,"
    "lambda_a_bottleneck,lambda_c,lambda_total,sem_lambda_total,sem_hops_adhoc,sem_ef,"
    "base_na,base_ef_avg,base_hops_adhoc_mean,base_lambda_total,"
    "th_regime,th_lambda_a,th_optimal_L,th_ef,th_na";

void emit_record_fields(std::ostream& out, const ExperimentRecord& rec, bool jsonl) {
    const SimResult& s = rec.sim;
    const NetworkConfig& c = s.config;
    std::vector<std::pair<std::string, std::string>> kv;
    kv.emplace_back("sweep_axis", axis_name(rec.axis));
    kv.emplace_back("sweep_value", fmt(rec.value));
    kv.emplace_back("seed_index", std::to_string(rec.seed_index));
    kv.emplace_back("n", std::to_string(c.n));
    kv.emplace_back("alpha", fmt(c.alpha));
    kv.emplace_back("beta", fmt(c.beta));
    kv.emplace_back("gamma", fmt(c.gamma));
    kv.emplace_back("L", fmt(c.L));
    kv.emplace_back("Wa", fmt(c.W_a));
    kv.emplace_back("Wc", fmt(c.W_c));
    kv.emplace_back("delta", fmt(c.delta));
    kv.emplace_back("c1", fmt(c.c1));
    kv.emplace_back("cr", fmt(c.c_r));
    kv.emplace_back("q0", fmt(s.q0));
    kv.emplace_back("seed", std::to_string(c.seed));
    kv.emplace_back("rounds", std::to_string(c.rounds));
    kv.emplace_back("na", fmt(s.n_a));
    kv.emplace_back("nc", fmt(s.n_c));
    kv.emplace_back("ef_avg", fmt(s.ef_avg));
    kv.emplace_back("f_max", fmt(s.f_max));
    kv.emplace_back("hops_adhoc_mean", fmt(s.hops_adhoc_mean));
    kv.emplace_back("hops_all_mean", fmt(s.hops_all_mean));
    kv.emplace_back("lambda_a_n", fmt(s.lambda_a_n));
    kv.emplace_back("lambda_a", fmt(s.lambda_a));
    kv.emplace_back("lambda_a_bottleneck", fmt(s.lambda_a_bottleneck));
    kv.emplace_back("lambda_c", fmt(s.lambda_c));
    kv.emplace_back("lambda_total", fmt(s.lambda_total));
    kv.emplace_back("sem_lambda_total", fmt(s.sem_lambda_total));
    kv.emplace_back("sem_hops_adhoc", fmt(s.sem_hops_adhoc));
    kv.emplace_back("sem_ef", fmt(s.sem_ef));
    if (rec.baseline) {
        kv.emplace_back("base_na", fmt(rec.baseline->n_a));
        kv.emplace_back("base_ef_avg", fmt(rec.baseline->ef_avg));
        kv.emplace_back("base_hops_adhoc_mean", fmt(rec.baseline->hops_adhoc_mean));
        kv.emplace_back("base_lambda_total", fmt(rec.baseline->lambda_total));
    } else {
        for (const char* k : {"base_na", "base_ef_avg", "base_hops_adhoc_mean",
                              "base_lambda_total"})
            kv.emplace_back(k, "");
    }
    if (rec.overlay) {
        kv.emplace_back("th_regime", std::to_string(rec.overlay->region));
        kv.emplace_back("th_lambda_a", fmt(rec.overlay->lambda_a));
        kv.emplace_back("th_optimal_L", std::isinf(rec.overlay->optimal_L)
                                            ? std::string("unconstrained")
                                            : fmt(rec.overlay->optimal_L));
        kv.emplace_back("th_ef", fmt(rec.overlay->ef));
        kv.emplace_back("th_na", fmt(rec.overlay->na));
    } else {
        for (const char* k : {"th_regime", "th_lambda_a", "th_optimal_L", "th_ef", "th_na"})
            kv.emplace_back(k, "");
    }

    if (jsonl) {
        out << '{';
        for (size_t i = 0; i < kv.size(); ++i) {
            if (i) out << ',';
            bool numeric = !kv[i].second.empty() &&
                           kv[i].second.find_first_not_of("0123456789.+-eE") == std::string::npos;
            out << '"' << kv[i].first << "\":";
            if (kv[i].second.empty()) out << "null";
            else if (numeric) out << kv[i].second;
            else out << '"' << kv[i].second << '"';
        }
        out << "}\n";
    } else {
        for (size_t i = 0; i < kv.size(); ++i) {
            if (i) out << ',';
            out << kv[i].second;
        }
        out << '\n';
    }
}

}  // namespace

void emit(std::span<const ExperimentRecord> records, EmitFormat format, std::ostream& out) {
    if (format == EmitFormat::Csv) out << kRecordColumns << '\n';
    for (const auto& rec : records) emit_record_fields(out, rec, format == EmitFormat::Jsonl);
}

void emit_file(std::span<const ExperimentRecord> records, EmitFormat format,
               const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit: cannot open " + path + " for writing");
    emit(records, format, out);
    if (!out.good()) throw std::runtime_error("emit: write failed for " + path);
}

void emit_summary(std::span<const ExperimentRecord> records, std::ostream& out) {
    out << "sweep_value,count,lambda_total_mean,lambda_total_sem,lambda_a_mean,lambda_c_mean,"
           "hops_adhoc_mean,hops_adhoc_sem,ef_avg_mean,base_lambda_total_mean,"
           "base_hops_adhoc_mean\n";
    std::map<double, std::vector<const ExperimentRecord*>> groups;
    for (const auto& rec : records) groups[rec.value].push_back(&rec);
    for (const auto& [value, group] : groups) {
        auto mean_sem = [&](auto getter) {
            double m = 0;
            for (auto* r : group) m += getter(*r);
            m /= group.size();
            double ss = 0;
            for (auto* r : group) {
                double d = getter(*r) - m;
                ss += d * d;
            }
            double sem = group.size() > 1
                             ? std::sqrt(ss / (group.size() - 1) / group.size())
                             : 0.0;
            return std::pair<double, double>(m, sem);
        };
        auto [lt_m, lt_s] = mean_sem([](const ExperimentRecord& r) { return r.sim.lambda_total; });
        auto [la_m, la_s] = mean_sem([](const ExperimentRecord& r) { return r.sim.lambda_a; });
        auto [lc_m, lc_s] = mean_sem([](const ExperimentRecord& r) { return r.sim.lambda_c; });
        auto [h_m, h_s] = mean_sem([](const ExperimentRecord& r) { return r.sim.hops_adhoc_mean; });
        auto [ef_m, ef_s] = mean_sem([](const ExperimentRecord& r) { return r.sim.ef_avg; });
        (void)la_s;
        (void)lc_s;
        (void)ef_s;
        bool has_base = !group.empty() && group.front()->baseline.has_value();
        double blt = 0, bh = 0;
        if (has_base) {
            for (auto* r : group) {
                blt += r->baseline->lambda_total;
                bh += r->baseline->hops_adhoc_mean;
            }
            blt /= group.size();
            bh /= group.size();
        }
        out << fmt(value) << ',' << group.size() << ',' << fmt(lt_m) << ',' << fmt(lt_s) << ','
            << fmt(la_m) << ',' << fmt(lc_m) << ',' << fmt(h_m) << ',' << fmt(h_s) << ','
            << fmt(ef_m) << ',';
        if (has_base) out << fmt(blt) << ',' << fmt(bh);
        else out << ',';
        out << '\n';
    }
}

}  // namespace uavnet
