#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "uavnet/config.hpp"
#include "uavnet/parallel.hpp"
#include "uavnet/simulation.hpp"

namespace uavnet {

enum class SweepAxis { L, N, Alpha, Beta, Gamma };
enum class Comparison { None, PureAdhocBaseline, TheoryOverlay };

std::string axis_name(SweepAxis axis);
SweepAxis axis_from_name(const std::string& name);

/// Batch experiment description: a base configuration, one swept axis, and
/// per-point seed replication. Plans default to rounds = 1 per record, with
/// replication carried by the seed grid.
struct ExperimentPlan {
    NetworkConfig base;
    SweepAxis axis = SweepAxis::L;
    std::vector<double> values;
    int seeds = 32;
    Comparison comparison = Comparison::None;
    std::string csv_path;
    std::string jsonl_path;
    std::string summary_path;

    void validate() const;
};

ExperimentPlan parse_plan(std::istream& in);
ExperimentPlan load_plan_file(const std::string& path);

/// Theory annotations; absent on unsupported-regime configurations.
struct TheoryOverlay {
    int region = 0;
    double lambda_a = 0;
    double optimal_L = 0;  // +inf when unconstrained
    double ef = 0;
    double na = 0;
};

/// One record per (sweep value, seed). Baseline fields are filled under
/// Comparison::PureAdhocBaseline by a paired-seed rerun with L = 3(K-1) and
/// the whole bandwidth on the ad hoc side. wall_ms is runtime metadata and
/// never reaches the emitted files.
struct ExperimentRecord {
    SweepAxis axis;
    double value = 0;
    int seed_index = 0;
    SimResult sim;
    std::optional<SimResult> baseline;
    std::optional<TheoryOverlay> overlay;
    bool overlay_unsupported = false;
    double wall_ms = 0;
};

std::vector<ExperimentRecord> run_sweep(const ExperimentPlan& plan, Exec exec = Exec::OpenMP);

/// Least-squares slope of ln y against ln x with its standard error.
/// Non-positive samples are dropped with a warning; fewer than 3 remaining
/// points throw std::invalid_argument.
struct SlopeFit {
    double slope = 0;
    double stderr_ = 0;
    int used = 0;
    int dropped = 0;
};
SlopeFit fit_loglog_slope(std::span<const double> x, std::span<const double> y);
SlopeFit fit_loglog_slope(std::span<const ExperimentRecord> records,
                          const std::string& x_field, const std::string& y_field);

/// Named scalar accessor used by slope fitting and the CLI.
double record_field(const ExperimentRecord& rec, const std::string& field);

/// Argmax of mean lambda_total over seeds across an L sweep; ties resolve to
/// the smallest L.
struct OptimalL {
    double L = 0;
    double lambda = 0;
};
OptimalL find_optimal_L(std::span<const ExperimentRecord> records);

enum class EmitFormat { Csv, Jsonl };

/// Stable column order; reruns of the same plan produce byte-identical files.
void emit(std::span<const ExperimentRecord> records, EmitFormat format, std::ostream& out);
void emit_file(std::span<const ExperimentRecord> records, EmitFormat format,
               const std::string& path);

/// Per-sweep-value means with standard errors, one row per value.
void emit_summary(std::span<const ExperimentRecord> records, std::ostream& out);

}  // namespace uavnet
