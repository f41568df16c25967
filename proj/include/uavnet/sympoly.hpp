#pragma once

#include <limits>
#include <span>
#include <vector>

#include "uavnet/geometry.hpp"

namespace uavnet {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// log(exp(a) + exp(b)) without overflow; handles -inf operands.
double logaddexp(double a, double b);

/// Candidate weights w_i = max(d_i, floor)^(-exponent) for one source node,
/// kept in log domain. Entry i corresponds to candidate index i in the
/// caller's ordering (the source itself is excluded before construction).
struct WeightVector {
    std::vector<double> log_w;

    int size() const { return static_cast<int>(log_w.size()); }
    double weight(int i) const;
};

WeightVector weights_from_logs(std::vector<double> log_w);

/// w_i = max(d(positions[source], positions[i]), floor)^(-exponent),
/// i != source, in position order with the source removed.
WeightVector distance_weights(std::span<const Point3> positions, int source,
                              double exponent, double floor);

/// log sigma_0 .. log sigma_q_max of a weight vector. sigma_0 = 1 and
/// sigma_q = 0 (log = -inf) past the vector length.
struct SymPolyTable {
    std::vector<double> log_sigma;

    int q_max() const { return static_cast<int>(log_sigma.size()) - 1; }
    double log_at(int q) const { return log_sigma[q]; }
    double at(int q) const;
};

SymPolyTable sym_poly_table(const WeightVector& w, int q_max);

/// Prefix/suffix sigma tables enabling leave-one-out queries without
/// subtraction (stable at any weight spread).
class LeaveOneOutTable {
public:
    LeaveOneOutTable(const WeightVector& w, int q_max);

    /// log sigma_j of the weights with index k removed.
    double log_sigma_without(int k, int j) const;
    double log_sigma(int j) const;
    int q_max() const { return q_max_; }

private:
    int n_ = 0;
    int q_max_ = 0;
    // row i holds sigma_j over the first i weights / last n-i weights
    std::vector<double> prefix_;  // (n+1) x (q_max+1)
    std::vector<double> suffix_;
};

/// P(o_k in G | |G| = q) = w_k sigma_{q-1}(w \ k) / sigma_q(w).
double inclusion_probability(const WeightVector& w, int q, int k);

/// All candidates at once; shares one leave-one-out table.
std::vector<double> inclusion_probabilities(const WeightVector& w, int q);

}  // namespace uavnet
