#include "uavnet/sympoly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace uavnet {

double logaddexp(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    if (a < b) std::swap(a, b);
    return a + std::log1p(std::exp(b - a));
}

double WeightVector::weight(int i) const { return std::exp(log_w[i]); }

WeightVector weights_from_logs(std::vector<double> log_w) {
    return WeightVector{std::move(log_w)};
}

WeightVector distance_weights(std::span<const Point3> positions, int source,
                              double exponent, double floor) {
    if (positions.size() < 2) throw std::invalid_argument("distance_weights: need n >= 2");
    if (exponent < 0) throw std::invalid_argument("distance_weights: exponent must be >= 0");
    if (floor <= 0) throw std::invalid_argument("distance_weights: floor must be > 0");

    const Point3 s = positions[source];
    const double floor2 = floor * floor;
    WeightVector w;
    w.log_w.reserve(positions.size() - 1);
    for (int i = 0; i < static_cast<int>(positions.size()); ++i) {
        if (i == source) continue;
        double dx = positions[i].x - s.x;
        double dy = positions[i].y - s.y;
        double dz = positions[i].z - s.z;
        double d2 = std::max(dx * dx + dy * dy + dz * dz, floor2);
        // w = d^(-exponent) = exp(-exponent/2 * ln d^2)
        w.log_w.push_back(-0.5 * exponent * std::log(d2));
    }
    return w;
}

double SymPolyTable::at(int q) const { return std::exp(log_sigma[q]); }

SymPolyTable sym_poly_table(const WeightVector& w, int q_max) {
    if (q_max < 0 || q_max > w.size())
        throw std::invalid_argument("sym_poly_table: q_max out of range");
    SymPolyTable t;
    t.log_sigma.assign(q_max + 1, kNegInf);
    t.log_sigma[0] = 0.0;
    int filled = 0;
    for (int i = 0; i < w.size(); ++i) {
        filled = std::min(filled + 1, q_max);
        for (int j = filled; j >= 1; --j)
            t.log_sigma[j] = logaddexp(t.log_sigma[j], w.log_w[i] + t.log_sigma[j - 1]);
    }
    return t;
}

LeaveOneOutTable::LeaveOneOutTable(const WeightVector& w, int q_max)
    : n_(w.size()), q_max_(q_max) {
    if (q_max < 0 || q_max > n_)
        throw std::invalid_argument("LeaveOneOutTable: q_max out of range");
    const int cols = q_max_ + 1;
    prefix_.assign(static_cast<size_t>(n_ + 1) * cols, kNegInf);
    suffix_.assign(static_cast<size_t>(n_ + 1) * cols, kNegInf);

    prefix_[0] = 0.0;  // sigma_0 over empty set
    for (int i = 1; i <= n_; ++i) {
        const double lw = w.log_w[i - 1];
        double* row = &prefix_[static_cast<size_t>(i) * cols];
        const double* prev = &prefix_[static_cast<size_t>(i - 1) * cols];
        row[0] = 0.0;
        for (int j = 1; j <= std::min(i, q_max_); ++j)
            row[j] = logaddexp(prev[j], lw + prev[j - 1]);
    }
    suffix_[static_cast<size_t>(n_) * cols] = 0.0;
    for (int i = n_ - 1; i >= 0; --i) {
        const double lw = w.log_w[i];
        double* row = &suffix_[static_cast<size_t>(i) * cols];
        const double* next = &suffix_[static_cast<size_t>(i + 1) * cols];
        row[0] = 0.0;
        for (int j = 1; j <= std::min(n_ - i, q_max_); ++j)
            row[j] = logaddexp(next[j], lw + next[j - 1]);
    }
}

double LeaveOneOutTable::log_sigma(int j) const {
    const int cols = q_max_ + 1;
    return prefix_[static_cast<size_t>(n_) * cols + j];
}

double LeaveOneOutTable::log_sigma_without(int k, int j) const {
    const int cols = q_max_ + 1;
    const double* pre = &prefix_[static_cast<size_t>(k) * cols];        // weights before k
    const double* suf = &suffix_[static_cast<size_t>(k + 1) * cols];    // weights after k
    const int pre_len = k, suf_len = n_ - k - 1;
    double acc = kNegInf;
    const int a_lo = std::max(0, j - suf_len);
    const int a_hi = std::min(j, std::min(pre_len, q_max_));
    for (int a = a_lo; a <= a_hi; ++a) acc = logaddexp(acc, pre[a] + suf[j - a]);
    return acc;
}

double inclusion_probability(const WeightVector& w, int q, int k) {
    if (q < 1 || q > w.size())
        throw std::invalid_argument("inclusion_probability: q out of range");
    LeaveOneOutTable t(w, q);
    return std::exp(w.log_w[k] + t.log_sigma_without(k, q - 1) - t.log_sigma(q));
}

std::vector<double> inclusion_probabilities(const WeightVector& w, int q) {
    if (q < 1 || q > w.size())
        throw std::invalid_argument("inclusion_probabilities: q out of range");
    LeaveOneOutTable t(w, q);
    const double log_norm = t.log_sigma(q);
    std::vector<double> probs(w.size());
    for (int k = 0; k < w.size(); ++k)
        probs[k] = std::exp(w.log_w[k] + t.log_sigma_without(k, q - 1) - log_norm);
    return probs;
}

}  // namespace uavnet
