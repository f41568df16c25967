#include "uavnet/topology.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "uavnet/rng.hpp"

namespace uavnet {

NodeClass classify_node(double q, double q0) {
    return q > q0 ? NodeClass::Leader : NodeClass::Normal;
}

DegreeSampler::DegreeSampler(int n, double gamma) : n_(n), gamma_(gamma) {
    if (n < 2) throw std::invalid_argument("DegreeSampler: n must be >= 2");
    if (gamma < 0) throw std::invalid_argument("DegreeSampler: gamma must be >= 0");
    cdf_.resize(n - 1);
    double acc = 0;
    for (int q = 1; q <= n - 1; ++q) {
        acc += std::pow(static_cast<double>(q), -gamma);
        cdf_[q - 1] = acc;
    }
    norm_ = acc;
    for (auto& c : cdf_) c /= norm_;
    cdf_.back() = 1.0;
}

double DegreeSampler::pmf(int q) const {
    if (q < 1 || q > n_ - 1) return 0.0;
    return std::pow(static_cast<double>(q), -gamma_) / norm_;
}

double DegreeSampler::cdf(int q) const {
    if (q < 1) return 0.0;
    if (q > n_ - 1) return 1.0;
    return cdf_[q - 1];
}

int DegreeSampler::quantile(double p) const {
    auto it = std::lower_bound(cdf_.begin(), cdf_.end(), p);
    if (it == cdf_.end()) return n_ - 1;
    return static_cast<int>(it - cdf_.begin()) + 1;
}

int DegreeSampler::sample(std::mt19937_64& rng) const {
    return quantile(uniform01(rng));
}

int sample_degree(int n, double gamma, std::mt19937_64& rng) {
    return DegreeSampler(n, gamma).sample(rng);
}

GroupSampler::GroupSampler(const WeightVector& w) : w_(&w) {
    const int n = w.size();
    cum_.resize(n);
    double acc = 0;
    for (int i = 0; i < n; ++i) {
        acc += std::exp(w.log_w[i]);
        cum_[i] = acc;
    }
    if (!(acc > 0) || !std::isfinite(acc))
        throw std::invalid_argument("GroupSampler: weights must sum to a positive finite value");
    double s2 = 0;
    for (int i = 0; i < n; ++i) {
        double p = (cum_[i] - (i ? cum_[i - 1] : 0.0)) / acc;
        s2 += p * p;
    }
    sum_p2_ = s2;
}

std::vector<int> GroupSampler::sample(int q, std::mt19937_64& rng) const {
    const int n = w_->size();
    if (q < 1 || q > n) throw std::invalid_argument("GroupSampler: q out of range");
    if (q == n) {
        std::vector<int> all(n);
        for (int i = 0; i < n; ++i) all[i] = i;
        return all;
    }
    // Conditioning i.i.d. weighted draws on distinctness yields exactly the
    // product-weighted law over size-q subsets. Predicted acceptance below
    // ~exp(-C(q,2) sum p^2); fall through to the sequential scan when slim.
    double log_acc_est = -0.5 * q * (q - 1) * sum_p2_;
    if (log_acc_est > std::log(0.05)) {
        bool ok = false;
        auto members = sample_rejection(q, rng, ok);
        if (ok) return members;
    }
    return sample_sequential(q, rng);
}

std::vector<int> GroupSampler::sample_rejection(int q, std::mt19937_64& rng, bool& ok) const {
    const double total = cum_.back();
    std::vector<int> picked(q);
    for (int attempt = 0; attempt < 64; ++attempt) {
        bool distinct = true;
        for (int j = 0; j < q && distinct; ++j) {
            double u = uniform01(rng) * total;
            auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
            int idx = static_cast<int>(std::min<std::ptrdiff_t>(it - cum_.begin(),
                                                                cum_.size() - 1));
            for (int t = 0; t < j; ++t)
                if (picked[t] == idx) { distinct = false; break; }
            picked[j] = idx;
        }
        if (distinct) {
            ok = true;
            std::sort(picked.begin(), picked.end());
            return picked;
        }
    }
    ok = false;
    return {};
}

std::vector<int> GroupSampler::sample_sequential(int q, std::mt19937_64& rng) const {
    const int n = w_->size();
    const auto& lw = w_->log_w;
    // suffix[i*(q+1)+j] = log sigma_j(w_i .. w_{n-1})
    const int cols = q + 1;
    std::vector<double> suffix(static_cast<size_t>(n + 1) * cols, kNegInf);
    suffix[static_cast<size_t>(n) * cols] = 0.0;
    for (int i = n - 1; i >= 0; --i) {
        double* row = &suffix[static_cast<size_t>(i) * cols];
        const double* next = &suffix[static_cast<size_t>(i + 1) * cols];
        row[0] = 0.0;
        for (int j = 1; j <= std::min(n - i, q); ++j)
            row[j] = logaddexp(next[j], lw[i] + next[j - 1]);
    }
    std::vector<int> members;
    members.reserve(q);
    int need = q;
    for (int i = 0; i < n && need > 0; ++i) {
        // P(take i | need r from {i..}) = w_i sigma_{r-1}(i+1..) / sigma_r(i..)
        double lp = lw[i] + suffix[static_cast<size_t>(i + 1) * cols + (need - 1)] -
                    suffix[static_cast<size_t>(i) * cols + need];
        if (n - i == need || uniform01(rng) < std::exp(lp)) {
            members.push_back(i);
            --need;
        }
    }
    return members;
}

std::vector<int> sample_contact_group(const WeightVector& w, int q, std::mt19937_64& rng) {
    return GroupSampler(w).sample(q, rng);
}

ContactGroup make_contact_group(int source, std::span<const int> candidate_members) {
    ContactGroup g;
    g.source = source;
    g.members.reserve(candidate_members.size());
    for (int c : candidate_members) g.members.push_back(c < source ? c : c + 1);
    return g;
}

int select_destination(std::span<const int> members, std::span<const double> distances,
                       double beta, double floor, std::mt19937_64& rng) {
    if (members.empty()) throw std::invalid_argument("select_destination: empty group");
    if (members.size() == 1) return 0;
    std::vector<double> cum(members.size());
    double acc = 0;
    for (size_t i = 0; i < members.size(); ++i) {
        double d = std::max(distances[members[i]], floor);
        acc += std::pow(d, -beta);
        cum[i] = acc;
    }
    double u = uniform01(rng) * acc;
    auto it = std::upper_bound(cum.begin(), cum.end(), u);
    return static_cast<int>(std::min<std::ptrdiff_t>(it - cum.begin(), cum.size() - 1));
}

void write_topology(std::ostream& out, std::span<const Point3> positions,
                    const TopologyDump& dump, double q0) {
    const int n = static_cast<int>(positions.size());
    for (int i = 0; i < n; ++i) {
        const char* cls =
            classify_node(dump.degrees[i], q0) == NodeClass::Leader ? "leader" : "normal";
        out << "node " << i << ' ' << positions[i].x << ' ' << positions[i].y << ' '
            << positions[i].z << ' ' << dump.degrees[i] << ' ' << cls << '\n';
    }
    for (int i = 0; i < n; ++i)
        for (int member : dump.groups[i]) out << "edge " << i << ' ' << member << " group\n";
    for (int i = 0; i < n; ++i)
        if (dump.destinations[i] >= 0) out << "edge " << i << ' ' << dump.destinations[i] << " comm\n";
}

}  // namespace uavnet
