#pragma once

#include <iosfwd>
#include <random>
#include <span>
#include <vector>

#include "uavnet/sympoly.hpp"

namespace uavnet {

enum class NodeClass { Leader, Normal };

/// Leader iff q > q0 (strict boundary).
NodeClass classify_node(double q, double q0);

/// Degree distribution P(Q = q) = q^(-gamma) / sum_{1..n-1} q^(-gamma).
class DegreeSampler {
public:
    DegreeSampler(int n, double gamma);

    int n() const { return n_; }
    double pmf(int q) const;
    double cdf(int q) const;
    /// Smallest q whose CDF reaches p.
    int quantile(double p) const;
    /// Inverse-CDF draw; support {1, .., n-1}.
    int sample(std::mt19937_64& rng) const;
    /// sum_{q=1}^{n-1} q^(-gamma) (the paper's sigma_1 over the q-vector).
    double normalizer() const { return norm_; }

private:
    int n_;
    double gamma_;
    double norm_;
    std::vector<double> cdf_;  // cdf_[q-1] = P(Q <= q)
};

int sample_degree(int n, double gamma, std::mt19937_64& rng);

struct ContactGroup {
    int source = -1;
    std::vector<int> members;  ///< node ids, source excluded
    int q() const { return static_cast<int>(members.size()); }
};

/// Lifts a member set from candidate indices (position order with the source
/// removed, as produced by the samplers) back to node ids.
ContactGroup make_contact_group(int source, std::span<const int> candidate_members);

/// Exact sampler for fixed-size groups with P(G) proportional to the product
/// of member weights. Uses i.i.d. proposal draws conditioned on distinctness
/// when acceptance is predicted to be high, otherwise the sequential
/// suffix-sigma scan. Both routes are exact.
class GroupSampler {
public:
    explicit GroupSampler(const WeightVector& w);

    std::vector<int> sample(int q, std::mt19937_64& rng) const;

private:
    std::vector<int> sample_rejection(int q, std::mt19937_64& rng, bool& ok) const;
    std::vector<int> sample_sequential(int q, std::mt19937_64& rng) const;

    const WeightVector* w_;
    std::vector<double> cum_;  // linear-domain cumulative weights
    double sum_p2_ = 0;        // sum of squared selection probabilities
};

/// One-shot convenience wrapper over GroupSampler.
std::vector<int> sample_contact_group(const WeightVector& w, int q, std::mt19937_64& rng);

/// Destination pick inside a group: member k with probability
/// max(d_k, floor)^(-beta) / normalizer. Returns an index into `members`.
int select_destination(std::span<const int> members, std::span<const double> distances,
                       double beta, double floor, std::mt19937_64& rng);

/// Line-delimited topology dump: `node <id> <x> <y> <z> <q> <class>` records
/// followed by `edge <src> <dst> <kind>` with kind in {group, comm}.
struct TopologyDump {
    std::vector<int> degrees;                   // per node
    std::vector<std::vector<int>> groups;       // per node, node ids
    std::vector<int> destinations;              // per node, node id
};

void write_topology(std::ostream& out, std::span<const Point3> positions,
                    const TopologyDump& dump, double q0);

}  // namespace uavnet
