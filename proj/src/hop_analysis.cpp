#include "uavnet/hop_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "uavnet/rng.hpp"
#include "uavnet/sympoly.hpp"
#include "uavnet/topology.hpp"

namespace uavnet {

long long shell_cube_count(int x) {
    if (x < 1) throw std::domain_error("shell_cube_count: x must be >= 1");
    return 4LL * x * x + 2;
}

long long shell_cube_count_truncated(const CubeIndex& src, int x, int K) {
    if (x < 1) throw std::domain_error("shell_cube_count_truncated: x must be >= 1");
    long long count = 0;
    for (int di = -x; di <= x; ++di) {
        int i = src.i + di;
        if (i < 0 || i >= K) continue;
        int rem = x - std::abs(di);
        for (int dj = -rem; dj <= rem; ++dj) {
            int j = src.j + dj;
            if (j < 0 || j >= K) continue;
            int dk = rem - std::abs(dj);
            int k1 = src.k + dk, k2 = src.k - dk;
            if (k1 >= 0 && k1 < K) ++count;
            if (dk != 0 && k2 >= 0 && k2 < K) ++count;
        }
    }
    return count;
}

double HopDistribution::total() const {
    return std::accumulate(pmf.begin(), pmf.end(), 0.0);
}

double HopDistribution::mean() const {
    double m = 0;
    for (size_t x = 0; x < pmf.size(); ++x) m += static_cast<double>(x) * pmf[x];
    return m;
}

namespace {

// Per-source partial sums; merged in source order.
struct SourceAccum {
    std::vector<double> pmf;
    double cls[4] = {0, 0, 0, 0};  // pr1a, pr1c, pr2a, pr2c
    double e1 = 0, e2 = 0;
    double x0_leader = 0, x0_normal = 0;
    std::uint64_t samples = 0;

    void merge(const SourceAccum& o) {
        if (pmf.size() < o.pmf.size()) pmf.resize(o.pmf.size(), 0.0);
        for (size_t i = 0; i < o.pmf.size(); ++i) pmf[i] += o.pmf[i];
        for (int i = 0; i < 4; ++i) cls[i] += o.cls[i];
        e1 += o.e1;
        e2 += o.e2;
        x0_leader += o.x0_leader;
        x0_normal += o.x0_normal;
        samples += o.samples;
    }
};

struct Instance {
    const NetworkConfig* cfg;
    std::span<const Point3> positions;
    CubeGrid grid;
    double q0;
    DegreeSampler degrees;
    std::vector<CubeIndex> cubes;

    Instance(std::span<const Point3> pos, const NetworkConfig& c)
        : cfg(&c),
          positions(pos),
          grid(build_cube_grid(static_cast<double>(pos.size()), c.c1, c.c_r)),
          q0(resolve_q0_for(pos, c)),
          degrees(static_cast<int>(pos.size()), c.gamma) {
        cubes.reserve(pos.size());
        for (const auto& p : pos) cubes.push_back(cube_index(p, grid));
    }

    static double resolve_q0_for(std::span<const Point3> pos, const NetworkConfig& c) {
        NetworkConfig tmp = c;
        tmp.n = static_cast<int>(pos.size());
        return resolve_q0(tmp);
    }
};

// Dyadic panels accumulating toward 1 resolve integrands as spiked as
// z^M with M up to 2^(levels); Gauss-Legendre nodes per panel.
struct Quadrature {
    std::vector<double> z, weight;
};

// 12-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr double kGL12x[6] = {0.1252334085114689, 0.3678314989981802, 0.5873179542866175,
                              0.7699026741943047, 0.9041172563704749, 0.9815606342467192};
constexpr double kGL12w[6] = {0.2491470458134028, 0.2334925365383548, 0.2031674267230659,
                              0.1600783285433462, 0.1069393259953184, 0.0471753363865118};

Quadrature build_quadrature(double max_exponent) {
    int levels = 14;
    if (max_exponent > 1.0) {
        levels = std::max(levels, static_cast<int>(std::ceil(std::log2(max_exponent))) + 2);
    }
    levels = std::min(levels, 44);

    Quadrature quad;
    double lo = 0.0;
    for (int lev = 0; lev <= levels; ++lev) {
        double hi = (lev == levels) ? 1.0 : 1.0 - std::ldexp(1.0, -(lev + 1));
        double c = 0.5 * (hi + lo), h = 0.5 * (hi - lo);
        for (int g = 0; g < 6; ++g) {
            quad.z.push_back(c - h * kGL12x[g]);
            quad.weight.push_back(h * kGL12w[g]);
            quad.z.push_back(c + h * kGL12x[g]);
            quad.weight.push_back(h * kGL12w[g]);
        }
        lo = hi;
    }
    return quad;
}

// Exact destination marginal for one source.
//
// The group stage is marginalized analytically through
//   1/S = p * integral_0^1 z^(pS-1) dz,  S = sum of member destination weights,
// which turns P(D = o_k, Q = q) into an integral of leave-one-out elementary
// symmetric polynomials of the z-damped group weights. Linear-domain sigma
// arithmetic with geometric-mean scaling keeps every value representable for
// the supported exact-mode sizes.
class ExactSourceLaw {
public:
    ExactSourceLaw(const Instance& inst, int source, int q_cap)
        : inst_(inst), source_(source) {
        const auto& pos = inst.positions;
        const int n = static_cast<int>(pos.size());
        N_ = n - 1;
        q_cap_ = q_cap > 0 ? std::min(q_cap, N_) : N_;

        const double floor = inst.grid.side;
        const double floor2 = floor * floor;
        logw_.resize(N_);
        v_.resize(N_);
        hop_.resize(N_);
        const Point3 s = pos[source];
        for (int i = 0, c = 0; i < n; ++i) {
            if (i == source) continue;
            double dx = pos[i].x - s.x, dy = pos[i].y - s.y, dz = pos[i].z - s.z;
            double d2 = std::max(dx * dx + dy * dy + dz * dz, floor2);
            logw_[c] = -0.5 * inst.cfg->alpha * std::log(d2);
            v_[c] = std::exp(-0.5 * inst.cfg->beta * std::log(d2));
            hop_[c] = cube_l1_distance(inst.cubes[source], inst.cubes[i]);
            ++c;
        }

        double mean_logw = std::accumulate(logw_.begin(), logw_.end(), 0.0) / N_;
        what_.resize(N_);
        for (int i = 0; i < N_; ++i) what_[i] = std::exp(logw_[i] - mean_logw);

        v_min_ = *std::min_element(v_.begin(), v_.end());
        v_max_ = *std::max_element(v_.begin(), v_.end());
        p_ = 1.0 / v_min_;

        if (q_cap_ >= 2 && N_ >= 3) integrate();
    }

    /// P(D = candidate k | Q = q), exact; rows normalized per q.
    double dest_prob(int k, int q) const {
        if (q == 1) return what_[k] / what_sum();
        if (q == N_) return v_[k] / v_sum();
        return marg_[static_cast<size_t>(k) * (q_cap_ + 1) + q];
    }

    int candidates() const { return N_; }
    int q_cap() const { return q_cap_; }
    int hop(int k) const { return hop_[k]; }

private:
    double what_sum() const {
        return std::accumulate(what_.begin(), what_.end(), 0.0);
    }
    double v_sum() const { return std::accumulate(v_.begin(), v_.end(), 0.0); }

    void integrate() {
        const int cols = q_cap_ + 1;
        marg_.assign(static_cast<size_t>(N_) * cols, 0.0);

        const bool full_tables = N_ <= 220 || q_cap_ >= N_;
        const int build_to = full_tables ? N_ : std::min(q_cap_ + 1, N_);
        if (!full_tables) {
            // Descending deflation is unavailable without the full table;
            // refuse spreads the ascending recurrence cannot carry.
            double mean_w = what_sum() / N_;
            double max_w = *std::max_element(what_.begin(), what_.end());
            if (max_w > 32.0 * mean_w)
                throw std::invalid_argument(
                    "analyze_exact: weight spread too large for capped-degree mode; "
                    "use Monte-Carlo analysis");
        }

        Quadrature quad = build_quadrature(p_ * v_max_ * q_cap_);
        const int Z = static_cast<int>(quad.z.size());

        std::vector<double> wt(N_), c(build_to + 1), qc(N_), zpow(N_);
        for (int node = 0; node < Z; ++node) {
            const double z = quad.z[node];
            const double lnz = std::log(z);
            double mean_wt = 0;
            for (int i = 0; i < N_; ++i) {
                wt[i] = what_[i] * std::exp(p_ * v_[i] * lnz);
                mean_wt += wt[i];
                zpow[i] = std::exp((p_ * v_[i] - 1.0) * lnz);
            }
            mean_wt /= N_;

            std::fill(c.begin(), c.end(), 0.0);
            c[0] = 1.0;
            int filled = 0;
            for (int i = 0; i < N_; ++i) {
                filled = std::min(filled + 1, build_to);
                for (int j = filled; j >= 1; --j) c[j] += wt[i] * c[j - 1];
            }
            if (!std::isfinite(c[std::min(build_to, filled)]))
                throw std::overflow_error("analyze_exact: sigma overflow; reduce n or q_cap");

            const double w_node = quad.weight[node] * p_;
            for (int k = 0; k < N_; ++k) {
                const double wk = wt[k];
                const int hi = std::min(q_cap_ - 1, N_ - 2);  // need sigma_{q-1}, q <= q_cap
                if (wk == 0.0) {
                    for (int j = 0; j <= hi; ++j) qc[j] = c[j];
                } else if (!full_tables || wk <= mean_wt) {
                    // synthetic division by (1 + wk x), low coefficients first
                    qc[0] = 1.0;
                    for (int j = 1; j <= hi; ++j) {
                        double val = c[j] - wk * qc[j - 1];
                        qc[j] = val > 0 ? val : 0.0;
                    }
                } else {
                    // same division from the top coefficient, stable for
                    // dominant weights
                    double qj = c[N_] / wk;  // sigma_{N-1}(w \ k)
                    if (N_ - 1 <= hi) qc[N_ - 1] = qj;
                    for (int j = N_ - 1; j >= 1; --j) {
                        double val = (c[j] - qj) / wk;
                        qj = val > 0 ? val : 0.0;
                        if (j - 1 <= hi) qc[j - 1] = qj;
                    }
                }
                const double f = w_node * zpow[k];
                double* row = &marg_[static_cast<size_t>(k) * cols];
                for (int q = 2; q <= std::min(q_cap_, N_ - 1); ++q) row[q] += f * qc[q - 1];
            }
        }

        // A_k(q) = v_k w_k * accumulated integral; normalize each q row so the
        // conditional destination law is exact mass.
        for (int k = 0; k < N_; ++k) {
            double* row = &marg_[static_cast<size_t>(k) * cols];
            const double vk_wk = v_[k] * what_[k];
            for (int q = 2; q <= std::min(q_cap_, N_ - 1); ++q) row[q] *= vk_wk;
        }
        for (int q = 2; q <= std::min(q_cap_, N_ - 1); ++q) {
            double norm = 0;
            for (int k = 0; k < N_; ++k) norm += marg_[static_cast<size_t>(k) * cols + q];
            if (norm > 0)
                for (int k = 0; k < N_; ++k) marg_[static_cast<size_t>(k) * cols + q] /= norm;
        }
    }

    const Instance& inst_;
    int source_;
    int N_ = 0;
    int q_cap_ = 0;
    double p_ = 1, v_min_ = 1, v_max_ = 1;
    std::vector<double> logw_, what_, v_;
    std::vector<int> hop_;
    std::vector<double> marg_;  // N x (q_cap+1), q >= 2 rows
};

SourceAccum exact_source_accum(const Instance& inst, int source, double L, double q0,
                               int q_cap) {
    ExactSourceLaw law(inst, source, q_cap);
    const int N = law.candidates();

    SourceAccum acc;
    acc.pmf.assign(max_hops(inst.grid) + 1, 0.0);
    acc.samples = 1;

    // Degree mass renormalized over the computed support (identity when
    // q_cap covers the full range).
    double deg_mass = 0;
    for (int q = 1; q <= std::min(law.q_cap(), N); ++q) deg_mass += inst.degrees.pmf(q);

    for (int q = 1; q <= std::min(law.q_cap(), N); ++q) {
        const double pq = inst.degrees.pmf(q) / deg_mass;
        if (pq <= 0) continue;
        const bool leader = static_cast<double>(q) > q0;
        for (int k = 0; k < N; ++k) {
            const double m = pq * law.dest_prob(k, q);
            if (m <= 0) continue;
            const int x = law.hop(k);
            acc.pmf[x] += m;
            if (x == 0) (leader ? acc.x0_leader : acc.x0_normal) += m;
            const bool adhoc = static_cast<double>(x) <= L;
            acc.cls[leader ? (adhoc ? 0 : 1) : (adhoc ? 2 : 3)] += m;
            if (adhoc) (leader ? acc.e1 : acc.e2) += static_cast<double>(x) * m;
        }
    }
    return acc;
}

HopAnalysis finalize(const Instance& inst, SourceAccum total, double denom, bool include_x0,
                     std::uint64_t samples) {
    if (!include_x0) {
        // x = 0 mass always sits in the ad hoc classes; drop it and condition
        // the law on x >= 1.
        double keep = denom - total.x0_leader - total.x0_normal;
        if (keep <= 0) throw std::domain_error("analysis: no mass left after excluding x = 0");
        total.cls[0] -= total.x0_leader;
        total.cls[2] -= total.x0_normal;
        total.pmf[0] = 0.0;
        denom = keep;
    }
    HopAnalysis out;
    out.q0 = inst.q0;
    out.samples = samples;
    out.hop.pmf = std::move(total.pmf);
    for (auto& p : out.hop.pmf) p /= denom;
    out.cls.pr1a = total.cls[0] / denom;
    out.cls.pr1c = total.cls[1] / denom;
    out.cls.pr2a = total.cls[2] / denom;
    out.cls.pr2c = total.cls[3] / denom;
    out.moments.e1_prime = total.e1 / denom;
    out.moments.e2_prime = total.e2 / denom;
    out.moments.e_prime = out.moments.e1_prime + out.moments.e2_prime;
    const double s = inst.grid.side;
    out.moments.ef = static_cast<double>(inst.positions.size()) * out.moments.e_prime * s * s * s;
    return out;
}

}  // namespace

HopAnalysis analyze_exact(std::span<const Point3> positions, const NetworkConfig& cfg,
                          const AnalysisOptions& opts) {
    const int n = static_cast<int>(positions.size());
    if (n < 2) throw std::invalid_argument("analyze_exact: need n >= 2");
    if (n > opts.exact_cap)
        throw std::invalid_argument(
            "analyze_exact: instance exceeds the exact-mode cap (n = " + std::to_string(n) +
            " > " + std::to_string(opts.exact_cap) + "); use analyze_mc instead");

    Instance inst(positions, cfg);
    std::vector<int> sources = opts.sources;
    if (sources.empty()) {
        sources.resize(n);
        std::iota(sources.begin(), sources.end(), 0);
    }

    std::vector<SourceAccum> partial(sources.size());
    const int count = static_cast<int>(sources.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (opts.exec == Exec::OpenMP)
#endif
    for (int si = 0; si < count; ++si)
        partial[si] = exact_source_accum(inst, sources[si], cfg.L, inst.q0, opts.q_cap);

    SourceAccum total;
    total.pmf.assign(max_hops(inst.grid) + 1, 0.0);
    for (const auto& p : partial) total.merge(p);
    return finalize(inst, std::move(total), static_cast<double>(count), opts.include_x0, 0);
}

HopAnalysis analyze_mc(std::span<const Point3> positions, const NetworkConfig& cfg,
                       std::uint64_t samples, std::uint64_t seed,
                       const AnalysisOptions& opts) {
    const int n = static_cast<int>(positions.size());
    if (n < 2) throw std::invalid_argument("analyze_mc: need n >= 2");
    if (samples < 1) throw std::invalid_argument("analyze_mc: need samples >= 1");

    Instance inst(positions, cfg);
    const double floor = inst.grid.side;
    const double L = cfg.L;
    const double q0 = inst.q0;

    std::vector<SourceAccum> partial(n);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (opts.exec == Exec::OpenMP)
#endif
    for (int src = 0; src < n; ++src) {
        std::uint64_t quota = samples / n + (static_cast<std::uint64_t>(src) < samples % n ? 1 : 0);
        SourceAccum acc;
        acc.pmf.assign(max_hops(inst.grid) + 1, 0.0);
        if (quota == 0) {
            partial[src] = std::move(acc);
            continue;
        }
        auto rng = make_rng(seed, 0x4d435f686f70ULL, static_cast<std::uint64_t>(src));
        WeightVector w = distance_weights(positions, src, cfg.alpha, floor);
        std::vector<double> dist(n - 1);
        for (int i = 0, c = 0; i < n; ++i) {
            if (i == src) continue;
            double dx = positions[i].x - positions[src].x;
            double dy = positions[i].y - positions[src].y;
            double dz = positions[i].z - positions[src].z;
            dist[c++] = std::sqrt(dx * dx + dy * dy + dz * dz);
        }
        GroupSampler sampler(w);
        for (std::uint64_t t = 0; t < quota; ++t) {
            int q = inst.degrees.sample(rng);
            auto members = sampler.sample(q, rng);
            int dest_pos = select_destination(members, dist, cfg.beta, floor, rng);
            int cand = members[dest_pos];
            int node = cand < src ? cand : cand + 1;
            int x = cube_l1_distance(inst.cubes[src], inst.cubes[node]);

            acc.samples += 1;
            acc.pmf[x] += 1;
            const bool leader = static_cast<double>(q) > q0;
            if (x == 0) (leader ? acc.x0_leader : acc.x0_normal) += 1;
            const bool adhoc = static_cast<double>(x) <= L;
            acc.cls[leader ? (adhoc ? 0 : 1) : (adhoc ? 2 : 3)] += 1;
            if (adhoc) (leader ? acc.e1 : acc.e2) += x;
        }
        partial[src] = std::move(acc);
    }

    SourceAccum total;
    total.pmf.assign(max_hops(inst.grid) + 1, 0.0);
    for (const auto& p : partial) total.merge(p);
    return finalize(inst, std::move(total), static_cast<double>(samples), opts.include_x0,
                    samples);
}

HopDistribution hop_distribution_exact(std::span<const Point3> positions,
                                       const NetworkConfig& cfg, const AnalysisOptions& opts) {
    return analyze_exact(positions, cfg, opts).hop;
}

HopDistribution hop_distribution_mc(std::span<const Point3> positions, const NetworkConfig& cfg,
                                    std::uint64_t samples, std::uint64_t seed,
                                    const AnalysisOptions& opts) {
    return analyze_mc(positions, cfg, samples, seed, opts).hop;
}

FlowClassProbs flow_class_probs(std::span<const Point3> positions, const NetworkConfig& cfg,
                                AnalysisMode mode, std::uint64_t samples, std::uint64_t seed,
                                const AnalysisOptions& opts) {
    return mode == AnalysisMode::Exact ? analyze_exact(positions, cfg, opts).cls
                                       : analyze_mc(positions, cfg, samples, seed, opts).cls;
}

HopMoments truncated_hop_moments(std::span<const Point3> positions, const NetworkConfig& cfg,
                                 AnalysisMode mode, std::uint64_t samples, std::uint64_t seed,
                                 const AnalysisOptions& opts) {
    return mode == AnalysisMode::Exact ? analyze_exact(positions, cfg, opts).moments
                                       : analyze_mc(positions, cfg, samples, seed, opts).moments;
}

void write_hop_csv(std::ostream& out, const NetworkConfig& cfg, std::uint64_t seed,
                   const HopDistribution& hop, bool header) {
    if (header) out << "n,alpha,beta,gamma,L,seed,x,p\n";
    for (size_t x = 0; x < hop.pmf.size(); ++x)
        out << cfg.n << ',' << cfg.alpha << ',' << cfg.beta << ',' << cfg.gamma << ',' << cfg.L
            << ',' << seed << ',' << x << ',' << hop.pmf[x] << '\n';
}

void write_class_csv(std::ostream& out, const NetworkConfig& cfg, std::uint64_t seed,
                     const FlowClassProbs& cls, bool header) {
    if (header) out << "n,alpha,beta,gamma,L,seed,pr1a,pr1c,pr2a,pr2c\n";
    out << cfg.n << ',' << cfg.alpha << ',' << cfg.beta << ',' << cfg.gamma << ',' << cfg.L << ','
        << seed << ',' << cls.pr1a << ',' << cls.pr1c << ',' << cls.pr2a << ',' << cls.pr2c
        << '\n';
}

}  // namespace uavnet
