#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>

namespace uavnet {

/// All model parameters for one network instance.
///
/// Defaults follow the reference scenario used throughout the test suite:
/// n = 100, alpha = 1, beta = 0.5, gamma = 2, unit total bandwidth split
/// evenly between ad hoc and cellular.
struct NetworkConfig {
    int n = 100;             ///< node count, >= 2
    double alpha = 1.0;      ///< concentration factor (contact-group distance decay)
    double beta = 0.5;       ///< communication activity factor (destination decay)
    double gamma = 2.0;      ///< clustering factor (degree distribution decay)
    double L = 2.0;          ///< hop threshold: flows with <= L cube hops go ad hoc
    double W_a = 0.5;        ///< ad hoc bandwidth (bps)
    double W_c = 0.5;        ///< cellular bandwidth (bps)
    double delta = 1.0;      ///< guard zone factor, > 0
    double c1 = 0.4;         ///< cube side constant, in (0,1); <= 1/sqrt(6) keeps
                             ///  neighbor cubes inside the transmission range
    double c_r = 1.0;        ///< transmission range constant, > 0
    double q0 = -1.0;        ///< leader degree threshold; <= 0 selects the
                             ///  90th-percentile rule at runtime
    std::uint64_t seed = 1;  ///< master RNG seed
    int rounds = 64;         ///< Monte-Carlo rounds per simulate() call

    double W() const { return W_a + W_c; }

    /// Throws std::invalid_argument on an unusable parameter set.
    void validate() const;
};

/// Parses `key = value` lines ('#' starts a comment). Unknown keys throw.
NetworkConfig parse_config(std::istream& in);
NetworkConfig load_config_file(const std::string& path);

/// Writes the flat key=value form accepted by parse_config.
void save_config(std::ostream& out, const NetworkConfig& cfg);
void save_config_file(const std::string& path, const NetworkConfig& cfg);

/// Applies a single `key=value` assignment (shared by file parser and CLI).
void apply_config_kv(NetworkConfig& cfg, const std::string& key, const std::string& value);

/// Resolved leader threshold: cfg.q0 when positive, otherwise the degree at
/// the 90th percentile of the degree distribution for (cfg.n, cfg.gamma).
double resolve_q0(const NetworkConfig& cfg);

}  // namespace uavnet
