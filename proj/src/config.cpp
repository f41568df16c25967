#include "uavnet/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "uavnet/topology.hpp"

namespace uavnet {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad numeric value for '" + key + "': " + value);
    }
}

}  // namespace

void NetworkConfig::validate() const {
    if (n < 2) throw std::invalid_argument("config: n must be >= 2");
    if (alpha < 0) throw std::invalid_argument("config: alpha must be >= 0");
    if (beta < 0) throw std::invalid_argument("config: beta must be >= 0");
    if (gamma < 0) throw std::invalid_argument("config: gamma must be >= 0");
    if (L < 0) throw std::invalid_argument("config: L must be >= 0");
    if (W_a < 0 || W_c < 0) throw std::invalid_argument("config: bandwidths must be >= 0");
    if (delta <= 0) throw std::invalid_argument("config: delta must be > 0");
    if (c1 <= 0 || c1 >= 1) throw std::invalid_argument("config: c1 must be in (0,1)");
    if (c_r <= 0) throw std::invalid_argument("config: c_r must be > 0");
    if (q0 > 0 && q0 < 1) throw std::invalid_argument("config: q0 must be >= 1 (or <= 0 for auto)");
    if (rounds < 1) throw std::invalid_argument("config: rounds must be >= 1");
}

void apply_config_kv(NetworkConfig& cfg, const std::string& rawkey, const std::string& rawvalue) {
    std::string key = trim(rawkey);
    std::string value = trim(rawvalue);
    for (auto& ch : key) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));

    if (key == "n") {
        double v = parse_double(key, value);
        if (v != std::floor(v)) throw std::invalid_argument("config: n must be an integer");
        cfg.n = static_cast<int>(v);
    } else if (key == "alpha") cfg.alpha = parse_double(key, value);
    else if (key == "beta") cfg.beta = parse_double(key, value);
    else if (key == "gamma") cfg.gamma = parse_double(key, value);
    else if (key == "l") cfg.L = parse_double(key, value);
    else if (key == "wa" || key == "w_a") cfg.W_a = parse_double(key, value);
    else if (key == "wc" || key == "w_c") cfg.W_c = parse_double(key, value);
    else if (key == "delta") cfg.delta = parse_double(key, value);
    else if (key == "c1") cfg.c1 = parse_double(key, value);
    else if (key == "cr" || key == "c_r") cfg.c_r = parse_double(key, value);
    else if (key == "q0") {
        if (value == "auto") cfg.q0 = -1;
        else cfg.q0 = parse_double(key, value);
    } else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_double(key, value));
    else if (key == "rounds") cfg.rounds = static_cast<int>(parse_double(key, value));
    else throw std::invalid_argument("config: unknown key '" + key + "'");
}

NetworkConfig parse_config(std::istream& in) {
    NetworkConfig cfg;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: expected 'key = value', got: " + line);
        apply_config_kv(cfg, line.substr(0, eq), line.substr(eq + 1));
    }
    return cfg;
}

NetworkConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    return parse_config(in);
}

void save_config(std::ostream& out, const NetworkConfig& cfg) {
    out << "n = " << cfg.n << "\n";
    out << "alpha = " << cfg.alpha << "\n";
    out << "beta = " << cfg.beta << "\n";
    out << "gamma = " << cfg.gamma << "\n";
    out << "L = " << cfg.L << "\n";
    out << "wa = " << cfg.W_a << "\n";
    out << "wc = " << cfg.W_c << "\n";
    out << "delta = " << cfg.delta << "\n";
    out << "c1 = " << cfg.c1 << "\n";
    out << "cr = " << cfg.c_r << "\n";
    if (cfg.q0 > 0) out << "q0 = " << cfg.q0 << "\n";
    else out << "q0 = auto\n";
    out << "seed = " << cfg.seed << "\n";
    out << "rounds = " << cfg.rounds << "\n";
}

void save_config_file(const std::string& path, const NetworkConfig& cfg) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("config: cannot open " + path + " for writing");
    save_config(out, cfg);
}

double resolve_q0(const NetworkConfig& cfg) {
    if (cfg.q0 > 0) return cfg.q0;
    DegreeSampler deg(cfg.n, cfg.gamma);
    return static_cast<double>(deg.quantile(0.9));
}

}  // namespace uavnet
