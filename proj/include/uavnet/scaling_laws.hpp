#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "uavnet/config.hpp"
#include "uavnet/order_term.hpp"

namespace uavnet {

/// Raised when (alpha, beta, gamma) falls outside every tabulated branch
/// (boundary sets and cells the closed forms leave undefined).
class unsupported_regime : public std::runtime_error {
public:
    explicit unsupported_regime(const std::string& what) : std::runtime_error(what) {}
};

enum class Band { Below, At, Above };      // relative to a single cut point
enum class GammaBand { AboveOne, AtMostOne };

/// Classification of (alpha, beta, alpha+beta, gamma) against the cut points
/// {3} for alpha and {3, 4} for beta and alpha+beta. Inputs snap to a 1e-9
/// grid first so boundary branches are reachable from the CLI.
struct Regime {
    Band alpha3;
    Band beta3, beta4;
    Band ab3, ab4;
    GammaBand gamma1;
};

Regime classify_regime(double alpha, double beta, double gamma);

/// Leader-flow probabilities (three beta branches each).
struct Pr1Orders {
    OrderTerm pr1a, pr1c;
};
Pr1Orders pr1_orders(double beta);

/// Normal-flow probabilities from the (alpha, alpha+beta, gamma) tables.
/// Cells the tables leave undefined raise unsupported_regime.
struct Pr2Orders {
    OrderTerm pr2a, pr2c;
};
Pr2Orders pr2_orders(double alpha, double beta, double gamma);

/// Flow counts N_a, N_c; only the gamma > 1 family is tabulated.
struct FlowCountOrders {
    OrderTerm na, nc;
};
FlowCountOrders flow_count_orders(double alpha, double beta, double gamma);

/// Truncated hop moments E1', E2', and the combined E'.
struct HopOrders {
    OrderTerm e1, e2, e;
};
HopOrders truncated_hop_orders(double alpha, double beta, double gamma);

/// E[F] = ln(n) * E'[X].
OrderTerm ef_order(double alpha, double beta, double gamma);

enum class DominantClass { Leader, Normal, Mixed, Independent };

/// Ad hoc network throughput law at the dominant hop threshold. lambda_a is
/// symbolic in (n, L) with W_a carried as a unit coefficient; optimal_L is
/// empty when the throughput does not depend on L.
struct ThroughputLaw {
    int region = 0;  // 1..7
    OrderTerm lambda_a;
    std::optional<OrderTerm> optimal_L;
    DominantClass dominant_class = DominantClass::Mixed;

    /// optimal_L evaluated at n and clamped into [1, 1/r(n)];
    /// +inf when unconstrained.
    double optimal_L_value(double n) const;
};

ThroughputLaw adhoc_throughput_law(double alpha, double beta, double gamma, double n);

/// lambda_a * W_a + m W_c with m = r^-2(n).
OrderTerm total_throughput_order(const NetworkConfig& cfg);

}  // namespace uavnet
