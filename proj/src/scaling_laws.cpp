#include "uavnet/scaling_laws.hpp"

#include <cmath>
#include <limits>

#include "uavnet/order_term.hpp"

namespace uavnet {

namespace {

// Boundary branches (alpha = 3, beta = 3, ...) are distinct cases in the
// closed forms; user input snaps to a 1e-9 grid so they are reachable.
double snap(double x) {
    double r = std::round(x * 1e9) / 1e9;
    return r == 0.0 ? 0.0 : r;
}

Band band_of(double x, double cut) {
    double s = snap(x);
    if (s < cut) return Band::Below;
    if (s > cut) return Band::Above;
    return Band::At;
}

using OT = OrderTerm;
using M = Monomial;

M mul(M a, const M& b) {
    a.coeff *= b.coeff;
    a.exp_n += b.exp_n;
    a.exp_lnn += b.exp_lnn;
    a.exp_L += b.exp_L;
    a.exp_lnL += b.exp_lnL;
    a.exp_lnInvLr += b.exp_lnInvLr;
    return a;
}

M neg(M a) {
    a.coeff = -a.coeff;
    return a;
}

M gamma_factor(double gamma) {
    // n^(gamma-1) multiplier for the 0 <= gamma <= 1 family, identity above.
    if (snap(gamma) > 1.0) return {1, 0, 0, 0, 0, 0};
    return OT::n_pow(gamma - 1.0);
}

}  // namespace

Regime classify_regime(double alpha, double beta, double gamma) {
    if (alpha < 0 || beta < 0 || gamma < 0)
        throw unsupported_regime("regime: exponents must be >= 0");
    Regime r;
    r.alpha3 = band_of(alpha, 3.0);
    r.beta3 = band_of(beta, 3.0);
    r.beta4 = band_of(beta, 4.0);
    r.ab3 = band_of(alpha + beta, 3.0);
    r.ab4 = band_of(alpha + beta, 4.0);
    r.gamma1 = snap(gamma) > 1.0 ? GammaBand::AboveOne : GammaBand::AtMostOne;
    return r;
}

Pr1Orders pr1_orders(double beta) {
    if (beta < 0) throw unsupported_regime("pr1_orders: beta must be >= 0");
    Band b = band_of(beta, 3.0);
    Pr1Orders out;
    if (b == Band::Below) {
        out.pr1a.add(mul(OT::r_pow(3), OT::L_pow(3.0 - beta)));
        // nonnegative on the whole domain L <= 1/r(n)
        out.pr1c.add(OT::r_pow(beta)).add(neg(mul(OT::r_pow(3), OT::L_pow(3.0 - beta))));
    } else if (b == Band::At) {
        out.pr1a.add(mul(OT::r_pow(3), OT::lnL()));
        out.pr1c.add(mul(OT::r_pow(3), OT::ln_inv_Lr()));
    } else {
        out.pr1a.add(OT::r_pow(3));
        out.pr1c.add(OT::r_pow(3));
    }
    return out;
}

Pr2Orders pr2_orders(double alpha, double beta, double gamma) {
    Regime r = classify_regime(alpha, beta, gamma);
    const M g = gamma_factor(gamma);
    Pr2Orders out;

    auto undefined = [&]() -> Pr2Orders& {
        throw unsupported_regime("pr2_orders: table cell undefined for alpha=" +
                                 std::to_string(alpha) + ", beta=" + std::to_string(beta));
    };

    if (r.ab3 == Band::Below) {
        if (r.alpha3 != Band::Below) undefined();
        out.pr2a.add(mul(mul(OT::r_pow(3.0 - alpha), OT::L_pow(3.0 - alpha - beta)), g));
        out.pr2c.add(mul(OT::r_pow(beta), g))
            .add(neg(mul(mul(OT::r_pow(3.0 - alpha), OT::L_pow(3.0 - alpha - beta)), g)));
    } else if (r.ab3 == Band::At) {
        if (r.alpha3 == Band::Below) {
            out.pr2a.add(mul(mul(OT::r_pow(3.0 - alpha), OT::lnL()), g));
            out.pr2c.add(mul(mul(OT::r_pow(3.0 - alpha), OT::ln_inv_Lr()), g));
        } else if (r.alpha3 == Band::At) {
            out.pr2a.add(mul(OT::log_rinv_L(), g));
            out.pr2c.add(g).add(neg(mul(OT::log_rinv_L(), g)));
            out.pr2c.flagged = true;  // 1 - log_{1/r} L can cross zero at desk scale
        } else {
            undefined();
        }
    } else {
        if (r.alpha3 == Band::Below) {
            out.pr2a.add(mul(OT::r_pow(3.0 - alpha), g));
            out.pr2c.add(mul(OT::r_pow(beta), g))
                .add(neg(mul(mul(OT::r_pow(3.0 - alpha), OT::L_pow(3.0 - alpha - beta)), g)));
            out.pr2c.flagged = true;
        } else if (r.alpha3 == Band::At) {
            out.pr2a.add(mul(OT::lnn_pow(-1), g));
            // transcribed difference form; sign not meaningful at finite n
            out.pr2c.add(mul(mul(OT::lnn_pow(-1), OT::r_pow(beta)), g))
                .add(neg(mul(mul(OT::lnn_pow(-1), OT::L_pow(beta)), g)));
            out.pr2c.flagged = true;
        } else {
            out.pr2a.add(g);
            out.pr2c.add(mul(OT::r_pow(alpha + beta - 3.0), g))
                .add(neg(mul(OT::L_pow(3.0 - alpha - beta), g)));
            out.pr2c.flagged = true;
        }
    }
    return out;
}

FlowCountOrders flow_count_orders(double alpha, double beta, double gamma) {
    if (snap(gamma) <= 1.0)
        throw unsupported_regime("flow_count_orders: closed forms cover only gamma > 1");
    Regime r = classify_regime(alpha, beta, gamma);
    const M n1 = OT::n_pow(1);
    FlowCountOrders out;

    // N_a rows
    if (r.alpha3 == Band::Below) {
        if (r.ab3 == Band::Below) {
            out.na.add(mul(n1, mul(OT::r_pow(3), OT::L_pow(3.0 - beta))))
                .add(mul(n1, mul(OT::r_pow(3.0 - alpha), OT::L_pow(3.0 - alpha - beta))));
        } else if (r.ab3 == Band::At) {
            out.na.add(mul(n1, mul(OT::r_pow(3), OT::L_pow(3.0 - beta))))
                .add(mul(n1, mul(OT::r_pow(3.0 - alpha), OT::lnL())));
        } else if (r.beta3 == Band::Below) {
            out.na.add(mul(n1, mul(OT::r_pow(3), OT::L_pow(3.0 - beta))))
                .add(mul(n1, OT::r_pow(3.0 - alpha)));
        } else if (r.beta3 == Band::At) {
            out.na.add(mul(n1, mul(OT::r_pow(3), OT::lnL()))).add(mul(n1, OT::r_pow(3.0 - alpha)));
        } else {
            out.na.add(mul(n1, OT::r_pow(3.0 - alpha)));
        }
    } else if (r.alpha3 == Band::At) {
        if (r.beta3 == Band::Below && snap(beta) == 0.0) {
            out.na.add(mul(n1, mul(OT::r_pow(3), OT::L_pow(3)))).add(mul(n1, OT::log_rinv_L()));
        } else if (r.beta3 == Band::Below) {
            out.na.add(mul(n1, mul(OT::r_pow(3), OT::L_pow(3.0 - beta))))
                .add(mul(n1, OT::lnn_pow(-1)));
        } else if (r.beta3 == Band::At) {
            out.na.add(mul(n1, mul(OT::r_pow(3), OT::lnL()))).add(mul(n1, OT::lnn_pow(-1)));
        } else {
            out.na.add(mul(n1, OT::lnn_pow(-1)));
        }
    } else {
        out.na.add(n1);
    }

    // N_c rows, transcribed with their printed difference structure
    auto flag = [&](bool f) { out.nc.flagged = out.nc.flagged || f; };
    if (r.alpha3 == Band::Below) {
        if (r.beta3 == Band::Below && r.ab3 != Band::At) {
            out.nc.add(mul(M{2, 0, 0, 0, 0, 0}, mul(n1, OT::r_pow(beta))))
                .add(neg(mul(n1, mul(OT::r_pow(3), OT::L_pow(3.0 - beta)))))
                .add(neg(mul(n1, mul(OT::r_pow(3.0 - alpha), OT::L_pow(3.0 - alpha - beta)))));
        } else if (r.ab3 == Band::At) {
            out.nc.add(mul(n1, OT::r_pow(beta)))
                .add(neg(mul(n1, mul(OT::r_pow(3), OT::L_pow(3.0 - beta)))))
                .add(mul(n1, mul(OT::r_pow(3.0 - alpha), OT::ln_inv_Lr())));
        } else if (r.beta3 == Band::At) {
            out.nc.add(mul(n1, mul(OT::r_pow(3), OT::ln_inv_Lr())))
                .add(mul(n1, OT::r_pow(beta)))
                .add(neg(mul(n1, mul(OT::r_pow(3.0 - alpha), OT::L_pow(3.0 - alpha - beta)))));
        } else {
            out.nc.add(mul(n1, OT::r_pow(3)))
                .add(mul(n1, OT::r_pow(beta)))
                .add(neg(mul(n1, mul(OT::r_pow(3.0 - alpha), OT::L_pow(3.0 - alpha - beta)))));
            flag(true);
        }
    } else if (r.alpha3 == Band::At) {
        if (snap(beta) == 0.0) {
            out.nc.add(mul(M{2, 0, 0, 0, 0, 0}, n1))
                .add(neg(mul(n1, mul(OT::r_pow(3), OT::L_pow(3)))))
                .add(neg(mul(n1, OT::log_rinv_L())));
        } else if (r.beta3 == Band::Below) {
            out.nc.add(mul(n1, OT::r_pow(beta)))
                .add(neg(mul(n1, mul(OT::r_pow(3), OT::L_pow(3.0 - beta)))))
                .add(mul(n1, mul(OT::ln_inv_Lr(), OT::r_pow(beta))))
                .add(neg(mul(n1, mul(OT::ln_inv_Lr(), OT::L_pow(-beta)))));
            flag(true);
        } else if (r.beta3 == Band::At) {
            out.nc.add(mul(n1, mul(OT::ln_inv_Lr(), OT::r_pow(3))))
                .add(mul(n1, mul(OT::ln_inv_Lr(), OT::r_pow(beta))))
                .add(neg(mul(n1, mul(OT::ln_inv_Lr(), OT::L_pow(-beta)))));
            flag(true);
        } else {
            out.nc.add(mul(n1, OT::r_pow(3)))
                .add(mul(n1, mul(OT::ln_inv_Lr(), OT::r_pow(beta))))
                .add(neg(mul(n1, mul(OT::ln_inv_Lr(), OT::L_pow(-beta)))));
            flag(true);
        }
    } else {
        if (r.beta3 == Band::Below) {
            out.nc.add(mul(n1, OT::r_pow(beta)))
                .add(mul(n1, OT::r_pow(alpha + beta - 3.0)))
                .add(neg(mul(n1, mul(OT::r_pow(3), OT::L_pow(3.0 - beta)))))
                .add(neg(mul(n1, OT::L_pow(3.0 - alpha - beta))));
            flag(true);
        } else if (r.beta3 == Band::At) {
            // printed as n r^3 ln(1/(L r)) + n r^alpha - n r^-alpha
            out.nc.add(mul(n1, mul(OT::r_pow(3), OT::ln_inv_Lr())))
                .add(mul(n1, OT::r_pow(alpha)))
                .add(neg(mul(n1, OT::r_pow(-alpha))));
            flag(true);
        } else {
            out.nc.add(mul(n1, OT::r_pow(3)))
                .add(mul(n1, OT::r_pow(alpha + beta - 3.0)))
                .add(neg(mul(n1, OT::L_pow(3.0 - alpha - beta))));
            flag(true);
        }
    }
    return out;
}

HopOrders truncated_hop_orders(double alpha, double beta, double gamma) {
    Regime r = classify_regime(alpha, beta, gamma);
    HopOrders out;

    // Leader part: beta branches around 4.
    if (r.beta4 == Band::Below) out.e1.add(mul(OT::r_pow(3), OT::L_pow(4.0 - beta)));
    else if (r.beta4 == Band::At) out.e1.add(mul(OT::r_pow(3), OT::lnL()));
    else out.e1.add(OT::r_pow(3));

    // Normal part, gamma > 1 family; the gamma <= 1 family gains n^(gamma-1).
    const M g = gamma_factor(gamma);
    if (r.alpha3 == Band::Below) {
        if (r.ab4 == Band::Below)
            out.e2.add(mul(mul(OT::r_pow(3.0 - alpha), OT::L_pow(4.0 - alpha - beta)), g));
        else if (r.ab4 == Band::At)
            out.e2.add(mul(mul(OT::r_pow(3.0 - alpha), OT::lnL()), g));
        else
            out.e2.add(mul(OT::r_pow(3.0 - alpha), g));
    } else if (r.alpha3 == Band::At) {
        if (r.ab4 == Band::Below)
            out.e2.add(mul(mul(OT::lnn_pow(-1), OT::L_pow(1.0 - beta)), g));
        else if (r.ab4 == Band::At)
            out.e2.add(mul(OT::log_rinv_L(), g));
        else
            out.e2.add(mul(OT::lnn_pow(-1), g));
    } else {
        if (r.ab4 == Band::Below) out.e2.add(mul(OT::L_pow(4.0 - alpha - beta), g));
        else if (r.ab4 == Band::At) out.e2.add(mul(OT::lnL(), g));
        else out.e2.add(mul(M{1, 0, 0, 0, 0, 0}, g));
    }

    // Combined form: the tabulated 15 rows for gamma > 1, otherwise the
    // literal sum of the two parts.
    if (r.gamma1 == GammaBand::AboveOne) {
        OT e;
        if (r.alpha3 == Band::Below) {
            if (r.beta4 == Band::Below && r.ab4 == Band::Below)
                e.add(mul(OT::r_pow(3), OT::L_pow(4.0 - beta)))
                    .add(mul(OT::r_pow(3.0 - alpha), OT::L_pow(4.0 - alpha - beta)));
            else if (r.ab4 == Band::At)
                e.add(mul(OT::r_pow(3), OT::L_pow(4.0 - beta)))
                    .add(mul(OT::r_pow(3.0 - alpha), OT::lnL()));
            else if (r.beta4 == Band::Below && r.ab4 == Band::Above)
                e.add(mul(OT::r_pow(3), OT::L_pow(4.0 - beta))).add(OT::r_pow(3.0 - alpha));
            else if (r.beta4 == Band::At)
                e.add(mul(OT::r_pow(3), OT::lnL())).add(OT::r_pow(3.0 - alpha));
            else
                e.add(OT::r_pow(3.0 - alpha));
        } else if (r.alpha3 == Band::At) {
            Band b1 = band_of(beta, 1.0);
            if (b1 == Band::Below)
                e.add(mul(OT::r_pow(3), OT::L_pow(4.0 - beta)))
                    .add(mul(OT::lnn_pow(-1), OT::L_pow(1.0 - beta)));
            else if (b1 == Band::At)
                e.add(mul(OT::r_pow(3), OT::L_pow(3))).add(OT::log_rinv_L());
            else if (r.beta4 == Band::Below)
                e.add(mul(OT::r_pow(3), OT::L_pow(4.0 - beta))).add(OT::lnn_pow(-1));
            else if (r.beta4 == Band::At)
                e.add(mul(OT::r_pow(3), OT::lnL())).add(OT::log_rinv_L());
            else
                e.add(OT::lnn_pow(-1));
        } else {
            if (r.beta4 == Band::Below && r.ab4 == Band::Below)
                e.add(mul(OT::r_pow(3), OT::L_pow(4.0 - beta)))
                    .add(OT::L_pow(4.0 - alpha - beta));
            else if (r.beta4 == Band::Below && r.ab4 == Band::At)
                e.add(mul(OT::r_pow(3), OT::L_pow(4.0 - beta))).add(OT::lnL());
            else if (r.beta4 == Band::Below && r.ab4 == Band::Above)
                e.add(mul(OT::r_pow(3), OT::L_pow(4.0 - beta)));
            else if (r.beta4 == Band::At)
                e.add(mul(OT::r_pow(3), OT::lnL()));
            else
                e.add(OT::r_pow(3));
        }
        out.e = e;
    } else {
        out.e.add(out.e1).add(out.e2);
    }
    return out;
}

OrderTerm ef_order(double alpha, double beta, double gamma) {
    return truncated_hop_orders(alpha, beta, gamma).e.times(OT::lnn_pow(1));
}

double ThroughputLaw::optimal_L_value(double n) const {
    if (!optimal_L) return std::numeric_limits<double>::infinity();
    double v = optimal_L->eval(n, 1.0);
    double hi = 1.0 / r_of_n(n);
    if (v < 1.0) v = 1.0;
    if (v > hi) v = hi;
    return v;
}

ThroughputLaw adhoc_throughput_law(double alpha, double beta, double gamma, double n) {
    if (n < 3) throw std::invalid_argument("adhoc_throughput_law: n must be >= 3");
    if (snap(gamma) <= 1.0)
        throw unsupported_regime("adhoc_throughput_law: requires gamma > 1");
    Regime r = classify_regime(alpha, beta, gamma);
    ThroughputLaw law;

    // L* = (ln^-1(n) r^(alpha-3)(n))^(1/(4-alpha-beta))
    auto threshold_L = [&](double expo_denom) {
        OT t;
        t.add(mul(OT::lnn_pow(-1.0 / expo_denom), OT::r_pow((alpha - 3.0) / expo_denom)));
        return t;
    };

    const bool a_lt3 = r.alpha3 == Band::Below;
    const bool a_gt3 = r.alpha3 == Band::Above;
    const bool b_lt3 = r.beta3 == Band::Below;
    const bool b_gt3 = r.beta3 == Band::Above;
    const bool b_lt4 = r.beta4 == Band::Below;
    const bool b_gt4 = r.beta4 == Band::Above;

    if (a_lt3 && b_lt3 && r.ab3 == Band::Below) {
        law.region = 1;
        law.lambda_a.add(mul(OT::lnn_pow(1), OT::L_pow(3.0 - beta)))
            .add(mul(mul(OT::n_pow(alpha / 3.0), OT::lnn_pow(1.0 - alpha / 3.0)),
                     OT::L_pow(3.0 - alpha - beta)));
        law.optimal_L = threshold_L(4.0 - alpha - beta);
        law.dominant_class = DominantClass::Normal;
    } else if (a_lt3 && b_lt3 && r.ab3 == Band::Above && r.ab4 == Band::Below) {
        law.region = 2;
        law.lambda_a.add(mul(OT::lnn_pow(1), OT::L_pow(3.0 - beta)))
            .add(mul(OT::n_pow(alpha / 3.0), OT::lnn_pow(1.0 - alpha / 3.0)));
        law.optimal_L = threshold_L(4.0 - alpha - beta);
        law.dominant_class = DominantClass::Normal;
    } else if (a_lt3 && b_lt3 && r.ab4 == Band::Above) {
        law.region = 3;
        law.lambda_a.add(mul(OT::lnn_pow(1), OT::L_pow(3.0 - beta)))
            .add(mul(OT::n_pow(alpha / 3.0), OT::lnn_pow(1.0 - alpha / 3.0)));
        law.optimal_L = threshold_L(4.0 - alpha - beta);
        law.dominant_class = DominantClass::Mixed;
    } else if (a_lt3 && b_gt3 && r.ab3 == Band::Above && r.ab4 == Band::Below) {
        law.region = 4;
        law.lambda_a.add(mul(OT::n_pow(alpha / 3.0), OT::lnn_pow(1.0 - alpha / 3.0)));
        law.optimal_L = threshold_L(4.0 - alpha - beta);
        law.dominant_class = DominantClass::Normal;
    } else if (a_gt3 && b_lt4 && r.ab3 == Band::Above && r.ab4 == Band::Below) {
        law.region = 5;
        law.lambda_a.add(OT::n_pow(1));
        OT t;
        t.add(OT::lnn_pow(-1.0 / (4.0 - alpha - beta)));
        law.optimal_L = t;
        law.dominant_class = DominantClass::Mixed;
    } else if (a_gt3 && b_lt4 && r.ab4 == Band::Above) {
        law.region = 6;
        law.lambda_a.add(OT::n_pow(1));
        OT t;
        t.add(mul(OT::lnn_pow(-1.0 / (4.0 - beta)), OT::r_pow(-3.0 / (4.0 - beta))));
        law.optimal_L = t;
        law.dominant_class = DominantClass::Leader;
    } else if (a_gt3 && b_gt4) {
        law.region = 7;
        law.lambda_a.add(OT::n_pow(1));
        law.optimal_L.reset();
        law.dominant_class = DominantClass::Independent;
    } else {
        throw unsupported_regime("adhoc_throughput_law: (alpha=" + std::to_string(alpha) +
                                 ", beta=" + std::to_string(beta) +
                                 ") falls outside the seven tabulated regions");
    }
    return law;
}

OrderTerm total_throughput_order(const NetworkConfig& cfg) {
    ThroughputLaw law =
        adhoc_throughput_law(cfg.alpha, cfg.beta, cfg.gamma, static_cast<double>(cfg.n));
    OrderTerm total;
    if (cfg.W_a > 0) total.add(law.lambda_a.times(M{cfg.W_a, 0, 0, 0, 0, 0}));
    // lambda_c = m W_c with m = r^-2(n)
    if (cfg.W_c > 0) total.add(mul(M{cfg.W_c, 0, 0, 0, 0, 0}, OrderTerm::r_pow(-2)));
    return total;
}

}  // namespace uavnet
