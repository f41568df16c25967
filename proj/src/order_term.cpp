#include "uavnet/order_term.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace uavnet {

double r_of_n(double n, double c_r) { return c_r * std::cbrt(std::log(n) / n); }

OrderTerm& OrderTerm::add(Monomial m) {
    terms.push_back(m);
    return *this;
}

OrderTerm& OrderTerm::add(const OrderTerm& other) {
    terms.insert(terms.end(), other.terms.begin(), other.terms.end());
    flagged = flagged || other.flagged;
    return *this;
}

OrderTerm OrderTerm::times(const Monomial& m) const {
    OrderTerm out;
    out.flagged = flagged;
    out.terms.reserve(terms.size());
    for (const auto& t : terms) {
        Monomial r = t;
        r.coeff *= m.coeff;
        r.exp_n += m.exp_n;
        r.exp_lnn += m.exp_lnn;
        r.exp_L += m.exp_L;
        r.exp_lnL += m.exp_lnL;
        r.exp_lnInvLr += m.exp_lnInvLr;
        out.terms.push_back(r);
    }
    return out;
}

OrderTerm OrderTerm::constant(double c) {
    OrderTerm t;
    t.terms.push_back({c, 0, 0, 0, 0, 0});
    return t;
}

Monomial OrderTerm::r_pow(double p) { return {1.0, -p / 3.0, p / 3.0, 0, 0, 0}; }
Monomial OrderTerm::n_pow(double p) { return {1.0, p, 0, 0, 0, 0}; }
Monomial OrderTerm::L_pow(double p) { return {1.0, 0, 0, p, 0, 0}; }
Monomial OrderTerm::lnL() { return {1.0, 0, 0, 0, 1, 0}; }
Monomial OrderTerm::lnn_pow(double p) { return {1.0, 0, p, 0, 0, 0}; }
Monomial OrderTerm::log_rinv_L() { return {1.0, 0, -1, 0, 1, 0}; }
Monomial OrderTerm::ln_inv_Lr() { return {1.0, 0, 0, 0, 0, 1}; }

double OrderTerm::eval(double n, double L, bool* clamped) const {
    if (n < 3) throw std::invalid_argument("OrderTerm::eval: n must be >= 3");
    if (L < 1) throw std::invalid_argument("OrderTerm::eval: L must be >= 1");
    const double ln_n = std::log(n);
    const double ln_ln_n = std::log(ln_n);
    const double ln_L = std::log(L);
    double inv_Lr = std::log(1.0 / (L * r_of_n(n)));
    bool did_clamp = false;
    if (inv_Lr < std::log(2.0)) {
        inv_Lr = std::log(2.0);
        did_clamp = true;
    }
    if (clamped) *clamped = did_clamp;

    double total = 0;
    for (const auto& t : terms) {
        double lg = t.exp_n * ln_n + t.exp_lnn * ln_ln_n;
        if (t.exp_L != 0) lg += t.exp_L * ln_L;
        double val = t.coeff * std::exp(lg);
        // ln L factors multiply outside the exponential so ln 1 = 0 is exact
        if (t.exp_lnL != 0) val *= std::pow(ln_L, t.exp_lnL);
        if (t.exp_lnInvLr != 0) val *= std::pow(inv_Lr, t.exp_lnInvLr);
        total += val;
    }
    return total;
}

namespace {

void format_exp(std::string& out, const char* name, double e) {
    if (e == 0) return;
    if (!out.empty()) out += '*';
    out += name;
    if (e != 1) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "^%g", e);
        out += buf;
    }
}

}  // namespace

std::string OrderTerm::str() const {
    if (terms.empty()) return "0";
    std::string out;
    for (size_t i = 0; i < terms.size(); ++i) {
        const auto& t = terms[i];
        if (i) out += " + ";
        std::string factors;
        format_exp(factors, "n", t.exp_n);
        format_exp(factors, "lnn", t.exp_lnn);
        format_exp(factors, "L", t.exp_L);
        format_exp(factors, "lnL", t.exp_lnL);
        format_exp(factors, "lnInvLr", t.exp_lnInvLr);
        if (factors.empty()) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%g", t.coeff);
            out += buf;
        } else {
            if (t.coeff != 1) {
                char buf[32];
                std::snprintf(buf, sizeof buf, "%g*", t.coeff);
                out += buf;
            }
            out += factors;
        }
    }
    if (flagged) out += " [flagged]";
    return out;
}

}  // namespace uavnet
