#pragma once

#include <string>
#include <vector>

namespace uavnet {

/// One monomial c * n^a * (ln n)^b * L^c * (ln L)^d * (ln(1/(L r(n))))^e.
struct Monomial {
    double coeff = 1;
    double exp_n = 0;
    double exp_lnn = 0;
    double exp_L = 0;
    double exp_lnL = 0;
    double exp_lnInvLr = 0;
};

/// Symbolic order-of-growth expression: a sum of monomials, evaluated with
/// unit constants and r(n) = (ln n / n)^(1/3) substituted.
///
/// `flagged` marks forms transcribed from difference expressions whose sign
/// is not guaranteed at finite scale; consumers skip positivity checks and
/// cross-validation for them.
struct OrderTerm {
    std::vector<Monomial> terms;
    bool flagged = false;

    /// Evaluation at concrete (n, L); n >= 3, L >= 1. The ln(1/(L r(n)))
    /// factor is clamped below at ln 2; *clamped reports whether this fired.
    double eval(double n, double L, bool* clamped = nullptr) const;

    /// Canonical rendering, e.g. {1,1,0,0,0,0} -> "n".
    std::string str() const;

    bool empty() const { return terms.empty(); }

    OrderTerm& add(Monomial m);
    OrderTerm& add(const OrderTerm& other);
    /// Multiplies every monomial by m (exponents add, coefficients multiply).
    OrderTerm times(const Monomial& m) const;

    static OrderTerm zero() { return {}; }
    static OrderTerm constant(double c);
    /// r(n)^p = n^(-p/3) (ln n)^(p/3).
    static Monomial r_pow(double p);
    static Monomial n_pow(double p);
    static Monomial L_pow(double p);
    static Monomial lnL();
    static Monomial lnn_pow(double p);
    /// log base r^-1(n) of L, materialized as ln L / ln n.
    static Monomial log_rinv_L();
    static Monomial ln_inv_Lr();
};

double r_of_n(double n, double c_r = 1.0);

}  // namespace uavnet
