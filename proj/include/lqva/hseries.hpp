#pragma once

#include "lqva/hscalar.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lqva {

// per-variable exponent bookkeeping.
//
// supp_lo/supp_hi: certificate that every true nonzero exponent of the full
//   (untruncated-in-x) object lies in [supp_lo, supp_hi]; nullopt = unbounded.
// auth_lo/auth_hi: interval on which stored coefficients are authoritative
//   (equal to the true coefficients); nullopt = unbounded. Outside the support
//   interval the true coefficient is zero, hence also known.
struct VarWindow {
    std::optional<int> supp_lo, supp_hi;
    std::optional<int> auth_lo, auth_hi;

    static VarWindow entire()
    {
        return VarWindow{}; // unbounded support, fully authoritative
    }
    static VarWindow exact_support(int lo, int hi)
    {
        VarWindow w;
        w.supp_lo = lo;
        w.supp_hi = hi;
        return w;
    }
};

// multivariate Laurent series with coefficients in Q[hbar]/(hbar^N)
class HSeries {
  public:
    using Exps = std::vector<int>;

    HSeries() : trunc_(1) {}
    HSeries(std::vector<std::string> vars, int trunc);

    static HSeries zero(std::vector<std::string> vars, int trunc);
    static HSeries constant(std::vector<std::string> vars, const HScalar& c);
    static HSeries monomial(std::vector<std::string> vars, const Exps& e, const HScalar& c);

    const std::vector<std::string>& vars() const { return vars_; }
    int trunc_order() const { return trunc_; }
    int var_index(const std::string& v) const;

    const std::map<Exps, HScalar>& terms() const { return terms_; }
    // coefficient lookup; *authoritative (when non-null) reports whether the
    // stored value is certified exact at this exponent tuple
    HScalar coeff(const Exps& e, bool* authoritative = nullptr) const;
    bool is_authoritative_at(const Exps& e) const;

    VarWindow& window(int vi) { return win_[static_cast<size_t>(vi)]; }
    const VarWindow& window(int vi) const { return win_[static_cast<size_t>(vi)]; }

    void set_term(const Exps& e, const HScalar& c);
    void add_term(const Exps& e, const HScalar& c);

    bool is_zero() const { return terms_.empty(); }

    HSeries operator+(const HSeries& o) const;
    HSeries operator-(const HSeries& o) const;
    HSeries operator-() const;
    HSeries operator*(const HSeries& o) const;
    HSeries scaled(const HScalar& c) const;
    HSeries scaled(const Rational& c) const;
    bool operator==(const HSeries& o) const;

    HSeries truncated(int n) const;

    // d/dvar
    HSeries derivative(const std::string& var) const;
    // embed into a larger ordered variable list (new vars get exponent 0)
    HSeries promoted(const std::vector<std::string>& vars) const;
    HSeries renamed(const std::vector<std::string>& vars) const;
    // keep only terms inside [lo,hi] for var; marks support accordingly
    HSeries restricted(const std::string& var, std::optional<int> lo, std::optional<int> hi) const;

    std::string str() const;

  private:
    void check_compatible(const HSeries& o) const;
    void prune_zeros();

    std::vector<std::string> vars_;
    int trunc_;
    std::map<Exps, HScalar> terms_;
    std::vector<VarWindow> win_;
};

// --- hseries operations ---------------------------------------------------

// substitution var -> var + m*hbar, hbar-adic binomial re-expansion
HSeries q_shift(int m, const HSeries& f, const std::string& var);
// q-number operator [m]_{q^{d/dvar}}: sum of q_shifts with exponents m-1-2k
HSeries q_number(int m, const HSeries& f, const std::string& var);

// split into (singular, regular) parts by sign of the var exponent
std::pair<HSeries, HSeries> sing_reg_split(const HSeries& f, const std::string& var);

// exp for series with vanishing hbar-degree-0 part
HSeries series_exp(const HSeries& f);
// log for series of the form 1 + g with g == 0 mod hbar
HSeries series_log(const HSeries& f);

// differential-operator series sum_k c_k d^k/dvar^k applied to f
HSeries apply_diffop(const std::vector<HScalar>& c, const HSeries& f, const std::string& var);

// G(d/dvar) f, with G(x) = (q^x - q^-x)/x = 2 hbar (1 + sum hbar^{2n} x^{2n}/(2n+1)!)
HSeries apply_G(const HSeries& f, const std::string& var);
// F(d/dvar) f, the two-sided inverse of G; requires f == 0 mod hbar,
// and the result's truncation order drops by one
HSeries apply_F(const HSeries& f, const std::string& var);
// z L(z d/dvar) f with L(x) = (e^x - 1)/x and z = c*hbar
HSeries apply_zL(const Rational& c, const HSeries& f, const std::string& var);

// coefficient lists for the operator series above, mod hbar^trunc
std::vector<HScalar> G_coeffs(int trunc);
std::vector<HScalar> zL_coeffs(const Rational& c, int trunc);

// evaluate a one-variable series at var = c*hbar; requires nonnegative support
HScalar eval_at_hbar(const HSeries& f, const std::string& var, const Rational& c);

// residue: coefficient of var^(-1), as a series in the remaining variables
HSeries residue(const HSeries& f, const std::string& var);

// log(1 + c*hbar/var) as an exact series in var^-1, mod hbar^trunc
HSeries log_one_plus_c_hbar_over(const std::string& var, const Rational& c, int trunc);

} // namespace lqva
