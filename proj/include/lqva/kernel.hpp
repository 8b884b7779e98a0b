#pragma once

#include "lqva/hseries.hpp"

#include <map>
#include <string>
#include <vector>

namespace lqva {

// linear form  sum_i a_i * x_i + c * hbar
struct LinForm {
    std::map<std::string, Rational> coeffs;
    Rational hbar = 0;

    bool operator==(const LinForm& o) const = default;
    static LinForm diff(const std::string& u, const std::string& v, const Rational& h)
    {
        LinForm f;
        f.coeffs[u] = 1;
        f.coeffs[v] = -1;
        f.hbar = h;
        return f;
    }
    static LinForm single(const std::string& u, const Rational& h)
    {
        LinForm f;
        f.coeffs[u] = 1;
        f.hbar = h;
        return f;
    }
};

// product of integer powers of linear forms, with a declared iota-expansion
// region: the first variable of var_order dominates, then the second, ...
class RationalKernel {
  public:
    explicit RationalKernel(std::vector<std::string> var_order, Rational prefactor = 1)
        : vars_(std::move(var_order)), pre_(std::move(prefactor))
    {
    }

    RationalKernel& factor(const LinForm& f, int exponent)
    {
        if (exponent != 0)
            factors_.emplace_back(f, exponent);
        return *this;
    }

    const std::vector<std::string>& var_order() const { return vars_; }
    const std::vector<std::pair<LinForm, int>>& factors() const { return factors_; }
    const Rational& prefactor() const { return pre_; }

    // total homogeneous degree in (vars, hbar)
    int degree() const
    {
        int d = 0;
        for (const auto& [f, e] : factors_)
            d += e;
        return d;
    }

    // substitute var -> var + m*hbar in every factor
    RationalKernel shifted(const std::string& var, const Rational& m) const;
    // swap numerator and denominator
    RationalKernel inverted() const;
    // multiply the hbar coefficient of every factor (perturbation hook)
    RationalKernel hbar_scaled(const Rational& s) const;
    // cancel identical factors between numerator and denominator after
    // normalizing each form's leading coefficient to +1
    RationalKernel cancelled() const;

    // expand into the region where earlier variables of var_order dominate,
    // hbar-linear shifts expanded hbar-adically; exact on the given window
    HSeries iota_expand(const std::vector<std::pair<int, int>>& window, int trunc) const;

    std::string str() const;

  private:
    std::vector<std::string> vars_;
    Rational pre_;
    std::vector<std::pair<LinForm, int>> factors_;
};

// [m]_{q^{d/dvar}} applied to a kernel: the sum of symbolic shifts
// var -> var + (m-1-2k) hbar, k = 0..|m|-1, with sign(m)
std::vector<RationalKernel> q_number_kernel(int m, const RationalKernel& k, const std::string& var);

// z^-1 delta((w + c*hbar)/z) = sum_n (w + c*hbar)^n z^(-n-1);
// exact coefficient of w^ew z^ez hbar^eh
Rational delta_coeff(const Rational& c, int ew, int ez, int eh);

// materialization of the delta distribution on a finite window (w then z)
HSeries delta_series(const Rational& c, const std::string& wvar, const std::string& zvar,
                     const std::vector<std::pair<int, int>>& window, int trunc);

} // namespace lqva
