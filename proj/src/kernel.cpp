#include "lqva/kernel.hpp"

#include <algorithm>
#include <sstream>

namespace lqva {

RationalKernel RationalKernel::shifted(const std::string& var, const Rational& m) const
{
    RationalKernel r(vars_, pre_);
    for (auto [f, e] : factors_)
    {
        auto it = f.coeffs.find(var);
        if (it != f.coeffs.end())
            f.hbar += it->second * m;
        r.factor(f, e);
    }
    return r;
}

RationalKernel RationalKernel::inverted() const
{
    if (pre_ == 0)
        fail("kernel", "cannot invert zero prefactor");
    RationalKernel r(vars_, Rational(1) / pre_);
    for (const auto& [f, e] : factors_)
        r.factor(f, -e);
    return r;
}

RationalKernel RationalKernel::hbar_scaled(const Rational& s) const
{
    RationalKernel r(vars_, pre_);
    for (auto [f, e] : factors_)
    {
        f.hbar *= s;
        r.factor(f, e);
    }
    return r;
}

RationalKernel RationalKernel::cancelled() const
{
    // normalize each form so that its leading coefficient (first variable in
    // var_order with nonzero coefficient, else hbar) is +1, tracking units
    Rational pre = pre_;
    std::vector<std::pair<LinForm, int>> norm;
    for (auto [f, e] : factors_)
    {
        Rational lead = f.hbar;
        for (const auto& v : vars_)
            if (auto it = f.coeffs.find(v); it != f.coeffs.end() && it->second != 0)
            {
                lead = it->second;
                break;
            }
        if (lead == 0)
            fail("kernel", "zero linear form in kernel");
        for (auto& [v, c] : f.coeffs)
            c /= lead;
        f.hbar /= lead;
        for (int t = 0; t < (e > 0 ? e : -e); ++t)
            pre = (e > 0) ? pre * lead : pre / lead;
        norm.emplace_back(f, e);
    }
    // combine exponents of identical forms
    RationalKernel r(vars_, pre);
    std::vector<bool> used(norm.size(), false);
    for (size_t i = 0; i < norm.size(); ++i)
    {
        if (used[i])
            continue;
        int e = norm[i].second;
        for (size_t j = i + 1; j < norm.size(); ++j)
            if (!used[j] && norm[j].first == norm[i].first)
            {
                e += norm[j].second;
                used[j] = true;
            }
        r.factor(norm[i].first, e);
    }
    return r;
}

namespace {

// sparse expansion keyed by (var exponents..., hbar exponent)
using Key = std::vector<int>;
using Sparse = std::map<Key, Rational>;

Sparse sparse_one(size_t n)
{
    return {{Key(n + 1, 0), Rational(1)}};
}

Sparse sparse_mul(const Sparse& a, const Sparse& b, const std::vector<int>& sub_hi, int trunc,
                  const std::vector<bool>& is_sub)
{
    Sparse r;
    Key k;
    for (const auto& [ka, ca] : a)
        for (const auto& [kb, cb] : b)
        {
            k = ka;
            bool ok = true;
            for (size_t t = 0; t < k.size(); ++t)
            {
                k[t] += kb[t];
                if (t + 1 == k.size())
                {
                    if (k[t] >= trunc)
                        ok = false;
                }
                else if (is_sub[t] && k[t] > sub_hi[t])
                    ok = false;
            }
            if (!ok)
                continue;
            r[k] += ca * cb;
        }
    for (auto it = r.begin(); it != r.end();)
        it = (it->second == 0) ? r.erase(it) : std::next(it);
    return r;
}

} // namespace

HSeries RationalKernel::iota_expand(const std::vector<std::pair<int, int>>& window, int trunc) const
{
    size_t n = vars_.size();
    if (window.size() != n)
        fail("kernel", "window arity mismatch");

    bool any_negative = false;
    for (const auto& [f, e] : factors_)
        if (e < 0)
            any_negative = true;

    // expansion budget for subordinate variables and hbar
    std::vector<int> sub_hi(n, 0);
    std::vector<bool> is_sub(n, false);

    // dominant variable of a factor: earliest var with nonzero coefficient
    auto leading = [&](const LinForm& f) -> int {
        for (size_t i = 0; i < n; ++i)
            if (auto it = f.coeffs.find(vars_[i]); it != f.coeffs.end() && it->second != 0)
                return static_cast<int>(i);
        return -1; // pure hbar
    };

    for (const auto& [f, e] : factors_)
    {
        int li = leading(f);
        for (size_t i = 0; i < n; ++i)
            if (static_cast<int>(i) != li && f.coeffs.count(vars_[i]) && f.coeffs.at(vars_[i]) != 0)
                is_sub[i] = true;
    }
    for (size_t i = 0; i < n; ++i)
        sub_hi[i] = std::max(0, window[i].second);

    Sparse acc = sparse_one(n);
    for (const auto& [f, e] : factors_)
    {
        int li = leading(f);
        Sparse fx;
        if (li < 0)
        {
            if (e < 0)
                fail("kernel", "pure hbar factor to a negative power is not expandable");
            // (c hbar)^e
            Key k(n + 1, 0);
            k[n] = e;
            Rational c = 1;
            for (int t = 0; t < e; ++t)
                c *= f.hbar;
            if (k[n] < trunc && c != 0)
                fx[k] = c;
        }
        else
        {
            const Rational a = f.coeffs.at(vars_[static_cast<size_t>(li)]);
            // rest = f - a*u as a sparse linear element
            Sparse rest;
            for (size_t i = 0; i < n; ++i)
            {
                if (static_cast<int>(i) == li)
                    continue;
                auto it = f.coeffs.find(vars_[i]);
                if (it == f.coeffs.end() || it->second == 0)
                    continue;
                Key k(n + 1, 0);
                k[i] = 1;
                rest[k] = it->second;
            }
            if (f.hbar != 0)
            {
                Key k(n + 1, 0);
                k[n] = 1;
                rest[k] = f.hbar;
            }
            // (a u + R)^e = sum_k binom(e,k) a^(e-k) u^(e-k) R^k
            int budget = trunc - 1;
            for (size_t i = 0; i < n; ++i)
                if (is_sub[i] || static_cast<int>(i) != li)
                    budget += sub_hi[i];
            int kmax = (e >= 0) ? e : budget;
            Sparse Rk = sparse_one(n);
            Rational apow = 1; // a^(e-k) built as a^e / a^k
            for (int t = 0; t < (e >= 0 ? e : -e); ++t)
                apow = (e >= 0) ? apow * a : apow / a;
            for (int k = 0; k <= kmax; ++k)
            {
                if (k > 0)
                {
                    Rk = sparse_mul(Rk, rest, sub_hi, trunc, is_sub);
                    if (Rk.empty())
                        break;
                    apow /= a;
                }
                Rational b = binomial(e, k) * apow;
                if (b == 0)
                    continue;
                for (const auto& [kr, cr] : Rk)
                {
                    Key kk = kr;
                    kk[static_cast<size_t>(li)] += e - k;
                    fx[kk] += b * cr;
                }
            }
        }
        acc = sparse_mul(acc, fx, sub_hi, trunc, is_sub);
    }

    HSeries out(vars_, trunc);
    for (size_t i = 0; i < n; ++i)
    {
        VarWindow w;
        w.auth_lo = window[i].first;
        w.auth_hi = window[i].second;
        if (is_sub[i])
        {
            w.supp_lo = 0;
            if (!any_negative)
                w.supp_hi = degree();
        }
        else
        {
            w.supp_hi = degree();
            if (!any_negative)
                w.supp_lo = 0;
        }
        out.window(static_cast<int>(i)) = w;
    }
    for (const auto& [k, c] : acc)
    {
        bool inside = true;
        for (size_t i = 0; i < n; ++i)
            if (k[i] < window[i].first || k[i] > window[i].second)
                inside = false;
        if (!inside)
            continue;
        HSeries::Exps e(k.begin(), k.begin() + static_cast<long>(n));
        out.add_term(e, HScalar::hbar_power(c * pre_, k[n], trunc));
    }
    return out;
}

std::string RationalKernel::str() const
{
    std::ostringstream os;
    if (pre_ != 1)
        os << pre_.str() << " * ";
    for (const auto& [f, e] : factors_)
    {
        os << "(";
        bool first = true;
        for (const auto& [v, c] : f.coeffs)
        {
            if (c == 0)
                continue;
            if (!first && c > 0)
                os << "+";
            if (c == -1)
                os << "-";
            else if (c != 1)
                os << c.str() << "*";
            os << v;
            first = false;
        }
        if (f.hbar != 0)
        {
            if (f.hbar > 0 && !first)
                os << "+";
            if (f.hbar == -1)
                os << "-";
            else if (f.hbar != 1)
                os << f.hbar.str() << "*";
            os << "h";
        }
        os << ")";
        if (e != 1)
            os << "^" << e;
    }
    return os.str();
}

std::vector<RationalKernel> q_number_kernel(int m, const RationalKernel& k, const std::string& var)
{
    std::vector<RationalKernel> out;
    if (m == 0)
        return out;
    int a = m > 0 ? m : -m;
    for (int t = 0; t < a; ++t)
    {
        RationalKernel s = k.shifted(var, Rational(a - 1 - 2 * t));
        out.push_back(m > 0 ? s : RationalKernel(s.var_order(), -s.prefactor()));
        if (m < 0)
            for (const auto& [f, e] : s.factors())
                out.back().factor(f, e);
    }
    return out;
}

Rational delta_coeff(const Rational& c, int ew, int ez, int eh)
{
    // z^-1 delta((w+c hbar)/z): term (w + c hbar)^k z^(-k-1) with k = -ez-1
    if (eh < 0)
        return 0;
    long k = -static_cast<long>(ez) - 1;
    if (ew != k - eh)
        return 0;
    Rational ch = 1;
    for (int t = 0; t < eh; ++t)
        ch *= c;
    return binomial(k, eh) * ch;
}

HSeries delta_series(const Rational& c, const std::string& wvar, const std::string& zvar,
                     const std::vector<std::pair<int, int>>& window, int trunc)
{
    HSeries out({wvar, zvar}, trunc);
    for (int i = 0; i < 2; ++i)
    {
        VarWindow w;
        w.auth_lo = window[static_cast<size_t>(i)].first;
        w.auth_hi = window[static_cast<size_t>(i)].second;
        out.window(i) = w;
    }
    for (int ez = window[1].first; ez <= window[1].second; ++ez)
        for (int eh = 0; eh < trunc; ++eh)
        {
            int ew = -ez - 1 - eh;
            if (ew < window[0].first || ew > window[0].second)
                continue;
            Rational r = delta_coeff(c, ew, ez, eh);
            if (r != 0)
                out.add_term({ew, ez}, HScalar::hbar_power(r, eh, trunc));
        }
    return out;
}

} // namespace lqva
