#include "lqva/hseries.hpp"

#include <algorithm>
#include <sstream>

namespace lqva {

// ---- HScalar printing ------------------------------------------------------

std::string HScalar::str() const
{
    if (is_zero())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (int k = 0; k < trunc_; ++k)
    {
        const Rational& r = c_[static_cast<size_t>(k)];
        if (r == 0)
            continue;
        if (!first)
            os << (r > 0 ? " + " : " - ");
        else if (r < 0)
            os << "-";
        Rational a = r > 0 ? r : Rational(-r);
        if (a != 1 || k == 0)
            os << a.str();
        if (k > 0)
        {
            if (a != 1)
                os << "*";
            os << "h";
            if (k > 1)
                os << "^" << k;
        }
        first = false;
    }
    return os.str();
}

// ---- window arithmetic helpers ---------------------------------------------

namespace {

using OInt = std::optional<int>;

OInt add_lo(OInt a, OInt b) // nullopt = -inf
{
    if (!a || !b)
        return std::nullopt;
    return *a + *b;
}
OInt add_hi(OInt a, OInt b) // nullopt = +inf
{
    if (!a || !b)
        return std::nullopt;
    return *a + *b;
}

// collapse "authoritative interval + known-zero outside support" into a single
// known interval [klo, khi] (nullopt = unbounded on that side)
OInt known_lo(const VarWindow& w)
{
    if (!w.auth_lo)
        return std::nullopt;
    if (w.supp_lo && *w.auth_lo <= *w.supp_lo)
        return std::nullopt;
    return w.auth_lo;
}
OInt known_hi(const VarWindow& w)
{
    if (!w.auth_hi)
        return std::nullopt;
    if (w.supp_hi && *w.auth_hi >= *w.supp_hi)
        return std::nullopt;
    return w.auth_hi;
}

VarWindow sum_window(const VarWindow& a, const VarWindow& b)
{
    VarWindow r;
    r.supp_lo = (a.supp_lo && b.supp_lo) ? OInt(std::min(*a.supp_lo, *b.supp_lo)) : std::nullopt;
    r.supp_hi = (a.supp_hi && b.supp_hi) ? OInt(std::max(*a.supp_hi, *b.supp_hi)) : std::nullopt;
    OInt klo_a = known_lo(a), klo_b = known_lo(b);
    OInt khi_a = known_hi(a), khi_b = known_hi(b);
    r.auth_lo = (!klo_a) ? klo_b : (!klo_b ? klo_a : OInt(std::max(*klo_a, *klo_b)));
    r.auth_hi = (!khi_a) ? khi_b : (!khi_b ? khi_a : OInt(std::min(*khi_a, *khi_b)));
    return r;
}

VarWindow product_window(const VarWindow& a, const VarWindow& b)
{
    VarWindow r;
    r.supp_lo = add_lo(a.supp_lo, b.supp_lo);
    r.supp_hi = add_hi(a.supp_hi, b.supp_hi);
    // upper side: a coefficient at e is exact when every contributing split
    // stays inside both known regions
    OInt hi;
    if (OInt k = known_hi(a); k)
    {
        if (!b.supp_lo)
            fail("window", "product against unbounded-below support loses all authority");
        hi = *k + *b.supp_lo;
    }
    if (OInt k = known_hi(b); k)
    {
        if (!a.supp_lo)
            fail("window", "product against unbounded-below support loses all authority");
        int v = *k + *a.supp_lo;
        hi = hi ? OInt(std::min(*hi, v)) : OInt(v);
    }
    OInt lo;
    if (OInt k = known_lo(a); k)
    {
        if (!b.supp_hi)
            fail("window", "product against unbounded-above support loses all authority");
        lo = *k + *b.supp_hi;
    }
    if (OInt k = known_lo(b); k)
    {
        if (!a.supp_hi)
            fail("window", "product against unbounded-above support loses all authority");
        int v = *k + *a.supp_hi;
        lo = lo ? OInt(std::max(*lo, v)) : OInt(v);
    }
    r.auth_hi = hi;
    r.auth_lo = lo;
    return r;
}

bool window_authoritative(const VarWindow& w, int e)
{
    if (w.supp_lo && e < *w.supp_lo)
        return true;
    if (w.supp_hi && e > *w.supp_hi)
        return true;
    if (w.auth_lo && e < *w.auth_lo)
        return false;
    if (w.auth_hi && e > *w.auth_hi)
        return false;
    return true;
}

} // namespace

// ---- HSeries ----------------------------------------------------------------

HSeries::HSeries(std::vector<std::string> vars, int trunc)
    : vars_(std::move(vars)), trunc_(trunc), win_(vars_.size(), VarWindow::entire())
{
    if (trunc < 1)
        fail("trunc", "truncation order must be >= 1");
}

HSeries HSeries::zero(std::vector<std::string> vars, int trunc)
{
    return HSeries(std::move(vars), trunc);
}

HSeries HSeries::constant(std::vector<std::string> vars, const HScalar& c)
{
    HSeries f(std::move(vars), c.trunc_order());
    f.set_term(Exps(f.vars_.size(), 0), c);
    return f;
}

HSeries HSeries::monomial(std::vector<std::string> vars, const Exps& e, const HScalar& c)
{
    HSeries f(std::move(vars), c.trunc_order());
    if (e.size() != f.vars_.size())
        fail("vars", "exponent tuple size mismatch");
    f.set_term(e, c);
    return f;
}

int HSeries::var_index(const std::string& v) const
{
    for (size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == v)
            return static_cast<int>(i);
    fail("vars", "unknown variable " + v);
}

HScalar HSeries::coeff(const Exps& e, bool* authoritative) const
{
    if (authoritative)
        *authoritative = is_authoritative_at(e);
    auto it = terms_.find(e);
    if (it == terms_.end())
        return HScalar::zero(trunc_);
    return it->second;
}

bool HSeries::is_authoritative_at(const Exps& e) const
{
    for (size_t i = 0; i < vars_.size(); ++i)
        if (!window_authoritative(win_[i], e[i]))
            return false;
    return true;
}

void HSeries::set_term(const Exps& e, const HScalar& c)
{
    if (c.is_zero())
        terms_.erase(e);
    else
        terms_[e] = c;
}

void HSeries::add_term(const Exps& e, const HScalar& c)
{
    auto it = terms_.find(e);
    if (it == terms_.end())
    {
        if (!c.is_zero())
            terms_[e] = c;
        return;
    }
    it->second += c;
    if (it->second.is_zero())
        terms_.erase(it);
}

void HSeries::check_compatible(const HSeries& o) const
{
    if (vars_ != o.vars_)
        fail("vars", "variable list mismatch");
    if (trunc_ != o.trunc_)
        fail("trunc", "truncation order mismatch");
}

void HSeries::prune_zeros()
{
    for (auto it = terms_.begin(); it != terms_.end();)
        it = it->second.is_zero() ? terms_.erase(it) : std::next(it);
}

HSeries HSeries::operator+(const HSeries& o) const
{
    check_compatible(o);
    HSeries r(vars_, trunc_);
    for (size_t i = 0; i < vars_.size(); ++i)
        r.win_[i] = sum_window(win_[i], o.win_[i]);
    r.terms_ = terms_;
    for (const auto& [e, c] : o.terms_)
        r.add_term(e, c);
    // drop garbage outside the authoritative region
    for (auto it = r.terms_.begin(); it != r.terms_.end();)
        it = r.is_authoritative_at(it->first) ? std::next(it) : r.terms_.erase(it);
    return r;
}

HSeries HSeries::operator-() const
{
    HSeries r = *this;
    for (auto& [e, c] : r.terms_)
        c = -c;
    return r;
}

HSeries HSeries::operator-(const HSeries& o) const { return *this + (-o); }

HSeries HSeries::operator*(const HSeries& o) const
{
    check_compatible(o);
    HSeries r(vars_, trunc_);
    for (size_t i = 0; i < vars_.size(); ++i)
        r.win_[i] = product_window(win_[i], o.win_[i]);
    Exps e(vars_.size());
    for (const auto& [ea, ca] : terms_)
        for (const auto& [eb, cb] : o.terms_)
        {
            HScalar c = ca * cb;
            if (c.is_zero())
                continue;
            for (size_t i = 0; i < vars_.size(); ++i)
                e[i] = ea[i] + eb[i];
            if (r.is_authoritative_at(e))
                r.add_term(e, c);
        }
    return r;
}

HSeries HSeries::scaled(const HScalar& c) const
{
    HSeries r = *this;
    for (auto& [e, x] : r.terms_)
        x *= c;
    r.prune_zeros();
    return r;
}

HSeries HSeries::scaled(const Rational& c) const
{
    HSeries r = *this;
    if (c == 0)
    {
        r.terms_.clear();
        return r;
    }
    for (auto& [e, x] : r.terms_)
        x *= c;
    return r;
}

bool HSeries::operator==(const HSeries& o) const
{
    return vars_ == o.vars_ && trunc_ == o.trunc_ && terms_ == o.terms_;
}

HSeries HSeries::truncated(int n) const
{
    HSeries r(vars_, n);
    r.win_ = win_;
    for (const auto& [e, c] : terms_)
        r.set_term(e, c.truncated(n));
    return r;
}

HSeries HSeries::derivative(const std::string& var) const
{
    int vi = var_index(var);
    HSeries r(vars_, trunc_);
    r.win_ = win_;
    auto shift = [](OInt b) { return b ? OInt(*b - 1) : b; };
    r.win_[static_cast<size_t>(vi)].supp_lo = shift(win_[static_cast<size_t>(vi)].supp_lo);
    r.win_[static_cast<size_t>(vi)].supp_hi = shift(win_[static_cast<size_t>(vi)].supp_hi);
    r.win_[static_cast<size_t>(vi)].auth_lo = shift(win_[static_cast<size_t>(vi)].auth_lo);
    r.win_[static_cast<size_t>(vi)].auth_hi = shift(win_[static_cast<size_t>(vi)].auth_hi);
    for (const auto& [e, c] : terms_)
    {
        if (e[static_cast<size_t>(vi)] == 0)
            continue;
        Exps d = e;
        d[static_cast<size_t>(vi)] -= 1;
        r.add_term(d, c * Rational(e[static_cast<size_t>(vi)]));
    }
    return r;
}

HSeries HSeries::promoted(const std::vector<std::string>& vars) const
{
    HSeries r(vars, trunc_);
    std::vector<int> pos(vars_.size(), -1);
    for (size_t i = 0; i < vars_.size(); ++i)
    {
        for (size_t j = 0; j < vars.size(); ++j)
            if (vars[j] == vars_[i])
                pos[i] = static_cast<int>(j);
        if (pos[i] < 0)
            fail("vars", "promotion target misses variable " + vars_[i]);
    }
    for (size_t j = 0; j < vars.size(); ++j)
        r.win_[j] = VarWindow::exact_support(0, 0);
    for (size_t i = 0; i < vars_.size(); ++i)
        r.win_[static_cast<size_t>(pos[i])] = win_[i];
    for (const auto& [e, c] : terms_)
    {
        Exps d(vars.size(), 0);
        for (size_t i = 0; i < vars_.size(); ++i)
            d[static_cast<size_t>(pos[i])] = e[i];
        r.set_term(d, c);
    }
    return r;
}

HSeries HSeries::renamed(const std::vector<std::string>& vars) const
{
    if (vars.size() != vars_.size())
        fail("vars", "rename must preserve arity");
    HSeries r = *this;
    r.vars_ = vars;
    return r;
}

HSeries HSeries::restricted(const std::string& var, std::optional<int> lo, std::optional<int> hi) const
{
    int vi = var_index(var);
    HSeries r(vars_, trunc_);
    r.win_ = win_;
    auto& w = r.win_[static_cast<size_t>(vi)];
    if (lo)
        w.supp_lo = w.supp_lo ? OInt(std::max(*w.supp_lo, *lo)) : lo;
    if (hi)
        w.supp_hi = w.supp_hi ? OInt(std::min(*w.supp_hi, *hi)) : hi;
    for (const auto& [e, c] : terms_)
    {
        int x = e[static_cast<size_t>(vi)];
        if ((lo && x < *lo) || (hi && x > *hi))
            continue;
        r.set_term(e, c);
    }
    return r;
}

std::string HSeries::str() const
{
    if (terms_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_)
    {
        if (!first)
            os << " + ";
        os << "(" << c.str() << ")";
        for (size_t i = 0; i < vars_.size(); ++i)
            if (e[i] != 0)
                os << " " << vars_[i] << "^" << e[i];
        first = false;
    }
    return os.str();
}

// ---- operations --------------------------------------------------------------

HSeries q_shift(int m, const HSeries& f, const std::string& var)
{
    if (m == 0)
        return f;
    int vi = f.var_index(var);
    int N = f.trunc_order();
    HSeries r(f.vars(), N);
    for (size_t i = 0; i < f.vars().size(); ++i)
        r.window(static_cast<int>(i)) = f.window(static_cast<int>(i));
    {
        auto& w = r.window(vi);
        const auto& fw = f.window(vi);
        if (fw.supp_lo)
            w.supp_lo = *fw.supp_lo - (N - 1);
        // shift reaches N-1 exponents upward, so authority shrinks accordingly
        OInt khi = known_hi(fw);
        OInt klo = known_lo(fw);
        w.auth_hi = khi ? OInt(*khi - (N - 1)) : std::nullopt;
        w.auth_lo = klo;
    }
    const Rational mq(m);
    for (const auto& [e, c] : f.terms())
    {
        Rational mk = 1;
        for (int k = 0; k < N; ++k)
        {
            if (k > 0)
                mk *= mq;
            Rational b = binomial(e[static_cast<size_t>(vi)], k) * mk;
            if (b == 0)
                continue;
            HSeries::Exps d = e;
            d[static_cast<size_t>(vi)] -= k;
            HScalar t = (c * b).shifted_up(k);
            if (!t.is_zero() && r.is_authoritative_at(d))
                r.add_term(d, t);
        }
    }
    return r;
}

HSeries q_number(int m, const HSeries& f, const std::string& var)
{
    if (m == 0)
        return HSeries::zero(f.vars(), f.trunc_order());
    bool neg = m < 0;
    int a = neg ? -m : m;
    HSeries r = q_shift(a - 1, f, var);
    for (int k = 1; k < a; ++k)
        r = r + q_shift(a - 1 - 2 * k, f, var);
    return neg ? -r : r;
}

std::pair<HSeries, HSeries> sing_reg_split(const HSeries& f, const std::string& var)
{
    HSeries sing = f.restricted(var, std::nullopt, -1);
    HSeries reg = f.restricted(var, 0, std::nullopt);
    return {sing, reg};
}

HSeries series_exp(const HSeries& f)
{
    for (const auto& [e, c] : f.terms())
        if (c.coeff(0) != 0)
            fail("exp", "exponential requires argument == 0 mod hbar");
    int N = f.trunc_order();
    HSeries one = HSeries::constant(f.vars(), HScalar::one(N));
    HSeries r = one;
    HSeries p = one;
    Rational kfact = 1;
    for (int k = 1; k < N; ++k)
    {
        p = p * f;
        if (p.is_zero())
            break;
        kfact *= k;
        r = r + p.scaled(Rational(1) / kfact);
    }
    return r;
}

HSeries series_log(const HSeries& f)
{
    int N = f.trunc_order();
    HSeries::Exps zero_exp(f.vars().size(), 0);
    HSeries g = f - HSeries::constant(f.vars(), HScalar::one(N));
    for (const auto& [e, c] : g.terms())
        if (c.coeff(0) != 0)
            fail("log", "logarithm requires argument of the form 1 + O(hbar)");
    HSeries r = HSeries::zero(f.vars(), N);
    HSeries p = HSeries::constant(f.vars(), HScalar::one(N));
    for (int k = 1; k < N; ++k)
    {
        p = p * g;
        if (p.is_zero())
            break;
        Rational c = Rational(k % 2 == 1 ? 1 : -1) / Rational(k);
        r = r + p.scaled(c);
    }
    return r;
}

HSeries apply_diffop(const std::vector<HScalar>& c, const HSeries& f, const std::string& var)
{
    HSeries r = HSeries::zero(f.vars(), f.trunc_order());
    HSeries d = f;
    for (size_t k = 0; k < c.size(); ++k)
    {
        if (k > 0)
            d = d.derivative(var);
        if (!c[k].is_zero())
            r = r + d.scaled(c[k]);
    }
    return r;
}

std::vector<HScalar> G_coeffs(int trunc)
{
    // G(x) = sum_{j even} 2 hbar^{j+1} x^j / (j+1)!
    std::vector<HScalar> c;
    for (int j = 0; j + 1 < trunc; j += (j == 0 ? 2 : 2))
    {
        while (static_cast<int>(c.size()) < j)
            c.push_back(HScalar::zero(trunc));
        c.push_back(HScalar::hbar_power(Rational(2) / factorial(j + 1), j + 1, trunc));
    }
    if (c.empty())
        c.push_back(HScalar::hbar_power(2, 1, trunc));
    return c;
}

std::vector<HScalar> zL_coeffs(const Rational& c, int trunc)
{
    // z L(z d/dx) = sum_{n>=1} (c hbar)^n / n! * d^{n-1}, coefficient of d^j
    std::vector<HScalar> r;
    Rational ck = c;
    Rational fact = 1;
    for (int j = 0; j + 1 < trunc; ++j)
    {
        fact *= (j + 1);
        r.push_back(HScalar::hbar_power(ck / fact, j + 1, trunc));
        ck *= c;
    }
    if (r.empty())
        r.push_back(HScalar::zero(trunc));
    return r;
}

HSeries apply_G(const HSeries& f, const std::string& var)
{
    return apply_diffop(G_coeffs(f.trunc_order()), f, var);
}

HSeries apply_F(const HSeries& f, const std::string& var)
{
    for (const auto& [e, c] : f.terms())
        if (c.coeff(0) != 0)
            fail("F", "F has an 1/(2 hbar) prefactor; argument must vanish mod hbar");
    int N = f.trunc_order();
    if (N < 2)
        fail("F", "truncation order too small to divide by hbar");
    // g = f / hbar, known mod hbar^(N-1)
    HSeries g = HSeries::zero(f.vars(), N - 1);
    for (size_t i = 0; i < f.vars().size(); ++i)
        g.window(static_cast<int>(i)) = f.window(static_cast<int>(i));
    for (const auto& [e, c] : f.terms())
        g.set_term(e, c.divided_by_hbar(1));
    // invert A(x) = 1 + sum_{n>=1} hbar^{2n} x^{2n} / (2n+1)!  as a diffop series
    int M = N - 1;
    std::vector<HScalar> A(1, HScalar::one(M));
    for (int n = 1; 2 * n < M; ++n)
    {
        while (static_cast<int>(A.size()) < 2 * n)
            A.push_back(HScalar::zero(M));
        A.push_back(HScalar::hbar_power(Rational(1) / factorial(2 * n + 1), 2 * n, M));
    }
    // B = A^{-1} via geometric series in (1 - A)
    std::vector<HScalar> B(1, HScalar::one(M));
    std::vector<HScalar> U; // 1 - A, carries hbar^2
    for (size_t j = 0; j < A.size(); ++j)
        U.push_back((j == 0 ? HScalar::one(M) : HScalar::zero(M)) - A[j]);
    std::vector<HScalar> P = U;
    auto mul_lists = [M](const std::vector<HScalar>& a, const std::vector<HScalar>& b) {
        std::vector<HScalar> r(a.size() + b.size() - 1, HScalar::zero(M));
        for (size_t i = 0; i < a.size(); ++i)
            for (size_t j = 0; j < b.size(); ++j)
                r[i + j] += a[i] * b[j];
        return r;
    };
    for (int k = 1; 2 * k < M; ++k)
    {
        for (size_t j = 0; j < P.size(); ++j)
        {
            while (B.size() <= j)
                B.push_back(HScalar::zero(M));
            B[j] += P[j];
        }
        P = mul_lists(P, U);
    }
    HSeries r = apply_diffop(B, g, var);
    return r.scaled(Rational(1) / 2);
}

HSeries apply_zL(const Rational& c, const HSeries& f, const std::string& var)
{
    return apply_diffop(zL_coeffs(c, f.trunc_order()), f, var);
}

HScalar eval_at_hbar(const HSeries& f, const std::string& var, const Rational& c)
{
    if (f.vars().size() != 1)
        fail("eval", "evaluation requires a one-variable series");
    int vi = f.var_index(var);
    const auto& w = f.window(vi);
    if (!w.supp_lo || *w.supp_lo < 0)
        fail("eval", "evaluation at an hbar multiple requires nonnegative support");
    int N = f.trunc_order();
    HScalar r(N);
    for (const auto& [e, x] : f.terms())
    {
        int d = e[static_cast<size_t>(vi)];
        if (d >= N)
            continue;
        Rational cd = 1;
        for (int t = 0; t < d; ++t)
            cd *= c;
        r += (x * cd).shifted_up(d);
    }
    // authority: all degrees 0..N-1 must be certified
    for (int d = 0; d < N; ++d)
    {
        if (w.supp_hi && d > *w.supp_hi)
            break;
        if (!window_authoritative(w, d))
            fail("window", "evaluation outside the authoritative window");
    }
    return r;
}

HSeries residue(const HSeries& f, const std::string& var)
{
    int vi = f.var_index(var);
    if (!window_authoritative(f.window(vi), -1))
        fail("window", "residue outside the authoritative window");
    std::vector<std::string> rest;
    for (size_t i = 0; i < f.vars().size(); ++i)
        if (static_cast<int>(i) != vi)
            rest.push_back(f.vars()[i]);
    HSeries r(rest, f.trunc_order());
    {
        size_t j = 0;
        for (size_t i = 0; i < f.vars().size(); ++i)
            if (static_cast<int>(i) != vi)
                r.window(static_cast<int>(j++)) = f.window(static_cast<int>(i));
    }
    for (const auto& [e, c] : f.terms())
    {
        if (e[static_cast<size_t>(vi)] != -1)
            continue;
        HSeries::Exps d;
        for (size_t i = 0; i < e.size(); ++i)
            if (static_cast<int>(i) != vi)
                d.push_back(e[i]);
        r.add_term(d, c);
    }
    return r;
}

HSeries log_one_plus_c_hbar_over(const std::string& var, const Rational& c, int trunc)
{
    HSeries r({var}, trunc);
    r.window(0) = VarWindow::exact_support(-(trunc - 1), -1);
    if (c == 0)
    {
        r.window(0) = VarWindow::exact_support(0, 0);
        return r;
    }
    Rational ct = 1;
    for (int t = 1; t < trunc; ++t)
    {
        ct *= c;
        Rational coeff = ct / Rational(t % 2 == 1 ? t : -t);
        r.set_term({-t}, HScalar::hbar_power(coeff, t, trunc));
    }
    return r;
}

} // namespace lqva
