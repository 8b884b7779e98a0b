#pragma once

#include "lqva/rational.hpp"

#include <vector>

namespace lqva {

// element of Q[hbar]/(hbar^N); coefficients indexed by hbar-degree 0..N-1
class HScalar {
  public:
    HScalar() : trunc_(1), c_(1) {}
    explicit HScalar(int trunc) : trunc_(trunc), c_(static_cast<size_t>(trunc))
    {
        if (trunc < 1)
            fail("trunc", "truncation order must be >= 1");
    }

    static HScalar constant(const Rational& r, int trunc)
    {
        HScalar s(trunc);
        s.c_[0] = r;
        return s;
    }
    // r * hbar^k
    static HScalar hbar_power(const Rational& r, int k, int trunc)
    {
        HScalar s(trunc);
        if (k < 0)
            fail("hbar", "negative hbar powers are never materialized");
        if (k < trunc)
            s.c_[static_cast<size_t>(k)] = r;
        return s;
    }
    static HScalar one(int trunc) { return constant(1, trunc); }
    static HScalar zero(int trunc) { return HScalar(trunc); }

    int trunc_order() const { return trunc_; }
    const Rational& coeff(int k) const
    {
        static const Rational z = 0;
        if (k < 0 || k >= trunc_)
            return z;
        return c_[static_cast<size_t>(k)];
    }
    void set_coeff(int k, const Rational& r)
    {
        if (k >= 0 && k < trunc_)
            c_[static_cast<size_t>(k)] = r;
    }

    bool is_zero() const
    {
        for (const auto& x : c_)
            if (x != 0)
                return false;
        return true;
    }
    // lowest hbar-degree with nonzero coefficient; trunc if zero
    int hbar_order() const
    {
        for (int k = 0; k < trunc_; ++k)
            if (c_[static_cast<size_t>(k)] != 0)
                return k;
        return trunc_;
    }

    HScalar& operator+=(const HScalar& o)
    {
        check(o);
        for (int k = 0; k < trunc_; ++k)
            c_[static_cast<size_t>(k)] += o.c_[static_cast<size_t>(k)];
        return *this;
    }
    HScalar& operator-=(const HScalar& o)
    {
        check(o);
        for (int k = 0; k < trunc_; ++k)
            c_[static_cast<size_t>(k)] -= o.c_[static_cast<size_t>(k)];
        return *this;
    }
    friend HScalar operator+(HScalar a, const HScalar& b) { return a += b; }
    friend HScalar operator-(HScalar a, const HScalar& b) { return a -= b; }
    friend HScalar operator-(const HScalar& a)
    {
        HScalar r(a.trunc_);
        for (int k = 0; k < a.trunc_; ++k)
            r.c_[static_cast<size_t>(k)] = -a.c_[static_cast<size_t>(k)];
        return r;
    }
    friend HScalar operator*(const HScalar& a, const HScalar& b)
    {
        a.check(b);
        HScalar r(a.trunc_);
        for (int i = 0; i < a.trunc_; ++i)
        {
            if (a.c_[static_cast<size_t>(i)] == 0)
                continue;
            for (int j = 0; i + j < a.trunc_; ++j)
                if (b.c_[static_cast<size_t>(j)] != 0)
                    r.c_[static_cast<size_t>(i + j)] +=
                        a.c_[static_cast<size_t>(i)] * b.c_[static_cast<size_t>(j)];
        }
        return r;
    }
    HScalar& operator*=(const HScalar& o) { return *this = *this * o; }
    HScalar& operator*=(const Rational& r)
    {
        for (auto& x : c_)
            x *= r;
        return *this;
    }
    friend HScalar operator*(HScalar a, const Rational& r) { return a *= r; }
    friend HScalar operator*(const Rational& r, HScalar a) { return a *= r; }

    bool operator==(const HScalar& o) const { return trunc_ == o.trunc_ && c_ == o.c_; }
    bool operator!=(const HScalar& o) const { return !(*this == o); }

    // multiply by hbar^k (drops the top k degrees)
    HScalar shifted_up(int k) const
    {
        HScalar r(trunc_);
        for (int i = 0; i + k < trunc_; ++i)
            r.c_[static_cast<size_t>(i + k)] = c_[static_cast<size_t>(i)];
        return r;
    }
    // exact division by hbar^k; requires the low k coefficients to vanish.
    // The result is only known mod hbar^(N-k), so the truncation order drops.
    HScalar divided_by_hbar(int k) const
    {
        if (k >= trunc_)
            fail("hbar", "division exhausts truncation order");
        for (int i = 0; i < k; ++i)
            if (c_[static_cast<size_t>(i)] != 0)
                fail("hbar", "coefficient not divisible by hbar^" + std::to_string(k));
        HScalar r(trunc_ - k);
        for (int i = 0; i < trunc_ - k; ++i)
            r.c_[static_cast<size_t>(i)] = c_[static_cast<size_t>(i + k)];
        return r;
    }
    HScalar truncated(int n) const
    {
        if (n > trunc_)
            fail("trunc", "cannot raise truncation order");
        HScalar r(n);
        for (int i = 0; i < n; ++i)
            r.c_[static_cast<size_t>(i)] = c_[static_cast<size_t>(i)];
        return r;
    }

    std::string str() const;

  private:
    void check(const HScalar& o) const
    {
        if (trunc_ != o.trunc_)
            fail("trunc", "truncation order mismatch");
    }

    int trunc_;
    std::vector<Rational> c_;
};

} // namespace lqva
