#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace lqva {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// library errors carry a short machine-readable kind plus a message
class Error : public std::runtime_error {
  public:
    Error(std::string kind, const std::string& msg)
        : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

  private:
    std::string kind_;
};

[[noreturn]] inline void fail(const std::string& kind, const std::string& msg)
{
    throw Error(kind, msg);
}

// binomial(n, k) for arbitrary integer n, k >= 0
inline Rational binomial(long n, long k)
{
    if (k < 0)
        return 0;
    Rational r = 1;
    for (long t = 0; t < k; ++t)
    {
        r *= Rational(n - t);
        r /= Rational(t + 1);
    }
    return r;
}

inline Rational factorial(long n)
{
    Rational r = 1;
    for (long t = 2; t <= n; ++t)
        r *= t;
    return r;
}

inline std::string to_string(const Rational& r)
{
    return r.str();
}

} // namespace lqva
