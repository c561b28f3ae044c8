#pragma once

// Reference computations for the tests. Nothing here calls into the
// library's evaluation paths: values come from 50-digit decimal floats,
// adaptive quadrature, bisection and brute-force loops.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <vector>

namespace oracle {

using hp = boost::multiprecision::cpp_bin_float_50;

struct Params {
  double c = 1.0;
  double a = 1.0;
  double b = 1.0;
  std::optional<double> x0;  // empty: e
};

inline hp log_x0(const Params& p) { return p.x0 ? hp(boost::multiprecision::log(hp(*p.x0))) : hp(1); }

/// x^c * l(x) with l in closed form, at 50 digits.
inline hp h_value(const Params& p, const hp& x) {
  using boost::multiprecision::exp;
  using boost::multiprecision::log;
  using boost::multiprecision::pow;
  const hp lx = log(x);
  hp ell;
  if (p.b == 1.0) {
    ell = pow(lx / log_x0(p), hp(p.a));
  } else {
    const hp q = 1 - hp(p.b);
    ell = exp(hp(p.a) * (pow(lx, q) - pow(log_x0(p), q)) / q);
  }
  return exp(hp(p.c) * lx) * ell;
}

inline hp x_log_x(const hp& x) { return x * boost::multiprecision::log(x); }

/// l(x) = exp(int_{x0}^x theta(t)/t dt), theta(t) = a / (ln t)^b, by
/// adaptive Gauss-Kronrod in the variable u = ln t (dt/t = du).
inline long double ell_by_quadrature(double a, double b, long double x0, long double x) {
  auto integrand = [a, b](long double u) {
    const long double t = std::exp(u);
    return static_cast<long double>(a) / std::pow(std::log(t), static_cast<long double>(b));
  };
  const long double integral =
      boost::math::quadrature::gauss_kronrod<long double, 61>::integrate(integrand, std::log(x0), std::log(x), 10,
                                                                          1e-17L);
  return std::exp(integral);
}

/// phi(y) for an increasing f by plain bisection on [lo, hi].
inline hp bisect_inverse(const std::function<hp(const hp&)>& f, const hp& y, hp lo, hp hi) {
  for (int i = 0; i < 200; ++i) {
    hp mid = (lo + hi) / 2;
    if (f(mid) < y) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return (lo + hi) / 2;
}

inline std::int64_t floor_hp(const hp& v) { return boost::multiprecision::floor(v).convert_to<std::int64_t>(); }

/// {floor(f(m)) : m >= m_start} intersected with (lo, hi] by direct looping.
inline std::vector<std::int64_t> brute_window(const std::function<hp(const hp&)>& f, std::int64_t m_start,
                                              std::int64_t lo, std::int64_t hi) {
  std::set<std::int64_t> out;
  for (std::int64_t m = m_start;; ++m) {
    const std::int64_t v = floor_hp(f(hp(m)));
    if (v > hi) break;
    if (v > lo) out.insert(v);
  }
  return {out.begin(), out.end()};
}

/// {n floor(ln n) : n >= 3} intersected with (lo, hi].
inline std::vector<std::int64_t> brute_control(std::int64_t lo, std::int64_t hi) {
  std::set<std::int64_t> out;
  for (std::int64_t n = 3;; ++n) {
    const std::int64_t k = floor_hp(boost::multiprecision::log(hp(n)));
    const std::int64_t v = n * k;
    if (v > hi && k >= 1) break;
    if (v > lo && v <= hi) out.insert(v);
  }
  return {out.begin(), out.end()};
}

/// #{n in s : n + x in s} by the definition, for any integer x.
inline std::int64_t brute_pairs(const std::vector<std::int64_t>& s, std::int64_t x) {
  const std::set<std::int64_t> set(s.begin(), s.end());
  std::int64_t c = 0;
  for (std::int64_t n : s) c += set.count(n + x);
  return c;
}

}  // namespace oracle
