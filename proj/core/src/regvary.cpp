#include "regseq/regvary.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "precise.hpp"
#include "regseq/errors.hpp"

namespace regseq {

namespace {

// Fractional parts closer than this to an integer go to the MPFR path. The
// 2^-44 relative term dominates once h(m) > 2^24, where a fixed 2^-20 would
// be smaller than the double rounding error.
double floor_margin(double v) { return std::max(0x1p-20, std::abs(v) * 0x1p-44); }

}  // namespace

ThetaSpec ThetaSpec::log_power(double a, double b, std::optional<double> x0) {
  ThetaSpec t;
  t.a = a;
  t.b = b;
  t.x0 = x0;
  t.validate();
  return t;
}

double ThetaSpec::x0_value() const { return x0 ? *x0 : std::numbers::e; }

double ThetaSpec::log_x0() const { return x0 ? std::log(*x0) : 1.0; }

double ThetaSpec::theta(double t) const { return a / std::pow(std::log(t), b); }

double ThetaSpec::theta_prime(double t) const {
  const double lt = std::log(t);
  return -a * b / (t * std::pow(lt, b + 1.0));
}

double ThetaSpec::theta_second(double t) const {
  const double lt = std::log(t);
  return a * b / (t * t * std::pow(lt, b + 1.0)) * (1.0 + (b + 1.0) / lt);
}

void ThetaSpec::validate() const {
  if (!(a > 0.0) || !std::isfinite(a)) throw PreconditionError("theta amplitude a must be positive");
  if (!(b > 0.0 && b <= 1.0)) throw PreconditionError("theta log-exponent b must lie in (0, 1]");
  if (x0 && !(*x0 >= std::numbers::e && std::isfinite(*x0))) {
    throw PreconditionError("theta left endpoint x0 must be >= e");
  }
}

SlowlyVaryingFn::SlowlyVaryingFn(ThetaSpec theta) : theta_(theta) {
  theta_.validate();
  if (theta_.b < 1.0) log_x0_pow_ = std::pow(theta_.log_x0(), 1.0 - theta_.b);
}

double SlowlyVaryingFn::closed_form(double x) const {
  const double lx = std::log(x);
  if (theta_.b == 1.0) {
    const double ratio = theta_.x0 ? lx / theta_.log_x0() : lx;
    return theta_.a == 1.0 ? ratio : std::pow(ratio, theta_.a);
  }
  const double p = 1.0 - theta_.b;
  return std::exp(theta_.a * (std::pow(lx, p) - log_x0_pow_) / p);
}

double eval_ell(const SlowlyVaryingFn& ell, double x) {
  if (!(x >= ell.theta().x0_value())) throw DomainError("eval_ell: x below x0");
  if (x == ell.theta().x0_value()) return 1.0;
  return ell.closed_form(x);
}

RegularFn::RegularFn(double c, const ThetaSpec& theta, bool canonical)
    : c_(c), ell_(theta), canonical_(canonical) {
  if (!(c >= kMinExponent && c < kMaxExponent)) {
    throw PreconditionError("regularity exponent c must lie in [1, 30/29)");
  }
  // Admissible index set. Convexity on [e, inf) holds for the whole
  // log-power family (h'' = x^(c-2) L [(c+t)(c-1+t) + x t'] with
  // x t' = -a b / ln^(b+1) x, dominated by t(1+t) once ln x >= b), so only
  // indices below e need a sampled check.
  const double e = std::numbers::e;
  for (std::int64_t m = 2;; ++m) {
    const double x = static_cast<double>(m);
    if (value_unchecked(x) < 1.0 || derivative_unchecked(x) <= 0.0) continue;
    bool convex = true;
    for (int i = 0; x < e && i <= 256; ++i) {
      const double t = x + (e - x) * i / 256.0;
      if (second_derivative_unchecked(t) < 0.0) {
        convex = false;
        break;
      }
    }
    if (!convex) continue;
    m0_ = m;
    break;
  }
  h_m0_ = value_unchecked(static_cast<double>(m0_));
}

RegularFn RegularFn::make(double c, const ThetaSpec& theta) { return RegularFn(c, theta, false); }

RegularFn RegularFn::x_log_x() { return RegularFn(1.0, ThetaSpec{}, true); }

std::string RegularFn::tag() const {
  if (canonical_) return "nlogn";
  std::ostringstream os;
  os.precision(17);
  os << "xcl(c=" << c_ << ",a=" << theta().a << ",b=" << theta().b << ",x0=";
  if (theta().x0_is_e()) {
    os << "e";
  } else {
    os << *theta().x0;
  }
  os << ")";
  return os.str();
}

double RegularFn::value_unchecked(double x) const {
  if (canonical_) return x * std::log(x);
  const double ell = ell_.closed_form(x);
  return c_ == 1.0 ? x * ell : std::pow(x, c_) * ell;
}

double RegularFn::derivative_unchecked(double x) const {
  if (canonical_) return std::log(x) + 1.0;
  const double ell = ell_.closed_form(x);
  const double xc1 = c_ == 1.0 ? 1.0 : std::pow(x, c_ - 1.0);
  return xc1 * ell * (c_ + theta().theta(x));
}

double RegularFn::second_derivative_unchecked(double x) const {
  if (canonical_) return 1.0 / x;
  const double t = theta().theta(x);
  const double bracket = (c_ + t) * (c_ - 1.0 + t) + x * theta().theta_prime(x);
  return std::pow(x, c_ - 2.0) * ell_.closed_form(x) * bracket;
}

double eval_h(const RegularFn& h, double x) {
  if (!(x >= static_cast<double>(h.m0()))) throw DomainError("eval_h: x below m0");
  return h.value_unchecked(x);
}

double eval_h_prime(const RegularFn& h, double x) {
  if (!(x >= static_cast<double>(h.m0()))) throw DomainError("eval_h_prime: x below m0");
  return h.derivative_unchecked(x);
}

double inverse_phi(const RegularFn& h, double y) {
  if (!(y >= h.h_at_m0())) throw DomainError("inverse_phi: y below h(m0)");
  if (!std::isfinite(y)) throw DomainError("inverse_phi: y not finite");
  double lo = static_cast<double>(h.m0());
  if (y == h.h_at_m0()) return lo;
  double hi = 2.0 * lo;
  while (h.value_unchecked(hi) < y) {
    lo = hi;
    hi *= 2.0;
  }
  // Safeguarded Newton: keep a sign-changing bracket and fall back to
  // bisection whenever the Newton step leaves it.
  const double tol = y * 0x1p-46;
  double x = 0.5 * (lo + hi);
  for (int iter = 0; iter < 400; ++iter) {
    const double fx = h.value_unchecked(x) - y;
    if (std::abs(fx) <= tol) return x;
    if (fx < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    const double step = x - fx / h.derivative_unchecked(x);
    x = (step > lo && step < hi) ? step : 0.5 * (lo + hi);
    if (hi - lo <= hi * 0x1p-52) break;
  }
  return x;
}

std::int64_t floor_h(const RegularFn& h, std::int64_t m) {
  if (m < h.m0()) throw DomainError("floor_h: index below m0");
  const double v = h.value_unchecked(static_cast<double>(m));
  const double f = std::floor(v);
  const double margin = floor_margin(v);
  if (v - f > margin && f + 1.0 - v > margin) return static_cast<std::int64_t>(f);
  return detail::certified_floor_h(h, m);
}

int compare_gap(const RegularFn& h, std::int64_t k, std::int64_t m, std::int64_t target) {
  const double hk = h.value_unchecked(static_cast<double>(k));
  const double hm = h.value_unchecked(static_cast<double>(m));
  const double d = (hk - hm) - static_cast<double>(target);
  const double margin = (std::abs(hk) + std::abs(hm)) * 0x1p-44 + 0x1p-40;
  if (d > margin) return 1;
  if (d < -margin) return -1;
  return detail::certified_compare_gap(h, k, m, target);
}

std::int64_t floor_log(std::int64_t n) {
  if (n < 1) throw DomainError("floor_log: n must be >= 1");
  int k = 0;
  while (k + 1 < 44 && detail::exp_ceiling(k + 1) <= n) ++k;
  return k;
}

}  // namespace regseq
