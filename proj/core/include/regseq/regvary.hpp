#pragma once

// Slowly varying functions l(x) = exp(int_{x0}^x theta(t)/t dt), regular
// functions h(x) = x^c L(x), their derivatives, the inverse phi = h^{-1} and
// the certified integer part floor(h(m)).
//
// theta is restricted to the log-power family theta(t) = a / (ln t)^b with
// a > 0 and b in (0, 1]. Every member satisfies the L0 conditions with
// closed-form l, so c = 1 is admissible for all of them.

#include <concepts>
#include <cstdint>
#include <optional>
#include <string>

namespace regseq {

inline constexpr double kMinExponent = 1.0;
/// Exclusive upper bound on the regularity exponent c.
inline constexpr double kMaxExponent = 30.0 / 29.0;

enum class ThetaFamily { LogPower };

/// theta(t) = a / (ln t)^b on [x0, inf).
struct ThetaSpec {
  ThetaFamily family = ThetaFamily::LogPower;
  double a = 1.0;
  double b = 1.0;
  /// Left endpoint; empty means Euler's number e, carried symbolically so
  /// that ln x0 = 1 exactly at every precision.
  std::optional<double> x0;

  static ThetaSpec log_power(double a, double b, std::optional<double> x0 = std::nullopt);

  double x0_value() const;
  double log_x0() const;
  bool x0_is_e() const { return !x0.has_value(); }

  double theta(double t) const;
  double theta_prime(double t) const;
  double theta_second(double t) const;

  /// Throws PreconditionError unless a > 0, b in (0, 1] and x0 >= e.
  void validate() const;
};

class SlowlyVaryingFn {
 public:
  explicit SlowlyVaryingFn(ThetaSpec theta);

  const ThetaSpec& theta() const { return theta_; }

  /// Closed form of l, also meaningful on (1, x0) where it continues the
  /// same expression; eval_ell() enforces x >= x0, eval_h() does not.
  double closed_form(double x) const;

 private:
  ThetaSpec theta_;
  double log_x0_pow_ = 1.0;  // (ln x0)^(1-b), used when b < 1
};

/// Domain error when x < x0.
double eval_ell(const SlowlyVaryingFn& ell, double x);

class RegularFn {
 public:
  /// h(x) = x^c L(x); validates c in [1, 30/29) and theta.
  static RegularFn make(double c, const ThetaSpec& theta);
  /// Canonical h(x) = x ln x (c = 1, a = b = 1, x0 = e) evaluated directly.
  static RegularFn x_log_x();

  double c() const { return c_; }
  const SlowlyVaryingFn& ell() const { return ell_; }
  const ThetaSpec& theta() const { return ell_.theta(); }
  bool canonical() const { return canonical_; }
  std::string tag() const;

  /// Smallest admitted integer index: floor(h(m0)) >= 1 and h is
  /// increasing and convex on [m0, inf).
  std::int64_t m0() const { return m0_; }
  double h_at_m0() const { return h_m0_; }

  /// Unchecked evaluation for x > 1; used after domain checks.
  double value_unchecked(double x) const;
  double derivative_unchecked(double x) const;
  double second_derivative_unchecked(double x) const;

 private:
  RegularFn(double c, const ThetaSpec& theta, bool canonical);

  double c_;
  SlowlyVaryingFn ell_;
  bool canonical_;
  std::int64_t m0_ = 2;
  double h_m0_ = 0.0;
};

double eval_h(const RegularFn& h, double x);
double eval_h_prime(const RegularFn& h, double x);

/// phi(y) with |h(phi(y)) - y| <= y * 2^-40. Domain error when y < h(m0).
double inverse_phi(const RegularFn& h, double y);

/// Exact floor(h(m)). Values whose fractional part lies within the working
/// margin of an integer are re-evaluated in MPFR at escalating precision;
/// CertificationError if no precision up to 8192 bits decides.
std::int64_t floor_h(const RegularFn& h, std::int64_t m);
template <std::floating_point T>
std::int64_t floor_h(const RegularFn& h, T m) = delete;

/// Exact sign of h(k) - h(m) - target, escalating precision on near ties.
int compare_gap(const RegularFn& h, std::int64_t k, std::int64_t m, std::int64_t target);

/// Exact floor(ln n) for n >= 1.
std::int64_t floor_log(std::int64_t n);

}  // namespace regseq
