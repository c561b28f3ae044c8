#include "precise.hpp"

#include <mpfr.h>

#include <array>
#include <cmath>
#include <string>

#include "regseq/errors.hpp"
#include "regseq/regvary.hpp"

namespace regseq::detail {

namespace {

constexpr std::array<mpfr_prec_t, 7> kPrecisionLadder{128, 256, 512, 1024, 2048, 4096, 8192};

class Mp {
 public:
  explicit Mp(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
  ~Mp() { mpfr_clear(v_); }
  Mp(const Mp&) = delete;
  Mp& operator=(const Mp&) = delete;

  mpfr_ptr get() { return v_; }
  operator mpfr_ptr() { return v_; }  // NOLINT(google-explicit-constructor)

 private:
  mpfr_t v_;
};

// Relative error bound for evaluate(): every primitive is correctly rounded,
// and exp() turns the absolute error of its argument into relative error,
// so the bound scales with the magnitude of the exponents involved.
double error_magnifier(const RegularFn& h, std::int64_t m) {
  const double lx = std::log(static_cast<double>(m));
  const ThetaSpec& th = h.theta();
  double mag = 16.0 + h.c() * lx;
  if (!h.canonical()) {
    const double cancel = th.b < 1.0 ? 4.0 / (1.0 - th.b) : 4.0;
    mag += th.a * (std::abs(lx) + std::abs(th.log_x0()) + 1.0) * cancel;
  }
  return 64.0 * mag;
}

void evaluate(mpfr_ptr out, const RegularFn& h, std::int64_t m, mpfr_prec_t prec) {
  Mp lx(prec);
  mpfr_set_si(lx, m, MPFR_RNDN);
  mpfr_log(lx, lx, MPFR_RNDN);
  if (h.canonical()) {
    mpfr_mul_si(out, lx, m, MPFR_RNDN);
    return;
  }
  const ThetaSpec& th = h.theta();
  Mp lx0(prec);
  if (th.x0_is_e()) {
    mpfr_set_ui(lx0, 1, MPFR_RNDN);
  } else {
    mpfr_set_d(lx0, *th.x0, MPFR_RNDN);
    mpfr_log(lx0, lx0, MPFR_RNDN);
  }
  Mp ell(prec);
  Mp a(prec);
  mpfr_set_d(a, th.a, MPFR_RNDN);
  if (th.b == 1.0) {
    mpfr_div(ell, lx, lx0, MPFR_RNDN);
    mpfr_pow(ell, ell, a, MPFR_RNDN);
  } else {
    Mp p(prec);
    Mp u(prec);
    Mp u0(prec);
    mpfr_set_d(p, 1.0 - th.b, MPFR_RNDN);
    mpfr_pow(u, lx, p, MPFR_RNDN);
    mpfr_pow(u0, lx0, p, MPFR_RNDN);
    mpfr_sub(u, u, u0, MPFR_RNDN);
    mpfr_mul(u, u, a, MPFR_RNDN);
    mpfr_div(u, u, p, MPFR_RNDN);
    mpfr_exp(ell, u, MPFR_RNDN);
  }
  if (h.c() == 1.0) {
    mpfr_mul_si(out, ell, m, MPFR_RNDN);
  } else {
    Mp xc(prec);
    mpfr_mul_d(xc, lx, h.c(), MPFR_RNDN);
    mpfr_exp(xc, xc, MPFR_RNDN);
    mpfr_mul(out, xc, ell, MPFR_RNDN);
  }
}

// Sets lo/hi to v * (1 -+ magnifier * 2^-prec) with outward rounding.
void widen(mpfr_ptr lo, mpfr_ptr hi, mpfr_ptr v, double magnifier, mpfr_prec_t prec) {
  Mp rel(prec);
  mpfr_set_d(rel, magnifier, MPFR_RNDU);
  mpfr_mul_2si(rel, rel, -static_cast<long>(prec), MPFR_RNDU);
  Mp err(prec);
  mpfr_abs(err, v, MPFR_RNDU);
  mpfr_mul(err, err, rel, MPFR_RNDU);
  mpfr_sub(lo, v, err, MPFR_RNDD);
  mpfr_add(hi, v, err, MPFR_RNDU);
}

}  // namespace

std::int64_t certified_floor_h(const RegularFn& h, std::int64_t m) {
  const double mag = error_magnifier(h, m);
  for (mpfr_prec_t prec : kPrecisionLadder) {
    Mp v(prec), lo(prec), hi(prec);
    evaluate(v, h, m, prec);
    widen(lo, hi, v, mag, prec);
    mpfr_floor(lo, lo);
    mpfr_floor(hi, hi);
    if (mpfr_equal_p(lo, hi)) return mpfr_get_si(lo, MPFR_RNDN);
  }
  throw CertificationError("floor(h(" + std::to_string(m) + ")) not certified at 8192 bits");
}

int certified_compare_gap(const RegularFn& h, std::int64_t k, std::int64_t m, std::int64_t target) {
  const double mag = error_magnifier(h, std::max(k, m));
  for (mpfr_prec_t prec : kPrecisionLadder) {
    Mp hk(prec), hm(prec);
    evaluate(hk, h, k, prec);
    evaluate(hm, h, m, prec);
    Mp err(prec), rel(prec), tmp(prec);
    // |error(hk - hm)| <= mag * 2^-prec * (|hk| + |hm|) + rounding of the subtraction.
    mpfr_abs(err, hk, MPFR_RNDU);
    mpfr_abs(tmp, hm, MPFR_RNDU);
    mpfr_add(err, err, tmp, MPFR_RNDU);
    mpfr_set_d(rel, 2.0 * mag, MPFR_RNDU);
    mpfr_mul_2si(rel, rel, -static_cast<long>(prec), MPFR_RNDU);
    mpfr_mul(err, err, rel, MPFR_RNDU);
    Mp d(prec);
    mpfr_sub(d, hk, hm, MPFR_RNDN);
    mpfr_sub_si(d, d, target, MPFR_RNDN);
    mpfr_abs(tmp, d, MPFR_RNDN);
    if (mpfr_greater_p(tmp, err)) return mpfr_sgn(d.get()) > 0 ? 1 : -1;
  }
  throw CertificationError("sign of h(" + std::to_string(k) + ") - h(" + std::to_string(m) + ") - " +
                           std::to_string(target) + " not certified at 8192 bits");
}

std::int64_t exp_ceiling(int k) {
  static const std::array<std::int64_t, 44> table = [] {
    std::array<std::int64_t, 44> t{};
    Mp v(256);
    for (int i = 0; i < 44; ++i) {
      mpfr_set_si(v, i, MPFR_RNDN);
      mpfr_exp(v, v, MPFR_RNDN);
      mpfr_ceil(v, v);
      t[static_cast<std::size_t>(i)] = mpfr_get_si(v, MPFR_RNDN);
    }
    return t;
  }();
  if (k < 0 || k >= static_cast<int>(table.size())) throw DomainError("exp_ceiling index out of range");
  return table[static_cast<std::size_t>(k)];
}

}  // namespace regseq::detail
