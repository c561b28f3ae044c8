#pragma once

// Averages A_N f(x) = (1/#B_N) sum_{n in B_N} f(x + n) on Z, their maximal
// function over a scale set and the weak-type (1,1) level-set statistic
// lambda * #{x : Mf(x) > lambda} / ||f||_1. Everything is exact.

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "regseq/rational.hpp"
#include "regseq/seqgen.hpp"

namespace regseq {

/// Finitely supported f : Z -> Q. Entries are sorted by position and never zero.
class SignalF {
 public:
  using Entry = std::pair<std::int64_t, Rational>;

  SignalF() = default;
  /// Merges repeated positions by addition and drops zeros.
  static SignalF from_entries(std::vector<Entry> entries);
  static SignalF from_map(const std::map<std::int64_t, Rational>& values);

  const std::vector<Entry>& entries() const { return entries_; }
  /// OverflowError when the exact norm does not fit a 64-bit rational, as
  /// happens for maximal functions mixing many scales.
  const Rational& l1_norm() const;
  bool has_l1_norm() const { return l1_.has_value(); }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  Rational at(std::int64_t x) const;
  Rational max_value() const;
  bool nonnegative() const;

  /// (shift_k f)(x) = f(x - k).
  SignalF shifted(std::int64_t k) const;
  SignalF scaled(const Rational& t) const;

  /// Recomputes the l1 norm and checks ordering; throws on mismatch.
  void validate() const;

  friend bool operator==(const SignalF&, const SignalF&) = default;

 private:
  std::vector<Entry> entries_;
  std::optional<Rational> l1_ = Rational(0);
};

SignalF delta_signal(std::int64_t at = 0);
/// Indicator of [lo, hi].
SignalF interval_signal(std::int64_t lo, std::int64_t hi);

/// Deterministic test signal: 64 draws of (position in [-2^16, 2^16],
/// value in {1..16}) from std::mt19937_64 seeded with `seed`, mapped to
/// ranges by rejection sampling; a repeated position keeps its first value.
SignalF random_signal(std::uint64_t seed);

class ScaleSet {
 public:
  /// PreconditionError unless sorted, distinct and every N >= 8.
  explicit ScaleSet(std::vector<std::int64_t> scales);
  static ScaleSet dyadic(int j_min, int j_max);
  static ScaleSet range(std::int64_t lo, std::int64_t hi);

  const std::vector<std::int64_t>& values() const { return scales_; }
  std::int64_t max() const { return scales_.back(); }
  bool is_dyadic() const;

 private:
  std::vector<std::int64_t> scales_;
};

struct MaximalOptions {
  EnumerateOptions enumerate{};
  unsigned threads = 1;
};

/// DegenerateInputError when B_N is empty.
SignalF average_AN(const SequenceFamily& family, std::int64_t n, const SignalF& f, const MaximalOptions& opts = {});
/// Same with a precomputed B intersected with (0, M], M >= n.
SignalF average_AN(const WindowB& b_prefix, std::int64_t n, const SignalF& f, unsigned threads = 1);

/// Pointwise max over the scale set of |A_N f|.
SignalF maximal_fn(const SequenceFamily& family, const ScaleSet& scales, const SignalF& f,
                   const MaximalOptions& opts = {});
SignalF maximal_fn(const WindowB& b_prefix, const ScaleSet& scales, const SignalF& f, unsigned threads = 1);

struct WeakTypeRow {
  Rational lambda;
  std::int64_t level_size = 0;
  Rational normalized;  // lambda * level_size / l1
};

struct WeakTypeReport {
  std::vector<WeakTypeRow> rows;
  Rational empirical_constant;
};

/// {2^-j : 0 <= j <= 40} intersected with (0, max_value].
std::vector<Rational> default_lambda_grid(const Rational& max_value);

/// DegenerateInputError when l1 <= 0 or mf is identically zero;
/// PreconditionError unless the grid is positive and strictly decreasing.
WeakTypeReport weak11_sweep(const SignalF& mf, const Rational& l1, const std::vector<Rational>& lambda_grid);

}  // namespace regseq
