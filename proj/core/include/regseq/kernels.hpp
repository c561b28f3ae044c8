#pragma once

// Truncated kernel K_N (uniform weight 1/#B_N on B intersected with
// (N/4, N]), its exact autocorrelation K_N * K_N~, and the pair counts
// #M(x, N) computed three independent ways: a sweep over the sorted support,
// a double membership loop over the integer window, and the interval count
// over indices m with x - 1 <= h(m + s) - h(m) <= x + 1.

#include <cstdint>
#include <string>
#include <vector>

#include "regseq/rational.hpp"
#include "regseq/seqgen.hpp"

namespace regseq {

struct Kernel {
  std::int64_t n = 0;
  /// #B_N; the weight denominator.
  std::int64_t total_count = 0;
  /// phi(N) of the family, fixes the scanned gap range.
  double phi_n = 0.0;
  /// B intersected with (N/4, N].
  std::vector<std::int64_t> support;

  Rational weight() const { return Rational(1, total_count); }
  Rational mass() const { return Rational(static_cast<std::int64_t>(support.size()), total_count); }
  /// ceil(phi(N)): largest gap stored in a profile.
  std::int64_t max_gap() const;
  /// floor(phi(N)): largest gap entering the supremum.
  std::int64_t sup_gap() const;
};

struct KernelOptions {
  EnumerateOptions enumerate{};
  unsigned threads = 1;
};

/// DegenerateInputError when #B_N = 0, PreconditionError when N < 8.
Kernel build_kernel(const SequenceFamily& family, std::int64_t n, const KernelOptions& opts = {});

struct AutocorrProfile {
  std::int64_t n = 0;
  std::int64_t total_count = 0;
  std::int64_t support_size = 0;
  /// pair_counts[x] = #{s in support : s + x in support}, 0 <= x <= max_gap.
  std::vector<std::int64_t> pair_counts;
  /// Ordered pairs (s, t) of support points with t - s > max_gap, counted
  /// by binary search independently of pair_counts.
  std::int64_t tail_pairs = 0;
  std::int64_t sup_gap = 0;

  std::int64_t max_gap() const { return static_cast<std::int64_t>(pair_counts.size()) - 1; }
  std::int64_t denominator() const { return total_count * total_count; }
  /// (K_N * K_N~)(x) for any integer x, exact. Gaps beyond max_gap are
  /// outside the stored range and raise PreconditionError.
  Rational value(std::int64_t x) const;
  /// Sum over all of Z of the profile, using symmetry and tail_pairs.
  Rational total() const;
  /// max over 0 < x <= floor(phi(N)) of N * value(x), and its first argmax.
  Rational sup_scaled() const;
  std::int64_t argmax() const;
  /// FNV-1a over the pair counts.
  std::uint64_t checksum() const;
};

AutocorrProfile autocorr_direct(const Kernel& kernel, unsigned threads = 1);

/// reflected[d] = #{s in support : s - d in support} for 0 <= d <= max_gap,
/// from a descending sweep. Equals pair_counts when the profile is symmetric.
std::vector<std::int64_t> autocorr_reflected(const Kernel& kernel, unsigned threads = 1);

/// Pair counts for every x in [-max_gap, max_gap] from a descending sweep
/// that never uses the symmetry; index x + max_gap.
std::vector<std::int64_t> autocorr_two_sided(const Kernel& kernel, std::int64_t max_gap);

/// #M(x, N) by a double membership loop over the integers of (N/4, N].
std::int64_t paircount_oracle(const SequenceFamily& family, std::int64_t n, std::int64_t x);

/// paircount_oracle for every 0 <= x <= ceil(phi(N)), sharing one membership
/// table of the window.
std::vector<std::int64_t> paircount_oracle_profile(const SequenceFamily& family, std::int64_t n);

struct IndexWindow {
  std::int64_t first = 0;  // ceil(phi(N/4)), clamped to m0
  std::int64_t last = 0;   // floor(phi(2N))
  std::int64_t size() const { return last >= first ? last - first + 1 : 0; }
};

IndexWindow interval_index_window(const RegularFn& h, std::int64_t n);

/// Sum over m in interval_index_window of #{s > 0 : x - 1 <= h(m+s) - h(m) <= x + 1}.
/// Dominates paircount_oracle.
std::int64_t paircount_interval(const RegularFn& h, std::int64_t n, std::int64_t x);

struct StepGapSample {
  std::int64_t m = 0;
  double gap = 0.0;    // h(m + 1) - h(m)
  double ratio = 0.0;  // gap / (N / phi(N))
};

struct StepGapReport {
  std::int64_t n = 0;
  double phi_n = 0.0;
  double reference = 0.0;  // h'(phi(N))
  double scale = 0.0;      // N / phi(N)
  std::vector<StepGapSample> samples;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
};

/// 32 log-spaced integer m in [phi(N/4), phi(2N)]. Requires N >= 16.
StepGapReport step_gap_report(const RegularFn& h, std::int64_t n);

struct BoundReport {
  std::int64_t n = 0;
  Rational sup_scaled;
  std::int64_t argmax_x = 0;
  std::int64_t mass_num = 0;
  std::int64_t mass_den = 1;
  std::uint64_t checksum = 0;
  /// max_x #M(x, N) / (phi(N)^2 / N).
  double paircount_bound_ratio = 0.0;
};

BoundReport bound_report(const Kernel& kernel, const AutocorrProfile& profile);
/// Requires N >= 16; a family with an empty window reports sup 0.
BoundReport bound_scan(const SequenceFamily& family, std::int64_t n, const KernelOptions& opts = {});

}  // namespace regseq
