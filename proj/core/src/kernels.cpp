#include "regseq/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "regseq/errors.hpp"
#include "regseq/parallel.hpp"

namespace regseq {

namespace {

constexpr std::size_t kSweepChunks = 16;
constexpr std::size_t kGapTile = 4096;

void require_gap(std::int64_t x, double phi_n) {
  if (x <= 0 || x > static_cast<std::int64_t>(std::ceil(phi_n))) {
    throw PreconditionError("gap x = " + std::to_string(x) + " outside 0 < x <= ceil(phi(N))");
  }
}

}  // namespace

std::int64_t Kernel::max_gap() const { return static_cast<std::int64_t>(std::ceil(phi_n)); }

std::int64_t Kernel::sup_gap() const { return static_cast<std::int64_t>(std::floor(phi_n)); }

Kernel build_kernel(const SequenceFamily& family, std::int64_t n, const KernelOptions& opts) {
  if (n < 8) throw PreconditionError("build_kernel requires N >= 8");
  const WindowB all = enumerate_B(family, 0, n, opts.enumerate);
  if (all.count() == 0) throw DegenerateInputError("build_kernel: B_N is empty for N = " + std::to_string(n));
  Kernel k;
  k.n = n;
  k.total_count = static_cast<std::int64_t>(all.count());
  k.phi_n = family.phi_clamped(static_cast<double>(n));
  // n > N/4 over the reals is n >= floor(N/4) + 1 over the integers.
  const std::int64_t lo = n / 4;
  auto first = std::upper_bound(all.elements.begin(), all.elements.end(), lo);
  k.support.assign(first, all.elements.end());
  return k;
}

Rational AutocorrProfile::value(std::int64_t x) const {
  const std::int64_t ax = x < 0 ? -x : x;
  if (ax > max_gap()) throw PreconditionError("profile value requested beyond stored gap range");
  return Rational(pair_counts[static_cast<std::size_t>(ax)], denominator());
}

Rational AutocorrProfile::total() const {
  std::int64_t pairs = 0;
  for (std::size_t x = 1; x < pair_counts.size(); ++x) pairs += pair_counts[x];
  return Rational(pair_counts.front() + 2 * (pairs + tail_pairs), denominator());
}

Rational AutocorrProfile::sup_scaled() const {
  const std::int64_t x = argmax();
  if (x == 0) return Rational(0);
  return Rational(n * pair_counts[static_cast<std::size_t>(x)], denominator());
}

std::int64_t AutocorrProfile::argmax() const {
  std::int64_t best = 0;
  std::int64_t best_count = 0;
  const std::int64_t last = std::min(sup_gap, max_gap());
  for (std::int64_t x = 1; x <= last; ++x) {
    if (pair_counts[static_cast<std::size_t>(x)] > best_count) {
      best_count = pair_counts[static_cast<std::size_t>(x)];
      best = x;
    }
  }
  return best;
}

std::uint64_t AutocorrProfile::checksum() const {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (std::int64_t v : pair_counts) {
    auto u = static_cast<std::uint64_t>(v);
    for (int byte = 0; byte < 8; ++byte) {
      hash ^= (u >> (8 * byte)) & 0xffU;
      hash *= 0x100000001b3ULL;
    }
  }
  return hash;
}

AutocorrProfile autocorr_direct(const Kernel& kernel, unsigned threads) {
  AutocorrProfile p;
  p.n = kernel.n;
  p.total_count = kernel.total_count;
  p.support_size = static_cast<std::int64_t>(kernel.support.size());
  p.sup_gap = kernel.sup_gap();
  const std::int64_t max_gap = kernel.max_gap();
  const auto& s = kernel.support;
  const std::size_t size = s.size();
  const auto width = static_cast<std::size_t>(max_gap) + 1;
  p.pair_counts.assign(width, 0);
  p.pair_counts[0] = p.support_size;
  if (size < 2) return p;

  // Each chunk owns a disjoint gap range and sweeps it tile by tile, keeping
  // one cursor per support point, so the live histogram stays cache-sized.
  // Gap 0 is handled above; chunks cover gaps 1..max_gap.
  const auto gaps = static_cast<std::size_t>(max_gap);
  parallel_chunks(gaps, kSweepChunks, threads, [&](std::size_t, std::size_t b, std::size_t e) {
    const auto gap_lo = static_cast<std::int64_t>(b) + 1;
    const auto gap_hi = static_cast<std::int64_t>(e) + 1;  // exclusive
    std::vector<std::uint32_t> cursor(size);
    for (std::size_t i = 0; i < size; ++i) {
      cursor[i] = static_cast<std::uint32_t>(std::lower_bound(s.begin(), s.end(), s[i] + gap_lo) - s.begin());
    }
    std::vector<std::uint32_t> tile(kGapTile);
    for (std::int64_t t0 = gap_lo; t0 < gap_hi; t0 += static_cast<std::int64_t>(kGapTile)) {
      const std::int64_t t1 = std::min(gap_hi, t0 + static_cast<std::int64_t>(kGapTile));
      std::fill(tile.begin(), tile.end(), 0U);
      for (std::size_t i = 0; i < size; ++i) {
        const std::int64_t base = s[i];
        const std::int64_t limit = base + t1;
        std::size_t j = cursor[i];
        for (; j < size && s[j] < limit; ++j) ++tile[static_cast<std::size_t>(s[j] - base - t0)];
        cursor[i] = static_cast<std::uint32_t>(j);
      }
      for (std::int64_t x = t0; x < t1; ++x) {
        p.pair_counts[static_cast<std::size_t>(x)] = tile[static_cast<std::size_t>(x - t0)];
      }
    }
  });

  // Pairs beyond the stored range, counted by binary search instead of the sweep.
  for (std::size_t i = 0; i < size; ++i) {
    p.tail_pairs += s.end() - std::upper_bound(s.begin() + static_cast<std::ptrdiff_t>(i), s.end(), s[i] + max_gap);
  }
  return p;
}

std::vector<std::int64_t> autocorr_reflected(const Kernel& kernel, unsigned threads) {
  const std::int64_t max_gap = kernel.max_gap();
  const auto& s = kernel.support;
  const std::size_t size = s.size();
  std::vector<std::int64_t> counts(static_cast<std::size_t>(max_gap) + 1, 0);
  counts[0] = static_cast<std::int64_t>(size);
  if (size < 2) return counts;
  // Descending cursors: for each point, walk downward to partners below it.
  const auto gaps = static_cast<std::size_t>(max_gap);
  parallel_chunks(gaps, kSweepChunks, threads, [&](std::size_t, std::size_t b, std::size_t e) {
    const auto gap_lo = static_cast<std::int64_t>(b) + 1;
    const auto gap_hi = static_cast<std::int64_t>(e) + 1;
    // cursor[i] = one past the highest j with s[j] <= s[i] - gap_lo.
    std::vector<std::uint32_t> cursor(size);
    for (std::size_t i = 0; i < size; ++i) {
      cursor[i] = static_cast<std::uint32_t>(std::upper_bound(s.begin(), s.end(), s[i] - gap_lo) - s.begin());
    }
    std::vector<std::uint32_t> tile(kGapTile);
    for (std::int64_t t0 = gap_lo; t0 < gap_hi; t0 += static_cast<std::int64_t>(kGapTile)) {
      const std::int64_t t1 = std::min(gap_hi, t0 + static_cast<std::int64_t>(kGapTile));
      std::fill(tile.begin(), tile.end(), 0U);
      for (std::size_t i = size; i-- > 0;) {
        const std::int64_t base = s[i];
        const std::int64_t floor_value = base - t1;
        std::size_t j = cursor[i];
        for (; j > 0 && s[j - 1] > floor_value; --j) ++tile[static_cast<std::size_t>(base - s[j - 1] - t0)];
        cursor[i] = static_cast<std::uint32_t>(j);
      }
      for (std::int64_t x = t0; x < t1; ++x) counts[static_cast<std::size_t>(x)] = tile[static_cast<std::size_t>(x - t0)];
    }
  });
  return counts;
}

std::vector<std::int64_t> autocorr_two_sided(const Kernel& kernel, std::int64_t max_gap) {
  if (max_gap < 0) throw PreconditionError("autocorr_two_sided: negative gap range");
  const auto& s = kernel.support;
  std::vector<std::int64_t> counts(static_cast<std::size_t>(2 * max_gap + 1), 0);
  for (std::size_t i = s.size(); i-- > 0;) {
    // Pairs (s_i, s_j) with s_j - s_i = x for x <= 0, then x > 0.
    for (std::size_t j = i + 1; j-- > 0;) {
      const std::int64_t x = s[j] - s[i];
      if (x < -max_gap) break;
      ++counts[static_cast<std::size_t>(x + max_gap)];
    }
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      const std::int64_t x = s[j] - s[i];
      if (x > max_gap) break;
      ++counts[static_cast<std::size_t>(x + max_gap)];
    }
  }
  return counts;
}

std::int64_t paircount_oracle(const SequenceFamily& family, std::int64_t n, std::int64_t x) {
  require_gap(x, family.phi_clamped(static_cast<double>(n)));
  std::int64_t count = 0;
  for (std::int64_t v = n / 4 + 1; v + x <= n; ++v) {
    if (membership(family, v) && membership(family, v + x)) ++count;
  }
  return count;
}

std::vector<std::int64_t> paircount_oracle_profile(const SequenceFamily& family, std::int64_t n) {
  const auto max_gap = static_cast<std::int64_t>(std::ceil(family.phi_clamped(static_cast<double>(n))));
  const std::int64_t lo = n / 4 + 1;
  std::vector<char> member(static_cast<std::size_t>(n - lo + 1));
  for (std::int64_t v = lo; v <= n; ++v) member[static_cast<std::size_t>(v - lo)] = membership(family, v) ? 1 : 0;
  std::vector<std::int64_t> counts(static_cast<std::size_t>(max_gap) + 1, 0);
  for (std::int64_t x = 0; x <= max_gap; ++x) {
    std::int64_t c = 0;
    for (std::int64_t v = lo; v + x <= n; ++v) {
      c += member[static_cast<std::size_t>(v - lo)] & member[static_cast<std::size_t>(v + x - lo)];
    }
    counts[static_cast<std::size_t>(x)] = c;
  }
  return counts;
}

IndexWindow interval_index_window(const RegularFn& h, std::int64_t n) {
  const double quarter = static_cast<double>(n) / 4.0;
  const double twice = 2.0 * static_cast<double>(n);
  IndexWindow w;
  // Outward rounding: first never exceeds ceil(phi(N/4)), last never falls
  // below floor(phi(2N)), whatever the rounding inside inverse_phi.
  if (quarter <= h.h_at_m0()) {
    w.first = h.m0();
  } else {
    w.first = static_cast<std::int64_t>(std::ceil(inverse_phi(h, quarter)));
    while (w.first - 1 >= h.m0() && h.value_unchecked(static_cast<double>(w.first - 1)) >= quarter) --w.first;
  }
  if (twice < h.h_at_m0()) {
    w.last = h.m0() - 1;
    return w;
  }
  w.last = static_cast<std::int64_t>(std::floor(inverse_phi(h, twice)));
  while (h.value_unchecked(static_cast<double>(w.last + 1)) <= twice) ++w.last;
  return w;
}

std::int64_t paircount_interval(const RegularFn& h, std::int64_t n, std::int64_t x) {
  const double phi_n = static_cast<double>(n) < h.h_at_m0() ? static_cast<double>(h.m0())
                                                              : inverse_phi(h, static_cast<double>(n));
  require_gap(x, phi_n);
  const IndexWindow w = interval_index_window(h, n);
  const std::int64_t s_cap = w.last;  // 0 < s <= phi(2N)
  const std::int64_t lower = x - 1;
  const std::int64_t upper = x + 1;
  std::int64_t total = 0;
  for (std::int64_t m = w.first; m <= w.last; ++m) {
    const double hm = h.value_unchecked(static_cast<double>(m));
    // s1: least s >= 1 with g(s) >= x - 1.
    auto s1 = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::ceil(inverse_phi(h, hm + static_cast<double>(lower)))) - m);
    while (s1 > 1 && compare_gap(h, m + s1 - 1, m, lower) >= 0) --s1;
    while (compare_gap(h, m + s1, m, lower) < 0) ++s1;
    // s2: greatest s >= 0 with g(s) <= x + 1 (g(0) = 0 <= x + 1).
    auto s2 = std::max<std::int64_t>(
        0, static_cast<std::int64_t>(std::floor(inverse_phi(h, hm + static_cast<double>(upper)))) - m);
    while (compare_gap(h, m + s2 + 1, m, upper) <= 0) ++s2;
    while (s2 >= 1 && compare_gap(h, m + s2, m, upper) > 0) --s2;
    s2 = std::min(s2, s_cap);
    if (s2 >= s1) total += s2 - s1 + 1;
  }
  return total;
}

StepGapReport step_gap_report(const RegularFn& h, std::int64_t n) {
  if (n < 16) throw PreconditionError("step_gap_report requires N >= 16");
  StepGapReport r;
  r.n = n;
  r.phi_n = inverse_phi(h, static_cast<double>(n));
  r.reference = h.derivative_unchecked(r.phi_n);
  r.scale = static_cast<double>(n) / r.phi_n;
  const double quarter = static_cast<double>(n) / 4.0;
  const double lo = quarter <= h.h_at_m0() ? static_cast<double>(h.m0()) : inverse_phi(h, quarter);
  const double hi = inverse_phi(h, 2.0 * static_cast<double>(n));
  constexpr int kSamples = 32;
  r.min_ratio = INFINITY;
  r.max_ratio = -INFINITY;
  for (int i = 0; i < kSamples; ++i) {
    const double t = static_cast<double>(i) / (kSamples - 1);
    auto m = static_cast<std::int64_t>(std::llround(lo * std::pow(hi / lo, t)));
    m = std::max(m, h.m0());
    StepGapSample sample;
    sample.m = m;
    sample.gap = h.value_unchecked(static_cast<double>(m + 1)) - h.value_unchecked(static_cast<double>(m));
    sample.ratio = sample.gap / r.scale;
    r.min_ratio = std::min(r.min_ratio, sample.ratio);
    r.max_ratio = std::max(r.max_ratio, sample.ratio);
    r.samples.push_back(sample);
  }
  return r;
}

BoundReport bound_report(const Kernel& kernel, const AutocorrProfile& profile) {
  BoundReport r;
  r.n = kernel.n;
  r.sup_scaled = profile.sup_scaled();
  r.argmax_x = profile.argmax();
  r.mass_num = static_cast<std::int64_t>(kernel.support.size());
  r.mass_den = kernel.total_count;
  r.checksum = profile.checksum();
  const double scale = kernel.phi_n * kernel.phi_n / static_cast<double>(kernel.n);
  const std::int64_t peak = r.argmax_x == 0 ? 0 : profile.pair_counts[static_cast<std::size_t>(r.argmax_x)];
  r.paircount_bound_ratio = static_cast<double>(peak) / scale;
  return r;
}

BoundReport bound_scan(const SequenceFamily& family, std::int64_t n, const KernelOptions& opts) {
  if (n < 16) throw PreconditionError("bound_scan requires N >= 16");
  const Kernel k = build_kernel(family, n, opts);
  return bound_report(k, autocorr_direct(k, opts.threads));
}

}  // namespace regseq
