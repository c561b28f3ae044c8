#include "regseq/maximal.hpp"

#include <algorithm>
#include <random>

#include "regseq/errors.hpp"
#include "regseq/parallel.hpp"

namespace regseq {

namespace {

using i128 = __int128;

constexpr std::size_t kRangeChunks = 64;
constexpr std::int64_t kMaxDenseSpan = std::int64_t{1} << 28;

// f with values a_i / D for a common denominator D.
struct ScaledAtoms {
  std::vector<std::int64_t> positions;
  std::vector<std::int64_t> numerators;
  std::int64_t denominator = 1;
};

ScaledAtoms scale_atoms(const SignalF& f) {
  ScaledAtoms s;
  for (const auto& [pos, v] : f.entries()) s.denominator = checked_lcm(s.denominator, v.den());
  for (const auto& [pos, v] : f.entries()) {
    const i128 num = static_cast<i128>(v.num()) * (s.denominator / v.den());
    if (num > INT64_MAX || num < INT64_MIN) throw OverflowError("signal numerator overflow");
    s.positions.push_back(pos);
    s.numerators.push_back(static_cast<std::int64_t>(num));
  }
  return s;
}

// sum_{n in elements[0, count)} f(x + n) * D for x in [xl, xr).
void accumulate(const std::vector<std::int64_t>& elements, std::size_t count, const ScaledAtoms& atoms,
                std::int64_t xl, std::int64_t xr, std::vector<std::int64_t>& out) {
  out.assign(static_cast<std::size_t>(xr - xl), 0);
  const auto begin = elements.begin();
  const auto end = elements.begin() + static_cast<std::ptrdiff_t>(count);
  for (std::size_t i = 0; i < atoms.positions.size(); ++i) {
    const std::int64_t p = atoms.positions[i];
    const std::int64_t a = atoms.numerators[i];
    // x = p - n in [xl, xr)  <=>  n in (p - xr, p - xl].
    auto it = std::upper_bound(begin, end, p - xr);
    const auto stop = std::upper_bound(it, end, p - xl);
    for (; it != stop; ++it) out[static_cast<std::size_t>(p - *it - xl)] += a;
  }
}

struct Range {
  std::int64_t lo = 0;
  std::int64_t hi = 0;  // exclusive
};

Range output_range(const ScaledAtoms& atoms, const std::vector<std::int64_t>& elements, std::size_t count) {
  const std::int64_t min_n = elements.front();
  const std::int64_t max_n = elements[count - 1];
  Range r{atoms.positions.front() - max_n, atoms.positions.back() - min_n + 1};
  if (r.hi - r.lo > kMaxDenseSpan) throw ResourceError("signal support too wide for dense evaluation");
  return r;
}

std::size_t prefix_count(const WindowB& b, std::int64_t n) {
  if (b.lo != 0 || b.hi < n) throw PreconditionError("B prefix window must cover (0, N]");
  return static_cast<std::size_t>(std::upper_bound(b.elements.begin(), b.elements.end(), n) - b.elements.begin());
}

// Uniform integer in [lo, hi] by rejection from the raw engine output; the
// standard distributions are not specified bit-for-bit across libraries.
std::int64_t uniform_draw(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  std::uint64_t u;
  do {
    u = rng();
  } while (u >= limit);
  return lo + static_cast<std::int64_t>(u % span);
}

}  // namespace

SignalF SignalF::from_entries(std::vector<Entry> entries) {
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return a.first < b.first; });
  SignalF f;
  for (auto& e : entries) {
    if (!f.entries_.empty() && f.entries_.back().first == e.first) {
      f.entries_.back().second += e.second;
    } else {
      f.entries_.push_back(std::move(e));
    }
  }
  std::erase_if(f.entries_, [](const Entry& e) { return e.second.is_zero(); });
  try {
    Rational sum(0);
    for (const auto& e : f.entries_) sum += e.second.abs();
    f.l1_ = sum;
  } catch (const OverflowError&) {
    f.l1_.reset();
  }
  return f;
}

const Rational& SignalF::l1_norm() const {
  if (!l1_) throw OverflowError("l1 norm exceeds 64-bit rational range");
  return *l1_;
}

SignalF SignalF::from_map(const std::map<std::int64_t, Rational>& values) {
  return from_entries(std::vector<Entry>(values.begin(), values.end()));
}

Rational SignalF::at(std::int64_t x) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), x,
                             [](const Entry& e, std::int64_t v) { return e.first < v; });
  if (it == entries_.end() || it->first != x) return Rational(0);
  return it->second;
}

Rational SignalF::max_value() const {
  Rational best(0);
  for (const auto& e : entries_) best = std::max(best, e.second);
  return best;
}

bool SignalF::nonnegative() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const Entry& e) { return e.second.num() > 0; });
}

SignalF SignalF::shifted(std::int64_t k) const {
  SignalF g = *this;
  for (auto& e : g.entries_) e.first += k;
  return g;
}

SignalF SignalF::scaled(const Rational& t) const {
  std::vector<Entry> out = entries_;
  for (auto& e : out) e.second *= t;
  return from_entries(std::move(out));
}

void SignalF::validate() const {
  Rational sum(0);
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i > 0 && entries_[i - 1].first >= entries_[i].first) throw Error("signal entries not strictly sorted");
    if (entries_[i].second.is_zero()) throw Error("signal stores an explicit zero");
  }
  if (!l1_) return;
  for (const auto& e : entries_) sum += e.second.abs();
  if (sum != *l1_) throw Error("signal l1 norm does not match its entries");
}

SignalF delta_signal(std::int64_t at) { return SignalF::from_entries({{at, Rational(1)}}); }

SignalF interval_signal(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw PreconditionError("interval_signal requires lo <= hi");
  std::vector<SignalF::Entry> e;
  for (std::int64_t x = lo; x <= hi; ++x) e.emplace_back(x, Rational(1));
  return SignalF::from_entries(std::move(e));
}

SignalF random_signal(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::map<std::int64_t, Rational> values;
  for (int i = 0; i < 64; ++i) {
    const std::int64_t pos = uniform_draw(rng, -(std::int64_t{1} << 16), std::int64_t{1} << 16);
    const std::int64_t val = uniform_draw(rng, 1, 16);
    values.try_emplace(pos, Rational(val));
  }
  return SignalF::from_map(values);
}

ScaleSet::ScaleSet(std::vector<std::int64_t> scales) : scales_(std::move(scales)) {
  if (scales_.empty()) throw PreconditionError("scale set is empty");
  for (std::size_t i = 0; i < scales_.size(); ++i) {
    if (scales_[i] < 8) throw PreconditionError("scales must be >= 8");
    if (i > 0 && scales_[i - 1] >= scales_[i]) throw PreconditionError("scales must be sorted and distinct");
  }
}

ScaleSet ScaleSet::dyadic(int j_min, int j_max) {
  if (j_min > j_max || j_min < 0 || j_max > 62) throw PreconditionError("invalid dyadic range");
  std::vector<std::int64_t> s;
  for (int j = j_min; j <= j_max; ++j) s.push_back(std::int64_t{1} << j);
  return ScaleSet(std::move(s));
}

ScaleSet ScaleSet::range(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw PreconditionError("invalid scale range");
  std::vector<std::int64_t> s;
  for (std::int64_t n = lo; n <= hi; ++n) s.push_back(n);
  return ScaleSet(std::move(s));
}

bool ScaleSet::is_dyadic() const {
  return std::all_of(scales_.begin(), scales_.end(), [](std::int64_t n) { return (n & (n - 1)) == 0; });
}

SignalF average_AN(const SequenceFamily& family, std::int64_t n, const SignalF& f, const MaximalOptions& opts) {
  return average_AN(enumerate_B(family, 0, n, opts.enumerate), n, f, opts.threads);
}

SignalF average_AN(const WindowB& b_prefix, std::int64_t n, const SignalF& f, unsigned threads) {
  const std::size_t count = prefix_count(b_prefix, n);
  if (count == 0) throw DegenerateInputError("average_AN: B_N is empty for N = " + std::to_string(n));
  if (f.empty()) return {};
  const ScaledAtoms atoms = scale_atoms(f);
  const Range r = output_range(atoms, b_prefix.elements, count);
  const auto span = static_cast<std::size_t>(r.hi - r.lo);
  const std::int64_t den = static_cast<std::int64_t>(
      static_cast<i128>(atoms.denominator) * static_cast<std::int64_t>(count) > INT64_MAX
          ? throw OverflowError("average denominator overflow")
          : atoms.denominator * static_cast<std::int64_t>(count));

  std::vector<std::vector<SignalF::Entry>> parts(kRangeChunks);
  parallel_chunks(span, kRangeChunks, threads, [&](std::size_t c, std::size_t b, std::size_t e) {
    const std::int64_t xl = r.lo + static_cast<std::int64_t>(b);
    const std::int64_t xr = r.lo + static_cast<std::int64_t>(e);
    std::vector<std::int64_t> sums;
    accumulate(b_prefix.elements, count, atoms, xl, xr, sums);
    for (std::size_t i = 0; i < sums.size(); ++i) {
      if (sums[i] != 0) parts[c].emplace_back(xl + static_cast<std::int64_t>(i), Rational(sums[i], den));
    }
  });
  std::vector<SignalF::Entry> all;
  for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  return SignalF::from_entries(std::move(all));
}

SignalF maximal_fn(const SequenceFamily& family, const ScaleSet& scales, const SignalF& f,
                   const MaximalOptions& opts) {
  return maximal_fn(enumerate_B(family, 0, scales.max(), opts.enumerate), scales, f, opts.threads);
}

SignalF maximal_fn(const WindowB& b_prefix, const ScaleSet& scales, const SignalF& f, unsigned threads) {
  std::vector<std::size_t> counts;
  for (std::int64_t n : scales.values()) {
    counts.push_back(prefix_count(b_prefix, n));
    if (counts.back() == 0) throw DegenerateInputError("maximal_fn: B_N is empty for N = " + std::to_string(n));
  }
  if (f.empty()) return {};
  const ScaledAtoms atoms = scale_atoms(f);
  const Range r = output_range(atoms, b_prefix.elements, counts.back());
  const auto span = static_cast<std::size_t>(r.hi - r.lo);

  std::vector<std::vector<SignalF::Entry>> parts(kRangeChunks);
  parallel_chunks(span, kRangeChunks, threads, [&](std::size_t c, std::size_t b, std::size_t e) {
    const std::int64_t xl = r.lo + static_cast<std::int64_t>(b);
    const std::int64_t xr = r.lo + static_cast<std::int64_t>(e);
    // Running max as |sum| / (D * #B_N), stored as (|sum|, #B_N).
    std::vector<std::int64_t> best_sum(e - b, 0);
    std::vector<std::int64_t> best_count(e - b, 1);
    std::vector<std::int64_t> sums;
    for (std::size_t k = 0; k < counts.size(); ++k) {
      accumulate(b_prefix.elements, counts[k], atoms, xl, xr, sums);
      const auto cnt = static_cast<std::int64_t>(counts[k]);
      for (std::size_t i = 0; i < sums.size(); ++i) {
        const std::int64_t v = sums[i] < 0 ? -sums[i] : sums[i];
        if (static_cast<i128>(v) * best_count[i] > static_cast<i128>(best_sum[i]) * cnt) {
          best_sum[i] = v;
          best_count[i] = cnt;
        }
      }
    }
    for (std::size_t i = 0; i < best_sum.size(); ++i) {
      if (best_sum[i] == 0) continue;
      const i128 den = static_cast<i128>(atoms.denominator) * best_count[i];
      if (den > INT64_MAX) throw OverflowError("maximal denominator overflow");
      parts[c].emplace_back(xl + static_cast<std::int64_t>(i), Rational(best_sum[i], static_cast<std::int64_t>(den)));
    }
  });
  std::vector<SignalF::Entry> all;
  for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  return SignalF::from_entries(std::move(all));
}

std::vector<Rational> default_lambda_grid(const Rational& max_value) {
  std::vector<Rational> grid;
  for (int j = 0; j <= 40; ++j) {
    Rational lambda(1, std::int64_t{1} << j);
    if (lambda <= max_value) grid.push_back(lambda);
  }
  return grid;
}

WeakTypeReport weak11_sweep(const SignalF& mf, const Rational& l1, const std::vector<Rational>& lambda_grid) {
  if (l1.num() <= 0) throw DegenerateInputError("weak11_sweep: zero signal");
  if (mf.empty()) throw DegenerateInputError("weak11_sweep: maximal function vanishes");
  for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
    if (lambda_grid[i].num() <= 0) throw PreconditionError("lambda grid must be positive");
    if (i > 0 && !(lambda_grid[i] < lambda_grid[i - 1])) {
      throw PreconditionError("lambda grid must be strictly decreasing");
    }
  }
  std::vector<Rational> values;
  values.reserve(mf.size());
  for (const auto& e : mf.entries()) values.push_back(e.second.abs());
  std::sort(values.begin(), values.end(), std::greater<>());

  WeakTypeReport report;
  for (const Rational& lambda : lambda_grid) {
    WeakTypeRow row;
    row.lambda = lambda;
    row.level_size = std::partition_point(values.begin(), values.end(),
                                          [&](const Rational& v) { return v > lambda; }) -
                     values.begin();
    row.normalized = lambda * Rational(row.level_size) / l1;
    report.empirical_constant = std::max(report.empirical_constant, row.normalized);
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace regseq
