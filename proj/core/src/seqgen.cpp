#include "regseq/seqgen.hpp"

#include <algorithm>
#include <cmath>

#include "regseq/errors.hpp"
#include "regseq/parallel.hpp"
#include "regseq/stats.hpp"

namespace regseq {

namespace {

constexpr std::int64_t kControlStart = 3;

double control_phi(double y) {
  if (!(y >= 3.0)) throw DomainError("phi: y below the control sequence's range");
  for (int k = 1; k < 64; ++k) {
    const double next = std::exp(static_cast<double>(k + 1));
    if (y < k * next) return y / k;
    if (y < (k + 1) * next) return next;
  }
  throw DomainError("phi: y too large for the control sequence");
}

}  // namespace

SequenceFamily SequenceFamily::regular(RegularFn h) { return SequenceFamily(std::move(h)); }

SequenceFamily SequenceFamily::rosenblatt() { return SequenceFamily(RosenblattControl{}); }

const RegularFn& SequenceFamily::regular_fn() const {
  if (const auto* h = std::get_if<RegularFn>(&variant_)) return *h;
  throw PreconditionError("operation requires a regular family");
}

std::string SequenceFamily::tag() const {
  if (const auto* h = std::get_if<RegularFn>(&variant_)) return h->tag();
  return "rosenblatt";
}

std::int64_t SequenceFamily::first_index() const {
  if (const auto* h = std::get_if<RegularFn>(&variant_)) return h->m0();
  return kControlStart;
}

std::int64_t SequenceFamily::element(std::int64_t index) const {
  if (const auto* h = std::get_if<RegularFn>(&variant_)) return floor_h(*h, index);
  if (index < kControlStart) throw DomainError("control sequence starts at n = 3");
  return index * floor_log(index);
}

double SequenceFamily::phi(double y) const {
  if (const auto* h = std::get_if<RegularFn>(&variant_)) return inverse_phi(*h, y);
  return control_phi(y);
}

double SequenceFamily::phi_domain_min() const {
  if (const auto* h = std::get_if<RegularFn>(&variant_)) return h->h_at_m0();
  return 3.0;
}

double SequenceFamily::phi_clamped(double y) const {
  if (y < phi_domain_min()) return static_cast<double>(first_index());
  return phi(y);
}

WindowB enumerate_B(const SequenceFamily& family, std::int64_t lo, std::int64_t hi, const EnumerateOptions& opts) {
  if (lo < 0 || lo >= hi) throw PreconditionError("enumerate_B requires 0 <= lo < hi");
  if (hi > opts.max_n) {
    throw ResourceError("enumerate_B: hi = " + std::to_string(hi) + " exceeds cap " + std::to_string(opts.max_n));
  }
  WindowB w;
  w.family_tag = family.tag();
  w.lo = lo;
  w.hi = hi;

  const std::int64_t first = family.first_index();
  // Indices below phi(lo) map below lo and indices above phi(hi + 1) map
  // above hi; one index of slack on each side absorbs rounding in phi.
  const auto start = std::max<std::int64_t>(
      first, static_cast<std::int64_t>(std::floor(family.phi_clamped(static_cast<double>(lo)))) - 1);
  const auto stop = static_cast<std::int64_t>(std::ceil(family.phi_clamped(static_cast<double>(hi) + 1.0))) + 1;
  if (stop < start) return w;

  const auto span = static_cast<std::size_t>(stop - start + 1);
  const std::size_t chunks = span < (1u << 15) ? 1 : 64;
  std::vector<std::vector<std::int64_t>> values(chunks);
  parallel_chunks(span, chunks, opts.threads, [&](std::size_t c, std::size_t b, std::size_t e) {
    auto& out = values[c];
    out.reserve(e - b);
    for (std::size_t i = b; i < e; ++i) out.push_back(family.element(start + static_cast<std::int64_t>(i)));
  });

  std::int64_t index = start;
  for (const auto& chunk : values) {
    for (std::int64_t v : chunk) {
      if (v > lo && v <= hi && (w.elements.empty() || w.elements.back() != v)) {
        w.elements.push_back(v);
        w.indices.push_back(index);
      }
      ++index;
    }
  }
  return w;
}

std::int64_t count_B(const SequenceFamily& family, std::int64_t n, const EnumerateOptions& opts) {
  if (n < 1) return 0;
  return static_cast<std::int64_t>(enumerate_B(family, 0, n, opts).count());
}

bool membership(const SequenceFamily& family, std::int64_t n) {
  if (n < 1) return false;
  const std::int64_t first = family.first_index();
  const double y = static_cast<double>(n);
  const auto centre = y < family.phi_domain_min()
                          ? first
                          : static_cast<std::int64_t>(std::ceil(family.phi(y)));
  for (std::int64_t k = -1; k <= 1; ++k) {
    const std::int64_t idx = centre + k;
    if (idx >= first && family.element(idx) == n) return true;
  }
  return false;
}

CardinalityReport cardinality_report(const SequenceFamily& family, const std::vector<std::int64_t>& n_list,
                                     const EnumerateOptions& opts) {
  if (n_list.empty()) throw PreconditionError("cardinality_report: empty N list");
  if (!std::is_sorted(n_list.begin(), n_list.end()) ||
      std::adjacent_find(n_list.begin(), n_list.end()) != n_list.end()) {
    throw PreconditionError("cardinality_report: N list must be strictly increasing");
  }
  if (n_list.front() < 1) throw PreconditionError("cardinality_report: N must be positive");

  const WindowB all = enumerate_B(family, 0, n_list.back(), opts);
  CardinalityReport report;
  std::vector<double> xs, ys;
  bool underflow = false;
  for (std::int64_t n : n_list) {
    CardinalityRow row;
    row.n = n;
    row.count = std::upper_bound(all.elements.begin(), all.elements.end(), n) - all.elements.begin();
    row.phi = family.phi(static_cast<double>(n));
    row.ratio = static_cast<double>(row.count) / row.phi;
    report.rows.push_back(row);
    const double dev = std::abs(row.ratio - 1.0);
    if (dev == 0.0) {
      underflow = true;
    } else {
      xs.push_back(std::log(static_cast<double>(n)));
      ys.push_back(std::log(dev));
    }
  }
  if (!underflow) {
    if (auto fit = fit_line(xs, ys)) report.fitted_delta = -fit->slope;
  }
  return report;
}

}  // namespace regseq
