#pragma once

// Integer sequences B = {floor(h(m))} for regular h, and the contrast
// sequence {n floor(ln n) : n >= 3}, enumerated over windows (lo, hi].

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "regseq/regvary.hpp"

namespace regseq {

/// a_n = n * floor(ln n), n >= 3.
struct RosenblattControl {};

class SequenceFamily {
 public:
  static SequenceFamily regular(RegularFn h);
  static SequenceFamily rosenblatt();

  bool is_regular() const { return std::holds_alternative<RegularFn>(variant_); }
  /// PreconditionError for the control family.
  const RegularFn& regular_fn() const;
  std::string tag() const;

  /// Smallest index: m0 for regular families, 3 for the control.
  std::int64_t first_index() const;
  /// Sequence value at an index >= first_index().
  std::int64_t element(std::int64_t index) const;

  /// Counting inverse: phi = h^{-1} for regular families; for the control,
  /// the generalized inverse sup{x >= 3 : x floor(ln x) <= y}.
  double phi(double y) const;
  /// Smallest y accepted by phi().
  double phi_domain_min() const;
  /// phi(y), or first_index() when y is below the domain.
  double phi_clamped(double y) const;

 private:
  explicit SequenceFamily(std::variant<RegularFn, RosenblattControl> v) : variant_(std::move(v)) {}

  std::variant<RegularFn, RosenblattControl> variant_;
};

inline constexpr std::int64_t kDefaultMaxN = std::int64_t{1} << 32;

struct EnumerateOptions {
  std::int64_t max_n = kDefaultMaxN;
  unsigned threads = 1;
};

/// B intersected with (lo, hi], sorted and deduplicated. `indices[i]` is the
/// smallest sequence index producing `elements[i]`.
struct WindowB {
  std::string family_tag;
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  std::vector<std::int64_t> elements;
  std::vector<std::int64_t> indices;

  std::size_t count() const { return elements.size(); }
};

WindowB enumerate_B(const SequenceFamily& family, std::int64_t lo, std::int64_t hi,
                    const EnumerateOptions& opts = {});

/// #B_N = #(B intersected with [1, N]).
std::int64_t count_B(const SequenceFamily& family, std::int64_t n, const EnumerateOptions& opts = {});

/// Direct test through the inverse function, independent of enumerate_B.
bool membership(const SequenceFamily& family, std::int64_t n);

struct CardinalityRow {
  std::int64_t n = 0;
  std::int64_t count = 0;
  double phi = 0.0;
  double ratio = 0.0;
};

struct CardinalityReport {
  std::vector<CardinalityRow> rows;
  /// -slope of ln|ratio - 1| against ln N; empty if any |ratio - 1| is zero
  /// or fewer than two rows exist.
  std::optional<double> fitted_delta;
};

CardinalityReport cardinality_report(const SequenceFamily& family, const std::vector<std::int64_t>& n_list,
                                     const EnumerateOptions& opts = {});

}  // namespace regseq
