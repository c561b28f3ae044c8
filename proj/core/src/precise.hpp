#pragma once

#include <cstdint>

namespace regseq {
class RegularFn;
}

namespace regseq::detail {

/// floor(h(m)) from MPFR evaluations at 128, 256, ... 8192 bits; the first
/// precision whose error interval excludes every integer wins.
std::int64_t certified_floor_h(const RegularFn& h, std::int64_t m);

/// Sign of h(k) - h(m) - target at escalating precision.
int certified_compare_gap(const RegularFn& h, std::int64_t k, std::int64_t m, std::int64_t target);

/// ceil(e^k) for 0 <= k <= 43.
std::int64_t exp_ceiling(int k);

}  // namespace regseq::detail
