#pragma once

#include <optional>
#include <span>

namespace regseq {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Ordinary least squares y = slope * x + intercept. Empty when fewer than
/// two points or all x coincide.
std::optional<LinearFit> fit_line(std::span<const double> xs, std::span<const double> ys);

}  // namespace regseq
