#pragma once

#include <cstdint>
#include <ostream>

#include "run_config.hpp"

namespace regseq::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitResource = 3;
inline constexpr int kExitOracleMismatch = 4;

/// Largest N for the exact pair-count oracle under --verify-oracle.
inline constexpr std::int64_t kOracleMaxN = std::int64_t{1} << 16;
/// Largest N for the interval-count comparison under --verify-oracle.
inline constexpr std::int64_t kIntervalMaxN = std::int64_t{1} << 12;
/// The window CSV of `seq` is written only up to this N.
inline constexpr std::int64_t kWindowCsvMaxN = std::int64_t{1} << 22;

/// Contrast thresholds for the control family, echoed in kernel manifests.
inline constexpr double kControlRatioMin = 1.5;
inline constexpr double kControlSlopeMin = 0.05;
inline constexpr std::int64_t kControlReferenceN = std::int64_t{1} << 12;
inline constexpr std::int64_t kControlTargetN = std::int64_t{1} << 22;

int cmd_seq(const RunConfig& cfg, std::ostream& log);
int cmd_kernel(const RunConfig& cfg, std::ostream& log);
int cmd_weak11(const RunConfig& cfg, std::ostream& log);
int cmd_report(const RunConfig& cfg, std::ostream& log);

}  // namespace regseq::cli
