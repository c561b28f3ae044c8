#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "regseq/seqgen.hpp"

namespace regseq::cli {

/// Invalid command line or configuration file; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FamilyConfig {
  std::string tag = "nlogn";  // nlogn | xcl | rosenblatt
  double c = 1.0;
  double a = 1.0;
  double b = 1.0;
  std::optional<double> x0;    // empty: e

  SequenceFamily build() const;
  nlohmann::json to_json() const;
};

struct DyadicRange {
  int j_min = 0;
  int j_max = 0;
};

struct RunConfig {
  std::string command;
  FamilyConfig family;
  std::vector<std::int64_t> n_list;
  std::optional<DyadicRange> dyadic;
  unsigned threads = 1;
  std::string out_dir = "regseq-out";
  std::uint64_t seed = 0;
  std::string signal = "delta";  // delta | interval | random | zero
  std::int64_t interval_lo = -29;
  std::int64_t interval_hi = -1;
  bool verify_oracle = false;
  std::vector<std::string> inputs;
  std::int64_t max_n = kDefaultMaxN;

  /// Sorted, distinct scales from --N or --dyadic.
  std::vector<std::int64_t> scales() const;
  EnumerateOptions enumerate_options() const { return {max_n, threads}; }
  nlohmann::json to_json() const;
  /// Throws ConfigError on any inadmissible combination.
  void validate() const;
};

/// "jmin:jmax" with 0 <= jmin <= jmax <= 62.
DyadicRange parse_dyadic(const std::string& text);
/// REGSEQ_MAX_N if set, else the default cap.
std::int64_t max_n_from_env();

}  // namespace regseq::cli
