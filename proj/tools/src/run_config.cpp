#include "run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>

#include "regseq/errors.hpp"

namespace regseq::cli {

namespace {

std::int64_t parse_int(const std::string& text, const char* what) {
  std::int64_t v = 0;
  const char* end = text.data() + text.size();
  auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || p != end) throw ConfigError(std::string("invalid ") + what + ": '" + text + "'");
  return v;
}

}  // namespace

SequenceFamily FamilyConfig::build() const {
  if (tag == "rosenblatt") return SequenceFamily::rosenblatt();
  if (tag == "nlogn") return SequenceFamily::regular(RegularFn::x_log_x());
  if (tag != "xcl") throw ConfigError("unknown family '" + tag + "' (expected nlogn, xcl or rosenblatt)");
  try {
    return SequenceFamily::regular(RegularFn::make(c, ThetaSpec::log_power(a, b, x0)));
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

nlohmann::json FamilyConfig::to_json() const {
  nlohmann::json j{{"family", tag}};
  if (tag == "xcl") {
    j["c"] = c;
    j["a"] = a;
    j["b"] = b;
    j["x0"] = x0 ? nlohmann::json(*x0) : nlohmann::json("e");
  }
  return j;
}

std::vector<std::int64_t> RunConfig::scales() const {
  std::vector<std::int64_t> s = n_list;
  if (dyadic) {
    for (int j = dyadic->j_min; j <= dyadic->j_max; ++j) s.push_back(std::int64_t{1} << j);
  }
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j = family.to_json();
  j["command"] = command;
  j["N"] = n_list;
  if (dyadic) j["dyadic"] = std::to_string(dyadic->j_min) + ":" + std::to_string(dyadic->j_max);
  j["threads"] = threads;
  j["seed"] = seed;
  j["max_n"] = max_n;
  if (command == "weak11") {
    j["signal"] = signal;
    if (signal == "interval") j["interval"] = std::to_string(interval_lo) + ":" + std::to_string(interval_hi);
  }
  if (command == "kernel") j["verify_oracle"] = verify_oracle;
  if (command == "report") j["input"] = inputs;
  return j;
}

void RunConfig::validate() const {
  if (threads == 0) throw ConfigError("--threads must be at least 1");
  if (family.tag != "xcl" && (family.c != 1.0 || family.a != 1.0 || family.b != 1.0 || family.x0)) {
    throw ConfigError("--c, --a, --b and --x0 apply only to --family xcl");
  }
  (void)family.build();
  if (max_n < 8) throw ConfigError("REGSEQ_MAX_N must be at least 8");
  if (command == "report") {
    if (inputs.empty()) throw ConfigError("report requires at least one --input directory");
    return;
  }
  const auto s = scales();
  if (s.empty()) throw ConfigError("no scales given (use --N or --dyadic)");
  if (s.front() < 1) throw ConfigError("--N values must be positive");
  if (command == "kernel" && s.front() < 8) throw ConfigError("kernel requires N >= 8");
  if (command == "weak11" && s.front() < 8) throw ConfigError("weak11 scales must be >= 8");
  if (command == "weak11" && signal != "delta" && signal != "interval" && signal != "random" && signal != "zero") {
    throw ConfigError("unknown signal '" + signal + "' (expected delta, interval, random or zero)");
  }
  if (command == "weak11" && signal == "interval" && interval_lo > interval_hi) {
    throw ConfigError("--interval requires lo <= hi");
  }
}

DyadicRange parse_dyadic(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError("--dyadic expects jmin:jmax, got '" + text + "'");
  DyadicRange r;
  r.j_min = static_cast<int>(parse_int(text.substr(0, colon), "dyadic jmin"));
  r.j_max = static_cast<int>(parse_int(text.substr(colon + 1), "dyadic jmax"));
  if (r.j_min < 0 || r.j_max > 62 || r.j_min > r.j_max) throw ConfigError("--dyadic range must satisfy 0 <= jmin <= jmax <= 62");
  return r;
}

std::int64_t max_n_from_env() {
  const char* v = std::getenv("REGSEQ_MAX_N");
  if (v == nullptr || *v == '\0') return kDefaultMaxN;
  return parse_int(v, "REGSEQ_MAX_N");
}

}  // namespace regseq::cli
