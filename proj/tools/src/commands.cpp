#include "commands.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "output.hpp"
#include "regseq/errors.hpp"
#include "regseq/kernels.hpp"
#include "regseq/maximal.hpp"
#include "regseq/stats.hpp"

namespace regseq::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void check_cap(const RunConfig& cfg, std::int64_t n) {
  if (n > cfg.max_n) {
    throw ResourceError("N = " + std::to_string(n) + " exceeds the cap " + std::to_string(cfg.max_n) +
                        " (set REGSEQ_MAX_N to raise it)");
  }
}

nlohmann::json scale_note(const RunConfig& cfg) {
  return cfg.dyadic ? "dyadic scales 2^j for j in [" + std::to_string(cfg.dyadic->j_min) + ", " +
                          std::to_string(cfg.dyadic->j_max) + "]; the supremum over all N is restricted to this set"
                    : "explicit scale list; the supremum over all N is restricted to this set";
}

std::optional<LinearFit> loglog_fit(const std::vector<std::int64_t>& ns, const std::vector<double>& sups) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (sups[i] <= 0.0) continue;
    xs.push_back(std::log(static_cast<double>(ns[i])));
    ys.push_back(std::log(sups[i]));
  }
  return fit_line(xs, ys);
}

std::string profile_csv(const AutocorrProfile& p) {
  std::ostringstream os;
  os << "x,pair_count,value_num,value_den,value\n";
  for (std::int64_t x = 0; x <= p.max_gap(); ++x) {
    const Rational v = p.value(x);
    os << x << ',' << p.pair_counts[static_cast<std::size_t>(x)] << ',' << v.num() << ',' << v.den() << ','
       << format_double(v.to_double()) << '\n';
  }
  return os.str();
}

struct OracleCheck {
  bool ran = false;
  bool ok = true;
  std::vector<std::string> failures;
};

OracleCheck verify_profile(const SequenceFamily& fam, const Kernel& k, const AutocorrProfile& p, unsigned threads) {
  OracleCheck c;
  c.ran = true;
  auto fail = [&](std::string msg) {
    c.ok = false;
    c.failures.push_back("N=" + std::to_string(k.n) + ": " + std::move(msg));
  };
  const auto oracle = paircount_oracle_profile(fam, k.n);
  if (oracle != p.pair_counts) fail("direct pair counts differ from the membership oracle");
  if (autocorr_reflected(k, threads) != p.pair_counts) fail("reflected sweep differs from the direct sweep");
  if (fam.is_regular() && k.n <= kIntervalMaxN) {
    const auto& h = fam.regular_fn();
    const std::int64_t slack = 3 * interval_index_window(h, k.n).size();
    for (std::int64_t x = 1; x < static_cast<std::int64_t>(oracle.size()); ++x) {
      const std::int64_t got = paircount_interval(h, k.n, x);
      const std::int64_t want = oracle[static_cast<std::size_t>(x)];
      if (got < want || got > 3 * want + slack) {
        fail("interval count " + std::to_string(got) + " out of [" + std::to_string(want) + ", " +
             std::to_string(3 * want + slack) + "] at x=" + std::to_string(x));
        break;
      }
    }
  }
  return c;
}

SignalF build_signal(const RunConfig& cfg) {
  if (cfg.signal == "delta") return delta_signal(0);
  if (cfg.signal == "interval") return interval_signal(cfg.interval_lo, cfg.interval_hi);
  if (cfg.signal == "random") return random_signal(cfg.seed);
  return SignalF{};
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

}  // namespace

int cmd_seq(const RunConfig& cfg, std::ostream& log) {
  const auto t0 = Clock::now();
  const auto fam = cfg.family.build();
  const auto ns = cfg.scales();
  check_cap(cfg, ns.back());
  OutputDir out(cfg.out_dir);
  nlohmann::json extra;

  if (ns.back() <= kWindowCsvMaxN) {
    const WindowB w = enumerate_B(fam, 0, ns.back(), cfg.enumerate_options());
    std::ostringstream os;
    os << "m,element\n";
    for (std::size_t i = 0; i < w.count(); ++i) os << w.indices[i] << ',' << w.elements[i] << '\n';
    out.write("window.csv", os.str());
  } else {
    log << "warning: window.csv skipped for N > " << kWindowCsvMaxN << "\n";
    extra["window_skipped"] = true;
  }

  const CardinalityReport rep = cardinality_report(fam, ns, cfg.enumerate_options());
  std::ostringstream os;
  os << "N,count,phi,ratio\n";
  for (const auto& r : rep.rows) {
    os << r.n << ',' << r.count << ',' << format_double(r.phi) << ',' << format_double(r.ratio) << '\n';
  }
  out.write("cardinality.csv", os.str());
  extra["fitted_delta"] = rep.fitted_delta ? nlohmann::json(*rep.fitted_delta) : nlohmann::json(nullptr);
  extra["scale_policy"] = scale_note(cfg);
  out.write_manifest(cfg.to_json(), extra, seconds_since(t0));
  return kExitOk;
}

int cmd_kernel(const RunConfig& cfg, std::ostream& log) {
  const auto t0 = Clock::now();
  const auto fam = cfg.family.build();
  const auto ns = cfg.scales();
  check_cap(cfg, ns.back());
  if (cfg.verify_oracle && ns.back() > kOracleMaxN) {
    throw ConfigError("--verify-oracle supports N <= " + std::to_string(kOracleMaxN));
  }
  OutputDir out(cfg.out_dir);
  const KernelOptions kopts{cfg.enumerate_options(), cfg.threads};

  std::ostringstream bound;
  bound << "N,sup_scaled,argmax_x,mass_num,mass_den,sup_scaled_num,sup_scaled_den\n";
  std::vector<double> sups;
  nlohmann::json per_n = nlohmann::json::array();
  std::vector<std::string> failures;

  for (std::int64_t n : ns) {
    const Kernel k = build_kernel(fam, n, kopts);
    const AutocorrProfile p = autocorr_direct(k, cfg.threads);
    if (p.total() != k.mass() * k.mass()) failures.push_back("N=" + std::to_string(n) + ": mass identity violated");
    const BoundReport r = bound_report(k, p);
    bound << n << ',' << format_double(r.sup_scaled.to_double()) << ',' << r.argmax_x << ',' << r.mass_num << ','
          << r.mass_den << ',' << r.sup_scaled.num() << ',' << r.sup_scaled.den() << '\n';
    sups.push_back(r.sup_scaled.to_double());
    out.write("profile_N" + std::to_string(n) + ".csv", profile_csv(p));

    nlohmann::json entry{{"N", n},
                         {"support_size", p.support_size},
                         {"total_count", p.total_count},
                         {"tail_pairs", p.tail_pairs},
                         {"checksum", p.checksum()},
                         {"paircount_bound_ratio", r.paircount_bound_ratio}};
    if (fam.is_regular() && n >= 16) {
      const StepGapReport g = step_gap_report(fam.regular_fn(), n);
      std::ostringstream os;
      os << "m,gap,ratio\n";
      for (const auto& s : g.samples) os << s.m << ',' << format_double(s.gap) << ',' << format_double(s.ratio) << '\n';
      out.write("stepgap_N" + std::to_string(n) + ".csv", os.str());
      entry["stepgap_min_ratio"] = g.min_ratio;
      entry["stepgap_max_ratio"] = g.max_ratio;
    }
    if (cfg.verify_oracle) {
      const OracleCheck c = verify_profile(fam, k, p, cfg.threads);
      entry["oracle_ok"] = c.ok;
      failures.insert(failures.end(), c.failures.begin(), c.failures.end());
    }
    per_n.push_back(entry);
  }
  out.write("bound.csv", bound.str());

  nlohmann::json extra;
  extra["scale_policy"] = scale_note(cfg);
  extra["per_n"] = per_n;
  const auto fit = loglog_fit(ns, sups);
  extra["loglog_slope"] = fit ? nlohmann::json(fit->slope) : nlohmann::json(nullptr);
  if (!fam.is_regular()) {
    nlohmann::json t{{"ratio_min", kControlRatioMin},
                     {"slope_min", kControlSlopeMin},
                     {"reference_N", kControlReferenceN},
                     {"target_N", kControlTargetN}};
    std::map<std::int64_t, double> by_n;
    for (std::size_t i = 0; i < ns.size(); ++i) by_n[ns[i]] = sups[i];
    if (by_n.count(kControlReferenceN) && by_n.count(kControlTargetN) && by_n[kControlReferenceN] > 0) {
      t["observed_ratio"] = by_n[kControlTargetN] / by_n[kControlReferenceN];
    }
    extra["control_thresholds"] = t;
  }
  if (cfg.verify_oracle) extra["oracle_failures"] = failures;
  out.write_manifest(cfg.to_json(), extra, seconds_since(t0));

  if (!failures.empty()) {
    for (const auto& f : failures) log << "mismatch: " << f << "\n";
    return kExitOracleMismatch;
  }
  return kExitOk;
}

int cmd_weak11(const RunConfig& cfg, std::ostream& log) {
  (void)log;
  const auto t0 = Clock::now();
  const auto fam = cfg.family.build();
  const auto ns = cfg.scales();
  check_cap(cfg, ns.back());
  const SignalF f = build_signal(cfg);
  if (f.empty()) throw DegenerateInputError("weak11: the signal is identically zero");

  const ScaleSet scales(ns);
  const WindowB prefix = enumerate_B(fam, 0, scales.max(), cfg.enumerate_options());
  const SignalF mf = maximal_fn(prefix, scales, f, cfg.threads);
  const WeakTypeReport rep = weak11_sweep(mf, f.l1_norm(), default_lambda_grid(mf.max_value()));

  OutputDir out(cfg.out_dir);
  std::ostringstream sig;
  sig << "x,value_num,value_den\n";
  for (const auto& [x, v] : f.entries()) sig << x << ',' << v.num() << ',' << v.den() << '\n';
  out.write("signal.csv", sig.str());

  std::ostringstream os;
  os << "lambda_num,lambda_den,level_size,lambda_times_size_over_l1,normalized_num,normalized_den\n";
  for (const auto& r : rep.rows) {
    os << r.lambda.num() << ',' << r.lambda.den() << ',' << r.level_size << ','
       << format_double(r.normalized.to_double()) << ',' << r.normalized.num() << ',' << r.normalized.den() << '\n';
  }
  out.write("weak11.csv", os.str());

  nlohmann::json extra;
  extra["scale_policy"] = scale_note(cfg);
  extra["signal"] = {{"kind", cfg.signal}, {"atoms", f.size()}, {"l1_num", f.l1_norm().num()},
                     {"l1_den", f.l1_norm().den()}};
  if (cfg.signal == "random") {
    extra["signal"]["generator"] = "mt19937_64";
    extra["signal"]["seed"] = cfg.seed;
  }
  extra["empirical_constant"] = {{"num", rep.empirical_constant.num()},
                                 {"den", rep.empirical_constant.den()},
                                 {"value", rep.empirical_constant.to_double()}};
  extra["max_mf"] = {{"num", mf.max_value().num()}, {"den", mf.max_value().den()}};
  out.write_manifest(cfg.to_json(), extra, seconds_since(t0));
  return kExitOk;
}

int cmd_report(const RunConfig& cfg, std::ostream& log) {
  const auto t0 = Clock::now();
  std::optional<nlohmann::json> family;
  std::map<std::int64_t, double> sups;
  for (const auto& dir : cfg.inputs) {
    const std::filesystem::path root(dir);
    std::ifstream mf(root / "manifest.json");
    if (!mf) throw ConfigError("no manifest.json in " + dir);
    nlohmann::json m;
    try {
      m = nlohmann::json::parse(mf);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("malformed manifest in " + dir + ": " + e.what());
    }
    nlohmann::json fam = m.at("config");
    if (fam.value("command", "") != "kernel") throw ConfigError(dir + " is not a kernel run");
    for (const char* key : {"command", "N", "dyadic", "threads", "seed", "max_n", "verify_oracle"}) fam.erase(key);
    if (family && *family != fam) throw ConfigError("mixed families: " + family->dump() + " vs " + fam.dump());
    family = fam;

    std::ifstream in(root / "bound.csv");
    if (!in) throw ConfigError("no bound.csv in " + dir);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      const auto cols = split(line, ',');
      if (cols.size() < 2) throw ConfigError("malformed bound.csv row in " + dir);
      const std::int64_t n = std::stoll(cols[0]);
      const double s = std::stod(cols[1]);
      auto [it, fresh] = sups.emplace(n, s);
      if (!fresh && it->second != s) throw ConfigError("conflicting sup_scaled for N=" + std::to_string(n));
    }
  }
  if (sups.empty()) throw ConfigError("report inputs contain no bound rows");

  std::vector<std::int64_t> ns;
  std::vector<double> vs;
  nlohmann::json rows = nlohmann::json::array();
  bool dyadic = true;
  for (const auto& [n, s] : sups) {
    ns.push_back(n);
    vs.push_back(s);
    rows.push_back({{"N", n}, {"sup_scaled", s}});
    dyadic = dyadic && (n & (n - 1)) == 0;
  }
  nlohmann::json summary;
  summary["family"] = *family;
  summary["j_range"] = dyadic ? nlohmann::json::array({std::countr_zero(static_cast<std::uint64_t>(ns.front())),
                                                       std::countr_zero(static_cast<std::uint64_t>(ns.back()))})
                              : nlohmann::json(nullptr);
  summary["per_n"] = rows;
  summary["warnings"] = nlohmann::json::array();
  const auto fit = loglog_fit(ns, vs);
  if (fit) {
    summary["slope"] = fit->slope;
    summary["intercept"] = fit->intercept;
  } else {
    summary["slope"] = nullptr;
    summary["intercept"] = nullptr;
    summary["warnings"].push_back("fewer than two usable scales; no regression");
    log << "warning: fewer than two usable scales; slope is null\n";
  }
  OutputDir out(cfg.out_dir);
  out.write("summary.json", summary.dump(2) + "\n");
  out.write_manifest(cfg.to_json(), nlohmann::json::object(), seconds_since(t0));
  return kExitOk;
}

}  // namespace regseq::cli
