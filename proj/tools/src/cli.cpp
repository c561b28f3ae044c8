#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <optional>

#include "commands.hpp"
#include "regseq/errors.hpp"

namespace regseq::cli {

namespace {

std::string escape(std::string s) {
  std::string out;
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out.push_back('\\');
    out.push_back(ch == '\n' ? ' ' : ch);
  }
  return out;
}

int fail(std::ostream& err, const char* kind, int code, const std::string& msg) {
  err << "error: kind=" << kind << " exit=" << code << " message=\"" << escape(msg) << "\"\n";
  return code;
}

struct RawOptions {
  std::string family = "nlogn";
  double c = 1.0;
  double a = 1.0;
  double b = 1.0;
  std::string x0 = "e";
  unsigned threads = 1;
  std::string out = "regseq-out";
  std::uint64_t seed = 0;
  std::string dyadic;
  std::vector<std::int64_t> n_list;
  std::string signal = "delta";
  std::string interval = "-29:-1";
  bool verify_oracle = false;
  std::vector<std::string> inputs;
  std::string config;
};

// True when the flag was given on the command line, at top level or on the
// subcommand.
bool given(const CLI::App& app, const CLI::App& sub, const char* flag) {
  if (const auto* opt = sub.get_option_no_throw(flag)) return opt->count() > 0;
  if (const auto* opt = app.get_option_no_throw(flag)) return opt->count() > 0;
  return false;
}

template <class T>
void fill_from(const nlohmann::json& j, const char* key, bool on_command_line, T& target) {
  if (!j.contains(key) || on_command_line) return;
  try {
    target = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

void apply_config_file(RawOptions& o, const CLI::App& app, const CLI::App& sub) {
  std::ifstream in(o.config);
  if (!in) throw ConfigError("cannot read config file " + o.config);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed config file: " + std::string(e.what()));
  }
  if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
  static const std::vector<std::string> known = {"family", "c",      "a",        "b",
                                                 "x0",     "threads", "out",      "seed",
                                                 "dyadic", "N",       "signal",   "interval",
                                                 "verify_oracle",     "input"};
  for (const auto& [k, v] : j.items()) {
    if (std::find(known.begin(), known.end(), k) == known.end()) throw ConfigError("unknown config key '" + k + "'");
  }
  fill_from(j, "family", given(app, sub, "--family"), o.family);
  fill_from(j, "c", given(app, sub, "--c"), o.c);
  fill_from(j, "a", given(app, sub, "--a"), o.a);
  fill_from(j, "b", given(app, sub, "--b"), o.b);
  if (j.contains("x0") && !given(app, sub, "--x0")) {
    o.x0 = j["x0"].is_number() ? std::to_string(j["x0"].get<double>()) : j["x0"].get<std::string>();
  }
  fill_from(j, "threads", given(app, sub, "--threads"), o.threads);
  fill_from(j, "out", given(app, sub, "--out"), o.out);
  fill_from(j, "seed", given(app, sub, "--seed"), o.seed);
  fill_from(j, "dyadic", given(app, sub, "--dyadic"), o.dyadic);
  fill_from(j, "N", given(app, sub, "--N"), o.n_list);
  fill_from(j, "signal", given(app, sub, "--signal"), o.signal);
  fill_from(j, "interval", given(app, sub, "--interval"), o.interval);
  fill_from(j, "verify_oracle", given(app, sub, "--verify-oracle"), o.verify_oracle);
  fill_from(j, "input", given(app, sub, "--input"), o.inputs);
}

RunConfig to_config(const RawOptions& o, const std::string& command) {
  RunConfig cfg;
  cfg.command = command;
  cfg.family.tag = o.family;
  cfg.family.c = o.c;
  cfg.family.a = o.a;
  cfg.family.b = o.b;
  if (o.x0 != "e") {
    try {
      std::size_t pos = 0;
      cfg.family.x0 = std::stod(o.x0, &pos);
      if (pos != o.x0.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ConfigError("--x0 expects a number or 'e', got '" + o.x0 + "'");
    }
  }
  cfg.threads = o.threads;
  cfg.out_dir = o.out;
  cfg.seed = o.seed;
  cfg.n_list = o.n_list;
  if (!o.dyadic.empty()) cfg.dyadic = parse_dyadic(o.dyadic);
  if (command == "weak11" && o.n_list.empty() && o.dyadic.empty()) cfg.dyadic = DyadicRange{3, 10};
  cfg.signal = o.signal;
  if (command == "weak11" && o.signal == "interval") {
    const auto colon = o.interval.find(':', 1);
    if (colon == std::string::npos) throw ConfigError("--interval expects lo:hi");
    try {
      cfg.interval_lo = std::stoll(o.interval.substr(0, colon));
      cfg.interval_hi = std::stoll(o.interval.substr(colon + 1));
    } catch (const std::exception&) {
      throw ConfigError("--interval expects lo:hi, got '" + o.interval + "'");
    }
  }
  cfg.verify_oracle = o.verify_oracle;
  cfg.inputs = o.inputs;
  cfg.max_n = max_n_from_env();
  cfg.validate();
  return cfg;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Regular integer sequences: enumeration, kernel autocorrelation and maximal averages", "regseq"};
  app.require_subcommand(1);
  RawOptions o;
  app.add_option("--family", o.family, "nlogn | xcl | rosenblatt");
  app.add_option("--c", o.c, "exponent c in [1, 30/29) (xcl)");
  app.add_option("--a", o.a, "theta(t) = a / (ln t)^b: a > 0 (xcl)");
  app.add_option("--b", o.b, "theta exponent b in (0, 1] (xcl)");
  app.add_option("--x0", o.x0, "left endpoint x0 >= e, or 'e' (xcl)");
  app.add_option("--threads", o.threads, "worker threads");
  app.add_option("--out", o.out, "output directory");
  app.add_option("--seed", o.seed, "seed for --signal random");
  app.add_option("--dyadic", o.dyadic, "scales 2^j for j in jmin:jmax");
  app.add_option("--N", o.n_list, "explicit scales")->delimiter(',');
  app.add_option("--config", o.config, "JSON file with the same keys; command-line flags win");

  auto* seq = app.add_subcommand("seq", "enumerate B and report #B_N / phi(N)");
  auto* kernel = app.add_subcommand("kernel", "kernel autocorrelation profiles and bound reports");
  kernel->add_flag("--verify-oracle", o.verify_oracle, "check pair counts against exact oracles");
  auto* weak = app.add_subcommand("weak11", "maximal function and weak-type (1,1) level sets");
  weak->add_option("--signal", o.signal, "delta | interval | random | zero");
  weak->add_option("--interval", o.interval, "lo:hi for --signal interval");
  auto* report = app.add_subcommand("report", "slope regression over kernel bound reports");
  report->add_option("--input", o.inputs, "kernel output directories");
  for (auto* sub : {seq, kernel, weak, report}) sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    return fail(err, "validation", kExitValidation, e.what());
  }

  const CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  try {
    if (!o.config.empty()) apply_config_file(o, app, *sub);
    const RunConfig cfg = to_config(o, command);
    if (command == "seq") return cmd_seq(cfg, err);
    if (command == "kernel") return cmd_kernel(cfg, err);
    if (command == "weak11") return cmd_weak11(cfg, err);
    return cmd_report(cfg, err);
  } catch (const ConfigError& e) {
    return fail(err, "validation", kExitValidation, e.what());
  } catch (const PreconditionError& e) {
    return fail(err, "validation", kExitValidation, e.what());
  } catch (const DomainError& e) {
    return fail(err, "validation", kExitValidation, e.what());
  } catch (const DegenerateInputError& e) {
    return fail(err, "degenerate-input", kExitValidation, e.what());
  } catch (const ResourceError& e) {
    return fail(err, "resource", kExitResource, e.what());
  } catch (const OverflowError& e) {
    return fail(err, "resource", kExitResource, e.what());
  } catch (const std::exception& e) {
    return fail(err, "internal", kExitInternal, e.what());
  }
}

}  // namespace regseq::cli
