#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "output.hpp"

namespace fs = std::filesystem;
using regseq::cli::run_cli;

namespace {

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  CliRun r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::string> lines(const fs::path& p) {
  std::vector<std::string> out;
  std::istringstream is(slurp(p));
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

nlohmann::json manifest(const fs::path& dir) { return nlohmann::json::parse(slurp(dir / "manifest.json")); }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    root_ = fs::temp_directory_path() / ("regseq_cli_" + std::string(info->name()));
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  void TearDown() override { fs::remove_all(root_); }
  std::string dir(const std::string& name) const { return (root_ / name).string(); }

  fs::path root_;
};

void expect_single_error_line(const CliRun& r, const std::string& kind) {
  EXPECT_EQ(r.err.rfind("error: kind=" + kind + " exit=", 0), 0u) << r.err;
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1) << r.err;
}

}  // namespace

TEST_F(CliTest, SeqWindowN32) {
  const CliRun r = run({"seq", "--family", "nlogn", "--N", "32", "--out", dir("s")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto w = lines(root_ / "s" / "window.csv");
  ASSERT_EQ(w.size(), 12u);
  EXPECT_EQ(w[0], "m,element");
  EXPECT_EQ(w[1], "2,1");
  EXPECT_EQ(w[11], "12,29");
  const auto c = lines(root_ / "s" / "cardinality.csv");
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0], "N,count,phi,ratio");
  EXPECT_EQ(c[1].rfind("32,11,", 0), 0u);
}

TEST_F(CliTest, SeqDyadicRows) {
  ASSERT_EQ(run({"seq", "--family", "nlogn", "--dyadic", "10:20", "--out", dir("s")}).code, 0);
  const auto c = lines(root_ / "s" / "cardinality.csv");
  EXPECT_EQ(c.size(), 12u);
  EXPECT_EQ(c.back().rfind("1048576,91762,", 0), 0u);
  EXPECT_TRUE(manifest(root_ / "s")["fitted_delta"].is_number());
}

TEST_F(CliTest, ValidationFailuresExit2) {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"seq", "--family", "xcl", "--c", "1.5", "--N", "32"},
        {"kernel", "--N", "4"},
        {"seq", "--family", "unknown", "--N", "32"},
        {"seq", "--family", "nlogn", "--c", "1.01", "--N", "32"},
        {"seq", "--dyadic", "9:3"},
        {"seq", "--dyadic", "abc"},
        {"seq"},
        {"seq", "--N", "32", "--threads", "0"},
        {"seq", "--family", "xcl", "--x0", "2", "--N", "32"},
        {"weak11", "--signal", "sine"},
        {"kernel", "--N", "100000", "--verify-oracle"},
        {"frobnicate"},
        {}}) {
    std::vector<std::string> a = args;
    a.push_back("--out");
    a.push_back(dir("v"));
    const CliRun r = run(a);
    EXPECT_EQ(r.code, 2) << args.size() << " " << r.err;
    expect_single_error_line(r, "validation");
  }
}

TEST_F(CliTest, ResourceCapExit3) {
  ::setenv("REGSEQ_MAX_N", "1000", 1);
  const CliRun r = run({"seq", "--N", "2000", "--out", dir("s")});
  ::unsetenv("REGSEQ_MAX_N");
  EXPECT_EQ(r.code, 3);
  expect_single_error_line(r, "resource");
  EXPECT_EQ(run({"seq", "--N", "2000", "--out", dir("s")}).code, 0);
}

TEST_F(CliTest, KernelN32WithOracle) {
  const CliRun r = run({"kernel", "--family", "nlogn", "--N", "32", "--verify-oracle", "--out", dir("k")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto p = lines(root_ / "k" / "profile_N32.csv");
  ASSERT_EQ(p.size(), 15u);  // header and x = 0..13
  EXPECT_EQ(p[0], "x,pair_count,value_num,value_den,value");
  EXPECT_EQ(p[4].rfind("3,5,5,121,", 0), 0u);
  const auto b = lines(root_ / "k" / "bound.csv");
  EXPECT_EQ(b[1].rfind("32,", 0), 0u);
  EXPECT_NE(b[1].find(",3,7,11,160,121"), std::string::npos);
  const auto m = manifest(root_ / "k");
  EXPECT_TRUE(m["per_n"][0]["oracle_ok"].get<bool>());
  EXPECT_TRUE(m["oracle_failures"].empty());
}

TEST_F(CliTest, KernelOracleAcrossFamilies) {
  for (const std::vector<std::string>& fam :
       {std::vector<std::string>{"--family", "nlogn"},
        {"--family", "xcl", "--c", "1.02"},
        {"--family", "xcl", "--a", "2", "--b", "0.5"},
        {"--family", "rosenblatt"}}) {
    std::vector<std::string> a = {"kernel", "--dyadic", "8:12", "--verify-oracle", "--out", dir("k")};
    a.insert(a.end(), fam.begin(), fam.end());
    const CliRun r = run(a);
    EXPECT_EQ(r.code, 0) << fam[1] << " " << r.err;
  }
}

TEST_F(CliTest, ManifestChecksumsMatchFiles) {
  ASSERT_EQ(run({"kernel", "--dyadic", "5:9", "--out", dir("k")}).code, 0);
  const auto m = manifest(root_ / "k");
  std::size_t csv_count = 0;
  for (const auto& e : fs::directory_iterator(root_ / "k")) {
    if (e.path().extension() == ".csv") ++csv_count;
  }
  ASSERT_EQ(m["files"].size(), csv_count);
  for (const auto& f : m["files"]) {
    EXPECT_EQ(regseq::cli::sha256_file(root_ / "k" / f["name"].get<std::string>()), f["sha256"].get<std::string>());
  }
  EXPECT_EQ(m["config"]["command"], "kernel");
  EXPECT_TRUE(m.contains("timestamp"));
  EXPECT_TRUE(m.contains("duration_seconds"));
  EXPECT_TRUE(m["scale_policy"].get<std::string>().find("dyadic") != std::string::npos);
}

TEST_F(CliTest, CsvFilesUseLfAndHeaders) {
  ASSERT_EQ(run({"kernel", "--N", "100", "--out", dir("k")}).code, 0);
  for (const auto& e : fs::directory_iterator(root_ / "k")) {
    if (e.path().extension() != ".csv") continue;
    const std::string s = slurp(e.path());
    EXPECT_EQ(s.find('\r'), std::string::npos);
    EXPECT_EQ(s.back(), '\n');
    EXPECT_TRUE(std::isalpha(static_cast<unsigned char>(s.front())));
  }
}

TEST_F(CliTest, ControlManifestCarriesThresholds) {
  ASSERT_EQ(run({"kernel", "--family", "rosenblatt", "--dyadic", "10:16", "--out", dir("k")}).code, 0);
  const auto m = manifest(root_ / "k");
  EXPECT_EQ(m["control_thresholds"]["ratio_min"].get<double>(), 1.5);
  EXPECT_EQ(m["control_thresholds"]["slope_min"].get<double>(), 0.05);
  EXPECT_GT(m["loglog_slope"].get<double>(), 0.05);
  const auto b = lines(root_ / "k" / "bound.csv");
  EXPECT_LT(std::stod(b[1].substr(b[1].find(',') + 1)), std::stod(b.back().substr(b.back().find(',') + 1)));
}

TEST_F(CliTest, Weak11DeltaDyadic3To10) {
  ASSERT_EQ(run({"weak11", "--family", "nlogn", "--signal", "delta", "--dyadic", "3:10", "--out", dir("w")}).code, 0);
  const auto w = lines(root_ / "w" / "weak11.csv");
  EXPECT_EQ(w[0], "lambda_num,lambda_den,level_size,lambda_times_size_over_l1,normalized_num,normalized_den");
  EXPECT_EQ(w[1].rfind("1,4,0,", 0), 0u);  // max Mf = 1/4 and the level set is strict
  EXPECT_EQ(w[2].rfind("1,8,7,", 0), 0u);
  const auto m = manifest(root_ / "w");
  EXPECT_EQ(m["max_mf"]["num"], 1);
  EXPECT_EQ(m["max_mf"]["den"], 4);
}

TEST_F(CliTest, Weak11RandomIsDeterministicAcrossThreads) {
  ASSERT_EQ(run({"weak11", "--signal", "random", "--seed", "7", "--dyadic", "3:14", "--out", dir("a")}).code, 0);
  ASSERT_EQ(run({"weak11", "--signal", "random", "--seed", "7", "--dyadic", "3:14", "--threads", "3", "--out",
                 dir("b")})
                .code,
            0);
  for (const char* f : {"weak11.csv", "signal.csv"}) EXPECT_EQ(slurp(root_ / "a" / f), slurp(root_ / "b" / f)) << f;
  EXPECT_EQ(manifest(root_ / "a")["signal"]["seed"], 7);
  ASSERT_EQ(run({"weak11", "--signal", "random", "--seed", "8", "--dyadic", "3:14", "--out", dir("c")}).code, 0);
  EXPECT_NE(slurp(root_ / "a" / "signal.csv"), slurp(root_ / "c" / "signal.csv"));
}

TEST_F(CliTest, Weak11ZeroSignalExit2) {
  const CliRun r = run({"weak11", "--signal", "zero", "--out", dir("w")});
  EXPECT_EQ(r.code, 2);
  expect_single_error_line(r, "degenerate-input");
}

TEST_F(CliTest, Weak11IntervalSignal) {
  ASSERT_EQ(run({"weak11", "--signal", "interval", "--interval", "-29:-1", "--N", "32", "--out", dir("w")}).code, 0);
  EXPECT_EQ(lines(root_ / "w" / "signal.csv").size(), 30u);
  EXPECT_EQ(manifest(root_ / "w")["max_mf"]["num"], 1);
}

TEST_F(CliTest, KernelDeterministicAcrossThreads) {
  ASSERT_EQ(run({"kernel", "--dyadic", "10:15", "--out", dir("a")}).code, 0);
  ASSERT_EQ(run({"kernel", "--dyadic", "10:15", "--threads", "4", "--out", dir("b")}).code, 0);
  const auto ma = manifest(root_ / "a");
  const auto mb = manifest(root_ / "b");
  EXPECT_EQ(ma["files"], mb["files"]);
}

TEST_F(CliTest, ReportRegressionAndValidation) {
  ASSERT_EQ(run({"kernel", "--dyadic", "10:12", "--out", dir("k1")}).code, 0);
  ASSERT_EQ(run({"kernel", "--dyadic", "13:14", "--out", dir("k2")}).code, 0);
  ASSERT_EQ(run({"report", "--input", dir("k1"), "--input", dir("k2"), "--out", dir("r")}).code, 0);
  auto s = nlohmann::json::parse(slurp(root_ / "r" / "summary.json"));
  EXPECT_EQ(s["family"]["family"], "nlogn");
  EXPECT_EQ(s["j_range"], nlohmann::json::array({10, 14}));
  EXPECT_EQ(s["per_n"].size(), 5u);
  EXPECT_GE(s["slope"].get<double>(), -0.15);
  EXPECT_LE(s["slope"].get<double>(), 0.15);

  ASSERT_EQ(run({"kernel", "--N", "4096", "--out", dir("k3")}).code, 0);
  const CliRun single = run({"report", "--input", dir("k3"), "--out", dir("r1")});
  EXPECT_EQ(single.code, 0);
  EXPECT_NE(single.err.find("warning"), std::string::npos);
  s = nlohmann::json::parse(slurp(root_ / "r1" / "summary.json"));
  EXPECT_TRUE(s["slope"].is_null());
  EXPECT_EQ(s["warnings"].size(), 1u);

  ASSERT_EQ(run({"kernel", "--family", "rosenblatt", "--N", "4096", "--out", dir("k4")}).code, 0);
  const CliRun mixed = run({"report", "--input", dir("k1"), "--input", dir("k4"), "--out", dir("r2")});
  EXPECT_EQ(mixed.code, 2);
  expect_single_error_line(mixed, "validation");
  EXPECT_EQ(run({"report", "--out", dir("r3")}).code, 2);
  EXPECT_EQ(run({"report", "--input", dir("missing"), "--out", dir("r3")}).code, 2);
}

TEST_F(CliTest, ConfigFileWithCommandLineOverride) {
  {
    std::ofstream cfg(root_ / "cfg.json");
    cfg << R"({"family": "xcl", "c": 1.02, "N": [32, 64], "threads": 2})";
  }
  ASSERT_EQ(run({"seq", "--config", (root_ / "cfg.json").string(), "--out", dir("a")}).code, 0);
  auto m = manifest(root_ / "a");
  EXPECT_EQ(m["config"]["family"], "xcl");
  EXPECT_EQ(m["config"]["c"], 1.02);
  EXPECT_EQ(lines(root_ / "a" / "cardinality.csv").size(), 3u);

  ASSERT_EQ(run({"seq", "--config", (root_ / "cfg.json").string(), "--N", "128", "--out", dir("b")}).code, 0);
  EXPECT_EQ(lines(root_ / "b" / "cardinality.csv").size(), 2u);

  {
    std::ofstream cfg(root_ / "bad.json");
    cfg << R"({"family": "xcl", "colour": 3})";
  }
  EXPECT_EQ(run({"seq", "--config", (root_ / "bad.json").string(), "--N", "32", "--out", dir("c")}).code, 2);
  EXPECT_EQ(run({"seq", "--config", (root_ / "none.json").string(), "--out", dir("c")}).code, 2);
}

TEST_F(CliTest, HelpExitsZero) {
  const CliRun r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("weak11"), std::string::npos);
}
