#include "output.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iterator>
#include <sstream>

#include "regseq/errors.hpp"

#ifndef REGSEQ_VERSION
#define REGSEQ_VERSION "0.0.0"
#endif

namespace regseq::cli {

OutputDir::OutputDir(std::filesystem::path root) : root_(std::move(root)) {
  std::error_code ec;
  std::filesystem::create_directories(root_, ec);
  if (ec) throw ResourceError("cannot create output directory " + root_.string() + ": " + ec.message());
}

void OutputDir::write(const std::string& name, const std::string& content) {
  const auto path = root_ / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw ResourceError("cannot write " + path.string());
  files_.push_back({name, sha256_hex(content), content.size()});
}

void OutputDir::write_manifest(const nlohmann::json& config, const nlohmann::json& extra,
                               double duration_seconds) const {
  nlohmann::json m;
  m["tool"] = "regseq";
  m["version"] = REGSEQ_VERSION;
  m["timestamp"] = utc_timestamp();
  m["config"] = config;
  m["duration_seconds"] = duration_seconds;
  nlohmann::json files = nlohmann::json::array();
  for (const auto& f : files_) files.push_back({{"name", f.name}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  m["files"] = files;
  for (const auto& [k, v] : extra.items()) m[k] = v;
  const std::string text = m.dump(2) + "\n";
  std::ofstream out(root_ / "manifest.json", std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw ResourceError("cannot write manifest.json");
}

std::string sha256_hex(const std::string& data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex.push_back(kHex[md[i] >> 4]);
    hex.push_back(kHex[md[i] & 15]);
  }
  return hex;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ResourceError("cannot read " + path.string());
  const std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return sha256_hex(data);
}

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

}  // namespace regseq::cli
