#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace topowarp::io {

/// Shortest decimal text that parses back to exactly `v`.
std::string format_real(double v);

/// Ordered `key=value` lines, one per entry. Keys are emitted in insertion
/// order and never re-sorted, so the rendering is stable across runs.
class KeyValueReport {
 public:
  KeyValueReport& put(std::string key, std::string value);
  KeyValueReport& put_real(std::string key, double value);
  KeyValueReport& put_int(std::string key, std::int64_t value);
  KeyValueReport& put_bool(std::string key, bool value);

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
  std::string render() const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// Provenance record written next to every CLI output.
struct RunManifest {
  std::vector<std::string> command_line;
  std::vector<std::pair<std::string, std::string>> config;
  /// (path, sha256) of every input file.
  std::vector<std::pair<std::string, std::string>> inputs;
  std::vector<std::string> outputs;
  std::string version;
  std::uint64_t seed = 0;
  /// Wall-clock seconds per stage, in execution order.
  std::vector<std::pair<std::string, double>> timings;

  void add_input(const std::filesystem::path& path);
  std::string to_json() const;
  void write(const std::filesystem::path& path) const;
};

/// Records elapsed wall time for a named stage into a manifest on scope exit.
class StageTimer {
 public:
  StageTimer(RunManifest& manifest, std::string stage)
      : manifest_(manifest), stage_(std::move(stage)), start_(std::chrono::steady_clock::now()) {}
  ~StageTimer() {
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start_;
    manifest_.timings.emplace_back(stage_, dt.count());
  }
  StageTimer(const StageTimer&) = delete;
  StageTimer& operator=(const StageTimer&) = delete;

 private:
  RunManifest& manifest_;
  std::string stage_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace topowarp::io
