#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "topowarp/grid.hpp"
#include "topowarp/io.hpp"
#include "topowarp/metrics.hpp"
#include "topowarp/report.hpp"
#include "topowarp/warp.hpp"

namespace topowarp::cli {

/// Flags shared by every subcommand that warps.
struct WarpFlags {
  std::string metric = "cityblock";
  int passes = 1;
  bool recompute_dt = false;
  std::string tie = "rowmajor";
  std::optional<std::uint64_t> seed;
  std::string fg_adjacency;

  WarpConfig config() const;
  void echo(io::KeyValueReport& report) const;
};

struct BettiFlags {
  std::string patch;
  int samples = 100;
  std::string dims;

  BettiErrorConfig config(std::uint64_t seed) const;
};

/// State of one CLI invocation: output directory, manifest, threads.
class Run {
 public:
  Run(std::string command, std::vector<std::string> argv, std::filesystem::path out_dir);

  const std::filesystem::path& out_dir() const { return out_dir_; }
  io::RunManifest& manifest() { return manifest_; }

  Grid load_mask(const std::filesystem::path& path, const std::string& fg_adjacency);
  void add_input(const std::filesystem::path& path);
  /// Saves under out_dir and records the name in the manifest.
  void save_mask(const Grid& grid, const std::string& name);
  void save_text(const std::string& name, const std::string& text);
  void record_output(const std::string& name);
  void finish();

 private:
  std::string command_;
  std::filesystem::path out_dir_;
  io::RunManifest manifest_;
};

/// TOPOWARP_THREADS, or the hardware concurrency when unset.
unsigned thread_cap();

Shape parse_patch(const std::string& text);
std::vector<int> parse_dims(const std::string& text);
std::vector<int> parse_coord(const std::string& text);
Adjacency parse_adjacency(const std::string& text, int rank);

/// Extension used for mask outputs derived from `input` (".png", ".pgm", ".npy").
std::string mask_extension(const std::filesystem::path& input);

/// True when the NPY at `path` holds floating-point data.
bool is_float_npy(const std::filesystem::path& path);

}  // namespace topowarp::cli
