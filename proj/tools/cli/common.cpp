#include "common.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <thread>

#include "topowarp/version.hpp"

namespace topowarp::cli {
namespace {

int parse_int(std::string_view text, const char* what) {
  int v = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size())
    throw ValidationError(std::string(what) + ": '" + std::string(text) + "' is not an integer");
  return v;
}

std::vector<int> split_ints(const std::string& text, char sep, const char* what) {
  std::vector<int> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = text.find(sep, start);
    out.push_back(parse_int(std::string_view(text).substr(start, end - start), what));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return out;
}

}  // namespace

WarpConfig WarpFlags::config() const {
  WarpConfig c;
  const auto m = parse_metric(metric);
  if (!m) throw ValidationError("--metric must be cityblock, chessboard or euclidean, got '" + metric + "'");
  c.metric = *m;
  c.passes = passes;
  c.recompute_distance_each_pass = recompute_dt;
  if (tie == "random") {
    if (!seed) throw ValidationError("--tie random requires --seed");
    c.tie_break = TieBreak::random(*seed);
  } else if (tie != "rowmajor") {
    throw ValidationError("--tie must be rowmajor or random, got '" + tie + "'");
  }
  c.validate();
  return c;
}

void WarpFlags::echo(io::KeyValueReport& report) const {
  const WarpConfig c = config();
  report.put("metric", to_string(c.metric))
      .put_int("passes", c.passes)
      .put_bool("recompute_dt", c.recompute_distance_each_pass)
      .put("tie", tie);
  if (c.tie_break.kind == TieBreak::Kind::Random) report.put_int("tie_seed", static_cast<std::int64_t>(c.tie_break.seed));
}

BettiErrorConfig BettiFlags::config(std::uint64_t seed) const {
  BettiErrorConfig c;
  if (!patch.empty()) c.patch = parse_patch(patch);
  c.samples = samples;
  if (!dims.empty()) c.dims = parse_dims(dims);
  c.seed = seed;
  return c;
}

Run::Run(std::string command, std::vector<std::string> argv, std::filesystem::path out_dir)
    : command_(std::move(command)), out_dir_(std::move(out_dir)) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir_, ec);
  if (ec) throw io::IoError("cannot create output directory " + out_dir_.string() + ": " + ec.message());
  manifest_.command_line = std::move(argv);
  manifest_.version = kVersion;
}

Grid Run::load_mask(const std::filesystem::path& path, const std::string& fg_adjacency) {
  add_input(path);
  Grid g = io::load_mask(path);
  if (!fg_adjacency.empty()) g = g.with_adjacency(parse_adjacency(fg_adjacency, g.rank()));
  return g;
}

void Run::add_input(const std::filesystem::path& path) { manifest_.add_input(path); }

void Run::save_mask(const Grid& grid, const std::string& name) {
  io::save_mask(grid, out_dir_ / name);
  record_output(name);
}

void Run::save_text(const std::string& name, const std::string& text) {
  const auto path = out_dir_ / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io::IoError("cannot write " + path.string());
  out << text;
  if (!out) throw io::IoError("failed writing " + path.string());
  record_output(name);
}

void Run::record_output(const std::string& name) { manifest_.outputs.push_back(name); }

void Run::finish() { manifest_.write(out_dir_ / (command_ + ".manifest.json")); }

unsigned thread_cap() {
  const char* env = std::getenv("TOPOWARP_THREADS");
  if (env && *env) {
    const int n = parse_int(env, "TOPOWARP_THREADS");
    if (n < 1) throw ValidationError("TOPOWARP_THREADS must be >= 1");
    return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

Shape parse_patch(const std::string& text) {
  const auto parts = split_ints(text, 'x', "--patch");
  if (parts.size() == 2) return Shape(parts[0], parts[1]);
  if (parts.size() == 3) return Shape(parts[2], parts[0], parts[1]);
  throw ValidationError("--patch must be HxW or HxWxD, got '" + text + "'");
}

std::vector<int> parse_dims(const std::string& text) { return split_ints(text, ',', "--betti-dims"); }

std::vector<int> parse_coord(const std::string& text) {
  auto c = split_ints(text, ',', "--at");
  if (c.size() != 2 && c.size() != 3) throw ValidationError("--at must be Y,X or Z,Y,X");
  return c;
}

Adjacency parse_adjacency(const std::string& text, int rank) {
  const int n = parse_int(text, "--fg-adjacency");
  switch (n) {
    case 4: return Adjacency::with_fg(Connectivity::N4, rank);
    case 8: return Adjacency::with_fg(Connectivity::N8, rank);
    case 6: return Adjacency::with_fg(Connectivity::N6, rank);
    case 26: return Adjacency::with_fg(Connectivity::N26, rank);
    default: throw ValidationError("--fg-adjacency must be 4, 8, 6 or 26");
  }
}

std::string mask_extension(const std::filesystem::path& input) {
  switch (io::format_for(input)) {
    case io::MaskFormat::Png: return ".png";
    case io::MaskFormat::Pgm: return ".pgm";
    default: return ".npy";
  }
}

bool is_float_npy(const std::filesystem::path& path) {
  if (io::format_for(path) != io::MaskFormat::Npy) return false;
  const std::string d = io::read_npy(path).descr;
  return d.size() > 1 && d[1] == 'f';
}

}  // namespace topowarp::cli
