#include "topowarp/report.hpp"

#include <array>
#include <charconv>
#include <fstream>

#include <json.hpp>

#include "topowarp/io.hpp"

namespace topowarp::io {

std::string format_real(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

KeyValueReport& KeyValueReport::put(std::string key, std::string value) {
  entries_.emplace_back(std::move(key), std::move(value));
  return *this;
}

KeyValueReport& KeyValueReport::put_real(std::string key, double value) {
  return put(std::move(key), format_real(value));
}

KeyValueReport& KeyValueReport::put_int(std::string key, std::int64_t value) {
  return put(std::move(key), std::to_string(value));
}

KeyValueReport& KeyValueReport::put_bool(std::string key, bool value) {
  return put(std::move(key), value ? "true" : "false");
}

std::string KeyValueReport::render() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + "=" + v + "\n";
  return out;
}

void RunManifest::add_input(const std::filesystem::path& path) {
  inputs.emplace_back(path.string(), sha256_file(path));
}

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["version"] = version;
  j["command_line"] = command_line;
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& [k, v] : config) cfg[k] = v;
  j["config"] = cfg;
  j["seed"] = seed;
  nlohmann::ordered_json in = nlohmann::ordered_json::array();
  for (const auto& [path, digest] : inputs) in.push_back({{"path", path}, {"sha256", digest}});
  j["inputs"] = in;
  j["outputs"] = outputs;
  nlohmann::ordered_json t = nlohmann::ordered_json::array();
  for (const auto& [stage, seconds] : timings) t.push_back({{"stage", stage}, {"seconds", seconds}});
  j["timings"] = t;
  return j.dump(2) + "\n";
}

void RunManifest::write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write manifest " + path.string());
  out << to_json();
  if (!out) throw IoError("failed writing manifest " + path.string());
}

}  // namespace topowarp::io
