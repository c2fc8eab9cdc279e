#include <cstring>
#include <fstream>
#include <iterator>
#include <string_view>

#include "topowarp/io.hpp"

namespace topowarp::io {
namespace {

constexpr char kMagic[] = "\x93NUMPY";

std::size_t item_size(const std::string& descr) {
  if (descr.size() < 3) throw ValidationError("npy: unsupported dtype '" + descr + "'");
  const std::string_view kind(descr.data() + 1, descr.size() - 1);
  if (kind == "u1" || kind == "b1" || kind == "i1") return 1;
  if (kind == "f4" || kind == "i4" || kind == "u4") return 4;
  if (kind == "f8" || kind == "i8" || kind == "u8") return 8;
  if (kind == "f2" || kind == "i2" || kind == "u2") return 2;
  throw ValidationError("npy: unsupported dtype '" + descr + "'");
}

// Value of `key` in the header dict, up to the next top-level ',' or '}'.
std::string dict_value(const std::string& header, const std::string& key) {
  const std::string quoted = "'" + key + "'";
  auto pos = header.find(quoted);
  if (pos == std::string::npos) throw IoError("npy: header lacks '" + key + "'");
  pos = header.find(':', pos + quoted.size());
  if (pos == std::string::npos) throw IoError("npy: malformed header");
  ++pos;
  while (pos < header.size() && header[pos] == ' ') ++pos;
  std::size_t end = pos;
  if (pos < header.size() && header[pos] == '(') {
    end = header.find(')', pos);
    if (end == std::string::npos) throw IoError("npy: malformed shape");
    return header.substr(pos, end - pos + 1);
  }
  if (pos < header.size() && header[pos] == '\'') {
    end = header.find('\'', pos + 1);
    if (end == std::string::npos) throw IoError("npy: malformed header");
    return header.substr(pos + 1, end - pos - 1);
  }
  while (end < header.size() && header[end] != ',' && header[end] != '}') ++end;
  return header.substr(pos, end - pos);
}

std::vector<std::int64_t> parse_shape(const std::string& tuple) {
  std::vector<std::int64_t> out;
  std::size_t i = 1;
  while (i < tuple.size()) {
    while (i < tuple.size() && (tuple[i] == ' ' || tuple[i] == ',')) ++i;
    if (i >= tuple.size() || tuple[i] == ')') break;
    std::size_t used = 0;
    try {
      out.push_back(std::stoll(tuple.substr(i), &used));
    } catch (const std::exception&) {
      throw IoError("npy: malformed shape " + tuple);
    }
    if (out.back() < 0) throw IoError("npy: negative extent in shape " + tuple);
    i += used;
  }
  return out;
}

}  // namespace

std::size_t NpyArray::count() const {
  std::size_t n = 1;
  for (auto e : shape) n *= static_cast<std::size_t>(e);
  return n;
}

NpyArray read_npy(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (raw.size() < 10 || std::memcmp(raw.data(), kMagic, 6) != 0)
    throw IoError(path.string() + ": not an NPY file");
  const int major = raw[6];
  std::size_t header_len = 0;
  std::size_t offset = 0;
  if (major == 1) {
    header_len = raw[8] | (static_cast<std::size_t>(raw[9]) << 8);
    offset = 10;
  } else if (major == 2 || major == 3) {
    if (raw.size() < 12) throw IoError(path.string() + ": truncated NPY header");
    header_len = raw[8] | (static_cast<std::size_t>(raw[9]) << 8) |
                 (static_cast<std::size_t>(raw[10]) << 16) | (static_cast<std::size_t>(raw[11]) << 24);
    offset = 12;
  } else {
    throw IoError(path.string() + ": unsupported NPY version " + std::to_string(major));
  }
  if (raw.size() < offset + header_len) throw IoError(path.string() + ": truncated NPY header");
  const std::string header(raw.begin() + static_cast<std::ptrdiff_t>(offset),
                           raw.begin() + static_cast<std::ptrdiff_t>(offset + header_len));

  NpyArray a;
  a.descr = dict_value(header, "descr");
  if (dict_value(header, "fortran_order").find("False") == std::string::npos)
    throw ValidationError(path.string() + ": Fortran-order arrays are not supported");
  a.shape = parse_shape(dict_value(header, "shape"));
  if (a.descr[0] == '>' && item_size(a.descr) > 1)
    throw ValidationError(path.string() + ": big-endian arrays are not supported");
  const std::size_t expected = a.count() * item_size(a.descr);
  const std::size_t data_at = offset + header_len;
  if (raw.size() - data_at != expected)
    throw IoError(path.string() + ": expected " + std::to_string(expected) + " data bytes, found " +
                  std::to_string(raw.size() - data_at));
  a.bytes.assign(raw.begin() + static_cast<std::ptrdiff_t>(data_at), raw.end());
  return a;
}

void write_npy(const std::filesystem::path& path, const NpyArray& a) {
  if (a.bytes.size() != a.count() * item_size(a.descr))
    throw ValidationError("npy: data size does not match shape and dtype");
  std::string shape = "(";
  for (std::size_t i = 0; i < a.shape.size(); ++i) {
    shape += std::to_string(a.shape[i]);
    shape += (a.shape.size() == 1 || i + 1 < a.shape.size()) ? "," : "";
    if (i + 1 < a.shape.size()) shape += " ";
  }
  shape += ")";
  std::string header = "{'descr': '" + a.descr + "', 'fortran_order': False, 'shape': " + shape + ", }";
  const std::size_t unpadded = 10 + header.size() + 1;
  header.append((64 - unpadded % 64) % 64, ' ');
  header.push_back('\n');

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(kMagic, 6);
  const char version[2] = {1, 0};
  out.write(version, 2);
  const char len[2] = {static_cast<char>(header.size() & 0xff), static_cast<char>(header.size() >> 8)};
  out.write(len, 2);
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  out.write(reinterpret_cast<const char*>(a.bytes.data()), static_cast<std::streamsize>(a.bytes.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace topowarp::io
