#include <png.h>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>

#include <openssl/evp.h>

#include "topowarp/io.hpp"

namespace topowarp::io {
namespace {

std::string lower_ext(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

struct Gray8 {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> pixels;
};

Gray8 read_png(const std::filesystem::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.string().c_str()))
    throw IoError(path.string() + ": " + image.message);
  if (image.format & (PNG_FORMAT_FLAG_COLOR | PNG_FORMAT_FLAG_ALPHA)) {
    png_image_free(&image);
    throw ValidationError(path.string() + ": expected a grayscale PNG without alpha");
  }
  image.format = PNG_FORMAT_GRAY;
  Gray8 out;
  out.height = static_cast<int>(image.height);
  out.width = static_cast<int>(image.width);
  out.pixels.resize(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, out.pixels.data(), 0, nullptr))
    throw IoError(path.string() + ": " + image.message);
  return out;
}

void write_png(const std::filesystem::path& path, int height, int width, std::uint32_t format,
               std::span<const std::uint8_t> pixels) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = format;
  if (!png_image_write_to_file(&image, path.string().c_str(), 0, pixels.data(), 0, nullptr))
    throw IoError(path.string() + ": " + image.message);
}

std::string next_pgm_token(std::istream& in) {
  std::string tok;
  char c;
  while (in.get(c)) {
    if (c == '#') {
      std::string skip;
      std::getline(in, skip);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(c);
  }
  return tok;
}

Gray8 read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  if (next_pgm_token(in) != "P5") throw IoError(path.string() + ": not a binary PGM (P5)");
  Gray8 out;
  int maxval = 0;
  try {
    out.width = std::stoi(next_pgm_token(in));
    out.height = std::stoi(next_pgm_token(in));
    maxval = std::stoi(next_pgm_token(in));
  } catch (const std::exception&) {
    throw IoError(path.string() + ": malformed PGM header");
  }
  if (maxval != 255) throw ValidationError(path.string() + ": expected an 8-bit PGM (maxval 255)");
  if (out.width <= 0 || out.height <= 0) throw IoError(path.string() + ": bad PGM extents");
  out.pixels.resize(static_cast<std::size_t>(out.width) * out.height);
  in.read(reinterpret_cast<char*>(out.pixels.data()), static_cast<std::streamsize>(out.pixels.size()));
  if (in.gcount() != static_cast<std::streamsize>(out.pixels.size()))
    throw IoError(path.string() + ": truncated PGM data");
  return out;
}

void write_pgm(const std::filesystem::path& path, int height, int width,
               std::span<const std::uint8_t> pixels) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << "P5\n" << width << " " << height << "\n255\n";
  out.write(reinterpret_cast<const char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

Shape npy_shape(const NpyArray& a, const std::filesystem::path& path) {
  if (a.shape.size() != 2 && a.shape.size() != 3)
    throw ValidationError(path.string() + ": expected a 2D or 3D array, got rank " +
                          std::to_string(a.shape.size()));
  return Shape::from_extents(a.shape);
}

template <class T>
std::vector<double> widen(const std::vector<std::uint8_t>& bytes) {
  std::vector<double> out(bytes.size() / sizeof(T));
  for (std::size_t i = 0; i < out.size(); ++i) {
    T v;
    std::memcpy(&v, bytes.data() + i * sizeof(T), sizeof(T));
    out[i] = static_cast<double>(v);
  }
  return out;
}

}  // namespace

MaskFormat format_for(const std::filesystem::path& path) {
  const std::string ext = lower_ext(path);
  if (ext == ".png") return MaskFormat::Png;
  if (ext == ".pgm") return MaskFormat::Pgm;
  if (ext == ".npy") return MaskFormat::Npy;
  throw ValidationError(path.string() + ": cannot infer format from extension '" + ext + "'");
}

Grid load_mask(const std::filesystem::path& path, MaskFormat format) {
  if (format == MaskFormat::Auto) format = format_for(path);
  if (format == MaskFormat::Npy) {
    const NpyArray a = read_npy(path);
    if (a.descr != "|u1" && a.descr != "<u1" && a.descr != "|b1")
      throw ValidationError(path.string() + ": mask arrays must be uint8 or bool, got " + a.descr);
    const auto bad = std::find_if(a.bytes.begin(), a.bytes.end(), [](std::uint8_t v) { return v > 1; });
    if (bad != a.bytes.end())
      throw ValidationError(path.string() + ": mask array holds value " + std::to_string(*bad) +
                            " (only 0 and 1 allowed)");
    return Grid(npy_shape(a, path), a.bytes);
  }
  const Gray8 img = format == MaskFormat::Png ? read_png(path) : read_pgm(path);
  return Grid::from_nonzero(Shape(img.height, img.width), img.pixels);
}

void save_mask(const Grid& grid, const std::filesystem::path& path, MaskFormat format) {
  if (format == MaskFormat::Auto) format = format_for(path);
  const Shape& s = grid.shape();
  if (format == MaskFormat::Npy) {
    NpyArray a;
    a.descr = "|u1";
    a.shape = s.extents();
    a.bytes.assign(grid.cells().begin(), grid.cells().end());
    write_npy(path, a);
    return;
  }
  const std::size_t plane = static_cast<std::size_t>(s.height()) * s.width();
  for (int z = 0; z < s.depth(); ++z) {
    std::vector<std::uint8_t> pixels(plane);
    const auto cells = grid.cells().subspan(z * plane, plane);
    std::transform(cells.begin(), cells.end(), pixels.begin(),
                   [](std::uint8_t v) -> std::uint8_t { return v ? 255 : 0; });
    std::filesystem::path target = path;
    if (grid.rank() == 3) {
      char suffix[16];
      std::snprintf(suffix, sizeof suffix, "_z%03d", z);
      target = path.parent_path() / (path.stem().string() + suffix + path.extension().string());
    }
    if (format == MaskFormat::Png)
      write_png(target, s.height(), s.width(), PNG_FORMAT_GRAY, pixels);
    else
      write_pgm(target, s.height(), s.width(), pixels);
  }
}

LikelihoodMap load_likelihood(const std::filesystem::path& path) {
  const NpyArray a = read_npy(path);
  const Shape shape = npy_shape(a, path);
  std::vector<double> values;
  if (a.descr == "<f4")
    values = widen<float>(a.bytes);
  else if (a.descr == "<f8")
    values = widen<double>(a.bytes);
  else
    throw ValidationError(path.string() + ": likelihood arrays must be float32 or float64, got " +
                          a.descr);
  try {
    return LikelihoodMap(shape, std::move(values));
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void save_field(std::span<const double> values, const Shape& shape,
                const std::filesystem::path& path, bool as_float64) {
  if (values.size() != shape.size()) throw ValidationError("save_field: size does not match shape");
  NpyArray a;
  a.shape = shape.extents();
  if (as_float64) {
    a.descr = "<f8";
    a.bytes.resize(values.size() * sizeof(double));
    std::memcpy(a.bytes.data(), values.data(), a.bytes.size());
  } else {
    a.descr = "<f4";
    a.bytes.resize(values.size() * sizeof(float));
    for (std::size_t i = 0; i < values.size(); ++i) {
      const auto v = static_cast<float>(values[i]);
      std::memcpy(a.bytes.data() + i * sizeof(float), &v, sizeof(float));
    }
  }
  write_npy(path, a);
}

void save_likelihood(const LikelihoodMap& map, const std::filesystem::path& path) {
  save_field(map.values(), map.shape(), path, false);
}

void write_rgb_png(const std::filesystem::path& path, int height, int width,
                   std::span<const std::uint8_t> rgb) {
  if (rgb.size() != static_cast<std::size_t>(height) * width * 3)
    throw ValidationError("write_rgb_png: buffer size does not match extents");
  write_png(path, height, width, PNG_FORMAT_RGB, rgb);
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
    throw IoError("sha256: digest initialisation failed");
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &len);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned i = 0; i < len; ++i) {
    hex.push_back(kHex[digest[i] >> 4]);
    hex.push_back(kHex[digest[i] & 15]);
  }
  return hex;
}

}  // namespace topowarp::io
