#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "topowarp/grid.hpp"
#include "topowarp/loss.hpp"

namespace topowarp::io {

/// Unreadable or unwritable files and malformed containers.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class MaskFormat : std::uint8_t { Auto, Png, Pgm, Npy };

/// Picks a format from the file extension (.png, .pgm, .npy).
MaskFormat format_for(const std::filesystem::path& path);

/// Raw NPY v1.0 array, C order only.
struct NpyArray {
  std::string descr;  // e.g. "|u1", "<f4"
  std::vector<std::int64_t> shape;
  std::vector<std::uint8_t> bytes;

  std::size_t count() const;
};

NpyArray read_npy(const std::filesystem::path& path);
void write_npy(const std::filesystem::path& path, const NpyArray& array);

/// 2D masks from 8-bit grayscale PNG/PGM (nonzero = FG); 2D or 3D masks
/// from uint8/bool NPY holding only 0 and 1.
Grid load_mask(const std::filesystem::path& path, MaskFormat format = MaskFormat::Auto);

/// PNG/PGM store FG as 255. 3D grids saved as images become one file per
/// z-slice named <stem>_z<NNN><ext>. NPY stores uint8 0/1.
void save_mask(const Grid& grid, const std::filesystem::path& path,
               MaskFormat format = MaskFormat::Auto);

/// float32/float64 NPY of rank 2 or 3 with every value in [0, 1].
LikelihoodMap load_likelihood(const std::filesystem::path& path);
void save_likelihood(const LikelihoodMap& map, const std::filesystem::path& path);
/// Writes an arbitrary real field as float32 or float64 NPY.
void save_field(std::span<const double> values, const Shape& shape,
                const std::filesystem::path& path, bool as_float64 = false);

/// 8-bit RGB PNG; `rgb` holds height*width*3 bytes.
void write_rgb_png(const std::filesystem::path& path, int height, int width,
                   std::span<const std::uint8_t> rgb);

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

}  // namespace topowarp::io
