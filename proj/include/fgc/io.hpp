#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fgc/matrix.hpp"
#include "fgc/types.hpp"

namespace fgc::io {

/// Shortest decimal that parses back to the same double.
std::string format_double(double x);

/// One weight per line, or "index,weight" lines (any order, 0-based).
/// Blank lines and lines starting with '#' are skipped.
std::vector<double> read_measure_csv(const std::filesystem::path& path);

/// Comma separated rows; all rows must have the same length.
Matrix read_matrix_csv(const std::filesystem::path& path);
void write_matrix_csv(const std::filesystem::path& path, const Matrix& m);

/// Sparse plan dump: header "i,p,gamma", entries with gamma > threshold.
void write_plan_triplets(const std::filesystem::path& path, const Matrix& plan, double threshold);
/// Reads either a dense CSV matrix or a triplet file (detected by header).
/// Triplet files need the shape, since trailing zero rows are not stored.
Matrix read_plan_csv(const std::filesystem::path& path, std::size_t rows, std::size_t cols);

struct GrayscaleImage {
  std::size_t width = 0;
  std::size_t height = 0;
  /// Row-major intensities in [0, 1].
  std::vector<double> pixels;

  double at(std::size_t row, std::size_t col) const { return pixels[row * width + col]; }
};

/// Binary (P5) or ASCII (P2) PGM, 8 or 16 bit.
GrayscaleImage read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const GrayscaleImage& image);
/// Dispatches on extension: .pgm, or .csv (matrix of intensities, clamped to [0, 1]).
GrayscaleImage read_image(const std::filesystem::path& path);

}  // namespace fgc::io
