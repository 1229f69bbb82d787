#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fgc/io.hpp"
#include "fgc/matrix.hpp"
#include "fgc/types.hpp"

namespace fgc {

// ---------------------------------------------------------------------------
// Generators. All randomness comes from std::mt19937_64, whose output
// sequence is fixed by the standard, so a seed reproduces bit-identical data
// on every platform.

/// n iid draws from U(0, 1) (open interval), normalized to sum to 1.
std::vector<double> random_weights(std::size_t n, std::uint64_t seed);

/// Random measure on x_i = i / (n - 1), i.e. spacing 1 / (n - 1).
DiscreteMeasure gen_random_measure_1d(std::size_t n, std::uint64_t seed, int power = 1);
/// Random measure on a side x side grid over [0, 1]^2.
DiscreteMeasure gen_random_measure_2d(std::size_t side, std::uint64_t seed, int power = 1);

/// Feature cost between grid coordinates: |x_i - y_p| in 1D, Euclidean in 2D.
FeatureCost coordinate_cost(const Grid& gx, const Grid& gy);

struct TwoHumpOptions {
  double width = 0.15;  // support of each raised-cosine hump
  std::array<double, 2> heights{0.5, 0.8};
  /// Mass floor added to every sample before normalization, relative to 1.
  double baseline = 1e-3;
  double noise = 0.0;
  std::uint64_t seed = 0;
};

struct TwoHumpProblem {
  DiscreteMeasure source;
  DiscreteMeasure target;
  FeatureCost cost;  // |signal_i - signal_p|
  std::vector<double> source_signal;
  std::vector<double> target_signal;
  std::array<std::vector<std::size_t>, 2> source_support;
  std::array<std::vector<std::size_t>, 2> target_support;
};

/// Two series sampled at n uniform times on [0, 1], each with two raised
/// cosine humps; measures are the normalized signals.
TwoHumpProblem gen_two_hump_series(std::size_t n, std::array<double, 2> source_positions,
                                   std::array<double, 2> target_positions,
                                   const TwoHumpOptions& options = {});

/// Fraction of the plan mass leaving `from` rows that lands in `to` columns.
double mass_fraction(const Matrix& plan, std::span<const std::size_t> from,
                     std::span<const std::size_t> to);

// ---------------------------------------------------------------------------
// Images.

/// Bilinear resampling to side x side.
io::GrayscaleImage subsample(const io::GrayscaleImage& image, std::size_t side);

/// Normalized intensities of a square image on a column-major grid.
DiscreteMeasure image_measure(const io::GrayscaleImage& image, double spacing, int power = 1);

struct ImageInput {
  io::GrayscaleImage image;
  DiscreteMeasure measure;
};

ImageInput load_image(const std::filesystem::path& path, std::size_t side, double spacing,
                      int power = 1);

/// |gray_i - gray_p| between the column-major flattened pixels of two images.
FeatureCost gray_level_cost(const io::GrayscaleImage& a, const io::GrayscaleImage& b);

io::GrayscaleImage translate(const io::GrayscaleImage& image, long drow, long dcol);
/// Quarter turns counter-clockwise.
io::GrayscaleImage rotate90(const io::GrayscaleImage& image, int quarter_turns = 1);
io::GrayscaleImage mirror_horizontal(const io::GrayscaleImage& image);
/// A hand-drawn-looking "3" on a side x side canvas, for demos and tests.
io::GrayscaleImage synthetic_digit(std::size_t side = 28);

// ---------------------------------------------------------------------------
// Benchmarks.

enum class BenchTask { random1d, random2d, timeseries, digits, horse };

struct BenchOptions {
  BenchTask task = BenchTask::random1d;
  bool fused = false;  // FGW instead of GW (always FGW for image/series tasks)
  std::vector<std::size_t> sizes;
  int repetitions = 1;
  bool run_fast = true;
  bool run_naive = true;
  bool warmup = true;
  SolverConfig solver;
  std::uint64_t seed = 7;
  /// Digits: translation | rotation | reflection.
  std::string transform = "reflection";
  std::optional<std::filesystem::path> image_a;
  std::optional<std::filesystem::path> image_b;
};

struct BenchRecord {
  std::size_t size = 0;    // the size parameter (N in 1D, side n in 2D)
  std::size_t points = 0;  // grid point count used for slope fitting
  double time_fast_mean = 0.0;
  double time_fast_median = 0.0;
  double setup_fast = 0.0;
  std::optional<double> time_naive_mean;
  std::optional<double> time_naive_median;
  std::optional<double> setup_naive;
  std::optional<double> speedup;
  std::optional<double> plan_diff_fro;  // max over repetitions
  double objective = 0.0;
  bool fast_ran = false;
};

struct BenchReport {
  std::vector<BenchRecord> records;
  std::optional<double> slope_fast;
  std::optional<double> slope_naive;
};

struct Problem {
  DiscreteMeasure source;
  DiscreteMeasure target;
  std::optional<FeatureCost> cost;
};

Problem make_problem(const BenchOptions& options, std::size_t size, std::uint64_t seed);

/// Frobenius distance between two plans; the one comparator used for every
/// fast-vs-naive discrepancy the library reports.
double plan_discrepancy(const Matrix& a, const Matrix& b);

/// Least-squares slope of log(times) against log(sizes).
double fit_loglog_slope(std::span<const double> sizes, std::span<const double> times);

BenchReport run_benchmark(const BenchOptions& options);

std::string bench_report_json(const BenchReport& report, const BenchOptions& options);
std::string bench_report_csv(const BenchReport& report);
std::string bench_report_table(const BenchReport& report);

/// Regularization used when the caller does not pick one. The image tasks
/// have distances in pixel units, so they need a much larger epsilon for the
/// iteration to stay well conditioned.
double default_epsilon(BenchTask task);

std::optional<BenchTask> parse_task(const std::string& name);
std::string task_name(BenchTask task);

}  // namespace fgc
