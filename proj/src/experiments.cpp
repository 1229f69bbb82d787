#include "fgc/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <random>
#include <sstream>

#include <json.hpp>

#include "fgc/error.hpp"
#include "fgc/fast_multiply.hpp"
#include "fgc/log.hpp"
#include "fgc/solver.hpp"

namespace fgc {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr std::uint64_t kTargetStream = 0x9E3779B97F4A7C15ULL;

/// Uniform double in (0, 1) from the top 53 bits.
double open_unit(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

double grid_step(std::size_t n) { return n > 1 ? 1.0 / static_cast<double>(n - 1) : 1.0; }

double raised_cosine(double x, double center, double width, double height) {
  const double d = x - center;
  if (std::abs(d) >= 0.5 * width) return 0.0;
  return height * 0.5 * (1.0 + std::cos(2.0 * kPi * d / width));
}

double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::vector<double> column_major_pixels(const io::GrayscaleImage& img) {
  std::vector<double> out(img.width * img.height);
  for (std::size_t r = 0; r < img.height; ++r)
    for (std::size_t c = 0; c < img.width; ++c) out[r + c * img.height] = img.at(r, c);
  return out;
}

}  // namespace

std::vector<double> random_weights(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> w(n);
  double total = 0.0;
  for (double& x : w) {
    x = open_unit(rng);
    total += x;
  }
  for (double& x : w) x /= total;
  return w;
}

DiscreteMeasure gen_random_measure_1d(std::size_t n, std::uint64_t seed, int power) {
  if (n == 0) throw Error(ErrorCode::ConfigInvalid, "measure needs at least one point");
  return validate_measure(random_weights(n, seed), UniformGrid1D(n, grid_step(n), power));
}

DiscreteMeasure gen_random_measure_2d(std::size_t side, std::uint64_t seed, int power) {
  if (side == 0) throw Error(ErrorCode::ConfigInvalid, "measure needs at least one point");
  return validate_measure(random_weights(side * side, seed),
                          UniformGrid2D(side, grid_step(side), power));
}

FeatureCost coordinate_cost(const Grid& gx, const Grid& gy) {
  struct Point {
    double a, b;
  };
  auto coords = [](const Grid& g) {
    std::vector<Point> pts;
    if (const auto* g1 = std::get_if<UniformGrid1D>(&g)) {
      for (std::size_t i = 0; i < g1->size; ++i) pts.push_back({g1->spacing * double(i), 0.0});
    } else {
      const auto& g2 = std::get<UniformGrid2D>(g);
      for (std::size_t j = 0; j < g2.side; ++j)
        for (std::size_t i = 0; i < g2.side; ++i)
          pts.push_back({g2.spacing * double(i), g2.spacing * double(j)});
    }
    return pts;
  };
  const auto px = coords(gx);
  const auto py = coords(gy);
  FeatureCost c{Matrix(px.size(), py.size())};
  for (std::size_t i = 0; i < px.size(); ++i)
    for (std::size_t p = 0; p < py.size(); ++p)
      c.values(i, p) = std::hypot(px[i].a - py[p].a, px[i].b - py[p].b);
  return c;
}

TwoHumpProblem gen_two_hump_series(std::size_t n, std::array<double, 2> source_positions,
                                   std::array<double, 2> target_positions,
                                   const TwoHumpOptions& options) {
  const double w = options.width;
  if (!(w > 0.0)) throw Error(ErrorCode::ConfigInvalid, "hump width must be positive");
  for (const auto& pos : {source_positions, target_positions}) {
    for (double c : pos)
      if (c - 0.5 * w < 0.0 || c + 0.5 * w > 1.0)
        throw Error(ErrorCode::ConfigInvalid, "hump support leaves [0, 1]");
    if (std::abs(pos[0] - pos[1]) < w)
      throw Error(ErrorCode::OverlappingHumps, "hump supports overlap");
  }

  const double h = grid_step(n);
  std::mt19937_64 rng(options.seed);
  auto sample = [&](std::array<double, 2> pos, std::vector<double>& signal,
                    std::array<std::vector<std::size_t>, 2>& supp) {
    signal.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = h * double(i);
      for (int b = 0; b < 2; ++b) {
        const double s = raised_cosine(x, pos[b], w, options.heights[b]);
        if (s > 0.0) supp[b].push_back(i);
        signal[i] += s;
      }
      if (options.noise > 0.0) signal[i] += options.noise * (open_unit(rng) - 0.5);
      signal[i] = std::max(signal[i], 0.0);
    }
    for (const auto& s : supp)
      if (s.size() < 3)
        throw Error(ErrorCode::ConfigInvalid, "too few samples to resolve the humps");
  };

  std::vector<double> ss, ts;
  std::array<std::vector<std::size_t>, 2> sup_s, sup_t;
  sample(source_positions, ss, sup_s);
  sample(target_positions, ts, sup_t);

  auto to_measure = [&](const std::vector<double>& signal) {
    std::vector<double> wts(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += wts[i] = signal[i] + options.baseline;
    for (double& x : wts) x /= total;
    return validate_measure(std::move(wts), UniformGrid1D(n, h, 1));
  };

  FeatureCost cost{Matrix(n, n)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t p = 0; p < n; ++p) cost.values(i, p) = std::abs(ss[i] - ts[p]);

  return TwoHumpProblem{to_measure(ss), to_measure(ts), std::move(cost), ss, ts, sup_s, sup_t};
}

double mass_fraction(const Matrix& plan, std::span<const std::size_t> from,
                     std::span<const std::size_t> to) {
  double total = 0.0, hit = 0.0;
  for (std::size_t i : from) {
    for (double x : plan.row(i)) total += x;
    for (std::size_t p : to) hit += plan(i, p);
  }
  return total > 0.0 ? hit / total : 0.0;
}

io::GrayscaleImage subsample(const io::GrayscaleImage& image, std::size_t side) {
  if (image.width == 0 || image.height == 0 || side == 0)
    throw Error(ErrorCode::ConfigInvalid, "cannot resample an empty image");
  io::GrayscaleImage out{side, side, std::vector<double>(side * side)};
  const double sy = double(image.height) / double(side);
  const double sx = double(image.width) / double(side);
  for (std::size_t r = 0; r < side; ++r) {
    const double y = std::clamp((double(r) + 0.5) * sy - 0.5, 0.0, double(image.height - 1));
    const auto y0 = static_cast<std::size_t>(std::floor(y));
    const std::size_t y1 = std::min(y0 + 1, image.height - 1);
    const double fy = y - double(y0);
    for (std::size_t c = 0; c < side; ++c) {
      const double x = std::clamp((double(c) + 0.5) * sx - 0.5, 0.0, double(image.width - 1));
      const auto x0 = static_cast<std::size_t>(std::floor(x));
      const std::size_t x1 = std::min(x0 + 1, image.width - 1);
      const double fx = x - double(x0);
      const double top = (1 - fx) * image.at(y0, x0) + fx * image.at(y0, x1);
      const double bot = (1 - fx) * image.at(y1, x0) + fx * image.at(y1, x1);
      out.pixels[r * side + c] = std::clamp((1 - fy) * top + fy * bot, 0.0, 1.0);
    }
  }
  return out;
}

DiscreteMeasure image_measure(const io::GrayscaleImage& image, double spacing, int power) {
  if (image.width != image.height)
    throw Error(ErrorCode::NotSquareGrid, "image must be square to sit on an n x n grid");
  auto w = column_major_pixels(image);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  if (!(total > 0.0)) throw Error(ErrorCode::ZeroMassImage, "image has no intensity");
  for (double& x : w) x /= total;
  return validate_measure(std::move(w), UniformGrid2D(image.width, spacing, power));
}

ImageInput load_image(const std::filesystem::path& path, std::size_t side, double spacing,
                      int power) {
  io::GrayscaleImage img = io::read_image(path);
  if (img.width != side || img.height != side) img = subsample(img, side);
  DiscreteMeasure m = image_measure(img, spacing, power);
  return ImageInput{std::move(img), std::move(m)};
}

FeatureCost gray_level_cost(const io::GrayscaleImage& a, const io::GrayscaleImage& b) {
  const auto ga = column_major_pixels(a);
  const auto gb = column_major_pixels(b);
  FeatureCost c{Matrix(ga.size(), gb.size())};
  for (std::size_t i = 0; i < ga.size(); ++i)
    for (std::size_t p = 0; p < gb.size(); ++p) c.values(i, p) = std::abs(ga[i] - gb[p]);
  return c;
}

io::GrayscaleImage translate(const io::GrayscaleImage& image, long drow, long dcol) {
  io::GrayscaleImage out{image.width, image.height,
                         std::vector<double>(image.pixels.size(), 0.0)};
  const long h = long(image.height), w = long(image.width);
  for (long r = 0; r < h; ++r)
    for (long c = 0; c < w; ++c) {
      const long sr = r - drow, sc = c - dcol;
      if (sr >= 0 && sr < h && sc >= 0 && sc < w)
        out.pixels[std::size_t(r * w + c)] = image.at(std::size_t(sr), std::size_t(sc));
    }
  return out;
}

io::GrayscaleImage rotate90(const io::GrayscaleImage& image, int quarter_turns) {
  io::GrayscaleImage cur = image;
  for (int t = 0; t < ((quarter_turns % 4) + 4) % 4; ++t) {
    io::GrayscaleImage next{cur.height, cur.width, std::vector<double>(cur.pixels.size())};
    // (r, c) -> (w - 1 - c, r)
    for (std::size_t r = 0; r < cur.height; ++r)
      for (std::size_t c = 0; c < cur.width; ++c)
        next.pixels[(cur.width - 1 - c) * next.width + r] = cur.at(r, c);
    cur = std::move(next);
  }
  return cur;
}

io::GrayscaleImage mirror_horizontal(const io::GrayscaleImage& image) {
  io::GrayscaleImage out = image;
  for (std::size_t r = 0; r < image.height; ++r)
    for (std::size_t c = 0; c < image.width; ++c)
      out.pixels[r * image.width + c] = image.at(r, image.width - 1 - c);
  return out;
}

io::GrayscaleImage synthetic_digit(std::size_t side) {
  io::GrayscaleImage img{side, side, std::vector<double>(side * side, 0.0)};
  const double s = double(side);
  const double cx = 0.5 * s, r = 0.2 * s, thick = std::max(1.0, 0.07 * s);
  // Two stacked arcs open to the left, like a "3".
  for (std::size_t y = 0; y < side; ++y)
    for (std::size_t x = 0; x < side; ++x) {
      double best = 1e9;
      for (double cy : {0.32 * s, 0.68 * s}) {
        const double dx = double(x) + 0.5 - cx, dy = double(y) + 0.5 - cy;
        const double ang = std::atan2(dy, dx);
        if (ang > -0.75 * kPi && ang < 0.75 * kPi)
          best = std::min(best, std::abs(std::hypot(dx, dy) - r));
      }
      const double v = std::clamp(1.0 - (best - 0.5 * thick) / 1.0, 0.0, 1.0);
      img.pixels[y * side + x] = best <= 0.5 * thick ? 1.0 : v;
    }
  return img;
}

// ---------------------------------------------------------------------------

Problem make_problem(const BenchOptions& options, std::size_t size, std::uint64_t seed) {
  const int power = 1;
  switch (options.task) {
    case BenchTask::random1d: {
      auto u = gen_random_measure_1d(size, seed, power);
      auto v = gen_random_measure_1d(size, seed ^ kTargetStream, power);
      std::optional<FeatureCost> c;
      if (options.fused) c = coordinate_cost(u.grid(), v.grid());
      return Problem{std::move(u), std::move(v), std::move(c)};
    }
    case BenchTask::random2d: {
      auto u = gen_random_measure_2d(size, seed, power);
      auto v = gen_random_measure_2d(size, seed ^ kTargetStream, power);
      std::optional<FeatureCost> c;
      if (options.fused) c = coordinate_cost(u.grid(), v.grid());
      return Problem{std::move(u), std::move(v), std::move(c)};
    }
    case BenchTask::timeseries: {
      TwoHumpOptions ho;
      ho.seed = seed;
      auto th = gen_two_hump_series(size, {0.2, 0.7}, {0.3, 0.6}, ho);
      return Problem{std::move(th.source), std::move(th.target), std::move(th.cost)};
    }
    case BenchTask::digits: {
      io::GrayscaleImage base =
          options.image_a ? io::read_image(*options.image_a) : synthetic_digit(28);
      if (base.width != size || base.height != size) base = subsample(base, size);
      io::GrayscaleImage moved;
      if (options.transform == "translation")
        moved = translate(base, long(size) / 7, long(size) / 7);
      else if (options.transform == "rotation")
        moved = rotate90(base, 1);
      else if (options.transform == "reflection")
        moved = mirror_horizontal(base);
      else
        throw Error(ErrorCode::ConfigInvalid, "unknown transform '" + options.transform + "'");
      auto c = gray_level_cost(base, moved);
      return Problem{image_measure(base, 1.0, power), image_measure(moved, 1.0, power),
                     std::move(c)};
    }
    case BenchTask::horse: {
      const double h = 100.0 / double(size);
      io::GrayscaleImage a, b;
      if (options.image_a && options.image_b) {
        a = subsample(io::read_image(*options.image_a), size);
        b = subsample(io::read_image(*options.image_b), size);
      } else {
        log::info("no horse frames given; using a synthetic deformation pair");
        const auto base = synthetic_digit(size);
        a = base;
        b = translate(rotate90(base, 1), 0, long(size) / 10);
      }
      auto c = gray_level_cost(a, b);
      return Problem{image_measure(a, h, power), image_measure(b, h, power), std::move(c)};
    }
  }
  throw Error(ErrorCode::ConfigInvalid, "unknown task");
}

double plan_discrepancy(const Matrix& a, const Matrix& b) { return frobenius_diff(a, b); }

double fit_loglog_slope(std::span<const double> sizes, std::span<const double> times) {
  if (sizes.size() != times.size() || sizes.size() < 2)
    throw Error(ErrorCode::ConfigInvalid, "slope fit needs at least two (size, time) pairs");
  const std::size_t n = sizes.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(sizes[i]);
    my += std::log(times[i]);
  }
  mx /= double(n);
  my /= double(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(sizes[i]) - mx;
    sxy += dx * (std::log(times[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

namespace {

struct TimedRun {
  double seconds = 0.0;
  double setup = 0.0;
  SolveResult result;
};

TimedRun timed_solve(const Problem& pb, SolverConfig cfg, GradientMode mode, bool fused) {
  cfg.mode = mode;
  cfg.execution = Execution::serial;
  MirrorDescentTrace trace;
  const auto t0 = std::chrono::steady_clock::now();
  SolveResult r = fused ? entropic_fgw(pb.source, pb.target, *pb.cost, cfg, &trace)
                        : entropic_gw(pb.source, pb.target, cfg, &trace);
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return TimedRun{s, trace.setup_seconds, std::move(r)};
}

}  // namespace

BenchReport run_benchmark(const BenchOptions& options) {
  if (options.sizes.empty()) throw Error(ErrorCode::ConfigInvalid, "no sizes given");
  if (!std::is_sorted(options.sizes.begin(), options.sizes.end()))
    throw Error(ErrorCode::ConfigInvalid, "sizes must be ascending");
  if (options.repetitions < 1) throw Error(ErrorCode::ConfigInvalid, "repetitions must be >= 1");
  if (!options.run_fast && !options.run_naive) throw Error(ErrorCode::ConfigInvalid, "no modes");
  options.solver.validate();

  const bool fused = options.fused || options.task == BenchTask::timeseries ||
                     options.task == BenchTask::digits || options.task == BenchTask::horse;
  const bool is2d = options.task != BenchTask::random1d && options.task != BenchTask::timeseries;

  BenchReport report;
  for (std::size_t size : options.sizes) {
    BenchRecord rec;
    rec.size = size;
    rec.points = is2d ? size * size : size;
    bool naive = options.run_naive;
    if (naive && rec.points > kMaterializeLimit) {
      if (!options.run_fast)
        throw Error(ErrorCode::NaiveTooLarge, std::to_string(rec.points) +
                                                  " points is above the dense limit of " +
                                                  std::to_string(kMaterializeLimit));
      log::warn("skipping naive mode at " + std::to_string(rec.points) + " points");
      naive = false;
    }

    std::vector<double> tf, tn, sf, sn;
    double worst_diff = 0.0;
    for (int rep = 0; rep < options.repetitions; ++rep) {
      const Problem pb = make_problem(options, size, options.seed + std::uint64_t(rep));
      if (rep == 0 && options.warmup) {
        if (options.run_fast) timed_solve(pb, options.solver, GradientMode::fast, fused);
        if (naive) timed_solve(pb, options.solver, GradientMode::naive, fused);
      }
      std::optional<TimedRun> fast_run, naive_run;
      if (options.run_fast) {
        fast_run = timed_solve(pb, options.solver, GradientMode::fast, fused);
        tf.push_back(fast_run->seconds);
        sf.push_back(fast_run->setup);
        rec.objective = fast_run->result.gw_objective;
      }
      if (naive) {
        naive_run = timed_solve(pb, options.solver, GradientMode::naive, fused);
        tn.push_back(naive_run->seconds);
        sn.push_back(naive_run->setup);
        if (!options.run_fast) rec.objective = naive_run->result.gw_objective;
      }
      if (fast_run && naive_run)
        worst_diff = std::max(worst_diff, plan_discrepancy(fast_run->result.plan.values,
                                                           naive_run->result.plan.values));
    }
    if (!tf.empty()) {
      rec.fast_ran = true;
      rec.time_fast_mean = mean(tf);
      rec.time_fast_median = median(tf);
      rec.setup_fast = mean(sf);
    }
    if (!tn.empty()) {
      rec.time_naive_mean = mean(tn);
      rec.time_naive_median = median(tn);
      rec.setup_naive = mean(sn);
    }
    if (!tf.empty() && !tn.empty()) {
      rec.speedup = *rec.time_naive_mean / rec.time_fast_mean;
      rec.plan_diff_fro = worst_diff;
    }
    report.records.push_back(rec);
  }

  std::vector<double> xf, yf, xn, yn;
  for (const auto& r : report.records) {
    if (r.fast_ran) {
      xf.push_back(double(r.points));
      yf.push_back(r.time_fast_mean);
    }
    if (r.time_naive_mean) {
      xn.push_back(double(r.points));
      yn.push_back(*r.time_naive_mean);
    }
  }
  if (xf.size() >= 3) report.slope_fast = fit_loglog_slope(xf, yf);
  if (xn.size() >= 3) report.slope_naive = fit_loglog_slope(xn, yn);
  return report;
}

std::string bench_report_json(const BenchReport& report, const BenchOptions& options) {
  using nlohmann::json;
  json rows = json::array();
  for (const auto& r : report.records) {
    json j{{"size", r.size},
           {"N", r.points},
           {"time_fast_s", r.fast_ran ? json(r.time_fast_mean) : json(nullptr)},
           {"time_fast_median_s", r.fast_ran ? json(r.time_fast_median) : json(nullptr)},
           {"setup_fast_s", r.fast_ran ? json(r.setup_fast) : json(nullptr)},
           {"objective", r.objective}};
    j["time_naive_s"] = r.time_naive_mean ? json(*r.time_naive_mean) : json(nullptr);
    j["time_naive_median_s"] = r.time_naive_median ? json(*r.time_naive_median) : json(nullptr);
    j["setup_naive_s"] = r.setup_naive ? json(*r.setup_naive) : json(nullptr);
    j["speedup"] = r.speedup ? json(*r.speedup) : json(nullptr);
    j["plan_diff_fro"] = r.plan_diff_fro ? json(*r.plan_diff_fro) : json(nullptr);
    rows.push_back(std::move(j));
  }
  json out{{"task", task_name(options.task)},
           {"fused", options.fused},
           {"repetitions", options.repetitions},
           {"records", rows},
           {"slope_fast", report.slope_fast ? json(*report.slope_fast) : json(nullptr)},
           {"slope_naive", report.slope_naive ? json(*report.slope_naive) : json(nullptr)}};
  return out.dump(2);
}

std::string bench_report_csv(const BenchReport& report) {
  std::ostringstream os;
  os << "N,time_fast_s,time_naive_s,speedup,plan_diff_fro\n";
  auto opt = [](const std::optional<double>& v) { return v ? io::format_double(*v) : std::string(); };
  for (const auto& r : report.records) {
    os << r.points << ',' << (r.fast_ran ? io::format_double(r.time_fast_mean) : "") << ','
       << opt(r.time_naive_mean) << ',' << opt(r.speedup) << ',' << opt(r.plan_diff_fro) << '\n';
  }
  return os.str();
}

std::string bench_report_table(const BenchReport& report) {
  std::ostringstream os;
  os << std::setw(8) << "N" << std::setw(14) << "fast (s)" << std::setw(14) << "naive (s)"
     << std::setw(10) << "speedup" << std::setw(14) << "|P_f-P_n|_F" << '\n';
  for (const auto& r : report.records) {
    os << std::setw(8) << r.points << std::setw(14) << std::setprecision(4)
       << (r.fast_ran ? r.time_fast_mean : NAN) << std::setw(14)
       << r.time_naive_mean.value_or(NAN) << std::setw(10) << r.speedup.value_or(NAN)
       << std::setw(14) << r.plan_diff_fro.value_or(NAN) << '\n';
  }
  if (report.slope_fast) os << "fitted slope (fast):  " << *report.slope_fast << '\n';
  if (report.slope_naive) os << "fitted slope (naive): " << *report.slope_naive << '\n';
  return os.str();
}

double default_epsilon(BenchTask task) {
  switch (task) {
    case BenchTask::random2d: return 0.004;
    case BenchTask::digits: return 5.0;
    case BenchTask::horse: return 100.0;
    default: return 0.002;
  }
}

std::optional<BenchTask> parse_task(const std::string& name) {
  if (name == "random1d") return BenchTask::random1d;
  if (name == "random2d") return BenchTask::random2d;
  if (name == "timeseries") return BenchTask::timeseries;
  if (name == "digits") return BenchTask::digits;
  if (name == "horse") return BenchTask::horse;
  return std::nullopt;
}

std::string task_name(BenchTask task) {
  switch (task) {
    case BenchTask::random1d: return "random1d";
    case BenchTask::random2d: return "random2d";
    case BenchTask::timeseries: return "timeseries";
    case BenchTask::digits: return "digits";
    case BenchTask::horse: return "horse";
  }
  return "unknown";
}

}  // namespace fgc
