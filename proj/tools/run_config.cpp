#include "run_config.hpp"

#include "fgc/error.hpp"
#include "fgc/io.hpp"

namespace fgc::cli {

namespace {

double default_spacing(std::size_t per_axis) { return per_axis > 1 ? 1.0 / double(per_axis - 1) : 1.0; }

Grid file_grid(const RunConfig& c, std::size_t points) {
  if (c.dim == "2d") {
    auto g = UniformGrid2D::from_points(points, 1.0, c.power);
    g.spacing = c.spacing.value_or(default_spacing(g.side));
    return g;
  }
  return UniformGrid1D(points, c.spacing.value_or(default_spacing(points)), c.power);
}

template <class T>
void get_opt(const nlohmann::json& j, const char* key, std::optional<T>& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

}  // namespace

nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j{{"command", c.command},
                   {"random", c.random},
                   {"n", c.n},
                   {"side", c.side},
                   {"spacing", nullptr},
                   {"k", c.power},
                   {"source", c.source},
                   {"target", c.target},
                   {"cost", c.cost},
                   {"image_a", c.image_a},
                   {"image_b", c.image_b},
                   {"dim", c.dim},
                   {"eps", c.epsilon},
                   {"tau", nullptr},
                   {"theta", c.theta},
                   {"iters", c.iterations},
                   {"sinkhorn_iters", c.sinkhorn_iterations},
                   {"tol", c.tolerance},
                   {"log_domain", c.log_domain},
                   {"mode", c.mode},
                   {"exec", c.execution},
                   {"seed", c.seed},
                   {"plan_out", c.plan_out},
                   {"plan_format", c.plan_format},
                   {"threshold", c.threshold},
                   {"json_out", c.json_out},
                   {"check_theta0", c.check_theta_zero}};
  if (c.spacing) j["spacing"] = *c.spacing;
  if (c.tau) j["tau"] = *c.tau;
  return j;
}

RunConfig run_config_from_json(const nlohmann::json& j) {
  RunConfig c;
  try {
    c.command = j.at("command").get<std::string>();
    c.random = j.at("random").get<std::string>();
    c.n = j.at("n").get<std::size_t>();
    c.side = j.at("side").get<std::size_t>();
    get_opt(j, "spacing", c.spacing);
    c.power = j.at("k").get<int>();
    c.source = j.at("source").get<std::string>();
    c.target = j.at("target").get<std::string>();
    c.cost = j.at("cost").get<std::string>();
    c.image_a = j.at("image_a").get<std::string>();
    c.image_b = j.at("image_b").get<std::string>();
    c.dim = j.at("dim").get<std::string>();
    c.epsilon = j.at("eps").get<double>();
    get_opt(j, "tau", c.tau);
    c.theta = j.at("theta").get<double>();
    c.iterations = j.at("iters").get<int>();
    c.sinkhorn_iterations = j.at("sinkhorn_iters").get<int>();
    c.tolerance = j.at("tol").get<double>();
    c.log_domain = j.at("log_domain").get<bool>();
    c.mode = j.at("mode").get<std::string>();
    c.execution = j.at("exec").get<std::string>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.plan_out = j.at("plan_out").get<std::string>();
    c.plan_format = j.at("plan_format").get<std::string>();
    c.threshold = j.at("threshold").get<double>();
    c.json_out = j.at("json_out").get<std::string>();
    c.check_theta_zero = j.at("check_theta0").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("config echo: ") + e.what());
  }
  return c;
}

void validate(const RunConfig& c) {
  auto bad = [](const std::string& m) { throw Error(ErrorCode::ConfigInvalid, m); };
  if (c.command != "gw" && c.command != "fgw") bad("unknown command " + c.command);
  if (c.mode != "fast" && c.mode != "naive" && c.mode != "both") bad("--mode must be fast, naive or both");
  if (c.execution != "serial" && c.execution != "parallel") bad("--exec must be serial or parallel");
  if (c.plan_format != "auto" && c.plan_format != "dense" && c.plan_format != "triplets")
    bad("--plan-format must be auto, dense or triplets");
  if (c.dim != "1d" && c.dim != "2d") bad("--dim must be 1d or 2d");
  if (!c.random.empty() && c.random != "1d" && c.random != "2d") bad("--random must be 1d or 2d");
  const bool files = !c.source.empty() || !c.target.empty();
  const bool images = !c.image_a.empty() || !c.image_b.empty();
  if (c.random.empty() && !files && !images) bad("give --random, --source/--target or --image-a/--image-b");
  if (files && (c.source.empty() || c.target.empty())) bad("--source and --target go together");
  if (images && (c.image_a.empty() || c.image_b.empty())) bad("--image-a and --image-b go together");
  if (images && c.command != "fgw") bad("image inputs need fgw (the gray-level cost)");
  if (c.check_theta_zero && c.command != "fgw") bad("--check-theta0 applies to fgw only");
  if (c.power < 1) bad("--k must be at least 1");
  if (c.spacing && !(*c.spacing > 0.0)) bad("--spacing must be positive");
  solver_config(c).validate();
}

SolverConfig solver_config(const RunConfig& c) {
  SolverConfig s;
  s.epsilon = c.epsilon;
  s.tau = c.tau;
  s.theta = c.theta;
  s.outer_iterations = c.iterations;
  s.sinkhorn_max_iterations = c.sinkhorn_iterations;
  s.sinkhorn_tolerance = c.tolerance;
  s.log_domain = c.log_domain;
  s.execution = c.execution == "parallel" ? Execution::parallel : Execution::serial;
  return s;
}

Problem load_problem(const RunConfig& c) {
  if (!c.image_a.empty()) {
    auto a = load_image(c.image_a, c.side, c.spacing.value_or(default_spacing(c.side)), c.power);
    auto b = load_image(c.image_b, c.side, c.spacing.value_or(default_spacing(c.side)), c.power);
    auto cost = gray_level_cost(a.image, b.image);
    return Problem{std::move(a.measure), std::move(b.measure), std::move(cost)};
  }
  if (!c.source.empty()) {
    auto uw = io::read_measure_csv(c.source);
    auto vw = io::read_measure_csv(c.target);
    const std::size_t m = uw.size(), n = vw.size();
    auto u = validate_measure(std::move(uw), file_grid(c, m));
    auto v = validate_measure(std::move(vw), file_grid(c, n));
    std::optional<FeatureCost> cost;
    if (c.command == "fgw") {
      if (c.cost.empty()) {
        cost = coordinate_cost(u.grid(), v.grid());
      } else {
        cost = FeatureCost{io::read_matrix_csv(c.cost)};
        if (cost->values.rows() != m || cost->values.cols() != n)
          throw Error(ErrorCode::DimensionMismatch, "feature cost shape does not match the measures");
      }
    }
    return Problem{std::move(u), std::move(v), std::move(cost)};
  }
  BenchOptions o;
  o.task = c.random == "2d" ? BenchTask::random2d : BenchTask::random1d;
  o.fused = c.command == "fgw";
  Problem p = make_problem(o, c.random == "2d" ? c.side : c.n, c.seed);
  if (c.power != 1 || c.spacing) {
    // Regrid with the requested power / spacing; the weights stay the same.
    auto regrid = [&](const DiscreteMeasure& m) {
      Grid g = m.grid();
      std::visit([&](auto& gg) {
        gg.power = c.power;
        if (c.spacing) gg.spacing = *c.spacing;
      }, g);
      return validate_measure(m.weights(), g);
    };
    p.source = regrid(p.source);
    p.target = regrid(p.target);
    if (p.cost) p.cost = coordinate_cost(p.source.grid(), p.target.grid());
  }
  if (!c.cost.empty() && c.command == "fgw") {
    p.cost = FeatureCost{io::read_matrix_csv(c.cost)};
    if (p.cost->values.rows() != p.source.size() || p.cost->values.cols() != p.target.size())
      throw Error(ErrorCode::DimensionMismatch, "feature cost shape does not match the measures");
  }
  return p;
}

}  // namespace fgc::cli
