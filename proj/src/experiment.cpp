#include "reconn/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "reconn/checkpoint.hpp"
#include "reconn/optimizer.hpp"

namespace reconn {

using nlohmann::json;

namespace {

const double kSqrt10 = std::sqrt(10.0);

struct ExperimentDef {
  const char* id;
  const char* problem;
  const char* loss;
  std::size_t iterations;
  std::size_t n1, n2, n3;
  std::vector<double> weights;
  std::vector<int> main_sizes;
  std::vector<int> angular_sizes;
  const char* activation = "tanh";
};

const std::vector<ExperimentDef>& experiment_table() {
  static const std::vector<ExperimentDef> defs = {
      {"1d-h1-tanh", "1d-transmission", "h1", 5000, 2500, 0, 0, {1.0},
       {1, 20, 20, 20, 1}, {}},
      {"1d-h1-relu", "1d-transmission", "h1", 5000, 2500, 0, 0, {1.0},
       {1, 20, 20, 20, 1}, {}, "relu"},
      {"1d-h1-reconn", "1d-transmission", "h1", 5000, 2500, 0, 0, {1.0},
       {1, 20, 20, 20, 2}, {}},
      {"1d-pinns", "1d-transmission", "pinns-1d", 5000, 2500, 0, 0,
       {1.0, 1.0, 1.0}, {1, 20, 20, 20, 2}, {}},
      {"interface-2d", "smooth-interface", "pinns-interface", 50000, 1000, 1000,
       1000, {1.0, kSqrt10, 10.0}, {2, 30, 30, 30, 2}, {}},
      {"lshape-reconn", "lshape", "pinns-lshape", 50000, 1000, 0, 1000,
       {1.0, 10.0, 1.0}, {2, 30, 30, 30, 2}, {2, 15, 15, 15, 1}},
      {"lshape-classical", "lshape", "pinns-lshape", 50000, 1000, 0, 1000,
       {1.0, 10.0}, {2, 35, 35, 35, 1}, {}},
      {"material-pinns", "material-vertex", "pinns-material", 50000, 1000, 1000,
       1000, {1.0, kSqrt10, 10.0, 1.0}, {2, 30, 30, 30, 6}, {2, 15, 15, 15, 3}},
      {"material-h1-reconn", "material-vertex", "h1", 50000, 2500, 0, 0, {1.0},
       {2, 30, 30, 30, 6}, {2, 15, 15, 15, 3}},
      {"material-h1-classical", "material-vertex", "h1", 50000, 2500, 0, 0,
       {1.0}, {2, 36, 36, 36, 1}, {}},
  };
  return defs;
}

const ExperimentDef& find_experiment(const std::string& id) {
  for (const auto& d : experiment_table())
    if (id == d.id) return d;
  throw std::invalid_argument("unknown experiment id: " + id);
}

void write_csv_value(std::string& line, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  line += buf;
}

}  // namespace

const std::vector<std::string>& ExperimentConfig::known_experiments() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (const auto& d : experiment_table()) v.push_back(d.id);
    return v;
  }();
  return ids;
}

ExperimentConfig ExperimentConfig::defaults_for(const std::string& id) {
  const ExperimentDef& d = find_experiment(id);
  ExperimentConfig cfg;
  cfg.experiment = id;
  cfg.iterations = d.iterations;
  cfg.n_interior = d.n1;
  cfg.n_interface = d.n2;
  cfg.n_boundary = d.n3;
  cfg.weights = d.weights;
  cfg.main_sizes = d.main_sizes;
  cfg.angular_sizes = d.angular_sizes;
  cfg.activation = d.activation;
  cfg.output_dir = std::string("out/") + id;
  return cfg;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ExperimentConfig cfg = defaults_for(j.at("experiment").get<std::string>());
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("iterations")) cfg.iterations = j["iterations"].get<std::size_t>();
  if (j.contains("batch")) {
    const auto& b = j["batch"];
    if (b.contains("interior")) cfg.n_interior = b["interior"].get<std::size_t>();
    if (b.contains("interface")) cfg.n_interface = b["interface"].get<std::size_t>();
    if (b.contains("boundary")) cfg.n_boundary = b["boundary"].get<std::size_t>();
  }
  if (j.contains("weights")) cfg.weights = j["weights"].get<std::vector<double>>();
  if (j.contains("layers")) {
    const auto& l = j["layers"];
    if (l.contains("main")) cfg.main_sizes = l["main"].get<std::vector<int>>();
    if (l.contains("angular"))
      cfg.angular_sizes = l["angular"].get<std::vector<int>>();
  }
  if (j.contains("activation")) cfg.activation = j["activation"].get<std::string>();
  if (j.contains("cutoff")) {
    cfg.delta1 = j["cutoff"].value("delta1", cfg.delta1);
    cfg.delta2 = j["cutoff"].value("delta2", cfg.delta2);
  }
  if (j.contains("lr")) {
    cfg.lr_initial = j["lr"].value("initial", cfg.lr_initial);
    cfg.lr_final = j["lr"].value("final", cfg.lr_final);
  }
  if (j.contains("grid")) {
    cfg.grid_nx = j["grid"].value("nx", cfg.grid_nx);
    cfg.grid_n1d = j["grid"].value("n1d", cfg.grid_n1d);
  }
  if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
  if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();
  return cfg;
}

json ExperimentConfig::to_json() const {
  json j;
  j["experiment"] = experiment;
  j["seed"] = seed;
  j["iterations"] = iterations;
  j["batch"] = {{"interior", n_interior},
                {"interface", n_interface},
                {"boundary", n_boundary}};
  j["weights"] = weights;
  j["layers"]["main"] = main_sizes;
  if (!angular_sizes.empty()) j["layers"]["angular"] = angular_sizes;
  j["activation"] = activation;
  j["cutoff"] = {{"delta1", delta1}, {"delta2", delta2}};
  j["lr"] = {{"initial", lr_initial}, {"final", lr_final}};
  j["grid"] = {{"nx", grid_nx}, {"n1d", grid_n1d}};
  j["output_dir"] = output_dir;
  return j;
}

Problem problem_for_experiment(const std::string& id) {
  return make_problem(find_experiment(id).problem);
}

std::unique_ptr<Field> field_for_experiment(const ExperimentConfig& cfg) {
  const ExperimentDef& def = find_experiment(cfg.experiment);
  const Activation act =
      cfg.activation == "relu" ? Activation::Relu : Activation::Tanh;
  Rng init_rng = Rng(cfg.seed).fork(0x1217);
  const Cutoff cutoff{cfg.delta1, cfg.delta2};
  const std::string problem = def.problem;

  if (problem == "1d-transmission") {
    if (cfg.main_sizes.back() == 1)
      return std::make_unique<ClassicalField>(1, cfg.main_sizes, act, init_rng);
    return std::make_unique<InterfaceField>(
        1, cfg.main_sizes, std::vector<LevelSet>{LevelSet::point_1d(M_PI / 2, 0.5)},
        act, init_rng);
  }
  if (problem == "smooth-interface") {
    return std::make_unique<InterfaceField>(
        2, cfg.main_sizes, std::vector<LevelSet>{LevelSet::circle(0.25)}, act,
        init_rng);
  }
  if (problem == "lshape") {
    if (cfg.angular_sizes.empty())
      return std::make_unique<ClassicalField>(2, cfg.main_sizes, act, init_rng);
    return std::make_unique<CornerField>(
        cfg.main_sizes, cfg.angular_sizes,
        std::vector<std::array<double, 2>>{{0.0, 0.0}}, cutoff, act, init_rng);
  }
  if (problem == "material-vertex") {
    if (cfg.angular_sizes.empty())
      return std::make_unique<ClassicalField>(2, cfg.main_sizes, act, init_rng);
    return std::make_unique<MaterialVertexField>(
        cfg.main_sizes, cfg.angular_sizes,
        std::vector<LevelSet>{LevelSet::line_x1(), LevelSet::line_x2()},
        std::array<double, 2>{0.0, 0.0}, 1, cutoff, act, init_rng);
  }
  throw std::invalid_argument("no field builder for " + cfg.experiment);
}

std::unique_ptr<Loss> loss_for_experiment(const std::string& id) {
  return make_loss(find_experiment(id).loss);
}

RunResult run_experiment(const ExperimentConfig& cfg) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.output_dir);

  Problem problem = problem_for_experiment(cfg.experiment);
  std::unique_ptr<Field> field = field_for_experiment(cfg);
  std::unique_ptr<Loss> loss = loss_for_experiment(cfg.experiment);
  Rng batch_rng = Rng(cfg.seed).fork(0x2afe);

  LossEvaluator evaluator(field->param_count(), cfg.threads);
  Adam adam(field->param_count());
  const LrSchedule schedule{cfg.iterations, cfg.lr_initial, cfg.lr_final};
  const LossWeights weights{cfg.weights};
  const GridSpec grid{cfg.grid_n1d, cfg.grid_nx, cfg.grid_nx};

  std::ofstream history(cfg.output_dir + "/loss_history.csv");
  bool header_written = false;
  std::vector<double> grad;
  LossComponents comps;

  for (std::size_t iter = 0; iter < cfg.iterations; ++iter) {
    if (iter == cfg.iterations / 2) {
      std::ofstream mid(cfg.output_dir + "/solution_grid_mid.csv");
      grid_dump(*field, problem, grid, mid);
    }
    Batch batch = sample_batch(problem, cfg.n_interior, cfg.n_interface,
                               cfg.n_boundary, batch_rng);
    const auto specs = loss->build(*field, problem, batch, weights);
    comps = evaluator.evaluate(*field, specs, &grad);
    if (!std::isfinite(comps.total)) {
      throw std::runtime_error("non-finite loss at iteration " +
                               std::to_string(iter) + "; aborting");
    }
    if (!header_written) {
      history << "iteration,total";
      for (const auto& n : comps.names) history << "," << n << "_raw," << n;
      history << "\n";
      header_written = true;
    }
    std::string line = std::to_string(iter) + ",";
    write_csv_value(line, comps.total);
    for (std::size_t k = 0; k < comps.raw.size(); ++k) {
      line += ",";
      write_csv_value(line, comps.raw[k]);
      line += ",";
      write_csv_value(line, comps.rooted[k]);
    }
    history << line << "\n";
    adam.step(field->params(), grad, schedule.at(iter));
  }
  history.close();

  RunResult result;
  result.final_loss = comps;
  result.output_dir = cfg.output_dir;
  result.errors = relative_l2(*field, problem, grid, evaluator.pool());
  result.lambdas = field->lambda_values();

  {
    std::ofstream gd(cfg.output_dir + "/solution_grid.csv");
    grid_dump(*field, problem, grid, gd);
  }
  save_checkpoint(*field, cfg.output_dir + "/checkpoint");
  if (!field->singular_units().empty()) {
    const auto rep = singular_report(
        *field,
        problem.sigma_of_theta ? problem.sigma_of_theta
                               : std::function<double(double)>([](double) { return 1.0; }),
        256);
    std::ofstream sr(cfg.output_dir + "/singular_report.csv");
    sr << "theta,phi,flux\n";
    char buf[128];
    for (const auto& row : rep.rows) {
      std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g\n", row.theta, row.phi,
                    row.flux);
      sr << buf;
    }
  }

  json metrics;
  metrics["experiment"] = cfg.experiment;
  metrics["seed"] = cfg.seed;
  metrics["iterations"] = cfg.iterations;
  metrics["param_count"] = field->param_count();
  metrics["rel_l2_u_percent"] = result.errors.rel_l2_u_percent;
  metrics["rel_l2_grad_percent"] = result.errors.rel_l2_grad_percent;
  metrics["grid"] = result.errors.grid;
  if (!result.lambdas.empty()) metrics["lambda"] = result.lambdas;
  if (!std::isnan(problem.lambda_exact))
    metrics["lambda_exact"] = problem.lambda_exact;
  json fl;
  for (std::size_t k = 0; k < comps.names.size(); ++k) {
    fl[comps.names[k]] = {{"raw", comps.raw[k]}, {"sqrt", comps.rooted[k]}};
  }
  metrics["final_loss"] = fl;
  metrics["final_total"] = comps.total;
  std::ofstream mj(cfg.output_dir + "/metrics.json");
  mj << metrics.dump(2) << "\n";

  return result;
}

}  // namespace reconn
