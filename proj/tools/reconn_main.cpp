#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "reconn/experiment.hpp"
#include "reconn/sturm_liouville.hpp"
#include "reconn/verify.hpp"

using nlohmann::json;

namespace {

int cmd_run(const std::string& config_path, std::uint64_t* seed_override,
            std::size_t* iter_override, std::string* outdir_override) {
  json j;
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "error: cannot open config " << config_path << "\n";
    return 1;
  }
  try {
    j = json::parse(in);
  } catch (const std::exception& e) {
    std::cerr << "error: bad config JSON: " << e.what() << "\n";
    return 1;
  }
  try {
    reconn::ExperimentConfig cfg = reconn::ExperimentConfig::from_json(j);
    if (seed_override) cfg.seed = *seed_override;
    if (iter_override) cfg.iterations = *iter_override;
    if (outdir_override) cfg.output_dir = *outdir_override;
    const auto result = reconn::run_experiment(cfg);
    json out;
    out["experiment"] = cfg.experiment;
    out["output_dir"] = result.output_dir;
    out["rel_l2_u_percent"] = result.errors.rel_l2_u_percent;
    out["rel_l2_grad_percent"] = result.errors.rel_l2_grad_percent;
    if (!result.lambdas.empty()) out["lambda"] = result.lambdas;
    std::cout << out.dump(2) << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_verify(const std::string& suite) {
  try {
    const json report = reconn::verify_suite(suite);
    std::cout << report.dump(2) << "\n";
    return report["pass"].get<bool>() ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_singular_solve(const std::vector<double>& sigma) {
  if (sigma.size() != 4) {
    std::cerr << "error: --sigma needs four values\n";
    return 1;
  }
  try {
    const auto sol = reconn::sturm_liouville_solve(
        {sigma[0], sigma[1], sigma[2], sigma[3]});
    json out;
    out["lambda"] = sol.lambda;
    out["a"] = sol.a;
    out["b"] = sol.b;
    out["roots_found"] = sol.roots_found;
    out["det_at_root"] = sol.det_at_root;
    std::cout << out.dump(2) << "\n";
    return 0;
  } catch (const reconn::NoRootInUnitInterval& e) {
    json out;
    out["error"] = e.what();
    std::cout << out.dump(2) << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"regularity-conforming networks for elliptic transmission problems"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  std::size_t iterations = 0;
  std::string outdir;
  auto* run = app.add_subcommand("run", "train an experiment from a JSON config");
  run->add_option("config", config_path, "config JSON path")->required();
  auto* seed_opt = run->add_option("--seed", seed, "override the seed");
  auto* iter_opt = run->add_option("--iterations", iterations, "override iterations");
  auto* out_opt = run->add_option("--output-dir", outdir, "override output dir");

  std::string suite;
  auto* verify = app.add_subcommand("verify", "run an invariant suite");
  verify->add_option("suite", suite, "autodiff|geometry|exact-solutions|eigen")
      ->required();

  std::vector<double> sigma;
  auto* solve = app.add_subcommand("singular-solve",
                                   "singular exponent and angular coefficients");
  solve->add_option("--sigma", sigma, "four quadrant conductivities")
      ->required()
      ->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  if (run->parsed())
    return cmd_run(config_path, seed_opt->count() ? &seed : nullptr,
                   iter_opt->count() ? &iterations : nullptr,
                   out_opt->count() ? &outdir : nullptr);
  if (verify->parsed()) return cmd_verify(suite);
  if (solve->parsed()) return cmd_singular_solve(sigma);
  return 1;
}
