#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "reconn/checkpoint.hpp"
#include "reconn/experiment.hpp"

using namespace reconn;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("experiment defaults pin the training protocols") {
  const auto c1 = ExperimentConfig::defaults_for("1d-pinns");
  CHECK(c1.iterations == 5000);
  CHECK(c1.n_interior == 2500);
  CHECK(c1.weights == std::vector<double>{1.0, 1.0, 1.0});
  CHECK(c1.main_sizes == std::vector<int>{1, 20, 20, 20, 2});

  const auto c2 = ExperimentConfig::defaults_for("interface-2d");
  CHECK(c2.iterations == 50000);
  CHECK(c2.n_interior == 1000);
  CHECK(c2.n_interface == 1000);
  CHECK(c2.n_boundary == 1000);
  REQUIRE(c2.weights.size() == 3);
  CHECK(c2.weights[0] == 1.0);
  CHECK(c2.weights[1] == doctest::Approx(std::sqrt(10.0)));
  CHECK(c2.weights[2] == 10.0);

  const auto c3 = ExperimentConfig::defaults_for("lshape-reconn");
  CHECK(c3.weights == std::vector<double>{1.0, 10.0, 1.0});
  CHECK(c3.main_sizes == std::vector<int>{2, 30, 30, 30, 2});
  CHECK(c3.angular_sizes == std::vector<int>{2, 15, 15, 15, 1});

  const auto c4 = ExperimentConfig::defaults_for("material-pinns");
  REQUIRE(c4.weights.size() == 4);
  CHECK(c4.weights[3] == 1.0);
  CHECK(c4.main_sizes == std::vector<int>{2, 30, 30, 30, 6});

  const auto c5 = ExperimentConfig::defaults_for("material-h1-classical");
  CHECK(c5.main_sizes == std::vector<int>{2, 36, 36, 36, 1});
  CHECK(c5.n_interior == 2500);

  CHECK_THROWS_AS(ExperimentConfig::defaults_for("nope"), std::invalid_argument);
}

TEST_CASE("config json round trip and overrides") {
  const nlohmann::json j = {{"experiment", "interface-2d"},
                            {"seed", 7},
                            {"iterations", 12},
                            {"batch", {{"interior", 13}, {"boundary", 9}}},
                            {"cutoff", {{"delta1", 0.4}, {"delta2", 0.8}}},
                            {"output_dir", "out/test-run"}};
  const auto cfg = ExperimentConfig::from_json(j);
  CHECK(cfg.seed == 7);
  CHECK(cfg.iterations == 12);
  CHECK(cfg.n_interior == 13);
  CHECK(cfg.n_interface == 1000);  // default preserved
  CHECK(cfg.n_boundary == 9);
  CHECK(cfg.delta1 == 0.4);
  const auto back = cfg.to_json();
  CHECK(back["experiment"] == "interface-2d");
  CHECK(back["batch"]["interior"] == 13);
}

TEST_CASE("all ten experiment ids construct and take one step") {
  for (const auto& id : ExperimentConfig::known_experiments()) {
    ExperimentConfig cfg = ExperimentConfig::defaults_for(id);
    cfg.iterations = 1;
    cfg.n_interior = 16;
    cfg.n_interface = cfg.n_interface > 0 ? 8 : 0;
    cfg.n_boundary = cfg.n_boundary > 0 ? 8 : 0;
    cfg.grid_nx = 16;
    cfg.grid_n1d = 64;
    cfg.threads = 1;
    cfg.output_dir = "out/smoke/" + id;
    const RunResult res = run_experiment(cfg);
    CHECK(std::isfinite(res.final_loss.total));
  }
}

TEST_CASE("smoke run writes every artifact") {
  ExperimentConfig cfg = ExperimentConfig::defaults_for("lshape-reconn");
  cfg.iterations = 10;
  cfg.n_interior = 16;
  cfg.n_boundary = 8;
  cfg.grid_nx = 8;
  cfg.threads = 1;
  cfg.output_dir = "out/smoke-artifacts";
  run_experiment(cfg);
  const fs::path dir = cfg.output_dir;
  for (const char* f : {"loss_history.csv", "metrics.json", "checkpoint.json",
                        "checkpoint.bin", "solution_grid.csv",
                        "solution_grid_mid.csv", "singular_report.csv"}) {
    CHECK_MESSAGE(fs::exists(dir / f), f);
  }
  const auto metrics = nlohmann::json::parse(slurp(dir / "metrics.json"));
  CHECK(metrics["experiment"] == "lshape-reconn");
  CHECK(metrics.contains("lambda"));
  // history has header + one line per iteration
  std::istringstream hist(slurp(dir / "loss_history.csv"));
  std::string line;
  int lines = 0;
  while (std::getline(hist, line))
    if (!line.empty()) ++lines;
  CHECK(lines == 11);
}

TEST_CASE("checkpoints round-trip the parameters") {
  ExperimentConfig cfg = ExperimentConfig::defaults_for("interface-2d");
  auto field = field_for_experiment(cfg);
  fs::create_directories("out/ckpt");
  save_checkpoint(*field, "out/ckpt/test");
  auto clone = field_for_experiment(cfg);
  std::fill(clone->params().begin(), clone->params().end(), 0.0);
  load_checkpoint(*clone, "out/ckpt/test");
  CHECK(clone->params() == field->params());

  ExperimentConfig other = ExperimentConfig::defaults_for("lshape-reconn");
  auto wrong = field_for_experiment(other);
  CHECK_THROWS(load_checkpoint(*wrong, "out/ckpt/test"));
}

TEST_CASE("identical configs give byte-identical histories") {
  ExperimentConfig cfg = ExperimentConfig::defaults_for("1d-pinns");
  cfg.iterations = 25;
  cfg.n_interior = 64;
  cfg.grid_n1d = 128;
  cfg.threads = 2;
  cfg.output_dir = "out/det-a";
  run_experiment(cfg);
  cfg.output_dir = "out/det-b";
  run_experiment(cfg);
  CHECK(slurp("out/det-a/loss_history.csv") == slurp("out/det-b/loss_history.csv"));
}

TEST_SUITE_END();
