#include <doctest.h>

#include "reconn/optimizer.hpp"

using namespace reconn;

TEST_SUITE_BEGIN("optimizer");

TEST_CASE("learning-rate schedule endpoints and midpoint") {
  const LrSchedule s{10000, 1e-3, 1e-6};
  CHECK(s.at(0) == 1e-3);
  CHECK(s.at(5000) == 1e-3);  // exactly at the plateau end
  CHECK(s.at(10000) == doctest::Approx(1e-6).epsilon(1e-12));
  CHECK(s.at(7500) == doctest::Approx(std::sqrt(1e-3 * 1e-6)).epsilon(1e-12));
}

TEST_CASE("schedule is constant then strictly decreasing") {
  const LrSchedule s{1000, 1e-3, 1e-6};
  double prev = s.at(0);
  for (std::size_t i = 1; i <= 1000; ++i) {
    const double lr = s.at(i);
    CHECK(lr <= prev + 1e-18);
    if (i > 501) CHECK(lr < prev);
    prev = lr;
  }
}

TEST_CASE("zero gradient leaves parameters unchanged") {
  Adam adam(3);
  std::vector<double> params{1.0, -2.0, 0.5};
  const std::vector<double> grad{0.0, 0.0, 0.0};
  const auto before = params;
  adam.step(params, grad, 1e-3);
  CHECK(params == before);
}

TEST_CASE("first step moves by roughly lr in the gradient direction") {
  Adam adam(1);
  std::vector<double> params{2.0};
  const std::vector<double> grad{0.37};
  adam.step(params, grad, 1e-3);
  // bias correction makes mhat/sqrt(vhat) = sign(g) up to eps
  CHECK(params[0] == doctest::Approx(2.0 - 1e-3).epsilon(1e-6));
}

TEST_CASE("shape mismatch throws") {
  Adam adam(2);
  std::vector<double> params{1.0, 2.0};
  const std::vector<double> grad{0.1};
  CHECK_THROWS_AS(adam.step(params, grad, 1e-3), ShapeMismatch);
}

TEST_CASE("two identical runs are bit-identical") {
  auto run = [] {
    Adam adam(4);
    std::vector<double> params{0.1, 0.2, 0.3, 0.4};
    for (int i = 0; i < 50; ++i) {
      std::vector<double> grad{0.01 * i, -0.02, 0.5 / (i + 1), 0.0};
      adam.step(params, grad, 1e-3 / (1 + i));
    }
    return params;
  };
  CHECK(run() == run());
}

TEST_SUITE_END();
