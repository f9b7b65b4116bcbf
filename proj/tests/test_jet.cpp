#include <doctest.h>

#include "test_support.hpp"

using namespace reconn;
using ad::SpatialJet;
using ad::Tape;
using ad::TapeScalar;

TEST_SUITE_BEGIN("jet");

TEST_CASE("coordinate jets") {
  const auto in = ad::jet_input(2.0, 3.0);
  CHECK(in[0].value() == 2.0);
  CHECK(in[0].grad_x() == 1.0);
  CHECK(in[0].grad_y() == 0.0);
  CHECK(in[0].uxx().value == 0.0);
  CHECK(in[0].uxy().value == 0.0);
  CHECK(in[1].value() == 3.0);
  CHECK(in[1].grad_y() == 1.0);

  const SpatialJet x1d = ad::jet_input(M_PI);
  CHECK(x1d.value() == doctest::Approx(M_PI));
  CHECK(x1d.grad_x() == 1.0);
  CHECK(x1d.uxx().value == 0.0);

  const auto origin = ad::jet_input(0.0, 0.0);
  CHECK(origin[0].value() == 0.0);
  CHECK(origin[0].grad_x() == 1.0);
  CHECK(origin[1].grad_y() == 1.0);
}

TEST_CASE("bilinear product x1*x2 at (2,3)") {
  const auto in = ad::jet_input(2.0, 3.0);
  const SpatialJet p = in[0] * in[1];
  CHECK(p.value() == 6.0);
  CHECK(p.grad_x() == 3.0);
  CHECK(p.grad_y() == 2.0);
  CHECK(p.uxy().value == 1.0);
  CHECK(p.uxx().value == 0.0);
  CHECK(p.uyy().value == 0.0);
}

TEST_CASE("tanh factors at zero input") {
  const SpatialJet x = ad::jet_input(0.0);
  const SpatialJet t = ad::tanh(x);
  CHECK(t.value() == 0.0);
  CHECK(t.grad_x() == 1.0);          // tanh'(0) = 1
  CHECK(t.uxx().value == 0.0);       // tanh''(0) = 0
}

TEST_CASE("pow_param at base 1 has zero exponent gradient") {
  const double lambda = 0.5;
  Tape tape(1);
  tape.set_params(&lambda);
  const SpatialJet r = ad::jet_const(1.0);
  const SpatialJet s = ad::pow_param(r, tape.param(0));
  CHECK(s.value() == 1.0);
  std::vector<double> grad(1, 0.0);
  tape.backward(s.u(), 1.0, grad);
  CHECK(grad[0] == 0.0);  // d(r^lambda)/dlambda = ln(1) * 1
}

TEST_CASE("pow_param guard") {
  const double lambda = 0.5;
  Tape tape(1);
  tape.set_params(&lambda);
  CHECK_THROWS_AS(ad::pow_param(ad::jet_const(1e-13), tape.param(0)),
                  ad::DomainError);
}

TEST_CASE("chain rule matches symbolic differentiation on random expressions") {
  Rng rng(424242);
  int checked = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto expr = testing::random_expr(rng, 5);
    const std::array<double, 2> x{rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2)};
    const testing::Sym sym = testing::sym_eval(*expr, x);
    const SpatialJet jet = testing::jet_eval(*expr, x);
    auto close = [](double a, double b) {
      return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}) < 1e-12;
    };
    CHECK(close(jet.value(), sym.u));
    CHECK(close(jet.grad_x(), sym.d[0]));
    CHECK(close(jet.grad_y(), sym.d[1]));
    CHECK(close(jet.uxx().value, sym.h[0][0]));
    CHECK(close(jet.uxy().value, sym.h[0][1]));
    CHECK(close(jet.uyy().value, sym.h[1][1]));
    ++checked;
  }
  CHECK(checked == 20);
}

TEST_CASE("abs_signed with sign zero collapses the jet") {
  const auto in = ad::jet_input(0.0, 1.0);
  const SpatialJet a = ad::abs_signed(in[0], 0.0);
  CHECK(a.value() == 0.0);
  CHECK(a.grad_x() == 0.0);
}

TEST_CASE("atan2 jets match the symbolic oracle") {
  // branch-based composition exercised at points in all four quadrants
  Rng rng(99);
  for (int trial = 0; trial < 24; ++trial) {
    const double x = rng.uniform(-2.0, 2.0);
    const double y = rng.uniform(-2.0, 2.0);
    if (std::hypot(x, y) < 0.3) continue;
    const auto in = ad::jet_input(x, y);
    const SpatialJet th = ad::atan2(in[1], in[0]);
    // exact derivatives of atan2: grad = (-y, x)/r^2
    const double r2 = x * x + y * y;
    CHECK(th.value() == doctest::Approx(std::atan2(y, x)).epsilon(1e-14));
    CHECK(th.grad_x() == doctest::Approx(-y / r2).epsilon(1e-12));
    CHECK(th.grad_y() == doctest::Approx(x / r2).epsilon(1e-12));
    CHECK(th.uxx().value == doctest::Approx(2 * x * y / (r2 * r2)).epsilon(1e-11));
    CHECK(th.uyy().value == doctest::Approx(-2 * x * y / (r2 * r2)).epsilon(1e-11));
    const double hxy = (y * y - x * x) / (r2 * r2);
    CHECK(th.uxy().value == doctest::Approx(hxy).epsilon(1e-11));
  }
}

TEST_CASE("derivative order gating poisons untracked slots") {
  const double p = 0.4;
  Tape tape(1);
  tape.set_params(&p);
  tape.set_derivative_order(1);
  const SpatialJet x = ad::jet_input(0.7);
  const SpatialJet f = ad::tanh(x * ad::jet_from_scalar(tape.param(0)));
  CHECK(std::isfinite(f.grad_x()));
  CHECK(std::isnan(f.uxx().value));
  tape.set_derivative_order(0);
  tape.rewind();
  const SpatialJet g = ad::tanh(x * ad::jet_from_scalar(tape.param(0)));
  CHECK(std::isfinite(g.value()));
  CHECK(std::isnan(g.grad_x()));
}

TEST_SUITE_END();
