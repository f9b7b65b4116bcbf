#include <doctest.h>

#include "test_support.hpp"

using namespace reconn;
using ad::Tape;
using ad::TapeScalar;

TEST_SUITE_BEGIN("tape");

TEST_CASE("gradient of theta^2 at theta=3 is 6") {
  const double theta = 3.0;
  Tape tape(1);
  tape.set_params(&theta);
  const TapeScalar loss = ad::square(tape.param(0));
  std::vector<double> grad(1, 0.0);
  tape.backward(loss, 1.0, grad);
  CHECK(grad[0] == doctest::Approx(6.0).epsilon(1e-14));
}

TEST_CASE("gradient is zero for unused parameters") {
  const double params[2] = {1.5, -2.0};
  Tape tape(2);
  tape.set_params(params);
  const TapeScalar loss = ad::sin(tape.param(0)) * tape.param(0);
  std::vector<double> grad(2, 0.0);
  tape.backward(loss, 1.0, grad);
  CHECK(grad[1] == 0.0);
  CHECK(grad[0] != 0.0);
}

TEST_CASE("constants fold without recording nodes") {
  Tape tape(1);
  const double p = 0.7;
  tape.set_params(&p);
  const std::size_t before = tape.node_count();
  const TapeScalar c = TapeScalar(2.0) * TapeScalar(3.0) + ad::sin(TapeScalar(1.0));
  CHECK(c.is_const());
  CHECK(tape.node_count() == before);
  // multiplying by constant zero erases the dependency
  const TapeScalar z = tape.param(0) * TapeScalar(0.0);
  CHECK(z.is_const());
  CHECK(z.value == 0.0);
}

TEST_CASE("backward matches the symbolic oracle on random expressions") {
  Rng rng(2027);
  for (int trial = 0; trial < 40; ++trial) {
    const auto expr = testing::random_expr(rng, 4);
    const std::array<double, 2> x{rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
    const testing::Sym sym = testing::sym_eval(*expr, x);

    Tape tape(2);
    tape.set_params(x.data());
    const TapeScalar v = testing::tape_eval(*expr, tape);
    CHECK(v.value == doctest::Approx(sym.u).epsilon(1e-12));
    std::vector<double> grad(2, 0.0);
    tape.backward(v, 1.0, grad);
    for (int i = 0; i < 2; ++i) {
      const double scale = std::max(1.0, std::abs(sym.d[i]));
      CHECK(std::abs(grad[i] - sym.d[i]) / scale < 1e-12);
    }
  }
}

TEST_CASE("backward seeds accumulate") {
  const double p = 2.0;
  Tape tape(1);
  tape.set_params(&p);
  const TapeScalar v = ad::square(tape.param(0));
  std::vector<double> grad(1, 0.0);
  tape.backward(v, 1.0, grad);
  tape.backward(v, 0.5, grad);
  CHECK(grad[0] == doctest::Approx(6.0).epsilon(1e-14));
}

TEST_CASE("identical construction gives bit-identical gradients") {
  auto run = [] {
    const double params[3] = {0.3, -1.2, 0.9};
    Tape tape(3);
    tape.set_params(params);
    TapeScalar acc(0.0);
    for (int i = 0; i < 3; ++i)
      acc = acc + ad::tanh(tape.param(i)) * ad::exp(tape.param((i + 1) % 3) * 0.1);
    std::vector<double> grad(3, 0.0);
    tape.backward(acc, 1.0, grad);
    return grad;
  };
  CHECK(run() == run());
}

TEST_CASE("affine_row matches a manual dot product") {
  std::vector<double> params{0.5, -1.5, 2.0, 0.25};  // w0 w1 w2 b
  Tape tape(4);
  tape.set_params(params.data());
  const std::array<TapeScalar, 3> x{TapeScalar(1.0), TapeScalar(-2.0),
                                    TapeScalar(3.0)};
  const TapeScalar v = tape.affine_row(
      0, 3, [&](std::size_t i) -> const TapeScalar& { return x[i]; }, 3);
  CHECK(v.value == doctest::Approx(0.5 - 1.5 * -2.0 + 6.0 + 0.25));
  std::vector<double> grad(4, 0.0);
  tape.backward(v, 1.0, grad);
  CHECK(grad[0] == 1.0);
  CHECK(grad[1] == -2.0);
  CHECK(grad[2] == 3.0);
  CHECK(grad[3] == 1.0);
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(ad::log(TapeScalar(-1.0)), ad::DomainError);
  CHECK_THROWS_AS(ad::sqrt(TapeScalar(-1.0)), ad::DomainError);
  CHECK_THROWS_AS(TapeScalar(1.0) / TapeScalar(0.0), ad::DomainError);
  CHECK_THROWS_AS(ad::pow_const(TapeScalar(0.0), 0.5), ad::DomainError);
}

TEST_CASE("rewind keeps parameter leaves only") {
  const double p = 1.0;
  Tape tape(1);
  tape.set_params(&p);
  ad::tanh(tape.param(0));
  CHECK(tape.node_count() > 1);
  tape.rewind();
  CHECK(tape.node_count() == 1);
  CHECK(tape.edge_count() == 0);
}

TEST_SUITE_END();
