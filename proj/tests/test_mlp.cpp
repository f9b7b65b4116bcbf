#include <doctest.h>

#include "test_support.hpp"

using namespace reconn;
using ad::SpatialJet;
using ad::Tape;

TEST_SUITE_BEGIN("network");

TEST_CASE("parameter counts match the closed form") {
  CHECK(Mlp::param_count_for(std::vector<int>{1, 20, 20, 20, 1}) == 901);
  CHECK(Mlp::param_count_for(std::vector<int>{1, 20, 20, 20, 2}) == 922);
  CHECK(Mlp::param_count_for(std::vector<int>{2, 36, 36, 36, 1}) == 2809);
  CHECK(Mlp::param_count_for(std::vector<int>{2, 30, 30, 30, 2}) == 2012);
  CHECK(Mlp::param_count_for(std::vector<int>{2, 15, 15, 15, 1}) == 541);
  CHECK(Mlp::param_count_for(std::vector<int>{2, 35, 35, 35, 1}) == 2661);
}

TEST_CASE("invalid shapes are rejected") {
  CHECK_THROWS_AS(Mlp({5}, Activation::Tanh, 0), InvalidShape);
  CHECK_THROWS_AS(Mlp({2, 0, 1}, Activation::Tanh, 0), InvalidShape);
}

TEST_CASE("zero parameters give identically zero output") {
  Mlp net({1, 4, 4, 1}, Activation::Tanh, 0);
  std::vector<double> params(net.param_count(), 0.0);
  Tape tape(params.size());
  tape.set_params(params.data());
  const SpatialJet in = ad::jet_input(0.37);
  SpatialJet out;
  net.forward(tape, {&in, 1}, {&out, 1});
  CHECK(out.value() == 0.0);
  CHECK(out.grad_x() == 0.0);
  CHECK(out.uxx().value == 0.0);
}

TEST_CASE("single affine layer") {
  Mlp net({1, 1}, Activation::Tanh, 0);  // last layer is identity
  std::vector<double> params{2.0, 1.0};  // A=2, b=1
  Tape tape(2);
  tape.set_params(params.data());
  const SpatialJet in = ad::jet_input(3.0);
  SpatialJet out;
  net.forward(tape, {&in, 1}, {&out, 1});
  CHECK(out.value() == 7.0);
  CHECK(out.grad_x() == 2.0);
  CHECK(out.uxx().value == 0.0);
}

TEST_CASE("glorot init is deterministic in the seed") {
  Mlp net({2, 8, 1}, Activation::Tanh, 0);
  std::vector<double> a(net.param_count()), b(net.param_count());
  Rng r1(77), r2(77);
  net.init_glorot(a, r1);
  net.init_glorot(b, r2);
  CHECK(a == b);
  // biases zero
  CHECK(a[2 * 8] == 0.0);
  CHECK(a[2 * 8 + 7] == 0.0);
}

TEST_CASE("tanh second derivatives stay finite on a point cloud") {
  ClassicalField field(2, {2, 12, 12, 1}, Activation::Tanh, Rng(3));
  Tape tape(field.param_count());
  tape.set_params(field.params().data());
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const std::array<double, 2> x{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    tape.rewind();
    const SpatialJet j = field.eval(tape, x);
    CHECK(std::isfinite(j.uxx().value));
    CHECK(std::isfinite(j.uyy().value));
  }
}

TEST_CASE("relu networks are piecewise linear") {
  ClassicalField field(2, {2, 12, 12, 1}, Activation::Relu, Rng(4));
  Tape tape(field.param_count());
  tape.set_params(field.params().data());
  Rng rng(6);
  for (int i = 0; i < 200; ++i) {
    const std::array<double, 2> x{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    tape.rewind();
    const SpatialJet j = field.eval(tape, x);
    CHECK(j.uxx().value == 0.0);
    CHECK(j.uyy().value == 0.0);
    CHECK(j.uxy().value == 0.0);
  }
}

TEST_CASE("random tanh net matches finite differences") {
  ClassicalField field(2, {2, 10, 10, 1}, Activation::Tanh, Rng(12));
  const std::array<double, 2> x{0.31, -0.44};
  const FdReport rep = fd_check(field, x, 1e-4);
  CHECK(rep.precondition_ok);
  CHECK(rep.max_rel() < 1e-5);
}

TEST_SUITE_END();
