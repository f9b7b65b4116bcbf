#pragma once

#include <functional>
#include <memory>
#include <string>

#include "reconn/fields.hpp"
#include "reconn/parallel.hpp"
#include "reconn/problems.hpp"

namespace reconn {

struct LossWeights {
  std::vector<double> alpha;
};

struct Batch {
  struct InterfacePoint {
    std::array<double, 2> x;
    int level_set;
  };
  std::vector<std::array<double, 2>> interior;
  std::vector<InterfacePoint> interface_pts;
  std::vector<std::array<double, 2>> boundary;
};

// Fresh uniform batch; interface points split equally over the interfaces.
Batch sample_batch(const Problem& problem, std::size_t n_interior,
                   std::size_t n_interface, std::size_t n_boundary, Rng& rng);

struct LossComponents {
  std::vector<std::string> names;
  std::vector<double> raw;     // mean squared residuals, pre-sqrt
  std::vector<double> rooted;  // sqrt(raw + guard)
  double total = 0.0;
};

// One additive loss component: `count` squared point terms whose mean is
// square-rooted and weighted by alpha. order is the spatial derivative depth
// the terms need.
struct ComponentSpec {
  std::string name;
  int order = 2;
  std::size_t count = 0;
  double alpha = 1.0;
  std::function<ad::TapeScalar(ad::Tape&, std::size_t)> term;
};

class Loss {
 public:
  virtual ~Loss() = default;
  virtual const char* name() const = 0;
  virtual std::vector<std::string> component_names() const = 0;
  virtual std::vector<ComponentSpec> build(const Field& field,
                                           const Problem& problem,
                                           const Batch& batch,
                                           const LossWeights& weights) const = 0;
};

// sqrt of the mean of |u-u*|^2 + |grad u - grad u*|^2.
class H1FitLoss : public Loss {
 public:
  const char* name() const override { return "h1"; }
  std::vector<std::string> component_names() const override { return {"h1"}; }
  std::vector<ComponentSpec> build(const Field&, const Problem&, const Batch&,
                                   const LossWeights&) const override;
};

// Strong residual + flux jump at pi/2 + endpoint values.
class Pinns1dLoss : public Loss {
 public:
  const char* name() const override { return "pinns-1d"; }
  std::vector<std::string> component_names() const override {
    return {"pde", "int", "bc"};
  }
  std::vector<ComponentSpec> build(const Field&, const Problem&, const Batch&,
                                   const LossWeights&) const override;
};

// Strong residual + interface flux jump + boundary values.
class PinnsInterfaceLoss : public Loss {
 public:
  const char* name() const override { return "pinns-interface"; }
  std::vector<std::string> component_names() const override {
    return {"pde", "int", "bc"};
  }
  std::vector<ComponentSpec> build(const Field&, const Problem&, const Batch&,
                                   const LossWeights&) const override;
};

// Weighted residual + boundary values + angular Dirichlet anchors; the
// anchor component is dropped for fields without singular units.
class PinnsLshapeLoss : public Loss {
 public:
  const char* name() const override { return "pinns-lshape"; }
  std::vector<std::string> component_names() const override {
    return {"pde", "bc", "bcphi"};
  }
  std::vector<ComponentSpec> build(const Field&, const Problem&, const Batch&,
                                   const LossWeights&) const override;
};

// Weighted residual + weighted flux jump + boundary values + angular flux
// continuity at the four interface angles.
class PinnsMaterialLoss : public Loss {
 public:
  const char* name() const override { return "pinns-material"; }
  std::vector<std::string> component_names() const override {
    return {"pde", "int", "bc", "bcphi"};
  }
  std::vector<ComponentSpec> build(const Field&, const Problem&, const Batch&,
                                   const LossWeights&) const override;
};

std::unique_ptr<Loss> make_loss(const std::string& id);

// Runs the component terms over per-point tapes, reduces values and
// parameter gradients per fixed-size chunk and combines chunks in index
// order, so results are bit-identical for any worker count.
class LossEvaluator {
 public:
  LossEvaluator(std::size_t n_params, int n_threads);

  LossComponents evaluate(const Field& field,
                          std::span<const ComponentSpec> specs,
                          std::vector<double>* grad);

  ThreadPool& pool() { return pool_; }

  static constexpr std::size_t kChunk = 64;
  static constexpr double kSqrtGuard = 1e-30;

 private:
  std::size_t n_params_;
  ThreadPool pool_;
  std::vector<std::unique_ptr<ad::Tape>> tapes_;
  std::vector<double> chunk_value_;
  std::vector<std::vector<double>> chunk_grad_;
  std::vector<double> component_grad_;
};

}  // namespace reconn
