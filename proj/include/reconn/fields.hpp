#pragma once

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "reconn/geometry.hpp"
#include "reconn/mlp.hpp"

namespace reconn {

struct OnInterface : ad::DomainError {
  using ad::DomainError::DomainError;
};
struct NotOnInterface : ad::DomainError {
  using ad::DomainError::DomainError;
};
struct AtCenter : ad::DomainError {
  using ad::DomainError::DomainError;
};
struct NoSingularUnit : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Forced resolution of one |phi_p| sign for one-sided interface limits.
struct EvalSide {
  int level_set = -1;
  double sign = 0.0;
};

// One singular term eta(r) * r^lambda * phi(xhat) anchored at a vertex.
// With angular_level_sets non-empty the angular net itself carries the
// interface structure (material vertices), with `modes` trained exponents.
struct SingularUnit {
  std::array<double, 2> center{0.0, 0.0};
  Mlp angular;
  std::vector<LevelSet> angular_level_sets;
  std::vector<std::size_t> lambda_params;  // one per mode
  int modes = 1;
  Cutoff cutoff;
};

// A composed scalar field u_NN. Parameters live in one flat vector; every
// evaluation happens on a caller-provided tape whose leaves mirror params().
class Field {
 public:
  virtual ~Field() = default;

  int dim() const { return dim_; }
  std::size_t param_count() const { return params_.size(); }
  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }

  ad::SpatialJet eval(ad::Tape& tape, std::span<const double> x) const {
    return eval_impl(tape, x, nullptr);
  }
  ad::SpatialJet eval_one_sided(ad::Tape& tape, std::span<const double> x,
                                int level_set, double side) const {
    EvalSide s{level_set, side};
    return eval_impl(tape, x, &s);
  }
  // (plus, minus) limits across level set p; overridden where the network
  // forward can be shared between the two sides.
  virtual std::pair<ad::SpatialJet, ad::SpatialJet> eval_both_sides(
      ad::Tape& tape, std::span<const double> x, int level_set) const {
    return {eval_one_sided(tape, x, level_set, 1.0),
            eval_one_sided(tape, x, level_set, -1.0)};
  }

  virtual const char* kind() const = 0;
  virtual std::span<const LevelSet> level_sets() const { return {}; }
  virtual std::span<const SingularUnit> singular_units() const { return {}; }
  std::vector<double> lambda_values() const;

 protected:
  explicit Field(int dim) : dim_(dim) {}
  virtual ad::SpatialJet eval_impl(ad::Tape& tape, std::span<const double> x,
                                   const EvalSide* side) const = 0;

  int dim_;
  std::vector<double> params_;
};

// Plain fully-connected network, Fig.-1 style.
class ClassicalField : public Field {
 public:
  ClassicalField(int dim, std::vector<int> sizes, Activation act, Rng rng);
  const char* kind() const override { return "classical"; }
  const Mlp& net() const { return net_; }

 protected:
  ad::SpatialJet eval_impl(ad::Tape&, std::span<const double>,
                           const EvalSide*) const override;

 private:
  Mlp net_;
};

// u = u0 + sum_p up * |phi_p|: continuous, with the normal-gradient jump
// across Gamma_p equal to 2|grad phi_p| up by construction.
class InterfaceField : public Field {
 public:
  InterfaceField(int dim, std::vector<int> sizes, std::vector<LevelSet> ls,
                 Activation act, Rng rng);
  const char* kind() const override { return "interface"; }
  std::span<const LevelSet> level_sets() const override { return ls_; }
  const Mlp& net() const { return net_; }

  std::pair<ad::SpatialJet, ad::SpatialJet> eval_both_sides(
      ad::Tape&, std::span<const double>, int) const override;

 protected:
  ad::SpatialJet eval_impl(ad::Tape&, std::span<const double>,
                           const EvalSide*) const override;

 private:
  Mlp net_;
  std::vector<LevelSet> ls_;
};

// u = w0 + sum_i eta_i w_i + sum_i s_i: the compensated corner architecture.
class CornerField : public Field {
 public:
  CornerField(std::vector<int> w_sizes, std::vector<int> angular_sizes,
              std::vector<std::array<double, 2>> centers, Cutoff cutoff,
              Activation act, Rng rng);
  const char* kind() const override { return "corner"; }
  std::span<const SingularUnit> singular_units() const override { return units_; }
  const Mlp& net() const { return w_; }
  const Cutoff& cutoff() const { return cutoff_; }

  // Angular net value/derivatives at a point of the unit circle.
  ad::SpatialJet angular_eval(ad::Tape&, int unit, int mode,
                              std::span<const double> xhat) const;

 protected:
  ad::SpatialJet eval_impl(ad::Tape&, std::span<const double>,
                           const EvalSide*) const override;

 private:
  Mlp w_;
  std::vector<SingularUnit> units_;
  Cutoff cutoff_;
};

// Material-vertex architecture: interface-aware smooth part wrapped around
// interface-aware singular units.
class MaterialVertexField : public Field {
 public:
  MaterialVertexField(std::vector<int> w_sizes, std::vector<int> angular_sizes,
                      std::vector<LevelSet> ls, std::array<double, 2> center,
                      int modes, Cutoff cutoff, Activation act, Rng rng);
  const char* kind() const override { return "material-vertex"; }
  std::span<const LevelSet> level_sets() const override { return ls_; }
  std::span<const SingularUnit> singular_units() const override { return {&unit_, 1}; }
  const Mlp& net() const { return w_; }
  const Cutoff& cutoff() const { return cutoff_; }

  std::pair<ad::SpatialJet, ad::SpatialJet> eval_both_sides(
      ad::Tape&, std::span<const double>, int) const override;

  // Angular net (interface architecture in xhat) with optional forced sign.
  ad::SpatialJet angular_eval(ad::Tape&, int mode, std::span<const double> xhat,
                              const EvalSide* side = nullptr) const;

 protected:
  ad::SpatialJet eval_impl(ad::Tape&, std::span<const double>,
                           const EvalSide*) const override;

 private:
  ad::SpatialJet assemble(std::span<const double> x,
                          std::span<const ad::SpatialJet> wout,
                          std::span<const ad::SpatialJet> angular_out,
                          const ad::SpatialJet& eta,
                          std::span<const ad::SpatialJet> powr,
                          std::span<const double> signs) const;

  Mlp w_;
  SingularUnit unit_;
  std::vector<LevelSet> ls_;
  Cutoff cutoff_;
};

// sigma_plus*(grad u . nu)_plus - sigma_minus*(grad u . nu)_minus across
// level set p, with nu oriented toward {phi_p > 0}.
ad::TapeScalar jump_normal(const Field& field, ad::Tape& tape,
                           std::span<const double> x, int level_set,
                           double sigma_plus, double sigma_minus);

struct FdReport {
  bool precondition_ok = true;
  double max_rel_grad = 0.0;
  double max_rel_laplacian = 0.0;
  double max_rel_param_grad = 0.0;
  double max_rel() const;
};

// Central-finite-difference cross-check of the AD jets: spatial gradient and
// Laplacian of u, and the parameter gradient of the Laplacian.
FdReport fd_check(const Field& field, std::span<const double> x, double step);

struct SingularReportRow {
  double theta, phi, flux;
};
struct SingularReport {
  std::vector<double> lambdas;
  std::vector<SingularReportRow> rows;  // first unit, first mode
};

// Angular trace and flux trace sigma(theta)*d(phi)/d(theta) on a uniform
// theta grid offset from the interface angles.
SingularReport singular_report(const Field& field,
                               const std::function<double(double)>& sigma_of_theta,
                               int n_theta);

}  // namespace reconn
