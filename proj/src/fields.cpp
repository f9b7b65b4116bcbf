#include "reconn/fields.hpp"

#include <cmath>
#include <functional>

namespace reconn {

using ad::SpatialJet;
using ad::Tape;
using ad::TapeScalar;

namespace {

constexpr double kOnInterfaceTol = 1e-14;
constexpr double kInterfaceMatchTol = 1e-9;

std::vector<SpatialJet> coord_jets(std::span<const double> x, int dim) {
  std::vector<SpatialJet> in(dim);
  for (int i = 0; i < dim; ++i) in[i] = ad::jet_coord(x[i], i);
  return in;
}

double resolve_sign(const LevelSet& ls, std::span<const double> x, int p,
                    const EvalSide* side) {
  if (side && side->level_set == p) return side->sign;
  const double v = ls.value(x);
  if (std::abs(v) < kOnInterfaceTol)
    throw OnInterface("evaluation point lies on an interface");
  return ad::sign_of(v);
}

// eta * r^lambda_j * phi_j summed over modes; zero exactly outside delta2.
SpatialJet singular_sum(Tape& tape, const SingularUnit& unit,
                        const SpatialJet& eta, const PolarJets& polar,
                        std::span<const SpatialJet> phis) {
  SpatialJet s = ad::jet_const(0.0);
  for (int j = 0; j < unit.modes; ++j) {
    const TapeScalar lambda = tape.param(unit.lambda_params[j]);
    s = s + eta * ad::pow_param(polar.r, lambda) * phis[j];
  }
  return s;
}

double rel_dev(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

std::vector<double> Field::lambda_values() const {
  std::vector<double> out;
  for (const auto& unit : singular_units())
    for (std::size_t idx : unit.lambda_params) out.push_back(params_[idx]);
  return out;
}

// --- classical --------------------------------------------------------------

ClassicalField::ClassicalField(int dim, std::vector<int> sizes, Activation act,
                               Rng rng)
    : Field(dim), net_(std::move(sizes), act, 0) {
  if (net_.in_arity() != dim) throw InvalidShape("input arity != dim");
  if (net_.out_arity() != 1) throw InvalidShape("classical field needs 1 output");
  params_.resize(net_.param_count());
  net_.init_glorot(params_, rng);
}

SpatialJet ClassicalField::eval_impl(Tape& tape, std::span<const double> x,
                                     const EvalSide*) const {
  const auto in = coord_jets(x, dim_);
  SpatialJet out;
  net_.forward(tape, in, {&out, 1});
  return out;
}

// --- interface ----------------------------------------------------------------

InterfaceField::InterfaceField(int dim, std::vector<int> sizes,
                               std::vector<LevelSet> ls, Activation act, Rng rng)
    : Field(dim), net_(std::move(sizes), act, 0), ls_(std::move(ls)) {
  if (net_.in_arity() != dim) throw InvalidShape("input arity != dim");
  if (net_.out_arity() != static_cast<int>(ls_.size()) + 1)
    throw InvalidShape("interface field needs P+1 outputs");
  params_.resize(net_.param_count());
  net_.init_glorot(params_, rng);
}

SpatialJet InterfaceField::eval_impl(Tape& tape, std::span<const double> x,
                                     const EvalSide* side) const {
  const auto in = coord_jets(x, dim_);
  std::vector<SpatialJet> out(ls_.size() + 1);
  net_.forward(tape, in, out);
  SpatialJet u = out[0];
  for (std::size_t p = 0; p < ls_.size(); ++p) {
    const double s = resolve_sign(ls_[p], x, static_cast<int>(p), side);
    u = u + out[p + 1] * ad::abs_signed(ls_[p].eval_jet(in), s);
  }
  return u;
}

std::pair<SpatialJet, SpatialJet> InterfaceField::eval_both_sides(
    Tape& tape, std::span<const double> x, int level_set) const {
  const auto in = coord_jets(x, dim_);
  std::vector<SpatialJet> out(ls_.size() + 1);
  net_.forward(tape, in, out);
  SpatialJet common = out[0];
  for (std::size_t p = 0; p < ls_.size(); ++p) {
    if (static_cast<int>(p) == level_set) continue;
    const double s = resolve_sign(ls_[p], x, static_cast<int>(p), nullptr);
    common = common + out[p + 1] * ad::abs_signed(ls_[p].eval_jet(in), s);
  }
  const SpatialJet phi = ls_[level_set].eval_jet(in);
  return {common + out[level_set + 1] * ad::abs_signed(phi, 1.0),
          common + out[level_set + 1] * ad::abs_signed(phi, -1.0)};
}

// --- corner -------------------------------------------------------------------

CornerField::CornerField(std::vector<int> w_sizes, std::vector<int> angular_sizes,
                         std::vector<std::array<double, 2>> centers, Cutoff cutoff,
                         Activation act, Rng rng)
    : Field(2), cutoff_(cutoff) {
  const std::size_t k = centers.size();
  if (w_sizes.back() != static_cast<int>(k) + 1)
    throw InvalidShape("corner field needs k+1 outputs in w");
  if (angular_sizes.front() != 2 || angular_sizes.back() != 1)
    throw InvalidShape("corner angular net must map R^2 -> R");
  w_ = Mlp(w_sizes, act, 0);
  std::size_t off = w_.param_count();
  units_.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    SingularUnit unit;
    unit.center = centers[i];
    unit.angular = Mlp(angular_sizes, act, off);
    off += unit.angular.param_count();
    unit.modes = 1;
    unit.cutoff = cutoff;
    units_.push_back(std::move(unit));
  }
  for (auto& unit : units_) unit.lambda_params.push_back(off++);
  params_.resize(off);
  w_.init_glorot(params_, rng);
  for (auto& unit : units_) unit.angular.init_glorot(params_, rng);
  for (const auto& unit : units_)
    for (std::size_t idx : unit.lambda_params) params_[idx] = 0.5;
}

SpatialJet CornerField::eval_impl(Tape& tape, std::span<const double> x,
                                  const EvalSide*) const {
  const auto in = coord_jets(x, 2);
  std::vector<SpatialJet> wout(units_.size() + 1);
  w_.forward(tape, in, wout);
  SpatialJet u = wout[0];
  for (std::size_t i = 0; i < units_.size(); ++i) {
    const auto& unit = units_[i];
    PolarJets polar;
    try {
      polar = polar_jets(x, unit.center);
    } catch (const ad::DomainError&) {
      throw AtCenter("evaluation at a singular center");
    }
    const SpatialJet eta = cutoff_.eval_jet(polar.r);
    u = u + eta * wout[i + 1];
    if (polar.r.value() >= unit.cutoff.delta2) continue;  // s_i vanishes exactly
    SpatialJet phi;
    unit.angular.forward(tape, polar.xhat, {&phi, 1});
    u = u + singular_sum(tape, unit, eta, polar, {&phi, 1});
  }
  return u;
}

SpatialJet CornerField::angular_eval(Tape& tape, int unit, int /*mode*/,
                                     std::span<const double> xhat) const {
  const auto in = coord_jets(xhat, 2);
  SpatialJet phi;
  units_[unit].angular.forward(tape, in, {&phi, 1});
  return phi;
}

// --- material vertex ------------------------------------------------------------

MaterialVertexField::MaterialVertexField(std::vector<int> w_sizes,
                                         std::vector<int> angular_sizes,
                                         std::vector<LevelSet> ls,
                                         std::array<double, 2> center, int modes,
                                         Cutoff cutoff, Activation act, Rng rng)
    : Field(2), ls_(std::move(ls)), cutoff_(cutoff) {
  const int P = static_cast<int>(ls_.size());
  if (w_sizes.back() != 2 * P + 2)
    throw InvalidShape("material field needs 2P+2 outputs in w");
  if (angular_sizes.back() != modes * (P + 1))
    throw InvalidShape("material angular net needs modes*(P+1) outputs");
  w_ = Mlp(w_sizes, act, 0);
  std::size_t off = w_.param_count();
  unit_.center = center;
  unit_.angular = Mlp(angular_sizes, act, off);
  off += unit_.angular.param_count();
  unit_.angular_level_sets = ls_;
  unit_.modes = modes;
  unit_.cutoff = cutoff;
  for (int j = 0; j < modes; ++j) unit_.lambda_params.push_back(off++);
  params_.resize(off);
  w_.init_glorot(params_, rng);
  unit_.angular.init_glorot(params_, rng);
  for (std::size_t idx : unit_.lambda_params) params_[idx] = 0.5;
}

// Combines the forwarded pieces for one choice of interface signs. wout is
// ordered (w_{1,0}..w_{1,P}, w_{2,0}..w_{2,P}); angular_out holds modes*(P+1)
// jets grouped per mode.
SpatialJet MaterialVertexField::assemble(std::span<const double> x,
                                         std::span<const SpatialJet> wout,
                                         std::span<const SpatialJet> angular_out,
                                         const SpatialJet& eta,
                                         std::span<const SpatialJet> powr,
                                         std::span<const double> signs) const {
  const int P = static_cast<int>(ls_.size());
  const auto in = coord_jets(x, 2);
  SpatialJet u = wout[0] + wout[P + 1] * eta;
  std::vector<SpatialJet> abs_phi(P);
  for (int p = 0; p < P; ++p) {
    abs_phi[p] = ad::abs_signed(ls_[p].eval_jet(in), signs[p]);
    u = u + (wout[1 + p] + wout[P + 2 + p] * eta) * abs_phi[p];
  }
  if (angular_out.empty()) return u;  // outside the cutoff support
  // xhat-space level sets share the signs of their x-space counterparts
  PolarJets polar = polar_jets(x, unit_.center);
  for (int j = 0; j < unit_.modes; ++j) {
    SpatialJet phi = angular_out[j * (P + 1)];
    for (int p = 0; p < P; ++p) {
      const SpatialJet aphi = unit_.angular_level_sets[p].eval_jet(polar.xhat);
      phi = phi + angular_out[j * (P + 1) + 1 + p] * ad::abs_signed(aphi, signs[p]);
    }
    u = u + eta * powr[j] * phi;
  }
  return u;
}

SpatialJet MaterialVertexField::eval_impl(Tape& tape, std::span<const double> x,
                                          const EvalSide* side) const {
  const int P = static_cast<int>(ls_.size());
  std::vector<double> signs(P);
  for (int p = 0; p < P; ++p) signs[p] = resolve_sign(ls_[p], x, p, side);

  const auto in = coord_jets(x, 2);
  std::vector<SpatialJet> wout(2 * P + 2);
  w_.forward(tape, in, wout);
  PolarJets polar;
  try {
    polar = polar_jets(x, unit_.center);
  } catch (const ad::DomainError&) {
    throw AtCenter("evaluation at the material vertex");
  }
  const SpatialJet eta = cutoff_.eval_jet(polar.r);

  std::vector<SpatialJet> angular_out;
  std::vector<SpatialJet> powr;
  if (polar.r.value() < unit_.cutoff.delta2) {
    angular_out.resize(unit_.modes * (P + 1));
    unit_.angular.forward(tape, polar.xhat, angular_out);
    for (int j = 0; j < unit_.modes; ++j)
      powr.push_back(ad::pow_param(polar.r, tape.param(unit_.lambda_params[j])));
  }
  return assemble(x, wout, angular_out, eta, powr, signs);
}

std::pair<SpatialJet, SpatialJet> MaterialVertexField::eval_both_sides(
    Tape& tape, std::span<const double> x, int level_set) const {
  const int P = static_cast<int>(ls_.size());
  std::vector<double> signs(P);
  for (int p = 0; p < P; ++p)
    signs[p] = p == level_set ? 1.0 : resolve_sign(ls_[p], x, p, nullptr);

  const auto in = coord_jets(x, 2);
  std::vector<SpatialJet> wout(2 * P + 2);
  w_.forward(tape, in, wout);
  PolarJets polar;
  try {
    polar = polar_jets(x, unit_.center);
  } catch (const ad::DomainError&) {
    throw AtCenter("evaluation at the material vertex");
  }
  const SpatialJet eta = cutoff_.eval_jet(polar.r);
  std::vector<SpatialJet> angular_out;
  std::vector<SpatialJet> powr;
  if (polar.r.value() < unit_.cutoff.delta2) {
    angular_out.resize(unit_.modes * (P + 1));
    unit_.angular.forward(tape, polar.xhat, angular_out);
    for (int j = 0; j < unit_.modes; ++j)
      powr.push_back(ad::pow_param(polar.r, tape.param(unit_.lambda_params[j])));
  }
  SpatialJet plus = assemble(x, wout, angular_out, eta, powr, signs);
  signs[level_set] = -1.0;
  SpatialJet minus = assemble(x, wout, angular_out, eta, powr, signs);
  return {plus, minus};
}

SpatialJet MaterialVertexField::angular_eval(Tape& tape, int mode,
                                             std::span<const double> xhat,
                                             const EvalSide* side) const {
  const int P = static_cast<int>(ls_.size());
  const auto in = coord_jets(xhat, 2);
  std::vector<SpatialJet> aout(unit_.modes * (P + 1));
  unit_.angular.forward(tape, in, aout);
  SpatialJet phi = aout[mode * (P + 1)];
  for (int p = 0; p < P; ++p) {
    const double s = resolve_sign(unit_.angular_level_sets[p], xhat, p, side);
    const SpatialJet aphi = unit_.angular_level_sets[p].eval_jet(in);
    phi = phi + aout[mode * (P + 1) + 1 + p] * ad::abs_signed(aphi, s);
  }
  return phi;
}

// --- jump extraction --------------------------------------------------------

TapeScalar jump_normal(const Field& field, Tape& tape, std::span<const double> x,
                       int level_set, double sigma_plus, double sigma_minus) {
  const auto ls = field.level_sets();
  if (ls.empty()) throw NotOnInterface("field has no interfaces");
  if (std::abs(ls[level_set].value(x)) > kInterfaceMatchTol)
    throw NotOnInterface("point is not on the requested interface");
  const auto nu = ls[level_set].unit_normal(x);
  auto [up, um] = field.eval_both_sides(tape, x, level_set);
  const TapeScalar dp = up.ux() * nu[0] + up.uy() * nu[1];
  const TapeScalar dm = um.ux() * nu[0] + um.uy() * nu[1];
  return TapeScalar(sigma_plus) * dp - TapeScalar(sigma_minus) * dm;
}

// --- finite-difference cross-check ------------------------------------------

double FdReport::max_rel() const {
  return std::max({max_rel_grad, max_rel_laplacian, max_rel_param_grad});
}

FdReport fd_check(const Field& field, std::span<const double> x, double step) {
  FdReport rep;
  for (const auto& ls : field.level_sets()) {
    const double d = std::abs(ls.value(x)) / std::max(ls.grad_norm(x), 1e-30);
    if (d < 10.0 * step) rep.precondition_ok = false;
  }
  for (const auto& unit : field.singular_units()) {
    const double d = std::hypot(x[0] - unit.center[0], x[1] - unit.center[1]);
    if (d < 10.0 * step) rep.precondition_ok = false;
  }
  if (!rep.precondition_ok) return rep;

  const int dim = field.dim();
  Tape tape(field.param_count());
  tape.set_params(field.params().data());
  const SpatialJet jet = field.eval(tape, x);

  Tape probe(field.param_count());
  probe.set_params(field.params().data());
  probe.set_derivative_order(0);
  auto value_at = [&](std::span<const double> p) {
    probe.rewind();
    return field.eval(probe, p).value();
  };

  const double u0 = jet.value();
  double lap_fd = 0.0;
  for (int axis = 0; axis < dim; ++axis) {
    std::array<double, 2> xp{x[0], dim > 1 ? x[1] : 0.0};
    std::array<double, 2> xm = xp;
    xp[axis] += step;
    xm[axis] -= step;
    const double up = value_at({xp.data(), static_cast<std::size_t>(dim)});
    const double um = value_at({xm.data(), static_cast<std::size_t>(dim)});
    const double g_fd = (up - um) / (2.0 * step);
    const double g_ad = jet.c[1 + axis].value;
    rep.max_rel_grad = std::max(rep.max_rel_grad, rel_dev(g_ad, g_fd));
    lap_fd += (up - 2.0 * u0 + um) / (step * step);
  }
  const TapeScalar lap_scalar =
      dim == 1 ? jet.uxx() : jet.uxx() + jet.uyy();
  rep.max_rel_laplacian = std::max(rep.max_rel_laplacian,
                                   rel_dev(lap_scalar.value, lap_fd));

  std::vector<double> grad_ad(field.param_count(), 0.0);
  tape.backward(lap_scalar, 1.0, grad_ad);

  std::vector<double> perturbed(field.params());
  Tape ptape(field.param_count());
  ptape.set_params(perturbed.data());
  auto lap_at = [&]() {
    ptape.rewind();
    const SpatialJet j = field.eval(ptape, x);
    return dim == 1 ? j.uxx().value : j.uxx().value + j.uyy().value;
  };
  for (std::size_t p = 0; p < field.param_count(); ++p) {
    const double orig = perturbed[p];
    perturbed[p] = orig + step;
    const double lp = lap_at();
    perturbed[p] = orig - step;
    const double lm = lap_at();
    perturbed[p] = orig;
    const double g_fd = (lp - lm) / (2.0 * step);
    rep.max_rel_param_grad =
        std::max(rep.max_rel_param_grad, rel_dev(grad_ad[p], g_fd));
  }
  return rep;
}

// --- singular report ----------------------------------------------------------

SingularReport singular_report(const Field& field,
                               const std::function<double(double)>& sigma_of_theta,
                               int n_theta) {
  if (field.singular_units().empty())
    throw NoSingularUnit("field has no singular units");
  SingularReport rep;
  rep.lambdas = field.lambda_values();

  Tape tape(field.param_count());
  tape.set_params(field.params().data());
  tape.set_derivative_order(1);
  const auto* corner = dynamic_cast<const CornerField*>(&field);
  const auto* material = dynamic_cast<const MaterialVertexField*>(&field);
  for (int k = 0; k < n_theta; ++k) {
    const double theta = (k + 0.5) * 2.0 * M_PI / n_theta;
    const std::array<double, 2> xhat{std::cos(theta), std::sin(theta)};
    tape.rewind();
    SpatialJet phi;
    if (corner)
      phi = corner->angular_eval(tape, 0, 0, xhat);
    else if (material)
      phi = material->angular_eval(tape, 0, xhat);
    else
      throw NoSingularUnit("unsupported field kind for singular report");
    const double dtheta = -xhat[1] * phi.grad_x() + xhat[0] * phi.grad_y();
    rep.rows.push_back({theta, phi.value(), sigma_of_theta(theta) * dtheta});
  }
  return rep;
}

}  // namespace reconn
