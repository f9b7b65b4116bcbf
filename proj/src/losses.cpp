#include "reconn/losses.hpp"

#include <cmath>

namespace reconn {

using ad::SpatialJet;
using ad::Tape;
using ad::TapeScalar;

Batch sample_batch(const Problem& problem, std::size_t n_interior,
                   std::size_t n_interface, std::size_t n_boundary, Rng& rng) {
  Batch batch;
  const bool strat = problem.stratified_sampling;
  if (n_interior > 0)
    batch.interior = sample(problem.domain, problem.interfaces,
                            SampleRegion::interior(), n_interior, rng, strat);
  const std::size_t n_ls = problem.interfaces.size();
  if (n_interface > 0 && n_ls > 0) {
    for (std::size_t p = 0; p < n_ls; ++p) {
      const std::size_t m = n_interface / n_ls + (p < n_interface % n_ls ? 1 : 0);
      if (m == 0) continue;
      auto pts = sample(problem.domain, problem.interfaces,
                        SampleRegion::interface(static_cast<int>(p)), m, rng, strat);
      for (const auto& x : pts)
        batch.interface_pts.push_back({x, static_cast<int>(p)});
    }
  }
  if (n_boundary > 0)
    batch.boundary = sample(problem.domain, problem.interfaces,
                            SampleRegion::boundary(), n_boundary, rng, strat);
  return batch;
}

namespace {

// squared flux jump across the tagged interface, sigma taken from the two
// adjacent regions
TapeScalar interface_term(const Field& field, const Problem& problem, Tape& tape,
                          const Batch::InterfacePoint& ip) {
  const auto [rp, rm] = problem.regions_across(ip.level_set, ip.x);
  const TapeScalar jump =
      jump_normal(field, tape, ip.x, ip.level_set, problem.sigma_of_region(rp),
                  problem.sigma_of_region(rm));
  return ad::square(jump);
}

TapeScalar residual_term(const Field& field, const Problem& problem, Tape& tape,
                         std::span<const double> x) {
  const SpatialJet j = field.eval(tape, x);
  const TapeScalar lap =
      field.dim() == 1 ? j.uxx() : j.uxx() + j.uyy();
  return ad::square(TapeScalar(problem.sigma(x)) * lap -
                    TapeScalar(problem.source(x)));
}

}  // namespace

std::vector<ComponentSpec> H1FitLoss::build(const Field& field,
                                            const Problem& problem,
                                            const Batch& batch,
                                            const LossWeights& weights) const {
  ComponentSpec spec;
  spec.name = "h1";
  spec.order = 1;
  spec.count = batch.interior.size();
  spec.alpha = weights.alpha.empty() ? 1.0 : weights.alpha[0];
  spec.term = [&field, &problem, &batch](Tape& tape, std::size_t i) {
    const auto& x = batch.interior[i];
    const SpatialJet j = field.eval(tape, x);
    const auto ex = problem.exact_at(x);
    TapeScalar v = ad::square(j.u() - TapeScalar(ex.u)) +
                   ad::square(j.ux() - TapeScalar(ex.grad[0]));
    if (field.dim() > 1) v = v + ad::square(j.uy() - TapeScalar(ex.grad[1]));
    return v;
  };
  return {std::move(spec)};
}

std::vector<ComponentSpec> Pinns1dLoss::build(const Field& field,
                                              const Problem& problem,
                                              const Batch& batch,
                                              const LossWeights& weights) const {
  std::vector<ComponentSpec> specs(3);
  specs[0].name = "pde";
  specs[0].order = 2;
  specs[0].count = batch.interior.size();
  specs[0].alpha = weights.alpha[0];
  specs[0].term = [&field, &problem, &batch](Tape& tape, std::size_t i) {
    return residual_term(field, problem, tape, batch.interior[i]);
  };

  specs[1].name = "int";
  specs[1].order = 1;
  specs[1].count = 1;
  specs[1].alpha = weights.alpha[1];
  specs[1].term = [&field, &problem](Tape& tape, std::size_t) {
    const Batch::InterfacePoint ip{{M_PI / 2, 0.0}, 0};
    return interface_term(field, problem, tape, ip);
  };

  specs[2].name = "bc";
  specs[2].order = 0;
  specs[2].count = 1;
  specs[2].alpha = weights.alpha[2];
  specs[2].term = [&field](Tape& tape, std::size_t) {
    const std::array<double, 2> x0{0.0, 0.0}, x1{M_PI, 0.0};
    const TapeScalar u0 = field.eval(tape, {x0.data(), 1}).u();
    const TapeScalar u1 = field.eval(tape, {x1.data(), 1}).u();
    return ad::square(u0) + ad::square(u1);
  };
  return specs;
}

std::vector<ComponentSpec> PinnsInterfaceLoss::build(
    const Field& field, const Problem& problem, const Batch& batch,
    const LossWeights& weights) const {
  std::vector<ComponentSpec> specs(3);
  specs[0].name = "pde";
  specs[0].order = 2;
  specs[0].count = batch.interior.size();
  specs[0].alpha = weights.alpha[0];
  specs[0].term = [&field, &problem, &batch](Tape& tape, std::size_t i) {
    return residual_term(field, problem, tape, batch.interior[i]);
  };

  specs[1].name = "int";
  specs[1].order = 1;
  specs[1].count = batch.interface_pts.size();
  specs[1].alpha = weights.alpha[1];
  specs[1].term = [&field, &problem, &batch](Tape& tape, std::size_t i) {
    return interface_term(field, problem, tape, batch.interface_pts[i]);
  };

  specs[2].name = "bc";
  specs[2].order = 0;
  specs[2].count = batch.boundary.size();
  specs[2].alpha = weights.alpha[2];
  specs[2].term = [&field, &batch](Tape& tape, std::size_t i) {
    return ad::square(field.eval(tape, batch.boundary[i]).u());
  };
  return specs;
}

std::vector<ComponentSpec> PinnsLshapeLoss::build(const Field& field,
                                                  const Problem& problem,
                                                  const Batch& batch,
                                                  const LossWeights& weights) const {
  std::vector<ComponentSpec> specs(2);
  specs[0].name = "pde";
  specs[0].order = 2;
  specs[0].count = batch.interior.size();
  specs[0].alpha = weights.alpha[0];
  specs[0].term = [&field, &problem, &batch](Tape& tape, std::size_t i) {
    const auto& x = batch.interior[i];
    return residual_term(field, problem, tape, x) *
           TapeScalar(weight_omega(WeightKind::LShape, x));
  };

  specs[1].name = "bc";
  specs[1].order = 0;
  specs[1].count = batch.boundary.size();
  specs[1].alpha = weights.alpha[1];
  specs[1].term = [&field, &batch](Tape& tape, std::size_t i) {
    return ad::square(field.eval(tape, batch.boundary[i]).u());
  };

  const auto* corner = dynamic_cast<const CornerField*>(&field);
  if (corner && !field.singular_units().empty()) {
    ComponentSpec bcphi;
    bcphi.name = "bcphi";
    bcphi.order = 0;
    bcphi.count = 1;
    bcphi.alpha = weights.alpha.size() > 2 ? weights.alpha[2] : 1.0;
    bcphi.term = [corner](Tape& tape, std::size_t) {
      // Dirichlet anchors of the angular net: the two legs of the corner
      const std::array<double, 2> leg_a{-1.0, 0.0}, leg_b{0.0, -1.0};
      const TapeScalar pa = corner->angular_eval(tape, 0, 0, leg_a).u();
      const TapeScalar pb = corner->angular_eval(tape, 0, 0, leg_b).u();
      return ad::square(pa) + ad::square(pb);
    };
    specs.push_back(std::move(bcphi));
  }
  return specs;
}

std::vector<ComponentSpec> PinnsMaterialLoss::build(
    const Field& field, const Problem& problem, const Batch& batch,
    const LossWeights& weights) const {
  std::vector<ComponentSpec> specs(3);
  specs[0].name = "pde";
  specs[0].order = 2;
  specs[0].count = batch.interior.size();
  specs[0].alpha = weights.alpha[0];
  specs[0].term = [&field, &problem, &batch](Tape& tape, std::size_t i) {
    const auto& x = batch.interior[i];
    return residual_term(field, problem, tape, x) *
           TapeScalar(weight_omega(WeightKind::MatArea, x));
  };

  specs[1].name = "int";
  specs[1].order = 1;
  specs[1].count = batch.interface_pts.size();
  specs[1].alpha = weights.alpha[1];
  specs[1].term = [&field, &problem, &batch](Tape& tape, std::size_t i) {
    const auto& ip = batch.interface_pts[i];
    return interface_term(field, problem, tape, ip) *
           TapeScalar(weight_omega(WeightKind::MatLine, ip.x));
  };

  specs[2].name = "bc";
  specs[2].order = 0;
  specs[2].count = batch.boundary.size();
  specs[2].alpha = weights.alpha[2];
  specs[2].term = [&field, &batch](Tape& tape, std::size_t i) {
    return ad::square(field.eval(tape, batch.boundary[i]).u());
  };

  const auto* material = dynamic_cast<const MaterialVertexField*>(&field);
  if (material && !field.singular_units().empty()) {
    ComponentSpec bcphi;
    bcphi.name = "bcphi";
    bcphi.order = 1;
    bcphi.count = 1;
    bcphi.alpha = weights.alpha.size() > 3 ? weights.alpha[3] : 1.0;
    bcphi.term = [material, &problem](Tape& tape, std::size_t) {
      // angular flux continuity at the four interface angles; the sign of
      // the crossed |xhat_i| flips between the adjacent sectors
      static constexpr double kAfterSign[4] = {1.0, -1.0, -1.0, 1.0};
      const int modes = material->singular_units()[0].modes;
      TapeScalar sum(0.0);
      for (int k = 0; k < 4; ++k) {
        const double theta = k * M_PI / 2;
        const std::array<double, 2> xhat{std::cos(theta), std::sin(theta)};
        const std::array<double, 2> tangent{-std::sin(theta), std::cos(theta)};
        const int crossed = k % 2 == 0 ? 1 : 0;
        const double sig_after = problem.sigma_of_region(k);
        const double sig_before = problem.sigma_of_region((k + 3) % 4);
        for (int j = 0; j < modes; ++j) {
          EvalSide after{crossed, kAfterSign[k]};
          EvalSide before{crossed, -kAfterSign[k]};
          const SpatialJet pa = material->angular_eval(tape, j, xhat, &after);
          const SpatialJet pb = material->angular_eval(tape, j, xhat, &before);
          const TapeScalar da = pa.ux() * tangent[0] + pa.uy() * tangent[1];
          const TapeScalar db = pb.ux() * tangent[0] + pb.uy() * tangent[1];
          sum = sum + ad::square(TapeScalar(sig_after) * da -
                                 TapeScalar(sig_before) * db);
        }
      }
      return sum * TapeScalar(0.25);
    };
    specs.push_back(std::move(bcphi));
  }
  return specs;
}

std::unique_ptr<Loss> make_loss(const std::string& id) {
  if (id == "h1") return std::make_unique<H1FitLoss>();
  if (id == "pinns-1d") return std::make_unique<Pinns1dLoss>();
  if (id == "pinns-interface") return std::make_unique<PinnsInterfaceLoss>();
  if (id == "pinns-lshape") return std::make_unique<PinnsLshapeLoss>();
  if (id == "pinns-material") return std::make_unique<PinnsMaterialLoss>();
  throw std::invalid_argument("unknown loss: " + id);
}

LossEvaluator::LossEvaluator(std::size_t n_params, int n_threads)
    : n_params_(n_params), pool_(resolve_threads(n_threads)) {
  tapes_.resize(pool_.workers());
}

LossComponents LossEvaluator::evaluate(const Field& field,
                                       std::span<const ComponentSpec> specs,
                                       std::vector<double>* grad) {
  LossComponents out;
  if (grad) {
    grad->assign(n_params_, 0.0);
    component_grad_.assign(n_params_ * specs.size(), 0.0);
  }
  for (std::size_t k = 0; k < specs.size(); ++k) {
    const ComponentSpec& spec = specs[k];
    const std::size_t n_chunks = (spec.count + kChunk - 1) / kChunk;
    chunk_value_.assign(n_chunks, 0.0);
    if (grad) {
      if (chunk_grad_.size() < n_chunks) chunk_grad_.resize(n_chunks);
      for (std::size_t c = 0; c < n_chunks; ++c)
        chunk_grad_[c].assign(n_params_, 0.0);
    }
    pool_.for_chunks(n_chunks, [&](std::size_t c, int worker) {
      auto& tape_ptr = tapes_[worker];
      if (!tape_ptr) tape_ptr = std::make_unique<ad::Tape>(n_params_);
      ad::Tape& tape = *tape_ptr;
      tape.set_params(field.params().data());
      tape.set_derivative_order(spec.order);
      const std::size_t begin = c * kChunk;
      const std::size_t end = std::min(begin + kChunk, spec.count);
      double value = 0.0;
      for (std::size_t i = begin; i < end; ++i) {
        tape.rewind();
        const ad::TapeScalar term = spec.term(tape, i);
        value += term.value;
        if (grad) tape.backward(term, 1.0, chunk_grad_[c]);
      }
      chunk_value_[c] = value;
    });
    double sum = 0.0;
    for (double v : chunk_value_) sum += v;
    const double raw = spec.count > 0 ? sum / static_cast<double>(spec.count) : 0.0;
    out.names.push_back(spec.name);
    out.raw.push_back(raw);
    out.rooted.push_back(std::sqrt(raw + kSqrtGuard));
    out.total += spec.alpha * out.rooted.back();
    if (grad) {
      double* comp = component_grad_.data() + k * n_params_;
      for (std::size_t c = 0; c < n_chunks; ++c)
        for (std::size_t p = 0; p < n_params_; ++p) comp[p] += chunk_grad_[c][p];
    }
  }
  if (grad) {
    for (std::size_t k = 0; k < specs.size(); ++k) {
      if (specs[k].count == 0) continue;
      const double scale = specs[k].alpha * 0.5 / out.rooted[k] /
                           static_cast<double>(specs[k].count);
      const double* comp = component_grad_.data() + k * n_params_;
      for (std::size_t p = 0; p < n_params_; ++p) (*grad)[p] += scale * comp[p];
    }
  }
  return out;
}

}  // namespace reconn
