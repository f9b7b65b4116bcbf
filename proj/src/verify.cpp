#include "reconn/verify.hpp"

#include <cmath>

#include "reconn/experiment.hpp"
#include "reconn/fields.hpp"
#include "reconn/losses.hpp"
#include "reconn/problems.hpp"
#include "reconn/sturm_liouville.hpp"

namespace reconn {

using nlohmann::json;

namespace {

struct Suite {
  json checks = json::array();
  bool pass = true;

  void add(const std::string& name, double measured, double threshold,
           bool less_than = true) {
    const bool ok = less_than ? measured < threshold : measured > threshold;
    checks.push_back({{"name", name},
                      {"measured", measured},
                      {"threshold", threshold},
                      {"pass", ok}});
    pass = pass && ok;
  }
  void add_flag(const std::string& name, bool ok) {
    checks.push_back({{"name", name}, {"pass", ok}});
    pass = pass && ok;
  }
  json done(const std::string& name) const {
    return {{"suite", name}, {"pass", pass}, {"checks", checks}};
  }
};

// One-sided limit at x0 by Lagrange extrapolation from samples at
// x0 + side*(1..n)*eps; exact for polynomials of degree < n.
double extrapolate_limit(const std::function<double(double)>& f, double x0,
                         double side, double eps, int n = 6) {
  std::vector<double> t(n), y(n);
  for (int i = 0; i < n; ++i) {
    t[i] = side * (i + 1) * eps;
    y[i] = f(x0 + t[i]);
  }
  // Neville to t = 0
  for (int m = 1; m < n; ++m)
    for (int i = 0; i < n - m; ++i)
      y[i] = (t[i + m] * y[i] - t[i] * y[i + 1]) / (t[i + m] - t[i]);
  return y[0];
}

json verify_autodiff() {
  Suite s;
  const double step = 1e-4;
  double max_grad = 0.0, max_lap = 0.0, max_param = 0.0;
  Rng rng(20240915);

  auto probe = [&](const Field& field, std::span<const double> x) {
    const FdReport rep = fd_check(field, x, step);
    if (!rep.precondition_ok) return;
    max_grad = std::max(max_grad, rep.max_rel_grad);
    max_lap = std::max(max_lap, rep.max_rel_laplacian);
    max_param = std::max(max_param, rep.max_rel_param_grad);
  };

  for (int c = 0; c < 6; ++c) {
    ClassicalField f1(1, {1, 8, 8, 1}, Activation::Tanh, rng.fork(c));
    const std::array<double, 2> x{rng.uniform(0.2, 2.9), 0.0};
    probe(f1, {x.data(), 1});
    ClassicalField f2(2, {2, 8, 8, 1}, Activation::Tanh, rng.fork(100 + c));
    const std::array<double, 2> y{rng.uniform(-0.9, 0.9), rng.uniform(-0.9, 0.9)};
    probe(f2, y);
  }
  for (int c = 0; c < 4; ++c) {
    InterfaceField f(2, {2, 8, 8, 2}, {LevelSet::circle(0.25)}, Activation::Tanh,
                     rng.fork(200 + c));
    const std::array<double, 2> y{rng.uniform(0.6, 0.9), rng.uniform(0.6, 0.9)};
    probe(f, y);
    MaterialVertexField m({2, 6, 6, 6}, {2, 5, 5, 3},
                          {LevelSet::line_x1(), LevelSet::line_x2()}, {0.0, 0.0},
                          1, Cutoff{0.5, 0.9}, Activation::Tanh, rng.fork(300 + c));
    const std::array<double, 2> z{rng.uniform(0.2, 0.6), rng.uniform(0.2, 0.6)};
    probe(m, z);
  }
  s.add("max_rel_spatial_grad", max_grad, 1e-5);
  s.add("max_rel_laplacian", max_lap, 1e-5);
  s.add("max_rel_param_grad", max_param, 1e-5);

  // determinism: identical construction order gives bit-identical gradients
  {
    ClassicalField f(2, {2, 10, 10, 1}, Activation::Tanh, Rng(7));
    Problem problem = problem_interface();
    H1FitLoss loss;
    Rng r1(11), r2(11);
    Batch b1 = sample_batch(problem, 64, 0, 0, r1);
    Batch b2 = sample_batch(problem, 64, 0, 0, r2);
    LossEvaluator ev(f.param_count(), 1);
    std::vector<double> g1, g2;
    ev.evaluate(f, loss.build(f, problem, b1, {{1.0}}), &g1);
    ev.evaluate(f, loss.build(f, problem, b2, {{1.0}}), &g2);
    s.add_flag("gradient_bit_determinism", g1 == g2);
  }
  return s.done("autodiff");
}

json verify_geometry() {
  Suite s;
  const Cutoff cutoff{0.5, 0.9};
  const double eps = 1e-4;
  for (double knot : {cutoff.delta1, cutoff.delta2}) {
    for (int k = 0; k < 3; ++k) {
      auto fk = [&](double r) {
        const Cutoff::Values v = cutoff.eval(r);
        return k == 0 ? v.v : (k == 1 ? v.d1 : v.d2);
      };
      const double left = extrapolate_limit(fk, knot, -1.0, eps);
      const double right = extrapolate_limit(fk, knot, 1.0, eps);
      const char* names[3] = {"eta", "eta_d1", "eta_d2"};
      s.add("cutoff_jump_" + std::string(names[k]) + "_at_" +
                (knot == cutoff.delta1 ? std::string("delta1") : std::string("delta2")),
            std::abs(right - left), 1e-6);
    }
  }

  // plateau values
  s.add("eta_before_delta1", std::abs(cutoff.eval(0.4).v - 1.0), 1e-15);
  s.add("eta_after_delta2", std::abs(cutoff.eval(0.95).v), 1e-15);

  // level-set gradient norms on the zero sets
  {
    Rng rng(5);
    const LevelSet circle = LevelSet::circle(0.25);
    double dev = 0.0;
    auto pts = sample(Domain::square(), {&circle, 1}, SampleRegion::interface(0),
                      200, rng);
    for (const auto& x : pts) dev = std::max(dev, std::abs(circle.grad_norm(x) - 1.0));
    const LevelSet lx = LevelSet::line_x1();
    dev = std::max(dev, std::abs(lx.grad_norm(pts[0]) - 1.0));
    s.add("grad_norm_on_interfaces", dev, 1e-12);
  }

  // sampler reproducibility and circle uniformity
  {
    const LevelSet circle = LevelSet::circle(0.25);
    Rng a(42), b(42);
    auto pa = sample(Domain::square(), {&circle, 1}, SampleRegion::interior(), 256, a);
    auto pb = sample(Domain::square(), {&circle, 1}, SampleRegion::interior(), 256, b);
    s.add_flag("sampler_reproducible", pa == pb);

    Rng c(99);
    auto pc = sample(Domain::square(), {&circle, 1}, SampleRegion::interface(0),
                     1000, c);
    double rmean = 0.0;
    std::vector<double> ang;
    for (const auto& x : pc) {
      rmean += std::hypot(x[0], x[1]);
      double th = std::atan2(x[1], x[0]);
      if (th < 0) th += 2 * M_PI;
      ang.push_back(th / (2 * M_PI));
    }
    rmean /= pc.size();
    std::sort(ang.begin(), ang.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < ang.size(); ++i) {
      ks = std::max(ks, std::abs(ang[i] - (i + 1.0) / ang.size()));
      ks = std::max(ks, std::abs(ang[i] - static_cast<double>(i) / ang.size()));
    }
    s.add("circle_mean_radius_dev", std::abs(rmean - 0.5), 1e-12);
    s.add("circle_angle_ks", ks, 0.05);
  }
  return s.done("geometry");
}

json verify_exact_solutions() {
  Suite s;
  const std::array<const char*, 4> names = {"1d-transmission", "smooth-interface",
                                            "lshape", "material-vertex"};
  for (const char* name : names) {
    Problem p = make_problem(name);
    Rng rng(1234);
    // residual per subdomain
    std::vector<int> counts(p.n_regions, 0);
    double max_res = 0.0;
    int guard = 0;
    while (*std::min_element(counts.begin(), counts.end()) < 1000 &&
           ++guard < 200000) {
      auto pts = sample(p.domain, p.interfaces, SampleRegion::interior(), 64, rng);
      for (const auto& x : pts) {
        const int r = p.region_of(x);
        if (counts[r] >= 1000) continue;
        ++counts[r];
        const auto ex = p.exact_at(x);
        max_res = std::max(max_res,
                           std::abs(p.sigma_of_region(r) * ex.lap - p.source(x)));
      }
    }
    s.add(std::string(name) + "_residual", max_res, 1e-10);

    // flux continuity across each interface via one-sided analytic limits
    double max_jump = 0.0;
    for (std::size_t ip = 0; ip < p.interfaces.size(); ++ip) {
      auto pts = sample(p.domain, p.interfaces,
                        SampleRegion::interface(static_cast<int>(ip)), 100, rng);
      for (const auto& x : pts) {
        const auto nu = p.interfaces[ip].unit_normal(x);
        const auto [rp, rm] = p.regions_across(static_cast<int>(ip), x);
        const auto ep = p.exact(x, rp);
        const auto em = p.exact(x, rm);
        const double jump =
            p.sigma_of_region(rp) * (ep.grad[0] * nu[0] + ep.grad[1] * nu[1]) -
            p.sigma_of_region(rm) * (em.grad[0] * nu[0] + em.grad[1] * nu[1]);
        max_jump = std::max(max_jump, std::abs(jump));
      }
    }
    if (!p.interfaces.empty())
      s.add(std::string(name) + "_flux_jump", max_jump, 1e-10);

    // homogeneous Dirichlet data
    double max_bc = 0.0;
    auto bpts = sample(p.domain, p.interfaces, SampleRegion::boundary(), 100, rng);
    for (const auto& x : bpts) max_bc = std::max(max_bc, std::abs(p.exact_at(x).u));
    s.add(std::string(name) + "_boundary", max_bc, 1e-12);

    // independent FD probe of the closed-form Laplacian
    double max_lap_dev = 0.0;
    const double h = 1e-4;
    auto safe = [&](const std::array<double, 2>& x) {
      if (!p.domain.contains(x)) return false;
      if (std::hypot(x[0], x[1]) < 0.15 && p.dim == 2) return false;
      for (const auto& ls : p.interfaces)
        if (std::abs(ls.value(x)) < 10 * h * std::max(1.0, ls.grad_norm(x)))
          return false;
      return true;
    };
    auto ipts = sample(p.domain, p.interfaces, SampleRegion::interior(), 400, rng);
    for (const auto& x : ipts) {
      if (!safe(x)) continue;
      double lap_fd = 0.0;
      for (int axis = 0; axis < p.dim; ++axis) {
        auto xp = x, xm = x;
        xp[axis] += h;
        xm[axis] -= h;
        if (!p.domain.contains(xp) || !p.domain.contains(xm)) {
          lap_fd = p.exact_at(x).lap;  // skip edge cells
          break;
        }
        lap_fd += (p.exact_at(xp).u - 2 * p.exact_at(x).u + p.exact_at(xm).u) / (h * h);
      }
      const double lap = p.exact_at(x).lap;
      max_lap_dev = std::max(max_lap_dev, std::abs(lap - lap_fd) /
                                              std::max({1.0, std::abs(lap)}));
    }
    s.add(std::string(name) + "_lap_fd", max_lap_dev, 1e-5);
  }
  return s.done("exact-solutions");
}

json verify_eigen() {
  Suite s;
  const std::array<double, 4> sigma{1.0, 2.0, 3.0, 4.0};
  const SturmLiouvilleSolution sol = sturm_liouville_solve(sigma);
  s.add("lambda_vs_paper", std::abs(sol.lambda - 0.8599), 5e-4);
  s.add("det_at_root", std::abs(sol.det_at_root), 1e-10);
  s.add_flag("single_root", sol.roots_found == 1);

  const std::array<double, 4> paper_a{3.584, 3.285, 2.474, 2.115};
  const std::array<double, 4> paper_b{-2.003, -0.6678, -1.0495, -0.5861};
  double max_rel = 0.0;
  for (int i = 0; i < 4; ++i) {
    max_rel = std::max(max_rel, std::abs(sol.a[i] - paper_a[i]) / std::abs(paper_a[i]));
    max_rel = std::max(max_rel, std::abs(sol.b[i] - paper_b[i]) / std::abs(paper_b[i]));
  }
  s.add("coefficients_vs_paper", max_rel, 1e-2);

  const double fem = sturm_liouville_fem_oracle(sigma, 1024);
  s.add("det_vs_fem", std::abs(sol.lambda - fem), 1e-3);

  // self-convergence of the oracle at order 2
  const double f1 = sturm_liouville_fem_oracle(sigma, 256);
  const double f2 = sturm_liouville_fem_oracle(sigma, 512);
  const double f3 = sturm_liouville_fem_oracle(sigma, 1024);
  const double slope = std::log2(std::abs(f1 - f2) / std::abs(f2 - f3));
  s.add("fem_richardson_slope_dev", std::abs(slope - 2.0), 0.3);

  bool no_root = false;
  try {
    sturm_liouville_solve({1.0, 1.0, 1.0, 1.0});
  } catch (const NoRootInUnitInterval&) {
    no_root = true;
  }
  s.add_flag("constant_sigma_no_root", no_root);

  const SturmLiouvilleSolution rot = sturm_liouville_solve({4.0, 1.0, 2.0, 3.0});
  s.add("rotation_invariance", std::abs(rot.lambda - sol.lambda), 1e-9);
  return s.done("eigen");
}

}  // namespace

json verify_suite(const std::string& suite) {
  if (suite == "autodiff") return verify_autodiff();
  if (suite == "geometry") return verify_geometry();
  if (suite == "exact-solutions") return verify_exact_solutions();
  if (suite == "eigen") return verify_eigen();
  throw std::invalid_argument("unknown suite: " + suite);
}

}  // namespace reconn
