#include "reconn/problems.hpp"

#include <cmath>

#include "reconn/jet.hpp"

namespace reconn {

using ad::SpatialJet;

namespace {

Problem::Exact from_jet(const SpatialJet& j, int dim) {
  Problem::Exact e;
  e.u = j.value();
  e.grad = {j.grad_x(), dim > 1 ? j.grad_y() : 0.0};
  e.lap = dim > 1 ? j.uxx().value + j.uyy().value : j.uxx().value;
  return e;
}

int material_quadrant(std::span<const double> x) {
  return x[0] > 0.0 ? (x[1] > 0.0 ? 0 : 3) : (x[1] > 0.0 ? 1 : 2);
}

}  // namespace

Problem problem_1d() {
  Problem p;
  p.name = "1d-transmission";
  p.dim = 1;
  p.domain = Domain::interval();
  p.interfaces = {LevelSet::point_1d(M_PI / 2, 0.5)};
  p.n_regions = 2;
  p.region_of = [](std::span<const double> x) { return x[0] <= M_PI / 2 ? 0 : 1; };
  p.sigma_of_region = [](int r) { return r == 0 ? 1.0 : 3.0; };
  p.regions_across = [](int, std::span<const double>) {
    return std::pair<int, int>{1, 0};
  };
  p.exact = [](std::span<const double> x, int region) {
    const int r = region >= 0 ? region : (x[0] <= M_PI / 2 ? 0 : 1);
    const SpatialJet jx = ad::jet_input(x[0]);
    const SpatialJet u = ad::sin(jx * 2.0) * (r == 0 ? 1.0 : 1.0 / 3.0);
    return from_jet(u, 1);
  };
  p.source = [](std::span<const double> x) { return -4.0 * std::sin(2.0 * x[0]); };
  return p;
}

Problem problem_interface() {
  Problem p;
  p.name = "smooth-interface";
  p.dim = 2;
  p.domain = Domain::square();
  p.interfaces = {LevelSet::circle(0.25)};
  p.n_regions = 2;
  p.region_of = [](std::span<const double> x) {
    return x[0] * x[0] + x[1] * x[1] < 0.25 ? 0 : 1;
  };
  p.sigma_of_region = [](int r) { return r == 0 ? 1.0 : 3.0; };
  p.regions_across = [](int, std::span<const double>) {
    return std::pair<int, int>{1, 0};  // phi = |x|^2 - 1/4 > 0 outside
  };
  auto exact = [p_sigma = p.sigma_of_region](std::span<const double> x, int region) {
    const int r =
        region >= 0 ? region : (x[0] * x[0] + x[1] * x[1] < 0.25 ? 0 : 1);
    const auto in = ad::jet_input(x[0], x[1]);
    const SpatialJet t1 = in[0] - 1.0;
    const SpatialJet t2 = in[1] - 1.0;
    const SpatialJet c = (in[0] * in[0] + in[1] * in[1]) * 4.0 - 1.0;
    const SpatialJet g = (t1 * t1) * (t2 * t2) * (c * c);
    return from_jet(g * (1.0 / p_sigma(r)), 2);
  };
  p.exact = exact;
  p.source = [exact, sig = p.sigma_of_region,
              reg = p.region_of](std::span<const double> x) {
    return sig(reg(x)) * exact(x, -1).lap;
  };
  return p;
}

Problem problem_lshape() {
  Problem p;
  p.name = "lshape";
  p.dim = 2;
  p.domain = Domain::lshape();
  p.n_regions = 1;
  p.lambda_exact = 2.0 / 3.0;
  p.region_of = [](std::span<const double>) { return 0; };
  p.sigma_of_region = [](int) { return 1.0; };
  p.sigma_of_theta = [](double) { return 1.0; };
  auto exact = [](std::span<const double> x, int) {
    const auto in = ad::jet_input(x[0], x[1]);
    const SpatialJet r = ad::sqrt(in[0] * in[0] + in[1] * in[1]);
    // theta from the negative x1-axis, in [pi/2, 2pi] on this domain, so the
    // sine factor vanishes on both legs of the re-entrant corner
    const SpatialJet theta = ad::atan2(in[1], in[0]) + M_PI;
    const SpatialJet s0 =
        ad::pow_const(r, 2.0 / 3.0) * ad::sin((theta - M_PI / 2) * (2.0 / 3.0));
    const SpatialJet u = s0 * (in[0] * in[0] - 1.0) * (in[1] * in[1] - 1.0);
    return from_jet(u, 2);
  };
  p.exact = exact;
  p.source = [exact](std::span<const double> x) { return exact(x, -1).lap; };
  return p;
}

Problem problem_material_vertex() {
  Problem p;
  p.name = "material-vertex";
  p.dim = 2;
  p.domain = Domain::square();
  p.interfaces = {LevelSet::line_x1(), LevelSet::line_x2()};
  p.stratified_sampling = true;
  p.n_regions = 4;
  p.singular = std::make_shared<SturmLiouvilleSolution>(
      sturm_liouville_solve({1.0, 2.0, 3.0, 4.0}));
  p.lambda_exact = p.singular->lambda;
  p.region_of = material_quadrant;
  p.sigma_of_region = [](int r) { return static_cast<double>(r + 1); };
  p.sigma_of_theta = [](double theta) {
    int s = static_cast<int>(theta / (M_PI / 2)) % 4;
    return static_cast<double>((s < 0 ? s + 4 : s) + 1);
  };
  p.regions_across = [](int ls, std::span<const double> x) {
    if (ls == 0)  // chord x1 = 0
      return x[1] > 0.0 ? std::pair<int, int>{0, 1} : std::pair<int, int>{3, 2};
    return x[0] > 0.0 ? std::pair<int, int>{0, 3} : std::pair<int, int>{1, 2};
  };
  auto sl = p.singular;
  auto exact = [sl](std::span<const double> x, int region) {
    const int q = region >= 0 ? region : material_quadrant(x);
    const auto in = ad::jet_input(x[0], x[1]);
    const SpatialJet r = ad::sqrt(in[0] * in[0] + in[1] * in[1]);
    SpatialJet theta = ad::atan2(in[1], in[0]);
    if (theta.value() < 0.0) theta = theta + 2.0 * M_PI;
    // keep theta inside the requested sector when probing one-sided limits
    if (theta.value() < q * M_PI / 2 - 1e-9) theta = theta + 2.0 * M_PI;
    if (theta.value() > (q + 1) * M_PI / 2 + 1e-9) theta = theta - 2.0 * M_PI;
    const SpatialJet arg = theta * sl->lambda;
    const SpatialJet sstar =
        ad::pow_const(r, sl->lambda) *
        (ad::sin(arg) * sl->a[q] + ad::cos(arg) * sl->b[q]);
    const SpatialJet u =
        ad::cos(in[0] * (M_PI / 2)) * ad::cos(in[1] * (M_PI / 2)) * sstar;
    return from_jet(u, 2);
  };
  p.exact = exact;
  p.source = [exact, sig = p.sigma_of_region,
              reg = p.region_of](std::span<const double> x) {
    return sig(reg(x)) * exact(x, -1).lap;
  };
  return p;
}

Problem make_problem(const std::string& name) {
  if (name == "1d-transmission") return problem_1d();
  if (name == "smooth-interface") return problem_interface();
  if (name == "lshape") return problem_lshape();
  if (name == "material-vertex") return problem_material_vertex();
  throw std::invalid_argument("unknown problem: " + name);
}

}  // namespace reconn
