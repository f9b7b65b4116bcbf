#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <string>

#include "reconn/geometry.hpp"
#include "reconn/sturm_liouville.hpp"

namespace reconn {

// One benchmark: domain, piecewise-constant material, interfaces, source and
// the manufactured solution with its analytic one-sided limits. Regions are
// small integer ids (sigma subdomains); region -1 resolves from the point.
struct Problem {
  struct Exact {
    double u = 0.0;
    std::array<double, 2> grad{0.0, 0.0};
    double lap = 0.0;
  };

  std::string name;
  int dim = 2;
  Domain domain;
  std::vector<LevelSet> interfaces;
  bool stratified_sampling = false;
  int n_regions = 1;
  double lambda_exact = std::numeric_limits<double>::quiet_NaN();
  std::shared_ptr<SturmLiouvilleSolution> singular;  // material vertex only

  std::function<int(std::span<const double>)> region_of;
  std::function<double(int)> sigma_of_region;
  // regions adjacent to interface p at x: (phi_p > 0 side, phi_p < 0 side)
  std::function<std::pair<int, int>(int, std::span<const double>)> regions_across;
  std::function<Exact(std::span<const double>, int)> exact;
  std::function<double(std::span<const double>)> source;
  std::function<double(double)> sigma_of_theta;  // for singular reports

  double sigma(std::span<const double> x) const {
    return sigma_of_region(region_of(x));
  }
  Exact exact_at(std::span<const double> x) const { return exact(x, -1); }
};

// sigma = 1 on [0, pi/2], 3 on (pi/2, pi); u* = sin(2x) and sin(2x)/3,
// f = -4 sin(2x). The flipped sigma (relative to one reading of the problem
// statement) is the unique assignment under which u* satisfies both the
// pointwise equation and flux continuity exactly.
Problem problem_1d();

// Circle interface |x| = 1/2 in (-1,1)^2; sigma = 1 inside, 3 outside;
// u* = (x1-1)^2 (x2-1)^2 (4x1^2+4x2^2-1)^2 / sigma.
Problem problem_interface();

// L-shape (-1,1)^2 minus the closed third-quadrant square; sigma = 1;
// u* = s0 * (x1^2-1)(x2^2-1) with s0 = r^(2/3) sin((2/3)(theta - pi/2)) and
// theta measured from the negative x1-axis so s0 vanishes on both legs.
Problem problem_lshape();

// Quadrant materials sigma = (1,2,3,4); u* = cos(x1 pi/2) cos(x2 pi/2) s*(x)
// built from the Sturm-Liouville solve.
Problem problem_material_vertex();

Problem make_problem(const std::string& name);

}  // namespace reconn
