#pragma once

#include <ostream>
#include <string>

#include "reconn/fields.hpp"
#include "reconn/parallel.hpp"
#include "reconn/problems.hpp"

namespace reconn {

// Deterministic evaluation grids: midpoints of a uniform partition, so cell
// centers never land on interfaces, axes or singular centers.
struct GridSpec {
  int n_1d = 10000;
  int nx = 256;
  int ny = 256;

  std::string describe(int dim) const;
};

struct ErrorReport {
  double rel_l2_u_percent = 0.0;
  double rel_l2_grad_percent = 0.0;
  std::string grid;
};

ErrorReport relative_l2(const Field& field, const Problem& problem,
                        const GridSpec& grid, ThreadPool& pool);

// CSV rows in row-major grid order; masked cells (outside the domain) are
// omitted. Header: x1,x2,u_nn,u_exact,gnorm_nn,gnorm_exact,err_u,err_grad.
void grid_dump(const Field& field, const Problem& problem, const GridSpec& grid,
               std::ostream& os);

}  // namespace reconn
