#include "reconn/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <vector>

namespace reconn {

namespace {

struct GridPoints {
  std::vector<std::array<double, 2>> pts;
};

GridPoints grid_points(const Problem& problem, const GridSpec& grid) {
  GridPoints g;
  if (problem.dim == 1) {
    g.pts.reserve(grid.n_1d);
    for (int i = 0; i < grid.n_1d; ++i)
      g.pts.push_back({(i + 0.5) * M_PI / grid.n_1d, 0.0});
    return g;
  }
  const double hx = 2.0 / grid.nx, hy = 2.0 / grid.ny;
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      const std::array<double, 2> x{-1.0 + (i + 0.5) * hx, -1.0 + (j + 0.5) * hy};
      if (problem.domain.contains(x)) g.pts.push_back(x);
    }
  }
  return g;
}

struct CellError {
  double nu = 0.0, du = 0.0, ng = 0.0, dg = 0.0;
};

}  // namespace

std::string GridSpec::describe(int dim) const {
  char buf[64];
  if (dim == 1)
    std::snprintf(buf, sizeof buf, "1d-midpoint-%d", n_1d);
  else
    std::snprintf(buf, sizeof buf, "%dx%d-midpoint", nx, ny);
  return buf;
}

ErrorReport relative_l2(const Field& field, const Problem& problem,
                        const GridSpec& grid, ThreadPool& pool) {
  const GridPoints g = grid_points(problem, grid);
  constexpr std::size_t kChunk = 256;
  const std::size_t n_chunks = (g.pts.size() + kChunk - 1) / kChunk;
  std::vector<CellError> partial(n_chunks);
  std::vector<std::unique_ptr<ad::Tape>> tapes(pool.workers());
  pool.for_chunks(n_chunks, [&](std::size_t c, int worker) {
    auto& tp = tapes[worker];
    if (!tp) {
      tp = std::make_unique<ad::Tape>(field.param_count());
      tp->set_params(field.params().data());
      tp->set_derivative_order(1);
    }
    CellError e;
    const std::size_t end = std::min((c + 1) * kChunk, g.pts.size());
    for (std::size_t i = c * kChunk; i < end; ++i) {
      const auto& x = g.pts[i];
      tp->rewind();
      const ad::SpatialJet j = field.eval(*tp, x);
      const auto ex = problem.exact_at(x);
      const double eu = j.value() - ex.u;
      e.nu += eu * eu;
      e.du += ex.u * ex.u;
      double g2 = (j.grad_x() - ex.grad[0]) * (j.grad_x() - ex.grad[0]);
      double d2 = ex.grad[0] * ex.grad[0];
      if (field.dim() > 1) {
        g2 += (j.grad_y() - ex.grad[1]) * (j.grad_y() - ex.grad[1]);
        d2 += ex.grad[1] * ex.grad[1];
      }
      e.ng += g2;
      e.dg += d2;
    }
    partial[c] = e;
  });
  CellError tot;
  for (const auto& e : partial) {
    tot.nu += e.nu;
    tot.du += e.du;
    tot.ng += e.ng;
    tot.dg += e.dg;
  }
  ErrorReport rep;
  rep.rel_l2_u_percent = 100.0 * std::sqrt(tot.nu / tot.du);
  rep.rel_l2_grad_percent = 100.0 * std::sqrt(tot.ng / tot.dg);
  rep.grid = grid.describe(problem.dim);
  return rep;
}

void grid_dump(const Field& field, const Problem& problem, const GridSpec& grid,
               std::ostream& os) {
  os << "x1,x2,u_nn,u_exact,gnorm_nn,gnorm_exact,err_u,err_grad\n";
  const GridPoints g = grid_points(problem, grid);
  ad::Tape tape(field.param_count());
  tape.set_params(field.params().data());
  tape.set_derivative_order(1);
  char line[256];
  for (const auto& x : g.pts) {
    tape.rewind();
    const ad::SpatialJet j = field.eval(tape, x);
    const auto ex = problem.exact_at(x);
    const double gx = j.grad_x(), gy = field.dim() > 1 ? j.grad_y() : 0.0;
    const double gnn = std::hypot(gx, gy);
    const double gex = std::hypot(ex.grad[0], ex.grad[1]);
    const double err_g = std::hypot(gx - ex.grad[0], gy - ex.grad[1]);
    std::snprintf(line, sizeof line,
                  "%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g\n", x[0], x[1],
                  j.value(), ex.u, gnn, gex, std::abs(j.value() - ex.u), err_g);
    os << line;
  }
}

}  // namespace reconn
