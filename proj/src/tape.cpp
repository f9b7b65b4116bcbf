#include "reconn/tape.hpp"

namespace reconn::ad {

void Tape::backward(const TapeScalar& root, double seed, std::span<double> grad) {
  if (root.is_const()) return;
  const std::size_t top = static_cast<std::size_t>(root.node) + 1;
  adjoint_.assign(top, 0.0);
  adjoint_[root.node] = seed;
  for (std::size_t i = top; i-- > n_params_;) {
    const double a = adjoint_[i];
    if (a == 0.0) continue;
    const Node& n = nodes_[i];
    for (std::uint32_t e = n.begin; e < n.end; ++e)
      adjoint_[edges_[e].parent] += a * edges_[e].partial;
  }
  const std::size_t np = n_params_ < top ? n_params_ : top;
  for (std::size_t p = 0; p < np; ++p) grad[p] += adjoint_[p];
}

}  // namespace reconn::ad
