#include "reconn/mlp.hpp"

#include <cmath>

namespace reconn {

using ad::SpatialJet;
using ad::Tape;
using ad::TapeScalar;

Mlp::Mlp(std::vector<int> sizes, Activation act, std::size_t param_offset)
    : sizes_(std::move(sizes)), act_(act), offset_(param_offset) {
  if (sizes_.size() < 2) throw InvalidShape("mlp needs at least two layers");
  for (int s : sizes_)
    if (s < 1) throw InvalidShape("mlp layer sizes must be positive");
  n_params_ = param_count_for(sizes_);
}

std::size_t Mlp::param_count_for(std::span<const int> sizes) {
  std::size_t n = 0;
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i)
    n += static_cast<std::size_t>(sizes[i]) * sizes[i + 1] + sizes[i + 1];
  return n;
}

void Mlp::init_glorot(std::span<double> params, Rng& rng) const {
  std::size_t off = offset_;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    const int nin = sizes_[l], nout = sizes_[l + 1];
    const double a = std::sqrt(6.0 / (nin + nout));
    for (int i = 0; i < nin * nout; ++i) params[off + i] = rng.uniform(-a, a);
    off += static_cast<std::size_t>(nin) * nout;
    for (int i = 0; i < nout; ++i) params[off + i] = 0.0;
    off += nout;
  }
}

void Mlp::forward(Tape& tape, std::span<const SpatialJet> in,
                  std::span<SpatialJet> out) const {
  const int ord = tape.derivative_order();
  std::vector<SpatialJet> cur(in.begin(), in.end());
  std::vector<SpatialJet> next;
  std::size_t off = offset_;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    const std::size_t nin = sizes_[l], nout = sizes_[l + 1];
    const bool hidden = l + 2 < sizes_.size();
    next.resize(nout);
    for (std::size_t j = 0; j < nout; ++j) {
      const std::size_t w = off + j * nin;
      const std::int64_t b = static_cast<std::int64_t>(off + nout * nin + j);
      SpatialJet z;
      for (int k = 0; k < 6; ++k) {
        if ((k >= 1 && ord < 1) || (k >= 3 && ord < 2)) {
          z.c[k] = ad::jet_nan();
          continue;
        }
        z.c[k] = tape.affine_row(
            w, nin, [&](std::size_t i) -> const TapeScalar& { return cur[i].c[k]; },
            k == 0 ? b : -1);
      }
      next[j] = hidden ? (act_ == Activation::Tanh ? ad::tanh(z) : ad::relu(z)) : z;
    }
    off += nout * nin + nout;
    cur.swap(next);
  }
  for (std::size_t j = 0; j < cur.size(); ++j) out[j] = cur[j];
}

}  // namespace reconn
