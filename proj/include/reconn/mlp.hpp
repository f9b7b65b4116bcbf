#pragma once

#include <span>
#include <vector>

#include "reconn/jet.hpp"
#include "reconn/rng.hpp"

namespace reconn {

struct InvalidShape : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Activation { Tanh, Relu };

// Fully-connected feed-forward network evaluated on spatial jets. Hidden
// layers apply the activation componentwise; the last layer is the identity.
// Parameters occupy the contiguous slice [param_offset, param_offset +
// param_count) of the owning field's flat parameter vector, layer by layer as
// row-major weight matrix followed by bias.
class Mlp {
 public:
  Mlp() = default;
  Mlp(std::vector<int> sizes, Activation act, std::size_t param_offset);

  static std::size_t param_count_for(std::span<const int> sizes);
  std::size_t param_count() const { return n_params_; }
  std::size_t param_offset() const { return offset_; }
  const std::vector<int>& sizes() const { return sizes_; }
  Activation activation() const { return act_; }
  int in_arity() const { return sizes_.front(); }
  int out_arity() const { return sizes_.back(); }

  // Glorot-uniform weights, zero biases; draw order is fixed so a seed pins
  // the whole network.
  void init_glorot(std::span<double> params, Rng& rng) const;

  void forward(ad::Tape& tape, std::span<const ad::SpatialJet> in,
               std::span<ad::SpatialJet> out) const;

 private:
  std::vector<int> sizes_;
  Activation act_ = Activation::Tanh;
  std::size_t offset_ = 0;
  std::size_t n_params_ = 0;
};

}  // namespace reconn
