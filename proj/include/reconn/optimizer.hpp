#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace reconn {

struct ShapeMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Plateau at lr_initial for the first half of training, then exponential
// decay reaching lr_final exactly at the last iteration.
struct LrSchedule {
  std::size_t total_iterations = 1;
  double lr_initial = 1e-3;
  double lr_final = 1e-6;

  double at(std::size_t iter) const {
    const double half = total_iterations / 2.0;
    if (static_cast<double>(iter) <= half) return lr_initial;
    const double t = (static_cast<double>(iter) - half) / (total_iterations - half);
    return lr_initial * std::pow(lr_final / lr_initial, t);
  }
};

// Bias-corrected Adam with the standard (0.9, 0.999, 1e-8) defaults.
class Adam {
 public:
  explicit Adam(std::size_t n, double beta1 = 0.9, double beta2 = 0.999,
                double eps = 1e-8)
      : m_(n, 0.0), v_(n, 0.0), beta1_(beta1), beta2_(beta2), eps_(eps) {}

  void step(std::span<double> params, std::span<const double> grad, double lr) {
    if (params.size() != m_.size() || grad.size() != m_.size())
      throw ShapeMismatch("parameter/gradient length mismatch");
    ++t_;
    b1t_ *= beta1_;
    b2t_ *= beta2_;
    const double c1 = 1.0 / (1.0 - b1t_);
    const double c2 = 1.0 / (1.0 - b2t_);
    for (std::size_t i = 0; i < m_.size(); ++i) {
      m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grad[i];
      v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grad[i] * grad[i];
      params[i] -= lr * (m_[i] * c1) / (std::sqrt(v_[i] * c2) + eps_);
    }
  }

  std::size_t step_count() const { return t_; }

 private:
  std::vector<double> m_, v_;
  double beta1_, beta2_, eps_;
  std::size_t t_ = 0;
  double b1t_ = 1.0, b2t_ = 1.0;
};

}  // namespace reconn
