#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace reconn::ad {

class Tape;

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A scalar living on a reverse-mode tape. node < 0 marks a constant that is
// not recorded anywhere; constants carry no tape pointer and fold eagerly.
struct TapeScalar {
  Tape* tape = nullptr;
  std::int32_t node = -1;
  double value = 0.0;

  TapeScalar() = default;
  TapeScalar(double v) : value(v) {}  // NOLINT: implicit constant lift
  TapeScalar(Tape* t, std::int32_t n, double v) : tape(t), node(n), value(v) {}
  bool is_const() const { return node < 0; }
};

// Reverse-mode tape over the trainable parameters. Nodes are stored in
// topological order: parameter leaves occupy [0, n_params), everything
// recorded afterwards only references earlier nodes. The arena is rewound
// between evaluations instead of reallocated.
//
// derivative_order gates how many spatial-jet slots downstream jet ops
// compute (0: value, 1: +gradient, 2: +Hessian). Slots above the order are
// poisoned with NaN constants so accidental reads surface loudly.
class Tape {
 public:
  explicit Tape(std::size_t n_params) : n_params_(n_params) {
    nodes_.resize(n_params_, Node{0, 0});
  }

  void set_params(const double* values) { params_ = values; }
  const double* params() const { return params_; }
  std::size_t n_params() const { return n_params_; }

  // Drops every recorded node except the parameter leaves.
  void rewind() {
    nodes_.resize(n_params_);
    edges_.clear();
  }

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  int derivative_order() const { return order_; }
  void set_derivative_order(int order) { order_ = order; }

  TapeScalar param(std::size_t i) {
    return TapeScalar(this, static_cast<std::int32_t>(i), params_[i]);
  }

  static TapeScalar constant(double v) { return TapeScalar(v); }

  // --- recording primitives -------------------------------------------------

  TapeScalar unary(double value, const TapeScalar& a, double da) {
    if (a.is_const()) return TapeScalar(value);
    const auto begin = static_cast<std::uint32_t>(edges_.size());
    if (da != 0.0) edges_.push_back({a.node, da});
    return finish(value, begin);
  }

  TapeScalar binary(double value, const TapeScalar& a, double da,
                    const TapeScalar& b, double db) {
    if (a.is_const() && b.is_const()) return TapeScalar(value);
    const auto begin = static_cast<std::uint32_t>(edges_.size());
    if (!a.is_const() && da != 0.0) edges_.push_back({a.node, da});
    if (!b.is_const() && db != 0.0) edges_.push_back({b.node, db});
    return finish(value, begin);
  }

  // value = sum_i a_i * b_i, edges to every non-constant operand.
  TapeScalar dot(std::span<const TapeScalar> a, std::span<const TapeScalar> b) {
    double value = 0.0;
    bool all_const = true;
    for (std::size_t i = 0; i < a.size(); ++i) {
      value += a[i].value * b[i].value;
      all_const = all_const && a[i].is_const() && b[i].is_const();
    }
    if (all_const) return TapeScalar(value);
    const auto begin = static_cast<std::uint32_t>(edges_.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!a[i].is_const() && b[i].value != 0.0) edges_.push_back({a[i].node, b[i].value});
      if (!b[i].is_const() && a[i].value != 0.0) edges_.push_back({b[i].node, a[i].value});
    }
    return finish(value, begin);
  }

  // Affine combination with a contiguous parameter row: value = sum_i
  // params[w_begin+i]*get(i) (+ params[bias]). The weight ids double as node
  // ids because leaves are seeded first.
  template <class Getter>
  TapeScalar affine_row(std::size_t w_begin, std::size_t n, Getter&& get,
                        std::int64_t bias) {
    double value = bias >= 0 ? params_[bias] : 0.0;
    const auto begin = static_cast<std::uint32_t>(edges_.size());
    for (std::size_t i = 0; i < n; ++i) {
      const TapeScalar& x = get(i);
      const double w = params_[w_begin + i];
      value += w * x.value;
      if (x.value != 0.0)
        edges_.push_back({static_cast<std::int32_t>(w_begin + i), x.value});
      if (!x.is_const() && w != 0.0) edges_.push_back({x.node, w});
    }
    if (bias >= 0) edges_.push_back({static_cast<std::int32_t>(bias), 1.0});
    return finish(value, begin);
  }

  // Accumulates d(root)/d(param) * seed into grad (grad is NOT zeroed here).
  void backward(const TapeScalar& root, double seed, std::span<double> grad);

 private:
  struct Node {
    std::uint32_t begin;
    std::uint32_t end;
  };
  struct Edge {
    std::int32_t parent;
    double partial;
  };

  TapeScalar finish(double value, std::uint32_t edge_begin) {
    nodes_.push_back({edge_begin, static_cast<std::uint32_t>(edges_.size())});
    return TapeScalar(this, static_cast<std::int32_t>(nodes_.size() - 1), value);
  }

  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<double> adjoint_;
  const double* params_ = nullptr;
  std::size_t n_params_;
  int order_ = 2;
};

// --- scalar operations -------------------------------------------------------

inline Tape* owner(const TapeScalar& a, const TapeScalar& b) {
  return a.tape ? a.tape : b.tape;
}

inline TapeScalar operator+(const TapeScalar& a, const TapeScalar& b) {
  if (a.is_const() && a.value == 0.0) return b;
  if (b.is_const() && b.value == 0.0) return a;
  Tape* t = owner(a, b);
  if (!t) return TapeScalar(a.value + b.value);
  return t->binary(a.value + b.value, a, 1.0, b, 1.0);
}

inline TapeScalar operator-(const TapeScalar& a, const TapeScalar& b) {
  if (b.is_const() && b.value == 0.0) return a;
  Tape* t = owner(a, b);
  if (!t) return TapeScalar(a.value - b.value);
  return t->binary(a.value - b.value, a, 1.0, b, -1.0);
}

inline TapeScalar operator-(const TapeScalar& a) {
  if (a.is_const()) return TapeScalar(-a.value);
  return a.tape->unary(-a.value, a, -1.0);
}

inline TapeScalar operator*(const TapeScalar& a, const TapeScalar& b) {
  if (a.is_const() && a.value == 0.0) return TapeScalar(0.0);
  if (b.is_const() && b.value == 0.0) return TapeScalar(0.0);
  if (a.is_const() && a.value == 1.0) return b;
  if (b.is_const() && b.value == 1.0) return a;
  Tape* t = owner(a, b);
  if (!t) return TapeScalar(a.value * b.value);
  return t->binary(a.value * b.value, a, b.value, b, a.value);
}

inline TapeScalar operator/(const TapeScalar& a, const TapeScalar& b) {
  if (b.value == 0.0) throw DomainError("division by zero");
  if (b.is_const()) return a * TapeScalar(1.0 / b.value);
  Tape* t = owner(a, b);
  const double inv = 1.0 / b.value;
  return t->binary(a.value * inv, a, inv, b, -a.value * inv * inv);
}

inline TapeScalar& operator+=(TapeScalar& a, const TapeScalar& b) { return a = a + b; }

inline TapeScalar square(const TapeScalar& a) { return a * a; }

inline TapeScalar tanh(const TapeScalar& a) {
  const double t = std::tanh(a.value);
  if (a.is_const()) return TapeScalar(t);
  return a.tape->unary(t, a, 1.0 - t * t);
}

inline TapeScalar sin(const TapeScalar& a) {
  if (a.is_const()) return TapeScalar(std::sin(a.value));
  return a.tape->unary(std::sin(a.value), a, std::cos(a.value));
}

inline TapeScalar cos(const TapeScalar& a) {
  if (a.is_const()) return TapeScalar(std::cos(a.value));
  return a.tape->unary(std::cos(a.value), a, -std::sin(a.value));
}

inline TapeScalar exp(const TapeScalar& a) {
  const double e = std::exp(a.value);
  if (a.is_const()) return TapeScalar(e);
  return a.tape->unary(e, a, e);
}

inline TapeScalar log(const TapeScalar& a) {
  if (a.value <= 0.0) throw DomainError("log of non-positive value");
  if (a.is_const()) return TapeScalar(std::log(a.value));
  return a.tape->unary(std::log(a.value), a, 1.0 / a.value);
}

inline TapeScalar sqrt(const TapeScalar& a) {
  if (a.value < 0.0) throw DomainError("sqrt of negative value");
  const double s = std::sqrt(a.value);
  if (a.is_const()) return TapeScalar(s);
  return a.tape->unary(s, a, 0.5 / s);
}

inline TapeScalar pow_const(const TapeScalar& a, double c) {
  if (a.value <= 0.0) throw DomainError("pow of non-positive base");
  const double p = std::pow(a.value, c);
  if (a.is_const()) return TapeScalar(p);
  return a.tape->unary(p, a, c * p / a.value);
}

inline TapeScalar atan(const TapeScalar& a) {
  const double v = std::atan(a.value);
  if (a.is_const()) return TapeScalar(v);
  return a.tape->unary(v, a, 1.0 / (1.0 + a.value * a.value));
}

inline TapeScalar relu(const TapeScalar& a) {
  const double s = a.value > 0.0 ? 1.0 : 0.0;
  if (a.is_const()) return TapeScalar(s * a.value);
  return a.tape->unary(s * a.value, a, s);
}

// |a| with the sign fixed at record time; sign(0) = 0 by convention, and
// one-sided interface evaluation passes the forced sign explicitly.
inline TapeScalar abs_signed(const TapeScalar& a, double sign) {
  if (a.is_const()) return TapeScalar(sign * a.value);
  return a.tape->unary(sign * a.value, a, sign);
}

inline double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace reconn::ad
