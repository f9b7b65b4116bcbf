#pragma once

#include <array>
#include <limits>

#include "reconn/tape.hpp"

namespace reconn::ad {

// Value, spatial gradient and spatial Hessian of a scalar field at a point.
// Every component is a TapeScalar, so each of the six numbers stays
// differentiable with respect to the trainable parameters. 1D fields simply
// keep the x2-slots at constant zero; constant folding makes that free.
struct SpatialJet {
  std::array<TapeScalar, 6> c{};  // u, ux, uy, uxx, uxy, uyy

  TapeScalar& u() { return c[0]; }
  TapeScalar& ux() { return c[1]; }
  TapeScalar& uy() { return c[2]; }
  TapeScalar& uxx() { return c[3]; }
  TapeScalar& uxy() { return c[4]; }
  TapeScalar& uyy() { return c[5]; }
  const TapeScalar& u() const { return c[0]; }
  const TapeScalar& ux() const { return c[1]; }
  const TapeScalar& uy() const { return c[2]; }
  const TapeScalar& uxx() const { return c[3]; }
  const TapeScalar& uxy() const { return c[4]; }
  const TapeScalar& uyy() const { return c[5]; }

  double value() const { return c[0].value; }
  double grad_x() const { return c[1].value; }
  double grad_y() const { return c[2].value; }
  double laplacian() const { return c[3].value + c[5].value; }
};

inline Tape* tape_of(const SpatialJet& a) {
  for (const auto& s : a.c)
    if (s.tape) return s.tape;
  return nullptr;
}

inline Tape* tape_of(const SpatialJet& a, const SpatialJet& b) {
  Tape* t = tape_of(a);
  return t ? t : tape_of(b);
}

// Order of spatial derivatives to propagate; all-constant expressions are
// free, so they always carry the full jet.
inline int jet_order(Tape* t) { return t ? t->derivative_order() : 2; }

inline TapeScalar jet_nan() {
  return TapeScalar(std::numeric_limits<double>::quiet_NaN());
}

inline SpatialJet jet_const(double v) {
  SpatialJet r;
  r.c.fill(TapeScalar(0.0));
  r.u() = TapeScalar(v);
  return r;
}

// Lifts a spatially-constant scalar (a trainable exponent, say) to a jet.
inline SpatialJet jet_from_scalar(const TapeScalar& s) {
  SpatialJet r;
  r.c.fill(TapeScalar(0.0));
  r.u() = s;
  return r;
}

// Coordinate jets: unit first derivative in their own slot, zero Hessian.
inline SpatialJet jet_coord(double v, int axis) {
  SpatialJet r = jet_const(v);
  r.c[1 + axis] = TapeScalar(1.0);
  return r;
}

inline std::array<SpatialJet, 2> jet_input(double x1, double x2) {
  return {jet_coord(x1, 0), jet_coord(x2, 1)};
}

inline SpatialJet jet_input(double x) { return jet_coord(x, 0); }

// --- arithmetic ----------------------------------------------------------

inline SpatialJet operator+(const SpatialJet& a, const SpatialJet& b) {
  const int ord = jet_order(tape_of(a, b));
  SpatialJet r;
  r.u() = a.u() + b.u();
  for (int k = 1; k < 3; ++k) r.c[k] = ord >= 1 ? a.c[k] + b.c[k] : jet_nan();
  for (int k = 3; k < 6; ++k) r.c[k] = ord >= 2 ? a.c[k] + b.c[k] : jet_nan();
  return r;
}

inline SpatialJet operator-(const SpatialJet& a, const SpatialJet& b) {
  const int ord = jet_order(tape_of(a, b));
  SpatialJet r;
  r.u() = a.u() - b.u();
  for (int k = 1; k < 3; ++k) r.c[k] = ord >= 1 ? a.c[k] - b.c[k] : jet_nan();
  for (int k = 3; k < 6; ++k) r.c[k] = ord >= 2 ? a.c[k] - b.c[k] : jet_nan();
  return r;
}

inline SpatialJet operator-(const SpatialJet& a) {
  const int ord = jet_order(tape_of(a));
  SpatialJet r;
  r.u() = -a.u();
  for (int k = 1; k < 3; ++k) r.c[k] = ord >= 1 ? -a.c[k] : jet_nan();
  for (int k = 3; k < 6; ++k) r.c[k] = ord >= 2 ? -a.c[k] : jet_nan();
  return r;
}

inline SpatialJet operator*(const SpatialJet& a, const SpatialJet& b) {
  Tape* t = tape_of(a, b);
  const int ord = jet_order(t);
  SpatialJet r;
  r.u() = a.u() * b.u();
  if (ord >= 1) {
    const TapeScalar au_bx[2] = {a.ux(), a.u()};
    const TapeScalar bu_bx[2] = {b.u(), b.ux()};
    const TapeScalar au_by[2] = {a.uy(), a.u()};
    const TapeScalar bu_by[2] = {b.u(), b.uy()};
    if (t) {
      r.ux() = t->dot(au_bx, bu_bx);
      r.uy() = t->dot(au_by, bu_by);
    } else {
      r.ux() = a.ux() * b.u() + a.u() * b.ux();
      r.uy() = a.uy() * b.u() + a.u() * b.uy();
    }
  } else {
    r.ux() = r.uy() = jet_nan();
  }
  if (ord >= 2) {
    const TapeScalar axx[4] = {a.uxx(), a.ux(), a.ux(), a.u()};
    const TapeScalar bxx[4] = {b.u(), b.ux(), b.ux(), b.uxx()};
    const TapeScalar axy[4] = {a.uxy(), a.ux(), a.uy(), a.u()};
    const TapeScalar bxy[4] = {b.u(), b.uy(), b.ux(), b.uxy()};
    const TapeScalar ayy[4] = {a.uyy(), a.uy(), a.uy(), a.u()};
    const TapeScalar byy[4] = {b.u(), b.uy(), b.uy(), b.uyy()};
    if (t) {
      r.uxx() = t->dot(axx, bxx);
      r.uxy() = t->dot(axy, bxy);
      r.uyy() = t->dot(ayy, byy);
    } else {
      r.uxx() = a.uxx() * b.u() + 2.0 * a.ux().value * b.ux().value + a.u() * b.uxx();
      r.uxy() = a.uxy() * b.u() + a.ux() * b.uy() + a.uy() * b.ux() + a.u() * b.uxy();
      r.uyy() = a.uyy() * b.u() + 2.0 * a.uy().value * b.uy().value + a.u() * b.uyy();
    }
  } else {
    r.uxx() = r.uxy() = r.uyy() = jet_nan();
  }
  return r;
}

inline SpatialJet operator*(const SpatialJet& a, double s) {
  const int ord = jet_order(tape_of(a));
  SpatialJet r;
  const TapeScalar sc(s);
  r.u() = a.u() * sc;
  for (int k = 1; k < 3; ++k) r.c[k] = ord >= 1 ? a.c[k] * sc : jet_nan();
  for (int k = 3; k < 6; ++k) r.c[k] = ord >= 2 ? a.c[k] * sc : jet_nan();
  return r;
}

inline SpatialJet operator*(double s, const SpatialJet& a) { return a * s; }

inline SpatialJet operator+(const SpatialJet& a, double s) {
  SpatialJet r = a;
  r.u() = a.u() + TapeScalar(s);
  return r;
}

inline SpatialJet operator-(const SpatialJet& a, double s) { return a + (-s); }

// f composed with a scalar function g given by value and derivatives at f.u.
inline SpatialJet jet_chain(const SpatialJet& f, const TapeScalar& g,
                            const TapeScalar& g1, const TapeScalar& g2, Tape* t,
                            int ord) {
  SpatialJet r;
  r.u() = g;
  if (ord >= 1) {
    r.ux() = g1 * f.ux();
    r.uy() = g1 * f.uy();
  } else {
    r.ux() = r.uy() = jet_nan();
  }
  if (ord >= 2) {
    const TapeScalar xx = f.ux() * f.ux();
    const TapeScalar xy = f.ux() * f.uy();
    const TapeScalar yy = f.uy() * f.uy();
    const TapeScalar gs[2] = {g2, g1};
    const TapeScalar px[2] = {xx, f.uxx()};
    const TapeScalar py[2] = {xy, f.uxy()};
    const TapeScalar pyy[2] = {yy, f.uyy()};
    if (t) {
      r.uxx() = t->dot(gs, px);
      r.uxy() = t->dot(gs, py);
      r.uyy() = t->dot(gs, pyy);
    } else {
      r.uxx() = g2 * xx + g1 * f.uxx();
      r.uxy() = g2 * xy + g1 * f.uxy();
      r.uyy() = g2 * yy + g1 * f.uyy();
    }
  } else {
    r.uxx() = r.uxy() = r.uyy() = jet_nan();
  }
  return r;
}

inline SpatialJet tanh(const SpatialJet& f) {
  Tape* t = tape_of(f);
  const int ord = jet_order(t);
  const TapeScalar v = tanh(f.u());
  TapeScalar g1, g2;
  if (ord >= 1) g1 = TapeScalar(1.0) - v * v;
  if (ord >= 2) g2 = TapeScalar(-2.0) * (v * g1);
  return jet_chain(f, v, g1, g2, t, ord);
}

// ReLU jets define the second derivative as zero everywhere; see the network
// notes for why this activation is kept only for the comparison experiment.
inline SpatialJet relu(const SpatialJet& f) {
  Tape* t = tape_of(f);
  const int ord = jet_order(t);
  const double s = f.u().value > 0.0 ? 1.0 : 0.0;
  return jet_chain(f, relu(f.u()), TapeScalar(s), TapeScalar(0.0), t, ord);
}

inline SpatialJet sin(const SpatialJet& f) {
  Tape* t = tape_of(f);
  const int ord = jet_order(t);
  const TapeScalar v = sin(f.u());
  TapeScalar g1, g2;
  if (ord >= 1) g1 = cos(f.u());
  if (ord >= 2) g2 = -v;
  return jet_chain(f, v, g1, g2, t, ord);
}

inline SpatialJet cos(const SpatialJet& f) {
  Tape* t = tape_of(f);
  const int ord = jet_order(t);
  const TapeScalar v = cos(f.u());
  TapeScalar g1, g2;
  if (ord >= 1) g1 = -sin(f.u());
  if (ord >= 2) g2 = -v;
  return jet_chain(f, v, g1, g2, t, ord);
}

inline SpatialJet exp(const SpatialJet& f) {
  Tape* t = tape_of(f);
  const int ord = jet_order(t);
  const TapeScalar v = exp(f.u());
  return jet_chain(f, v, v, v, t, ord);
}

inline SpatialJet log(const SpatialJet& f) {
  Tape* t = tape_of(f);
  const int ord = jet_order(t);
  const TapeScalar v = log(f.u());
  TapeScalar g1, g2;
  if (ord >= 1) g1 = TapeScalar(1.0) / f.u();
  if (ord >= 2) g2 = -(g1 * g1);
  return jet_chain(f, v, g1, g2, t, ord);
}

inline SpatialJet sqrt(const SpatialJet& f) {
  Tape* t = tape_of(f);
  const int ord = jet_order(t);
  const TapeScalar v = sqrt(f.u());
  TapeScalar g1, g2;
  if (ord >= 1) g1 = TapeScalar(0.5) / v;
  if (ord >= 2) g2 = TapeScalar(-0.5) * (g1 / f.u());
  return jet_chain(f, v, g1, g2, t, ord);
}

inline SpatialJet pow_const(const SpatialJet& f, double c) {
  Tape* t = tape_of(f);
  const int ord = jet_order(t);
  const TapeScalar v = pow_const(f.u(), c);
  TapeScalar g1, g2;
  if (ord >= 1) g1 = TapeScalar(c) * (v / f.u());
  if (ord >= 2) g2 = TapeScalar(c - 1.0) * (g1 / f.u());
  return jet_chain(f, v, g1, g2, t, ord);
}

inline SpatialJet operator/(const SpatialJet& a, const SpatialJet& b) {
  Tape* t = tape_of(b);
  const int ord = jet_order(t);
  if (b.u().value == 0.0) throw DomainError("jet division by zero");
  const TapeScalar v = TapeScalar(1.0) / b.u();
  TapeScalar g1, g2;
  if (ord >= 1) g1 = -(v * v);
  if (ord >= 2) g2 = TapeScalar(-2.0) * (g1 * v);
  return a * jet_chain(b, v, g1, g2, t, ord);
}

inline SpatialJet atan(const SpatialJet& f) {
  Tape* t = tape_of(f);
  const int ord = jet_order(t);
  const TapeScalar v = atan(f.u());
  TapeScalar g1, g2;
  if (ord >= 1) g1 = TapeScalar(1.0) / (TapeScalar(1.0) + f.u() * f.u());
  if (ord >= 2) g2 = TapeScalar(-2.0) * (f.u() * (g1 * g1));
  return jet_chain(f, v, g1, g2, t, ord);
}

SpatialJet atan2(const SpatialJet& y, const SpatialJet& x);

// |f| resolved with an explicit sign; sign 0 collapses the jet to zero.
inline SpatialJet abs_signed(const SpatialJet& f, double sign) {
  return f * sign;
}

// r^lambda as exp(lambda*log r) so the exponent stays trainable. Guarded away
// from the singular center; the cutoff makes the sub-threshold set negligible.
inline SpatialJet pow_param(const SpatialJet& r, const TapeScalar& lambda) {
  if (r.u().value < 1e-12) throw DomainError("pow_param base below guard 1e-12");
  return exp(jet_from_scalar(lambda) * log(r));
}

}  // namespace reconn::ad
