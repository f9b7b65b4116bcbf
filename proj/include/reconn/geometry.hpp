#pragma once

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "reconn/jet.hpp"
#include "reconn/rng.hpp"

namespace reconn {

// Closed-form level set describing one interface as its zero set. The
// gradient never vanishes on the zero set for any of the supported kinds.
struct LevelSet {
  enum class Kind { Circle, LineX1, LineX2, Point1D };

  Kind kind = Kind::Circle;
  double circle_c = 0.25;       // Circle: |x|^2 - circle_c
  double center = M_PI / 2.0;   // Point1D: (x - center) * scale
  double scale = 0.5;

  static LevelSet circle(double c) { return {Kind::Circle, c, 0.0, 0.0}; }
  static LevelSet line_x1() { return {Kind::LineX1, 0.0, 0.0, 0.0}; }
  static LevelSet line_x2() { return {Kind::LineX2, 0.0, 0.0, 0.0}; }
  static LevelSet point_1d(double center, double scale) {
    return {Kind::Point1D, 0.0, center, scale};
  }

  double value(std::span<const double> x) const;
  std::array<double, 2> gradient(std::span<const double> x) const;
  double grad_norm(std::span<const double> x) const;
  // Unit normal pointing toward {phi > 0}.
  std::array<double, 2> unit_normal(std::span<const double> x) const;
  ad::SpatialJet eval_jet(std::span<const ad::SpatialJet> x) const;

  static const char* kind_name(Kind k);
  static Kind kind_from_name(const std::string& name);
};

// C2 cutoff: 1 for r <= delta1, 0 for r >= delta2, quintic smoothstep
// eta0(t) = -6t^5 + 15t^4 - 10t^3 + 1 in between.
struct Cutoff {
  double delta1 = 0.5;
  double delta2 = 0.9;

  struct Values {
    double v, d1, d2;  // eta, eta', eta''
  };
  static Values eta0(double t);
  Values eval(double r) const;
  ad::SpatialJet eval_jet(const ad::SpatialJet& r) const;
};

// Weight functions damping the non-integrable residual near a singular point.
enum class WeightKind { LShape, MatArea, MatLine };
double weight_omega(WeightKind kind, std::span<const double> x);

struct PolarJets {
  ad::SpatialJet r;
  std::array<ad::SpatialJet, 2> xhat;
};

// r = |x - center| and the unit direction, as constant jets with exact
// first and second spatial derivatives. Throws within 1e-12 of the center.
PolarJets polar_jets(std::span<const double> x, std::array<double, 2> center);

struct BoundarySegment {
  std::array<double, 2> a, b;
  double length() const {
    return std::hypot(b[0] - a[0], b[1] - a[1]);
  }
};

struct Domain {
  enum class Kind { Interval, Square, LShape };
  Kind kind = Kind::Square;

  static Domain interval() { return {Kind::Interval}; }
  static Domain square() { return {Kind::Square}; }
  static Domain lshape() { return {Kind::LShape}; }

  int dim() const { return kind == Kind::Interval ? 1 : 2; }
  bool contains(std::span<const double> x) const;
  // Axis-aligned boundary segments partitioning the boundary (2D only).
  std::vector<BoundarySegment> boundary_segments() const;
};

struct SampleRegion {
  enum class Type { Interior, Interface, Boundary };
  Type type = Type::Interior;
  int interface_index = 0;

  static SampleRegion interior() { return {Type::Interior, 0}; }
  static SampleRegion interface(int p) { return {Type::Interface, p}; }
  static SampleRegion boundary() { return {Type::Boundary, 0}; }
};

// Uniform points on the region (area/arc-length uniform). Stratified mode
// splits n equally over quadrants, half-chords or boundary segments.
std::vector<std::array<double, 2>> sample(const Domain& domain,
                                          std::span<const LevelSet> interfaces,
                                          SampleRegion region, std::size_t n,
                                          Rng& rng, bool stratified = false);

}  // namespace reconn
