#include "reconn/geometry.hpp"

#include <stdexcept>

namespace reconn {

using ad::DomainError;
using ad::SpatialJet;

double LevelSet::value(std::span<const double> x) const {
  switch (kind) {
    case Kind::Circle: return x[0] * x[0] + x[1] * x[1] - circle_c;
    case Kind::LineX1: return x[0];
    case Kind::LineX2: return x[1];
    case Kind::Point1D: return (x[0] - center) * scale;
  }
  return 0.0;
}

std::array<double, 2> LevelSet::gradient(std::span<const double> x) const {
  switch (kind) {
    case Kind::Circle: return {2.0 * x[0], 2.0 * x[1]};
    case Kind::LineX1: return {1.0, 0.0};
    case Kind::LineX2: return {0.0, 1.0};
    case Kind::Point1D: return {scale, 0.0};
  }
  return {0.0, 0.0};
}

double LevelSet::grad_norm(std::span<const double> x) const {
  const auto g = gradient(x);
  return std::hypot(g[0], g[1]);
}

std::array<double, 2> LevelSet::unit_normal(std::span<const double> x) const {
  const auto g = gradient(x);
  const double n = std::hypot(g[0], g[1]);
  if (n == 0.0) throw DomainError("level-set gradient vanishes");
  return {g[0] / n, g[1] / n};
}

SpatialJet LevelSet::eval_jet(std::span<const SpatialJet> x) const {
  switch (kind) {
    case Kind::Circle:
      return x[0] * x[0] + x[1] * x[1] - circle_c;
    case Kind::LineX1: return x[0];
    case Kind::LineX2: return x[1];
    case Kind::Point1D: return (x[0] - center) * scale;
  }
  return ad::jet_const(0.0);
}

const char* LevelSet::kind_name(Kind k) {
  switch (k) {
    case Kind::Circle: return "circle";
    case Kind::LineX1: return "line-x1";
    case Kind::LineX2: return "line-x2";
    case Kind::Point1D: return "point-1d";
  }
  return "?";
}

LevelSet::Kind LevelSet::kind_from_name(const std::string& name) {
  if (name == "circle") return Kind::Circle;
  if (name == "line-x1") return Kind::LineX1;
  if (name == "line-x2") return Kind::LineX2;
  if (name == "point-1d") return Kind::Point1D;
  throw std::invalid_argument("unknown level-set kind: " + name);
}

Cutoff::Values Cutoff::eta0(double t) {
  if (t <= 0.0) return {1.0, 0.0, 0.0};
  if (t >= 1.0) return {0.0, 0.0, 0.0};
  const double t2 = t * t, t3 = t2 * t;
  return {-6.0 * t3 * t2 + 15.0 * t2 * t2 - 10.0 * t3 + 1.0,
          -30.0 * t2 * t2 + 60.0 * t3 - 30.0 * t2,
          -120.0 * t3 + 180.0 * t2 - 60.0 * t};
}

Cutoff::Values Cutoff::eval(double r) const {
  const double s = 1.0 / (delta2 - delta1);
  Values v = eta0((r - delta1) * s);
  v.d1 *= s;
  v.d2 *= s * s;
  return v;
}

SpatialJet Cutoff::eval_jet(const SpatialJet& r) const {
  if (!r.u().is_const())
    throw std::logic_error("cutoff input must not depend on parameters");
  const Values v = eval(r.u().value);
  return ad::jet_chain(r, v.v, v.d1, v.d2, nullptr, 2);
}

double weight_omega(WeightKind kind, std::span<const double> x) {
  const double r2 = x[0] * x[0] + x[1] * x[1];
  switch (kind) {
    case WeightKind::LShape:
    case WeightKind::MatArea: return std::min(40.0 * r2, 1.0);
    case WeightKind::MatLine: return std::min(40.0 * std::sqrt(r2), 1.0);
  }
  return 1.0;
}

PolarJets polar_jets(std::span<const double> x, std::array<double, 2> center) {
  const double dx = x[0] - center[0], dy = x[1] - center[1];
  if (std::hypot(dx, dy) < 1e-12) throw DomainError("polar transform at center");
  const SpatialJet d1 = ad::jet_coord(dx, 0);
  const SpatialJet d2 = ad::jet_coord(dy, 1);
  PolarJets p;
  p.r = ad::sqrt(d1 * d1 + d2 * d2);
  p.xhat = {d1 / p.r, d2 / p.r};
  return p;
}

bool Domain::contains(std::span<const double> x) const {
  switch (kind) {
    case Kind::Interval: return x[0] > 0.0 && x[0] < M_PI;
    case Kind::Square:
      return x[0] > -1.0 && x[0] < 1.0 && x[1] > -1.0 && x[1] < 1.0;
    case Kind::LShape:
      return x[0] > -1.0 && x[0] < 1.0 && x[1] > -1.0 && x[1] < 1.0 &&
             !(x[0] <= 0.0 && x[1] <= 0.0);
  }
  return false;
}

std::vector<BoundarySegment> Domain::boundary_segments() const {
  switch (kind) {
    case Kind::Interval:
      return {};
    case Kind::Square:
      return {{{1, -1}, {1, 1}},
              {{1, 1}, {-1, 1}},
              {{-1, 1}, {-1, -1}},
              {{-1, -1}, {1, -1}}};
    case Kind::LShape:
      // counterclockwise from the re-entrant corner
      return {{{0, -1}, {1, -1}},
              {{1, -1}, {1, 1}},
              {{1, 1}, {-1, 1}},
              {{-1, 1}, {-1, 0}},
              {{-1, 0}, {0, 0}},
              {{0, 0}, {0, -1}}};
  }
  return {};
}

namespace {

std::array<double, 2> on_segment(const BoundarySegment& s, double t) {
  return {s.a[0] + t * (s.b[0] - s.a[0]), s.a[1] + t * (s.b[1] - s.a[1])};
}

std::vector<std::array<double, 2>> sample_boundary(const Domain& domain,
                                                   std::size_t n, Rng& rng,
                                                   bool stratified) {
  std::vector<std::array<double, 2>> pts;
  pts.reserve(n);
  if (domain.kind == Domain::Kind::Interval) {
    for (std::size_t i = 0; i < n; ++i) pts.push_back({i % 2 == 0 ? 0.0 : M_PI, 0.0});
    return pts;
  }
  auto segs = domain.boundary_segments();
  if (stratified && domain.kind == Domain::Kind::Square) {
    // split each side at its midpoint so quadrants get equal counts
    std::vector<BoundarySegment> halves;
    for (const auto& s : segs) {
      const std::array<double, 2> m = {0.5 * (s.a[0] + s.b[0]), 0.5 * (s.a[1] + s.b[1])};
      halves.push_back({s.a, m});
      halves.push_back({m, s.b});
    }
    segs = halves;
  }
  if (stratified) {
    for (std::size_t s = 0; s < segs.size(); ++s) {
      std::size_t m = n / segs.size() + (s < n % segs.size() ? 1 : 0);
      for (std::size_t i = 0; i < m; ++i) pts.push_back(on_segment(segs[s], rng.uniform()));
    }
    return pts;
  }
  double total = 0.0;
  for (const auto& s : segs) total += s.length();
  for (std::size_t i = 0; i < n; ++i) {
    double t = rng.uniform() * total;
    for (const auto& s : segs) {
      if (t <= s.length() || &s == &segs.back()) {
        pts.push_back(on_segment(s, std::min(t / s.length(), 1.0)));
        break;
      }
      t -= s.length();
    }
  }
  return pts;
}

std::vector<std::array<double, 2>> sample_interior(const Domain& domain,
                                                   std::size_t n, Rng& rng,
                                                   bool stratified) {
  std::vector<std::array<double, 2>> pts;
  pts.reserve(n);
  switch (domain.kind) {
    case Domain::Kind::Interval:
      for (std::size_t i = 0; i < n; ++i) pts.push_back({M_PI * rng.uniform(), 0.0});
      break;
    case Domain::Kind::Square:
      if (stratified) {
        static constexpr double sx[4] = {1, -1, -1, 1};
        static constexpr double sy[4] = {1, 1, -1, -1};
        for (int q = 0; q < 4; ++q) {
          std::size_t m = n / 4 + (static_cast<std::size_t>(q) < n % 4 ? 1 : 0);
          for (std::size_t i = 0; i < m; ++i)
            pts.push_back({sx[q] * rng.uniform(), sy[q] * rng.uniform()});
        }
      } else {
        for (std::size_t i = 0; i < n; ++i)
          pts.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1)});
      }
      break;
    case Domain::Kind::LShape:
      while (pts.size() < n) {
        std::array<double, 2> x = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
        if (domain.contains(x)) pts.push_back(x);
      }
      break;
  }
  return pts;
}

std::vector<std::array<double, 2>> sample_interface(const LevelSet& ls,
                                                    std::size_t n, Rng& rng,
                                                    bool stratified) {
  std::vector<std::array<double, 2>> pts;
  pts.reserve(n);
  switch (ls.kind) {
    case LevelSet::Kind::Circle: {
      const double r = std::sqrt(ls.circle_c);
      if (stratified) {
        for (int q = 0; q < 4; ++q) {
          std::size_t m = n / 4 + (static_cast<std::size_t>(q) < n % 4 ? 1 : 0);
          for (std::size_t i = 0; i < m; ++i) {
            const double th = (q + rng.uniform()) * M_PI / 2;
            pts.push_back({r * std::cos(th), r * std::sin(th)});
          }
        }
      } else {
        for (std::size_t i = 0; i < n; ++i) {
          const double th = 2.0 * M_PI * rng.uniform();
          pts.push_back({r * std::cos(th), r * std::sin(th)});
        }
      }
      break;
    }
    case LevelSet::Kind::LineX1:
    case LevelSet::Kind::LineX2: {
      // full chord through the square, keeping clear of the vertex at 0
      const bool vertical = ls.kind == LevelSet::Kind::LineX1;
      auto draw = [&](double lo, double hi) {
        double t;
        do {
          t = rng.uniform(lo, hi);
        } while (std::abs(t) < 1e-12);
        return vertical ? std::array<double, 2>{0.0, t} : std::array<double, 2>{t, 0.0};
      };
      if (stratified) {
        const std::size_t half = n / 2;
        for (std::size_t i = 0; i < half; ++i) pts.push_back(draw(0, 1));
        for (std::size_t i = half; i < n; ++i) pts.push_back(draw(-1, 0));
      } else {
        for (std::size_t i = 0; i < n; ++i) pts.push_back(draw(-1, 1));
      }
      break;
    }
    case LevelSet::Kind::Point1D:
      for (std::size_t i = 0; i < n; ++i) pts.push_back({ls.center, 0.0});
      break;
  }
  return pts;
}

}  // namespace

std::vector<std::array<double, 2>> sample(const Domain& domain,
                                          std::span<const LevelSet> interfaces,
                                          SampleRegion region, std::size_t n,
                                          Rng& rng, bool stratified) {
  if (n < 1) throw std::invalid_argument("sample size must be >= 1");
  switch (region.type) {
    case SampleRegion::Type::Interior:
      return sample_interior(domain, n, rng, stratified);
    case SampleRegion::Type::Interface:
      return sample_interface(interfaces[region.interface_index], n, rng, stratified);
    case SampleRegion::Type::Boundary:
      return sample_boundary(domain, n, rng, stratified);
  }
  return {};
}

}  // namespace reconn
