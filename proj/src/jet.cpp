#include "reconn/jet.hpp"

namespace reconn::ad {

// Standard atan2 in (-pi, pi] built from branch-selected atan so the jet
// carries exact first and second derivatives away from the origin.
SpatialJet atan2(const SpatialJet& y, const SpatialJet& x) {
  const double xv = x.u().value;
  const double yv = y.u().value;
  if (xv == 0.0 && yv == 0.0) throw DomainError("atan2 at the origin");
  if (std::abs(xv) >= std::abs(yv)) {
    double shift = 0.0;
    if (xv < 0.0) shift = yv >= 0.0 ? M_PI : -M_PI;
    return atan(y / x) + shift;
  }
  const double shift = yv > 0.0 ? M_PI / 2 : -M_PI / 2;
  return -atan(x / y) + shift;
}

}  // namespace reconn::ad
