#include "scenecal/proximity.hpp"

#include <cmath>

#include "scenecal/mathfn.hpp"

namespace scenecal {

namespace {
constexpr double kSqrt2 = 1.4142135623730950488;
}

void NearPredicate::validate() const {
  if (!(threshold_m > 0.0)) throw InputError("near threshold must be positive");
  if (!(sharpness_m > 0.0)) throw InputError("near sharpness must be positive");
}

ProximityObservation::ProximityObservation(const WorldPoint& person,
                                           const WorldPoint& vehicle)
    : person_ground(person),
      vehicle_ground(vehicle),
      distance_m(ground_distance(person, vehicle)) {}

double ground_distance(const WorldPoint& a, const WorldPoint& b) {
  if (!std::isfinite(a.x) || !std::isfinite(a.y) || !std::isfinite(b.x) ||
      !std::isfinite(b.y))
    throw InputError("ground distance requires finite coordinates");
  return std::hypot(a.x - b.x, a.y - b.y);
}

double p_near(const NearPredicate& predicate, double distance_m) {
  predicate.validate();
  if (!(distance_m >= 0.0))
    throw InputError("distance must be non-negative");
  const double z =
      (distance_m - predicate.threshold_m) / (predicate.sharpness_m * kSqrt2);
  return 0.5 * erfc_portable(z);
}

double composite_probability(std::span<const double> factors) {
  double product = 1.0;
  for (double f : factors) {
    if (!(f >= 0.0) || !(f <= 1.0))
      throw InputError("probability factors must lie in [0, 1]");
    product *= f;
  }
  return product;
}

}  // namespace scenecal
