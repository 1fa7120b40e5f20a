#pragma once

#include <span>

#include "scenecal/geometry.hpp"

namespace scenecal {

/// Soft "near" predicate over ground-plane distance: an erf-shaped sigmoid
/// that is ~1 at zero distance, exactly 0.5 at the threshold, and decays to
/// 0 beyond it. sharpness_m is the transition width.
struct NearPredicate {
  double threshold_m = 4.0;
  double sharpness_m = 1.0;

  void validate() const;
};

struct ProximityObservation {
  ProximityObservation(const WorldPoint& person_ground,
                       const WorldPoint& vehicle_ground);

  WorldPoint person_ground;
  WorldPoint vehicle_ground;
  double distance_m;
};

/// Planar Euclidean distance; the Z components are ignored.
double ground_distance(const WorldPoint& a, const WorldPoint& b);

/// P(near | d) = (1 - erf((d - threshold) / (sharpness * sqrt(2)))) / 2.
/// Strictly decreasing in d; throws InputError for a negative distance.
double p_near(const NearPredicate& predicate, double distance_m);

/// Product of the given probabilities; the empty product is 1. Each factor
/// must lie in [0, 1].
double composite_probability(std::span<const double> factors);

}  // namespace scenecal
