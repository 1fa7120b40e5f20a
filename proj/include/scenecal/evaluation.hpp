#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "scenecal/errors.hpp"

namespace scenecal {

/// One person-vehicle distance measured in the reference frame (gt) and in
/// the aligned estimated frame (est).
struct LabeledPair {
  double gt_distance_m = 0.0;
  double est_distance_m = 0.0;
};

struct LabeledScore {
  bool positive = false;
  /// Larger score = more confident "near". Ranking by -est_distance is
  /// ROC-equivalent to ranking by p_near(est_distance).
  double score = 0.0;
};

struct RocCurve {
  /// (false positive rate, true positive rate), from (0,0) to (1,1).
  std::vector<std::pair<double, double>> points;
  double auc = 0.0;
  int positive_count = 0;
  int negative_count = 0;

  /// CSV with header "fpr,tpr".
  std::string to_csv() const;
};

/// Labels each pair positive when its ground-truth distance is strictly
/// below the threshold, and scores it by the negated estimated distance.
std::vector<LabeledScore> label_pairs(std::span<const LabeledPair> pairs,
                                      double gt_threshold_m);

/// Threshold sweep over the distinct scores (ties grouped) with trapezoidal
/// area. Throws SingleClassError unless both classes are present.
RocCurve roc_auc(std::span<const LabeledScore> labeled);

}  // namespace scenecal
