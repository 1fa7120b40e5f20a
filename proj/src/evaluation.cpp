#include "scenecal/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace scenecal {

std::vector<LabeledScore> label_pairs(std::span<const LabeledPair> pairs,
                                      double gt_threshold_m) {
  if (pairs.empty()) throw InputError("cannot label an empty pair list");
  if (!(gt_threshold_m > 0.0))
    throw InputError("ground-truth threshold must be positive");
  std::vector<LabeledScore> labeled;
  labeled.reserve(pairs.size());
  for (const auto& p : pairs) {
    if (!std::isfinite(p.gt_distance_m) || !std::isfinite(p.est_distance_m) ||
        p.gt_distance_m < 0.0 || p.est_distance_m < 0.0)
      throw InputError("labeled pairs need finite non-negative distances");
    labeled.push_back(
        LabeledScore{p.gt_distance_m < gt_threshold_m, -p.est_distance_m});
  }
  return labeled;
}

RocCurve roc_auc(std::span<const LabeledScore> labeled) {
  if (labeled.empty()) throw InputError("cannot build a ROC from no scores");
  RocCurve curve;
  for (const auto& s : labeled)
    (s.positive ? curve.positive_count : curve.negative_count)++;
  if (curve.positive_count == 0 || curve.negative_count == 0)
    throw SingleClassError(
        "ROC needs both classes; got " + std::to_string(curve.positive_count) +
        " positives and " + std::to_string(curve.negative_count) +
        " negatives");

  std::vector<LabeledScore> sorted(labeled.begin(), labeled.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const LabeledScore& a, const LabeledScore& b) {
                     return a.score > b.score;
                   });

  const double pos = curve.positive_count;
  const double neg = curve.negative_count;
  curve.points.emplace_back(0.0, 0.0);
  double tp = 0.0, fp = 0.0, area = 0.0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    // Consume the whole tie group at this score as one sweep step.
    std::size_t j = i;
    double tp_step = 0.0, fp_step = 0.0;
    while (j < sorted.size() && sorted[j].score == sorted[i].score) {
      (sorted[j].positive ? tp_step : fp_step) += 1.0;
      ++j;
    }
    const double prev_tpr = tp / pos;
    tp += tp_step;
    fp += fp_step;
    const double tpr = tp / pos;
    const double fpr = fp / neg;
    area += (fp_step / neg) * 0.5 * (prev_tpr + tpr);
    curve.points.emplace_back(fpr, tpr);
    i = j;
  }
  curve.auc = area;
  return curve;
}

std::string RocCurve::to_csv() const {
  std::string out = "fpr,tpr\n";
  char buf[64];
  for (const auto& [fpr, tpr] : points) {
    auto r1 = std::to_chars(buf, buf + sizeof buf, fpr);
    out.append(buf, r1.ptr);
    out.push_back(',');
    auto r2 = std::to_chars(buf, buf + sizeof buf, tpr);
    out.append(buf, r2.ptr);
    out.push_back('\n');
  }
  return out;
}

}  // namespace scenecal
