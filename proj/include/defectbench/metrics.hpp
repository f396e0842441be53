#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace defectbench::metrics {

enum class Metric { auc, h };

std::string_view to_string(Metric m);
Metric metric_from_string(std::string_view name);

/// One ROC operating point. `threshold` is the score at or above which units
/// are predicted faulty; the (0,0) point carries +infinity.
struct RocPoint {
  double fpr;
  double tpr;
  double threshold;
};

/// Points ordered from (0,0) to (1,1), one per distinct score.
using RocCurve = std::vector<RocPoint>;

/// Beta(alpha, beta) density over the misclassification cost c, where c is
/// the relative cost of missing a faulty unit.
struct CostWeighting {
  double alpha = 2.0;
  double beta = 2.0;

  void validate() const;
};

RocCurve roc_points(std::span<const double> scores, std::span<const int> labels);

/// Mann-Whitney form: (concordant + 0.5 * tied) / (n_pos * n_neg), via midranks.
double auc(std::span<const double> scores, std::span<const int> labels);

/// Trapezoidal area under roc_points(). Agrees with auc() to rounding error.
double auc_trapezoid(std::span<const double> scores, std::span<const int> labels);

/// Upper-left convex hull of a curve. Only extreme points are kept, so
/// collinear interior points are dropped.
RocCurve roc_convex_hull(const RocCurve& curve);

struct HMeasureDetail {
  double h;
  double loss;           // expected minimum loss of the scorer
  double loss_reference; // same for the information-free scorer
  double pi_positive;
  RocCurve hull;
};

/// H-measure: 1 - L / L_ref, with the expected minimum loss L integrated
/// exactly against the Beta cost density, segment by segment of the hull.
double h_measure(std::span<const double> scores, std::span<const int> labels, const CostWeighting& w = {});
HMeasureDetail h_measure_detail(std::span<const double> scores, std::span<const int> labels,
                                const CostWeighting& w = {});

double pearson_correlation(std::span<const double> a, std::span<const double> b);

double evaluate(Metric m, std::span<const double> scores, std::span<const int> labels, const CostWeighting& w = {});

}  // namespace defectbench::metrics
