#include "defectbench/metrics.hpp"

#include "defectbench/error.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace defectbench::metrics {

std::string_view to_string(Metric m) { return m == Metric::auc ? "auc" : "h"; }

Metric metric_from_string(std::string_view name) {
  if (name == "auc" || name == "AUC") return Metric::auc;
  if (name == "h" || name == "H") return Metric::h;
  throw ArgumentError("unknown metric '" + std::string(name) + "' (expected auc or h)");
}

void CostWeighting::validate() const {
  if (!(alpha > 0) || !(beta > 0) || !std::isfinite(alpha) || !std::isfinite(beta))
    throw ArgumentError("Beta cost weighting needs alpha > 0 and beta > 0");
}

namespace {

struct ClassCounts {
  std::size_t pos = 0;
  std::size_t neg = 0;
};

ClassCounts check_inputs(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw ArgumentError("scores and labels differ in length");
  ClassCounts c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == 1)
      ++c.pos;
    else if (labels[i] == -1)
      ++c.neg;
    else
      throw DataError("labels must be +1 or -1");
    if (!std::isfinite(scores[i])) throw DataError("scores must be finite");
  }
  if (c.pos == 0 || c.neg == 0) throw DataError("single-class labels");
  return c;
}

}  // namespace

RocCurve roc_points(std::span<const double> scores, std::span<const int> labels) {
  const auto counts = check_inputs(scores, labels);
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocCurve curve;
  curve.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double s = scores[order[i]];
    for (; i < order.size() && scores[order[i]] == s; ++i) (labels[order[i]] == 1 ? tp : fp)++;
    curve.push_back({static_cast<double>(fp) / static_cast<double>(counts.neg),
                     static_cast<double>(tp) / static_cast<double>(counts.pos), s});
  }
  return curve;
}

double auc(std::span<const double> scores, std::span<const int> labels) {
  const auto counts = check_inputs(scores, labels);
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  // Sum of midranks of the positives.
  double rank_sum = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k)
      if (labels[order[k]] == 1) rank_sum += midrank;
    i = j;
  }
  const double p = static_cast<double>(counts.pos), n = static_cast<double>(counts.neg);
  return (rank_sum - p * (p + 1) / 2.0) / (p * n);
}

double auc_trapezoid(std::span<const double> scores, std::span<const int> labels) {
  const auto curve = roc_points(scores, labels);
  double area = 0;
  for (std::size_t i = 1; i < curve.size(); ++i)
    area += (curve[i].fpr - curve[i - 1].fpr) * (curve[i].tpr + curve[i - 1].tpr) / 2.0;
  return area;
}

RocCurve roc_convex_hull(const RocCurve& curve) {
  RocCurve hull;
  for (const auto& pt : curve) {
    while (hull.size() >= 2) {
      const auto& o = hull[hull.size() - 2];
      const auto& a = hull.back();
      const double cross = (a.fpr - o.fpr) * (pt.tpr - o.tpr) - (a.tpr - o.tpr) * (pt.fpr - o.fpr);
      // a is dropped when it is on or below the chord o -> pt.
      if (cross >= -1e-12)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(pt);
  }
  return hull;
}

namespace {

// Expected minimum loss over the cost density for the operating points of a
// concave ROC hull ordered by fpr. Vertex j is optimal on [c_j, c_{j+1}],
// where c_j solves equal loss for vertices j-1 and j.
double expected_min_loss(const RocCurve& hull, double pi1, const CostWeighting& w) {
  const double pi0 = 1.0 - pi1;
  const double mean_scale = w.alpha / (w.alpha + w.beta);
  auto cdf = [&](double x) { return x <= 0 ? 0.0 : x >= 1 ? 1.0 : boost::math::ibeta(w.alpha, w.beta, x); };
  // Partial first moment: integral_0^x c * BetaPDF(c) dc.
  auto moment = [&](double x) {
    return x <= 0 ? 0.0 : x >= 1 ? mean_scale : mean_scale * boost::math::ibeta(w.alpha + 1.0, w.beta, x);
  };

  std::vector<double> cuts{0.0};
  for (std::size_t j = 1; j < hull.size(); ++j) {
    const double df = pi0 * (hull[j].fpr - hull[j - 1].fpr);
    const double dt = pi1 * (hull[j].tpr - hull[j - 1].tpr);
    const double c = df + dt > 0 ? df / (df + dt) : cuts.back();
    cuts.push_back(std::clamp(std::max(c, cuts.back()), 0.0, 1.0));
  }
  cuts.push_back(1.0);

  double loss = 0;
  for (std::size_t j = 0; j < hull.size(); ++j) {
    const double lo = cuts[j], hi = cuts[j + 1];
    if (!(hi > lo)) continue;
    const double intercept = pi0 * hull[j].fpr;
    const double slope = pi1 * (1.0 - hull[j].tpr) - pi0 * hull[j].fpr;
    loss += intercept * (cdf(hi) - cdf(lo)) + slope * (moment(hi) - moment(lo));
  }
  return loss;
}

}  // namespace

HMeasureDetail h_measure_detail(std::span<const double> scores, std::span<const int> labels,
                                const CostWeighting& w) {
  w.validate();
  const auto counts = check_inputs(scores, labels);
  HMeasureDetail out{};
  out.pi_positive = static_cast<double>(counts.pos) / static_cast<double>(counts.pos + counts.neg);
  out.hull = roc_convex_hull(roc_points(scores, labels));
  const RocCurve trivial{{0.0, 0.0, std::numeric_limits<double>::infinity()},
                         {1.0, 1.0, -std::numeric_limits<double>::infinity()}};
  out.loss = expected_min_loss(out.hull, out.pi_positive, w);
  out.loss_reference = expected_min_loss(trivial, out.pi_positive, w);
  out.h = 1.0 - out.loss / out.loss_reference;
  return out;
}

double h_measure(std::span<const double> scores, std::span<const int> labels, const CostWeighting& w) {
  return h_measure_detail(scores, labels, w).h;
}

double pearson_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ArgumentError("pearson_correlation: length mismatch");
  if (a.size() < 2) throw ArgumentError("pearson_correlation: need at least two pairs");
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0 || sbb == 0) throw ArgumentError("pearson_correlation: constant input");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

double evaluate(Metric m, std::span<const double> scores, std::span<const int> labels, const CostWeighting& w) {
  return m == Metric::auc ? auc(scores, labels) : h_measure(scores, labels, w);
}

}  // namespace defectbench::metrics
