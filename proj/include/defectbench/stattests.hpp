#pragma once

#include "defectbench/metrics.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace defectbench::stats {

/// Classifiers (rows) x datasets (columns) table of one metric; higher is better.
struct MetricMatrix {
  std::string metric;
  std::string name;  // source label, e.g. the file stem
  std::vector<std::string> classifiers;
  std::vector<std::string> datasets;
  Eigen::MatrixXd values;

  std::size_t k() const { return classifiers.size(); }
  std::size_t n() const { return datasets.size(); }

  /// Throws DataError unless k >= 2, N >= 2, names are unique and cells finite.
  void validate() const;
  std::size_t index_of(const std::string& classifier) const;
  std::vector<double> row(const std::string& classifier) const;
  /// Rows for `names`, in the order given.
  MetricMatrix subset(const std::vector<std::string>& names) const;
};

/// Reads "classifier,<dataset>,..." CSV. `metric` is recorded verbatim; the
/// matrix name is the file stem.
MetricMatrix ingest_metric_matrix(const std::filesystem::path& path, const std::string& metric = "");

/// 17 significant digits, same layout ingest_metric_matrix() reads.
void write_metric_matrix(const MetricMatrix& m, const std::filesystem::path& path);

struct RankTable {
  std::vector<std::string> classifiers;
  std::vector<double> average;    // per classifier
  Eigen::MatrixXd ranks;          // k x N midranks, 1 = best
};

RankTable average_ranks(const MetricMatrix& m);

struct FriedmanResult {
  double chi_square = 0.0;
  int df = 0;
  double p_value = 1.0;
};

/// Tie-corrected Friedman statistic with a chi-square(k-1) p-value. Needs k >= 3.
FriedmanResult friedman_test(const MetricMatrix& m);

/// Two-tailed Nemenyi critical value q_alpha (studentized range at infinite
/// degrees of freedom over sqrt 2). Tabulated for alpha = 0.05, 2 <= k <= 20.
double nemenyi_q(int k, double alpha = 0.05);

/// q * sqrt(k (k + 1) / (6 N)).
double critical_distance(int k, int n_datasets, double q_alpha);

struct NemenyiPair {
  std::size_t i;
  std::size_t j;
  double rank_gap;
  bool significant;
};

/// One entry per unordered pair; significant when |R_i - R_j| >= cd.
std::vector<NemenyiPair> nemenyi_pairwise(const RankTable& ranks, double cd);

enum class WilcoxonMethod { automatic, exact, normal };

struct WilcoxonResult {
  double statistic = 0.0;  // W+, sum of ranks of positive differences
  double p_value = 1.0;
  std::size_t n_effective = 0;  // pairs left after dropping zero differences
  bool exact = false;
  bool degenerate = false;  // every difference was zero
};

/// Paired two-sided signed-rank test. automatic = exact enumeration for
/// n <= 20, normal approximation with tie and continuity correction above.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b,
                                    WilcoxonMethod method = WilcoxonMethod::automatic);

struct RopeBounds {
  double lower = -0.01;
  double upper = 0.01;

  void validate() const;
};

RopeBounds default_rope(metrics::Metric m);

enum class Verdict { left_wins, right_wins, practically_equivalent, inconclusive };

std::string_view to_string(Verdict v);

/// Posterior probabilities that the difference a - b sits left of, inside,
/// or right of the rope. right_wins therefore means `a` is better.
struct PosteriorTriple {
  double p_left = 0.0;
  double p_rope = 0.0;
  double p_right = 0.0;
  Verdict verdict = Verdict::inconclusive;
  std::size_t mc_samples = 0;
  std::uint64_t seed = 0;
};

struct BayesOptions {
  std::size_t mc_samples = 50000;
  std::uint64_t seed = 0;
  double prior_strength = 0.5;  // Dirichlet weight of the pseudo-observation at 0
  double threshold = 0.95;
};

/// Bayesian signed-rank test over per-dataset differences with a
/// Dirichlet-process posterior. Each draw reweights the differences plus a
/// pseudo-observation at zero; the region with the largest Walsh-average mass
/// wins the draw and the returned probabilities are win frequencies.
PosteriorTriple bayesian_rope_test(std::span<const double> a, std::span<const double> b, const RopeBounds& rope,
                                   const BayesOptions& opts = {});

}  // namespace defectbench::stats
