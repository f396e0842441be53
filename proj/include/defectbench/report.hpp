#pragma once

#include "defectbench/stattests.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace defectbench::report {

struct CompareOptions {
  /// Classifier names to keep, in report order. Empty keeps every row.
  std::vector<std::string> subset;
  /// Overrides the per-metric default rope for every matrix.
  std::optional<stats::RopeBounds> rope;
  double alpha = 0.05;
  std::size_t mc_samples = 50000;
  std::uint64_t seed = 0;
  double prior_strength = 0.5;
};

struct BayesPair {
  std::size_t i;
  std::size_t j;
  stats::PosteriorTriple posterior;  // difference row i - row j
  std::optional<stats::WilcoxonResult> wilcoxon;  // absent when fewer than 5 non-zero differences
};

struct MetricComparison {
  stats::MetricMatrix matrix;  // after subsetting
  stats::RankTable ranks;
  std::optional<stats::FriedmanResult> friedman;  // needs k >= 3
  double q = 0.0;
  double cd = 0.0;
  std::vector<stats::NemenyiPair> nemenyi;
  stats::RopeBounds rope;
  std::vector<BayesPair> bayes;
};

/// Ranks, Friedman, critical distance, Nemenyi pairs and Bayesian pairs for
/// one matrix. The seed of each pair is derived from (seed, matrix name, a, b).
MetricComparison compare(const stats::MetricMatrix& m, const CompareOptions& opts);

/// Groups of classifiers whose average ranks all lie within cd of each
/// other, maximal and ordered by best rank. Indices refer to rows.
std::vector<std::vector<std::size_t>> cd_cliques(const stats::RankTable& ranks, double cd);

struct Provenance {
  std::string tool_version;
  std::string config_hash;
  std::uint64_t seed = 0;
};

/// Hex digest over the input bytes and options; stable across runs.
std::string options_hash(const std::vector<std::string>& input_texts, const CompareOptions& opts);

std::string render_markdown(const std::vector<MetricComparison>& cmp, const CompareOptions& opts,
                            const Provenance& prov);

/// Writes report.md, ranks.csv, friedman.csv, nemenyi.csv, bayes.csv,
/// bayes_details.csv and cd_diagram.csv into `dir`.
void write_report(const std::vector<MetricComparison>& cmp, const CompareOptions& opts, const Provenance& prov,
                  const std::filesystem::path& dir);

/// "cd(k=17,N=12)=7.13"
std::string cd_line(const MetricComparison& c);

}  // namespace defectbench::report
