#pragma once

#include "defectbench/dataset.hpp"
#include "defectbench/learners.hpp"
#include "defectbench/metrics.hpp"
#include "defectbench/stattests.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace defectbench::experiment {

enum class ResampleMode { train_folds_only, whole_dataset };

std::string_view to_string(ResampleMode m);

struct DatasetEntry {
  std::string name;
  std::filesystem::path path;
  std::string label_column;
  std::string positive_label;
  /// When set, used instead of reading `path`.
  std::optional<data::Dataset> inline_data;
};

struct ClassifierEntry {
  std::string name;
  learn::Algorithm algorithm = learn::Algorithm::constant;
  /// Explicit candidates; empty means default_grid() sized per training split.
  std::vector<learn::Hyperparameters> grid;

  learn::CandidateGrid resolve(std::size_t n_train) const;
};

struct ExperimentConfig {
  std::vector<DatasetEntry> datasets;
  std::vector<ClassifierEntry> classifiers;
  double target_minority_ratio = 0.20;
  int neighbors = 5;
  int outer_folds = 5;
  int inner_folds = 5;
  std::vector<metrics::Metric> metrics{metrics::Metric::auc, metrics::Metric::h};
  metrics::CostWeighting weighting;
  std::map<metrics::Metric, stats::RopeBounds> rope{{metrics::Metric::auc, {-0.01, 0.01}},
                                                    {metrics::Metric::h, {-0.05, 0.05}}};
  std::uint64_t master_seed = 0;
  ResampleMode resample_mode = ResampleMode::train_folds_only;
  data::CleaningPolicy cleaning;
  std::filesystem::path output_dir;
  /// Worker threads; 0 = DEFECTBENCH_THREADS or hardware concurrency.
  int threads = 0;

  /// Inner model selection uses the first configured metric.
  metrics::Metric selection_metric() const { return metrics.front(); }
  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Parses the JSON config format. Relative dataset paths resolve against
/// `base_dir`. Missing master_seed is an error; other fields have defaults.
ExperimentConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical JSON of a config (sorted keys), used for hashing and persistence.
std::string config_to_json(const ExperimentConfig& cfg);

/// Per-task seed: derive_seed(master, {dataset, classifier, fold, purpose}).
std::uint64_t task_seed(std::uint64_t master, const std::string& dataset, const std::string& classifier, int fold,
                        const std::string& purpose);
/// Human-readable statement of the derivation, printed by the CLI.
std::string seed_derivation_text();

struct FoldRecord {
  std::string dataset;
  std::string classifier;
  int fold = 0;
  bool ok = false;
  std::string status;  // "ok" or the failure message
  learn::ClassifierSpec selected;
  bool converged = true;
  std::size_t n_train = 0;
  std::size_t n_synthetic_train = 0;
  std::vector<std::size_t> test_rows;  // indices into the cleaned dataset
  std::vector<int> test_labels;
  std::vector<double> test_scores;
  std::size_t test_synthetic = 0;  // synthetic rows that reached the test split
  std::map<metrics::Metric, double> metric_values;
};

struct ResultStore {
  ExperimentConfig config;
  std::vector<std::string> dataset_names;
  std::vector<std::string> classifier_names;
  std::map<std::string, data::CleaningReport> cleaning;
  std::map<std::string, std::size_t> dataset_rows;  // rows after cleaning (and whole-dataset resampling)
  std::vector<FoldRecord> records;  // ordered by (dataset, classifier, fold)
  std::vector<std::string> dataset_errors;
  std::string started_at;
  std::string finished_at;

  std::vector<std::string> failures() const;
  bool publishable() const { return failures().empty(); }
  /// Drops one classifier's records.
  ResultStore without_classifier(const std::string& name) const;
};

using ProgressFn = std::function<void(const FoldRecord&)>;

ResultStore run_experiment(const ExperimentConfig& cfg, const ProgressFn& progress = {});

/// Cell = mean over outer folds. Throws DataError listing every gap when a
/// fold failed or is missing.
stats::MetricMatrix aggregate(const ResultStore& store, metrics::Metric metric);

/// Writes config.json, manifest.json, folds/, scores/ and matrix_<metric>.csv.
void save_store(const ResultStore& store, const std::filesystem::path& dir);

}  // namespace defectbench::experiment
