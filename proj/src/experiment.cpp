#include "defectbench/experiment.hpp"

#include "csv.hpp"
#include "defectbench/error.hpp"
#include "defectbench/sampling.hpp"
#include "defectbench/seed.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>
#include <thread>

namespace defectbench::experiment {

using json = nlohmann::json;
namespace fs = std::filesystem;

std::string_view to_string(ResampleMode m) {
  return m == ResampleMode::train_folds_only ? "train_folds_only" : "whole_dataset";
}

learn::CandidateGrid ClassifierEntry::resolve(std::size_t n_train) const {
  if (grid.empty()) return learn::default_grid(algorithm, n_train);
  learn::CandidateGrid g{algorithm, {}};
  for (const auto& p : grid) g.candidates.push_back({algorithm, p});
  return g;
}

void ExperimentConfig::validate() const {
  if (datasets.empty()) throw ConfigError("datasets", "at least one dataset is required");
  if (classifiers.empty()) throw ConfigError("classifiers", "at least one classifier is required");
  if (metrics.empty()) throw ConfigError("metrics", "at least one metric is required");
  if (outer_folds < 2) throw ConfigError("outer_folds", "must be >= 2");
  if (inner_folds < 2) throw ConfigError("inner_folds", "must be >= 2");
  if (!(target_minority_ratio > 0.0 && target_minority_ratio <= 0.5))
    throw ConfigError("target_minority_ratio", "must lie in (0, 0.5]");
  if (neighbors < 1) throw ConfigError("neighbors", "must be >= 1");
  if (!(cleaning.lincomb_tol > 0)) throw ConfigError("cleaning.lincomb_tol", "must be positive");
  try {
    weighting.validate();
  } catch (const Error& e) {
    throw ConfigError("beta", e.what());
  }
  for (const auto& [m, r] : rope) {
    try {
      r.validate();
    } catch (const Error& e) {
      throw ConfigError("rope." + std::string(metrics::to_string(m)), e.what());
    }
  }
  std::vector<std::string> names;
  for (const auto& d : datasets) {
    if (d.name.empty()) throw ConfigError("datasets.name", "dataset name is empty");
    if (!d.inline_data) {
      if (d.path.empty()) throw ConfigError("datasets.path", "missing for dataset '" + d.name + "'");
      if (d.label_column.empty()) throw ConfigError("datasets.label_column", "missing for dataset '" + d.name + "'");
    }
    names.push_back(d.name);
  }
  std::sort(names.begin(), names.end());
  if (std::adjacent_find(names.begin(), names.end()) != names.end())
    throw ConfigError("datasets.name", "dataset names must be unique");
  names.clear();
  for (const auto& c : classifiers) {
    if (c.name.empty()) throw ConfigError("classifiers.name", "classifier name is empty");
    for (const auto& p : c.grid) {
      try {
        learn::ClassifierSpec{c.algorithm, p}.validate();
      } catch (const Error& e) {
        throw ConfigError("classifiers.grid", "classifier '" + c.name + "': " + e.what());
      }
    }
    names.push_back(c.name);
  }
  std::sort(names.begin(), names.end());
  if (std::adjacent_find(names.begin(), names.end()) != names.end())
    throw ConfigError("classifiers.name", "classifier names must be unique");
}

namespace {

const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where.empty() ? key : where + "." + key, "missing required field");
  return j.at(key);
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const std::string& where) {
  for (const auto& [key, _] : j.items()) {
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; }))
      throw ConfigError(where.empty() ? key : where + "." + key, "unknown field");
  }
}

template <class T>
T get_as(const json& j, const std::string& field) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError(field, "has the wrong type");
  }
}

std::pair<double, double> get_pair(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ConfigError(field, "must be a two-element numeric array");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text, const fs::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<document>", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("<document>", "top level must be an object");
  reject_unknown(j,
                 {"datasets", "classifiers", "target_minority_ratio", "neighbors", "outer_folds", "inner_folds",
                  "metrics", "beta", "rope", "master_seed", "resample_mode", "cleaning", "output_dir", "threads"},
                 "");

  ExperimentConfig cfg;
  const auto& seed = require(j, "master_seed", "");
  if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0))
    throw ConfigError("master_seed", "must be a non-negative integer");
  cfg.master_seed = seed.get<std::uint64_t>();

  const auto& ds = require(j, "datasets", "");
  if (!ds.is_array()) throw ConfigError("datasets", "must be an array");
  for (const auto& d : ds) {
    reject_unknown(d, {"name", "path", "label_column", "positive_label"}, "datasets");
    DatasetEntry e;
    e.path = get_as<std::string>(require(d, "path", "datasets"), "datasets.path");
    if (e.path.is_relative() && !base_dir.empty()) e.path = base_dir / e.path;
    e.label_column = get_as<std::string>(require(d, "label_column", "datasets"), "datasets.label_column");
    e.positive_label = get_as<std::string>(require(d, "positive_label", "datasets"), "datasets.positive_label");
    e.name = d.contains("name") ? get_as<std::string>(d["name"], "datasets.name") : e.path.stem().string();
    cfg.datasets.push_back(std::move(e));
  }

  const auto& cs = require(j, "classifiers", "");
  if (!cs.is_array()) throw ConfigError("classifiers", "must be an array");
  for (const auto& c : cs) {
    reject_unknown(c, {"name", "algorithm", "grid"}, "classifiers");
    ClassifierEntry e;
    const auto algo = get_as<std::string>(require(c, "algorithm", "classifiers"), "classifiers.algorithm");
    try {
      e.algorithm = learn::algorithm_from_string(algo);
    } catch (const ArgumentError& err) {
      throw ConfigError("classifiers.algorithm", err.what());
    }
    e.name = c.contains("name") ? get_as<std::string>(c["name"], "classifiers.name") : algo;
    if (c.contains("grid")) {
      const auto& g = c["grid"];
      if (g.is_string() && g.get<std::string>() == "default") {
      } else if (g.is_array()) {
        for (const auto& assignment : g) {
          if (!assignment.is_object()) throw ConfigError("classifiers.grid", "entries must be objects");
          learn::Hyperparameters hp;
          for (const auto& [k, v] : assignment.items()) {
            if (!v.is_number()) throw ConfigError("classifiers.grid", "hyperparameter '" + k + "' must be numeric");
            hp[k] = v.get<double>();
          }
          e.grid.push_back(std::move(hp));
        }
        if (e.grid.empty()) throw ConfigError("classifiers.grid", "grid for '" + e.name + "' is empty");
      } else {
        throw ConfigError("classifiers.grid", "must be \"default\" or an array of objects");
      }
    }
    cfg.classifiers.push_back(std::move(e));
  }

  if (j.contains("target_minority_ratio"))
    cfg.target_minority_ratio = get_as<double>(j["target_minority_ratio"], "target_minority_ratio");
  if (j.contains("neighbors")) cfg.neighbors = get_as<int>(j["neighbors"], "neighbors");
  if (j.contains("outer_folds")) cfg.outer_folds = get_as<int>(j["outer_folds"], "outer_folds");
  if (j.contains("inner_folds")) cfg.inner_folds = get_as<int>(j["inner_folds"], "inner_folds");
  if (j.contains("threads")) cfg.threads = get_as<int>(j["threads"], "threads");
  if (j.contains("output_dir")) {
    cfg.output_dir = get_as<std::string>(j["output_dir"], "output_dir");
    if (cfg.output_dir.is_relative() && !base_dir.empty()) cfg.output_dir = base_dir / cfg.output_dir;
  }
  if (j.contains("metrics")) {
    cfg.metrics.clear();
    if (!j["metrics"].is_array()) throw ConfigError("metrics", "must be an array");
    for (const auto& m : j["metrics"]) {
      try {
        cfg.metrics.push_back(metrics::metric_from_string(get_as<std::string>(m, "metrics")));
      } catch (const ArgumentError& e) {
        throw ConfigError("metrics", e.what());
      }
    }
  }
  if (j.contains("beta")) {
    auto [a, b] = get_pair(j["beta"], "beta");
    cfg.weighting = {a, b};
  }
  if (j.contains("rope")) {
    if (!j["rope"].is_object()) throw ConfigError("rope", "must be an object keyed by metric");
    for (const auto& [k, v] : j["rope"].items()) {
      metrics::Metric m;
      try {
        m = metrics::metric_from_string(k);
      } catch (const ArgumentError& e) {
        throw ConfigError("rope." + k, e.what());
      }
      auto [lo, hi] = get_pair(v, "rope." + k);
      cfg.rope[m] = {lo, hi};
    }
  }
  if (j.contains("resample_mode")) {
    const auto mode = get_as<std::string>(j["resample_mode"], "resample_mode");
    if (mode == "train_folds_only")
      cfg.resample_mode = ResampleMode::train_folds_only;
    else if (mode == "whole_dataset")
      cfg.resample_mode = ResampleMode::whole_dataset;
    else
      throw ConfigError("resample_mode", "must be train_folds_only or whole_dataset");
  }
  if (j.contains("cleaning")) {
    const auto& c = j["cleaning"];
    reject_unknown(c, {"drop_missing_rows", "dedup", "lincomb_tol"}, "cleaning");
    if (c.contains("drop_missing_rows"))
      cfg.cleaning.drop_missing_rows = get_as<bool>(c["drop_missing_rows"], "cleaning.drop_missing_rows");
    if (c.contains("dedup")) cfg.cleaning.dedup = get_as<bool>(c["dedup"], "cleaning.dedup");
    if (c.contains("lincomb_tol")) cfg.cleaning.lincomb_tol = get_as<double>(c["lincomb_tol"], "cleaning.lincomb_tol");
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["master_seed"] = cfg.master_seed;
  j["target_minority_ratio"] = cfg.target_minority_ratio;
  j["neighbors"] = cfg.neighbors;
  j["outer_folds"] = cfg.outer_folds;
  j["inner_folds"] = cfg.inner_folds;
  j["resample_mode"] = std::string(to_string(cfg.resample_mode));
  j["beta"] = {cfg.weighting.alpha, cfg.weighting.beta};
  j["metrics"] = json::array();
  for (auto m : cfg.metrics) j["metrics"].push_back(std::string(metrics::to_string(m)));
  j["rope"] = json::object();
  for (const auto& [m, r] : cfg.rope) j["rope"][std::string(metrics::to_string(m))] = {r.lower, r.upper};
  j["cleaning"] = {{"drop_missing_rows", cfg.cleaning.drop_missing_rows},
                   {"dedup", cfg.cleaning.dedup},
                   {"lincomb_tol", cfg.cleaning.lincomb_tol}};
  j["datasets"] = json::array();
  for (const auto& d : cfg.datasets) {
    json e{{"name", d.name}};
    if (d.inline_data) {
      e["path"] = "<inline>";
    } else {
      e["path"] = d.path.generic_string();
      e["label_column"] = d.label_column;
      e["positive_label"] = d.positive_label;
    }
    j["datasets"].push_back(e);
  }
  j["classifiers"] = json::array();
  for (const auto& c : cfg.classifiers) {
    json e{{"name", c.name}, {"algorithm", std::string(learn::to_string(c.algorithm))}};
    if (c.grid.empty()) {
      e["grid"] = "default";
    } else {
      e["grid"] = json::array();
      for (const auto& p : c.grid) e["grid"].push_back(json(p));
    }
    j["classifiers"].push_back(e);
  }
  return j.dump(2);
}

std::uint64_t task_seed(std::uint64_t master, const std::string& dataset, const std::string& classifier, int fold,
                        const std::string& purpose) {
  const auto fold_text = std::to_string(fold);
  return derive_seed(master, {dataset, classifier, fold_text, purpose});
}

std::string seed_derivation_text() {
  return "seed(task) = splitmix64(master_seed XOR fnv1a64(\"<dataset>|<classifier>|<fold>|<purpose>\")); "
         "classifier '*' and fold -1 mark dataset-level streams; purposes: outer, resample, select, fit";
}

std::vector<std::string> ResultStore::failures() const {
  std::vector<std::string> out = dataset_errors;
  for (const auto& r : records)
    if (!r.ok) out.push_back(r.dataset + " / " + r.classifier + " / fold " + std::to_string(r.fold) + ": " + r.status);
  return out;
}

ResultStore ResultStore::without_classifier(const std::string& name) const {
  ResultStore out = *this;
  out.classifier_names.erase(std::remove(out.classifier_names.begin(), out.classifier_names.end(), name),
                             out.classifier_names.end());
  out.records.erase(std::remove_if(out.records.begin(), out.records.end(),
                                   [&](const FoldRecord& r) { return r.classifier == name; }),
                    out.records.end());
  out.config.classifiers.erase(std::remove_if(out.config.classifiers.begin(), out.config.classifiers.end(),
                                              [&](const ClassifierEntry& c) { return c.name == name; }),
                               out.config.classifiers.end());
  return out;
}

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

int worker_count(int configured, std::size_t tasks) {
  int n = configured;
  if (n <= 0) {
    if (const char* env = std::getenv("DEFECTBENCH_THREADS")) n = std::atoi(env);
  }
  if (n <= 0) n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(n), std::max<std::size_t>(tasks, 1)));
}

template <class Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
  std::atomic<std::size_t> next{0};
  auto body = [&] {
    for (std::size_t i = next++; i < count; i = next++) fn(i);
  };
  if (workers <= 1) {
    body();
    return;
  }
  std::vector<std::jthread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(body);
}

struct PreparedDataset {
  data::Dataset data;
  sampling::FoldPlan outer;
  std::string error;
};

struct TrainSplit {
  data::Dataset train;
  std::vector<std::size_t> test_rows;
  std::string error;
};

}  // namespace

ResultStore run_experiment(const ExperimentConfig& cfg, const ProgressFn& progress) {
  cfg.validate();
  ResultStore store;
  store.config = cfg;
  store.started_at = utc_now();
  for (const auto& d : cfg.datasets) store.dataset_names.push_back(d.name);
  for (const auto& c : cfg.classifiers) store.classifier_names.push_back(c.name);

  const auto nd = cfg.datasets.size();
  const auto nc = cfg.classifiers.size();
  const auto nf = static_cast<std::size_t>(cfg.outer_folds);
  const sampling::SamplingConfig base_sampling{cfg.target_minority_ratio, cfg.neighbors, 0};

  std::vector<PreparedDataset> prepared(nd);
  for (std::size_t di = 0; di < nd; ++di) {
    const auto& entry = cfg.datasets[di];
    auto& p = prepared[di];
    try {
      data::Dataset raw = entry.inline_data ? *entry.inline_data
                                            : data::load_csv_dataset(entry.path, {entry.label_column,
                                                                                  entry.positive_label, entry.name});
      raw.name = entry.name;
      auto cleaned = data::clean_dataset(raw, cfg.cleaning);
      store.cleaning[entry.name] = cleaned.report;
      p.data = std::move(cleaned.dataset);
      if (cfg.resample_mode == ResampleMode::whole_dataset) {
        auto sc = base_sampling;
        sc.rng_seed = task_seed(cfg.master_seed, entry.name, "*", -1, "resample");
        p.data = sampling::adasyn(p.data, sc);
      }
      store.dataset_rows[entry.name] = p.data.rows();
      p.outer = sampling::stratified_folds(p.data.labels, cfg.outer_folds,
                                           task_seed(cfg.master_seed, entry.name, "*", -1, "outer"));
    } catch (const std::exception& e) {
      p.error = e.what();
      store.dataset_errors.push_back(entry.name + ": " + e.what());
    }
  }

  const int workers = worker_count(cfg.threads, nd * nc * nf);

  // Training splits are shared by every classifier on the same (dataset, fold).
  std::vector<TrainSplit> splits(nd * nf);
  parallel_for(nd * nf, workers, [&](std::size_t idx) {
    const auto di = idx / nf;
    const int fold = static_cast<int>(idx % nf);
    auto& s = splits[idx];
    const auto& p = prepared[di];
    if (!p.error.empty()) {
      s.error = p.error;
      return;
    }
    try {
      s.test_rows = p.outer.test_indices(fold);
      s.train = p.data.select_rows(p.outer.train_indices(fold));
      if (cfg.resample_mode == ResampleMode::train_folds_only) {
        auto sc = base_sampling;
        sc.rng_seed = task_seed(cfg.master_seed, p.data.name, "*", fold, "resample");
        s.train = sampling::adasyn(s.train, sc);
      }
    } catch (const std::exception& e) {
      s.error = e.what();
    }
  });

  store.records.resize(nd * nc * nf);
  parallel_for(store.records.size(), workers, [&](std::size_t idx) {
    const auto di = idx / (nc * nf);
    const auto ci = (idx / nf) % nc;
    const int fold = static_cast<int>(idx % nf);
    const auto& entry = cfg.classifiers[ci];
    const auto& split = splits[di * nf + static_cast<std::size_t>(fold)];
    FoldRecord& rec = store.records[idx];
    rec.dataset = cfg.datasets[di].name;
    rec.classifier = entry.name;
    rec.fold = fold;
    try {
      if (!split.error.empty()) throw Error(split.error);
      const auto& full = prepared[di].data;
      const auto& train = split.train;
      rec.n_train = train.rows();
      rec.n_synthetic_train =
          static_cast<std::size_t>(std::count(train.synthetic.begin(), train.synthetic.end(), std::uint8_t{1}));
      const auto grid = entry.resolve(train.rows());
      const auto spec = learn::select_candidate(
          grid, train, cfg.inner_folds, cfg.selection_metric(),
          task_seed(cfg.master_seed, rec.dataset, rec.classifier, fold, "select"), nullptr, cfg.weighting);
      const auto model = learn::fit(spec, train, task_seed(cfg.master_seed, rec.dataset, rec.classifier, fold, "fit"));
      const auto test = full.select_rows(split.test_rows);
      const data::Vector scores = learn::predict_scores(model, test.features);
      rec.selected = spec;
      rec.converged = model.converged();
      rec.test_rows = split.test_rows;
      rec.test_labels = test.labels;
      rec.test_scores.assign(scores.data(), scores.data() + scores.size());
      rec.test_synthetic =
          static_cast<std::size_t>(std::count(test.synthetic.begin(), test.synthetic.end(), std::uint8_t{1}));
      for (auto m : cfg.metrics) rec.metric_values[m] = metrics::evaluate(m, rec.test_scores, rec.test_labels, cfg.weighting);
      rec.ok = true;
      rec.status = "ok";
    } catch (const std::exception& e) {
      rec.ok = false;
      rec.status = e.what();
    }
    if (progress) progress(rec);
  });

  store.finished_at = utc_now();
  return store;
}

stats::MetricMatrix aggregate(const ResultStore& store, metrics::Metric metric) {
  stats::MetricMatrix m;
  m.metric = std::string(metrics::to_string(metric));
  m.name = "matrix_" + m.metric;
  m.classifiers = store.classifier_names;
  m.datasets = store.dataset_names;
  m.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m.k()), static_cast<Eigen::Index>(m.n()));
  const auto folds = static_cast<std::size_t>(store.config.outer_folds);
  std::vector<std::string> gaps;
  for (std::size_t ci = 0; ci < m.k(); ++ci) {
    for (std::size_t di = 0; di < m.n(); ++di) {
      std::vector<bool> seen(folds, false);
      double sum = 0;
      for (const auto& r : store.records) {
        if (r.classifier != m.classifiers[ci] || r.dataset != m.datasets[di]) continue;
        const auto f = static_cast<std::size_t>(r.fold);
        auto it = r.metric_values.find(metric);
        if (!r.ok || it == r.metric_values.end() || f >= folds || seen[f]) {
          gaps.push_back(r.dataset + " / " + r.classifier + " / fold " + std::to_string(r.fold) +
                         (r.ok ? ": metric not recorded" : ": " + r.status));
          continue;
        }
        seen[f] = true;
        sum += it->second;
      }
      for (std::size_t f = 0; f < folds; ++f)
        if (!seen[f] && std::none_of(gaps.begin(), gaps.end(), [&](const std::string& g) {
              return g.starts_with(m.datasets[di] + " / " + m.classifiers[ci] + " / fold " + std::to_string(f) + ":");
            }))
          gaps.push_back(m.datasets[di] + " / " + m.classifiers[ci] + " / fold " + std::to_string(f) + ": missing");
      m.values(static_cast<Eigen::Index>(ci), static_cast<Eigen::Index>(di)) = sum / static_cast<double>(folds);
    }
  }
  if (!gaps.empty()) {
    std::string msg = "incomplete result store (" + std::to_string(gaps.size()) + " gaps):";
    for (const auto& g : gaps) msg += "\n  " + g;
    throw DataError(msg);
  }
  return m;
}

namespace {

std::string safe_name(const std::string& s) {
  std::string out;
  for (char c : s) out.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.' ? c : '_');
  return out;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write " + p.string());
  out << text;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

void save_store(const ResultStore& store, const fs::path& dir) {
  fs::create_directories(dir / "folds");
  fs::create_directories(dir / "scores");
  const auto cfg_json = config_to_json(store.config);
  write_text(dir / "config.json", cfg_json + "\n");

  const auto& metric_list = store.config.metrics;
  for (const auto& d : store.dataset_names) {
    for (const auto& c : store.classifier_names) {
      std::ostringstream folds, scores;
      folds << "fold,status,selected,converged,n_train,n_synthetic_train,n_test,test_synthetic";
      for (auto m : metric_list) folds << ',' << metrics::to_string(m);
      folds << '\n';
      scores << "fold,row,label,score\n";
      for (const auto& r : store.records) {
        if (r.dataset != d || r.classifier != c) continue;
        folds << r.fold << ',' << csv::escape(r.ok ? "ok" : r.status) << ','
              << csv::escape(r.ok ? r.selected.describe() : "") << ',' << (r.converged ? 1 : 0) << ',' << r.n_train
              << ',' << r.n_synthetic_train << ',' << r.test_rows.size() << ',' << r.test_synthetic;
        for (auto m : metric_list) {
          auto it = r.metric_values.find(m);
          folds << ',' << (it == r.metric_values.end() ? "" : csv::format_double(it->second));
        }
        folds << '\n';
        for (std::size_t i = 0; i < r.test_rows.size(); ++i)
          scores << r.fold << ',' << r.test_rows[i] << ',' << r.test_labels[i] << ','
                 << csv::format_double(r.test_scores[i]) << '\n';
      }
      const auto stem = safe_name(d) + "__" + safe_name(c) + ".csv";
      write_text(dir / "folds" / stem, folds.str());
      write_text(dir / "scores" / stem, scores.str());
    }
  }

  const auto failures = store.failures();
  if (failures.empty())
    for (auto m : metric_list)
      stats::write_metric_matrix(aggregate(store, m), dir / ("matrix_" + std::string(metrics::to_string(m)) + ".csv"));

  json manifest;
  manifest["tool_version"] = DEFECTBENCH_VERSION;
  manifest["started_at"] = store.started_at;
  manifest["finished_at"] = store.finished_at;
  manifest["config_hash"] = hex64(fnv1a64(cfg_json));
  manifest["seed_derivation"] = seed_derivation_text();
  manifest["publishable"] = failures.empty();
  manifest["failures"] = failures;
  manifest["datasets"] = store.dataset_names;
  manifest["classifiers"] = store.classifier_names;
  json cleaning = json::object();
  for (const auto& [name, rep] : store.cleaning) {
    cleaning[name] = {{"rows_dropped_missing", rep.rows_dropped_missing},
                      {"duplicate_rows_found", rep.duplicate_rows_found},
                      {"duplicates_removed", rep.duplicates_removed},
                      {"constant_features_removed", rep.constant_features_removed},
                      {"linear_combination_features_removed", rep.linear_combination_features_removed}};
    if (auto it = store.dataset_rows.find(name); it != store.dataset_rows.end()) cleaning[name]["rows"] = it->second;
  }
  manifest["cleaning"] = cleaning;
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace defectbench::experiment
