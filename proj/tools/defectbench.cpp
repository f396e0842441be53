#include "defectbench/error.hpp"
#include "defectbench/experiment.hpp"
#include "defectbench/report.hpp"
#include "defectbench/stattests.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace defectbench;

namespace {

enum Exit { kOk = 0, kTaskFailure = 1, kConfig = 2, kClobber = 3 };

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw DataError("cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, ','))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

// The metric of a matrix file: explicit flag, else the file-stem suffix.
std::string infer_metric(const fs::path& p) {
  const auto stem = p.stem().string();
  if (stem.ends_with("_auc") || stem == "auc") return "auc";
  if (stem.ends_with("_h") || stem == "h") return "h";
  throw ArgumentError("cannot infer the metric of " + p.string() + "; pass --metric auc|h");
}

std::vector<stats::MetricMatrix> load_matrices(const std::vector<std::string>& paths,
                                               const std::vector<std::string>& metric_flags,
                                               std::vector<std::string>* texts = nullptr) {
  if (!metric_flags.empty() && metric_flags.size() != 1 && metric_flags.size() != paths.size())
    throw ArgumentError("--metric takes one value or one per input");
  std::vector<stats::MetricMatrix> out;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    std::string metric = metric_flags.empty()          ? infer_metric(paths[i])
                         : metric_flags.size() == 1 ? metric_flags[0]
                                                    : metric_flags[i];
    metric = std::string(metrics::to_string(metrics::metric_from_string(metric)));
    out.push_back(stats::ingest_metric_matrix(paths[i], metric));
    if (texts) texts->push_back(read_file(paths[i]));
  }
  for (std::size_t i = 1; i < out.size(); ++i) {
    auto a = out[0].classifiers, b = out[i].classifiers;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b)
      throw DataError("matrices " + out[0].name + " and " + out[i].name + " do not share the same classifier set");
    // Same-study matrices of different metrics must also cover the same datasets.
    if (out[i].metric != out[0].metric && out[i].n() == out[0].n()) {
      auto da = out[0].datasets, db = out[i].datasets;
      std::sort(da.begin(), da.end());
      std::sort(db.begin(), db.end());
      if (da != db)
        throw DataError("matrices " + out[0].name + " and " + out[i].name + " do not share the same dataset set");
    }
  }
  return out;
}

void print_ranks(const std::vector<stats::MetricMatrix>& ms, std::ostream& os) {
  std::vector<stats::RankTable> tables;
  for (const auto& m : ms) tables.push_back(stats::average_ranks(m));
  os << "classifier";
  for (const auto& m : ms) os << ',' << m.name;
  os << '\n';
  for (const auto& name : ms.front().classifiers) {
    os << name;
    for (std::size_t t = 0; t < ms.size(); ++t) os << ',' << fmt("%.4f", tables[t].average[ms[t].index_of(name)]);
    os << '\n';
  }
}

struct CompareFlags {
  std::vector<std::string> metric;
  std::string subset;
  std::string rope;
  double alpha = 0.05;
  std::size_t mc = 50000;
  std::uint64_t seed = 0;
  std::string out;
};

void add_compare_flags(CLI::App* cmd, CompareFlags& f, bool with_metric) {
  if (with_metric) cmd->add_option("--metric", f.metric, "auc or h, once or per input (default: from file name)");
  cmd->add_option("--subset", f.subset, "comma-separated classifier names to keep");
  cmd->add_option("--rope", f.rope, "rope bounds lo,hi (default: auc -0.01,0.01; h -0.05,0.05)")
      ->allow_extra_args(false);
  cmd->add_option("--alpha", f.alpha, "significance level (0.05)");
  cmd->add_option("--mc", f.mc, "Monte Carlo draws per Bayesian pair")->check(CLI::Range(1000ul, 100000000ul));
  cmd->add_option("--seed", f.seed, "seed of the Bayesian draws");
  cmd->add_option("--out", f.out, "directory for report.md and the CSV files");
}

report::CompareOptions to_options(const CompareFlags& f) {
  report::CompareOptions o;
  o.subset = split_commas(f.subset);
  if (!f.rope.empty()) {
    const auto parts = split_commas(f.rope);
    if (parts.size() != 2) throw ArgumentError("--rope expects lo,hi");
    stats::RopeBounds r;
    try {
      r = {std::stod(parts[0]), std::stod(parts[1])};
    } catch (const std::exception&) {
      throw ArgumentError("--rope expects two numbers, got '" + f.rope + "'");
    }
    r.validate();
    o.rope = r;
  }
  o.alpha = f.alpha;
  o.mc_samples = f.mc;
  o.seed = f.seed;
  return o;
}

int emit_comparison(const std::vector<stats::MetricMatrix>& ms, const std::vector<std::string>& texts,
                    const CompareFlags& f) {
  const auto opts = to_options(f);
  std::vector<report::MetricComparison> cmp;
  for (const auto& m : ms) cmp.push_back(report::compare(m, opts));
  report::Provenance prov{DEFECTBENCH_VERSION, report::options_hash(texts, opts), opts.seed};
  const auto md = report::render_markdown(cmp, opts, prov);
  if (f.out.empty()) {
    std::cout << md;
  } else {
    report::write_report(cmp, opts, prov, f.out);
    for (const auto& c : cmp) std::cout << c.matrix.name << ": " << report::cd_line(c) << '\n';
    std::cout << "report written to " << f.out << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"defectbench: nested cross-validation benchmarks and statistical comparison of defect classifiers"};
  app.set_version_flag("--version", DEFECTBENCH_VERSION);
  app.require_subcommand(1, 1);

  // run
  std::string run_config, run_out;
  bool run_force = false;
  int run_threads = 0;
  auto* run = app.add_subcommand("run", "run an experiment config and persist the result store");
  run->add_option("config", run_config, "experiment config (JSON)")->required();
  run->add_option("--out", run_out, "store directory (default: output_dir from the config)");
  run->add_flag("--force", run_force, "replace an existing store directory");
  run->add_option("--threads", run_threads, "worker threads (default: DEFECTBENCH_THREADS or all cores)");

  // ingest
  std::string ingest_path, ingest_metric, ingest_out;
  auto* ingest = app.add_subcommand("ingest", "validate a published metric table");
  ingest->add_option("matrix", ingest_path, "classifier x dataset CSV")->required();
  ingest->add_option("--metric", ingest_metric, "auc or h (default: from file name)");
  ingest->add_option("--out", ingest_out, "write the validated matrix here");

  // ranks
  std::vector<std::string> ranks_paths, ranks_metric;
  auto* ranks = app.add_subcommand("ranks", "average ranks, one column per matrix");
  ranks->add_option("matrices", ranks_paths, "metric matrix CSVs")->required();
  ranks->add_option("--metric", ranks_metric, "auc or h, once or per input");
  std::string ranks_subset;
  ranks->add_option("--subset", ranks_subset, "comma-separated classifier names to keep");

  // friedman
  std::vector<std::string> fr_paths, fr_metric;
  auto* friedman = app.add_subcommand("friedman", "tie-corrected Friedman test per matrix");
  friedman->add_option("matrices", fr_paths, "metric matrix CSVs")->required();
  friedman->add_option("--metric", fr_metric, "auc or h, once or per input");
  std::string fr_subset;
  friedman->add_option("--subset", fr_subset, "comma-separated classifier names to keep");

  // cd
  int cd_k = 0, cd_n = 0;
  double cd_alpha = 0.05;
  auto* cd = app.add_subcommand("cd", "Nemenyi critical distance");
  cd->add_option("-k,--k", cd_k, "number of classifiers")->required();
  cd->add_option("-n,--n", cd_n, "number of datasets")->required();
  cd->add_option("--alpha", cd_alpha, "significance level (0.05)");

  // compare
  std::vector<std::string> cmp_paths;
  CompareFlags cmp_flags;
  auto* compare = app.add_subcommand("compare", "ranks, Friedman, cd, Nemenyi and Bayesian pairs");
  compare->add_option("matrices", cmp_paths, "metric matrix CSVs")->required();
  add_compare_flags(compare, cmp_flags, true);

  // report
  std::string rep_store;
  CompareFlags rep_flags;
  auto* rep = app.add_subcommand("report", "compare report over the matrices of a result store");
  rep->add_option("store", rep_store, "result store directory")->required()->check(CLI::ExistingDirectory);
  add_compare_flags(rep, rep_flags, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  try {
    if (*run) {
      auto cfg = experiment::load_config(run_config);
      if (run_threads > 0) cfg.threads = run_threads;
      const fs::path out = run_out.empty() ? cfg.output_dir : fs::path(run_out);
      if (out.empty()) throw ConfigError("output_dir", "no store directory; set output_dir or pass --out");
      if (fs::exists(out)) {
        if (!run_force) {
          std::cerr << "error: store directory " << out.string() << " exists; pass --force to replace it\n";
          return kClobber;
        }
        fs::remove_all(out);
      }
      std::cout << "defectbench " << DEFECTBENCH_VERSION << "\n"
                << "master_seed: " << cfg.master_seed << "\n"
                << "seed derivation: " << experiment::seed_derivation_text() << "\n"
                << "datasets: " << cfg.datasets.size() << ", classifiers: " << cfg.classifiers.size()
                << ", outer folds: " << cfg.outer_folds << ", inner folds: " << cfg.inner_folds
                << ", resample: " << experiment::to_string(cfg.resample_mode) << std::endl;
      auto store = experiment::run_experiment(cfg);
      experiment::save_store(store, out);
      const auto failures = store.failures();
      if (!failures.empty()) {
        std::cerr << failures.size() << " task failure(s); store is not publishable:\n";
        for (const auto& f : failures) std::cerr << "  " << f << '\n';
        return kTaskFailure;
      }
      for (auto m : cfg.metrics) {
        const auto matrix = experiment::aggregate(store, m);
        std::cout << "\n" << metrics::to_string(m) << " (fold means)\n";
        std::cout << "classifier";
        for (const auto& d : matrix.datasets) std::cout << ',' << d;
        std::cout << '\n';
        for (std::size_t i = 0; i < matrix.k(); ++i) {
          std::cout << matrix.classifiers[i];
          for (std::size_t j = 0; j < matrix.n(); ++j)
            std::cout << ',' << fmt("%.4f", matrix.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
          std::cout << '\n';
        }
      }
      std::cout << "\nstore written to " << out.string() << '\n';
      return kOk;
    }

    if (*ingest) {
      const auto metric = ingest_metric.empty() ? infer_metric(ingest_path) : ingest_metric;
      auto m = stats::ingest_metric_matrix(ingest_path, std::string(metrics::to_string(metrics::metric_from_string(metric))));
      std::cout << m.name << ": metric=" << m.metric << " k=" << m.k() << " N=" << m.n() << '\n';
      if (!ingest_out.empty()) stats::write_metric_matrix(m, ingest_out);
      return kOk;
    }

    if (*ranks) {
      auto ms = load_matrices(ranks_paths, ranks_metric);
      const auto subset = split_commas(ranks_subset);
      if (!subset.empty())
        for (auto& m : ms) m = m.subset(subset);
      print_ranks(ms, std::cout);
      return kOk;
    }

    if (*friedman) {
      auto ms = load_matrices(fr_paths, fr_metric);
      const auto subset = split_commas(fr_subset);
      std::cout << "matrix,k,N,chi_square,df,p_value\n";
      for (auto& m : ms) {
        if (!subset.empty()) m = m.subset(subset);
        const auto r = stats::friedman_test(m);
        std::cout << m.name << ',' << m.k() << ',' << m.n() << ',' << fmt("%.6f", r.chi_square) << ',' << r.df << ','
                  << fmt("%.6g", r.p_value) << '\n';
      }
      return kOk;
    }

    if (*cd) {
      const double q = stats::nemenyi_q(cd_k, cd_alpha);
      const double d = stats::critical_distance(cd_k, cd_n, q);
      std::cout << "cd(k=" << cd_k << ",N=" << cd_n << ")=" << fmt("%.2f", d) << " (q=" << fmt("%.3f", q)
                << ", exact " << fmt("%.6f", d) << ")\n";
      return kOk;
    }

    if (*compare) {
      std::vector<std::string> texts;
      auto ms = load_matrices(cmp_paths, cmp_flags.metric, &texts);
      return emit_comparison(ms, texts, cmp_flags);
    }

    if (*rep) {
      std::vector<std::string> paths;
      for (const char* m : {"auc", "h"}) {
        const auto p = fs::path(rep_store) / ("matrix_" + std::string(m) + ".csv");
        if (fs::exists(p)) paths.push_back(p.string());
      }
      if (paths.empty())
        throw DataError(rep_store + " has no aggregated matrices (was the run publishable?)");
      std::vector<std::string> texts;
      auto ms = load_matrices(paths, {}, &texts);
      return emit_comparison(ms, texts, rep_flags);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const ArgumentError& e) {
    std::cerr << "argument error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kTaskFailure;
  }
  return kOk;
}
