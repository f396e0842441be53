#include "defectbench/report.hpp"

#include "csv.hpp"
#include "defectbench/error.hpp"
#include "defectbench/seed.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace defectbench::report {

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string short_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string rope_text(const stats::RopeBounds& r) { return "[" + short_num(r.lower) + "," + short_num(r.upper) + "]"; }

// Pairwise summary cell: the winner's name, otherwise "pe".
std::string table7_cell(const MetricComparison& c, const BayesPair& p) {
  switch (p.posterior.verdict) {
    case stats::Verdict::right_wins: return c.matrix.classifiers[p.i];
    case stats::Verdict::left_wins: return c.matrix.classifiers[p.j];
    default: return "pe";
  }
}

void open_out(std::ofstream& out, const std::filesystem::path& path) {
  out.open(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
}

std::string provenance_comment(const Provenance& prov) {
  return "# defectbench " + prov.tool_version + " config_hash=" + prov.config_hash +
         " seed=" + std::to_string(prov.seed) + "\n";
}

}  // namespace

MetricComparison compare(const stats::MetricMatrix& input, const CompareOptions& opts) {
  input.validate();
  MetricComparison c;
  c.matrix = opts.subset.empty() ? input : input.subset(opts.subset);
  if (c.matrix.k() < 2) throw ArgumentError("compare needs at least 2 classifiers after subsetting");
  c.matrix.validate();

  const int k = static_cast<int>(c.matrix.k());
  const int n = static_cast<int>(c.matrix.n());
  c.ranks = stats::average_ranks(c.matrix);
  if (k >= 3) c.friedman = stats::friedman_test(c.matrix);
  c.q = stats::nemenyi_q(k, opts.alpha);
  c.cd = stats::critical_distance(k, n, c.q);
  c.nemenyi = stats::nemenyi_pairwise(c.ranks, c.cd);

  if (opts.rope)
    c.rope = *opts.rope;
  else
    c.rope = stats::default_rope(metrics::metric_from_string(c.matrix.metric.empty() ? "auc" : c.matrix.metric));
  c.rope.validate();

  for (std::size_t i = 0; i < c.matrix.k(); ++i)
    for (std::size_t j = i + 1; j < c.matrix.k(); ++j) {
      const auto a = c.matrix.row(c.matrix.classifiers[i]);
      const auto b = c.matrix.row(c.matrix.classifiers[j]);
      stats::BayesOptions bo;
      bo.mc_samples = opts.mc_samples;
      bo.prior_strength = opts.prior_strength;
      bo.seed = derive_seed(opts.seed, {c.matrix.name, c.matrix.classifiers[i], c.matrix.classifiers[j]});
      BayesPair pair{i, j, stats::bayesian_rope_test(a, b, c.rope, bo), std::nullopt};
      std::size_t nonzero = 0;
      for (std::size_t t = 0; t < a.size(); ++t) nonzero += a[t] != b[t];
      if (nonzero == 0 || nonzero >= 5) pair.wilcoxon = stats::wilcoxon_signed_rank(a, b);
      c.bayes.push_back(std::move(pair));
    }
  return c;
}

std::vector<std::vector<std::size_t>> cd_cliques(const stats::RankTable& ranks, double cd) {
  std::vector<std::size_t> order(ranks.average.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return ranks.average[a] < ranks.average[b]; });
  std::vector<std::vector<std::size_t>> out;
  std::size_t last_end = 0;
  for (std::size_t s = 0; s < order.size(); ++s) {
    std::size_t e = s;
    while (e + 1 < order.size() && ranks.average[order[e + 1]] - ranks.average[order[s]] < cd - 1e-12) ++e;
    // A clique ending where the previous one ended is contained in it.
    if (e > s && (out.empty() || e > last_end)) {
      out.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(s), order.begin() + static_cast<std::ptrdiff_t>(e) + 1);
      last_end = e;
    }
  }
  return out;
}

std::string options_hash(const std::vector<std::string>& input_texts, const CompareOptions& opts) {
  std::uint64_t h = fnv1a64("defectbench-compare");
  for (const auto& t : input_texts) h = fnv1a64(t, fnv1a64("\x1f", h));
  std::ostringstream o;
  o << "subset=";
  for (const auto& s : opts.subset) o << s << ';';
  o << "|rope=" << (opts.rope ? rope_text(*opts.rope) : "default") << "|alpha=" << short_num(opts.alpha)
    << "|mc=" << opts.mc_samples << "|seed=" << opts.seed << "|prior=" << short_num(opts.prior_strength);
  h = fnv1a64(o.str(), h);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string cd_line(const MetricComparison& c) {
  return "cd(k=" + std::to_string(c.matrix.k()) + ",N=" + std::to_string(c.matrix.n()) + ")=" + fixed(c.cd, 2);
}

std::string render_markdown(const std::vector<MetricComparison>& cmp, const CompareOptions& opts,
                            const Provenance& prov) {
  std::ostringstream o;
  o << "# Classifier comparison\n\n";
  o << "- tool: defectbench " << prov.tool_version << "\n";
  o << "- config_hash: " << prov.config_hash << "\n";
  o << "- seed: " << prov.seed << "\n";
  o << "- alpha: " << short_num(opts.alpha) << "\n";
  o << "- mc_samples: " << opts.mc_samples << "\n";
  o << "- prior_strength: " << short_num(opts.prior_strength) << "\n";
  for (const auto& c : cmp)
    o << "- rope(" << c.matrix.name << ", " << c.matrix.metric << "): " << rope_text(c.rope) << "\n";
  if (!opts.subset.empty()) {
    o << "- subset:";
    for (const auto& s : opts.subset) o << ' ' << s;
    o << "\n";
  }

  if (cmp.empty()) return o.str();
  o << "\n## Average ranks\n\n| classifier |";
  for (const auto& c : cmp) o << ' ' << c.matrix.name << " |";
  o << "\n|---|";
  for (std::size_t t = 0; t < cmp.size(); ++t) o << "---:|";
  o << "\n";
  for (std::size_t i = 0; i < cmp.front().matrix.k(); ++i) {
    const auto& name = cmp.front().matrix.classifiers[i];
    o << "| " << name << " |";
    for (const auto& c : cmp) o << ' ' << fixed(c.ranks.average[c.matrix.index_of(name)], 2) << " |";
    o << "\n";
  }

  for (const auto& c : cmp) {
    o << "\n## " << c.matrix.name << " (" << c.matrix.metric << ")\n\n";
    if (c.friedman)
      o << "friedman: chi2=" << fixed(c.friedman->chi_square, 4) << " df=" << c.friedman->df
        << " p=" << short_num(c.friedman->p_value) << "\n";
    else
      o << "friedman: not applicable for k=2, see the Wilcoxon column below\n";
    o << cd_line(c) << " (q=" << fixed(c.q, 3) << ")\n\n";

    o << "Nemenyi pairs with rank gap >= cd:\n\n";
    bool any = false;
    for (const auto& p : c.nemenyi)
      if (p.significant) {
        o << "- " << c.matrix.classifiers[p.i] << " vs " << c.matrix.classifiers[p.j] << ": gap "
          << fixed(p.rank_gap, 3) << "\n";
        any = true;
      }
    if (!any) o << "- none\n";

    o << "\nCritical-distance groups:\n\n";
    for (const auto& g : cd_cliques(c.ranks, c.cd)) {
      o << "-";
      for (auto i : g) o << ' ' << c.matrix.classifiers[i];
      o << "\n";
    }

    o << "\nBayesian pairs:\n\n| classifier 1 | classifier 2 | p_left | p_rope | p_right | verdict | wilcoxon p | "
      << "winner |\n|---|---|---:|---:|---:|---|---:|---|\n";
    for (const auto& p : c.bayes) {
      o << "| " << c.matrix.classifiers[p.i] << " | " << c.matrix.classifiers[p.j] << " | "
        << fixed(p.posterior.p_left, 4) << " | " << fixed(p.posterior.p_rope, 4) << " | "
        << fixed(p.posterior.p_right, 4) << " | " << stats::to_string(p.posterior.verdict) << " | "
        << (p.wilcoxon ? short_num(p.wilcoxon->p_value) : std::string("-")) << " | " << table7_cell(c, p) << " |\n";
    }
  }
  return o.str();
}

void write_report(const std::vector<MetricComparison>& cmp, const CompareOptions& opts, const Provenance& prov,
                  const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out;
    open_out(out, dir / "report.md");
    out << render_markdown(cmp, opts, prov);
  }
  if (cmp.empty()) return;
  const auto head = provenance_comment(prov);

  {
    std::ofstream out;
    open_out(out, dir / "ranks.csv");
    out << head << "classifier";
    for (const auto& c : cmp) out << ',' << csv::escape(c.matrix.name);
    out << '\n';
    for (const auto& name : cmp.front().matrix.classifiers) {
      out << csv::escape(name);
      for (const auto& c : cmp) out << ',' << csv::format_double(c.ranks.average[c.matrix.index_of(name)]);
      out << '\n';
    }
  }
  {
    std::ofstream out;
    open_out(out, dir / "friedman.csv");
    out << head << "matrix,metric,k,N,chi_square,df,p_value,q_alpha,cd\n";
    for (const auto& c : cmp) {
      out << csv::escape(c.matrix.name) << ',' << c.matrix.metric << ',' << c.matrix.k() << ',' << c.matrix.n()
          << ',';
      if (c.friedman)
        out << csv::format_double(c.friedman->chi_square) << ',' << c.friedman->df << ','
            << csv::format_double(c.friedman->p_value);
      else
        out << ",,";
      out << ',' << csv::format_double(c.q) << ',' << csv::format_double(c.cd) << '\n';
    }
  }
  {
    std::ofstream out;
    open_out(out, dir / "nemenyi.csv");
    out << head << "matrix,classifier1,classifier2,rank_gap,cd,significant\n";
    for (const auto& c : cmp)
      for (const auto& p : c.nemenyi)
        out << csv::escape(c.matrix.name) << ',' << csv::escape(c.matrix.classifiers[p.i]) << ','
            << csv::escape(c.matrix.classifiers[p.j]) << ',' << csv::format_double(p.rank_gap) << ','
            << csv::format_double(c.cd) << ',' << (p.significant ? 1 : 0) << '\n';
  }
  {
    // Pairs are keyed by the first matrix's row order.
    std::ofstream out;
    open_out(out, dir / "bayes.csv");
    out << head << "classifier1,classifier2";
    for (const auto& c : cmp) out << ',' << csv::escape(c.matrix.name);
    out << '\n';
    for (std::size_t t = 0; t < cmp.front().bayes.size(); ++t) {
      const auto& first = cmp.front();
      const auto& a = first.matrix.classifiers[first.bayes[t].i];
      const auto& b = first.matrix.classifiers[first.bayes[t].j];
      out << csv::escape(a) << ',' << csv::escape(b);
      for (const auto& c : cmp) {
        const auto ia = c.matrix.index_of(a), ib = c.matrix.index_of(b);
        for (const auto& p : c.bayes)
          if ((p.i == ia && p.j == ib) || (p.i == ib && p.j == ia)) out << ',' << csv::escape(table7_cell(c, p));
      }
      out << '\n';
    }
  }
  {
    std::ofstream out;
    open_out(out, dir / "bayes_details.csv");
    out << head
        << "matrix,classifier1,classifier2,rope_lower,rope_upper,p_left,p_rope,p_right,verdict,mc_samples,seed,"
           "wilcoxon_stat,wilcoxon_p\n";
    for (const auto& c : cmp)
      for (const auto& p : c.bayes) {
        out << csv::escape(c.matrix.name) << ',' << csv::escape(c.matrix.classifiers[p.i]) << ','
            << csv::escape(c.matrix.classifiers[p.j]) << ',' << csv::format_double(c.rope.lower) << ','
            << csv::format_double(c.rope.upper) << ',' << csv::format_double(p.posterior.p_left) << ','
            << csv::format_double(p.posterior.p_rope) << ',' << csv::format_double(p.posterior.p_right) << ','
            << stats::to_string(p.posterior.verdict) << ',' << p.posterior.mc_samples << ',' << p.posterior.seed
            << ',';
        if (p.wilcoxon)
          out << csv::format_double(p.wilcoxon->statistic) << ',' << csv::format_double(p.wilcoxon->p_value);
        else
          out << ',';
        out << '\n';
      }
  }
  {
    // Plot data: one rank marker per classifier, the cd bar, and group bars.
    std::ofstream out;
    open_out(out, dir / "cd_diagram.csv");
    out << head << "matrix,kind,label,x_start,x_end,level\n";
    for (const auto& c : cmp) {
      const auto& name = csv::escape(c.matrix.name);
      out << name << ",cd_bar,cd," << csv::format_double(1.0) << ',' << csv::format_double(1.0 + c.cd) << ",0\n";
      for (std::size_t i = 0; i < c.matrix.k(); ++i)
        out << name << ",rank," << csv::escape(c.matrix.classifiers[i]) << ','
            << csv::format_double(c.ranks.average[i]) << ',' << csv::format_double(c.ranks.average[i]) << ",0\n";
      int level = 1;
      for (const auto& g : cd_cliques(c.ranks, c.cd)) {
        std::string label;
        double lo = c.ranks.average[g.front()], hi = lo;
        for (auto i : g) {
          label += (label.empty() ? "" : ";") + c.matrix.classifiers[i];
          lo = std::min(lo, c.ranks.average[i]);
          hi = std::max(hi, c.ranks.average[i]);
        }
        out << name << ",group," << csv::escape(label) << ',' << csv::format_double(lo) << ','
            << csv::format_double(hi) << ',' << level++ << '\n';
      }
    }
  }
}

}  // namespace defectbench::report
