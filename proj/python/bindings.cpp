#include "defectbench/error.hpp"
#include "defectbench/experiment.hpp"
#include "defectbench/metrics.hpp"
#include "defectbench/stattests.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace defectbench;

PYBIND11_MODULE(_defectbench, m) {
  m.doc() = "defectbench core: metrics and classifier comparison statistics";
  m.attr("__version__") = DEFECTBENCH_VERSION;

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DataError>(m, "DataError", base.ptr());
  py::register_exception<ArgumentError>(m, "ArgumentError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

  m.def("auc", [](const std::vector<double>& s, const std::vector<int>& y) { return metrics::auc(s, y); },
        py::arg("scores"), py::arg("labels"));
  m.def(
      "h_measure",
      [](const std::vector<double>& s, const std::vector<int>& y, double alpha, double beta) {
        return metrics::h_measure(s, y, metrics::CostWeighting{alpha, beta});
      },
      py::arg("scores"), py::arg("labels"), py::arg("alpha") = 2.0, py::arg("beta") = 2.0);
  m.def("pearson_correlation",
        [](const std::vector<double>& a, const std::vector<double>& b) { return metrics::pearson_correlation(a, b); });

  py::class_<stats::MetricMatrix>(m, "MetricMatrix")
      .def(py::init([](std::vector<std::string> classifiers, std::vector<std::string> datasets,
                       Eigen::MatrixXd values, std::string metric, std::string name) {
             stats::MetricMatrix mm{std::move(metric), std::move(name), std::move(classifiers), std::move(datasets),
                                    std::move(values)};
             mm.validate();
             return mm;
           }),
           py::arg("classifiers"), py::arg("datasets"), py::arg("values"), py::arg("metric") = "",
           py::arg("name") = "")
      .def_readonly("metric", &stats::MetricMatrix::metric)
      .def_readonly("name", &stats::MetricMatrix::name)
      .def_readonly("classifiers", &stats::MetricMatrix::classifiers)
      .def_readonly("datasets", &stats::MetricMatrix::datasets)
      .def_readonly("values", &stats::MetricMatrix::values)
      .def("subset", &stats::MetricMatrix::subset);

  m.def("ingest_metric_matrix", &stats::ingest_metric_matrix, py::arg("path"), py::arg("metric") = "");

  py::class_<stats::RankTable>(m, "RankTable")
      .def_readonly("classifiers", &stats::RankTable::classifiers)
      .def_readonly("average", &stats::RankTable::average)
      .def_readonly("ranks", &stats::RankTable::ranks);
  m.def("average_ranks", &stats::average_ranks);

  py::class_<stats::FriedmanResult>(m, "FriedmanResult")
      .def_readonly("chi_square", &stats::FriedmanResult::chi_square)
      .def_readonly("df", &stats::FriedmanResult::df)
      .def_readonly("p_value", &stats::FriedmanResult::p_value);
  m.def("friedman_test", &stats::friedman_test);
  m.def("nemenyi_q", &stats::nemenyi_q, py::arg("k"), py::arg("alpha") = 0.05);
  m.def("critical_distance", &stats::critical_distance, py::arg("k"), py::arg("n_datasets"), py::arg("q_alpha"));

  py::class_<stats::WilcoxonResult>(m, "WilcoxonResult")
      .def_readonly("statistic", &stats::WilcoxonResult::statistic)
      .def_readonly("p_value", &stats::WilcoxonResult::p_value)
      .def_readonly("n_effective", &stats::WilcoxonResult::n_effective)
      .def_readonly("exact", &stats::WilcoxonResult::exact)
      .def_readonly("degenerate", &stats::WilcoxonResult::degenerate);
  m.def(
      "wilcoxon_signed_rank",
      [](const std::vector<double>& a, const std::vector<double>& b) { return stats::wilcoxon_signed_rank(a, b); },
      py::arg("a"), py::arg("b"));

  py::class_<stats::PosteriorTriple>(m, "PosteriorTriple")
      .def_readonly("p_left", &stats::PosteriorTriple::p_left)
      .def_readonly("p_rope", &stats::PosteriorTriple::p_rope)
      .def_readonly("p_right", &stats::PosteriorTriple::p_right)
      .def_property_readonly("verdict",
                             [](const stats::PosteriorTriple& p) { return std::string(stats::to_string(p.verdict)); });
  m.def(
      "bayesian_rope_test",
      [](const std::vector<double>& a, const std::vector<double>& b, std::pair<double, double> rope,
         std::size_t mc_samples, std::uint64_t seed) {
        stats::BayesOptions o;
        o.mc_samples = mc_samples;
        o.seed = seed;
        return stats::bayesian_rope_test(a, b, {rope.first, rope.second}, o);
      },
      py::arg("a"), py::arg("b"), py::arg("rope") = std::pair<double, double>{-0.01, 0.01},
      py::arg("mc_samples") = 50000, py::arg("seed") = 0);

  m.def(
      "run_experiment",
      [](const std::filesystem::path& config, const std::filesystem::path& out) {
        auto cfg = experiment::load_config(config);
        py::gil_scoped_release release;
        const auto store = experiment::run_experiment(cfg);
        experiment::save_store(store, out);
        return store.failures();
      },
      py::arg("config"), py::arg("out"),
      "Runs a config and writes the store to `out`; returns the list of task failures.");
}
