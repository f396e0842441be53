#include "defectbench/learners.hpp"
#include "defectbench/sampling.hpp"
#include "defectbench/seed.hpp"

namespace defectbench::learn {

ClassifierSpec select_candidate(const CandidateGrid& grid, const data::Dataset& train, int inner_k,
                                metrics::Metric metric, std::uint64_t seed, SelectionTrace* trace,
                                const metrics::CostWeighting& weighting) {
  grid.validate();
  if (grid.candidates.size() == 1) {
    if (trace) *trace = SelectionTrace{{}, {}, 0};
    return grid.candidates.front();
  }

  const auto plan = sampling::stratified_folds(train.labels, inner_k, child_seed(seed, 0));
  std::vector<double> total(grid.candidates.size(), 0.0);
  for (int f = 0; f < inner_k; ++f) {
    const auto fit_part = train.select_rows(plan.train_indices(f));
    const auto held_out = train.select_rows(plan.test_indices(f));
    for (std::size_t c = 0; c < grid.candidates.size(); ++c) {
      const auto model = fit(grid.candidates[c], fit_part, child_seed(seed, static_cast<std::uint64_t>(f) + 1));
      const data::Vector s = predict_scores(model, held_out.features);
      total[c] += metrics::evaluate(metric, {s.data(), static_cast<std::size_t>(s.size())}, held_out.labels,
                                    weighting);
    }
  }
  std::size_t best = 0;
  for (std::size_t c = 0; c < total.size(); ++c) {
    total[c] /= inner_k;
    if (total[c] > total[best]) best = c;
  }
  if (trace) *trace = SelectionTrace{total, plan.assignment, best};
  return grid.candidates[best];
}

}  // namespace defectbench::learn
