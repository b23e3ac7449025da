#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mee/io.hpp"
#include "mee/models.hpp"
#include "mee/pipeline.hpp"

namespace mee {

struct ExperimentConfig {
  ConditionalModel model;
  std::vector<std::size_t> sample_sizes;
  std::size_t replications = 1;
  std::uint64_t master_seed = 1;
  EstimationConfig estimation;
  // Evaluation covariate point; empty = the process mean curve.
  std::optional<std::vector<double>> y_values;
  std::string output;

  CovariatePoint eval_point() const;
};

ExperimentConfig experiment_from_json_text(const std::string& text,
                                           const std::string& name);
ExperimentConfig experiment_from_json_file(const std::string& path);

// Worker-thread cap: explicit override, else MEE_THREADS, else hardware
// concurrency.
unsigned resolve_threads(std::optional<unsigned> override_threads);

// Runs every (n, rep) cell with a per-row seed derived from the master seed.
// Row order and content are independent of the thread count (wall_time_ms
// aside); failures become rows with converged = false and the stage tag.
std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg, unsigned threads);

}  // namespace mee
