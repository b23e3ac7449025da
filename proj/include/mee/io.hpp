#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mee/conditional.hpp"
#include "mee/models.hpp"
#include "mee/pipeline.hpp"

namespace mee {

// Shortest representation that round-trips a double exactly.
std::string format_double(double v);

// Dataset CSV: header x_1,...,x_d,y_1,...,y_p then one row per observation.
// Parse errors name the offending row and column.
Sample read_dataset_csv(const std::string& path);
Sample parse_dataset_csv(std::istream& in, const std::string& name);
void write_dataset_csv(const Sample& s, const std::string& path);
void write_dataset_csv(const Sample& s, std::ostream& out);

// One experiment row. Numeric fields are empty in the CSV when the run failed
// (converged = false, error = failing stage) or when no reference root exists.
struct ResultRow {
  std::size_t n = 0;
  std::size_t rep = 0;
  std::uint64_t seed = 0;
  std::optional<double> gamma_hat;
  std::vector<double> c_hat;
  std::optional<ThetaVector> theta_hat;
  std::optional<ThetaVector> theta_star;
  std::optional<double> l1_error;
  std::vector<double> expectile;
  std::optional<double> rate_combined;
  double wall_time_ms = 0.0;
  bool converged = false;
  std::string error;
};

std::vector<std::string> result_row_columns(std::size_t d);
void write_result_rows_csv(const std::vector<ResultRow>& rows, std::size_t d,
                           std::ostream& out);
void write_result_rows_csv(const std::vector<ResultRow>& rows, std::size_t d,
                           const std::string& path);

// JSON views.
std::string mee_result_to_json(const MEEResult& r);
std::string rate_plan_to_json(const RatePlan& r);

// Model/config parsing (JSON). Throws parse errors with the source name.
ConditionalModel model_from_json_text(const std::string& text, const std::string& name);
ConditionalModel model_from_json_file(const std::string& path);

}  // namespace mee
