#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace mee {

// Axis-aligned box; infinite bounds are allowed.
struct Box {
  std::vector<double> lower;
  std::vector<double> upper;

  static Box cube(std::size_t dim, double lo, double hi);
  std::size_t dim() const { return lower.size(); }
  bool contains(const std::vector<double>& x) const;
  std::vector<double> clamp(const std::vector<double>& x) const;
  void validate(const char* stage = "optimize") const;
};

struct OptimizerOptions {
  int memory = 7;          // limited-memory pairs
  double grad_tol = 1e-8;  // projected-gradient sup norm
  int max_iter = 500;
  double armijo_c1 = 1e-4;
  double wolfe_c2 = 0.9;   // curvature fraction, armijo_c1 < wolfe_c2 < 1
  int max_backtracks = 60;  // line-search trials per iterate
};

struct OptimizerReport {
  std::vector<double> x;
  double f = 0.0;
  double pg_norm = 0.0;
  int iterations = 0;
  int fevals = 0;
  int gevals = 0;
  int restarts_used = 0;
  bool converged = false;
  std::vector<double> accepted_f;  // objective at x0 and each accepted iterate
};

using ObjectiveFn = std::function<double(const std::vector<double>&)>;
using GradientFn = std::function<std::vector<double>(const std::vector<double>&)>;

/// Projected quasi-Newton descent: limited-memory inverse-Hessian direction on
// the free variables, weak Wolfe search along the projection arc. Non-finite
// values at the start point raise a numeric error; hitting max_iter returns
// converged = false.
OptimizerReport minimize_box(const ObjectiveFn& f, const GradientFn& g,
                             const Box& box, std::vector<double> x0,
                             const OptimizerOptions& opts = {});

struct MultiStartReport {
  OptimizerReport best;
  // Converged end points, deduplicated at pairwise Euclidean distance 1e-4.
  std::vector<std::vector<double>> minima;
  std::vector<double> minima_f;
};

MultiStartReport multi_start_minimize(const ObjectiveFn& f, const GradientFn& g,
                                      const Box& box,
                                      const std::vector<std::vector<double>>& starts,
                                      const OptimizerOptions& opts = {});

}  // namespace mee
