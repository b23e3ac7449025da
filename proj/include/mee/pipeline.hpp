#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mee/covariate.hpp"
#include "mee/objective.hpp"
#include "mee/tail.hpp"

namespace mee {

// Convergence-rate bookkeeping for one estimation run:
//   delta0      = sqrt(n * (1-alpha_n) * psi_hat)
//   delta_minus1 = (n/kn)^mu
//   delta_gamma = gamma_hat * (1-alpha_n)^(-gamma_hat)
// combined collapses to min(delta_gamma, (n psi_hat)^min(1/2, mu)) when kn is
// coupled to ceil(n psi_hat), else to the minimum of all three.
struct RatePlan {
  double delta0 = 0.0;
  double delta_minus1 = 0.0;
  double delta_gamma = 0.0;
  double combined = 0.0;
};

RatePlan rate_plan(std::size_t n, double alpha_n, double psi_hat, std::size_t kn,
                   double gamma_hat, double mu);

struct EstimationConfig {
  double alpha = 0.995;             // target extreme level
  std::optional<double> bandwidth;  // empty = smallest ball with ceil(n^0.7) points
  Kernel kernel = Kernel::quadratic();
  Metric metric;
  HillConfig hill;                  // alpha_n empty = 1 - kn/n
  std::optional<std::size_t> kn;    // empty = min(ceil(n psi_hat), ceil(n^0.7))
  std::optional<Box> box;           // empty = [1e-3, 1e3]^d
  OptimizerOptions optimizer;
  QuadratureConfig quadrature;
  int lambda_grid_points = 64;
  double mu = 1.0;
};

struct MEEResult {
  ThetaVector theta;
  double gamma = 0.0;
  std::vector<double> c;
  std::vector<double> expectile;
  double q1 = 0.0;      // conditional quantile of margin 1 at alpha
  double h = 0.0;
  double psi = 0.0;
  std::size_t kn = 0;
  double alpha_n = 0.0;
  double loss = 0.0;
  OptimizerReport optimizer;
  std::size_t distinct_minima = 1;
  RatePlan rates;
  std::vector<std::string> warnings;
};

// Full plug-in estimation at covariate point y: weights -> small ball -> kn ->
// tail index -> tail ratios -> pairwise tail dependence grids -> multi-start
// minimization of the system loss over the box -> expectile assembly. Errors
// carry the failing stage.
MEEResult estimate_mee(const Sample& s, const CovariatePoint& y,
                       const EstimationConfig& cfg);

// Diagnostic at a moderate level (inside (0.9, 0.99)): direct weighted
// empirical expectile vs the assembled extreme-form estimate at the same
// level.
struct ModerateCheck {
  std::vector<double> direct;
  std::vector<double> assembled;
  std::vector<double> relative_gap;  // |assembled/direct - 1| per component
};

ModerateCheck moderate_level_check(const Sample& s, const CovariatePoint& y,
                                   const EstimationConfig& cfg,
                                   double alpha_moderate);

}  // namespace mee
