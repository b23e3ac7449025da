#pragma once

#include <cstddef>
#include <vector>

#include "mee/covariate.hpp"

namespace mee {

// (X_i, Y_i) pairs: responses are rows of x (n by d, row-major), covariates
// share one grid size. d = 1 is allowed at this level (the univariate direct
// expectile uses it); the estimation pipeline requires d >= 2.
struct Sample {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<double> x;
  std::vector<CovariatePoint> y;

  double xat(std::size_t i, std::size_t j) const { return x[i * d + j]; }

  static Sample make(std::size_t n, std::size_t d, std::vector<double> x,
                     std::vector<CovariatePoint> y);
  void validate(const char* stage = "sample") const;
};

// Weighted empirical distribution of one response margin. Only observations
// with positive weight appear; values are sorted ascending and cumw[i] is the
// total weight of values <= values[i] (cumw.back() == 1).
struct CondEcdf {
  std::size_t margin = 0;
  std::vector<double> values;
  std::vector<double> cumw;

  double cdf(double x) const;
  // Left-continuous generalized inverse: inf{x : F(x) >= alpha}; alpha = 0
  // returns the smallest carried value.
  double quantile(double alpha) const;
};

CondEcdf make_cond_ecdf(const Sample& s, const WeightVector& w, std::size_t j);

double cond_marginal_ecdf(const Sample& s, const WeightVector& w, std::size_t j,
                          double x);
double cond_quantile(const Sample& s, const WeightVector& w, std::size_t j,
                     double alpha);

// Weighted ranks p[i*d+j] = F_hat_j(X_ij); tied values share the cumulative
// weight through the last tie.
std::vector<double> pseudo_obs(const Sample& s, const WeightVector& w);

}  // namespace mee
