#include "mee/conditional.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace mee {

Sample Sample::make(std::size_t n, std::size_t d, std::vector<double> x,
                    std::vector<CovariatePoint> y) {
  Sample s;
  s.n = n;
  s.d = d;
  s.x = std::move(x);
  s.y = std::move(y);
  s.validate();
  return s;
}

void Sample::validate(const char* stage) const {
  if (n == 0) fail(ErrorKind::Dimension, stage, "sample must hold at least one row");
  if (d == 0) fail(ErrorKind::Dimension, stage, "response dimension must be positive");
  if (x.size() != n * d)
    fail(ErrorKind::Dimension, stage, "response matrix size does not match n*d");
  if (y.size() != n)
    fail(ErrorKind::Dimension, stage, "one covariate curve per observation required");
  const std::size_t p = y.front().grid_size();
  for (const auto& c : y) {
    c.validate(stage);
    if (c.grid_size() != p)
      fail(ErrorKind::Dimension, stage, "covariate curves must share one grid");
  }
  for (double v : x)
    if (!std::isfinite(v)) fail(ErrorKind::Domain, stage, "responses must be finite");
}

namespace {

void check_margin(const Sample& s, const WeightVector& w, std::size_t j,
                  const char* stage) {
  if (j >= s.d) fail(ErrorKind::Dimension, stage, "margin index out of range");
  if (w.w.size() != s.n)
    fail(ErrorKind::Dimension, stage, "weight vector length must equal n");
}

}  // namespace

CondEcdf make_cond_ecdf(const Sample& s, const WeightVector& w, std::size_t j) {
  check_margin(s, w, j, "conditional-ecdf");
  std::vector<std::size_t> idx;
  idx.reserve(s.n);
  for (std::size_t i = 0; i < s.n; ++i)
    if (w.w[i] > 0.0) idx.push_back(i);
  if (idx.empty())
    fail(ErrorKind::EmptyNeighborhood, "conditional-ecdf",
         "all weights vanish on margin " + std::to_string(j + 1));
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return s.xat(a, j) < s.xat(b, j);
  });

  CondEcdf e;
  e.margin = j;
  e.values.reserve(idx.size());
  e.cumw.reserve(idx.size());
  double cum = 0.0;
  for (std::size_t i : idx) {
    double v = s.xat(i, j);
    cum += w.w[i];
    if (!e.values.empty() && v == e.values.back())
      e.cumw.back() = cum;  // merge ties into one jump
    else {
      e.values.push_back(v);
      e.cumw.push_back(cum);
    }
  }
  e.cumw.back() = 1.0;  // absorb summation rounding
  return e;
}

double CondEcdf::cdf(double x) const {
  auto it = std::upper_bound(values.begin(), values.end(), x);
  if (it == values.begin()) return 0.0;
  return cumw[static_cast<std::size_t>(it - values.begin()) - 1];
}

double CondEcdf::quantile(double alpha) const {
  if (!(alpha >= 0.0 && alpha <= 1.0) || !std::isfinite(alpha))
    fail(ErrorKind::Domain, "conditional-quantile", "level must lie in [0, 1]");
  auto it = std::lower_bound(cumw.begin(), cumw.end(), alpha);
  if (it == cumw.end()) return values.back();
  return values[static_cast<std::size_t>(it - cumw.begin())];
}

double cond_marginal_ecdf(const Sample& s, const WeightVector& w, std::size_t j,
                          double x) {
  return make_cond_ecdf(s, w, j).cdf(x);
}

double cond_quantile(const Sample& s, const WeightVector& w, std::size_t j,
                     double alpha) {
  return make_cond_ecdf(s, w, j).quantile(alpha);
}

std::vector<double> pseudo_obs(const Sample& s, const WeightVector& w) {
  if (w.w.size() != s.n)
    fail(ErrorKind::Dimension, "pseudo-obs", "weight vector length must equal n");
  std::vector<double> p(s.n * s.d, 0.0);
  std::vector<std::size_t> idx(s.n);
  for (std::size_t j = 0; j < s.d; ++j) {
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return s.xat(a, j) < s.xat(b, j);
    });
    double cum = 0.0;
    std::size_t i = 0;
    while (i < s.n) {
      std::size_t g = i;
      double v = s.xat(idx[i], j);
      while (g < s.n && s.xat(idx[g], j) == v) {
        cum += w.w[idx[g]];
        ++g;
      }
      // Weight roundoff can push the last group a few ulp above one.
      for (std::size_t t = i; t < g; ++t)
        p[idx[t] * s.d + j] = std::min(cum, 1.0);
      i = g;
    }
  }
  return p;
}

}  // namespace mee
