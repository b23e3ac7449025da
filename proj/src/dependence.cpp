#include "mee/dependence.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace mee {

void KnConfig::validate(std::size_t n, const char* stage) const {
  if (!(kn > 1 && kn < n))
    fail(ErrorKind::Parameter, stage,
         "kn must satisfy 1 < kn < n (got " + std::to_string(kn) + ")");
}

namespace {

void check_pair(std::size_t d, std::size_t j, std::size_t k, const char* stage) {
  if (j >= d || k >= d || j == k)
    fail(ErrorKind::Dimension, stage, "margin pair must be distinct and in range");
}

}  // namespace

double copula_from_pseudo(const std::vector<double>& pseudo, std::size_t d,
                          const WeightVector& w, std::size_t j, std::size_t k,
                          double u, double v) {
  check_pair(d, j, k, "copula");
  if (!(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0))
    fail(ErrorKind::Domain, "copula", "arguments must lie in [0, 1]");
  const std::size_t n = w.w.size();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (w.w[i] == 0.0) continue;
    if (pseudo[i * d + j] <= u && pseudo[i * d + k] <= v) s += w.w[i];
  }
  return s;
}

double cond_empirical_copula(const Sample& s, const WeightVector& w, std::size_t j,
                             std::size_t k, double u, double v) {
  check_pair(s.d, j, k, "copula");
  return copula_from_pseudo(pseudo_obs(s, w), s.d, w, j, k, u, v);
}

double stdf_from_pseudo(const std::vector<double>& pseudo, std::size_t d,
                        const WeightVector& w, std::size_t n, std::size_t j,
                        std::size_t k, const KnConfig& kn, double x1, double x2) {
  kn.validate(n, "stdf");
  if (!(x1 >= 0.0) || !(x2 >= 0.0))
    fail(ErrorKind::Domain, "stdf", "arguments must be nonnegative");
  const double ratio = static_cast<double>(kn.kn) / static_cast<double>(n);
  if (ratio * std::max(x1, x2) > 1.0 + 1e-12)
    fail(ErrorKind::Domain, "stdf",
         "(kn/n) * max(x) exceeds 1; the copula argument leaves [0, 1]");
  double u = std::max(0.0, 1.0 - ratio * x1);
  double v = std::max(0.0, 1.0 - ratio * x2);
  double c = copula_from_pseudo(pseudo, d, w, j, k, u, v);
  return (1.0 - c) / ratio;
}

double stdf_hat(const Sample& s, const WeightVector& w, std::size_t j, std::size_t k,
                const KnConfig& kn, double x1, double x2) {
  check_pair(s.d, j, k, "stdf");
  return stdf_from_pseudo(pseudo_obs(s, w), s.d, w, s.n, j, k, kn, x1, x2);
}

double lambda_hat(const Sample& s, const WeightVector& w, std::size_t j, std::size_t k,
                  const KnConfig& kn, double x1, double x2) {
  check_pair(s.d, j, k, "lambda");
  double l = stdf_from_pseudo(pseudo_obs(s, w), s.d, w, s.n, j, k, kn, x1, x2);
  double lam = x1 + x2 - l;
  return std::clamp(lam, 0.0, std::min(x1, x2));
}

double lambda_oracle(LambdaFamily family, double theta, double x1, double x2) {
  if (!(x1 >= 0.0) || !(x2 >= 0.0))
    fail(ErrorKind::Domain, "lambda-oracle", "arguments must be nonnegative");
  switch (family) {
    case LambdaFamily::Independence:
      return 0.0;
    case LambdaFamily::Comonotone:
      return std::min(x1, x2);
    case LambdaFamily::SurvivalClayton: {
      if (!(theta > 0.0))
        fail(ErrorKind::Parameter, "lambda-oracle",
             "survival Clayton requires theta > 0");
      if (x1 == 0.0 || x2 == 0.0) return 0.0;
      return std::pow(std::pow(x1, -theta) + std::pow(x2, -theta), -1.0 / theta);
    }
  }
  fail(ErrorKind::Unsupported, "lambda-oracle", "unknown family");
}

LambdaFunction LambdaFunction::zero() { return LambdaFunction(); }

LambdaFunction LambdaFunction::comonotone() {
  LambdaFunction f;
  f.kind_ = Kind::Comonotone;
  return f;
}

LambdaFunction LambdaFunction::survival_clayton(double theta) {
  if (!(theta > 0.0))
    fail(ErrorKind::Parameter, "lambda", "survival Clayton requires theta > 0");
  LambdaFunction f;
  f.kind_ = Kind::SurvivalClayton;
  f.theta_ = theta;
  return f;
}

LambdaFunction LambdaFunction::oracle(LambdaFamily family, double theta) {
  switch (family) {
    case LambdaFamily::Independence: return zero();
    case LambdaFamily::Comonotone: return comonotone();
    case LambdaFamily::SurvivalClayton: return survival_clayton(theta);
  }
  fail(ErrorKind::Unsupported, "lambda", "unknown family");
}

LambdaFunction LambdaFunction::grid(std::vector<double> u, std::vector<double> value) {
  if (u.size() != value.size() || u.empty())
    fail(ErrorKind::Dimension, "lambda", "grid needs matching nonempty knots");
  double prev = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!(u[i] > prev))
      fail(ErrorKind::Domain, "lambda", "grid knots must be positive and increasing");
    prev = u[i];
    // Frechet bounds; interpolation stays inside them because min(u,1) is
    // concave and 0 is linear.
    value[i] = std::clamp(value[i], 0.0, std::min(u[i], 1.0));
  }
  LambdaFunction f;
  f.kind_ = Kind::Grid;
  f.knots_u_ = std::move(u);
  f.knots_v_ = std::move(value);
  return f;
}

double LambdaFunction::section(double u) const {
  if (!(u >= 0.0))
    fail(ErrorKind::Domain, "lambda", "section argument must be nonnegative");
  switch (kind_) {
    case Kind::Zero:
      return 0.0;
    case Kind::Comonotone:
      return std::min(u, 1.0);
    case Kind::SurvivalClayton:
      if (u == 0.0) return 0.0;
      return std::pow(std::pow(u, -theta_) + 1.0, -1.0 / theta_);
    case Kind::Grid: {
      if (u == 0.0) return 0.0;
      if (u >= knots_u_.back()) return knots_v_.back();
      auto it = std::upper_bound(knots_u_.begin(), knots_u_.end(), u);
      auto hi = static_cast<std::size_t>(it - knots_u_.begin());
      double u0 = hi == 0 ? 0.0 : knots_u_[hi - 1];
      double v0 = hi == 0 ? 0.0 : knots_v_[hi - 1];
      double t = (u - u0) / (knots_u_[hi] - u0);
      return v0 + t * (knots_v_[hi] - v0);
    }
  }
  return 0.0;
}

double LambdaFunction::pair(double x1, double x2) const {
  if (!(x1 >= 0.0) || !(x2 >= 0.0))
    fail(ErrorKind::Domain, "lambda", "arguments must be nonnegative");
  switch (kind_) {
    case Kind::Zero: return 0.0;
    case Kind::Comonotone: return std::min(x1, x2);
    case Kind::SurvivalClayton:
      if (x1 == 0.0 || x2 == 0.0) return 0.0;
      return std::pow(std::pow(x1, -theta_) + std::pow(x2, -theta_), -1.0 / theta_);
    case Kind::Grid:
      if (x2 == 0.0) return 0.0;
      return x2 * section(x1 / x2);  // degree-1 homogeneous extension
  }
  return 0.0;
}

std::vector<double> LambdaFunction::breakpoints(double lo, double hi) const {
  std::vector<double> b;
  if (kind_ == Kind::Comonotone) {
    if (lo < 1.0 && 1.0 < hi) b.push_back(1.0);
  } else if (kind_ == Kind::Grid) {
    for (double u : knots_u_)
      if (lo < u && u < hi) b.push_back(u);
  }
  return b;
}

namespace {

LambdaFunction build_lambda_grid(const std::vector<double>& pseudo, std::size_t d,
                                 const WeightVector& w, std::size_t n, std::size_t j,
                                 std::size_t k, const KnConfig& kn, double u_max,
                                 int points) {
  kn.validate(n, "lambda");
  if (points < 2)
    fail(ErrorKind::Parameter, "lambda", "grid needs at least two points");
  if (!(u_max > 0.0) || !std::isfinite(u_max))
    fail(ErrorKind::Domain, "lambda", "u_max must be positive and finite");
  const double cap = static_cast<double>(n) / static_cast<double>(kn.kn);
  const double top = std::min(u_max, cap);
  const double bottom = top * 1e-5;
  std::vector<double> us(static_cast<std::size_t>(points));
  std::vector<double> vs(static_cast<std::size_t>(points));
  const double ratio = std::pow(top / bottom, 1.0 / (points - 1.0));
  double u = bottom;
  for (int i = 0; i < points; ++i) {
    if (i == points - 1) u = top;
    double l = stdf_from_pseudo(pseudo, d, w, n, j, k, kn, u, 1.0);
    us[static_cast<std::size_t>(i)] = u;
    vs[static_cast<std::size_t>(i)] = u + 1.0 - l;  // clamped by grid()
    u *= ratio;
  }
  return LambdaFunction::grid(std::move(us), std::move(vs));
}

}  // namespace

LambdaFunction lambda_grid_from_pseudo(const std::vector<double>& pseudo,
                                       std::size_t d, const WeightVector& w,
                                       std::size_t n, std::size_t j, std::size_t k,
                                       const KnConfig& kn, double u_max, int points) {
  check_pair(d, j, k, "lambda");
  return build_lambda_grid(pseudo, d, w, n, j, k, kn, u_max, points);
}

LambdaFunction lambda_grid(const Sample& s, const WeightVector& w, std::size_t j,
                           std::size_t k, const KnConfig& kn, double u_max,
                           int points) {
  check_pair(s.d, j, k, "lambda");
  return build_lambda_grid(pseudo_obs(s, w), s.d, w, s.n, j, k, kn, u_max, points);
}

}  // namespace mee
