#include "mee/covariate.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "mee/conditional.hpp"

namespace mee {

double CovariatePoint::mean() const {
  if (values.empty()) return 0.0;
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

void CovariatePoint::validate(const char* stage) const {
  if (values.empty())
    fail(ErrorKind::Dimension, stage, "covariate grid must hold at least one point");
  for (double v : values)
    if (!std::isfinite(v))
      fail(ErrorKind::Domain, stage, "covariate values must be finite");
}

double distance(const CovariatePoint& a, const CovariatePoint& b, const Metric& m) {
  if (a.grid_size() != b.grid_size() || a.grid_size() == 0)
    fail(ErrorKind::Dimension, "metric", "curves must share a nonempty grid");
  const std::size_t p = a.grid_size();
  if (m.kind == MetricKind::Sup) {
    double mx = 0.0;
    for (std::size_t i = 0; i < p; ++i)
      mx = std::max(mx, std::fabs(a.values[i] - b.values[i]));
    return mx;
  }
  double step = m.grid_step > 0.0 ? m.grid_step : 1.0 / static_cast<double>(p);
  double s = 0.0;
  for (std::size_t i = 0; i < p; ++i) {
    double d = a.values[i] - b.values[i];
    s += d * d;
  }
  return std::sqrt(step * s);
}

Kernel Kernel::uniform() {
  Kernel k;
  k.kind_ = Kind::Uniform;
  return k;
}

Kernel Kernel::quadratic() {
  Kernel k;
  k.kind_ = Kind::Quadratic;
  return k;
}

Kernel Kernel::custom(std::function<double(double)> fn) {
  Kernel k;
  k.kind_ = Kind::Custom;
  k.fn_ = std::move(fn);
  return k;
}

double Kernel::operator()(double s) const {
  switch (kind_) {
    case Kind::Uniform: return 1.0;
    case Kind::Quadratic: return 1.5 * (1.0 - s * s);
    case Kind::Custom: return fn_(s);
  }
  return 0.0;
}

void WeightVector::validate(const char* stage) const {
  double sum = 0.0;
  for (double v : w) {
    if (!(v >= 0.0))
      fail(ErrorKind::Domain, stage, "weights must be nonnegative");
    sum += v;
  }
  if (std::fabs(sum - 1.0) > 1e-9)
    fail(ErrorKind::Domain, stage, "weights must sum to one");
}

WeightVector nw_weights(const Sample& s, const CovariatePoint& y, double h,
                        const Kernel& kernel, const Metric& metric) {
  if (!(h > 0.0) || !std::isfinite(h))
    fail(ErrorKind::Parameter, "weights", "bandwidth must be positive and finite");
  y.validate("weights");
  const std::size_t n = s.n;
  WeightVector out;
  out.w.assign(n, 0.0);
  double denom = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double dist = distance(s.y[i], y, metric);
    if (dist > h) continue;
    double k = kernel(dist / h);
    if (!std::isfinite(k) || k < 0.0)
      fail(ErrorKind::Domain, "weights", "kernel produced an invalid value");
    out.w[i] = k;
    denom += k;
  }
  if (!(denom > 0.0))
    fail(ErrorKind::EmptyNeighborhood, "weights",
         "no observation carries kernel mass within bandwidth " + std::to_string(h));
  std::size_t eff = 0;
  for (std::size_t i = 0; i < n; ++i) {
    out.w[i] /= denom;
    if (out.w[i] > 0.0) ++eff;
  }
  out.effective_count = eff;
  return out;
}

double small_ball_estimate(const Sample& s, const CovariatePoint& y, double h,
                           const Metric& metric) {
  if (!(h > 0.0) || !std::isfinite(h))
    fail(ErrorKind::Parameter, "small-ball", "radius must be positive and finite");
  y.validate("small-ball");
  std::size_t count = 0;
  for (std::size_t i = 0; i < s.n; ++i)
    if (distance(s.y[i], y, metric) <= h) ++count;
  return static_cast<double>(count) / static_cast<double>(s.n);
}

double auto_bandwidth(const Sample& s, const CovariatePoint& y, const Metric& metric) {
  y.validate("bandwidth");
  const std::size_t n = s.n;
  auto k = static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(n), 0.7)));
  k = std::min(std::max<std::size_t>(k, 1), n);
  std::vector<double> dist(n);
  for (std::size_t i = 0; i < n; ++i) dist[i] = distance(s.y[i], y, metric);
  std::nth_element(dist.begin(), dist.begin() + (k - 1), dist.end());
  double h = dist[k - 1];
  if (h > 0.0) return h;
  // k-th neighbor sits exactly at y; any radius below the next positive
  // distance keeps the same ball.
  double next = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (dist[i] > 0.0 && (next == 0.0 || dist[i] < next)) next = dist[i];
  return next > 0.0 ? next / 2.0 : 1.0;
}

}  // namespace mee
