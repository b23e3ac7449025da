#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "mee/error.hpp"

namespace mee {

struct Sample;

// Functional covariate discretized on a regular grid over [0, 1].
struct CovariatePoint {
  std::vector<double> values;

  std::size_t grid_size() const { return values.size(); }
  double mean() const;
  void validate(const char* stage = "covariate") const;
};

enum class MetricKind { L2Grid, Sup };

// l2_grid: sqrt(sum step*(a_i-b_i)^2). grid_step <= 0 selects 1/p so curves on
// finer grids stay comparable; an explicit step (e.g. 1) gives the plain
// Euclidean distance.
struct Metric {
  MetricKind kind = MetricKind::L2Grid;
  double grid_step = 0.0;
};

double distance(const CovariatePoint& a, const CovariatePoint& b, const Metric& m);

// Kernel on [0, 1]: uniform K(s)=1, quadratic K(s)=(3/2)(1-s^2).
// The custom hook is for tests and experimentation; configs only name the
// built-ins.
class Kernel {
 public:
  enum class Kind { Uniform, Quadratic, Custom };

  static Kernel uniform();
  static Kernel quadratic();
  static Kernel custom(std::function<double(double)> fn);

  double operator()(double s) const;
  Kind kind() const { return kind_; }

 private:
  Kind kind_ = Kind::Quadratic;
  std::function<double(double)> fn_;
};

// Nadaraya-Watson weights; nonnegative, sum to one, zero outside the ball of
// radius h.
struct WeightVector {
  std::vector<double> w;
  std::size_t effective_count = 0;  // strictly positive entries

  void validate(const char* stage = "weights") const;
};

WeightVector nw_weights(const Sample& s, const CovariatePoint& y, double h,
                        const Kernel& kernel, const Metric& metric);

// Empirical small-ball probability: #{i : d(Y_i, y) <= h} / n.
double small_ball_estimate(const Sample& s, const CovariatePoint& y, double h,
                           const Metric& metric);

// Smallest radius whose ball around y holds ceil(n^0.7) observations.
double auto_bandwidth(const Sample& s, const CovariatePoint& y, const Metric& metric);

}  // namespace mee
