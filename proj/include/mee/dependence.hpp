#pragma once

#include <cstddef>
#include <vector>

#include "mee/conditional.hpp"

namespace mee {

// Intermediate sequence for the tail dependence estimators: 1 < kn < n.
struct KnConfig {
  std::size_t kn = 0;

  void validate(std::size_t n, const char* stage = "kn") const;
};

// Weighted empirical copula of margins (j, k) evaluated on pseudo-observations.
double cond_empirical_copula(const Sample& s, const WeightVector& w, std::size_t j,
                             std::size_t k, double u, double v);
double copula_from_pseudo(const std::vector<double>& pseudo, std::size_t d,
                          const WeightVector& w, std::size_t j, std::size_t k,
                          double u, double v);

// Stable tail dependence function estimate
//   L_hat(x) = (n/kn) * (1 - C_hat(1 - kn x1 / n, 1 - kn x2 / n)).
// Requires (kn/n) * max(x1, x2) <= 1.
double stdf_hat(const Sample& s, const WeightVector& w, std::size_t j, std::size_t k,
                const KnConfig& kn, double x1, double x2);
double stdf_from_pseudo(const std::vector<double>& pseudo, std::size_t d,
                        const WeightVector& w, std::size_t n, std::size_t j,
                        std::size_t k, const KnConfig& kn, double x1, double x2);

// Upper tail dependence: lambda_hat = x1 + x2 - L_hat, clipped to the Frechet
// bounds [0, min(x1, x2)].
double lambda_hat(const Sample& s, const WeightVector& w, std::size_t j, std::size_t k,
                  const KnConfig& kn, double x1, double x2);

enum class LambdaFamily { Independence, Comonotone, SurvivalClayton };

// Closed forms: independence 0, comonotone min(x1, x2), survival Clayton
// (x1^-theta + x2^-theta)^(-1/theta). theta is ignored except for the Clayton
// family, where it must be positive.
double lambda_oracle(LambdaFamily family, double theta, double x1, double x2);

// Tail dependence function of one ordered margin pair, used inside the
// objective's integrals. Closed-form kinds evaluate exactly; the grid kind is
// piecewise linear over clamped knots with (0,0) prepended and constant
// extension beyond the last knot.
class LambdaFunction {
 public:
  enum class Kind { Zero, Comonotone, SurvivalClayton, Grid };

  LambdaFunction() = default;
  static LambdaFunction zero();
  static LambdaFunction comonotone();
  static LambdaFunction survival_clayton(double theta);
  static LambdaFunction grid(std::vector<double> u, std::vector<double> value);
  static LambdaFunction oracle(LambdaFamily family, double theta);

  // lambda(u, 1) for u >= 0.
  double section(double u) const;
  // General pair; the grid kind extends by degree-1 homogeneity.
  double pair(double x1, double x2) const;

  Kind kind() const { return kind_; }
  bool is_zero() const { return kind_ == Kind::Zero; }
  // Integrand breakpoints of u -> section(u) inside (lo, hi), ascending.
  std::vector<double> breakpoints(double lo, double hi) const;

 private:
  Kind kind_ = Kind::Zero;
  double theta_ = 1.0;
  std::vector<double> knots_u_;
  std::vector<double> knots_v_;
};

// Materializes u -> lambda_hat(u, 1) for ordered pair (j, k) on a geometric
// grid over (0, u_max]; u_max is capped at n/kn (the estimator's domain).
LambdaFunction lambda_grid(const Sample& s, const WeightVector& w, std::size_t j,
                           std::size_t k, const KnConfig& kn, double u_max,
                           int points = 64);
LambdaFunction lambda_grid_from_pseudo(const std::vector<double>& pseudo,
                                       std::size_t d, const WeightVector& w,
                                       std::size_t n, std::size_t j, std::size_t k,
                                       const KnConfig& kn, double u_max,
                                       int points = 64);

}  // namespace mee
