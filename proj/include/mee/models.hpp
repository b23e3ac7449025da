#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mee/conditional.hpp"
#include "mee/objective.hpp"
#include "mee/rng.hpp"

namespace mee {

enum class MarginalKind { Lomax, Burr, Frechet, HallWeiss };

// Heavy-tailed marginal families (tail index = gamma in all
// parameterizations):
//   lomax(gamma, scale):    F_bar(x) = (1 + x/scale)^(-1/gamma)
//   burr(tau, lam):         F_bar(x) = (1 + x^tau)^(-lam), gamma = 1/(tau*lam)
//   frechet(gamma):         F_bar(x) = 1 - exp(-x^(-1/gamma))
//   hall_weiss(alpha, rho): F_bar(x) = x^(-alpha)(1 + x^rho)/2 on [1, inf),
//                           gamma = 1/alpha, rho < 0
struct MarginalFamily {
  MarginalKind kind = MarginalKind::Lomax;
  double gamma = 0.5;
  double scale = 1.0;
  double tau = 1.0;
  double lam = 2.0;
  double rho = -1.0;

  static MarginalFamily lomax(double gamma, double scale);
  static MarginalFamily burr(double tau, double lam);
  static MarginalFamily frechet(double gamma);
  static MarginalFamily hall_weiss(double alpha, double rho);

  double tail_index() const;
  // Same family with the tail index forced to g (burr keeps tau, hall_weiss
  // keeps rho).
  MarginalFamily with_gamma(double g) const;
  void validate(const char* stage = "model") const;
};

double marginal_survival(const MarginalFamily& fam, double x);
// x with F_bar(x) = u, u in (0, 1]; hall_weiss inverts by bisection to 1e-12.
double marginal_inverse_survival(const MarginalFamily& fam, double u);

enum class CopulaKind { Independence, Comonotone, SurvivalClayton };

// theta(y) = theta0 + theta1 * mean(y); only the Clayton family uses it.
struct CopulaSpec {
  CopulaKind kind = CopulaKind::Independence;
  double theta0 = 1.0;
  double theta1 = 0.0;
};

// One copula row in [0,1]^d. Survival Clayton draws a Clayton(theta) vector by
// the gamma-frailty construction and flips every coordinate.
std::vector<double> sample_copula(CopulaKind kind, double theta, std::size_t d,
                                  Rng& rng);

enum class CovariateKind { Constant, Fourier };

// Constant: Y_i(t) = value. Fourier: Y_i(t) = a_i sin(2 pi t) + b_i cos(2 pi t)
// with a_i, b_i iid uniform on [-1, 1], on a regular grid over [0, 1].
struct CovariateProcess {
  CovariateKind kind = CovariateKind::Constant;
  std::size_t grid_size = 100;
  double value = 0.0;

  CovariatePoint mean_curve() const;
};

// gamma(y) = clip(g0 + g1 * mean(y), clip_lo, clip_hi); the clipped value must
// land in (0, 1).
struct GammaLink {
  double g0 = 0.5;
  double g1 = 0.0;
  double clip_lo = 0.2;
  double clip_hi = 0.8;

  double at(double covariate_mean) const;
};

struct ConditionalModel {
  std::size_t d = 2;
  std::vector<MarginalFamily> margins;
  GammaLink gamma_link;
  CopulaSpec copula;
  CovariateProcess covariate;

  double gamma_at(const CovariatePoint& y) const;  // Model error outside (0,1)
  double theta_at(const CovariatePoint& y) const;
  bool equal_margins() const;
  void validate(const char* stage = "model") const;
};

Sample generate_dataset(const ConditionalModel& model, std::size_t n,
                        std::uint64_t seed);

// True tail nuisance parameters of the model at y (asymptotic tail ratios and
// the pairwise tail dependence function).
XiEstimate model_xi(const ConditionalModel& model, const CovariatePoint& y);

// Closed-form roots: independence with equal margins gives
// (gamma/(d(1-gamma)), 1, ..., 1); comonotone with equal margins gives
// (gamma/(1-gamma), 1, ..., 1); anything else has none.
std::optional<ThetaVector> theta_star_analytic(CopulaKind copula, std::size_t d,
                                               double gamma);
std::optional<ThetaVector> theta_star_analytic(const ConditionalModel& model,
                                               const CovariatePoint& y);

// Numerical root of the true system; raises an optimization error unless the
// achieved loss is <= 1e-12.
ThetaVector theta_star_reference(const XiEstimate& xi, const Box& box,
                                 const QuadratureConfig& quad = {},
                                 const OptimizerOptions& opts = {});

}  // namespace mee
