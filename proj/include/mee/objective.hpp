#pragma once

#include <cstddef>
#include <vector>

#include "mee/conditional.hpp"
#include "mee/dependence.hpp"
#include "mee/optimizer.hpp"

namespace mee {

// Unknowns of the first-order system: eta > 0 and the direction ratios
// beta_2..beta_d (beta_1 is pinned to 1).
struct ThetaVector {
  double eta = 1.0;
  std::vector<double> beta;  // size d-1

  std::size_t dim() const { return 1 + beta.size(); }
  std::vector<double> as_vector() const;
  static ThetaVector from_vector(const std::vector<double>& v);
  void validate(const char* stage = "objective") const;
};

// Tail nuisance parameters the system is evaluated at: tail index, tail
// ratios (c[0] == 1), and one tail dependence function per ordered margin
// pair.
struct XiEstimate {
  std::size_t d = 0;
  double gamma = 0.0;
  std::vector<double> c;
  std::vector<LambdaFunction> lambda;  // d*d entries, (j,k) at j*d+k, j != k

  const LambdaFunction& lam(std::size_t j, std::size_t k) const {
    return lambda[j * d + k];
  }
  static XiEstimate symmetric(std::size_t d, double gamma,
                              const LambdaFunction& shared);
  void validate(const char* stage = "objective") const;
};

struct QuadratureConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_subdivisions = 200;
  double endpoint_split = 0.1;  // graded-mesh share of [0, M]
};

// int_lower^inf lambda((c_j/c_k) t^(-1/gamma), 1) dt, computed after the
// change of variable u = (c_j/c_k) t^(-1/gamma) as
//   gamma (c_j/c_k)^gamma int_0^M lambda(u,1) u^(-gamma-1) du,
// M = (c_j/c_k) lower^(-1/gamma).
double tail_integral(const LambdaFunction& lam, double gamma, double cj, double ck,
                     double lower, const QuadratureConfig& quad = {});

// phi_k = gamma/(1-gamma)
//         - eta (beta_k^(1/gamma)/c_k) (1 + sum_{j!=k} beta_j/beta_k)
//         + sum_{j!=k} int_{beta_j/beta_k}^inf lambda_jk((c_j/c_k) t^(-1/gamma), 1) dt.
std::vector<double> phi_vector(const ThetaVector& theta, const XiEstimate& xi,
                               const QuadratureConfig& quad = {});

// L = 1/2 sum_k phi_k^2 and its exact gradient in (eta, beta_2..beta_d); the
// gradient needs no extra quadrature beyond phi itself (the integral's
// lower-bound derivative is -lambda at the substituted bound).
double loss_value(const ThetaVector& theta, const XiEstimate& xi,
                  const QuadratureConfig& quad = {});
std::vector<double> loss_gradient(const ThetaVector& theta, const XiEstimate& xi,
                                  const QuadratureConfig& quad = {});

// Weighted empirical L1 expectile: argmin_x sum_i w_i [ alpha (sum_j (X_ij-x_j)_+)^2
// + (1-alpha) (sum_j (x_j-X_ij)_+)^2 ]. Convex; solved with the box optimizer
// on an unbounded box. Accepts d = 1.
std::vector<double> direct_empirical_expectile(const Sample& s, const WeightVector& w,
                                               double alpha,
                                               const OptimizerOptions& opts = {});

// Extreme-level plug-in: component k of the expectile estimate is
// q1_hat * eta^gamma * beta_k (beta_1 = 1).
std::vector<double> assemble_expectile(double q1_hat, const ThetaVector& theta,
                                       double gamma);

}  // namespace mee
