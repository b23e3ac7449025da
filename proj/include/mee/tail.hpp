#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "mee/conditional.hpp"

namespace mee {

// Log-spacing tail-index estimator configuration. Quantile levels probed are
// 1 - tau_i * (1 - alpha_n); taus empty selects 1, 1/2, ..., 1/J.
struct HillConfig {
  int J = 9;
  std::vector<double> taus;
  std::optional<double> alpha_n;

  std::vector<double> tau_values() const;
  void validate(const char* stage = "hill") const;
};

struct TailEstimate {
  double gamma = 0.0;
  std::vector<double> c;  // c[0] == 1
};

// gamma_hat = sum_i [ln q_hat(1 - tau_i(1-alpha_n)) - ln q_hat(alpha_n)]
//             / sum_i ln(1/tau_i), on margin 1.
// Degenerate tails (gamma_hat <= 0) and infinite-mean tails (gamma_hat >= 1)
// are errors, as are nonpositive quantiles at any probed level.
double hill_functional(const Sample& s, const WeightVector& w, const HillConfig& cfg);

// c_hat_j = (q_hat_j(alpha_n) / q_hat_1(alpha_n))^(1/gamma); exactly 1 for the
// reference margin j = 0.
double tail_ratio(const Sample& s, const WeightVector& w, std::size_t j,
                  double alpha_n, double gamma);

}  // namespace mee
