#include "mee/tail.hpp"

#include <cmath>
#include <string>

namespace mee {

std::vector<double> HillConfig::tau_values() const {
  if (!taus.empty()) return taus;
  std::vector<double> t(static_cast<std::size_t>(J));
  for (int i = 0; i < J; ++i) t[static_cast<std::size_t>(i)] = 1.0 / (i + 1.0);
  return t;
}

void HillConfig::validate(const char* stage) const {
  if (J < 1) fail(ErrorKind::Parameter, stage, "J must be at least 1");
  auto t = tau_values();
  if (t.size() != static_cast<std::size_t>(J))
    fail(ErrorKind::Parameter, stage, "tau list length must equal J");
  double prev = 1.0 + 1e-12;
  double logsum = 0.0;
  for (double tau : t) {
    if (!(tau > 0.0 && tau <= 1.0))
      fail(ErrorKind::Parameter, stage, "taus must lie in (0, 1]");
    if (!(tau < prev))
      fail(ErrorKind::Parameter, stage, "taus must be strictly decreasing");
    prev = tau;
    logsum += std::log(tau);
  }
  if (!(logsum < 0.0))
    fail(ErrorKind::Parameter, stage, "at least one tau must be below 1");
  if (!alpha_n.has_value())
    fail(ErrorKind::Parameter, stage, "alpha_n is not set");
  if (!(*alpha_n > 0.0 && *alpha_n < 1.0))
    fail(ErrorKind::Parameter, stage, "alpha_n must lie in (0, 1)");
}

double hill_functional(const Sample& s, const WeightVector& w, const HillConfig& cfg) {
  cfg.validate("hill");
  const double alpha_n = *cfg.alpha_n;
  const double abar = 1.0 - alpha_n;
  auto taus = cfg.tau_values();

  CondEcdf ecdf = make_cond_ecdf(s, w, 0);
  double q_base = ecdf.quantile(alpha_n);
  if (!(q_base > 0.0))
    fail(ErrorKind::LogDomain, "hill",
         "quantile at the base level is not positive; tail index undefined");
  double num = 0.0;
  double den = 0.0;
  for (double tau : taus) {
    double level = 1.0 - tau * abar;
    double q = ecdf.quantile(level);
    if (!(q > 0.0))
      fail(ErrorKind::LogDomain, "hill", "nonpositive quantile at probed level");
    num += std::log(q) - std::log(q_base);
    den -= std::log(tau);
  }
  double gamma = num / den;
  if (!(gamma > 0.0))
    fail(ErrorKind::DegenerateTail, "hill",
         "estimated tail index " + std::to_string(gamma) +
             " is not positive; response tail is degenerate at this level");
  if (!(gamma < 1.0))
    fail(ErrorKind::InfiniteMean, "hill",
         "estimated tail index " + std::to_string(gamma) +
             " is not below 1; expectiles require a finite first moment");
  return gamma;
}

double tail_ratio(const Sample& s, const WeightVector& w, std::size_t j,
                  double alpha_n, double gamma) {
  if (!(alpha_n > 0.0 && alpha_n < 1.0))
    fail(ErrorKind::Parameter, "tail-ratio", "alpha_n must lie in (0, 1)");
  if (!(gamma > 0.0 && gamma < 1.0))
    fail(ErrorKind::Domain, "tail-ratio", "gamma must lie in (0, 1)");
  if (j == 0) return 1.0;
  double qj = cond_quantile(s, w, j, alpha_n);
  double q1 = cond_quantile(s, w, 0, alpha_n);
  if (!(qj > 0.0) || !(q1 > 0.0))
    fail(ErrorKind::Domain, "tail-ratio", "quantiles must be positive");
  return std::pow(qj / q1, 1.0 / gamma);
}

}  // namespace mee
