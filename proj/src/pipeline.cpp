#include "mee/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "mee/dependence.hpp"
#include "mee/models.hpp"

namespace mee {

RatePlan rate_plan(std::size_t n, double alpha_n, double psi_hat, std::size_t kn,
                   double gamma_hat, double mu) {
  if (n == 0) fail(ErrorKind::Parameter, "rates", "n must be positive");
  if (!(alpha_n > 0.0 && alpha_n < 1.0))
    fail(ErrorKind::Parameter, "rates", "alpha_n must lie in (0, 1)");
  if (!(psi_hat > 0.0 && psi_hat <= 1.0))
    fail(ErrorKind::Parameter, "rates", "psi_hat must lie in (0, 1]");
  if (kn == 0 || kn > n)
    fail(ErrorKind::Parameter, "rates", "kn must lie in [1, n]");
  if (!(gamma_hat > 0.0 && gamma_hat < 1.0))
    fail(ErrorKind::Parameter, "rates", "gamma_hat must lie in (0, 1)");
  if (!(mu > 0.0)) fail(ErrorKind::Parameter, "rates", "mu must be positive");

  const double nn = static_cast<double>(n);
  const double abar = 1.0 - alpha_n;
  RatePlan r;
  r.delta0 = std::sqrt(nn * abar * psi_hat);
  r.delta_minus1 = std::pow(nn / static_cast<double>(kn), mu);
  r.delta_gamma = gamma_hat * std::pow(abar, -gamma_hat);
  const bool coupled =
      kn == static_cast<std::size_t>(std::ceil(nn * psi_hat));
  if (coupled)
    r.combined = std::min(r.delta_gamma, std::pow(nn * psi_hat, std::min(0.5, mu)));
  else
    r.combined = std::min({r.delta0, r.delta_minus1, r.delta_gamma});
  return r;
}

namespace {

void validate_config(const EstimationConfig& cfg) {
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
    fail(ErrorKind::Parameter, "estimate", "alpha must lie in (0, 1)");
  if (cfg.bandwidth &&
      (!(*cfg.bandwidth > 0.0) || !std::isfinite(*cfg.bandwidth)))
    fail(ErrorKind::Parameter, "estimate", "bandwidth must be positive and finite");
  if (cfg.lambda_grid_points < 2)
    fail(ErrorKind::Parameter, "estimate", "lambda grid needs at least 2 points");
  if (!(cfg.mu > 0.0)) fail(ErrorKind::Parameter, "estimate", "mu must be positive");
}

std::size_t auto_kn(std::size_t n, double psi) {
  double cap = std::ceil(std::pow(static_cast<double>(n), 0.7));
  double raw = std::ceil(static_cast<double>(n) * psi);
  auto kn = static_cast<std::size_t>(std::min(raw, cap));
  kn = std::max<std::size_t>(kn, 2);
  kn = std::min(kn, n - 1);
  return kn;
}

}  // namespace

MEEResult estimate_mee(const Sample& s, const CovariatePoint& y,
                       const EstimationConfig& cfg) {
  s.validate("estimate");
  y.validate("estimate");
  validate_config(cfg);
  if (s.d < 2)
    fail(ErrorKind::Dimension, "estimate", "joint estimation needs d >= 2");
  if (s.n < 4)
    fail(ErrorKind::Parameter, "estimate", "need at least 4 observations");

  MEEResult out;
  out.h = cfg.bandwidth ? *cfg.bandwidth : auto_bandwidth(s, y, cfg.metric);
  WeightVector w = nw_weights(s, y, out.h, cfg.kernel, cfg.metric);
  out.psi = small_ball_estimate(s, y, out.h, cfg.metric);

  if (cfg.kn) {
    KnConfig kc{*cfg.kn};
    kc.validate(s.n, "estimate");
    out.kn = *cfg.kn;
  } else {
    out.kn = auto_kn(s.n, out.psi);
  }
  out.alpha_n = cfg.hill.alpha_n
                    ? *cfg.hill.alpha_n
                    : 1.0 - static_cast<double>(out.kn) / static_cast<double>(s.n);

  HillConfig hc = cfg.hill;
  hc.alpha_n = out.alpha_n;
  out.gamma = hill_functional(s, w, hc);

  out.c.resize(s.d);
  for (std::size_t j = 0; j < s.d; ++j)
    out.c[j] = tail_ratio(s, w, j, out.alpha_n, out.gamma);

  const std::vector<double> pseudo = pseudo_obs(s, w);
  const KnConfig kc{out.kn};
  const double u_max = static_cast<double>(s.n) / static_cast<double>(out.kn);
  XiEstimate xi;
  xi.d = s.d;
  xi.gamma = out.gamma;
  xi.c = out.c;
  xi.lambda.assign(s.d * s.d, LambdaFunction::zero());
  for (std::size_t j = 0; j < s.d; ++j)
    for (std::size_t k = 0; k < s.d; ++k)
      if (j != k)
        xi.lambda[j * s.d + k] = lambda_grid_from_pseudo(
            pseudo, s.d, w, s.n, j, k, kc, u_max, cfg.lambda_grid_points);
  xi.validate("estimate");

  Box box = cfg.box ? *cfg.box : Box::cube(s.d, 1e-3, 1e3);
  box.validate("estimate");
  if (box.dim() != s.d)
    fail(ErrorKind::Dimension, "estimate", "box dimension must equal d");

  auto f = [&](const std::vector<double>& v) {
    return loss_value(ThetaVector::from_vector(v), xi, cfg.quadrature);
  };
  auto g = [&](const std::vector<double>& v) {
    return loss_gradient(ThetaVector::from_vector(v), xi, cfg.quadrature);
  };
  std::vector<std::vector<double>> starts;
  starts.push_back(std::vector<double>(s.d, 1.0));
  if (auto t = theta_star_analytic(CopulaKind::Independence, s.d, out.gamma))
    starts.push_back(t->as_vector());
  if (auto t = theta_star_analytic(CopulaKind::Comonotone, s.d, out.gamma))
    starts.push_back(t->as_vector());
  {
    std::vector<double> center(s.d, 1.0);
    for (std::size_t i = 0; i < s.d; ++i)
      if (std::isfinite(box.lower[i]) && std::isfinite(box.upper[i]) &&
          box.lower[i] > 0.0)
        center[i] = std::sqrt(box.lower[i] * box.upper[i]);
    starts.push_back(center);
  }

  MultiStartReport ms = multi_start_minimize(f, g, box, starts, cfg.optimizer);
  out.theta = ThetaVector::from_vector(ms.best.x);
  out.loss = ms.best.f;
  out.optimizer = ms.best;
  out.distinct_minima = std::max<std::size_t>(ms.minima.size(), 1);
  if (!ms.best.converged)
    out.warnings.push_back("optimizer stopped before reaching the gradient tolerance");
  for (std::size_t i = 0; i < ms.minima_f.size(); ++i) {
    double dist2 = 0.0;
    for (std::size_t j = 0; j < ms.best.x.size(); ++j) {
      double diff = ms.minima[i][j] - ms.best.x[j];
      dist2 += diff * diff;
    }
    if (dist2 <= 1e-8) continue;  // same cluster as the reported root
    if (ms.minima_f[i] <= ms.best.f + 1e-8) {
      out.warnings.push_back(
          "system admits multiple numerical roots; reporting the lowest loss");
      break;
    }
  }

  // Reference quantile of margin 1 at the target level: empirical below the
  // intermediate level, Pareto-extrapolated beyond it.
  double q_base = cond_quantile(s, w, 0, std::min(cfg.alpha, out.alpha_n));
  if (cfg.alpha > out.alpha_n) {
    double ratio = (1.0 - out.alpha_n) / (1.0 - cfg.alpha);
    out.q1 = q_base * std::pow(ratio, out.gamma);
  } else {
    out.q1 = q_base;
  }

  out.expectile = assemble_expectile(out.q1, out.theta, out.gamma);
  out.rates = rate_plan(s.n, out.alpha_n, out.psi, out.kn, out.gamma, cfg.mu);
  return out;
}

ModerateCheck moderate_level_check(const Sample& s, const CovariatePoint& y,
                                   const EstimationConfig& cfg,
                                   double alpha_moderate) {
  if (!(alpha_moderate > 0.9 && alpha_moderate < 0.99))
    fail(ErrorKind::Domain, "moderate-check",
         "moderate level must lie in (0.9, 0.99)");
  EstimationConfig moderate = cfg;
  moderate.alpha = alpha_moderate;
  MEEResult res = estimate_mee(s, y, moderate);

  double h = cfg.bandwidth ? *cfg.bandwidth : auto_bandwidth(s, y, cfg.metric);
  WeightVector w = nw_weights(s, y, h, cfg.kernel, cfg.metric);

  ModerateCheck check;
  check.assembled = res.expectile;
  check.direct = direct_empirical_expectile(s, w, alpha_moderate, cfg.optimizer);
  check.relative_gap.resize(s.d);
  for (std::size_t k = 0; k < s.d; ++k)
    check.relative_gap[k] = std::fabs(check.assembled[k] / check.direct[k] - 1.0);
  return check;
}

}  // namespace mee
