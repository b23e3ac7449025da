#include "mee/models.hpp"

#include <algorithm>
#include <cmath>

namespace mee {

MarginalFamily MarginalFamily::lomax(double gamma, double scale) {
  MarginalFamily f;
  f.kind = MarginalKind::Lomax;
  f.gamma = gamma;
  f.scale = scale;
  f.validate();
  return f;
}

MarginalFamily MarginalFamily::burr(double tau, double lam) {
  MarginalFamily f;
  f.kind = MarginalKind::Burr;
  f.tau = tau;
  f.lam = lam;
  f.gamma = 1.0 / (tau * lam);
  f.validate();
  return f;
}

MarginalFamily MarginalFamily::frechet(double gamma) {
  MarginalFamily f;
  f.kind = MarginalKind::Frechet;
  f.gamma = gamma;
  f.validate();
  return f;
}

MarginalFamily MarginalFamily::hall_weiss(double alpha, double rho) {
  MarginalFamily f;
  f.kind = MarginalKind::HallWeiss;
  f.gamma = 1.0 / alpha;
  f.rho = rho;
  f.validate();
  return f;
}

double MarginalFamily::tail_index() const { return gamma; }

MarginalFamily MarginalFamily::with_gamma(double g) const {
  MarginalFamily f = *this;
  f.gamma = g;
  if (kind == MarginalKind::Burr) f.lam = 1.0 / (f.tau * g);
  f.validate();
  return f;
}

void MarginalFamily::validate(const char* stage) const {
  if (!(gamma > 0.0 && gamma < 1.0))
    fail(ErrorKind::Parameter, stage, "marginal tail index must lie in (0, 1)");
  switch (kind) {
    case MarginalKind::Lomax:
      if (!(scale > 0.0) || !std::isfinite(scale))
        fail(ErrorKind::Parameter, stage, "lomax scale must be positive");
      break;
    case MarginalKind::Burr:
      if (!(tau > 0.0) || !(lam > 0.0))
        fail(ErrorKind::Parameter, stage, "burr shape parameters must be positive");
      if (std::fabs(1.0 / (tau * lam) - gamma) > 1e-9)
        fail(ErrorKind::Parameter, stage, "burr parameters inconsistent with gamma");
      break;
    case MarginalKind::Frechet:
      break;
    case MarginalKind::HallWeiss:
      if (!(rho < 0.0))
        fail(ErrorKind::Parameter, stage, "hall_weiss second-order rho must be negative");
      break;
  }
}

double marginal_survival(const MarginalFamily& fam, double x) {
  switch (fam.kind) {
    case MarginalKind::Lomax:
      return x <= 0.0 ? 1.0 : std::pow(1.0 + x / fam.scale, -1.0 / fam.gamma);
    case MarginalKind::Burr:
      return x <= 0.0 ? 1.0 : std::pow(1.0 + std::pow(x, fam.tau), -fam.lam);
    case MarginalKind::Frechet:
      return x <= 0.0 ? 1.0 : 1.0 - std::exp(-std::pow(x, -1.0 / fam.gamma));
    case MarginalKind::HallWeiss: {
      if (x <= 1.0) return 1.0;
      double alpha = 1.0 / fam.gamma;
      return 0.5 * std::pow(x, -alpha) * (1.0 + std::pow(x, fam.rho));
    }
  }
  fail(ErrorKind::Unsupported, "model", "unknown marginal kind");
}

double marginal_inverse_survival(const MarginalFamily& fam, double u) {
  if (!(u > 0.0 && u <= 1.0))
    fail(ErrorKind::Domain, "model", "survival level must lie in (0, 1]");
  switch (fam.kind) {
    case MarginalKind::Lomax:
      return fam.scale * (std::pow(u, -fam.gamma) - 1.0);
    case MarginalKind::Burr:
      return std::pow(std::pow(u, -1.0 / fam.lam) - 1.0, 1.0 / fam.tau);
    case MarginalKind::Frechet: {
      if (u == 1.0) return 0.0;
      return std::pow(-std::log1p(-u), -fam.gamma);
    }
    case MarginalKind::HallWeiss: {
      if (u == 1.0) return 1.0;
      double lo = 1.0, hi = 2.0;
      while (marginal_survival(fam, hi) > u) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300)
          fail(ErrorKind::Numeric, "model", "hall_weiss inversion overflow");
      }
      while (hi - lo > 1e-12 * (1.0 + hi)) {
        double mid = 0.5 * (lo + hi);
        if (marginal_survival(fam, mid) > u)
          lo = mid;
        else
          hi = mid;
      }
      return 0.5 * (lo + hi);
    }
  }
  fail(ErrorKind::Unsupported, "model", "unknown marginal kind");
}

std::vector<double> sample_copula(CopulaKind kind, double theta, std::size_t d,
                                  Rng& rng) {
  if (d == 0) fail(ErrorKind::Dimension, "model", "copula dimension must be positive");
  std::vector<double> u(d);
  switch (kind) {
    case CopulaKind::Independence:
      for (auto& v : u) v = rng.uniform01();
      return u;
    case CopulaKind::Comonotone: {
      double shared = rng.uniform01();
      std::fill(u.begin(), u.end(), shared);
      return u;
    }
    case CopulaKind::SurvivalClayton: {
      if (!(theta > 0.0))
        fail(ErrorKind::Parameter, "model", "survival clayton needs theta > 0");
      double w = rng.gamma(1.0 / theta);
      for (auto& v : u) {
        double clayton = std::pow(1.0 + rng.exponential() / w, -1.0 / theta);
        v = 1.0 - clayton;
      }
      return u;
    }
  }
  fail(ErrorKind::Unsupported, "model", "unknown copula kind");
}

CovariatePoint CovariateProcess::mean_curve() const {
  CovariatePoint y;
  y.values.assign(grid_size, kind == CovariateKind::Constant ? value : 0.0);
  return y;
}

double GammaLink::at(double covariate_mean) const {
  return std::clamp(g0 + g1 * covariate_mean, clip_lo, clip_hi);
}

double ConditionalModel::gamma_at(const CovariatePoint& y) const {
  double g = gamma_link.at(y.mean());
  if (!(g > 0.0 && g < 1.0))
    fail(ErrorKind::Model, "model", "tail index link left (0, 1)");
  return g;
}

double ConditionalModel::theta_at(const CovariatePoint& y) const {
  return copula.theta0 + copula.theta1 * y.mean();
}

namespace {

bool same_family(const MarginalFamily& a, const MarginalFamily& b) {
  return a.kind == b.kind && a.gamma == b.gamma && a.scale == b.scale &&
         a.tau == b.tau && a.lam == b.lam && a.rho == b.rho;
}

}  // namespace

bool ConditionalModel::equal_margins() const {
  for (std::size_t k = 1; k < margins.size(); ++k)
    if (!same_family(margins[k], margins[0])) return false;
  return true;
}

void ConditionalModel::validate(const char* stage) const {
  if (d == 0) fail(ErrorKind::Dimension, stage, "model dimension must be positive");
  if (margins.size() != d)
    fail(ErrorKind::Dimension, stage, "need one marginal family per component");
  for (const auto& m : margins) m.validate(stage);
  if (covariate.grid_size == 0)
    fail(ErrorKind::Parameter, stage, "covariate grid must be nonempty");
  if (!(gamma_link.clip_lo > 0.0 && gamma_link.clip_lo <= gamma_link.clip_hi &&
        gamma_link.clip_hi < 1.0))
    fail(ErrorKind::Parameter, stage, "gamma link clip range must sit inside (0, 1)");
}

Sample generate_dataset(const ConditionalModel& model, std::size_t n,
                        std::uint64_t seed) {
  model.validate();
  if (n == 0) fail(ErrorKind::Parameter, "simulate", "sample size must be positive");
  Rng rng(seed);
  Sample s;
  s.n = n;
  s.d = model.d;
  s.x.resize(n * model.d);
  s.y.reserve(n);
  const std::size_t g = model.covariate.grid_size;
  const double two_pi = 8.0 * std::atan(1.0);
  for (std::size_t i = 0; i < n; ++i) {
    CovariatePoint y;
    y.values.resize(g);
    if (model.covariate.kind == CovariateKind::Constant) {
      std::fill(y.values.begin(), y.values.end(), model.covariate.value);
    } else {
      double a = 2.0 * rng.uniform01() - 1.0;
      double b = 2.0 * rng.uniform01() - 1.0;
      for (std::size_t j = 0; j < g; ++j) {
        double t = g > 1 ? static_cast<double>(j) / static_cast<double>(g - 1) : 0.0;
        y.values[j] = a * std::sin(two_pi * t) + b * std::cos(two_pi * t);
      }
    }
    double gam = model.gamma_at(y);
    std::vector<double> u =
        sample_copula(model.copula.kind, model.theta_at(y), model.d, rng);
    for (std::size_t k = 0; k < model.d; ++k)
      s.x[i * model.d + k] =
          marginal_inverse_survival(model.margins[k].with_gamma(gam), 1.0 - u[k]);
    s.y.push_back(std::move(y));
  }
  s.validate("simulate");
  return s;
}

namespace {

// Asymptotic scale A with inverse_survival(u) ~ A u^(-gamma) as u -> 0.
double tail_scale(const MarginalFamily& fam) {
  switch (fam.kind) {
    case MarginalKind::Lomax:
      return fam.scale;
    case MarginalKind::Burr:
    case MarginalKind::Frechet:
      return 1.0;
    case MarginalKind::HallWeiss:
      return std::pow(2.0, -fam.gamma);
  }
  fail(ErrorKind::Unsupported, "model", "unknown marginal kind");
}

}  // namespace

XiEstimate model_xi(const ConditionalModel& model, const CovariatePoint& y) {
  model.validate();
  if (model.d < 2)
    fail(ErrorKind::Dimension, "model", "tail parameters need d >= 2");
  XiEstimate xi;
  xi.d = model.d;
  xi.gamma = model.gamma_at(y);
  // c_k is the limiting survival ratio F_bar_k / F_bar_1, i.e. the quantile
  // scale ratio raised to 1/gamma.
  xi.c.resize(model.d);
  double a1 = tail_scale(model.margins[0].with_gamma(xi.gamma));
  for (std::size_t k = 0; k < model.d; ++k)
    xi.c[k] = std::pow(tail_scale(model.margins[k].with_gamma(xi.gamma)) / a1,
                       1.0 / xi.gamma);
  xi.c[0] = 1.0;
  LambdaFunction pair;
  switch (model.copula.kind) {
    case CopulaKind::Independence:
      pair = LambdaFunction::zero();
      break;
    case CopulaKind::Comonotone:
      pair = LambdaFunction::comonotone();
      break;
    case CopulaKind::SurvivalClayton:
      pair = LambdaFunction::survival_clayton(model.theta_at(y));
      break;
  }
  xi.lambda.assign(model.d * model.d, LambdaFunction::zero());
  for (std::size_t j = 0; j < model.d; ++j)
    for (std::size_t k = 0; k < model.d; ++k)
      if (j != k) xi.lambda[j * model.d + k] = pair;
  xi.validate();
  return xi;
}

std::optional<ThetaVector> theta_star_analytic(CopulaKind copula, std::size_t d,
                                               double gamma) {
  if (d < 2 || !(gamma > 0.0 && gamma < 1.0)) return std::nullopt;
  ThetaVector t;
  t.beta.assign(d - 1, 1.0);
  switch (copula) {
    case CopulaKind::Independence:
      t.eta = gamma / (static_cast<double>(d) * (1.0 - gamma));
      return t;
    case CopulaKind::Comonotone:
      t.eta = gamma / (1.0 - gamma);
      return t;
    case CopulaKind::SurvivalClayton:
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<ThetaVector> theta_star_analytic(const ConditionalModel& model,
                                               const CovariatePoint& y) {
  if (!model.equal_margins()) return std::nullopt;
  return theta_star_analytic(model.copula.kind, model.d, model.gamma_at(y));
}

ThetaVector theta_star_reference(const XiEstimate& xi, const Box& box,
                                 const QuadratureConfig& quad,
                                 const OptimizerOptions& opts) {
  xi.validate();
  box.validate("reference-root");
  if (box.dim() != xi.d)
    fail(ErrorKind::Dimension, "reference-root", "box dimension must match xi");

  auto f = [&](const std::vector<double>& v) {
    return loss_value(ThetaVector::from_vector(v), xi, quad);
  };
  auto g = [&](const std::vector<double>& v) {
    return loss_gradient(ThetaVector::from_vector(v), xi, quad);
  };

  std::vector<std::vector<double>> starts;
  starts.push_back(std::vector<double>(xi.d, 1.0));
  if (auto indep = theta_star_analytic(CopulaKind::Independence, xi.d, xi.gamma))
    starts.push_back(indep->as_vector());
  if (auto como = theta_star_analytic(CopulaKind::Comonotone, xi.d, xi.gamma))
    starts.push_back(como->as_vector());
  std::vector<double> center(xi.d, 1.0);
  for (std::size_t i = 0; i < xi.d; ++i) {
    if (std::isfinite(box.lower[i]) && std::isfinite(box.upper[i]) &&
        box.lower[i] > 0.0)
      center[i] = std::sqrt(box.lower[i] * box.upper[i]);
  }
  starts.push_back(center);

  MultiStartReport rep = multi_start_minimize(f, g, box, starts, opts);
  if (!(rep.best.f <= 1e-12))
    fail(ErrorKind::Optimization, "reference-root",
         "numerical root search did not reach zero loss");
  return ThetaVector::from_vector(rep.best.x);
}

}  // namespace mee
