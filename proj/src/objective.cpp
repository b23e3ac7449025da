#include "mee/objective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

namespace mee {

std::vector<double> ThetaVector::as_vector() const {
  std::vector<double> v;
  v.reserve(dim());
  v.push_back(eta);
  v.insert(v.end(), beta.begin(), beta.end());
  return v;
}

ThetaVector ThetaVector::from_vector(const std::vector<double>& v) {
  if (v.empty())
    fail(ErrorKind::Dimension, "objective", "theta vector must be nonempty");
  ThetaVector t;
  t.eta = v.front();
  t.beta.assign(v.begin() + 1, v.end());
  return t;
}

void ThetaVector::validate(const char* stage) const {
  if (!(eta > 0.0) || !std::isfinite(eta))
    fail(ErrorKind::Domain, stage, "eta must be positive and finite");
  for (double b : beta)
    if (!(b > 0.0) || !std::isfinite(b))
      fail(ErrorKind::Domain, stage, "beta entries must be positive and finite");
}

XiEstimate XiEstimate::symmetric(std::size_t d, double gamma,
                                 const LambdaFunction& shared) {
  XiEstimate xi;
  xi.d = d;
  xi.gamma = gamma;
  xi.c.assign(d, 1.0);
  xi.lambda.assign(d * d, shared);
  xi.validate();
  return xi;
}

void XiEstimate::validate(const char* stage) const {
  if (d < 2) fail(ErrorKind::Dimension, stage, "xi needs dimension d >= 2");
  if (!(gamma > 0.0 && gamma < 1.0))
    fail(ErrorKind::Domain, stage, "gamma must lie in (0, 1)");
  if (c.size() != d) fail(ErrorKind::Dimension, stage, "c must have d entries");
  if (std::fabs(c[0] - 1.0) > 1e-12)
    fail(ErrorKind::Domain, stage, "reference tail ratio c_1 must equal 1");
  for (double v : c)
    if (!(v > 0.0) || !std::isfinite(v))
      fail(ErrorKind::Domain, stage, "tail ratios must be positive and finite");
  if (lambda.size() != d * d)
    fail(ErrorKind::Dimension, stage, "lambda must hold d*d entries");
}

namespace {

// Gauss-Kronrod 15(7) nodes and weights on [-1, 1].
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <typename F>
Panel gk15(const F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double hl = 0.5 * (b - a);
  const double fc = f(c);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    double x = hl * kXgk[j];
    double f1 = f(c - x);
    double f2 = f(c + x);
    resk += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  Panel p;
  p.a = a;
  p.b = b;
  p.value = resk * hl;
  p.error = std::fabs(resk - resg) * std::fabs(hl);
  return p;
}

}  // namespace

double tail_integral(const LambdaFunction& lam, double gamma, double cj, double ck,
                     double lower, const QuadratureConfig& quad) {
  if (!(gamma > 0.0 && gamma < 1.0))
    fail(ErrorKind::Domain, "quadrature", "gamma must lie in (0, 1)");
  if (!(cj > 0.0) || !(ck > 0.0) || !std::isfinite(cj) || !std::isfinite(ck))
    fail(ErrorKind::Domain, "quadrature", "tail ratios must be positive and finite");
  if (!(lower > 0.0) || !std::isfinite(lower))
    fail(ErrorKind::Domain, "quadrature", "integral lower bound must be positive");
  if (lam.is_zero()) return 0.0;

  // u = (cj/ck) t^(-1/gamma) maps [lower, inf) to (0, M].
  const double cr = cj / ck;
  const double M = cr * std::pow(lower, -1.0 / gamma);
  if (!std::isfinite(M) || !(M > 0.0))
    fail(ErrorKind::Numeric, "quadrature", "transformed upper bound is not finite");
  const double scale = gamma * std::pow(cr, gamma);
  auto f = [&](double u) { return lam.section(u) * std::pow(u, -gamma - 1.0); };

  const double eps = std::clamp(quad.endpoint_split, 1e-6, 0.5);
  const double edge = eps * M;
  const double a = std::ldexp(edge, -40);

  // Power-law stub on [0, a]: lambda of every supported kind is an exact (or
  // near-exact) power there, so extrapolation beats quadrature.
  double stub = 0.0;
  double stub_lo = a;
  const double la = lam.section(a);
  if (la > 0.0) {
    const double lh = lam.section(0.5 * a);
    if (lh > 0.0) {
      const double p = std::log2(la / lh);
      if (!(p > gamma))
        fail(ErrorKind::Quadrature, "quadrature",
             "tail dependence decays too slowly near zero; integral diverges");
      stub = la * std::pow(a, -gamma) / (p - gamma);
    } else {
      stub_lo = 0.5 * a;  // mass below a/2 vanishes with lambda
    }
  }

  // Panel boundaries: geometric mesh on [a, edge], breakpoint-aligned panels
  // on [edge, M]. Alignment keeps every panel smooth so the raw GK15 error is
  // near machine precision and behaves smoothly under parameter perturbation.
  std::vector<double> bounds;
  bounds.push_back(stub_lo);
  for (int i = 1; i < 40; ++i) bounds.push_back(std::ldexp(edge, i - 40));
  bounds.push_back(edge);
  for (double b : lam.breakpoints(a, M)) bounds.push_back(b);
  bounds.push_back(M);
  std::sort(bounds.begin(), bounds.end());
  bounds.erase(std::unique(bounds.begin(), bounds.end(),
                           [&](double x, double y) { return (y - x) < 1e-15 * M; }),
               bounds.end());

  std::priority_queue<Panel> heap;
  double total = stub;
  double err = 0.0;
  for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
    if (!(bounds[i] < bounds[i + 1])) continue;
    Panel p = gk15(f, bounds[i], bounds[i + 1]);
    total += p.value;
    err += p.error;
    heap.push(p);
  }

  int splits = 0;
  while (err > std::max(quad.abs_tol, quad.rel_tol * std::fabs(total))) {
    if (splits >= quad.max_subdivisions)
      fail(ErrorKind::Quadrature, "quadrature",
           "error target not reached within max_subdivisions");
    Panel worst = heap.top();
    heap.pop();
    total -= worst.value;
    err -= worst.error;
    double mid = 0.5 * (worst.a + worst.b);
    for (Panel half : {gk15(f, worst.a, mid), gk15(f, mid, worst.b)}) {
      total += half.value;
      err += half.error;
      heap.push(half);
    }
    ++splits;
  }
  if (!std::isfinite(total))
    fail(ErrorKind::Numeric, "quadrature", "integral evaluated to a non-finite value");
  return scale * total;
}

namespace {

struct PhiParts {
  std::vector<double> phi;
  std::vector<double> b;  // full beta vector, b[0] = 1
};

PhiParts phi_parts(const ThetaVector& theta, const XiEstimate& xi,
                   const QuadratureConfig& quad) {
  theta.validate();
  xi.validate();
  const std::size_t d = xi.d;
  if (theta.dim() != d)
    fail(ErrorKind::Dimension, "objective", "theta dimension must match xi");
  PhiParts out;
  out.b.assign(d, 1.0);
  for (std::size_t m = 1; m < d; ++m) out.b[m] = theta.beta[m - 1];
  const double g1 = xi.gamma / (1.0 - xi.gamma);
  out.phi.assign(d, 0.0);
  for (std::size_t k = 0; k < d; ++k) {
    double ratio_sum = 1.0;
    double integrals = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      if (j == k) continue;
      ratio_sum += out.b[j] / out.b[k];
      integrals += tail_integral(xi.lam(j, k), xi.gamma, xi.c[j], xi.c[k],
                                 out.b[j] / out.b[k], quad);
    }
    out.phi[k] = g1 -
                 theta.eta * std::pow(out.b[k], 1.0 / xi.gamma) / xi.c[k] * ratio_sum +
                 integrals;
  }
  return out;
}

}  // namespace

std::vector<double> phi_vector(const ThetaVector& theta, const XiEstimate& xi,
                               const QuadratureConfig& quad) {
  return phi_parts(theta, xi, quad).phi;
}

double loss_value(const ThetaVector& theta, const XiEstimate& xi,
                  const QuadratureConfig& quad) {
  double s = 0.0;
  for (double p : phi_parts(theta, xi, quad).phi) s += p * p;
  return 0.5 * s;
}

std::vector<double> loss_gradient(const ThetaVector& theta, const XiEstimate& xi,
                                  const QuadratureConfig& quad) {
  PhiParts parts = phi_parts(theta, xi, quad);
  const std::size_t d = xi.d;
  const double g = xi.gamma;
  const double ig = 1.0 / g;
  const auto& b = parts.b;

  // lambda at the substituted lower bound; the only dependence of the
  // integral on theta is through that bound (Leibniz), so no further
  // quadrature is needed.
  std::vector<double> lam_bound(d * d, 0.0);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t k = 0; k < d; ++k) {
      if (j == k) continue;
      double m = (xi.c[j] / xi.c[k]) * std::pow(b[j] / b[k], -ig);
      lam_bound[j * d + k] = xi.lam(j, k).section(m);
    }

  std::vector<double> sum_except(d, 0.0);
  double bsum = 0.0;
  for (double v : b) bsum += v;
  for (std::size_t k = 0; k < d; ++k) sum_except[k] = bsum - b[k];

  std::vector<double> ratio_sum(d, 0.0);
  for (std::size_t k = 0; k < d; ++k) ratio_sum[k] = 1.0 + sum_except[k] / b[k];

  std::vector<double> grad(d, 0.0);
  for (std::size_t k = 0; k < d; ++k)
    grad[0] += parts.phi[k] * (-std::pow(b[k], ig) / xi.c[k] * ratio_sum[k]);

  for (std::size_t m = 1; m < d; ++m) {
    double acc = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      double dphi;
      if (k == m) {
        double lam_term = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
          if (j == k) continue;
          lam_term += b[j] / (b[k] * b[k]) * lam_bound[j * d + k];
        }
        dphi = -(theta.eta / xi.c[k]) *
                   (ig * std::pow(b[k], ig - 1.0) +
                    (ig - 1.0) * std::pow(b[k], ig - 2.0) * sum_except[k]) +
               lam_term;
      } else {
        dphi = -(theta.eta / xi.c[k]) * std::pow(b[k], ig - 1.0) -
               lam_bound[m * d + k] / b[k];
      }
      acc += parts.phi[k] * dphi;
    }
    grad[m] = acc;
  }
  return grad;
}

std::vector<double> direct_empirical_expectile(const Sample& s, const WeightVector& w,
                                               double alpha,
                                               const OptimizerOptions& opts) {
  if (!(alpha > 0.0 && alpha < 1.0))
    fail(ErrorKind::Domain, "direct-expectile", "alpha must lie in (0, 1)");
  if (w.w.size() != s.n)
    fail(ErrorKind::Dimension, "direct-expectile", "weight vector length must equal n");
  const std::size_t n = s.n, d = s.d;

  std::vector<double> mean(d, 0.0);
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (w.w[i] == 0.0) continue;
    for (std::size_t j = 0; j < d; ++j) {
      mean[j] += w.w[i] * s.xat(i, j);
      scale += w.w[i] * std::fabs(s.xat(i, j));
    }
  }
  if (scale <= 0.0) return mean;  // all mass at the origin

  // Optimize in units of the weighted absolute mean so the objective, the
  // gradient and the stopping rule are all scale free.
  std::vector<double> z(n * d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) z[i * d + j] = s.xat(i, j) / scale;

  auto objective = [&](const std::vector<double>& x) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (w.w[i] == 0.0) continue;
      double sp = 0.0, sm = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        double diff = z[i * d + j] - x[j];
        if (diff > 0.0)
          sp += diff;
        else
          sm -= diff;
      }
      acc += w.w[i] * (alpha * sp * sp + (1.0 - alpha) * sm * sm);
    }
    return acc;
  };
  auto gradient = [&](const std::vector<double>& x) {
    std::vector<double> grad(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (w.w[i] == 0.0) continue;
      double sp = 0.0, sm = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        double diff = z[i * d + j] - x[j];
        if (diff > 0.0)
          sp += diff;
        else
          sm -= diff;
      }
      for (std::size_t j = 0; j < d; ++j) {
        double diff = z[i * d + j] - x[j];
        if (diff > 0.0)
          grad[j] -= 2.0 * alpha * w.w[i] * sp;
        else if (diff < 0.0)
          grad[j] += 2.0 * (1.0 - alpha) * w.w[i] * sm;
      }
    }
    return grad;
  };

  const double inf = std::numeric_limits<double>::infinity();
  Box box = Box::cube(d, -inf, inf);
  std::vector<double> z0(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) z0[j] = mean[j] / scale;
  OptimizerReport rep = minimize_box(objective, gradient, box, z0, opts);
  std::vector<double> out(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) out[j] = scale * rep.x[j];
  return out;
}

std::vector<double> assemble_expectile(double q1_hat, const ThetaVector& theta,
                                       double gamma) {
  if (!(q1_hat > 0.0) || !std::isfinite(q1_hat))
    fail(ErrorKind::Domain, "assemble", "reference quantile must be positive");
  if (!(gamma > 0.0 && gamma < 1.0))
    fail(ErrorKind::Domain, "assemble", "gamma must lie in (0, 1)");
  theta.validate("assemble");
  std::vector<double> e(theta.dim(), 0.0);
  e[0] = q1_hat * std::pow(theta.eta, gamma);
  for (std::size_t m = 1; m < e.size(); ++m) e[m] = e[0] * theta.beta[m - 1];
  return e;
}

}  // namespace mee
