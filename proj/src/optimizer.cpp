#include "mee/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

#include "mee/error.hpp"

namespace mee {

Box Box::cube(std::size_t dim, double lo, double hi) {
  Box b;
  b.lower.assign(dim, lo);
  b.upper.assign(dim, hi);
  b.validate();
  return b;
}

void Box::validate(const char* stage) const {
  if (lower.size() != upper.size() || lower.empty())
    fail(ErrorKind::Dimension, stage, "box bounds must be nonempty and congruent");
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (std::isnan(lower[i]) || std::isnan(upper[i]))
      fail(ErrorKind::Domain, stage, "box bounds must not be NaN");
    if (!(lower[i] < upper[i]))
      fail(ErrorKind::Domain, stage, "box must have lower < upper in every axis");
  }
}

bool Box::contains(const std::vector<double>& x) const {
  if (x.size() != lower.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] < lower[i] || x[i] > upper[i]) return false;
  return true;
}

std::vector<double> Box::clamp(const std::vector<double>& x) const {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    out[i] = std::clamp(x[i], lower[i], upper[i]);
  return out;
}

namespace {

struct Pair {
  std::vector<double> s, y;
  double rho;
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

// Two-loop recursion for -H*g with H0 = (s'y / y'y) I.
std::vector<double> lm_direction(const std::vector<double>& grad,
                                 const std::deque<Pair>& hist) {
  std::vector<double> q = grad;
  std::vector<double> alpha(hist.size());
  for (std::size_t i = hist.size(); i-- > 0;) {
    alpha[i] = hist[i].rho * dot(hist[i].s, q);
    for (std::size_t t = 0; t < q.size(); ++t) q[t] -= alpha[i] * hist[i].y[t];
  }
  if (!hist.empty()) {
    const Pair& last = hist.back();
    double scale = dot(last.s, last.y) / dot(last.y, last.y);
    for (double& v : q) v *= scale;
  }
  for (std::size_t i = 0; i < hist.size(); ++i) {
    double beta = hist[i].rho * dot(hist[i].y, q);
    for (std::size_t t = 0; t < q.size(); ++t)
      q[t] += (alpha[i] - beta) * hist[i].s[t];
  }
  for (double& v : q) v = -v;
  return q;
}

void check_finite(double v, const char* what) {
  if (!std::isfinite(v))
    fail(ErrorKind::Numeric, "optimize", std::string(what) + " is not finite");
}

void check_finite(const std::vector<double>& v, const char* what) {
  for (double t : v) check_finite(t, what);
}

}  // namespace

OptimizerReport minimize_box(const ObjectiveFn& f, const GradientFn& g,
                             const Box& box, std::vector<double> x0,
                             const OptimizerOptions& opts) {
  box.validate();
  if (x0.size() != box.dim())
    fail(ErrorKind::Dimension, "optimize", "start dimension does not match box");
  if (opts.memory < 1 || opts.max_iter < 1)
    fail(ErrorKind::Parameter, "optimize", "memory and max_iter must be positive");
  if (!(opts.armijo_c1 > 0.0) || !(opts.armijo_c1 < opts.wolfe_c2) ||
      !(opts.wolfe_c2 < 1.0))
    fail(ErrorKind::Parameter, "optimize", "need 0 < armijo_c1 < wolfe_c2 < 1");

  OptimizerReport rep;
  std::vector<double> x = box.clamp(x0);
  double fx = f(x);
  ++rep.fevals;
  check_finite(fx, "objective");
  std::vector<double> grad = g(x);
  ++rep.gevals;
  check_finite(grad, "gradient");
  rep.accepted_f.push_back(fx);

  std::deque<Pair> hist;
  const std::size_t dim = x.size();

  auto pg_norm = [&](const std::vector<double>& xx, const std::vector<double>& gg) {
    double m = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      double step = std::clamp(xx[i] - gg[i], box.lower[i], box.upper[i]) - xx[i];
      m = std::max(m, std::fabs(step));
    }
    return m;
  };

  bool steepest_only = false;
  int iter = 0;
  while (iter < opts.max_iter) {
    rep.pg_norm = pg_norm(x, grad);
    if (rep.pg_norm <= opts.grad_tol) {
      rep.converged = true;
      break;
    }
    ++iter;

    std::vector<double> dir =
        (steepest_only || hist.empty()) ? std::vector<double>() : lm_direction(grad, hist);
    if (dir.empty()) {
      dir.assign(dim, 0.0);
      for (std::size_t i = 0; i < dim; ++i) dir[i] = -grad[i];
    }
    // Drop components that push out of the box at active bounds.
    for (std::size_t i = 0; i < dim; ++i) {
      if (x[i] <= box.lower[i] && dir[i] < 0.0) dir[i] = 0.0;
      if (x[i] >= box.upper[i] && dir[i] > 0.0) dir[i] = 0.0;
    }
    if (dot(dir, grad) >= 0.0 && !steepest_only) {
      // Not a descent direction: retry this iterate with plain projection.
      hist.clear();
      steepest_only = true;
      ++rep.restarts_used;
      --iter;
      continue;
    }

    // Weak Wolfe search along the projected arc: Armijo failures shrink the
    // step, curvature failures extend it, bisection once both sides are seen.
    // An accepted chord has (g_new - g)'s > 0 even when the clamp bends it,
    // so the memory update below stays well posed.
    double step = 1.0;
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    bool accepted = false;
    std::vector<double> xt, gt;
    double ft = 0.0;
    std::vector<double> best_x, best_g, prev_trial;
    double best_f = 0.0;
    bool have_best = false;
    for (int ls = 0; ls < opts.max_backtracks; ++ls) {
      std::vector<double> xs(dim);
      for (std::size_t i = 0; i < dim; ++i)
        xs[i] = std::clamp(x[i] + step * dir[i], box.lower[i], box.upper[i]);
      bool moved = false;
      double pred = 0.0;
      for (std::size_t i = 0; i < dim; ++i) {
        pred += grad[i] * (xs[i] - x[i]);
        if (xs[i] != x[i]) moved = true;
      }
      if (!moved) break;                              // below step resolution
      if (std::isinf(hi) && xs == prev_trial) break;  // box saturates the arc
      prev_trial = xs;
      double fs = f(xs);
      ++rep.fevals;
      if (!(pred < 0.0) || !std::isfinite(fs) ||
          fs > fx + opts.armijo_c1 * pred) {
        hi = step;
        step = 0.5 * (lo + hi);
        continue;
      }
      std::vector<double> gs = g(xs);
      ++rep.gevals;
      bool finite_g = true;
      for (double v : gs) finite_g = finite_g && std::isfinite(v);
      if (!finite_g) {
        hi = step;
        step = 0.5 * (lo + hi);
        continue;
      }
      if (!have_best || fs < best_f) {
        best_x = xs;
        best_g = gs;
        best_f = fs;
        have_best = true;
      }
      double slope = 0.0;
      for (std::size_t i = 0; i < dim; ++i) slope += gs[i] * (xs[i] - x[i]);
      if (slope < opts.wolfe_c2 * pred) {
        lo = step;
        step = std::isinf(hi) ? 2.0 * step : 0.5 * (lo + hi);
        continue;
      }
      xt = std::move(xs);
      gt = std::move(gs);
      ft = fs;
      accepted = true;
      break;
    }
    if (!accepted && have_best) {
      // Curvature never held within the trial budget; keep the best decrease
      // and let the s'y guard decide whether the pair enters the memory.
      xt = std::move(best_x);
      gt = std::move(best_g);
      ft = best_f;
      accepted = true;
    }

    if (!accepted) {
      if (!steepest_only) {
        hist.clear();
        steepest_only = true;
        ++rep.restarts_used;
        --iter;
        continue;
      }
      break;  // no decrease along the projected steepest descent arc
    }

    Pair pr;
    pr.s.resize(dim);
    pr.y.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      pr.s[i] = xt[i] - x[i];
      pr.y[i] = gt[i] - grad[i];
    }
    double sy = dot(pr.s, pr.y);
    if (sy > 1e-10 * norm2(pr.s) * norm2(pr.y)) {
      pr.rho = 1.0 / sy;
      hist.push_back(std::move(pr));
      if (hist.size() > static_cast<std::size_t>(opts.memory)) hist.pop_front();
      steepest_only = false;
    }
    x = std::move(xt);
    fx = ft;
    grad = std::move(gt);
    rep.accepted_f.push_back(fx);
    rep.iterations = iter;
  }

  rep.iterations = iter;
  rep.x = std::move(x);
  rep.f = fx;
  rep.pg_norm = pg_norm(rep.x, grad);
  if (rep.pg_norm <= opts.grad_tol) rep.converged = true;
  return rep;
}

MultiStartReport multi_start_minimize(const ObjectiveFn& f, const GradientFn& g,
                                      const Box& box,
                                      const std::vector<std::vector<double>>& starts,
                                      const OptimizerOptions& opts) {
  if (starts.empty())
    fail(ErrorKind::Parameter, "optimize", "multi-start needs at least one start");
  MultiStartReport out;
  bool have_best = false;
  for (const auto& s0 : starts) {
    OptimizerReport rep = minimize_box(f, g, box, s0, opts);
    if (!have_best || rep.f < out.best.f) {
      out.best = rep;
      have_best = true;
    }
    if (!rep.converged) continue;
    bool fresh = true;
    for (const auto& m : out.minima) {
      double d2 = 0.0;
      for (std::size_t i = 0; i < m.size(); ++i) {
        double t = m[i] - rep.x[i];
        d2 += t * t;
      }
      if (std::sqrt(d2) <= 1e-4) {
        fresh = false;
        break;
      }
    }
    if (fresh) {
      out.minima.push_back(rep.x);
      out.minima_f.push_back(rep.f);
    }
  }
  return out;
}

}  // namespace mee
