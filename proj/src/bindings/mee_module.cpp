#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "mee/dependence.hpp"
#include "mee/experiment.hpp"
#include "mee/io.hpp"
#include "mee/models.hpp"
#include "mee/objective.hpp"
#include "mee/pipeline.hpp"

namespace py = pybind11;
using namespace mee;

namespace {

Sample sample_from_lists(const std::vector<std::vector<double>>& x,
                         const std::vector<std::vector<double>>& y) {
  if (x.empty() || x.size() != y.size())
    fail(ErrorKind::Dimension, "bindings",
         "x and y must be nonempty and equally long");
  const std::size_t n = x.size();
  const std::size_t d = x.front().size();
  std::vector<double> flat;
  flat.reserve(n * d);
  std::vector<CovariatePoint> ys;
  ys.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i].size() != d)
      fail(ErrorKind::Dimension, "bindings", "ragged response rows");
    flat.insert(flat.end(), x[i].begin(), x[i].end());
    CovariatePoint yi;
    yi.values = y[i];
    ys.push_back(std::move(yi));
  }
  return Sample::make(n, d, std::move(flat), std::move(ys));
}

py::dict theta_to_dict(const ThetaVector& t) {
  py::dict d;
  d["eta"] = t.eta;
  d["beta"] = t.beta;
  return d;
}

py::dict result_to_dict(const MEEResult& r) {
  py::dict d;
  d["theta"] = theta_to_dict(r.theta);
  d["gamma"] = r.gamma;
  d["c"] = r.c;
  d["expectile"] = r.expectile;
  d["q1"] = r.q1;
  d["h"] = r.h;
  d["psi"] = r.psi;
  d["kn"] = r.kn;
  d["alpha_n"] = r.alpha_n;
  d["loss"] = r.loss;
  d["converged"] = r.optimizer.converged;
  d["iterations"] = r.optimizer.iterations;
  d["distinct_minima"] = r.distinct_minima;
  py::dict rates;
  rates["delta0"] = r.rates.delta0;
  rates["delta_minus1"] = r.rates.delta_minus1;
  rates["delta_gamma"] = r.rates.delta_gamma;
  rates["combined"] = r.rates.combined;
  d["rates"] = rates;
  d["warnings"] = r.warnings;
  return d;
}

EstimationConfig config_from_args(double alpha, std::optional<double> h,
                                  const std::string& kernel,
                                  const std::string& metric, int J,
                                  std::optional<std::size_t> kn,
                                  std::optional<double> alpha_n,
                                  std::optional<std::pair<double, double>> bounds,
                                  double mu, int lambda_points, std::size_t d) {
  EstimationConfig cfg;
  cfg.alpha = alpha;
  cfg.bandwidth = h;
  if (kernel == "uniform")
    cfg.kernel = Kernel::uniform();
  else if (kernel == "quadratic")
    cfg.kernel = Kernel::quadratic();
  else
    fail(ErrorKind::Parse, "bindings", "kernel must be uniform or quadratic");
  if (metric == "l2")
    cfg.metric.kind = MetricKind::L2Grid;
  else if (metric == "sup")
    cfg.metric.kind = MetricKind::Sup;
  else
    fail(ErrorKind::Parse, "bindings", "metric must be l2 or sup");
  cfg.hill.J = J;
  cfg.hill.alpha_n = alpha_n;
  cfg.kn = kn;
  if (bounds) cfg.box = Box::cube(d, bounds->first, bounds->second);
  cfg.mu = mu;
  cfg.lambda_grid_points = lambda_points;
  return cfg;
}

LambdaFamily family_from_string(const std::string& name) {
  if (name == "independence") return LambdaFamily::Independence;
  if (name == "comonotone") return LambdaFamily::Comonotone;
  if (name == "survival_clayton") return LambdaFamily::SurvivalClayton;
  fail(ErrorKind::Parse, "bindings", "unknown tail dependence family '" + name + "'");
}

CopulaKind copula_from_string(const std::string& name) {
  if (name == "independence") return CopulaKind::Independence;
  if (name == "comonotone") return CopulaKind::Comonotone;
  if (name == "survival_clayton") return CopulaKind::SurvivalClayton;
  fail(ErrorKind::Parse, "bindings", "unknown copula kind '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_mee, m) {
  m.doc() = "Extreme multivariate expectile estimation under functional covariates";

  py::register_exception<Error>(m, "EstimationError");

  m.def(
      "simulate",
      [](const std::string& model_json, std::size_t n, std::uint64_t seed) {
        ConditionalModel model = model_from_json_text(model_json, "<python>");
        Sample s = generate_dataset(model, n, seed);
        std::vector<std::vector<double>> x(s.n), y(s.n);
        for (std::size_t i = 0; i < s.n; ++i) {
          x[i].assign(s.x.begin() + static_cast<long>(i * s.d),
                      s.x.begin() + static_cast<long>((i + 1) * s.d));
          y[i] = s.y[i].values;
        }
        return py::make_tuple(x, y);
      },
      py::arg("model_json"), py::arg("n"), py::arg("seed") = 1,
      "Draw (responses, covariate curves) from a model described as JSON");

  m.def(
      "estimate",
      [](const std::vector<std::vector<double>>& x,
         const std::vector<std::vector<double>>& y,
         const std::vector<double>& y_eval, double alpha, std::optional<double> h,
         const std::string& kernel, const std::string& metric, int J,
         std::optional<std::size_t> kn, std::optional<double> alpha_n,
         std::optional<std::pair<double, double>> bounds, double mu,
         int lambda_points) {
        Sample s = sample_from_lists(x, y);
        CovariatePoint yp;
        yp.values = y_eval;
        EstimationConfig cfg = config_from_args(alpha, h, kernel, metric, J, kn,
                                                alpha_n, bounds, mu,
                                                lambda_points, s.d);
        return result_to_dict(estimate_mee(s, yp, cfg));
      },
      py::arg("x"), py::arg("y"), py::arg("y_eval"), py::arg("alpha") = 0.995,
      py::arg("h") = std::nullopt, py::arg("kernel") = "quadratic",
      py::arg("metric") = "l2", py::arg("J") = 9, py::arg("kn") = std::nullopt,
      py::arg("alpha_n") = std::nullopt, py::arg("bounds") = std::nullopt,
      py::arg("mu") = 1.0, py::arg("lambda_points") = 64,
      "Full plug-in extreme expectile estimate at a covariate point");

  m.def(
      "direct_expectile",
      [](const std::vector<std::vector<double>>& x, double alpha) {
        if (x.empty())
          fail(ErrorKind::Dimension, "bindings", "x must be nonempty");
        const std::size_t n = x.size();
        std::vector<std::vector<double>> y(n, std::vector<double>{0.0});
        Sample s = sample_from_lists(x, y);
        WeightVector w;
        w.w.assign(n, 1.0 / static_cast<double>(n));
        w.effective_count = n;
        return direct_empirical_expectile(s, w, alpha);
      },
      py::arg("x"), py::arg("alpha"),
      "Unweighted empirical expectile of rows of x");

  m.def(
      "lambda_oracle",
      [](const std::string& family, double theta, double x1, double x2) {
        return lambda_oracle(family_from_string(family), theta, x1, x2);
      },
      py::arg("family"), py::arg("theta"), py::arg("x1"), py::arg("x2"),
      "Closed-form upper tail dependence");

  m.def(
      "theta_star",
      [](const std::string& copula, std::size_t d,
         double gamma) -> py::object {
        auto t = theta_star_analytic(copula_from_string(copula), d, gamma);
        if (!t) return py::none();
        return theta_to_dict(*t);
      },
      py::arg("copula"), py::arg("d"), py::arg("gamma"),
      "Closed-form root of the first-order system, when one exists");

  m.def(
      "rate_plan",
      [](std::size_t n, double alpha_n, double psi, std::size_t kn, double gamma,
         double mu) {
        RatePlan r = rate_plan(n, alpha_n, psi, kn, gamma, mu);
        py::dict d;
        d["delta0"] = r.delta0;
        d["delta_minus1"] = r.delta_minus1;
        d["delta_gamma"] = r.delta_gamma;
        d["combined"] = r.combined;
        return d;
      },
      py::arg("n"), py::arg("alpha_n"), py::arg("psi"), py::arg("kn"),
      py::arg("gamma"), py::arg("mu") = 1.0,
      "Convergence-rate bookkeeping for one estimation run");
}
