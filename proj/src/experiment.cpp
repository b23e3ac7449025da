#include "mee/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "mee/rng.hpp"

namespace mee {

using nlohmann::json;

CovariatePoint ExperimentConfig::eval_point() const {
  if (y_values) {
    CovariatePoint y;
    y.values = *y_values;
    y.validate("experiment");
    return y;
  }
  return model.covariate.mean_curve();
}

namespace {

EstimationConfig estimation_from_json(const json& j, const std::string& name) {
  EstimationConfig cfg;
  if (j.is_null()) return cfg;
  if (!j.is_object())
    fail(ErrorKind::Parse, "config", name + ": estimation must be an object");
  cfg.alpha = j.value("alpha", cfg.alpha);
  if (j.contains("bandwidth") && j.at("bandwidth").is_number())
    cfg.bandwidth = j.at("bandwidth").get<double>();
  if (j.contains("kernel")) {
    std::string k = j.at("kernel").get<std::string>();
    if (k == "uniform")
      cfg.kernel = Kernel::uniform();
    else if (k == "quadratic")
      cfg.kernel = Kernel::quadratic();
    else
      fail(ErrorKind::Parse, "config", name + ": unknown kernel '" + k + "'");
  }
  if (j.contains("metric")) {
    const json& m = j.at("metric");
    std::string kind = m.value("kind", "l2");
    if (kind == "l2")
      cfg.metric.kind = MetricKind::L2Grid;
    else if (kind == "sup")
      cfg.metric.kind = MetricKind::Sup;
    else
      fail(ErrorKind::Parse, "config", name + ": unknown metric '" + kind + "'");
    cfg.metric.grid_step = m.value("grid_step", 0.0);
  }
  if (j.contains("hill")) {
    const json& h = j.at("hill");
    cfg.hill.J = h.value("J", cfg.hill.J);
    if (h.contains("taus")) cfg.hill.taus = h.at("taus").get<std::vector<double>>();
    if (h.contains("alpha_n") && h.at("alpha_n").is_number())
      cfg.hill.alpha_n = h.at("alpha_n").get<double>();
  }
  if (j.contains("kn") && j.at("kn").is_number_integer())
    cfg.kn = j.at("kn").get<std::size_t>();
  if (j.contains("box")) {
    const json& b = j.at("box");
    if (!b.is_array() || b.size() != 2)
      fail(ErrorKind::Parse, "config", name + ": box must be [lower, upper]");
    // Dimension is data-dependent; remember the bounds and expand later.
    cfg.box = Box::cube(1, b[0].get<double>(), b[1].get<double>());
  }
  if (j.contains("optimizer")) {
    const json& o = j.at("optimizer");
    cfg.optimizer.memory = o.value("memory", cfg.optimizer.memory);
    cfg.optimizer.grad_tol = o.value("grad_tol", cfg.optimizer.grad_tol);
    cfg.optimizer.max_iter = o.value("max_iter", cfg.optimizer.max_iter);
    cfg.optimizer.armijo_c1 = o.value("armijo_c1", cfg.optimizer.armijo_c1);
    cfg.optimizer.wolfe_c2 = o.value("wolfe_c2", cfg.optimizer.wolfe_c2);
    cfg.optimizer.max_backtracks =
        o.value("max_backtracks", cfg.optimizer.max_backtracks);
  }
  if (j.contains("quadrature")) {
    const json& q = j.at("quadrature");
    cfg.quadrature.abs_tol = q.value("abs_tol", cfg.quadrature.abs_tol);
    cfg.quadrature.rel_tol = q.value("rel_tol", cfg.quadrature.rel_tol);
    cfg.quadrature.max_subdivisions =
        q.value("max_subdivisions", cfg.quadrature.max_subdivisions);
    cfg.quadrature.endpoint_split =
        q.value("endpoint_split", cfg.quadrature.endpoint_split);
  }
  cfg.lambda_grid_points = j.value("lambda_grid_points", cfg.lambda_grid_points);
  cfg.mu = j.value("mu", cfg.mu);
  return cfg;
}

}  // namespace

ExperimentConfig experiment_from_json_text(const std::string& text,
                                           const std::string& name) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) fail(ErrorKind::Parse, "config", name + ": invalid JSON");
  try {
    ExperimentConfig cfg;
    if (!j.contains("model"))
      fail(ErrorKind::Parse, "config", name + ": missing 'model'");
    cfg.model = model_from_json_text(j.at("model").dump(), name);
    if (!j.contains("sample_sizes"))
      fail(ErrorKind::Parse, "config", name + ": missing 'sample_sizes'");
    cfg.sample_sizes = j.at("sample_sizes").get<std::vector<std::size_t>>();
    if (cfg.sample_sizes.empty())
      fail(ErrorKind::Parse, "config", name + ": sample_sizes must be nonempty");
    for (std::size_t n : cfg.sample_sizes)
      if (n < 4)
        fail(ErrorKind::Parse, "config", name + ": sample sizes must be >= 4");
    cfg.replications = j.value("replications", cfg.replications);
    if (cfg.replications == 0)
      fail(ErrorKind::Parse, "config", name + ": replications must be positive");
    cfg.master_seed = j.value("master_seed", cfg.master_seed);
    cfg.estimation = estimation_from_json(j.value("estimation", json()), name);
    if (j.contains("y")) cfg.y_values = j.at("y").get<std::vector<double>>();
    cfg.output = j.value("output", std::string());
    return cfg;
  } catch (const json::exception& e) {
    fail(ErrorKind::Parse, "config", name + ": " + e.what());
  }
}

ExperimentConfig experiment_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Parse, "config", "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return experiment_from_json_text(buf.str(), path);
}

unsigned resolve_threads(std::optional<unsigned> override_threads) {
  if (override_threads && *override_threads > 0) return *override_threads;
  if (const char* env = std::getenv("MEE_THREADS")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg, unsigned threads) {
  cfg.model.validate("experiment");
  if (cfg.sample_sizes.empty())
    fail(ErrorKind::Parameter, "experiment", "sample_sizes must be nonempty");
  if (cfg.replications == 0)
    fail(ErrorKind::Parameter, "experiment", "replications must be positive");

  const CovariatePoint y = cfg.eval_point();
  EstimationConfig est = cfg.estimation;
  if (est.box && est.box->dim() != cfg.model.d) {
    est.box = Box::cube(cfg.model.d, est.box->lower[0], est.box->upper[0]);
  }

  // The reference root is a property of the model at y, shared by every row.
  std::optional<ThetaVector> star = theta_star_analytic(cfg.model, y);
  if (!star && cfg.model.d >= 2) {
    try {
      XiEstimate xi = model_xi(cfg.model, y);
      Box box = est.box ? *est.box : Box::cube(cfg.model.d, 1e-3, 1e3);
      star = theta_star_reference(xi, box, est.quadrature, est.optimizer);
    } catch (const Error&) {
      star.reset();  // rows keep empty reference columns
    }
  }

  const std::size_t reps = cfg.replications;
  const std::size_t total = cfg.sample_sizes.size() * reps;
  std::vector<ResultRow> rows(total);

  auto run_cell = [&](std::size_t idx) {
    const std::size_t ni = idx / reps;
    const std::size_t rep = idx % reps;
    const std::size_t n = cfg.sample_sizes[ni];
    ResultRow& row = rows[idx];
    row.n = n;
    row.rep = rep;
    row.seed = derive_seed(cfg.master_seed, ni, rep);
    auto t0 = std::chrono::steady_clock::now();
    try {
      Sample s = generate_dataset(cfg.model, n, row.seed);
      MEEResult res = estimate_mee(s, y, est);
      row.gamma_hat = res.gamma;
      row.c_hat = res.c;
      row.theta_hat = res.theta;
      row.theta_star = star;
      if (star) {
        double l1 = std::fabs(res.theta.eta - star->eta);
        for (std::size_t m = 0; m < star->beta.size(); ++m)
          l1 += std::fabs(res.theta.beta[m] - star->beta[m]);
        row.l1_error = l1;
      }
      row.expectile = res.expectile;
      row.rate_combined = res.rates.combined;
      row.converged = res.optimizer.converged;
    } catch (const Error& e) {
      row.converged = false;
      row.error = e.stage();
    } catch (const std::exception&) {
      row.converged = false;
      row.error = "internal";
    }
    auto t1 = std::chrono::steady_clock::now();
    row.wall_time_ms =
        std::chrono::duration<double, std::milli>(t1 - t0).count();
  };

  const unsigned workers =
      std::min<unsigned>(resolve_threads(threads), static_cast<unsigned>(total));
  if (workers <= 1) {
    for (std::size_t i = 0; i < total; ++i) run_cell(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1))
          run_cell(i);
      });
    }
    for (auto& th : pool) th.join();
  }

  if (!cfg.output.empty()) write_result_rows_csv(rows, cfg.model.d, cfg.output);
  return rows;
}

}  // namespace mee
