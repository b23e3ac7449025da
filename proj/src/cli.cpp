#include "mee/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mee/dependence.hpp"
#include "mee/experiment.hpp"
#include "mee/io.hpp"
#include "mee/models.hpp"
#include "mee/pipeline.hpp"

namespace mee {

namespace {

double parse_number(const std::string& text, const std::string& flag) {
  try {
    std::size_t used = 0;
    double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    fail(ErrorKind::Parse, "cli", flag + ": '" + text + "' is not a number");
  }
}

std::vector<double> parse_number_list(const std::string& text,
                                      const std::string& flag) {
  std::vector<double> out;
  std::string cur;
  for (char ch : text + ",") {
    if (ch == ',') {
      if (!cur.empty()) out.push_back(parse_number(cur, flag));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (out.empty()) fail(ErrorKind::Parse, "cli", flag + ": empty list");
  return out;
}

CovariatePoint mean_curve_of(const Sample& s) {
  CovariatePoint y;
  const std::size_t p = s.y.front().grid_size();
  y.values.assign(p, 0.0);
  for (const auto& yi : s.y)
    for (std::size_t j = 0; j < p; ++j) y.values[j] += yi.values[j];
  for (auto& v : y.values) v /= static_cast<double>(s.n);
  return y;
}

struct EstimateFlags {
  std::string data;
  std::string y_text;
  std::string out;
  std::string h_text = "auto";
  std::string kn_text = "auto";
  std::string kernel = "quadratic";
  std::string metric = "l2";
  std::string bounds;
  double alpha = 0.995;
  double grid_step = 0.0;
  double mu = 1.0;
  double alpha_n = 0.0;  // 0 = derive from kn
  int J = 9;
  int lambda_points = 64;
};

EstimationConfig build_config(const EstimateFlags& fl, std::size_t d) {
  EstimationConfig cfg;
  cfg.alpha = fl.alpha;
  if (fl.h_text != "auto") cfg.bandwidth = parse_number(fl.h_text, "--h");
  if (fl.kernel == "uniform")
    cfg.kernel = Kernel::uniform();
  else if (fl.kernel == "quadratic")
    cfg.kernel = Kernel::quadratic();
  else
    fail(ErrorKind::Parse, "cli", "--kernel must be uniform or quadratic");
  if (fl.metric == "l2")
    cfg.metric.kind = MetricKind::L2Grid;
  else if (fl.metric == "sup")
    cfg.metric.kind = MetricKind::Sup;
  else
    fail(ErrorKind::Parse, "cli", "--metric must be l2 or sup");
  cfg.metric.grid_step = fl.grid_step;
  cfg.hill.J = fl.J;
  if (fl.alpha_n > 0.0) cfg.hill.alpha_n = fl.alpha_n;
  if (fl.kn_text != "auto") {
    double v = parse_number(fl.kn_text, "--kn");
    if (v < 2) fail(ErrorKind::Parse, "cli", "--kn must be at least 2");
    cfg.kn = static_cast<std::size_t>(v);
  }
  if (!fl.bounds.empty()) {
    auto colon = fl.bounds.find(':');
    if (colon == std::string::npos)
      fail(ErrorKind::Parse, "cli", "--bounds must look like LO:HI");
    double lo = parse_number(fl.bounds.substr(0, colon), "--bounds");
    double hi = parse_number(fl.bounds.substr(colon + 1), "--bounds");
    cfg.box = Box::cube(d, lo, hi);
  }
  cfg.lambda_grid_points = fl.lambda_points;
  cfg.mu = fl.mu;
  return cfg;
}

void write_text(const std::string& out, const std::string& text) {
  if (out.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream f(out);
  if (!f) fail(ErrorKind::Parse, "cli", "cannot open " + out + " for writing");
  f << text << "\n";
}

int run(int argc, const char* const* argv) {
  CLI::App app{"Extreme multivariate expectile estimation"};
  app.require_subcommand(1);

  auto* sim = app.add_subcommand("simulate", "Draw a dataset from a model config");
  std::string sim_config, sim_out;
  std::size_t sim_n = 1000;
  std::uint64_t sim_seed = 1;
  sim->add_option("--config", sim_config, "model JSON file")->required();
  sim->add_option("--n", sim_n, "sample size")->required();
  sim->add_option("--seed", sim_seed, "RNG seed");
  sim->add_option("--out", sim_out, "output CSV (default stdout)");

  auto* est = app.add_subcommand("estimate", "Estimate an extreme expectile");
  est->set_help_flag("--help", "print help");  // frees -h for the bandwidth flag
  EstimateFlags fl;
  est->add_option("--data", fl.data, "dataset CSV")->required();
  est->add_option("--alpha", fl.alpha, "target level in (0,1)");
  est->add_option("--y", fl.y_text, "evaluation point, comma separated "
                                    "(default: mean covariate curve)");
  est->add_option("--h", fl.h_text, "bandwidth, number or 'auto'");
  est->add_option("--kernel", fl.kernel, "uniform|quadratic");
  est->add_option("--metric", fl.metric, "l2|sup");
  est->add_option("--grid-step", fl.grid_step, "metric grid step (0 = 1/p)");
  est->add_option("--J", fl.J, "number of tail log-spacings");
  est->add_option("--alpha-n", fl.alpha_n, "intermediate level (0 = from kn)");
  est->add_option("--kn", fl.kn_text, "intermediate count, integer or 'auto'");
  est->add_option("--bounds", fl.bounds, "optimizer box LO:HI");
  est->add_option("--mu", fl.mu, "rate exponent");
  est->add_option("--lambda-points", fl.lambda_points, "tail dependence grid size");
  est->add_option("--out", fl.out, "output JSON (default stdout)");

  auto* exp = app.add_subcommand("experiment", "Run a Monte Carlo experiment");
  std::string exp_config, exp_out;
  unsigned exp_threads = 0;
  exp->add_option("--config", exp_config, "experiment JSON file")->required();
  exp->add_option("--threads", exp_threads, "worker threads (0 = auto)");
  exp->add_option("--out", exp_out, "output CSV (overrides config)");

  auto* ora = app.add_subcommand("oracle", "Closed-form tail quantities");
  std::string ora_copula = "independence";
  double ora_theta = 1.0, ora_gamma = 0.5, ora_x1 = -1.0, ora_x2 = -1.0;
  std::size_t ora_d = 2;
  ora->add_option("--copula", ora_copula,
                  "independence|comonotone|survival_clayton");
  ora->add_option("--theta", ora_theta, "copula parameter");
  ora->add_option("--gamma", ora_gamma, "tail index");
  ora->add_option("--d", ora_d, "dimension");
  ora->add_option("--x1", ora_x1, "tail dependence first coordinate");
  ora->add_option("--x2", ora_x2, "tail dependence second coordinate");

  auto* rat = app.add_subcommand("rates", "Convergence-rate bookkeeping");
  std::size_t rat_n = 0, rat_kn = 0;
  double rat_alpha_n = 0.0, rat_psi = 0.0, rat_gamma = 0.0, rat_mu = 1.0;
  rat->add_option("--n", rat_n, "sample size")->required();
  rat->add_option("--alpha-n", rat_alpha_n, "intermediate level")->required();
  rat->add_option("--psi", rat_psi, "small ball estimate")->required();
  rat->add_option("--kn", rat_kn, "intermediate count")->required();
  rat->add_option("--gamma", rat_gamma, "tail index")->required();
  rat->add_option("--mu", rat_mu, "rate exponent");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);  // prints help or the usage error
    return code == 0 ? 0 : 1;
  }

  if (sim->parsed()) {
    ConditionalModel model = model_from_json_file(sim_config);
    Sample s = generate_dataset(model, sim_n, sim_seed);
    if (sim_out.empty())
      write_dataset_csv(s, std::cout);
    else
      write_dataset_csv(s, sim_out);
    return 0;
  }

  if (est->parsed()) {
    Sample s = read_dataset_csv(fl.data);
    CovariatePoint y = fl.y_text.empty()
                           ? mean_curve_of(s)
                           : CovariatePoint{parse_number_list(fl.y_text, "--y")};
    EstimationConfig cfg = build_config(fl, s.d);
    MEEResult res = estimate_mee(s, y, cfg);
    write_text(fl.out, mee_result_to_json(res));
    return 0;
  }

  if (exp->parsed()) {
    ExperimentConfig cfg = experiment_from_json_file(exp_config);
    if (!exp_out.empty()) cfg.output = exp_out;
    std::vector<ResultRow> rows = run_experiment(cfg, exp_threads);
    if (cfg.output.empty()) write_result_rows_csv(rows, cfg.model.d, std::cout);
    return 0;
  }

  if (ora->parsed()) {
    CopulaKind kind;
    LambdaFamily fam;
    if (ora_copula == "independence") {
      kind = CopulaKind::Independence;
      fam = LambdaFamily::Independence;
    } else if (ora_copula == "comonotone") {
      kind = CopulaKind::Comonotone;
      fam = LambdaFamily::Comonotone;
    } else if (ora_copula == "survival_clayton") {
      kind = CopulaKind::SurvivalClayton;
      fam = LambdaFamily::SurvivalClayton;
    } else {
      fail(ErrorKind::Parse, "cli",
           "--copula must be independence, comonotone or survival_clayton");
    }
    std::ostringstream out;
    out << "{\n";
    if (auto star = theta_star_analytic(kind, ora_d, ora_gamma)) {
      out << "  \"theta_star\": {\"eta\": " << format_double(star->eta)
          << ", \"beta\": [";
      for (std::size_t i = 0; i < star->beta.size(); ++i)
        out << (i ? ", " : "") << format_double(star->beta[i]);
      out << "]}";
    } else {
      out << "  \"theta_star\": null";
    }
    if (ora_x1 >= 0.0 && ora_x2 >= 0.0)
      out << ",\n  \"lambda\": "
          << format_double(lambda_oracle(fam, ora_theta, ora_x1, ora_x2));
    out << "\n}";
    std::cout << out.str() << "\n";
    return 0;
  }

  RatePlan plan = rate_plan(rat_n, rat_alpha_n, rat_psi, rat_kn, rat_gamma, rat_mu);
  std::cout << rate_plan_to_json(plan) << "\n";
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  try {
    return run(argc, argv);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
}

}  // namespace mee
