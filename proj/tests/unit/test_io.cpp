#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "mee/error.hpp"
#include "mee/io.hpp"
#include "mee/models.hpp"

using namespace mee;

TEST_CASE("format_double round trips exactly") {
  for (double v : {0.0, 1.0, -1.5, 1.0 / 3.0, 0.1, 1e-300, 1e300,
                   6.02214076e23, -2.2250738585072014e-308}) {
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_double(1.0) == "1");
}

TEST_CASE("dataset csv round trip is bitwise") {
  const std::size_t n = 5, d = 2;
  std::vector<double> x = {0.1,   1.0 / 3.0, 2.5,  1e-15, 7.0,
                           1e12,  0.25,      -3.5, 42.0,  1e-7};
  std::vector<CovariatePoint> ys;
  for (std::size_t i = 0; i < n; ++i)
    ys.push_back(CovariatePoint{{0.5 * static_cast<double>(i), -1.25, 1.0 / 7.0}});
  Sample s = Sample::make(n, d, x, ys);

  std::ostringstream out;
  write_dataset_csv(s, out);
  std::string text = out.str();
  CHECK(text.rfind("x_1,x_2,y_1,y_2,y_3\n", 0) == 0);

  std::istringstream in(text);
  Sample back = parse_dataset_csv(in, "test");
  CHECK(back.n == n);
  CHECK(back.d == d);
  CHECK(back.x == s.x);
  for (std::size_t i = 0; i < n; ++i) CHECK(back.y[i].values == s.y[i].values);
}

TEST_CASE("dataset csv parse errors carry the location") {
  SUBCASE("empty input") {
    std::istringstream in("");
    CHECK_THROWS_AS(parse_dataset_csv(in, "t"), Error);
  }
  SUBCASE("bad header") {
    std::istringstream in("a,b\n1,2\n");
    try {
      parse_dataset_csv(in, "t");
      FAIL("expected a parse error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Parse);
      CHECK(std::string(e.what()).find("header") != std::string::npos);
    }
  }
  SUBCASE("bad cell names line and column") {
    std::istringstream in("x_1,x_2,y_1\n1,2,3\n1,oops,3\n");
    try {
      parse_dataset_csv(in, "t");
      FAIL("expected a parse error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Parse);
      std::string msg = e.what();
      CHECK(msg.find("line 3") != std::string::npos);
      CHECK(msg.find("column 2") != std::string::npos);
      CHECK(msg.find("oops") != std::string::npos);
    }
  }
  SUBCASE("field count mismatch") {
    std::istringstream in("x_1,x_2,y_1\n1,2\n");
    CHECK_THROWS_AS(parse_dataset_csv(in, "t"), Error);
  }
  SUBCASE("header only") {
    std::istringstream in("x_1,x_2,y_1\n");
    CHECK_THROWS_AS(parse_dataset_csv(in, "t"), Error);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(read_dataset_csv("/nonexistent/path.csv"), Error);
  }
}

TEST_CASE("result rows csv") {
  auto cols = result_row_columns(2);
  REQUIRE(cols.size() == 17);
  CHECK(cols.front() == "n");
  CHECK(cols[3] == "gamma_hat");
  CHECK(cols.back() == "error");

  ResultRow full;
  full.n = 100;
  full.rep = 2;
  full.seed = 42;
  full.gamma_hat = 0.5;
  full.c_hat = {1.0, 4.0};
  ThetaVector hat;
  hat.eta = 1.0;
  hat.beta = {2.0};
  full.theta_hat = hat;
  ThetaVector star;
  star.eta = 1.0;
  star.beta = {1.0};
  full.theta_star = star;
  full.l1_error = 0.5;
  full.expectile = {10.0, 20.0};
  full.rate_combined = 5.0;
  full.wall_time_ms = 1.5;
  full.converged = true;

  ResultRow failed;
  failed.n = 100;
  failed.rep = 3;
  failed.seed = 43;
  failed.wall_time_ms = 0.25;
  failed.converged = false;
  failed.error = "estimate";

  std::ostringstream out;
  write_result_rows_csv({full, failed}, 2, out);
  std::istringstream lines(out.str());
  std::string header, row1, row2;
  std::getline(lines, header);
  std::getline(lines, row1);
  std::getline(lines, row2);
  CHECK(header ==
        "n,rep,seed,gamma_hat,c_hat_1,c_hat_2,eta_hat,beta_hat_2,eta_star,"
        "beta_star_2,l1_error,expectile_1,expectile_2,rate_combined,"
        "wall_time_ms,converged,error");
  CHECK(row1 == "100,2,42,0.5,1,4,1,2,1,1,0.5,10,20,5,1.5,1,");
  CHECK(row2 == "100,3,43,,,,,,,,,,,,0.25,0,estimate");

  // Stage strings with separators are quoted.
  failed.error = "bad, thing";
  std::ostringstream quoted;
  write_result_rows_csv({failed}, 2, quoted);
  CHECK(quoted.str().find("\"bad, thing\"") != std::string::npos);
}

TEST_CASE("model json parsing") {
  const std::string text = R"({
    "d": 2,
    "margins": [
      {"family": "lomax", "gamma": 0.5, "scale": 2.0},
      {"family": "burr", "tau": 2.0, "lam": 1.0}
    ],
    "gamma_link": {"g0": 0.5, "g1": 0.1, "clip_lo": 0.3, "clip_hi": 0.7},
    "copula": {"kind": "survival_clayton", "theta0": 1.5, "theta1": 0.2},
    "covariate": {"kind": "fourier", "grid_size": 32}
  })";
  ConditionalModel m = model_from_json_text(text, "t");
  CHECK(m.d == 2);
  CHECK(m.margins[0].kind == MarginalKind::Lomax);
  CHECK(m.margins[0].scale == 2.0);
  CHECK(m.margins[1].kind == MarginalKind::Burr);
  CHECK(m.margins[1].tail_index() == doctest::Approx(0.5));
  CHECK(m.gamma_link.g1 == 0.1);
  CHECK(m.copula.kind == CopulaKind::SurvivalClayton);
  CHECK(m.copula.theta0 == 1.5);
  CHECK(m.covariate.kind == CovariateKind::Fourier);
  CHECK(m.covariate.grid_size == 32);

  // A single margin object is replicated across all components.
  ConditionalModel rep = model_from_json_text(
      R"({"d": 3, "margins": {"family": "frechet", "gamma": 0.4}})", "t");
  CHECK(rep.margins.size() == 3);
  CHECK(rep.margins[2].kind == MarginalKind::Frechet);
}

TEST_CASE("model json parse errors") {
  CHECK_THROWS_AS(model_from_json_text("{", "t"), Error);
  CHECK_THROWS_AS(model_from_json_text("[1,2]", "t"), Error);
  CHECK_THROWS_AS(
      model_from_json_text(R"({"margins": {"family": "cauchy"}})", "t"), Error);
  CHECK_THROWS_AS(
      model_from_json_text(R"({"copula": {"kind": "gumbel"}})", "t"), Error);
  // One margin for two components fails model validation.
  CHECK_THROWS_AS(model_from_json_text(
                      R"({"d": 2, "margins": [{"family": "lomax"}]})", "t"),
                  Error);
  CHECK_THROWS_AS(model_from_json_file("/nonexistent/model.json"), Error);
}

TEST_CASE("result json views parse back") {
  MEEResult r;
  r.theta.eta = 1.25;
  r.theta.beta = {2.0};
  r.gamma = 0.5;
  r.c = {1.0, 4.0};
  r.expectile = {10.0, 20.0};
  r.q1 = 10.0;
  r.h = 0.7;
  r.psi = 0.25;
  r.kn = 100;
  r.alpha_n = 0.99;
  r.loss = 1e-18;
  r.optimizer.converged = true;
  r.rates = rate_plan(10000, 0.99, 0.01, 100, 0.5, 1.0);
  r.warnings = {"w"};

  nlohmann::json j = nlohmann::json::parse(mee_result_to_json(r));
  CHECK(j.at("gamma").get<double>() == 0.5);
  CHECK(j.at("theta").at("eta").get<double>() == 1.25);
  CHECK(j.at("theta").at("beta").get<std::vector<double>>() ==
        std::vector<double>{2.0});
  CHECK(j.at("c").get<std::vector<double>>() == std::vector<double>{1.0, 4.0});
  CHECK(j.at("kn").get<int>() == 100);
  CHECK(j.at("optimizer").at("converged").get<bool>());
  CHECK(j.at("rates").at("combined").get<double>() == doctest::Approx(5.0));
  CHECK(j.at("warnings").size() == 1);

  nlohmann::json rj = nlohmann::json::parse(rate_plan_to_json(r.rates));
  CHECK(rj.at("delta0").get<double>() == doctest::Approx(1.0));
  CHECK(rj.at("delta_minus1").get<double>() == doctest::Approx(100.0));
  CHECK(rj.at("delta_gamma").get<double>() == doctest::Approx(5.0));
}
