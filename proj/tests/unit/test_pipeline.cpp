#include <cmath>
#include <cstddef>
#include <vector>

#include "doctest.h"
#include "mee/conditional.hpp"
#include "mee/covariate.hpp"
#include "mee/error.hpp"
#include "mee/models.hpp"
#include "mee/pipeline.hpp"

using namespace mee;

namespace {

ConditionalModel comonotone_lomax() {
  ConditionalModel model;
  model.d = 2;
  model.margins = {MarginalFamily::lomax(0.5, 1.0), MarginalFamily::lomax(0.5, 2.0)};
  model.gamma_link = {0.5, 0.0, 0.1, 0.9};
  model.copula.kind = CopulaKind::Comonotone;
  model.covariate.kind = CovariateKind::Constant;
  model.covariate.grid_size = 3;
  model.covariate.value = 0.0;
  return model;
}

}  // namespace

TEST_CASE("rate plan frozen values") {
  RatePlan r = rate_plan(10000, 0.99, 0.01, 100, 0.5, 1.0);
  CHECK(r.delta0 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.delta_minus1 == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(r.delta_gamma == doctest::Approx(5.0).epsilon(1e-12));
  // kn == ceil(n psi): combined = min(delta_gamma, (n psi)^min(1/2, mu)).
  CHECK(r.combined == doctest::Approx(5.0).epsilon(1e-12));

  // Decoupled kn falls back to the minimum of all three.
  RatePlan u = rate_plan(10000, 0.99, 0.01, 50, 0.5, 1.0);
  CHECK(u.combined == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rate plan validation") {
  CHECK_THROWS_AS(rate_plan(0, 0.99, 0.01, 100, 0.5, 1.0), Error);
  CHECK_THROWS_AS(rate_plan(10000, 1.0, 0.01, 100, 0.5, 1.0), Error);
  CHECK_THROWS_AS(rate_plan(10000, 0.99, 0.0, 100, 0.5, 1.0), Error);
  CHECK_THROWS_AS(rate_plan(10000, 0.99, 0.01, 0, 0.5, 1.0), Error);
  CHECK_THROWS_AS(rate_plan(10000, 0.99, 0.01, 100, 1.0, 1.0), Error);
  CHECK_THROWS_AS(rate_plan(10000, 0.99, 0.01, 100, 0.5, 0.0), Error);
}

TEST_CASE("automatic kn under a degenerate covariate") {
  Sample s = generate_dataset(comonotone_lomax(), 500, 5);
  EstimationConfig cfg;
  MEEResult res = estimate_mee(s, s.y[0], cfg);
  CHECK(res.psi == 1.0);            // every curve sits in the ball
  CHECK(res.kn == 78);              // ceil(500^0.7) caps ceil(n psi)
  CHECK(res.h > 0.0);
  CHECK(res.alpha_n == doctest::Approx(1.0 - 78.0 / 500.0));
}

TEST_CASE("estimation recovers the comonotone root") {
  ConditionalModel model = comonotone_lomax();
  Sample s = generate_dataset(model, 8000, 21);
  EstimationConfig cfg;
  cfg.kn = 140;
  MEEResult res = estimate_mee(s, model.covariate.mean_curve(), cfg);

  CHECK(std::fabs(res.gamma - 0.5) < 0.12);
  CHECK(std::fabs(res.c[1] - 4.0) < 1.5);
  CHECK(std::fabs(res.theta.eta - 1.0) < 0.45);
  CHECK(std::fabs(res.theta.beta[0] - 2.0) < 0.6);
  // The comonotone root is a repeated one, so sampling noise can split it
  // into a complex pair; the attained minimum then sits at noise level
  // rather than at zero.
  CHECK(res.loss < 0.05);
  CHECK(res.optimizer.converged);
  CHECK(res.c[0] == 1.0);
  CHECK(res.q1 > 0.0);

  // Assembly identity between the reported pieces.
  CHECK(res.expectile[0] ==
        doctest::Approx(res.q1 * std::pow(res.theta.eta, res.gamma)).epsilon(1e-12));
  CHECK(res.expectile[1] ==
        doctest::Approx(res.expectile[0] * res.theta.beta[0]).epsilon(1e-12));

  // Reference quantile extrapolates the intermediate-level quantile.
  WeightVector w = nw_weights(s, model.covariate.mean_curve(), res.h, cfg.kernel,
                              cfg.metric);
  double q_base = cond_quantile(s, w, 0, res.alpha_n);
  double ratio = (1.0 - res.alpha_n) / (1.0 - cfg.alpha);
  CHECK(res.q1 == doctest::Approx(q_base * std::pow(ratio, res.gamma)).epsilon(1e-12));

  // Below the intermediate level the weighted empirical quantile is used as is.
  EstimationConfig low = cfg;
  low.alpha = 0.9;
  MEEResult res_low = estimate_mee(s, model.covariate.mean_curve(), low);
  CHECK(res_low.q1 == doctest::Approx(cond_quantile(s, w, 0, 0.9)).epsilon(1e-12));
}

TEST_CASE("scale equivariance of the full pipeline") {
  ConditionalModel model = comonotone_lomax();
  Sample s = generate_dataset(model, 2000, 9);
  Sample scaled = s;
  for (auto& v : scaled.x) v *= 10.0;

  EstimationConfig cfg;
  cfg.kn = 65;
  CovariatePoint y = model.covariate.mean_curve();
  MEEResult a = estimate_mee(s, y, cfg);
  MEEResult b = estimate_mee(scaled, y, cfg);

  CHECK(b.gamma == doctest::Approx(a.gamma).epsilon(1e-12));
  CHECK(b.c[1] == doctest::Approx(a.c[1]).epsilon(1e-10));
  CHECK(b.theta.eta == doctest::Approx(a.theta.eta).epsilon(1e-7));
  CHECK(b.theta.beta[0] == doctest::Approx(a.theta.beta[0]).epsilon(1e-7));
  CHECK(b.q1 == doctest::Approx(10.0 * a.q1).epsilon(1e-9));
  CHECK(b.expectile[0] == doctest::Approx(10.0 * a.expectile[0]).epsilon(1e-7));
  CHECK(b.expectile[1] == doctest::Approx(10.0 * a.expectile[1]).epsilon(1e-7));
  CHECK(b.kn == a.kn);
  CHECK(b.psi == a.psi);
}

TEST_CASE("moderate level diagnostic") {
  ConditionalModel model = comonotone_lomax();
  Sample s = generate_dataset(model, 4000, 13);
  EstimationConfig cfg;
  cfg.kn = 100;
  CovariatePoint y = model.covariate.mean_curve();

  CHECK_THROWS_AS(moderate_level_check(s, y, cfg, 0.9), Error);
  CHECK_THROWS_AS(moderate_level_check(s, y, cfg, 0.99), Error);

  ModerateCheck check = moderate_level_check(s, y, cfg, 0.95);
  REQUIRE(check.direct.size() == 2);
  REQUIRE(check.assembled.size() == 2);
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(check.direct[k] > 0.0);
    CHECK(check.assembled[k] > 0.0);
    CHECK(std::isfinite(check.relative_gap[k]));
    CHECK(check.relative_gap[k] < 1.0);
  }
}

TEST_CASE("estimation input validation") {
  ConditionalModel model = comonotone_lomax();
  Sample s = generate_dataset(model, 200, 3);
  CovariatePoint y = model.covariate.mean_curve();
  EstimationConfig cfg;

  SUBCASE("one margin is not enough") {
    std::vector<double> col(s.n);
    for (std::size_t i = 0; i < s.n; ++i) col[i] = s.xat(i, 0);
    Sample one = Sample::make(s.n, 1, col, s.y);
    try {
      estimate_mee(one, y, cfg);
      FAIL("expected a dimension error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Dimension);
    }
  }
  SUBCASE("tiny samples are rejected") {
    Sample tiny = generate_dataset(model, 3, 1);
    CHECK_THROWS_AS(estimate_mee(tiny, y, cfg), Error);
  }
  SUBCASE("alpha bounds") {
    cfg.alpha = 1.0;
    CHECK_THROWS_AS(estimate_mee(s, y, cfg), Error);
  }
  SUBCASE("bandwidth must be positive") {
    cfg.bandwidth = -1.0;
    CHECK_THROWS_AS(estimate_mee(s, y, cfg), Error);
  }
  SUBCASE("kn bounds") {
    cfg.kn = 1;
    CHECK_THROWS_AS(estimate_mee(s, y, cfg), Error);
  }
  SUBCASE("box dimension") {
    cfg.box = Box::cube(3, 1e-3, 1e3);
    CHECK_THROWS_AS(estimate_mee(s, y, cfg), Error);
  }
}
