#include <cmath>
#include <vector>

#include "doctest.h"
#include "mee/tail.hpp"

using namespace mee;

namespace {

// n = 2048 points with weights 1/2048 (exact dyadic cumulative sums) and
// values v_j = ((2048 - j)/2048)^(-g) for j = 1..2047 plus one extra largest
// point. The weighted quantile at level 1 - m/2048 then lands exactly on
// (m/2048)^(-g) for dyadic m, so the log-spacing estimator is exact.
Sample dyadic_pareto(double g, double margin2_factor) {
  const std::size_t n = 2048;
  std::vector<double> x;
  std::vector<CovariatePoint> ys;
  for (std::size_t j = 1; j <= n; ++j) {
    double u = static_cast<double>(n - j) / static_cast<double>(n);
    double v = j == n ? 2.0 * std::pow(1.0 / static_cast<double>(n), -g)
                      : std::pow(u, -g);
    x.push_back(v);
    x.push_back(margin2_factor * v);
    ys.push_back(CovariatePoint{{0.0}});
  }
  return Sample::make(n, 2, std::move(x), std::move(ys));
}

WeightVector dyadic_weights(std::size_t n) {
  WeightVector w;
  w.w.assign(n, 1.0 / static_cast<double>(n));
  w.effective_count = n;
  return w;
}

}  // namespace

TEST_CASE("tau grid defaults to harmonic fractions") {
  HillConfig cfg;
  cfg.J = 4;
  auto t = cfg.tau_values();
  REQUIRE(t.size() == 4);
  CHECK(t[0] == doctest::Approx(1.0));
  CHECK(t[1] == doctest::Approx(0.5));
  CHECK(t[2] == doctest::Approx(1.0 / 3.0));
  CHECK(t[3] == doctest::Approx(0.25));
}

TEST_CASE("hill config validation") {
  HillConfig cfg;
  cfg.alpha_n = 0.99;
  CHECK_NOTHROW(cfg.validate());
  cfg.J = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.J = 2;
  cfg.taus = {0.5, 1.0};  // not decreasing
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.taus = {1.0, 0.5};
  CHECK_NOTHROW(cfg.validate());
  cfg.taus = {1.0, 1.0};  // no spacing information
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.taus.clear();
  cfg.alpha_n.reset();
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("log-spacing estimator is exact on a dyadic pareto sample") {
  for (double g : {0.3, 0.5, 0.8}) {
    Sample s = dyadic_pareto(g, 1.0);
    WeightVector w = dyadic_weights(s.n);
    HillConfig cfg;
    cfg.J = 2;
    cfg.taus = {1.0, 0.5};
    cfg.alpha_n = 1.0 - 64.0 / 2048.0;  // exact dyadic level
    CHECK(hill_functional(s, w, cfg) == doctest::Approx(g).epsilon(1e-12));
  }
}

TEST_CASE("deeper tau ladders stay exact on the dyadic sample") {
  Sample s = dyadic_pareto(0.5, 1.0);
  WeightVector w = dyadic_weights(s.n);
  HillConfig cfg;
  cfg.J = 3;
  cfg.taus = {1.0, 0.5, 0.25};  // ranks 1984, 2016, 2032
  cfg.alpha_n = 1.0 - 64.0 / 2048.0;
  CHECK(hill_functional(s, w, cfg) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("degenerate and infinite-mean tails raise") {
  // Constant sample: all log spacings vanish.
  const std::size_t n = 128;
  std::vector<double> x(n * 1, 3.0);
  std::vector<CovariatePoint> ys(n, CovariatePoint{{0.0}});
  Sample flat = Sample::make(n, 1, std::move(x), std::move(ys));
  WeightVector w = dyadic_weights(n);
  HillConfig cfg;
  cfg.alpha_n = 0.9;
  try {
    hill_functional(flat, w, cfg);
    FAIL("expected a degenerate-tail error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateTail);
  }

  Sample heavy = dyadic_pareto(1.2, 1.0);  // infinite mean
  WeightVector wh = dyadic_weights(heavy.n);
  HillConfig cfg2;
  cfg2.J = 2;
  cfg2.taus = {1.0, 0.5};
  cfg2.alpha_n = 1.0 - 64.0 / 2048.0;
  try {
    hill_functional(heavy, wh, cfg2);
    FAIL("expected an infinite-mean error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InfiniteMean);
  }
}

TEST_CASE("nonpositive quantiles poison the log transform") {
  const std::size_t n = 64;
  std::vector<double> x;
  std::vector<CovariatePoint> ys(n, CovariatePoint{{0.0}});
  for (std::size_t i = 0; i < n; ++i) x.push_back(-1.0 - static_cast<double>(i));
  Sample s = Sample::make(n, 1, std::move(x), std::move(ys));
  WeightVector w = dyadic_weights(n);
  HillConfig cfg;
  cfg.alpha_n = 0.75;
  try {
    hill_functional(s, w, cfg);
    FAIL("expected a log-domain error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::LogDomain);
  }
}

TEST_CASE("tail ratio is exact for proportional margins") {
  Sample s = dyadic_pareto(0.5, 4.0);
  WeightVector w = dyadic_weights(s.n);
  double alpha_n = 1.0 - 64.0 / 2048.0;
  CHECK(tail_ratio(s, w, 0, alpha_n, 0.5) == 1.0);  // reference margin, exact
  // q2/q1 = 4 at every level, so c2 = 4^(1/gamma) = 16.
  CHECK(tail_ratio(s, w, 1, alpha_n, 0.5) == doctest::Approx(16.0).epsilon(1e-12));
  CHECK(tail_ratio(s, w, 1, alpha_n, 0.8) ==
        doctest::Approx(std::pow(4.0, 1.25)).epsilon(1e-12));
}

TEST_CASE("tail ratio input validation") {
  Sample s = dyadic_pareto(0.5, 1.0);
  WeightVector w = dyadic_weights(s.n);
  CHECK_THROWS_AS(tail_ratio(s, w, 1, 1.5, 0.5), Error);
  CHECK_THROWS_AS(tail_ratio(s, w, 1, 0.97, 1.5), Error);
}
