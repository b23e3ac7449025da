#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "mee/error.hpp"
#include "mee/optimizer.hpp"

using namespace mee;

namespace {

ObjectiveFn bowl_f = [](const std::vector<double>& x) {
  double a = x[0] - 1.0, b = x[1] - 2.0;
  return a * a + b * b;
};
GradientFn bowl_g = [](const std::vector<double>& x) {
  return std::vector<double>{2.0 * (x[0] - 1.0), 2.0 * (x[1] - 2.0)};
};

}  // namespace

TEST_CASE("box validation") {
  Box b = Box::cube(2, -1.0, 1.0);
  CHECK_NOTHROW(b.validate());
  CHECK(b.contains({0.0, 0.0}));
  CHECK(!b.contains({0.0, 2.0}));
  auto c = b.clamp({5.0, -5.0});
  CHECK(c[0] == 1.0);
  CHECK(c[1] == -1.0);
  Box bad;
  bad.lower = {0.0};
  bad.upper = {0.0};
  CHECK_THROWS_AS(bad.validate(), Error);
  Box nan_box;
  nan_box.lower = {std::numeric_limits<double>::quiet_NaN()};
  nan_box.upper = {1.0};
  CHECK_THROWS_AS(nan_box.validate(), Error);
}

TEST_CASE("quadratic bowl converges to the interior minimum") {
  OptimizerReport r =
      minimize_box(bowl_f, bowl_g, Box::cube(2, -10.0, 10.0), {5.0, -5.0});
  CHECK(r.converged);
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.x[1] == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(r.f < 1e-12);
  CHECK(r.pg_norm <= 1e-8);
  // Accepted objective values never increase.
  for (std::size_t i = 1; i < r.accepted_f.size(); ++i)
    CHECK(r.accepted_f[i] <= r.accepted_f[i - 1] + 1e-15);
}

TEST_CASE("active bounds hold the iterate on the face") {
  auto f = [](const std::vector<double>& x) { return (x[0] + 3.0) * (x[0] + 3.0); };
  auto g = [](const std::vector<double>& x) {
    return std::vector<double>{2.0 * (x[0] + 3.0)};
  };
  OptimizerReport r = minimize_box(f, g, Box::cube(1, 0.0, 10.0), {5.0});
  CHECK(r.converged);  // projected gradient vanishes on the face
  CHECK(r.x[0] == doctest::Approx(0.0));
  CHECK(r.f == doctest::Approx(9.0));
}

TEST_CASE("rosenbrock valley") {
  auto f = [](const std::vector<double>& x) {
    double a = 1.0 - x[0];
    double b = x[1] - x[0] * x[0];
    return a * a + 100.0 * b * b;
  };
  auto g = [](const std::vector<double>& x) {
    double b = x[1] - x[0] * x[0];
    return std::vector<double>{-2.0 * (1.0 - x[0]) - 400.0 * x[0] * b, 200.0 * b};
  };
  OptimizerReport r = minimize_box(f, g, Box::cube(2, -2.0, 2.0), {-1.2, 1.0});
  CHECK(r.converged);
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(r.f < 1e-10);
}

TEST_CASE("iterates stay inside the box and the result is deterministic") {
  auto f = [](const std::vector<double>& x) {
    return std::cos(3.0 * x[0]) + x[0] * x[0] * 0.1 + (x[1] - 0.3) * (x[1] - 0.3);
  };
  auto g = [](const std::vector<double>& x) {
    return std::vector<double>{-3.0 * std::sin(3.0 * x[0]) + 0.2 * x[0],
                               2.0 * (x[1] - 0.3)};
  };
  Box box = Box::cube(2, -1.5, 1.5);
  OptimizerReport a = minimize_box(f, g, box, {1.4, -1.4});
  OptimizerReport b = minimize_box(f, g, box, {1.4, -1.4});
  CHECK(a.x == b.x);  // bitwise identical
  CHECK(box.contains(a.x));
  CHECK(a.f <= f({1.4, -1.4}));
}

TEST_CASE("starting point outside the box is clamped first") {
  OptimizerReport r =
      minimize_box(bowl_f, bowl_g, Box::cube(2, -10.0, 10.0), {100.0, -100.0});
  CHECK(r.converged);
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("iteration cap reports non-convergence") {
  OptimizerOptions opts;
  opts.max_iter = 2;
  auto f = [](const std::vector<double>& x) {
    double a = 1.0 - x[0];
    double b = x[1] - x[0] * x[0];
    return a * a + 100.0 * b * b;
  };
  auto g = [](const std::vector<double>& x) {
    double b = x[1] - x[0] * x[0];
    return std::vector<double>{-2.0 * (1.0 - x[0]) - 400.0 * x[0] * b, 200.0 * b};
  };
  OptimizerReport r = minimize_box(f, g, Box::cube(2, -2.0, 2.0), {-1.2, 1.0}, opts);
  CHECK(!r.converged);
  CHECK(r.iterations <= 2);
}

TEST_CASE("non-finite objective values raise a numeric error") {
  auto f = [](const std::vector<double>&) {
    return std::numeric_limits<double>::quiet_NaN();
  };
  auto g = [](const std::vector<double>& x) {
    return std::vector<double>{x[0]};
  };
  CHECK_THROWS_AS(minimize_box(f, g, Box::cube(1, -1.0, 1.0), {0.5}), Error);
}

TEST_CASE("an inconsistent gradient terminates without convergence") {
  // Sign-flipped gradient: every proposed direction increases f.
  auto f = [](const std::vector<double>& x) { return x[0] * x[0]; };
  auto g = [](const std::vector<double>& x) {
    return std::vector<double>{-2.0 * x[0]};
  };
  OptimizerReport r = minimize_box(f, g, Box::cube(1, -10.0, 10.0), {3.0});
  CHECK(!r.converged);
  CHECK(r.x[0] == doctest::Approx(3.0));  // no accepted step
}

TEST_CASE("multi start finds both wells and dedups clusters") {
  auto f = [](const std::vector<double>& x) {
    double s = x[0] * x[0] - 1.0;
    return s * s;
  };
  auto g = [](const std::vector<double>& x) {
    return std::vector<double>{4.0 * x[0] * (x[0] * x[0] - 1.0)};
  };
  Box box = Box::cube(1, -3.0, 3.0);
  MultiStartReport r = multi_start_minimize(
      f, g, box, {{-0.5}, {0.5}, {-2.0}, {2.0}, {-0.49}});
  CHECK(r.best.converged);
  CHECK(r.best.f < 1e-12);
  REQUIRE(r.minima.size() == 2);
  CHECK(std::fabs(std::fabs(r.minima[0][0]) - 1.0) < 1e-5);
  CHECK(std::fabs(std::fabs(r.minima[1][0]) - 1.0) < 1e-5);
  CHECK(r.minima[0][0] * r.minima[1][0] < 0.0);  // opposite wells
  CHECK(r.minima_f.size() == 2);
}
