#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "mee/error.hpp"
#include "mee/rng.hpp"

using namespace mee;

TEST_CASE("same seed reproduces the stream") {
  Rng a(123), b(123);
  for (int i = 0; i < 1000; ++i) CHECK(a.uniform01() == b.uniform01());
  Rng c(124);
  CHECK(Rng(123).uniform01() != c.uniform01());
}

TEST_CASE("uniform01 stays inside the open interval") {
  Rng rng(7);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    double u = rng.uniform01();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("normal moments") {
  Rng rng(11);
  const int n = 200000;
  double s1 = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    double z = rng.normal();
    s1 += z;
    s2 += z * z;
  }
  CHECK(s1 / n == doctest::Approx(0.0).epsilon(1.0).scale(0.02));
  CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("exponential mean") {
  Rng rng(13);
  const int n = 200000;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += rng.exponential();
  CHECK(s / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("gamma matches mean and variance for small and large shape") {
  for (double shape : {0.4, 1.0, 3.7}) {
    Rng rng(17);
    const int n = 300000;
    double s1 = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
      double g = rng.gamma(shape);
      REQUIRE(g > 0.0);
      s1 += g;
      s2 += g * g;
    }
    double mean = s1 / n;
    double var = s2 / n - mean * mean;
    CHECK(mean == doctest::Approx(shape).epsilon(0.02));
    CHECK(var == doctest::Approx(shape).epsilon(0.05));
  }
}

TEST_CASE("gamma rejects nonpositive shape") {
  Rng rng(1);
  CHECK_THROWS_AS(rng.gamma(0.0), Error);
  CHECK_THROWS_AS(rng.gamma(-1.0), Error);
}

TEST_CASE("derived seeds separate cells") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t a = 0; a < 10; ++a)
    for (std::uint64_t b = 0; b < 10; ++b) seen.insert(derive_seed(99, a, b));
  CHECK(seen.size() == 100);
  CHECK(derive_seed(99, 3, 4) == derive_seed(99, 3, 4));
  CHECK(derive_seed(99, 3, 4) != derive_seed(100, 3, 4));
  CHECK(derive_seed(99, 3, 4) != derive_seed(99, 4, 3));
}
