#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "credalpac/bounds.hpp"

using namespace credalpac;
using Catch::Approx;

// Reference constants evaluated at 50 digits (mpmath):
//   (ln 16 + ln 20) / 100           = 0.057683209957937...
//   sqrt(2 (ln 16 + ln 40) / 100)   = 0.359484858550501...
//   0.4 + sqrt(2 ln 40 / 100)       = 0.671620303148123...
//   exp(-2)                         = 0.1353352832366127
//   exp(-0.5)                       = 0.6065306597126334

TEST_CASE("markov bound", "[bounds]") {
  CHECK(markov_bound(1, 2).raw_value == 0.5);
  CHECK(markov_bound(0, 3).raw_value == 0.0);
  const BoundReport b = markov_bound(3, 2);
  CHECK(b.raw_value == 1.5);
  CHECK(b.clipped_value == 1.0);
  CHECK(b.kind == BoundKind::markov);
  CHECK_THROWS_AS(markov_bound(1, 0), PreconditionError);
  CHECK_THROWS_AS(markov_bound(-1, 1), PreconditionError);
}

TEST_CASE("hoeffding tail", "[bounds]") {
  const std::vector<double> ones(100, 1.0), twos(100, 2.0);
  CHECK(hoeffding_tail(100, 0.1, ones).raw_value == Approx(0.1353352832366127).margin(1e-12));
  CHECK(hoeffding_tail(100, 0.0, ones).raw_value == 1.0);
  CHECK(hoeffding_tail(100, 0.1, twos).raw_value == Approx(0.6065306597126334).margin(1e-12));
  CHECK_THROWS_AS(hoeffding_tail(99, 0.1, ones), PreconditionError);
  const std::vector<double> bad{1.0, 0.0};
  CHECK_THROWS_AS(hoeffding_tail(2, 0.1, bad), PreconditionError);
}

TEST_CASE("mcdiarmid tail", "[bounds]") {
  const std::vector<double> c(100, 0.01);
  CHECK(mcdiarmid_tail(0.1, c).raw_value == Approx(0.1353352832366127).margin(1e-12));
  CHECK(mcdiarmid_tail(0.0, c).raw_value == 1.0);
  const std::vector<double> bad{0.1, -0.1};
  CHECK_THROWS_AS(mcdiarmid_tail(0.1, bad), PreconditionError);
}

TEST_CASE("mcdiarmid with c_i = width_i / n reproduces hoeffding", "[bounds][property]") {
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> width(0.1, 3.0), eps(0.0, 0.5);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + gen() % 200;
    std::vector<double> w(n), c(n);
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = width(gen);
      c[i] = w[i] / static_cast<double>(n);
    }
    const double e = eps(gen);
    CHECK(mcdiarmid_tail(e, c).raw_value == Approx(hoeffding_tail(n, e, w).raw_value).margin(1e-12));
  }
}

TEST_CASE("gn tail", "[bounds]") {
  CHECK(gn_tail(100, 0.1).raw_value == Approx(0.1353352832366127).margin(1e-12));
  CHECK(gn_tail(17, 0.0).raw_value == 1.0);
  for (std::size_t n : {1, 5, 20, 100, 1000})
    for (double e : {0.0, 0.01, 0.05, 0.1, 0.3, 0.7}) {
      const std::vector<double> c(n, 1.0 / static_cast<double>(n));
      CHECK(gn_tail(n, e).raw_value == Approx(mcdiarmid_tail(e, c).raw_value).margin(1e-12));
    }
}

TEST_CASE("union bound", "[bounds]") {
  const std::vector<double> a{0.1, 0.2}, none{}, big{0.6, 0.7}, bad{0.5, 1.5};
  CHECK(union_bound(a).raw_value == Approx(0.3));
  CHECK(union_bound(none).raw_value == 0.0);
  CHECK(union_bound(big).raw_value == Approx(1.3));
  CHECK(union_bound(big).clipped_value == 1.0);
  CHECK_THROWS_AS(union_bound(bad), PreconditionError);
}

TEST_CASE("finite realisable epsilon and sample complexity", "[bounds]") {
  CHECK(eps_finite_realisable(1, 1, 37) == 0.0);
  CHECK(eps_finite_realisable(16, 0.05, 100) == Approx(0.0576832).margin(1e-6));
  CHECK(eps_finite_realisable(16, 0.05, 100) == Approx(0.057683209957937).margin(1e-14));
  CHECK(eps_finite_realisable(16, 0.05, 50) == Approx(0.1153664).margin(1e-6));
  CHECK_THROWS_AS(eps_finite_realisable(16, 0.0, 10), PreconditionError);
  CHECK_THROWS_AS(eps_finite_realisable(16, 1.5, 10), PreconditionError);
  CHECK_THROWS_AS(eps_finite_realisable(0.5, 0.1, 10), PreconditionError);

  CHECK(sample_complexity_realisable(16, 0.05, eps_finite_realisable(16, 0.05, 100)) == 100);
  // The rounded 0.0576832 is slightly below the exact epsilon, so n = 100 falls just short.
  CHECK(sample_complexity_realisable(16, 0.05, 0.0576832) == 101);
  CHECK(sample_complexity_realisable(1, 1, 0.3) == 0);
  std::size_t previous = 0;
  for (double k = 1; k <= 4096; k *= 2) {
    const std::size_t m = sample_complexity_realisable(k, 0.05, 0.01);
    CHECK(m >= previous);
    previous = m;
  }
  CHECK_THROWS_AS(sample_complexity_realisable(16, 0.05, 0.0), PreconditionError);
}

TEST_CASE("finite agnostic epsilon", "[bounds]") {
  CHECK(eps_finite_agnostic(16, 0.05, 100) == Approx(0.359485).margin(1e-6));
  CHECK(eps_finite_agnostic(16, 0.05, 400) == Approx(0.179742).margin(1e-6));
  CHECK(eps_finite_agnostic(16, 0.05, 400) == Approx(eps_finite_agnostic(16, 0.05, 100) / 2).margin(1e-15));
  CHECK(detail::eps_finite_agnostic_unchecked(1, 2, 10) == 0.0);
  CHECK_THROWS_AS(eps_finite_agnostic(1, 2, 10), PreconditionError);
}

TEST_CASE("rademacher epsilon", "[bounds]") {
  CHECK(eps_rademacher(0.1, 0.05, 100) == Approx(0.671620).margin(1e-6));
  CHECK(detail::eps_rademacher_unchecked(0.0, 2.0, 10) == 0.0);
  CHECK(eps_rademacher(0.1, 0.05, 101) < eps_rademacher(0.1, 0.05, 100));
  CHECK_THROWS_AS(eps_rademacher(0.1, 1.0, 100), PreconditionError);
  CHECK_THROWS_AS(eps_rademacher(-0.1, 0.5, 100), PreconditionError);
}

TEST_CASE("epsilon monotonicity", "[bounds][property]") {
  for (double k : {1.0, 2.0, 16.0, 1000.0})
    for (double delta : {0.01, 0.05, 0.2, 0.9})
      for (double n = 1; n < 2000; n *= 3) {
        CHECK(eps_finite_realisable(k, delta, n) >= 0.0);
        CHECK(eps_finite_agnostic(k, delta, n) > eps_finite_agnostic(k, delta, n + 1));
        CHECK(eps_finite_realisable(k * 2, delta, n) >= eps_finite_realisable(k, delta, n));
        CHECK(eps_finite_agnostic(k, delta / 2, n) >= eps_finite_agnostic(k, delta, n));
        CHECK(eps_rademacher(0.05, delta, n) > eps_rademacher(0.05, delta, n + 1));
        if (k > 1 || delta < 1) CHECK(eps_finite_realisable(k, delta, n) > eps_finite_realisable(k, delta, n + 1));
      }
  for (double e : {0.0, 0.1, 0.5})
    for (std::size_t n : {1, 10, 100}) {
      const double b = gn_tail(n, e).clipped_value;
      CHECK(b > 0.0);
      CHECK(b <= 1.0);
    }
}
