#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>

#include "fixtures.hpp"

using namespace credalpac;
using namespace fixtures;
using Catch::Approx;

TEST_CASE("domain flattening and validation", "[core]") {
  const DomainSpace d(3, 4);
  CHECK(d.outcome_count() == 12);
  CHECK(d.flatten({2, 1}) == 9);
  CHECK(d.unflatten(9) == Outcome{2, 1});
  CHECK_THROWS_AS(DomainSpace(0, 2), DomainError);
  CHECK_THROWS_AS(d.flatten({3, 0}), DomainError);
}

TEST_CASE("distribution construction", "[core]") {
  SECTION("renormalizes within tolerance") {
    const Distribution p(kBinary, {0.25, 0.25, 0.25, 0.25 + 5e-10});
    double total = 0.0;
    for (double m : p.mass()) total += m;
    CHECK(total == Approx(1.0).epsilon(1e-15));
  }
  SECTION("rejects bad sums, negatives, wrong length") {
    CHECK_THROWS_AS(Distribution(kBinary, {0.3, 0.3, 0.3, 0.0}), PreconditionError);
    CHECK_THROWS_AS(Distribution(kBinary, {1.5, -0.5, 0.0, 0.0}), PreconditionError);
    CHECK_THROWS_AS(Distribution(kBinary, {1.0}), DomainError);
  }
}

TEST_CASE("hypothesis class invariants", "[core]") {
  CHECK_THROWS_AS(HypothesisClass({}), PreconditionError);
  CHECK_THROWS_AS(HypothesisClass({h_id(), h_id()}), PreconditionError);
  CHECK_THROWS_AS(HypothesisClass({h_id(), Hypothesis(DomainSpace(3, 2), {0, 0, 0})}), DomainError);
  CHECK_THROWS_AS(Hypothesis(kBinary, {0, 2}), DomainError);

  const HypothesisClass all = HypothesisClass::all_tables(DomainSpace(4, 2));
  CHECK(all.size() == 16);
  CHECK(all[0] == Hypothesis::constant(DomainSpace(4, 2), 0));
  CHECK(all[5].table()[0] == 1);
  CHECK(all[5].table()[2] == 1);
  CHECK_THROWS_AS(HypothesisClass::all_tables(DomainSpace(13, 2)), SizeGuardError);
  CHECK_NOTHROW(HypothesisClass::all_tables(DomainSpace(12, 2)));
  CHECK_THROWS_AS(HypothesisClass::all_tables(DomainSpace(4, 2), 15), SizeGuardError);
}

TEST_CASE("zero-one loss", "[core]") {
  const Hypothesis h = h_id();
  CHECK(zero_one_loss({0, 0}, h) == 0.0);
  CHECK(zero_one_loss({0, 1}, h) == 1.0);
  double total = 0.0;
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 2; ++y) total += zero_one_loss({x, y}, h);
  CHECK(total == 2.0);
  CHECK_THROWS_AS(zero_one_loss({2, 0}, h), DomainError);
}

TEST_CASE("custom bounded loss is range-checked", "[core]") {
  const LossFunction sq = LossFunction::bounded(0.0, 4.0, [](std::size_t, std::size_t y, std::size_t pred) {
    const double e = static_cast<double>(y) - static_cast<double>(pred);
    return e * e;
  });
  CHECK(sq({0, 1}, h_0()) == 1.0);
  const LossFunction broken = LossFunction::bounded(0.0, 0.5, [](std::size_t, std::size_t, std::size_t) { return 1.0; });
  CHECK_THROWS_AS(broken({0, 0}, h_0()), PreconditionError);
}

TEST_CASE("expected risk examples", "[core]") {
  CHECK(expected_risk(h_id(), p_det()) == 0.0);
  CHECK(expected_risk(h_id(), p_noise()) == 0.5);
  CHECK(expected_risk(h_id(), p_flip()) == 1.0);
  CHECK_THROWS_AS(expected_risk(h_id(), Distribution::point(DomainSpace(3, 2), {0, 0})), DomainError);
}

TEST_CASE("empirical risk examples", "[core]") {
  CHECK(empirical_risk(h_id(), Dataset(kBinary, {{0, 0}, {1, 1}})) == 0.0);
  CHECK(empirical_risk(h_id(), Dataset(kBinary, {{0, 0}, {0, 1}})) == 0.5);
  CHECK(empirical_risk(h_0(), Dataset(kBinary, {{0, 1}, {1, 1}, {1, 1}})) == 1.0);
  CHECK_THROWS_AS(empirical_risk(h_0(), Dataset(kBinary, {})), PreconditionError);
}

TEST_CASE("erm and expected risk minimiser examples", "[core]") {
  const RankedHypothesis a = erm(HypothesisClass({h_id(), h_0()}), Dataset(kBinary, {{0, 0}, {1, 1}}));
  CHECK(a.index == 0);
  CHECK(a.risk == 0.0);

  const RankedHypothesis tie = erm(HypothesisClass({h_id(), h_neg()}), Dataset(kBinary, {{0, 0}, {0, 1}}));
  CHECK(tie.index == 0);
  CHECK(tie.risk == 0.5);

  CHECK(erm(HypothesisClass({h_0()}), Dataset(kBinary, {{1, 1}})).index == 0);

  const RankedHypothesis m = expected_risk_minimiser(HypothesisClass({h_id(), h_0()}), p_det());
  CHECK(m.index == 0);
  CHECK(m.risk == 0.0);
  CHECK(expected_risk_minimiser(HypothesisClass({h_0()}), p_flip()).risk == 0.5);
  // All hypotheses agree and are correct at (1, 0).
  const RankedHypothesis agree =
      expected_risk_minimiser(HypothesisClass({h_0(), h_neg()}), Distribution::point(kBinary, {1, 0}));
  CHECK(agree.index == 0);
  CHECK(agree.risk == 0.0);
}

TEST_CASE("excess risk examples", "[core]") {
  const HypothesisClass H({h_id(), h_0()});
  // (1, 0): h_0 is right, h_id wrong, so ERM picks h_0 with L_det(h_0) = 0.5.
  CHECK(erm(H, Dataset(kBinary, {{1, 0}})).index == 1);
  CHECK(excess_risk(H, Dataset(kBinary, {{1, 0}}), p_det()) == 0.5);
  // (0, 1): both err, tie goes to h_id.
  CHECK(excess_risk(H, Dataset(kBinary, {{0, 1}}), p_det()) == 0.0);
  CHECK(excess_risk(H, Dataset(kBinary, {{0, 0}, {1, 1}}), p_det()) == 0.0);
}

TEST_CASE("sample_dataset", "[core]") {
  SECTION("degenerate distribution repeats its outcome") {
    const Dataset d = sample_dataset(Distribution::point(kBinary, {1, 0}), 5, SeedSpec{1});
    for (Outcome z : d.pairs()) CHECK(z == Outcome{1, 0});
    CHECK(d.size() == 5);
  }
  SECTION("zero-mass outcomes never appear") {
    const Dataset d = sample_dataset(p_det(), 2000, SeedSpec{2});
    for (Outcome z : d.pairs()) CHECK(z.x == z.y);
  }
  SECTION("law of large numbers within 10 standard errors") {
    const std::size_t n = 100000;
    const Dataset d = sample_dataset(p_noise(), n, SeedSpec{3});
    std::map<std::size_t, std::size_t> counts;
    for (Outcome z : d.pairs()) ++counts[kBinary.flatten(z)];
    const double se = std::sqrt(0.25 * 0.75 / static_cast<double>(n));
    CHECK(10 * se < 0.0138);
    for (std::size_t k = 0; k < 4; ++k)
      CHECK(std::abs(static_cast<double>(counts[k]) / static_cast<double>(n) - 0.25) <= 0.01);
  }
  SECTION("deterministic in the seed") {
    CHECK(sample_dataset(p_noise(), 50, SeedSpec{9}) == sample_dataset(p_noise(), 50, SeedSpec{9}));
    CHECK_FALSE(sample_dataset(p_noise(), 50, SeedSpec{9}) == sample_dataset(p_noise(), 50, SeedSpec{10}));
  }
  CHECK_THROWS_AS(sample_dataset(p_noise(), 0, SeedSpec{}), PreconditionError);
}

TEST_CASE("seed substreams are distinct", "[core][random]") {
  const SeedSpec root{42};
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 10000; ++i) seen.insert(root.derive(i).master_seed);
  CHECK(seen.size() == 10000);
  CHECK(root.derive(5) == SeedSpec{42}.derive(5));
}

TEST_CASE("core properties on random instances", "[core][property]") {
  std::mt19937_64 gen(12345);
  for (int trial = 0; trial < 300; ++trial) {
    const DomainSpace d(1 + gen() % 4, 2 + gen() % 2);
    const HypothesisClass H = random_class(d, gen, 12);
    const Distribution p1 = random_distribution(d, gen, 0.3);
    const Distribution p2 = random_distribution(d, gen, 0.3);
    const Dataset data = random_dataset(d, gen, 1 + gen() % 15);
    const double lambda = std::uniform_real_distribution<double>(0.0, 1.0)(gen);

    std::vector<double> mix(d.outcome_count());
    for (std::size_t k = 0; k < mix.size(); ++k) mix[k] = lambda * p1.mass()[k] + (1 - lambda) * p2.mass()[k];
    const Distribution pm(d, mix);
    const Distribution emp = empirical_distribution(data);

    for (const Hypothesis& h : H) {
      const double r1 = expected_risk(h, p1);
      CHECK(r1 >= 0.0);
      CHECK(r1 <= 1.0);
      CHECK(expected_risk(h, pm) == Approx(lambda * r1 + (1 - lambda) * expected_risk(h, p2)).margin(1e-12));
      CHECK(empirical_risk(h, data) == Approx(expected_risk(h, emp)).margin(1e-12));
    }

    const RankedHypothesis best = erm(H, data);
    for (const Hypothesis& h : H) CHECK(best.risk <= empirical_risk(h, data));
    CHECK(best.risk == empirical_risk(H[best.index], data));
    CHECK(excess_risk(H, data, p1) >= 0.0);
  }
}

TEST_CASE("realisability implies zero empirical risk of ERM", "[core][property]") {
  std::mt19937_64 gen(777);
  for (int trial = 0; trial < 200; ++trial) {
    const DomainSpace d(1 + gen() % 4, 2 + gen() % 2);
    const HypothesisClass H = random_class(d, gen, 10);
    const Hypothesis& star = H[gen() % H.size()];
    // Distribution supported on the graph of `star`.
    std::vector<double> mass(d.outcome_count(), 0.0);
    for (std::size_t x = 0; x < d.input_count(); ++x) mass[d.flatten({x, star.table()[x]})] = 1.0 + gen() % 3;
    double total = 0.0;
    for (double m : mass) total += m;
    for (double& m : mass) m /= total;
    const Distribution p(d, mass);
    REQUIRE(expected_risk(star, p) == 0.0);
    const Dataset data = sample_dataset(p, 1 + gen() % 30, SeedSpec{gen()});
    CHECK(erm(H, data).risk == 0.0);
  }
}
