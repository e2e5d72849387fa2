#pragma once

// Shared 2x2 instances and random generators for property tests.

#include <algorithm>
#include <cstdint>
#include <set>
#include <random>
#include <vector>

#include "credalpac/credalpac.hpp"

namespace fixtures {

using namespace credalpac;

inline const DomainSpace kBinary{2, 2};

inline Hypothesis h_id() { return Hypothesis(kBinary, {0, 1}); }
inline Hypothesis h_0() { return Hypothesis(kBinary, {0, 0}); }
inline Hypothesis h_neg() { return Hypothesis(kBinary, {1, 0}); }

// Flattened order: (0,0), (0,1), (1,0), (1,1).
inline Distribution p_det() { return Distribution(kBinary, {0.5, 0.0, 0.0, 0.5}); }
inline Distribution p_noise() { return Distribution(kBinary, {0.25, 0.25, 0.25, 0.25}); }
inline Distribution p_flip() { return Distribution(kBinary, {0.0, 0.5, 0.5, 0.0}); }

/// Random distribution; each outcome is dropped from the support with probability `sparsity`.
inline Distribution random_distribution(const DomainSpace& d, std::mt19937_64& gen, double sparsity = 0.0) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::bernoulli_distribution drop(sparsity);
  std::vector<double> mass(d.outcome_count());
  double total = 0.0;
  for (double& m : mass) total += (m = drop(gen) ? 0.0 : u(gen));
  if (total == 0.0) {
    mass[gen() % mass.size()] = 1.0;
    total = 1.0;
  }
  for (double& m : mass) m /= total;
  return Distribution(d, mass);
}

inline Hypothesis random_hypothesis(const DomainSpace& d, std::mt19937_64& gen) {
  std::vector<std::size_t> table(d.input_count());
  for (auto& t : table) t = gen() % d.label_count();
  return Hypothesis(d, table);
}

/// Random class of up to `max_size` distinct hypotheses.
inline HypothesisClass random_class(const DomainSpace& d, std::mt19937_64& gen, std::size_t max_size) {
  const HypothesisClass all = HypothesisClass::all_tables(d);
  std::vector<std::size_t> idx(all.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), gen);
  const std::size_t k = 1 + gen() % std::min(max_size, all.size());
  std::vector<Hypothesis> hs;
  for (std::size_t i = 0; i < k; ++i) hs.push_back(all[idx[i]]);
  return HypothesisClass(hs);
}

inline Dataset random_dataset(const DomainSpace& d, std::mt19937_64& gen, std::size_t n) {
  std::vector<Outcome> pairs(n);
  for (auto& z : pairs) z = {gen() % d.input_count(), gen() % d.label_count()};
  return Dataset(d, pairs);
}

}  // namespace fixtures
