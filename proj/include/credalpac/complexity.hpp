#pragma once

// Rademacher complexity of a finite loss class and the uniform deviation G_n.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "credalpac/core.hpp"

namespace credalpac {

/// The loss class {z -> l(z, h) : h in H}, tabulated over flattened outcomes.
class LossClass {
 public:
  LossClass(const HypothesisClass& H, const LossFunction& loss)
      : domain_(H.domain()), lo_(loss.lo()), hi_(loss.hi()) {
    tables_.reserve(H.size());
    for (const Hypothesis& h : H) tables_.push_back(loss_table(h, loss));
  }

  /// Arbitrary functions on outcomes with values in [lo, hi].
  static LossClass from_tables(DomainSpace domain, std::vector<std::vector<double>> tables, double lo,
                               double hi) {
    if (tables.empty()) throw PreconditionError("loss class must be non-empty");
    for (const auto& t : tables) {
      if (t.size() != domain.outcome_count()) throw DomainError("loss table length mismatch");
      for (double v : t)
        if (!(v >= lo && v <= hi)) throw PreconditionError("loss table value outside [lo, hi]");
    }
    return LossClass(domain, std::move(tables), lo, hi);
  }

  const DomainSpace& domain() const noexcept { return domain_; }
  std::size_t size() const noexcept { return tables_.size(); }
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double value(std::size_t f, std::size_t outcome) const { return tables_.at(f).at(outcome); }

  /// values[f * n + i] = f(z_i).
  std::vector<double> evaluate(const Dataset& d) const {
    require_same_domain(domain_, d.domain(), "loss class");
    std::vector<double> values;
    values.reserve(tables_.size() * d.size());
    for (const auto& t : tables_)
      for (Outcome z : d.pairs()) values.push_back(t[domain_.flatten(z)]);
    return values;
  }

 private:
  LossClass(DomainSpace domain, std::vector<std::vector<double>> tables, double lo, double hi)
      : domain_(domain), lo_(lo), hi_(hi), tables_(std::move(tables)) {}

  DomainSpace domain_;
  double lo_;
  double hi_;
  std::vector<std::vector<double>> tables_;
};

struct RademacherEstimate {
  enum class Method { exact, monte_carlo };

  double value = 0.0;
  double std_error = 0.0;
  Method method = Method::exact;
  std::size_t n = 0;
  std::uint64_t sample_count = 0;
};

namespace detail {

/// max_f sum_i sigma_i f(z_i) where bit i of `signs` set means sigma_i = +1.
inline double signed_sup(std::span<const double> values, std::size_t function_count, std::size_t n,
                         std::uint64_t signs) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t f = 0; f < function_count; ++f) {
    const double* row = values.data() + f * n;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += ((signs >> i) & 1U) ? row[i] : -row[i];
    best = std::max(best, s);
  }
  return best;
}

}  // namespace detail

inline constexpr std::size_t kExactRademacherMaxN = 20;

/// Exact empirical Rademacher complexity by enumerating all 2^n sign vectors.
inline RademacherEstimate empirical_rademacher_exact(const LossClass& A, const Dataset& d) {
  const std::size_t n = d.size();
  if (n == 0) throw PreconditionError("Rademacher complexity of an empty dataset");
  if (n > kExactRademacherMaxN)
    throw SizeGuardError("exact Rademacher enumeration limited to n <= 20 (got n = " + std::to_string(n) +
                         "); use empirical_rademacher_mc");
  const std::vector<double> values = A.evaluate(d);
  const std::uint64_t count = std::uint64_t{1} << n;
  double total = 0.0;
  for (std::uint64_t signs = 0; signs < count; ++signs)
    total += detail::signed_sup(values, A.size(), n, signs);
  const double value = total / static_cast<double>(count) / static_cast<double>(n);
  return {value, 0.0, RademacherEstimate::Method::exact, n, count};
}

/// Monte Carlo empirical Rademacher complexity over `draws` uniform sign vectors.
inline RademacherEstimate empirical_rademacher_mc(const LossClass& A, const Dataset& d, std::size_t draws,
                                                  const SeedSpec& seed) {
  const std::size_t n = d.size();
  if (n == 0) throw PreconditionError("Rademacher complexity of an empty dataset");
  if (draws == 0) throw PreconditionError("Monte Carlo Rademacher estimate needs draws >= 1");
  const std::vector<double> values = A.evaluate(d);
  const std::size_t words = (n + 63) / 64;
  std::vector<std::uint64_t> signs(words);
  auto gen = seed.engine();
  const double inv_n = 1.0 / static_cast<double>(n);

  // Welford accumulation of the per-draw sup.
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t k = 0; k < draws; ++k) {
    for (auto& w : signs) w = gen();
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t f = 0; f < A.size(); ++f) {
      const double* row = values.data() + f * n;
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += ((signs[i / 64] >> (i % 64)) & 1U) ? row[i] : -row[i];
      best = std::max(best, s);
    }
    const double x = best * inv_n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(k + 1);
    m2 += delta * (x - mean);
  }
  const double var = draws > 1 ? m2 / static_cast<double>(draws - 1) : 0.0;
  return {mean, std::sqrt(var / static_cast<double>(draws)), RademacherEstimate::Method::monte_carlo, n,
          draws};
}

/// R_n = E[empirical Rademacher] over datasets of size n drawn from p.
///
/// Dataset j uses stream seed.derive(2j), its sign draws seed.derive(2j + 1).
/// std_error is the spread of the per-dataset estimates over sqrt(dataset_draws),
/// or the single estimate's own error when dataset_draws == 1.
inline RademacherEstimate rademacher_complexity(const LossClass& A, const Distribution& p, std::size_t n,
                                                std::size_t dataset_draws, std::size_t sign_draws,
                                                const SeedSpec& seed) {
  require_same_domain(A.domain(), p.domain(), "rademacher_complexity");
  if (n == 0 || dataset_draws == 0 || sign_draws == 0)
    throw PreconditionError("rademacher_complexity needs positive n and draw counts");
  const OutcomeSampler sampler(p);
  double mean = 0.0;
  double m2 = 0.0;
  double last_error = 0.0;
  for (std::size_t j = 0; j < dataset_draws; ++j) {
    auto gen = seed.derive(2 * j).engine();
    const Dataset d = sampler.sample(n, gen);
    const RademacherEstimate e = empirical_rademacher_mc(A, d, sign_draws, seed.derive(2 * j + 1));
    last_error = e.std_error;
    const double delta = e.value - mean;
    mean += delta / static_cast<double>(j + 1);
    m2 += delta * (e.value - mean);
  }
  const double std_error = dataset_draws > 1
                               ? std::sqrt(m2 / static_cast<double>(dataset_draws - 1) /
                                           static_cast<double>(dataset_draws))
                               : last_error;
  return {mean, std_error, RademacherEstimate::Method::monte_carlo, n,
          static_cast<std::uint64_t>(dataset_draws) * sign_draws};
}

struct Deviation {
  double value = 0.0;
  std::size_t index = 0;
};

/// max_h L_p(h) - L_d(h), or max_h |L_p(h) - L_d(h)| when `absolute`.
inline Deviation sup_deviation(const HypothesisClass& H, const Distribution& p, const Dataset& d,
                               const LossFunction& loss = LossFunction::zero_one(), bool absolute = false) {
  require_same_domain(H.domain(), p.domain(), "sup_deviation");
  require_same_domain(H.domain(), d.domain(), "sup_deviation");
  Deviation best{-std::numeric_limits<double>::infinity(), 0};
  for (std::size_t i = 0; i < H.size(); ++i) {
    double gap = expected_risk(H[i], p, loss) - empirical_risk(H[i], d, loss);
    if (absolute) gap = std::abs(gap);
    if (gap > best.value) best = {gap, i};
  }
  return best;
}

}  // namespace credalpac
