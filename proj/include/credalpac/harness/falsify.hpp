#pragma once

// Monte Carlo campaigns that try to falsify the concentration inequalities:
// each reports, per threshold, the observed tail frequency next to the bound.

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "credalpac/bounds.hpp"
#include "credalpac/complexity.hpp"
#include "credalpac/harness/experiment.hpp"

namespace credalpac::harness {

/// Tail of the mean of n Bernoulli(p) variables: frequency of mean - p >= eps
/// against hoeffding_tail(n, eps, widths = 1).
inline std::vector<ViolationRow> hoeffding_campaign(std::size_t n, double p, std::size_t trials,
                                                    std::span<const double> eps_grid, const SeedSpec& seed,
                                                    std::size_t threads = 1) {
  if (n == 0 || trials == 0) throw PreconditionError("hoeffding_campaign needs n, trials >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw PreconditionError("Bernoulli parameter must lie in [0, 1]");
  std::vector<std::size_t> successes(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    auto gen = seed.derive(t).engine();
    std::size_t s = 0;
    for (std::size_t i = 0; i < n; ++i) s += uniform01(gen) < p;
    successes[t] = s;
  });
  const std::vector<double> widths(n, 1.0);
  std::vector<ViolationRow> rows;
  for (double eps : eps_grid) {
    std::size_t hits = 0;
    // Compare counts, not means, so the event is decided exactly.
    const double threshold = (p + eps) * static_cast<double>(n);
    for (std::size_t s : successes) hits += static_cast<double>(s) >= threshold;
    const BoundReport b = hoeffding_tail(n, eps, widths);
    rows.push_back(make_row(eps, hits, trials, &b));
  }
  return rows;
}

/// G_n = max_h L(h) - L_hat(h) for every trial of a classical experiment.
inline std::vector<double> gn_samples(const Experiment& exp, std::size_t trials, const SeedSpec& seed,
                                      std::size_t threads = 1) {
  const auto& H = exp.hypotheses();
  const Distribution& p = exp.credal_set()[0];
  std::vector<double> risks(H.size());
  for (std::size_t i = 0; i < H.size(); ++i) risks[i] = expected_risk(H[i], p, exp.loss());
  const OutcomeSampler sampler(p);
  const std::size_t n = exp.config().n;
  std::vector<double> out(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    auto gen = seed.derive(t).engine();
    const Dataset d = sampler.sample(n, gen);
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < H.size(); ++i) {
      const auto table = H[i].table();
      std::size_t mistakes = 0;
      for (Outcome z : d.pairs()) mistakes += table[z.x] != z.y;
      best = std::max(best, risks[i] - static_cast<double>(mistakes) / static_cast<double>(n));
    }
    out[t] = best;
  });
  return out;
}

struct GnCampaign {
  /// Estimate of E[G_n] from an independent pilot run.
  double mean_estimate = 0.0;
  std::vector<ViolationRow> rows;
};

/// Frequency of G_n >= E[G_n] + eps against gn_tail(n, eps). E[G_n] comes from
/// a pilot of the same size on stream seed.derive(0); the tested draws use seed.derive(1).
inline GnCampaign gn_tail_campaign(const Experiment& exp, std::size_t trials, std::span<const double> eps_grid,
                                   const SeedSpec& seed, std::size_t threads = 1) {
  if (exp.credal_set().size() != 1) throw PreconditionError("gn_tail_campaign needs a classical experiment");
  if (trials == 0) throw PreconditionError("gn_tail_campaign needs trials >= 1");
  GnCampaign out;
  const std::vector<double> pilot = gn_samples(exp, trials, seed.derive(0), threads);
  double sum = 0.0;
  for (double g : pilot) sum += g;
  out.mean_estimate = sum / static_cast<double>(trials);
  const std::vector<double> samples = gn_samples(exp, trials, seed.derive(1), threads);
  for (double eps : eps_grid) {
    std::size_t hits = 0;
    for (double g : samples) hits += g >= out.mean_estimate + eps;
    const BoundReport b = gn_tail(exp.config().n, eps);
    out.rows.push_back(make_row(eps, hits, trials, &b));
  }
  return out;
}

struct UniformConvergenceRow {
  double eps = 0.0;
  /// Frequency of excess risk >= eps.
  double excess_frequency = 0.0;
  /// Frequency of max_h |L(h) - L_hat(h)| >= eps / 2.
  double deviation_frequency = 0.0;
  double std_error = 0.0;
  Verdict verdict = Verdict::consistent;
};

/// Checks P[excess >= eps] <= P[sup |L - L_hat| >= eps/2] on a classical experiment.
/// std_error is that of the difference of the two frequencies (paired draws).
inline std::vector<UniformConvergenceRow> uniform_convergence_campaign(const Experiment& exp, std::size_t trials,
                                                                       std::span<const double> eps_grid,
                                                                       const SeedSpec& seed) {
  if (exp.credal_set().size() != 1) throw PreconditionError("uniform_convergence_campaign needs a classical experiment");
  const Distribution& p = exp.credal_set()[0];
  const OutcomeSampler sampler(p);
  std::vector<double> excess(trials), deviation(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    auto gen = seed.derive(t).engine();
    const Dataset d = sampler.sample(exp.config().n, gen);
    excess[t] = excess_risk(exp.hypotheses(), d, p, exp.loss());
    deviation[t] = sup_deviation(exp.hypotheses(), p, d, exp.loss(), true).value;
  }
  std::vector<UniformConvergenceRow> rows;
  for (double eps : eps_grid) {
    std::size_t a = 0, b = 0;
    double sum_diff = 0.0, sum_diff_sq = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
      const int ea = excess[t] >= eps;
      const int eb = deviation[t] >= eps / 2.0;
      a += ea;
      b += eb;
      sum_diff += ea - eb;
      sum_diff_sq += (ea - eb) * (ea - eb);
    }
    const double nt = static_cast<double>(trials);
    UniformConvergenceRow row;
    row.eps = eps;
    row.excess_frequency = static_cast<double>(a) / nt;
    row.deviation_frequency = static_cast<double>(b) / nt;
    const double mean_diff = sum_diff / nt;
    row.std_error = std::sqrt(std::max(0.0, sum_diff_sq / nt - mean_diff * mean_diff) / nt);
    row.verdict = judge(row.excess_frequency, row.std_error, row.deviation_frequency);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace credalpac::harness
