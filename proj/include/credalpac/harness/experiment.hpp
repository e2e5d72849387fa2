#pragma once

// Seeded Monte Carlo campaigns estimating bound-violation probabilities.
//
// Stream layout for trial i under master seed s:
//   s.derive(i)            trial root
//   s.derive(i).derive(0)  training-distribution selection
//   s.derive(i).derive(1)  dataset draw
// Each trial touches only its own streams, so outcomes do not depend on how
// trials are spread over threads.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "credalpac/bounds.hpp"
#include "credalpac/core.hpp"
#include "credalpac/credal.hpp"
#include "credalpac/harness/config.hpp"

namespace credalpac::harness {

/// Monte Carlo slack: a bound is violated only when frequency > bound + kSlackSE * SE.
inline constexpr double kSlackSE = 3.0;

struct TrainingChoice {
  Distribution distribution;
  /// "vertex:<k>" or "mixture".
  std::string id;
};

/// Vertex-minimax hypothesis: argmin_h max_v L_v(h), lowest index on ties.
inline std::size_t minimax_hypothesis(const HypothesisClass& H, const CredalSet& P, const LossFunction& loss) {
  std::size_t best = 0;
  double best_risk = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < H.size(); ++i) {
    const double r = upper_risk(H[i], P, loss).risk;
    if (r < best_risk) {
      best_risk = r;
      best = i;
    }
  }
  return best;
}

inline std::string vertex_id(std::size_t v) { return "vertex:" + std::to_string(v); }

/// Training distribution for one trial. `H` is needed by oracle_aligned and adversarial.
inline TrainingChoice select_training_distribution(const CredalSet& P, const TrainingMode& mode,
                                                   const HypothesisClass* H, const LossFunction& loss,
                                                   const SeedSpec& seed) {
  if (P.size() == 1) return {P[0], vertex_id(0)};
  switch (mode.kind) {
    case TrainingModeKind::fixed_vertex:
      if (mode.vertex >= P.size()) throw PreconditionError("fixed_vertex index out of range");
      return {P[mode.vertex], vertex_id(mode.vertex)};
    case TrainingModeKind::uniform_vertex: {
      auto gen = seed.engine();
      const auto v = static_cast<std::size_t>(uniform_below(gen, P.size()));
      return {P[v], vertex_id(v)};
    }
    case TrainingModeKind::random_mixture:
      return {sample_mixture(P, seed), "mixture"};
    case TrainingModeKind::oracle_aligned: {
      if (H == nullptr) throw PreconditionError("oracle_aligned mode needs the hypothesis class");
      require_same_domain(H->domain(), P.domain(), "select_training_distribution");
      const std::size_t star = minimax_hypothesis(*H, P, loss);
      const std::size_t v = lower_risk((*H)[star], P, loss).vertex;
      return {P[v], vertex_id(v)};
    }
    case TrainingModeKind::adversarial: {
      if (H == nullptr) throw PreconditionError("adversarial mode needs the hypothesis class");
      require_same_domain(H->domain(), P.domain(), "select_training_distribution");
      std::size_t worst = 0;
      double worst_risk = -1.0;
      for (std::size_t v = 0; v < P.size(); ++v) {
        const double r = expected_risk_minimiser(*H, P[v], loss).risk;
        if (r > worst_risk) {
          worst_risk = r;
          worst = v;
        }
      }
      return {P[worst], vertex_id(worst)};
    }
  }
  throw PreconditionError("unknown training mode");
}

struct TrialOutcome {
  std::size_t trial = 0;
  std::string training_id;
  std::size_t erm_index = 0;
  double empirical_risk = 0.0;
  /// L_{p_train}(ERM).
  double test_risk = 0.0;
  /// max over the credal set of L_p(ERM) and the vertex attaining it.
  double worst_case_risk = 0.0;
  std::size_t worst_case_vertex = 0;
  /// L_{p_train}(ERM) - min_h L_{p_train}(h).
  double excess_risk = 0.0;

  friend bool operator==(const TrialOutcome&, const TrialOutcome&) = default;
};

/// Everything a campaign needs, built once from a config and shared read-only by trials.
class Experiment {
 public:
  explicit Experiment(ExperimentConfig cfg)
      : cfg_(std::move(cfg)),
        loss_(LossFunction::zero_one()),
        H_(build_hypothesis_class(cfg_)),
        P_(build_credal_set(cfg_)) {
    for (const Hypothesis& h : H_) loss_tables_.push_back(loss_table(h, loss_));
    for (const Distribution& v : P_.vertices()) {
      samplers_.emplace_back(v);
      vertex_minimum_.push_back(expected_risk_minimiser(H_, v, loss_).risk);
    }
    // Fixed modes have a trial-independent choice; resolve it once.
    const bool random_choice = cfg_.training.kind == TrainingModeKind::uniform_vertex ||
                               cfg_.training.kind == TrainingModeKind::random_mixture;
    if (!cfg_.credal() || P_.size() == 1 || !random_choice)
      fixed_choice_ = select_training_distribution(P_, cfg_.training, &H_, loss_, SeedSpec{});
  }

  const ExperimentConfig& config() const noexcept { return cfg_; }
  const HypothesisClass& hypotheses() const noexcept { return H_; }
  const CredalSet& credal_set() const noexcept { return P_; }
  const LossFunction& loss() const noexcept { return loss_; }

  /// One trial on the single classical distribution.
  TrialOutcome run_classical_trial(std::size_t trial) const {
    if (cfg_.credal() && P_.size() != 1)
      throw PreconditionError("run_classical_trial needs a single distribution");
    return run_trial(trial);
  }

  /// One trial in the credal regime: pick p_train per mode, train, evaluate worst case.
  TrialOutcome run_credal_trial(std::size_t trial) const { return run_trial(trial); }

  TrialOutcome run_trial(std::size_t trial) const {
    const SeedSpec root = cfg_.seed.derive(trial);
    TrialOutcome out;
    out.trial = trial;

    std::optional<TrainingChoice> drawn;
    const TrainingChoice* choice = nullptr;
    if (fixed_choice_) {
      choice = &*fixed_choice_;
    } else {
      drawn = select_training_distribution(P_, cfg_.training, &H_, loss_, root.derive(0));
      choice = &*drawn;
    }
    out.training_id = choice->id;

    auto gen = root.derive(1).engine();
    const std::size_t vertex = vertex_of(choice->id);
    const Dataset d = vertex != kNoVertex ? samplers_[vertex].sample(cfg_.n, gen)
                                          : OutcomeSampler(choice->distribution).sample(cfg_.n, gen);

    const RankedHypothesis chosen = erm(H_, d, loss_);
    out.erm_index = chosen.index;
    out.empirical_risk = chosen.risk;
    out.test_risk = risk_under(chosen.index, choice->distribution.mass());
    const double best = vertex != kNoVertex ? vertex_minimum_[vertex]
                                            : expected_risk_minimiser(H_, choice->distribution, loss_).risk;
    out.excess_risk = out.test_risk - best;
    if (out.excess_risk < 0.0) out.excess_risk = 0.0;

    out.worst_case_risk = risk_under(chosen.index, P_[0].mass());
    out.worst_case_vertex = 0;
    for (std::size_t v = 1; v < P_.size(); ++v) {
      const double r = risk_under(chosen.index, P_[v].mass());
      if (r > out.worst_case_risk) {
        out.worst_case_risk = r;
        out.worst_case_vertex = v;
      }
    }
    return out;
  }

 private:
  static constexpr std::size_t kNoVertex = static_cast<std::size_t>(-1);

  static std::size_t vertex_of(const std::string& id) {
    if (id.rfind("vertex:", 0) != 0) return kNoVertex;
    return static_cast<std::size_t>(std::stoull(id.substr(7)));
  }

  // Agrees bit for bit with expected_risk().
  double risk_under(std::size_t h, std::span<const double> mass) const {
    return weighted_loss(mass, loss_tables_[h], loss_.lo(), loss_.hi());
  }

  ExperimentConfig cfg_;
  LossFunction loss_;
  HypothesisClass H_;
  CredalSet P_;
  std::vector<std::vector<double>> loss_tables_;
  std::vector<OutcomeSampler> samplers_;
  std::vector<double> vertex_minimum_;
  std::optional<TrainingChoice> fixed_choice_;
};

/// Runs `body(i)` for i in [0, count) on up to `threads` workers, each over a
/// contiguous block of indices.
template <class Body>
void parallel_for(std::size_t count, std::size_t threads, Body&& body) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  const std::size_t block = (count + threads - 1) / threads;
  std::vector<std::exception_ptr> errors(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        const std::size_t lo = t * block;
        const std::size_t hi = std::min(count, lo + block);
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

inline std::vector<TrialOutcome> run_trials(const Experiment& exp, std::size_t threads = 1) {
  std::vector<TrialOutcome> out(exp.config().trials);
  parallel_for(out.size(), threads, [&](std::size_t i) { out[i] = exp.run_trial(i); });
  return out;
}

enum class Verdict { consistent, violated_beyond_slack };

inline std::string to_string(Verdict v) {
  return v == Verdict::consistent ? "consistent" : "violated_beyond_slack";
}

struct ViolationRow {
  double eps = 0.0;
  double frequency = 0.0;
  double std_error = 0.0;
  double analytic_bound = 1.0;
  double analytic_bound_raw = 1.0;
  /// Frequency of L_{p_train}(ERM) > eps, shown next to the worst-case frequency in credal mode.
  double classical_frequency = 0.0;
  Verdict verdict = Verdict::consistent;

  friend bool operator==(const ViolationRow&, const ViolationRow&) = default;
};

/// sqrt(f (1 - f) / trials).
inline double binomial_std_error(double frequency, std::size_t trials) {
  return std::sqrt(frequency * (1.0 - frequency) / static_cast<double>(trials));
}

inline Verdict judge(double frequency, double std_error, double bound) {
  return frequency > bound + kSlackSE * std_error ? Verdict::violated_beyond_slack : Verdict::consistent;
}

inline ViolationRow make_row(double eps, std::size_t hits, std::size_t trials, const BoundReport* bound) {
  ViolationRow row;
  row.eps = eps;
  row.frequency = static_cast<double>(hits) / static_cast<double>(trials);
  row.std_error = binomial_std_error(row.frequency, trials);
  if (bound != nullptr) {
    row.analytic_bound = bound->clipped_value;
    row.analytic_bound_raw = bound->raw_value;
  }
  row.verdict = judge(row.frequency, row.std_error, row.analytic_bound);
  return row;
}

struct Calibration {
  enum class Status { calibrated, uncalibratable_on_grid };
  Status status = Status::uncalibratable_on_grid;
  double delta = 0.0;
  std::optional<double> eps;
};

inline std::string to_string(Calibration::Status s) {
  return s == Calibration::Status::calibrated ? "calibrated" : "uncalibratable_on_grid";
}

struct ViolationReport {
  std::string config_digest;
  std::uint64_t seed = 0;
  std::string regime;          // "classical" or "credal"
  std::string training_mode;   // credal only
  std::string statistic;       // which risk the frequencies count
  std::string bound;
  std::size_t trials = 0;
  std::size_t n = 0;
  std::size_t class_size = 0;
  std::size_t vertex_count = 0;
  double delta = 0.0;
  double max_erm_empirical_risk = 0.0;
  double mean_test_risk = 0.0;
  double mean_worst_case_risk = 0.0;
  std::vector<ViolationRow> rows;
  Calibration calibration;
  /// Not part of the emitted document unless asked for; it would break reproducibility.
  double wall_time_seconds = 0.0;

  bool any_violation() const {
    return std::any_of(rows.begin(), rows.end(),
                       [](const ViolationRow& r) { return r.verdict == Verdict::violated_beyond_slack; });
  }
};

/// Smallest grid eps whose violation frequency is at most delta.
inline Calibration calibrate_epsilon(const ViolationReport& report, double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) throw PreconditionError("calibration delta must lie in (0, 1]");
  Calibration c;
  c.delta = delta;
  for (const ViolationRow& r : report.rows)
    if (r.frequency <= delta) {
      c.status = Calibration::Status::calibrated;
      c.eps = r.eps;
      return c;
    }
  return c;
}

/// The statistic compared against each eps: worst-case risk (credal), test risk
/// (classical), or excess risk (agnostic bound).
inline double governing_statistic(const TrialOutcome& t, const ExperimentConfig& cfg) {
  if (cfg.bound == BoundChoice::finite_agnostic) return t.excess_risk;
  return cfg.credal() ? t.worst_case_risk : t.test_risk;
}

inline ViolationReport summarize(const Experiment& exp, const std::vector<TrialOutcome>& outcomes) {
  const ExperimentConfig& cfg = exp.config();
  ViolationReport rep;
  rep.config_digest = config_digest(cfg);
  rep.seed = cfg.seed.master_seed;
  rep.regime = cfg.credal() ? "credal" : "classical";
  rep.training_mode = cfg.credal() ? to_string(cfg.training.kind) : "";
  if (cfg.bound == BoundChoice::finite_agnostic) rep.statistic = "excess_risk";
  else rep.statistic = cfg.credal() ? "worst_case_risk" : "test_risk";
  rep.bound = to_string(cfg.bound);
  rep.trials = outcomes.size();
  rep.n = cfg.n;
  rep.class_size = exp.hypotheses().size();
  rep.vertex_count = exp.credal_set().size();
  rep.delta = cfg.delta;

  double sum_test = 0.0;
  double sum_worst = 0.0;
  for (const TrialOutcome& t : outcomes) {
    rep.max_erm_empirical_risk = std::max(rep.max_erm_empirical_risk, t.empirical_risk);
    sum_test += t.test_risk;
    sum_worst += t.worst_case_risk;
  }
  rep.mean_test_risk = sum_test / static_cast<double>(outcomes.size());
  rep.mean_worst_case_risk = sum_worst / static_cast<double>(outcomes.size());

  const double k = static_cast<double>(rep.class_size);
  for (double eps : cfg.eps_grid) {
    std::size_t hits = 0;
    std::size_t classical_hits = 0;
    for (const TrialOutcome& t : outcomes) {
      hits += governing_statistic(t, cfg) > eps;
      classical_hits += t.test_risk > eps;
    }
    std::optional<BoundReport> bound;
    if (cfg.bound == BoundChoice::finite_realisable) bound = realisable_tail(k, cfg.n, eps);
    else if (cfg.bound == BoundChoice::finite_agnostic) bound = agnostic_tail(k, cfg.n, eps);
    ViolationRow row = make_row(eps, hits, outcomes.size(), bound ? &*bound : nullptr);
    row.classical_frequency = static_cast<double>(classical_hits) / static_cast<double>(outcomes.size());
    rep.rows.push_back(row);
  }
  rep.calibration = calibrate_epsilon(rep, cfg.delta);
  return rep;
}

/// Run the whole campaign described by `cfg`.
inline ViolationReport estimate_violation_probability(const ExperimentConfig& cfg, std::size_t threads = 1) {
  const auto start = std::chrono::steady_clock::now();
  const Experiment exp(cfg);
  const std::vector<TrialOutcome> outcomes = run_trials(exp, threads);
  ViolationReport rep = summarize(exp, outcomes);
  rep.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

inline Calibration calibrate_epsilon(const ExperimentConfig& cfg, double delta, std::size_t threads = 1) {
  return calibrate_epsilon(estimate_violation_probability(cfg, threads), delta);
}

}  // namespace credalpac::harness
