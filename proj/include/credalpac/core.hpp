#pragma once

// Finite probability spaces, lookup-table hypotheses, bounded losses,
// exact and empirical risks, risk minimisers and i.i.d. dataset sampling.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "credalpac/errors.hpp"
#include "credalpac/random.hpp"

namespace credalpac {

/// A labelled example (x, y), both as indices.
struct Outcome {
  std::size_t x = 0;
  std::size_t y = 0;

  friend constexpr bool operator==(const Outcome&, const Outcome&) = default;
};

/// The product space X x Y. Outcome (x, y) flattens to x * label_count + y.
class DomainSpace {
 public:
  DomainSpace(std::size_t input_count, std::size_t label_count)
      : input_count_(input_count), label_count_(label_count) {
    if (input_count == 0 || label_count == 0)
      throw DomainError("domain needs at least one input and one label");
  }

  std::size_t input_count() const noexcept { return input_count_; }
  std::size_t label_count() const noexcept { return label_count_; }
  std::size_t outcome_count() const noexcept { return input_count_ * label_count_; }

  bool contains(Outcome z) const noexcept { return z.x < input_count_ && z.y < label_count_; }

  std::size_t flatten(Outcome z) const {
    if (!contains(z))
      throw DomainError("outcome (" + std::to_string(z.x) + ", " + std::to_string(z.y) +
                        ") outside domain " + describe());
    return z.x * label_count_ + z.y;
  }

  Outcome unflatten(std::size_t index) const {
    if (index >= outcome_count()) throw DomainError("outcome index out of range");
    return {index / label_count_, index % label_count_};
  }

  std::string describe() const {
    return std::to_string(input_count_) + "x" + std::to_string(label_count_);
  }

  friend bool operator==(const DomainSpace&, const DomainSpace&) = default;

 private:
  std::size_t input_count_;
  std::size_t label_count_;
};

inline void require_same_domain(const DomainSpace& a, const DomainSpace& b, const char* what) {
  if (a != b)
    throw DomainError(std::string(what) + ": domain mismatch (" + a.describe() + " vs " +
                      b.describe() + ")");
}

/// Probability mass over the flattened outcomes of a domain.
///
/// Construction accepts a vector whose sum is within `kSumTolerance` of one
/// and divides by that sum once; the stored masses are never touched again.
class Distribution {
 public:
  static constexpr double kSumTolerance = 1e-9;

  Distribution(DomainSpace domain, std::vector<double> mass)
      : domain_(domain), mass_(std::move(mass)) {
    if (mass_.size() != domain_.outcome_count())
      throw DomainError("distribution has " + std::to_string(mass_.size()) +
                        " entries, domain " + domain_.describe() + " needs " +
                        std::to_string(domain_.outcome_count()));
    double total = 0.0;
    for (double m : mass_) {
      if (!std::isfinite(m) || m < 0.0)
        throw PreconditionError("distribution entries must be finite and non-negative");
      total += m;
    }
    if (std::abs(total - 1.0) > kSumTolerance)
      throw PreconditionError("distribution sums to " + std::to_string(total) +
                              ", expected 1 within 1e-9");
    if (total != 1.0)
      for (double& m : mass_) m /= total;
  }

  /// All mass on one outcome.
  static Distribution point(DomainSpace domain, Outcome z) {
    std::vector<double> mass(domain.outcome_count(), 0.0);
    mass[domain.flatten(z)] = 1.0;
    return Distribution(domain, std::move(mass));
  }

  /// Equal mass on each listed outcome (duplicates accumulate).
  static Distribution uniform_over(DomainSpace domain, std::span<const Outcome> support) {
    if (support.empty()) throw PreconditionError("uniform_over needs a non-empty support");
    std::vector<double> mass(domain.outcome_count(), 0.0);
    const double w = 1.0 / static_cast<double>(support.size());
    for (Outcome z : support) mass[domain.flatten(z)] += w;
    return Distribution(domain, std::move(mass));
  }

  const DomainSpace& domain() const noexcept { return domain_; }
  std::span<const double> mass() const noexcept { return mass_; }
  double mass(Outcome z) const { return mass_[domain_.flatten(z)]; }

  friend bool operator==(const Distribution&, const Distribution&) = default;

 private:
  DomainSpace domain_;
  std::vector<double> mass_;
};

/// Total map X -> Y stored as a lookup table.
class Hypothesis {
 public:
  Hypothesis(DomainSpace domain, std::vector<std::size_t> table)
      : domain_(domain), table_(std::move(table)) {
    if (table_.size() != domain_.input_count())
      throw DomainError("hypothesis table length " + std::to_string(table_.size()) +
                        " does not match input count " + std::to_string(domain_.input_count()));
    for (std::size_t label : table_)
      if (label >= domain_.label_count()) throw DomainError("hypothesis predicts an unknown label");
  }

  static Hypothesis constant(DomainSpace domain, std::size_t label) {
    return Hypothesis(domain, std::vector<std::size_t>(domain.input_count(), label));
  }

  const DomainSpace& domain() const noexcept { return domain_; }
  std::span<const std::size_t> table() const noexcept { return table_; }

  std::size_t operator()(std::size_t x) const {
    if (x >= domain_.input_count()) throw DomainError("input index out of range");
    return table_[x];
  }

  friend bool operator==(const Hypothesis&, const Hypothesis&) = default;

 private:
  DomainSpace domain_;
  std::vector<std::size_t> table_;
};

/// Ordered, non-empty list of distinct hypotheses over one domain.
/// Order matters: every argmin in the library breaks ties by lowest index.
class HypothesisClass {
 public:
  static constexpr std::size_t kMaxGenerated = 4096;

  explicit HypothesisClass(std::vector<Hypothesis> hypotheses) : hypotheses_(std::move(hypotheses)) {
    if (hypotheses_.empty()) throw PreconditionError("hypothesis class must be non-empty");
    const DomainSpace& d = hypotheses_.front().domain();
    for (const Hypothesis& h : hypotheses_) require_same_domain(d, h.domain(), "hypothesis class");
    std::vector<std::vector<std::size_t>> tables;
    tables.reserve(hypotheses_.size());
    for (const Hypothesis& h : hypotheses_) tables.emplace_back(h.table().begin(), h.table().end());
    std::sort(tables.begin(), tables.end());
    if (std::adjacent_find(tables.begin(), tables.end()) != tables.end())
      throw PreconditionError("hypothesis class contains duplicate tables");
  }

  /// Every map X -> Y. Hypothesis k predicts digit x of k written in base |Y|
  /// (least significant digit first), so index 0 is the constant-0 map.
  static HypothesisClass all_tables(DomainSpace domain, std::size_t max_size = kMaxGenerated) {
    const std::size_t cap = std::min(max_size, kMaxGenerated);
    std::size_t count = 1;
    for (std::size_t x = 0; x < domain.input_count(); ++x) {
      if (count > cap / domain.label_count())
        throw SizeGuardError("all_tables over " + domain.describe() + " exceeds the cap of " +
                             std::to_string(cap) + " hypotheses");
      count *= domain.label_count();
    }
    std::vector<Hypothesis> hs;
    hs.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
      std::vector<std::size_t> table(domain.input_count());
      std::size_t rest = k;
      for (std::size_t& label : table) {
        label = rest % domain.label_count();
        rest /= domain.label_count();
      }
      hs.emplace_back(domain, std::move(table));
    }
    return HypothesisClass(std::move(hs));
  }

  const DomainSpace& domain() const noexcept { return hypotheses_.front().domain(); }
  std::size_t size() const noexcept { return hypotheses_.size(); }
  const Hypothesis& operator[](std::size_t i) const { return hypotheses_.at(i); }
  auto begin() const noexcept { return hypotheses_.begin(); }
  auto end() const noexcept { return hypotheses_.end(); }

 private:
  std::vector<Hypothesis> hypotheses_;
};

/// Ordered multiset of labelled examples. May be empty; risks require n >= 1.
class Dataset {
 public:
  Dataset(DomainSpace domain, std::vector<Outcome> pairs) : domain_(domain), pairs_(std::move(pairs)) {
    for (Outcome z : pairs_)
      if (!domain_.contains(z)) throw DomainError("dataset pair outside domain " + domain_.describe());
  }

  const DomainSpace& domain() const noexcept { return domain_; }
  std::span<const Outcome> pairs() const noexcept { return pairs_; }
  std::size_t size() const noexcept { return pairs_.size(); }
  bool empty() const noexcept { return pairs_.empty(); }

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  DomainSpace domain_;
  std::vector<Outcome> pairs_;
};

/// Bounded loss l((x, y), h) with declared range [lo, hi].
///
/// Zero-one is built in. Custom losses are a callable of
/// (x, y, predicted label); every value they produce is range-checked.
class LossFunction {
 public:
  enum class Kind { zero_one, custom };
  using Callable = std::function<double(std::size_t x, std::size_t y, std::size_t predicted)>;

  static LossFunction zero_one() { return LossFunction(Kind::zero_one, 0.0, 1.0, {}); }

  static LossFunction bounded(double lo, double hi, Callable fn) {
    if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi))
      throw PreconditionError("loss range must satisfy lo <= hi");
    if (!fn) throw PreconditionError("custom loss needs a callable");
    return LossFunction(Kind::custom, lo, hi, std::move(fn));
  }

  Kind kind() const noexcept { return kind_; }
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double range() const noexcept { return hi_ - lo_; }

  double operator()(Outcome z, const Hypothesis& h) const {
    if (!h.domain().contains(z)) throw DomainError("loss evaluated outside the hypothesis domain");
    const std::size_t predicted = h.table()[z.x];
    if (kind_ == Kind::zero_one) return predicted == z.y ? 0.0 : 1.0;
    const double v = fn_(z.x, z.y, predicted);
    if (!(v >= lo_ && v <= hi_)) throw PreconditionError("custom loss value outside declared range");
    return v;
  }

 private:
  LossFunction(Kind kind, double lo, double hi, Callable fn)
      : kind_(kind), lo_(lo), hi_(hi), fn_(std::move(fn)) {}

  Kind kind_;
  double lo_;
  double hi_;
  Callable fn_;
};

inline double zero_one_loss(Outcome z, const Hypothesis& h) { return LossFunction::zero_one()(z, h); }

/// Loss of `h` on every flattened outcome of its domain.
inline std::vector<double> loss_table(const Hypothesis& h, const LossFunction& loss) {
  const DomainSpace& d = h.domain();
  std::vector<double> out(d.outcome_count());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = loss(d.unflatten(k), h);
  return out;
}

/// sum_k mass[k] * losses[k], clamped to the loss range (the masses may sum
/// to one only up to rounding).
inline double weighted_loss(std::span<const double> mass, std::span<const double> losses, double lo, double hi) {
  double risk = 0.0;
  for (std::size_t k = 0; k < losses.size(); ++k) risk += mass[k] * losses[k];
  return std::clamp(risk, lo, hi);
}

/// sum_z p(z) * l(z, h), over every outcome.
inline double expected_risk(const Hypothesis& h, const Distribution& p,
                            const LossFunction& loss = LossFunction::zero_one()) {
  require_same_domain(h.domain(), p.domain(), "expected_risk");
  const std::vector<double> losses = loss_table(h, loss);
  return weighted_loss(p.mass(), losses, loss.lo(), loss.hi());
}

/// (1/n) sum_i l(z_i, h).
inline double empirical_risk(const Hypothesis& h, const Dataset& d,
                             const LossFunction& loss = LossFunction::zero_one()) {
  require_same_domain(h.domain(), d.domain(), "empirical_risk");
  if (d.empty()) throw PreconditionError("empirical risk of an empty dataset");
  double total = 0.0;
  for (Outcome z : d.pairs()) total += loss(z, h);
  return total / static_cast<double>(d.size());
}

/// Point masses 1/n at each dataset pair.
inline Distribution empirical_distribution(const Dataset& d) {
  return Distribution::uniform_over(d.domain(), d.pairs());
}

/// A member of a hypothesis class together with the risk that selected it.
struct RankedHypothesis {
  std::size_t index = 0;
  double risk = 0.0;
};

namespace detail {

template <class RiskOf>
RankedHypothesis argmin_over(const HypothesisClass& cls, RiskOf&& risk_of) {
  RankedHypothesis best{0, std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < cls.size(); ++i) {
    const double r = risk_of(cls[i]);
    if (r < best.risk) best = {i, r};
  }
  return best;
}

}  // namespace detail

/// Empirical risk minimiser; ties go to the lowest class index.
inline RankedHypothesis erm(const HypothesisClass& cls, const Dataset& d,
                            const LossFunction& loss = LossFunction::zero_one()) {
  require_same_domain(cls.domain(), d.domain(), "erm");
  if (d.empty()) throw PreconditionError("erm on an empty dataset");
  if (loss.kind() == LossFunction::Kind::zero_one) {
    // Integer mistake counts make the comparison exact.
    RankedHypothesis best{0, std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i < cls.size(); ++i) {
      const auto table = cls[i].table();
      std::size_t mistakes = 0;
      for (Outcome z : d.pairs()) mistakes += table[z.x] != z.y;
      const double r = static_cast<double>(mistakes) / static_cast<double>(d.size());
      if (r < best.risk) best = {i, r};
    }
    return best;
  }
  return detail::argmin_over(cls, [&](const Hypothesis& h) { return empirical_risk(h, d, loss); });
}

/// Expected risk minimiser over the class; ties go to the lowest index.
inline RankedHypothesis expected_risk_minimiser(const HypothesisClass& cls, const Distribution& p,
                                                const LossFunction& loss = LossFunction::zero_one()) {
  require_same_domain(cls.domain(), p.domain(), "expected_risk_minimiser");
  return detail::argmin_over(cls, [&](const Hypothesis& h) { return expected_risk(h, p, loss); });
}

/// L_p(ERM on d) minus the best in-class L_p. Never negative.
inline double excess_risk(const HypothesisClass& cls, const Dataset& d, const Distribution& p,
                          const LossFunction& loss = LossFunction::zero_one()) {
  const RankedHypothesis chosen = erm(cls, d, loss);
  const RankedHypothesis best = expected_risk_minimiser(cls, p, loss);
  return expected_risk(cls[chosen.index], p, loss) - best.risk;
}

/// Inverse-CDF sampler over the flattened outcomes of a distribution.
class OutcomeSampler {
 public:
  explicit OutcomeSampler(const Distribution& p) : domain_(p.domain()), cumulative_(p.mass().size()) {
    std::partial_sum(p.mass().begin(), p.mass().end(), cumulative_.begin());
    last_supported_ = 0;
    for (std::size_t k = 0; k < cumulative_.size(); ++k)
      if (p.mass()[k] > 0.0) last_supported_ = k;
  }

  template <std::uniform_random_bit_generator G>
  Outcome operator()(G& gen) const {
    const double u = uniform01(gen);
    // First index whose cumulative mass exceeds u always carries positive mass.
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    const std::size_t k = it == cumulative_.end()
                              ? last_supported_
                              : static_cast<std::size_t>(it - cumulative_.begin());
    return domain_.unflatten(k);
  }

  template <std::uniform_random_bit_generator G>
  Dataset sample(std::size_t n, G& gen) const {
    std::vector<Outcome> pairs(n);
    for (Outcome& z : pairs) z = (*this)(gen);
    return Dataset(domain_, std::move(pairs));
  }

  const DomainSpace& domain() const noexcept { return domain_; }

 private:
  DomainSpace domain_;
  std::vector<double> cumulative_;
  std::size_t last_supported_;
};

/// n i.i.d. draws from p using the stream `seed`.
inline Dataset sample_dataset(const Distribution& p, std::size_t n, const SeedSpec& seed) {
  if (n == 0) throw PreconditionError("sample_dataset needs n >= 1");
  auto gen = seed.engine();
  return OutcomeSampler(p).sample(n, gen);
}

}  // namespace credalpac
