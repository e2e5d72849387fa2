#pragma once

// Concentration inequalities and PAC epsilon formulas for finite classes.
// All logarithms are natural.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <string_view>

#include "credalpac/errors.hpp"

namespace credalpac {

enum class BoundKind {
  markov,
  hoeffding,
  mcdiarmid,
  gn_tail,
  union_bound,
  pac_finite_realisable,
  pac_finite_agnostic,
  pac_rademacher,
};

inline std::string_view to_string(BoundKind k) {
  switch (k) {
    case BoundKind::markov: return "markov";
    case BoundKind::hoeffding: return "hoeffding";
    case BoundKind::mcdiarmid: return "mcdiarmid";
    case BoundKind::gn_tail: return "gn_tail";
    case BoundKind::union_bound: return "union";
    case BoundKind::pac_finite_realisable: return "pac_finite_realisable";
    case BoundKind::pac_finite_agnostic: return "pac_finite_agnostic";
    case BoundKind::pac_rademacher: return "pac_rademacher";
  }
  return "unknown";
}

/// A probability bound: the formula value and the same value clipped to [0, 1].
struct BoundReport {
  BoundKind kind{};
  std::map<std::string, double> inputs;
  double raw_value = 0.0;
  double clipped_value = 0.0;
};

namespace detail {

inline BoundReport make_probability_bound(BoundKind kind, std::map<std::string, double> inputs, double raw) {
  return BoundReport{kind, std::move(inputs), raw, std::clamp(raw, 0.0, 1.0)};
}

inline void require_delta(double delta, bool allow_one) {
  const bool ok = delta > 0.0 && (allow_one ? delta <= 1.0 : delta < 1.0);
  if (!ok)
    throw PreconditionError(allow_one ? "delta must lie in (0, 1]" : "delta must lie in (0, 1)");
}

inline void require_class_size(double class_size) {
  if (!(class_size >= 1.0)) throw PreconditionError("class size must be at least 1");
}

inline void require_n(double n) {
  if (!(n >= 1.0)) throw PreconditionError("sample size must be at least 1");
}

inline double sum_of_squares(std::span<const double> xs) {
  double s = 0.0;
  for (double x : xs) s += x * x;
  return s;
}

/// Agnostic epsilon without the delta range check; delta = 2 is a valid limit point.
inline double eps_finite_agnostic_unchecked(double class_size, double delta, double n) {
  return std::sqrt(2.0 * (std::log(class_size) + std::log(2.0 / delta)) / n);
}

inline double eps_rademacher_unchecked(double rademacher, double delta, double n) {
  return 4.0 * rademacher + std::sqrt(2.0 * std::log(2.0 / delta) / n);
}

}  // namespace detail

/// P[Z >= t] <= E[Z] / t for non-negative Z.
inline BoundReport markov_bound(double expectation, double t) {
  if (!(expectation >= 0.0)) throw PreconditionError("markov: expectation must be non-negative");
  if (!(t > 0.0)) throw PreconditionError("markov: threshold must be positive");
  return detail::make_probability_bound(BoundKind::markov, {{"expectation", expectation}, {"t", t}},
                                        expectation / t);
}

/// Tail of a sample mean of n independent variables, x_i in [a_i, b_i]:
/// P[mean >= E[mean] + eps] <= exp(-2 n^2 eps^2 / sum_i (b_i - a_i)^2).
inline BoundReport hoeffding_tail(std::size_t n, double eps, std::span<const double> widths) {
  detail::require_n(static_cast<double>(n));
  if (widths.size() != n) throw PreconditionError("hoeffding: need one range width per variable");
  if (!(eps >= 0.0)) throw PreconditionError("hoeffding: eps must be non-negative");
  for (double w : widths)
    if (!(w > 0.0)) throw PreconditionError("hoeffding: range widths must be positive");
  const double nn = static_cast<double>(n);
  const double raw = std::exp(-2.0 * nn * nn * eps * eps / detail::sum_of_squares(widths));
  return detail::make_probability_bound(BoundKind::hoeffding, {{"n", nn}, {"eps", eps}}, raw);
}

/// Bounded-difference inequality: P[f - E f >= eps] <= exp(-2 eps^2 / sum_i c_i^2).
inline BoundReport mcdiarmid_tail(double eps, std::span<const double> c) {
  if (!(eps >= 0.0)) throw PreconditionError("mcdiarmid: eps must be non-negative");
  if (c.empty()) throw PreconditionError("mcdiarmid: need at least one difference constant");
  for (double ci : c)
    if (!(ci > 0.0)) throw PreconditionError("mcdiarmid: difference constants must be positive");
  const double raw = std::exp(-2.0 * eps * eps / detail::sum_of_squares(c));
  return detail::make_probability_bound(
      BoundKind::mcdiarmid, {{"eps", eps}, {"variables", static_cast<double>(c.size())}}, raw);
}

/// P[G_n >= E[G_n] + eps] <= exp(-2 n eps^2), the uniform deviation of a [0,1] loss.
inline BoundReport gn_tail(std::size_t n, double eps) {
  detail::require_n(static_cast<double>(n));
  if (!(eps >= 0.0)) throw PreconditionError("gn_tail: eps must be non-negative");
  const double nn = static_cast<double>(n);
  return detail::make_probability_bound(BoundKind::gn_tail, {{"n", nn}, {"eps", eps}},
                                        std::exp(-2.0 * nn * eps * eps));
}

/// P[union of events] <= sum of their probabilities.
inline BoundReport union_bound(std::span<const double> probs) {
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0)) throw PreconditionError("union: probabilities must lie in [0, 1]");
    total += p;
  }
  return detail::make_probability_bound(BoundKind::union_bound,
                                        {{"events", static_cast<double>(probs.size())}}, total);
}

/// Finite realisable class: with probability >= 1 - delta the ERM has
/// L(h) <= (ln|H| + ln(1/delta)) / n.
inline double eps_finite_realisable(double class_size, double delta, double n) {
  detail::require_class_size(class_size);
  detail::require_delta(delta, true);
  detail::require_n(n);
  return (std::log(class_size) + std::log(1.0 / delta)) / n;
}

/// Tail form of the realisable bound, P[L(ERM) > eps] <= |H| exp(-eps n).
inline BoundReport realisable_tail(double class_size, std::size_t n, double eps) {
  detail::require_class_size(class_size);
  detail::require_n(static_cast<double>(n));
  if (!(eps >= 0.0)) throw PreconditionError("realisable_tail: eps must be non-negative");
  const double nn = static_cast<double>(n);
  return detail::make_probability_bound(BoundKind::pac_finite_realisable,
                                        {{"class_size", class_size}, {"n", nn}, {"eps", eps}},
                                        class_size * std::exp(-eps * nn));
}

/// Smallest n achieving eps in the realisable bound.
///
/// Quotients within a few ulps of an integer snap to it before rounding up,
/// so feeding back eps_finite_realisable(k, delta, n) returns n.
inline std::size_t sample_complexity_realisable(double class_size, double delta, double eps) {
  detail::require_class_size(class_size);
  detail::require_delta(delta, true);
  if (!(eps > 0.0)) throw PreconditionError("sample complexity needs eps > 0");
  const double q = (std::log(class_size) + std::log(1.0 / delta)) / eps;
  const double nearest = std::round(q);
  const double snapped = std::abs(q - nearest) <= 4.0 * std::numeric_limits<double>::epsilon() * nearest
                             ? nearest
                             : q;
  return static_cast<std::size_t>(std::ceil(snapped));
}

/// Finite class without realisability: eps = sqrt(2 (ln|H| + ln(2/delta)) / n).
inline double eps_finite_agnostic(double class_size, double delta, double n) {
  detail::require_class_size(class_size);
  detail::require_delta(delta, true);
  detail::require_n(n);
  return detail::eps_finite_agnostic_unchecked(class_size, delta, n);
}

/// Tail form of the agnostic bound on excess risk, 2|H| exp(-n eps^2 / 2).
inline BoundReport agnostic_tail(double class_size, std::size_t n, double eps) {
  detail::require_class_size(class_size);
  detail::require_n(static_cast<double>(n));
  if (!(eps >= 0.0)) throw PreconditionError("agnostic_tail: eps must be non-negative");
  const double nn = static_cast<double>(n);
  return detail::make_probability_bound(BoundKind::pac_finite_agnostic,
                                        {{"class_size", class_size}, {"n", nn}, {"eps", eps}},
                                        2.0 * class_size * std::exp(-nn * eps * eps / 2.0));
}

/// eps = 4 R_n(A) + sqrt(2 ln(2/delta) / n).
inline double eps_rademacher(double rademacher, double delta, double n) {
  if (!(rademacher >= 0.0)) throw PreconditionError("Rademacher complexity must be non-negative");
  detail::require_delta(delta, false);
  detail::require_n(n);
  return detail::eps_rademacher_unchecked(rademacher, delta, n);
}

}  // namespace credalpac
