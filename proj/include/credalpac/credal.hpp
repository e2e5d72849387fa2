#pragma once

// Credal sets given by finitely many extreme distributions.
//
// Expected risk is linear in the distribution, so over the convex hull of
// the vertices its minimum and maximum are attained at vertices. Every
// lower/upper quantity here is therefore an exact vertex enumeration.
//
// Uniform credal realisability ("every p in the set admits a zero-risk
// hypothesis") is decided over the whole hull, not just the vertices: a
// point with all-positive mixture weights has support equal to the union
// of the vertex supports, so the condition holds for those points iff one
// hypothesis is correct on that union, and then it holds on every face too.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "credalpac/core.hpp"

namespace credalpac {

class CredalSet {
 public:
  explicit CredalSet(std::vector<Distribution> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.empty()) throw PreconditionError("credal set needs at least one vertex");
    for (const Distribution& v : vertices_) require_same_domain(domain(), v.domain(), "credal set");
    for (std::size_t i = 0; i < vertices_.size(); ++i)
      for (std::size_t j = i + 1; j < vertices_.size(); ++j)
        if (vertices_[i] == vertices_[j]) duplicates_.emplace_back(i, j);
  }

  static CredalSet singleton(Distribution p) { return CredalSet(std::vector<Distribution>{std::move(p)}); }

  const DomainSpace& domain() const noexcept { return vertices_.front().domain(); }
  std::size_t size() const noexcept { return vertices_.size(); }
  const Distribution& operator[](std::size_t i) const { return vertices_.at(i); }
  const std::vector<Distribution>& vertices() const noexcept { return vertices_; }

  /// Pairs (i, j), i < j, of vertices with identical mass vectors.
  const std::vector<std::pair<std::size_t, std::size_t>>& duplicate_vertices() const noexcept {
    return duplicates_;
  }

 private:
  std::vector<Distribution> vertices_;
  std::vector<std::pair<std::size_t, std::size_t>> duplicates_;
};

/// Extreme risk over a credal set and the vertex attaining it (lowest index on ties).
struct VertexRisk {
  double risk = 0.0;
  std::size_t vertex = 0;
};

inline VertexRisk upper_risk(const Hypothesis& h, const CredalSet& P,
                             const LossFunction& loss = LossFunction::zero_one()) {
  require_same_domain(h.domain(), P.domain(), "upper_risk");
  VertexRisk best{expected_risk(h, P[0], loss), 0};
  for (std::size_t v = 1; v < P.size(); ++v) {
    const double r = expected_risk(h, P[v], loss);
    if (r > best.risk) best = {r, v};
  }
  return best;
}

inline VertexRisk lower_risk(const Hypothesis& h, const CredalSet& P,
                             const LossFunction& loss = LossFunction::zero_one()) {
  require_same_domain(h.domain(), P.domain(), "lower_risk");
  VertexRisk best{expected_risk(h, P[0], loss), 0};
  for (std::size_t v = 1; v < P.size(); ++v) {
    const double r = expected_risk(h, P[v], loss);
    if (r < best.risk) best = {r, v};
  }
  return best;
}

/// Sorted flattened outcomes carrying positive mass under some vertex.
inline std::vector<std::size_t> support_union(const CredalSet& P) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < P.domain().outcome_count(); ++k)
    for (const Distribution& v : P.vertices())
      if (v.mass()[k] > 0.0) {
        out.push_back(k);
        break;
      }
  return out;
}

/// Hull element sum_v w_v * vertex_v. Weights must be non-negative and sum to one.
inline Distribution mixture(const CredalSet& P, std::span<const double> weights) {
  if (weights.size() != P.size()) throw PreconditionError("one mixture weight per vertex required");
  std::vector<double> mass(P.domain().outcome_count(), 0.0);
  for (std::size_t v = 0; v < P.size(); ++v) {
    if (!(weights[v] >= 0.0)) throw PreconditionError("mixture weights must be non-negative");
    const auto vm = P[v].mass();
    for (std::size_t k = 0; k < mass.size(); ++k) mass[k] += weights[v] * vm[k];
  }
  return Distribution(P.domain(), std::move(mass));
}

/// Uniform-simplex (Dirichlet(1, ..., 1)) weights drawn from `gen`.
template <std::uniform_random_bit_generator G>
std::vector<double> dirichlet_weights(std::size_t count, G& gen) {
  std::vector<double> w(count);
  double total = 0.0;
  for (double& x : w) total += (x = standard_exponential(gen));
  for (double& x : w) x /= total;
  return w;
}

template <std::uniform_random_bit_generator G>
Distribution sample_mixture(const CredalSet& P, G& gen) {
  if (P.size() == 1) return P[0];
  const std::vector<double> w = dirichlet_weights(P.size(), gen);
  return mixture(P, w);
}

/// Random hull element, uniform over mixture weights, from stream `seed`.
inline Distribution sample_mixture(const CredalSet& P, const SeedSpec& seed) {
  auto gen = seed.engine();
  return sample_mixture(P, gen);
}

struct Witness {
  std::size_t hypothesis = 0;
  std::size_t vertex = 0;
  double risk = 0.0;

  friend bool operator==(const Witness&, const Witness&) = default;
};

struct VertexMinimiser {
  std::size_t vertex = 0;
  std::size_t hypothesis = 0;
  double risk = 0.0;

  friend bool operator==(const VertexMinimiser&, const VertexMinimiser&) = default;
};

/// For each vertex, the expected-risk minimiser over the class.
inline std::vector<VertexMinimiser> per_vertex_minimisers(const HypothesisClass& H, const CredalSet& P,
                                                          const LossFunction& loss = LossFunction::zero_one()) {
  require_same_domain(H.domain(), P.domain(), "per_vertex_minimisers");
  std::vector<VertexMinimiser> rows;
  rows.reserve(P.size());
  for (std::size_t v = 0; v < P.size(); ++v) {
    const RankedHypothesis best = expected_risk_minimiser(H, P[v], loss);
    rows.push_back({v, best.index, best.risk});
  }
  return rows;
}

struct CredalRealisability {
  bool realisable = false;
  /// Every (hypothesis, vertex) pair with risk <= tolerance.
  std::vector<Witness> witnesses;
};

/// Some h and some p in the hull with L_p(h) <= tol. Reduces to vertices by linearity.
inline CredalRealisability check_credal_realisability(const HypothesisClass& H, const CredalSet& P,
                                                      double tol = 1e-9,
                                                      const LossFunction& loss = LossFunction::zero_one()) {
  require_same_domain(H.domain(), P.domain(), "check_credal_realisability");
  CredalRealisability out;
  for (std::size_t i = 0; i < H.size(); ++i)
    for (std::size_t v = 0; v < P.size(); ++v) {
      const double r = expected_risk(H[i], P[v], loss);
      if (r <= tol) out.witnesses.push_back({i, v, r});
    }
  out.realisable = !out.witnesses.empty();
  return out;
}

struct UniformCredalRealisability {
  bool realisable = false;
  /// Hypotheses with loss <= tol on every outcome of the support union.
  std::vector<std::size_t> hull_witnesses;
  /// Vertex-only reading: best hypothesis per vertex.
  std::vector<VertexMinimiser> per_vertex;
  /// True iff every vertex has some hypothesis with risk <= tol.
  bool vertexwise_realisable = false;
};

/// Every p in the hull admits some h with L_p(h) <= tol (support-union criterion).
inline UniformCredalRealisability check_uniform_credal_realisability(
    const HypothesisClass& H, const CredalSet& P, double tol = 1e-9,
    const LossFunction& loss = LossFunction::zero_one()) {
  require_same_domain(H.domain(), P.domain(), "check_uniform_credal_realisability");
  const std::vector<std::size_t> support = support_union(P);
  UniformCredalRealisability out;
  for (std::size_t i = 0; i < H.size(); ++i) {
    const std::vector<double> losses = loss_table(H[i], loss);
    const bool correct_everywhere =
        std::all_of(support.begin(), support.end(), [&](std::size_t k) { return losses[k] <= tol; });
    if (correct_everywhere) out.hull_witnesses.push_back(i);
  }
  out.realisable = !out.hull_witnesses.empty();
  out.per_vertex = per_vertex_minimisers(H, P, loss);
  out.vertexwise_realisable = std::all_of(out.per_vertex.begin(), out.per_vertex.end(),
                                          [&](const VertexMinimiser& m) { return m.risk <= tol; });
  return out;
}

struct RealisabilityReport {
  bool credal_realisable = false;
  bool uniform_credal_realisable = false;
  bool vertexwise_realisable = false;
  std::vector<Witness> witnesses;
  std::vector<std::size_t> uniform_witnesses;
  std::vector<VertexMinimiser> per_vertex;
  std::vector<std::size_t> support;
  std::vector<std::pair<std::size_t, std::size_t>> duplicate_vertices;
  double tolerance = 1e-9;
};

inline RealisabilityReport realisability_report(const HypothesisClass& H, const CredalSet& P,
                                                double tol = 1e-9,
                                                const LossFunction& loss = LossFunction::zero_one()) {
  CredalRealisability existential = check_credal_realisability(H, P, tol, loss);
  UniformCredalRealisability uniform = check_uniform_credal_realisability(H, P, tol, loss);
  RealisabilityReport r;
  r.credal_realisable = existential.realisable;
  r.uniform_credal_realisable = uniform.realisable;
  r.vertexwise_realisable = uniform.vertexwise_realisable;
  r.witnesses = std::move(existential.witnesses);
  r.uniform_witnesses = std::move(uniform.hull_witnesses);
  r.per_vertex = std::move(uniform.per_vertex);
  r.support = support_union(P);
  r.duplicate_vertices = P.duplicate_vertices();
  r.tolerance = tol;
  return r;
}

}  // namespace credalpac
