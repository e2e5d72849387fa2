#pragma once

// Experiment configuration: JSON document <-> ExperimentConfig.
// The schema is documented in docs/config-schema.md.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "credalpac/core.hpp"
#include "credalpac/credal.hpp"
#include "credalpac/errors.hpp"
#include "credalpac/random.hpp"

namespace credalpac::harness {

enum class TrainingModeKind { fixed_vertex, uniform_vertex, random_mixture, oracle_aligned, adversarial };

inline std::string to_string(TrainingModeKind k) {
  switch (k) {
    case TrainingModeKind::fixed_vertex: return "fixed_vertex";
    case TrainingModeKind::uniform_vertex: return "uniform_vertex";
    case TrainingModeKind::random_mixture: return "random_mixture";
    case TrainingModeKind::oracle_aligned: return "oracle_aligned";
    case TrainingModeKind::adversarial: return "adversarial";
  }
  return "unknown";
}

struct TrainingMode {
  TrainingModeKind kind = TrainingModeKind::fixed_vertex;
  std::size_t vertex = 0;  // fixed_vertex only

  friend bool operator==(const TrainingMode&, const TrainingMode&) = default;
};

/// Which analytic tail is attached to each grid threshold.
///   finite_realisable: |H| exp(-eps n) against P[risk > eps]
///   finite_agnostic:   2|H| exp(-n eps^2 / 2) against P[excess risk > eps]
///   none:              no comparison (bound reported as 1)
enum class BoundChoice { finite_realisable, finite_agnostic, none };

inline std::string to_string(BoundChoice b) {
  switch (b) {
    case BoundChoice::finite_realisable: return "finite_realisable";
    case BoundChoice::finite_agnostic: return "finite_agnostic";
    case BoundChoice::none: return "none";
  }
  return "unknown";
}

struct AllTables {
  std::size_t max_size = HypothesisClass::kMaxGenerated;
  friend bool operator==(const AllTables&, const AllTables&) = default;
};

using HypothesisSpec = std::variant<AllTables, std::vector<std::vector<std::size_t>>>;

struct ExperimentConfig {
  std::size_t input_count = 1;
  std::size_t label_count = 1;
  HypothesisSpec hypotheses = AllTables{};
  /// Exactly one of these is non-empty: one row in classical mode, the vertices in credal mode.
  std::vector<double> distribution;
  std::vector<std::vector<double>> credal_vertices;
  TrainingMode training;
  std::size_t n = 1;
  std::size_t trials = 1;
  double delta = 0.05;
  std::vector<double> eps_grid;
  std::string loss = "zero_one";
  BoundChoice bound = BoundChoice::finite_realisable;
  SeedSpec seed;

  bool credal() const noexcept { return !credal_vertices.empty(); }

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Masses with magnitude below this are read as exact zeros.
inline constexpr double kParseZeroThreshold = 1e-12;

namespace detail {

using nlohmann::json;

inline std::string pointer(const std::string& base, const std::string& key) { return base + "/" + key; }
inline std::string pointer(const std::string& base, std::size_t index) {
  return base + "/" + std::to_string(index);
}

inline std::size_t read_count(const json& j, const std::string& where, std::size_t min_value) {
  if (!j.is_number_integer() && !j.is_number_unsigned())
    throw ConfigError(where, "expected an integer");
  if (j.is_number_integer() && j.get<std::int64_t>() < 0) throw ConfigError(where, "must be non-negative");
  const auto v = j.get<std::uint64_t>();
  if (v < min_value) throw ConfigError(where, "must be at least " + std::to_string(min_value));
  return static_cast<std::size_t>(v);
}

inline double read_real(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(where, "must be finite");
  return v;
}

inline std::vector<double> read_mass_row(const json& j, const std::string& where, std::size_t expected) {
  if (!j.is_array()) throw ConfigError(where, "expected a list of probabilities");
  if (j.size() != expected)
    throw ConfigError(where, "expected " + std::to_string(expected) + " probabilities, got " +
                                 std::to_string(j.size()));
  std::vector<double> row;
  row.reserve(expected);
  for (std::size_t k = 0; k < j.size(); ++k) {
    double v = read_real(j[k], pointer(where, k));
    if (std::abs(v) < kParseZeroThreshold) v = 0.0;
    if (v < 0.0) throw ConfigError(pointer(where, k), "probability must be non-negative");
    row.push_back(v);
  }
  double total = 0.0;
  for (double v : row) total += v;
  if (std::abs(total - 1.0) > Distribution::kSumTolerance) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", total);
    throw ConfigError(where, std::string("probabilities sum to ") + buf + ", expected 1 (normalization error)");
  }
  return row;
}

inline void reject_unknown_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; });
    if (!known) throw ConfigError(pointer(where, key), "unknown key");
  }
}

inline const json& require_key(const json& obj, const std::string& where, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(pointer(where, key), "missing required key");
  return *it;
}

}  // namespace detail

/// Parse and validate a configuration document. Throws ConfigError with a
/// "line L, column C" location for syntax errors and a JSON pointer otherwise.
inline ExperimentConfig parse_config(const std::string& text) {
  using nlohmann::json;
  using namespace detail;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // Recover the line from the byte offset nlohmann reports.
    const std::size_t offset = std::min<std::size_t>(e.byte, text.size());
    const std::size_t line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + offset, '\n'));
    const std::size_t line_start = text.rfind('\n', offset == 0 ? 0 : offset - 1);
    const std::size_t column = line_start == std::string::npos ? offset : offset - line_start - 1;
    throw ConfigError("line " + std::to_string(line) + ", column " + std::to_string(column),
                      "malformed document: " + std::string(e.what()));
  }
  if (!doc.is_object()) throw ConfigError("", "configuration must be a JSON object");
  reject_unknown_keys(doc, "", {"domain", "hypotheses", "distribution", "credal_vertices", "training", "n",
                                "trials", "delta", "eps_grid", "loss", "bound", "seed"});

  ExperimentConfig cfg;

  const json& domain = require_key(doc, "", "domain");
  if (!domain.is_object()) throw ConfigError("/domain", "expected an object");
  reject_unknown_keys(domain, "/domain", {"inputs", "labels"});
  cfg.input_count = read_count(require_key(domain, "/domain", "inputs"), "/domain/inputs", 1);
  cfg.label_count = read_count(require_key(domain, "/domain", "labels"), "/domain/labels", 1);
  const std::size_t outcomes = cfg.input_count * cfg.label_count;

  const json& hyp = require_key(doc, "", "hypotheses");
  if (!hyp.is_object()) throw ConfigError("/hypotheses", "expected an object");
  if (hyp.contains("generator")) {
    reject_unknown_keys(hyp, "/hypotheses", {"generator", "max_size"});
    if (hyp["generator"] != "all_tables")
      throw ConfigError("/hypotheses/generator", "only \"all_tables\" is supported");
    AllTables gen;
    if (hyp.contains("max_size")) gen.max_size = read_count(hyp["max_size"], "/hypotheses/max_size", 1);
    if (gen.max_size > HypothesisClass::kMaxGenerated)
      throw ConfigError("/hypotheses/max_size", "cap may not exceed 4096");
    double count = 1.0;
    for (std::size_t x = 0; x < cfg.input_count; ++x) count *= static_cast<double>(cfg.label_count);
    if (count > static_cast<double>(gen.max_size))
      throw ConfigError("/hypotheses", "all_tables would generate " + std::to_string(cfg.label_count) + "^" +
                                           std::to_string(cfg.input_count) + " hypotheses, above the cap of " +
                                           std::to_string(gen.max_size));
    cfg.hypotheses = gen;
  } else {
    reject_unknown_keys(hyp, "/hypotheses", {"tables"});
    const json& tables = require_key(hyp, "/hypotheses", "tables");
    if (!tables.is_array() || tables.empty()) throw ConfigError("/hypotheses/tables", "expected a non-empty list");
    std::vector<std::vector<std::size_t>> rows;
    std::set<std::vector<std::size_t>> seen;
    for (std::size_t i = 0; i < tables.size(); ++i) {
      const std::string where = pointer("/hypotheses/tables", i);
      if (!tables[i].is_array() || tables[i].size() != cfg.input_count)
        throw ConfigError(where, "expected a list of " + std::to_string(cfg.input_count) + " labels");
      std::vector<std::size_t> row;
      for (std::size_t x = 0; x < tables[i].size(); ++x) {
        const std::size_t label = read_count(tables[i][x], pointer(where, x), 0);
        if (label >= cfg.label_count) throw ConfigError(pointer(where, x), "label out of range");
        row.push_back(label);
      }
      if (!seen.insert(row).second) throw ConfigError(where, "duplicate hypothesis table");
      rows.push_back(std::move(row));
    }
    cfg.hypotheses = std::move(rows);
  }

  const bool has_dist = doc.contains("distribution");
  const bool has_vertices = doc.contains("credal_vertices");
  if (has_dist == has_vertices)
    throw ConfigError("", "exactly one of \"distribution\" (classical) or \"credal_vertices\" (credal) is required");
  if (has_dist) {
    cfg.distribution = read_mass_row(doc["distribution"], "/distribution", outcomes);
    if (doc.contains("training")) throw ConfigError("/training", "training mode applies to credal configs only");
  } else {
    const json& vs = doc["credal_vertices"];
    if (!vs.is_array() || vs.empty()) throw ConfigError("/credal_vertices", "expected a non-empty list of vertices");
    for (std::size_t v = 0; v < vs.size(); ++v)
      cfg.credal_vertices.push_back(read_mass_row(vs[v], pointer("/credal_vertices", v), outcomes));
    if (doc.contains("training")) {
      const json& tr = doc["training"];
      if (!tr.is_object()) throw ConfigError("/training", "expected an object");
      reject_unknown_keys(tr, "/training", {"mode", "vertex"});
      const json& mode = require_key(tr, "/training", "mode");
      if (!mode.is_string()) throw ConfigError("/training/mode", "expected a string");
      const std::string m = mode.get<std::string>();
      static const std::pair<const char*, TrainingModeKind> kModes[] = {
          {"fixed_vertex", TrainingModeKind::fixed_vertex},
          {"uniform_vertex", TrainingModeKind::uniform_vertex},
          {"random_mixture", TrainingModeKind::random_mixture},
          {"oracle_aligned", TrainingModeKind::oracle_aligned},
          {"adversarial", TrainingModeKind::adversarial}};
      const auto it = std::find_if(std::begin(kModes), std::end(kModes), [&](const auto& p) { return m == p.first; });
      if (it == std::end(kModes)) throw ConfigError("/training/mode", "unknown training mode \"" + m + "\"");
      cfg.training.kind = it->second;
      if (cfg.training.kind == TrainingModeKind::fixed_vertex) {
        cfg.training.vertex = read_count(require_key(tr, "/training", "vertex"), "/training/vertex", 0);
        if (cfg.training.vertex >= cfg.credal_vertices.size())
          throw ConfigError("/training/vertex", "vertex index out of range");
      } else if (tr.contains("vertex")) {
        throw ConfigError("/training/vertex", "vertex applies to fixed_vertex mode only");
      }
    }
  }

  cfg.n = read_count(require_key(doc, "", "n"), "/n", 1);
  cfg.trials = read_count(require_key(doc, "", "trials"), "/trials", 1);
  if (doc.contains("delta")) {
    cfg.delta = read_real(doc["delta"], "/delta");
    if (!(cfg.delta > 0.0 && cfg.delta <= 1.0)) throw ConfigError("/delta", "must lie in (0, 1]");
  }

  const json& grid = require_key(doc, "", "eps_grid");
  if (!grid.is_array() || grid.empty()) throw ConfigError("/eps_grid", "expected a non-empty list");
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double e = read_real(grid[k], pointer("/eps_grid", k));
    if (e < 0.0) throw ConfigError(pointer("/eps_grid", k), "must be non-negative");
    if (!cfg.eps_grid.empty() && !(e > cfg.eps_grid.back()))
      throw ConfigError(pointer("/eps_grid", k), "eps_grid must be strictly ascending");
    cfg.eps_grid.push_back(e);
  }

  if (doc.contains("loss")) {
    if (doc["loss"] != "zero_one") throw ConfigError("/loss", "only \"zero_one\" is supported");
  }
  if (doc.contains("bound")) {
    const json& b = doc["bound"];
    if (b == "finite_realisable") cfg.bound = BoundChoice::finite_realisable;
    else if (b == "finite_agnostic") cfg.bound = BoundChoice::finite_agnostic;
    else if (b == "none") cfg.bound = BoundChoice::none;
    else throw ConfigError("/bound", "expected finite_realisable, finite_agnostic or none");
  }
  if (doc.contains("seed")) {
    const json& s = doc["seed"];
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0))
      throw ConfigError("/seed", "expected a non-negative 64-bit integer");
    cfg.seed.master_seed = s.get<std::uint64_t>();
  }
  return cfg;
}

/// Canonical JSON form: every field present, keys sorted.
inline nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["domain"] = {{"inputs", cfg.input_count}, {"labels", cfg.label_count}};
  if (const auto* gen = std::get_if<AllTables>(&cfg.hypotheses))
    j["hypotheses"] = {{"generator", "all_tables"}, {"max_size", gen->max_size}};
  else
    j["hypotheses"] = {{"tables", std::get<std::vector<std::vector<std::size_t>>>(cfg.hypotheses)}};
  if (cfg.credal()) {
    j["credal_vertices"] = cfg.credal_vertices;
    j["training"] = {{"mode", to_string(cfg.training.kind)}};
    if (cfg.training.kind == TrainingModeKind::fixed_vertex) j["training"]["vertex"] = cfg.training.vertex;
  } else {
    j["distribution"] = cfg.distribution;
  }
  j["n"] = cfg.n;
  j["trials"] = cfg.trials;
  j["delta"] = cfg.delta;
  j["eps_grid"] = cfg.eps_grid;
  j["loss"] = cfg.loss;
  j["bound"] = to_string(cfg.bound);
  j["seed"] = cfg.seed.master_seed;
  return j;
}

inline std::string emit_config(const ExperimentConfig& cfg) { return config_to_json(cfg).dump(2) + "\n"; }

/// FNV-1a, 64-bit, rendered as 16 hex digits.
inline std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

/// Digest of the canonical compact form of the configuration.
inline std::string config_digest(const ExperimentConfig& cfg) { return fnv1a_hex(config_to_json(cfg).dump()); }

inline HypothesisClass build_hypothesis_class(const ExperimentConfig& cfg) {
  const DomainSpace domain(cfg.input_count, cfg.label_count);
  if (const auto* gen = std::get_if<AllTables>(&cfg.hypotheses)) return HypothesisClass::all_tables(domain, gen->max_size);
  std::vector<Hypothesis> hs;
  for (const auto& t : std::get<std::vector<std::vector<std::size_t>>>(cfg.hypotheses)) hs.emplace_back(domain, t);
  return HypothesisClass(std::move(hs));
}

/// The classical distribution as a singleton set, or the credal vertices.
inline CredalSet build_credal_set(const ExperimentConfig& cfg) {
  const DomainSpace domain(cfg.input_count, cfg.label_count);
  if (!cfg.credal()) return CredalSet::singleton(Distribution(domain, cfg.distribution));
  std::vector<Distribution> vs;
  for (const auto& row : cfg.credal_vertices) vs.emplace_back(domain, row);
  return CredalSet(std::move(vs));
}

}  // namespace credalpac::harness
