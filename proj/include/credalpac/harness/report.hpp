#pragma once

// ViolationReport / RealisabilityReport emission. Numbers are written in the
// shortest decimal form that parses back to the same double.

#include <charconv>
#include <sstream>
#include <string>
#include <system_error>

#include <json.hpp>

#include "credalpac/complexity.hpp"
#include "credalpac/credal.hpp"
#include "credalpac/harness/experiment.hpp"

namespace credalpac::harness {

enum class ReportFormat { json, csv };

/// Shortest round-trip decimal representation.
inline std::string format_double(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw std::runtime_error("format_double failed");
  return std::string(buf, end);
}

inline nlohmann::json report_to_json(const ViolationReport& r, bool include_timing = false) {
  nlohmann::json j;
  j["config_digest"] = r.config_digest;
  j["seed"] = r.seed;
  j["regime"] = r.regime;
  if (!r.training_mode.empty()) j["training_mode"] = r.training_mode;
  j["statistic"] = r.statistic;
  j["bound"] = r.bound;
  j["trials"] = r.trials;
  j["n"] = r.n;
  j["class_size"] = r.class_size;
  j["vertex_count"] = r.vertex_count;
  j["delta"] = r.delta;
  j["slack_std_errors"] = kSlackSE;
  j["max_erm_empirical_risk"] = r.max_erm_empirical_risk;
  j["mean_test_risk"] = r.mean_test_risk;
  j["mean_worst_case_risk"] = r.mean_worst_case_risk;
  j["evidence"] = "empirical";
  auto& rows = j["rows"] = nlohmann::json::array();
  for (const ViolationRow& row : r.rows) {
    rows.push_back({{"eps", row.eps},
                    {"frequency", row.frequency},
                    {"std_error", row.std_error},
                    {"analytic_bound", row.analytic_bound},
                    {"analytic_bound_raw", row.analytic_bound_raw},
                    {"classical_frequency", row.classical_frequency},
                    {"verdict", to_string(row.verdict)}});
  }
  j["calibration"] = {{"delta", r.calibration.delta}, {"status", to_string(r.calibration.status)}};
  j["calibration"]["eps"] = r.calibration.eps ? nlohmann::json(*r.calibration.eps) : nlohmann::json(nullptr);
  if (include_timing) j["wall_time_seconds"] = r.wall_time_seconds;
  return j;
}

inline std::string report_to_csv(const ViolationReport& r) {
  std::ostringstream out;
  out << "eps,frequency,std_error,analytic_bound,verdict\n";
  for (const ViolationRow& row : r.rows)
    out << format_double(row.eps) << ',' << format_double(row.frequency) << ',' << format_double(row.std_error)
        << ',' << format_double(row.analytic_bound) << ',' << to_string(row.verdict) << '\n';
  return out.str();
}

inline std::string emit_report(const ViolationReport& r, ReportFormat format, bool include_timing = false) {
  if (format == ReportFormat::csv) return report_to_csv(r);
  return report_to_json(r, include_timing).dump(2) + "\n";
}

inline nlohmann::json realisability_to_json(const RealisabilityReport& r) {
  nlohmann::json j;
  j["credal_realisable"] = r.credal_realisable;
  j["uniform_credal_realisable"] = r.uniform_credal_realisable;
  j["vertexwise_realisable"] = r.vertexwise_realisable;
  j["tolerance"] = r.tolerance;
  auto& w = j["witnesses"] = nlohmann::json::array();
  for (const Witness& x : r.witnesses) w.push_back({{"hypothesis", x.hypothesis}, {"vertex", x.vertex}, {"risk", x.risk}});
  j["uniform_witnesses"] = r.uniform_witnesses;
  auto& pv = j["per_vertex"] = nlohmann::json::array();
  for (const VertexMinimiser& m : r.per_vertex)
    pv.push_back({{"vertex", m.vertex}, {"hypothesis", m.hypothesis}, {"risk", m.risk}});
  j["support_union"] = r.support;
  auto& dup = j["duplicate_vertices"] = nlohmann::json::array();
  for (const auto& [a, b] : r.duplicate_vertices) dup.push_back({a, b});
  return j;
}

inline std::string realisability_to_csv(const RealisabilityReport& r) {
  std::ostringstream out;
  out << "vertex,hypothesis,risk\n";
  for (const VertexMinimiser& m : r.per_vertex)
    out << m.vertex << ',' << m.hypothesis << ',' << format_double(m.risk) << '\n';
  return out.str();
}

inline std::string to_string(RademacherEstimate::Method m) {
  return m == RademacherEstimate::Method::exact ? "exact" : "monte_carlo";
}

inline nlohmann::json rademacher_to_json(const RademacherEstimate& e) {
  return {{"value", e.value},
          {"std_error", e.std_error},
          {"method", to_string(e.method)},
          {"n", e.n},
          {"sample_count", e.sample_count}};
}

}  // namespace credalpac::harness
