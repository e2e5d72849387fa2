#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "credalpac/harness/config.hpp"
#include "credalpac/harness/report.hpp"
#include "fixtures.hpp"

using namespace credalpac;
using namespace credalpac::harness;

namespace {

ExperimentConfig small_config() {
  return parse_config(R"({
    "domain": {"inputs": 3, "labels": 2},
    "hypotheses": {"generator": "all_tables"},
    "credal_vertices": [[0.2, 0.1, 0.1, 0.2, 0.3, 0.1], [0.05, 0.25, 0.3, 0.05, 0.1, 0.25]],
    "training": {"mode": "random_mixture"},
    "n": 12, "trials": 700, "delta": 0.1,
    "eps_grid": [0.1, 0.3333333333333333, 0.7],
    "bound": "finite_agnostic", "seed": 5})");
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("format_double round-trips", "[report]") {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 2000; ++i) {
    const double v = u(gen) / (1 + gen() % 1000);
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(1.0) == "1");
}

TEST_CASE("csv layout", "[report]") {
  ViolationReport rep;
  rep.rows = {ViolationRow{0.25, 0.125, 0.01, 0.5, 0.5, 0.0, Verdict::consistent}};
  const auto lines = lines_of(report_to_csv(rep));
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "eps,frequency,std_error,analytic_bound,verdict");
  CHECK(lines[1] == "0.25,0.125,0.01,0.5,consistent");
}

TEST_CASE("report documents", "[report]") {
  const ExperimentConfig cfg = small_config();
  const ViolationReport rep = estimate_violation_probability(cfg, 3);
  const nlohmann::json j = nlohmann::json::parse(emit_report(rep, ReportFormat::json));

  CHECK(j["config_digest"] == config_digest(cfg));
  CHECK(j["config_digest"] == config_digest(parse_config(emit_config(cfg))));
  CHECK(j["statistic"] == "excess_risk");
  CHECK(j["training_mode"] == "random_mixture");
  CHECK(j["evidence"] == "empirical");
  CHECK_FALSE(j.contains("wall_time_seconds"));
  CHECK(report_to_json(rep, true).contains("wall_time_seconds"));
  REQUIRE(j["rows"].size() == rep.rows.size());
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    CHECK(j["rows"][i]["eps"].get<double>() == rep.rows[i].eps);
    CHECK(j["rows"][i]["frequency"].get<double>() == rep.rows[i].frequency);
    CHECK(j["rows"][i]["std_error"].get<double>() == rep.rows[i].std_error);
    CHECK(j["rows"][i]["analytic_bound_raw"].get<double>() == rep.rows[i].analytic_bound_raw);
  }

  const auto lines = lines_of(emit_report(rep, ReportFormat::csv));
  REQUIRE(lines.size() == rep.rows.size() + 1);
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    std::istringstream row(lines[i + 1]);
    std::string field;
    std::getline(row, field, ',');
    CHECK(std::stod(field) == rep.rows[i].eps);
    std::getline(row, field, ',');
    CHECK(std::stod(field) == rep.rows[i].frequency);
    std::getline(row, field, ',');
    CHECK(std::stod(field) == rep.rows[i].std_error);
    std::getline(row, field, ',');
    CHECK(std::stod(field) == rep.rows[i].analytic_bound);
  }

  // Same config, different thread count, identical bytes.
  CHECK(emit_report(rep, ReportFormat::json) == emit_report(estimate_violation_probability(cfg, 1), ReportFormat::json));
}

TEST_CASE("realisability and rademacher documents", "[report]") {
  using namespace fixtures;
  const RealisabilityReport r =
      realisability_report(HypothesisClass({h_id(), h_neg()}), CredalSet({p_det(), p_flip()}), 1e-9);
  const nlohmann::json j = realisability_to_json(r);
  CHECK(j["credal_realisable"] == true);
  CHECK(j["uniform_credal_realisable"] == false);
  CHECK(j["vertexwise_realisable"] == true);
  CHECK(j["support_union"] == std::vector<std::size_t>{0, 1, 2, 3});
  CHECK(lines_of(realisability_to_csv(r)).size() == 3);

  const RademacherEstimate e{0.25, 0.0, RademacherEstimate::Method::exact, 4, 16};
  CHECK(rademacher_to_json(e)["method"] == "exact");
  CHECK(rademacher_to_json(e)["value"].get<double>() == 0.25);
}
