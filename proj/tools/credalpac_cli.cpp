// credalpac command-line harness.
//
//   credalpac run CONFIG                 Monte Carlo violation report
//   credalpac bounds --class-size ...    closed-form epsilons and tails
//   credalpac rademacher CONFIG          exact / Monte Carlo Rademacher complexity
//   credalpac check-realisability CONFIG credal realisability report
//
// Exit status: 0 success, 1 validation error, 2 a bound violated beyond slack.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "credalpac/credalpac.hpp"

namespace {

using namespace credalpac;
using namespace credalpac::harness;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitViolation = 2;

struct CommonOptions {
  std::optional<std::uint64_t> seed;
  std::size_t threads = 1;
  std::string format = "json";
  std::string out;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--seed", opts.seed, "Master seed (overrides the config)");
  cmd->add_option("--threads", opts.threads, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--format", opts.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--out", opts.out, "Write output to PATH instead of stdout");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig load_config(const std::string& path, const CommonOptions& opts) {
  ExperimentConfig cfg = parse_config(read_file(path));
  if (opts.seed) cfg.seed.master_seed = *opts.seed;
  return cfg;
}

void write_output(const std::string& text, const CommonOptions& opts) {
  if (opts.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(opts.out, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + opts.out + "'");
  out << text;
}

ReportFormat format_of(const CommonOptions& opts) {
  return opts.format == "csv" ? ReportFormat::csv : ReportFormat::json;
}

int cmd_run(const std::string& path, const CommonOptions& opts, bool timing) {
  const ExperimentConfig cfg = load_config(path, opts);
  const ViolationReport report = estimate_violation_probability(cfg, opts.threads);
  write_output(emit_report(report, format_of(opts), timing), opts);
  std::cerr << "run: " << report.trials << " trials in " << report.wall_time_seconds << " s\n";
  return report.any_violation() ? kExitViolation : kExitOk;
}

struct BoundsOptions {
  double class_size = 1.0;
  double delta = 0.05;
  std::size_t n = 1;
  std::optional<double> eps;
  std::optional<double> rademacher;
};

int cmd_bounds(const BoundsOptions& b, const CommonOptions& opts) {
  nlohmann::json j;
  j["class_size"] = b.class_size;
  j["delta"] = b.delta;
  j["n"] = b.n;
  const double n = static_cast<double>(b.n);
  j["eps_finite_realisable"] = eps_finite_realisable(b.class_size, b.delta, n);
  j["eps_finite_agnostic"] = eps_finite_agnostic(b.class_size, b.delta, n);
  if (b.rademacher) {
    j["rademacher"] = *b.rademacher;
    j["eps_rademacher"] = eps_rademacher(*b.rademacher, b.delta, n);
  }
  if (b.eps) {
    const std::vector<double> widths(b.n, 1.0);
    j["eps"] = *b.eps;
    j["sample_complexity_realisable"] = sample_complexity_realisable(b.class_size, b.delta, *b.eps);
    j["hoeffding_tail"] = hoeffding_tail(b.n, *b.eps, widths).raw_value;
    j["gn_tail"] = gn_tail(b.n, *b.eps).raw_value;
    j["realisable_tail"] = realisable_tail(b.class_size, b.n, *b.eps).raw_value;
    j["agnostic_tail"] = agnostic_tail(b.class_size, b.n, *b.eps).raw_value;
  }
  if (opts.format == "csv") {
    std::string text = "quantity,value\n";
    for (const auto& [key, value] : j.items())
      text += key + "," + format_double(value.get<double>()) + "\n";
    write_output(text, opts);
  } else {
    write_output(j.dump(2) + "\n", opts);
  }
  return kExitOk;
}

struct RademacherOptions {
  std::size_t draws = 100000;
  std::size_t datasets = 20;
  std::size_t vertex = 0;
};

int cmd_rademacher(const std::string& path, const RademacherOptions& r, const CommonOptions& opts) {
  const ExperimentConfig cfg = load_config(path, opts);
  const HypothesisClass H = build_hypothesis_class(cfg);
  const CredalSet P = build_credal_set(cfg);
  if (r.vertex >= P.size()) throw ConfigError("--vertex", "vertex index out of range");
  const LossClass A(H, LossFunction::zero_one());
  const Dataset d = sample_dataset(P[r.vertex], cfg.n, cfg.seed.derive(0));

  nlohmann::json j;
  j["n"] = cfg.n;
  j["class_size"] = H.size();
  j["vertex"] = r.vertex;
  if (cfg.n <= kExactRademacherMaxN) j["empirical_exact"] = rademacher_to_json(empirical_rademacher_exact(A, d));
  j["empirical_monte_carlo"] = rademacher_to_json(empirical_rademacher_mc(A, d, r.draws, cfg.seed.derive(1)));
  const RademacherEstimate rn = rademacher_complexity(A, P[r.vertex], cfg.n, r.datasets, r.draws, cfg.seed.derive(2));
  j["expected"] = rademacher_to_json(rn);
  if (cfg.delta < 1.0) j["eps_rademacher"] = eps_rademacher(rn.value, cfg.delta, static_cast<double>(cfg.n));

  if (opts.format == "csv") {
    std::string text = "estimate,method,value,std_error,sample_count\n";
    for (const char* key : {"empirical_exact", "empirical_monte_carlo", "expected"}) {
      if (!j.contains(key)) continue;
      const auto& e = j[key];
      text += std::string(key) + "," + e["method"].get<std::string>() + "," + format_double(e["value"].get<double>()) +
              "," + format_double(e["std_error"].get<double>()) + "," + std::to_string(e["sample_count"].get<std::uint64_t>()) +
              "\n";
    }
    write_output(text, opts);
  } else {
    write_output(j.dump(2) + "\n", opts);
  }
  return kExitOk;
}

int cmd_check(const std::string& path, double tol, const CommonOptions& opts) {
  const ExperimentConfig cfg = load_config(path, opts);
  const RealisabilityReport rep = realisability_report(build_hypothesis_class(cfg), build_credal_set(cfg), tol);
  write_output(opts.format == "csv" ? realisability_to_csv(rep) : realisability_to_json(rep).dump(2) + "\n", opts);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-class PAC bounds, Rademacher complexity and credal realisability experiments"};
  app.require_subcommand(1);

  CommonOptions common;
  std::string config_path;

  auto* run = app.add_subcommand("run", "Estimate bound-violation frequencies for a config");
  bool timing = false;
  run->add_option("config", config_path, "Experiment config (JSON)")->required();
  run->add_flag("--timing", timing, "Include wall time in the JSON report");
  add_common(run, common);

  auto* bounds = app.add_subcommand("bounds", "Print closed-form epsilons and tail bounds");
  BoundsOptions bopts;
  bounds->add_option("--class-size", bopts.class_size, "|H|")->check(CLI::Range(1.0, 1e300));
  bounds->add_option("--delta", bopts.delta, "Confidence parameter");
  bounds->add_option("--n", bopts.n, "Sample size")->check(CLI::PositiveNumber);
  bounds->add_option("--eps", bopts.eps, "Threshold for tails and sample complexity");
  bounds->add_option("--rademacher", bopts.rademacher, "Rademacher complexity for the Rademacher epsilon");
  add_common(bounds, common);

  auto* rad = app.add_subcommand("rademacher", "Rademacher complexity of a config's loss class");
  RademacherOptions ropts;
  rad->add_option("config", config_path, "Experiment config (JSON)")->required();
  rad->add_option("--draws", ropts.draws, "Sign vectors per Monte Carlo estimate")->check(CLI::PositiveNumber);
  rad->add_option("--datasets", ropts.datasets, "Datasets averaged for R_n")->check(CLI::PositiveNumber);
  rad->add_option("--vertex", ropts.vertex, "Credal vertex to sample from");
  add_common(rad, common);

  auto* check = app.add_subcommand("check-realisability", "Credal and uniform credal realisability");
  double tol = 1e-9;
  check->add_option("config", config_path, "Experiment config (JSON)")->required();
  check->add_option("--tol", tol, "Zero-risk tolerance");
  add_common(check, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*run) return cmd_run(config_path, common, timing);
    if (*bounds) return cmd_bounds(bopts, common);
    if (*rad) return cmd_rademacher(config_path, ropts, common);
    if (*check) return cmd_check(config_path, tol, common);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::length_error& e) {
    std::cerr << "size limit: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitOk;
}
