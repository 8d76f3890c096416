// Copyright (c) 2026 The triad authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef TRIAD_RUNNER_HPP
#define TRIAD_RUNNER_HPP

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "triad/closed_form.hpp"
#include "triad/experiments.hpp"
#include "triad/scenario_io.hpp"

namespace triad {

// Exit codes shared by run() and the command-line front end.
inline constexpr int kExitSuccess = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitOracleDisagreement = 2;
inline constexpr int kExitQuadratureFailure = 3;

inline constexpr int kSchemaVersion = 1;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command {
  VerifyTheorem1,
  VerifyTheorem2,
  CompareRules,
  ConjectureScan,
  Simulate,
  OwenTable
};

inline const char* to_string(Command c) {
  switch (c) {
    case Command::VerifyTheorem1: return "verify-theorem1";
    case Command::VerifyTheorem2: return "verify-theorem2";
    case Command::CompareRules: return "compare-rules";
    case Command::ConjectureScan: return "conjecture-scan";
    case Command::Simulate: return "simulate";
    default: return "owen-table";
  }
}

enum class OutputFormat { Json, Csv };

struct ExperimentConfig {
  Command command = Command::VerifyTheorem1;
  std::optional<std::string> scenario_path;
  std::optional<double> epsilon;
  std::optional<double> sigma_x;
  std::optional<double> beta;
  std::uint64_t n = 1'000'000;
  std::uint64_t seed = 1;
  TiePolicy tie_policy = TiePolicy::HalfCredit;
  OutputFormat output_format = OutputFormat::Json;
  std::string output_path = "-";  // "-" writes to stdout
  unsigned threads = 0;           // 0 = all hardware threads
  double tolerance = 1e-6;        // closed form vs quadrature gate
  std::string sweep = "catalog";  // conjecture-scan sweep name
  std::vector<std::string> rules;
  // owen-table grid
  double h_min = 0.0, h_max = 3.0, h_step = 0.5;
  double a_min = 0.0, a_max = 2.0, a_step = 0.25;
};

namespace detail {

using Json = nlohmann::ordered_json;

class CsvBuilder {
 public:
  explicit CsvBuilder(std::vector<std::string> header) {
    out_ += "# schema_version=" + std::to_string(kSchemaVersion) + "\n";
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) out_ += ',';
      out_ += escape(header[i]);
    }
    out_ += '\n';
    columns_ = header.size();
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < columns_; ++i) {
      if (i) out_ += ',';
      if (i < cells.size()) out_ += escape(cells[i]);
    }
    out_ += '\n';
  }

  const std::string& str() const { return out_; }

  static std::string escape(const std::string& cell) {
    if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
    std::string quoted = "\"";
    for (char c : cell) {
      if (c == '"') quoted += "\"\"";
      else quoted += c;
    }
    quoted += '"';
    return quoted;
  }

 private:
  std::string out_;
  std::size_t columns_ = 0;
};

struct Artifact {
  Json json;
  std::string csv;
};

inline std::string real(double x) { return format_real(x); }

inline Json estimate_json(const Estimate& est) {
  return Json{{"value", est.value},
              {"std_error", est.std_error},
              {"n_samples", est.n_samples},
              {"method", to_string(est.method)},
              {"tie_count", est.tie_count}};
}

inline Json config_params_json(const ExperimentConfig& config) {
  // Deliberately excludes the thread count and output path: identical
  // experiments must produce identical artifacts no matter how they are
  // scheduled or where they are written.
  Json params;
  params["n"] = config.n;
  params["seed"] = config.seed;
  params["tie_policy"] = to_string(config.tie_policy);
  params["tolerance"] = config.tolerance;
  if (config.scenario_path) params["scenario_path"] = *config.scenario_path;
  if (config.epsilon) params["epsilon"] = *config.epsilon;
  if (config.sigma_x) params["sigma_x"] = *config.sigma_x;
  if (config.beta) params["beta"] = *config.beta;
  return params;
}

inline Json artifact_envelope(const ExperimentConfig& config) {
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["command"] = to_string(config.command);
  doc["params"] = config_params_json(config);
  return doc;
}

inline Scenario make_gaussian_scenario(const GaussianScenarioParams& p) {
  return Scenario(Density::gaussian(0.0, p.sigma_x * p.sigma_x),
                  Density::gaussian(p.epsilon, p.beta * p.sigma_x * p.sigma_x));
}

/// Gaussian parameters for the closed-form commands, from the scenario file
/// when present, otherwise from the flags (with the stated defaults).
inline GaussianScenarioParams resolve_gaussian_params(const ExperimentConfig& config,
                                                      double default_epsilon,
                                                      double default_beta) {
  GaussianScenarioParams p;
  if (config.scenario_path) {
    const Scenario s = parse_scenario_file(*config.scenario_path);
    const GaussianParams* gx = s.fx().as_gaussian();
    const GaussianParams* gz = s.fz().as_gaussian();
    if (gx == nullptr || gz == nullptr)
      throw UsageError("this command requires a scenario with two gaussian densities");
    p.epsilon = gz->mean - gx->mean;
    p.sigma_x = std::sqrt(gx->variance);
    p.beta = gz->variance / gx->variance;
  } else {
    p.epsilon = config.epsilon.value_or(default_epsilon);
    p.sigma_x = config.sigma_x.value_or(1.0);
    p.beta = config.beta.value_or(default_beta);
  }
  p.validate();
  return p;
}

inline std::vector<Rule> resolve_rules(const std::vector<std::string>& ids,
                                       const std::vector<std::string>& fallback) {
  const auto& names = ids.empty() ? fallback : ids;
  std::vector<Rule> rules;
  rules.reserve(names.size());
  for (const auto& name : names) {
    try {
      rules.push_back(Rule::parse(name));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  return rules;
}

inline const std::vector<std::string>& default_rule_ids() {
  static const std::vector<std::string> ids = {"nearest-neighbor", "cusum",
                                               "max-likelihood",   "linear-kernel",
                                               "gaussian-kernel:1", "poly-kernel:2"};
  return ids;
}

/// The fixed density catalog used by scenario sweeps.
inline std::vector<std::pair<std::string, Density>> density_catalog() {
  std::vector<std::pair<std::string, Density>> cat;
  cat.emplace_back("gaussian(0,1)", Density::gaussian(0.0, 1.0));
  cat.emplace_back("gaussian(1,1)", Density::gaussian(1.0, 1.0));
  cat.emplace_back("gaussian(0.1,0.5)", Density::gaussian(0.1, 0.5));
  cat.emplace_back("gaussian(2,4)", Density::gaussian(2.0, 4.0));
  cat.emplace_back("uniform(0,1)", Density::uniform(0.0, 1.0));
  cat.emplace_back("uniform(-1,2)", Density::uniform(-1.0, 2.0));
  cat.emplace_back("exponential(1,0)", Density::exponential(1.0, 0.0));
  cat.emplace_back("exponential(0.5,-1)", Density::exponential(0.5, -1.0));
  cat.emplace_back("laplace(0,1)", Density::laplace(0.0, 1.0));
  cat.emplace_back("laplace(1,0.5)", Density::laplace(1.0, 0.5));
  cat.emplace_back("bimodal-mixture",
                   Density::gaussian_mixture({{0.5, -2.0, 1.0}, {0.5, 2.0, 1.0}}));
  cat.emplace_back("skew-mixture",
                   Density::gaussian_mixture({{0.3, 0.0, 1.0}, {0.7, 3.0, 0.25}}));
  return cat;
}

inline std::vector<Scenario> sweep_scenarios(const std::string& sweep) {
  std::vector<Scenario> scenarios;
  if (sweep == "catalog") {
    const auto cat = density_catalog();
    for (std::size_t i = 0; i < cat.size(); ++i)
      for (std::size_t j = i + 1; j < cat.size(); ++j)
        scenarios.emplace_back(cat[i].second, cat[j].second);
    // A few identical pairs; the integral must vanish for them.
    scenarios.emplace_back(cat[0].second, cat[0].second);
    scenarios.emplace_back(cat[8].second, cat[8].second);
    scenarios.emplace_back(cat[10].second, cat[10].second);
  } else if (sweep == "gaussian-laplace-grid") {
    for (double loc : {-1.0, -0.5, 0.0, 0.5, 1.0, 2.0})
      for (double scale : {0.5, 1.0, 2.0})
        scenarios.emplace_back(Density::gaussian(0.0, 1.0), Density::laplace(loc, scale));
  } else {
    throw UsageError("unknown sweep '" + sweep + "' (try: catalog, gaussian-laplace-grid)");
  }
  return scenarios;
}

// ---------------------------------------------------------------------------
// verify-theorem1

inline int run_verify_theorem1(const ExperimentConfig& config, std::ostream& diag,
                               Artifact& artifact) {
  std::vector<double> ratios = {0.1, 0.5, 1.0, 2.0, 5.0};
  if (config.epsilon || config.sigma_x || config.scenario_path) {
    const GaussianScenarioParams p = resolve_gaussian_params(config, 1.0, 1.0);
    if (std::fabs(p.beta - 1.0) > 1e-12)
      throw UsageError("verify-theorem1 requires equal variances (beta = 1)");
    ratios = {p.epsilon / p.sigma_x};
  }

  Json rows = Json::array();
  CsvBuilder csv({"epsilon_over_sigma", "closed_form", "quadrature", "monte_carlo",
                  "std_error"});
  bool gate_failed = false;
  const Rule nn = Rule::parse("nearest-neighbor");

  for (std::size_t i = 0; i < ratios.size(); ++i) {
    const double ratio = ratios[i];
    const double cf = theorem1_success(ratio, 1.0);
    const Scenario s = make_gaussian_scenario({ratio, 1.0, 1.0});
    const Estimate quad_x = quad_success_probability(s, Source::FromX, config.tolerance / 10.0);
    const Estimate quad_z = quad_success_probability(s, Source::FromZ, config.tolerance / 10.0);
    const double quad = 0.5 * (quad_x.value + quad_z.value);
    McOptions mc_opts{config.n, config.seed + i, config.tie_policy, config.threads};
    const Estimate mc = mc_success_probability(s, nn, mc_opts);

    const double quad_gap = std::fabs(cf - quad);
    const double mc_gap = std::fabs(cf - mc.value);
    const bool ok = quad_gap <= config.tolerance && mc_gap <= 3.0 * mc.std_error + 1e-12;
    if (!ok) {
      gate_failed = true;
      diag << "verify-theorem1: disagreement at epsilon/sigma=" << ratio << " (|cf-quad|="
           << quad_gap << ", |cf-mc|=" << mc_gap << ", 3se=" << 3.0 * mc.std_error << ")\n";
    }

    rows.push_back(Json{{"epsilon_over_sigma", ratio},
                        {"closed_form", cf},
                        {"quadrature", quad},
                        {"monte_carlo", mc.value},
                        {"std_error", mc.std_error},
                        {"tie_count", mc.tie_count},
                        {"within_tolerance", ok}});
    csv.row({real(ratio), real(cf), real(quad), real(mc.value), real(mc.std_error)});
  }

  artifact.json["results"] = Json{{"rows", rows}, {"all_within_tolerance", !gate_failed}};
  artifact.csv = csv.str();
  return gate_failed ? kExitOracleDisagreement : kExitSuccess;
}

// ---------------------------------------------------------------------------
// verify-theorem2

inline int run_verify_theorem2(const ExperimentConfig& config, std::ostream& diag,
                               Artifact& artifact) {
  const GaussianScenarioParams p = resolve_gaussian_params(config, 0.1, 0.5);
  const Scenario s = make_gaussian_scenario(p);
  const Rule nn = Rule::parse("nearest-neighbor");

  const double cf_star = theorem2_p_star(p);
  const double cf_star_star = theorem2_p_star_star(p);
  const double cf_combined = theorem2_success(p);

  const Estimate quad_star = quad_success_probability(s, Source::FromX, config.tolerance / 10.0);
  const Estimate quad_star_star =
      quad_success_probability(s, Source::FromZ, config.tolerance / 10.0);
  const double quad_combined = 0.5 * (quad_star.value + quad_star_star.value);

  const McOptions base{config.n, config.seed, config.tie_policy, config.threads};
  McOptions opts = base;
  const Estimate mc_star = mc_conditional_success(s, nn, Source::FromX, opts);
  opts.seed = config.seed + 1;
  const Estimate mc_star_star = mc_conditional_success(s, nn, Source::FromZ, opts);
  opts.seed = config.seed + 2;
  const Estimate mc_combined = mc_success_probability(s, nn, opts);

  struct Line {
    const char* name;
    double cf, quad, mc, se;
  };
  const Line lines[] = {
      {"p_star", cf_star, quad_star.value, mc_star.value, mc_star.std_error},
      {"p_star_star", cf_star_star, quad_star_star.value, mc_star_star.value,
       mc_star_star.std_error},
      {"combined", cf_combined, quad_combined, mc_combined.value, mc_combined.std_error}};

  bool gate_failed = false;
  Json results;
  CsvBuilder csv({"record", "beta", "epsilon", "closed_form", "quadrature", "monte_carlo",
                  "std_error"});
  for (const Line& line : lines) {
    const double quad_gap = std::fabs(line.cf - line.quad);
    const double mc_gap = std::fabs(line.cf - line.mc);
    const bool ok = quad_gap <= config.tolerance && mc_gap <= 3.0 * line.se + 1e-12;
    if (!ok) {
      gate_failed = true;
      diag << "verify-theorem2: disagreement on " << line.name << " (|cf-quad|=" << quad_gap
           << ", |cf-mc|=" << mc_gap << ", 3se=" << 3.0 * line.se << ")\n";
    }
    results[line.name] = Json{{"closed_form", line.cf},
                              {"quadrature", line.quad},
                              {"monte_carlo", line.mc},
                              {"std_error", line.se},
                              {"within_tolerance", ok}};
    csv.row({line.name, real(p.beta), real(p.epsilon), real(line.cf), real(line.quad),
             real(line.mc), real(line.se)});
  }

  results["t_script_zero"] =
      Json{{"beta", p.beta}, {"value", t_script_at_zero(p.beta)},
           {"pi_gap", std::numbers::pi - t_script_at_zero(p.beta)}};

  Json curve = Json::array();
  for (int j = 0; j <= 100; ++j) {
    const double beta = std::pow(10.0, -3.0 + 6.0 * j / 100.0);
    const double value = t_script_at_zero(beta);
    curve.push_back(Json{{"beta", beta}, {"value", value}});
    csv.row({"t_script", real(beta), "", real(value), "", "", ""});
  }
  results["t_script_curve"] = curve;
  results["all_within_tolerance"] = !gate_failed;

  artifact.json["results"] = results;
  artifact.csv = csv.str();
  return gate_failed ? kExitOracleDisagreement : kExitSuccess;
}

// ---------------------------------------------------------------------------
// compare-rules

inline int run_compare_rules(const ExperimentConfig& config, std::ostream& diag,
                             Artifact& artifact) {
  (void)diag;
  if (!config.scenario_path) throw UsageError("compare-rules requires --scenario");
  const Scenario s = parse_scenario_file(*config.scenario_path);
  const std::vector<Rule> rules = resolve_rules(config.rules, default_rule_ids());
  if (rules.size() < 2) throw UsageError("compare-rules needs at least two rules");

  const AgreementMatrix matrix =
      rule_agreement_matrix(s, rules, config.n, config.seed, config.threads);
  const auto exemplars =
      find_disagreements(s, rules, std::min<std::uint64_t>(config.n, 100'000), config.seed, 8);

  Json rule_names = Json::array();
  for (const auto& r : rules) rule_names.push_back(r.name());

  Json rows = Json::array();
  CsvBuilder csv({"record", "rule_a", "rule_b", "agreement", "ties_excluded", "x", "y", "z",
                  "verdict_a", "verdict_b"});
  for (std::size_t a = 0; a < rules.size(); ++a) {
    for (std::size_t b = a + 1; b < rules.size(); ++b) {
      rows.push_back(Json{{"rule_a", rules[a].name()},
                          {"rule_b", rules[b].name()},
                          {"agreement", matrix.rate[a][b]},
                          {"ties_excluded", matrix.ties_excluded[a][b]}});
      csv.row({"agreement", rules[a].name(), rules[b].name(), real(matrix.rate[a][b]),
               std::to_string(matrix.ties_excluded[a][b]), "", "", "", "", ""});
    }
  }

  Json disagreements = Json::array();
  for (const auto& d : exemplars) {
    disagreements.push_back(Json{{"x", d.triple.x},
                                 {"y", d.triple.y},
                                 {"z", d.triple.z},
                                 {"true_source", to_string(d.triple.true_source)},
                                 {"rule_a", rules[d.rule_a].name()},
                                 {"rule_b", rules[d.rule_b].name()},
                                 {"verdict_a", to_string(d.verdict_a)},
                                 {"verdict_b", to_string(d.verdict_b)}});
    csv.row({"disagreement", rules[d.rule_a].name(), rules[d.rule_b].name(), "", "",
             real(d.triple.x), real(d.triple.y), real(d.triple.z), to_string(d.verdict_a),
             to_string(d.verdict_b)});
  }

  artifact.json["results"] = Json{{"scenario", format_scenario(s)},
                                  {"rules", rule_names},
                                  {"n", matrix.n},
                                  {"agreement", rows},
                                  {"disagreements", disagreements}};
  artifact.csv = csv.str();
  return kExitSuccess;
}

// ---------------------------------------------------------------------------
// conjecture-scan

inline int run_conjecture_scan(const ExperimentConfig& config, std::ostream& diag,
                               Artifact& artifact) {
  std::vector<Scenario> scenarios;
  if (config.scenario_path) {
    scenarios.push_back(parse_scenario_file(*config.scenario_path));
  } else {
    scenarios = sweep_scenarios(config.sweep);
  }

  const Rule nn = Rule::parse("nearest-neighbor");
  Json rows = Json::array();
  CsvBuilder csv({"fx", "fz", "l1_distance", "integral", "abs_error_bound", "sign_violation",
                  "mc_success", "mc_std_error", "sign_check"});
  bool mismatch = false;
  bool violation = false;

  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    const Scenario& s = scenarios[i];
    const ConjectureResult result = conjecture_integral(s);
    McOptions opts{config.n, config.seed + i, config.tie_policy, config.threads};
    const Estimate mc = mc_success_probability(s, nn, opts);

    const bool integral_resolved = std::fabs(result.integral_value) > result.abs_error_bound;
    const bool mc_resolved = std::fabs(mc.value - 0.5) > 3.0 * mc.std_error;
    std::string sign_check = "unresolved";
    if (integral_resolved && mc_resolved) {
      const bool match = (result.integral_value > 0.0) == (mc.value > 0.5);
      sign_check = match ? "match" : "mismatch";
      if (!match) {
        mismatch = true;
        diag << "conjecture-scan: sign mismatch for fx=" << s.fx().describe()
             << " fz=" << s.fz().describe() << " (integral=" << result.integral_value
             << ", mc=" << mc.value << ")\n";
      }
    }
    if (result.sign_violation) {
      violation = true;
      diag << "conjecture-scan: FINDING sign violation for fx=" << s.fx().describe()
           << " fz=" << s.fz().describe() << " (integral=" << result.integral_value
           << ", bound=" << result.abs_error_bound << ")\n";
    }

    rows.push_back(Json{{"fx", s.fx().describe()},
                        {"fz", s.fz().describe()},
                        {"l1_distance", s.l1_distance()},
                        {"degenerate", s.degenerate()},
                        {"integral", result.integral_value},
                        {"abs_error_bound", result.abs_error_bound},
                        {"sign_violation", result.sign_violation},
                        {"mc_success", mc.value},
                        {"mc_std_error", mc.std_error},
                        {"sign_check", sign_check}});
    csv.row({s.fx().describe(), s.fz().describe(), real(s.l1_distance()),
             real(result.integral_value), real(result.abs_error_bound),
             result.sign_violation ? "true" : "false", real(mc.value), real(mc.std_error),
             sign_check});
  }

  artifact.json["results"] = Json{{"rows", rows},
                                  {"sign_violations", violation},
                                  {"sign_mismatches", mismatch}};
  artifact.csv = csv.str();
  return mismatch ? kExitOracleDisagreement : kExitSuccess;
}

// ---------------------------------------------------------------------------
// simulate

inline int run_simulate(const ExperimentConfig& config, std::ostream& diag, Artifact& artifact) {
  (void)diag;
  if (!config.scenario_path) throw UsageError("simulate requires --scenario");
  const Scenario s = parse_scenario_file(*config.scenario_path);
  const std::vector<Rule> rules = resolve_rules(config.rules, default_rule_ids());

  std::vector<std::string> header = {"record", "x", "y", "z", "true_source", "w", "fx_pdf",
                                     "fz_pdf"};
  for (const auto& r : rules) header.push_back(r.name());
  CsvBuilder csv(header);

  Json triples = Json::array();
  const std::uint64_t n_chunks = (config.n + kMcChunkSize - 1) / kMcChunkSize;
  std::uint64_t remaining = config.n;
  for (std::uint64_t c = 0; c < n_chunks; ++c) {
    RngStream rng(config.seed, c);
    const std::uint64_t count = std::min(kMcChunkSize, remaining);
    remaining -= count;
    for (std::uint64_t i = 0; i < count; ++i) {
      const Triple t = sample_triple(s, rng);
      Json verdicts;
      std::vector<std::string> cells = {"triple", real(t.x), real(t.y), real(t.z),
                                        to_string(t.true_source), "", "", ""};
      for (const auto& r : rules) {
        const Verdict v = r.apply(t, s);
        verdicts[r.name()] = to_string(v);
        cells.push_back(to_string(v));
      }
      triples.push_back(Json{{"x", t.x},
                             {"y", t.y},
                             {"z", t.z},
                             {"true_source", to_string(t.true_source)},
                             {"verdicts", verdicts}});
      csv.row(cells);
    }
  }

  // Density curves over the joint effective support; plot-ready columns.
  const double lo = std::min(s.fx().quantile(1e-3), s.fz().quantile(1e-3));
  const double hi = std::max(s.fx().quantile(1.0 - 1e-3), s.fz().quantile(1.0 - 1e-3));
  Json curve = Json::array();
  for (int j = 0; j <= 200; ++j) {
    const double w = lo + (hi - lo) * j / 200.0;
    curve.push_back(Json{{"w", w}, {"fx_pdf", s.fx().pdf(w)}, {"fz_pdf", s.fz().pdf(w)}});
    csv.row({"density", "", "", "", "", real(w), real(s.fx().pdf(w)), real(s.fz().pdf(w))});
  }

  artifact.json["results"] = Json{{"scenario", format_scenario(s)},
                                  {"triples", triples},
                                  {"density_curve", curve}};
  artifact.csv = csv.str();
  return kExitSuccess;
}

// ---------------------------------------------------------------------------
// owen-table

inline int run_owen_table(const ExperimentConfig& config, std::ostream& diag,
                          Artifact& artifact) {
  (void)diag;
  if (!(config.h_step > 0.0) || !(config.a_step > 0.0))
    throw UsageError("owen-table: grid steps must be positive");
  Json rows = Json::array();
  CsvBuilder csv({"h", "a", "t"});
  for (double h = config.h_min; h <= config.h_max + 1e-12; h += config.h_step) {
    for (double a = config.a_min; a <= config.a_max + 1e-12; a += config.a_step) {
      const double t = owen_t(h, a);
      rows.push_back(Json{{"h", h}, {"a", a}, {"t", t}});
      csv.row({real(h), real(a), real(t)});
    }
  }
  artifact.json["results"] = Json{{"rows", rows}};
  artifact.csv = csv.str();
  return kExitSuccess;
}

inline void write_artifact(const ExperimentConfig& config, const Artifact& artifact) {
  std::string payload;
  if (config.output_format == OutputFormat::Json) {
    payload = artifact.json.dump(2);
    payload += '\n';
  } else {
    payload = artifact.csv;
  }
  if (config.output_path == "-") {
    std::cout << payload;
    std::cout.flush();
    return;
  }
  std::ofstream out(config.output_path, std::ios::binary);
  if (!out) throw UsageError("cannot open output path '" + config.output_path + "'");
  out << payload;
  if (!out) throw UsageError("failed writing output to '" + config.output_path + "'");
}

inline int run_impl(const ExperimentConfig& config, std::ostream& diag) {
  if (config.n < 1) throw UsageError("--n must be >= 1");
  if (!(config.tolerance > 0.0)) throw UsageError("--tolerance must be > 0");

  Artifact artifact;
  artifact.json = artifact_envelope(config);
  int code = kExitSuccess;
  switch (config.command) {
    case Command::VerifyTheorem1: code = run_verify_theorem1(config, diag, artifact); break;
    case Command::VerifyTheorem2: code = run_verify_theorem2(config, diag, artifact); break;
    case Command::CompareRules: code = run_compare_rules(config, diag, artifact); break;
    case Command::ConjectureScan: code = run_conjecture_scan(config, diag, artifact); break;
    case Command::Simulate: code = run_simulate(config, diag, artifact); break;
    case Command::OwenTable: code = run_owen_table(config, diag, artifact); break;
  }
  write_artifact(config, artifact);
  return code;
}

}  // namespace detail

/// Run one experiment end to end: dispatch on the command, write the artifact
/// to the configured path, and map failures onto the documented exit codes
/// (0 ok, 1 usage/parse, 2 oracle disagreement, 3 quadrature failure).
inline int run(const ExperimentConfig& config, std::ostream& diag = std::cerr) {
  try {
    return detail::run_impl(config, diag);
  } catch (const UsageError& e) {
    diag << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ScenarioParseError& e) {
    diag << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const QuadratureError& e) {
    diag << "error: " << e.what() << "\n";
    return kExitQuadratureFailure;
  } catch (const std::invalid_argument& e) {
    diag << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace triad

#endif  // TRIAD_RUNNER_HPP
