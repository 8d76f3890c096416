// Copyright (c) 2026 The triad authors.
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: one experiment per invocation, machine-readable
// JSON or CSV artifacts, deterministic for a fixed seed.

#include <map>
#include <string>

#include "CLI11.hpp"
#include "triad/runner.hpp"

namespace {

void add_common_options(CLI::App* sub, triad::ExperimentConfig& config) {
  sub->add_option("--n", config.n, "Number of Monte Carlo samples")->capture_default_str();
  sub->add_option("--seed", config.seed, "Base seed for all random streams")
      ->capture_default_str();
  const std::map<std::string, triad::TiePolicy> tie_map{
      {"half-credit", triad::TiePolicy::HalfCredit}, {"exclude", triad::TiePolicy::Exclude}};
  sub->add_option("--tie-policy", config.tie_policy,
                  "How exact ties count toward success (half-credit|exclude)")
      ->transform(CLI::CheckedTransformer(tie_map, CLI::ignore_case))
      ->default_str("half-credit");
  const std::map<std::string, triad::OutputFormat> format_map{
      {"json", triad::OutputFormat::Json}, {"csv", triad::OutputFormat::Csv}};
  sub->add_option("--output-format", config.output_format, "Artifact format (json|csv)")
      ->transform(CLI::CheckedTransformer(format_map, CLI::ignore_case))
      ->default_str("json");
  sub->add_option("--output", config.output_path, "Output path ('-' = stdout)")
      ->capture_default_str();
  sub->add_option("--threads", config.threads,
                  "Worker threads for Monte Carlo (0 = all cores); results do not depend on it")
      ->capture_default_str();
  sub->add_option("--tolerance", config.tolerance,
                  "Allowed |closed form - quadrature| before exiting with code 2")
      ->capture_default_str();
}

void add_scenario_option(CLI::App* sub, triad::ExperimentConfig& config) {
  sub->add_option_function<std::string>(
         "--scenario", [&config](const std::string& path) { config.scenario_path = path; },
         "Scenario file (keys fx/fz, e.g. fx = gaussian(mean=0, var=1))")
      ->check(CLI::ExistingFile);
}

void add_gaussian_options(CLI::App* sub, triad::ExperimentConfig& config) {
  sub->add_option_function<double>(
      "--epsilon", [&config](double v) { config.epsilon = v; }, "Mean gap of the two components");
  sub->add_option_function<double>(
      "--sigma-x", [&config](double v) { config.sigma_x = v; },
      "Standard deviation of the first component (default 1)");
  sub->add_option_function<double>(
      "--beta", [&config](double v) { config.beta = v; }, "Variance ratio var_z / var_x");
}

void add_rules_option(CLI::App* sub, triad::ExperimentConfig& config) {
  sub->add_option("--rules", config.rules,
                  "Comma-separated rule list (nearest-neighbor, bayes, mean-distance, cusum, "
                  "max-likelihood, linear-kernel, gaussian-kernel[:bw], poly-kernel[:degree])")
      ->delimiter(',');
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "triad - nearest-neighbor attribution of the middle of three points drawn from a pair of "
      "distributions: exact success probabilities, independent oracles, and stress tests"};
  app.require_subcommand(1);

  triad::ExperimentConfig config;

  auto* t1 = app.add_subcommand(
      "verify-theorem1",
      "Cross-check the equal-variance success formula against quadrature and Monte Carlo over a "
      "grid of mean gaps (or one --epsilon/--sigma-x point)");
  add_common_options(t1, config);
  add_scenario_option(t1, config);
  add_gaussian_options(t1, config);
  t1->callback([&config] { config.command = triad::Command::VerifyTheorem1; });

  auto* t2 = app.add_subcommand(
      "verify-theorem2",
      "Cross-check the unequal-variance conditional success formulas (defaults: --epsilon 0.1 "
      "--sigma-x 1 --beta 0.5) and emit the four-arctangent envelope curve");
  add_common_options(t2, config);
  add_scenario_option(t2, config);
  add_gaussian_options(t2, config);
  t2->callback([&config] { config.command = triad::Command::VerifyTheorem2; });

  auto* cmp = app.add_subcommand("compare-rules",
                                 "Pairwise agreement matrix of decision rules over sampled "
                                 "triples, with disagreement exemplars");
  add_common_options(cmp, config);
  add_scenario_option(cmp, config);
  add_rules_option(cmp, config);
  cmp->callback([&config] { config.command = triad::Command::CompareRules; });

  auto* scan = app.add_subcommand("conjecture-scan",
                                  "Evaluate the signed-cdf-gap double integral over a scenario "
                                  "sweep and cross-check its sign against Monte Carlo");
  add_common_options(scan, config);
  add_scenario_option(scan, config);
  scan->add_option("--sweep", config.sweep, "Sweep name (catalog|gaussian-laplace-grid)")
      ->capture_default_str();
  scan->callback([&config] { config.command = triad::Command::ConjectureScan; });

  auto* sim = app.add_subcommand(
      "simulate", "Emit raw per-triple records (x, y, z, true source, rule verdicts) plus "
                  "plot-ready density curves");
  add_common_options(sim, config);
  add_scenario_option(sim, config);
  add_rules_option(sim, config);
  sim->callback([&config] { config.command = triad::Command::Simulate; });

  auto* table = app.add_subcommand("owen-table", "Tabulate Owen's T function over an (h, a) grid");
  add_common_options(table, config);
  table->add_option("--h-min", config.h_min)->capture_default_str();
  table->add_option("--h-max", config.h_max)->capture_default_str();
  table->add_option("--h-step", config.h_step)->capture_default_str();
  table->add_option("--a-min", config.a_min)->capture_default_str();
  table->add_option("--a-max", config.a_max)->capture_default_str();
  table->add_option("--a-step", config.a_step)->capture_default_str();
  table->callback([&config] { config.command = triad::Command::OwenTable; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return triad::kExitUsage;
  }

  return triad::run(config);
}
