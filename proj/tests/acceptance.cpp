// Copyright (c) 2026 The triad authors.
// SPDX-License-Identifier: Apache-2.0
//
// End-to-end acceptance suite. Each criterion prints exactly one PASS/FAIL
// line; the binary exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "triad/closed_form.hpp"
#include "triad/experiments.hpp"
#include "triad/runner.hpp"

using namespace triad;
namespace fs = std::filesystem;

namespace {

bool g_all_pass = true;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::printf("CRITERION %d (%s): %s%s%s\n", id, name.c_str(), pass ? "PASS" : "FAIL",
              detail.empty() ? "" : " - ", detail.c_str());
  std::fflush(stdout);
  if (!pass) g_all_pass = false;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

Scenario gaussian_scenario(double epsilon, double sigma_x, double beta) {
  return Scenario(Density::gaussian(0.0, sigma_x * sigma_x),
                  Density::gaussian(epsilon, beta * sigma_x * sigma_x));
}

const Rule kNn = Rule::parse("nearest-neighbor");
constexpr std::uint64_t kBigN = 10'000'000;
constexpr std::uint64_t kBaseSeed = 20260809;

// --------------------------------------------------------------------------
// 1. Equal-variance triangulation: closed form vs quadrature vs Monte Carlo.

void criterion_1() {
  const auto start = std::chrono::steady_clock::now();
  double worst_quad_gap = 0.0, worst_mc_sigma = 0.0;
  bool pass = true;
  int index = 0;
  for (double ratio : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    const double cf = theorem1_success(ratio, 1.0);
    const Scenario s = gaussian_scenario(ratio, 1.0, 1.0);
    const double quad = 0.5 * (quad_success_probability(s, Source::FromX).value +
                               quad_success_probability(s, Source::FromZ).value);
    const Estimate mc =
        mc_success_probability(s, kNn, {kBigN, kBaseSeed + index++, TiePolicy::HalfCredit, 0});
    const double quad_gap = std::fabs(cf - quad);
    const double mc_sigma = std::fabs(cf - mc.value) / mc.std_error;
    worst_quad_gap = std::max(worst_quad_gap, quad_gap);
    worst_mc_sigma = std::max(worst_mc_sigma, mc_sigma);
    if (quad_gap >= 1e-6 || mc_sigma >= 3.0) pass = false;
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (seconds >= 120.0) pass = false;
  report(1, "equal-variance triangulation", pass,
         "max |cf-quad|=" + fmt(worst_quad_gap) + ", max |cf-mc|/se=" + fmt(worst_mc_sigma) +
             ", runtime=" + fmt(seconds) + "s");
}

// --------------------------------------------------------------------------
// 2. The asymmetric pair where one conditional success drops to ~44.5%.

void criterion_2() {
  const GaussianScenarioParams params{0.1, 1.0, 0.5};
  const Scenario s = gaussian_scenario(0.1, 1.0, 0.5);
  const double cf = theorem2_p_star(params);
  const Estimate mc = mc_conditional_success(s, kNn, Source::FromX,
                                             {kBigN, kBaseSeed + 10, TiePolicy::HalfCredit, 0});
  const double combined_cf = theorem2_success(params);
  const Estimate combined_mc =
      mc_success_probability(s, kNn, {kBigN, kBaseSeed + 11, TiePolicy::HalfCredit, 0});

  const bool pass = std::fabs(cf - 0.445) < 0.005 && std::fabs(mc.value - 0.445) < 0.005 &&
                    combined_cf > 0.5 && combined_mc.value - 3.0 * combined_mc.std_error > 0.5;
  report(2, "asymmetric conditional success ~44.5%", pass,
         "cf=" + fmt(cf) + ", mc=" + fmt(mc.value) + ", combined cf=" + fmt(combined_cf) +
             ", combined mc=" + fmt(combined_mc.value));
}

// --------------------------------------------------------------------------
// 3. The arctangent envelope: equals pi at beta=1, below pi elsewhere.

void criterion_3() {
  bool pass = std::fabs(t_script_at_zero(1.0) - std::numbers::pi) < 1e-12;

  std::vector<double> betas, values;
  for (int k = 0; k < 200; ++k) {
    const double beta = std::pow(10.0, -3.0 + 6.0 * k / 199.0);
    betas.push_back(beta);
    values.push_back(t_script_at_zero(beta));
    if (values.back() >= std::numbers::pi) pass = false;
  }
  std::size_t argmax = 0;
  std::size_t nearest = 0;
  for (std::size_t k = 1; k < betas.size(); ++k) {
    if (values[k] > values[argmax]) argmax = k;
    if (std::fabs(std::log(betas[k])) < std::fabs(std::log(betas[nearest]))) nearest = k;
  }
  // the grid brackets beta=1 symmetrically, so the two central points are
  // equally near; either is acceptable as the peak
  const bool at_peak = std::fabs(std::log(betas[argmax])) <=
                       std::fabs(std::log(betas[nearest])) + 1e-12;
  if (!at_peak) pass = false;
  report(3, "arctangent envelope peaks at beta=1", pass,
         "t(1)-pi=" + fmt(t_script_at_zero(1.0) - std::numbers::pi) +
             ", argmax beta=" + fmt(betas[argmax]));
}

// --------------------------------------------------------------------------
// 4. Positivity of the combined success over the unequal-variance grid.

void criterion_4() {
  bool pass = true;
  double worst_margin = 1.0, worst_sigma = 0.0;
  std::uint64_t index = 0;
  for (double eps : {-5.0, -1.0, -0.5, -0.1, 0.1, 0.5, 1.0, 5.0}) {
    for (double beta : {0.1, 0.25, 0.5, 2.0, 4.0, 10.0}) {
      const GaussianScenarioParams params{eps, 1.0, beta};
      const double cf = theorem2_success(params);
      const Scenario s = gaussian_scenario(eps, 1.0, beta);
      const Estimate mc = mc_success_probability(
          s, kNn, {kBigN, 20261000 + index++, TiePolicy::HalfCredit, 0});
      const double sigma_gap = std::fabs(cf - mc.value) / mc.std_error;
      worst_margin = std::min(worst_margin, cf - 0.5);
      worst_sigma = std::max(worst_sigma, sigma_gap);
      if (cf <= 0.5 || sigma_gap >= 3.0) pass = false;
    }
  }
  report(4, "combined success exceeds 1/2 on the grid", pass,
         "min cf-0.5=" + fmt(worst_margin) + ", max |cf-mc|/se=" + fmt(worst_sigma));
}

// --------------------------------------------------------------------------
// 5. The equivalent rule family agrees verdict-for-verdict.

void criterion_5() {
  const std::vector<Rule> rules = {
      Rule::parse("nearest-neighbor"),    Rule::parse("cusum"),
      Rule::parse("max-likelihood"),      Rule::parse("linear-kernel"),
      Rule::parse("gaussian-kernel:0.1"), Rule::parse("gaussian-kernel:1"),
      Rule::parse("gaussian-kernel:10")};

  RngStream scenario_rng(kBaseSeed + 200);
  std::uint64_t compared = 0, mismatches = 0, ties = 0;
  for (int sc = 0; sc < 20; ++sc) {
    const double mu_x = 6.0 * (scenario_rng.uniform01() - 0.5);
    const double mu_z = 6.0 * (scenario_rng.uniform01() - 0.5);
    const double var_x = 0.05 + 4.0 * scenario_rng.uniform01();
    const double var_z = 0.05 + 4.0 * scenario_rng.uniform01();
    const Scenario s(Density::gaussian(mu_x, var_x), Density::gaussian(mu_z, var_z));
    RngStream rng(kBaseSeed + 300 + sc);
    // draw until this scenario contributes 5000 non-tie triples
    std::uint64_t non_tie = 0, attempts = 0;
    while (non_tie < 5000 && ++attempts < 500'000) {
      const Triple t = sample_triple(s, rng);
      bool any_tie = false;
      Verdict first = Verdict::Tie;
      bool identical = true;
      for (std::size_t r = 0; r < rules.size(); ++r) {
        const Verdict v = rules[r].apply(t, s);
        if (v == Verdict::Tie) any_tie = true;
        if (r == 0) first = v;
        else if (v != first) identical = false;
      }
      if (any_tie) {
        ++ties;
        continue;
      }
      ++non_tie;
      ++compared;
      if (!identical) ++mismatches;
    }
  }
  const bool pass = compared == 100'000 && mismatches == 0;
  report(5, "rule-family equivalence on non-tie triples", pass,
         std::to_string(compared) + " non-tie triples compared, " + std::to_string(mismatches) +
             " mismatches, " + std::to_string(ties) + " ties excluded");
}

// --------------------------------------------------------------------------
// 6. The quadratic-kernel counterexample configuration.

void criterion_6() {
  const Triple t{1.0, 2.0, 2.9, Source::FromX};
  const Verdict poly = kernel_changepoint_rule(t, Kernel::polynomial(2));
  const Verdict nn = nearest_neighbor_rule(t);
  const bool pass = poly == Verdict::FromX && nn == Verdict::FromZ;
  report(6, "quadratic kernel groups the far pair", pass,
         std::string("poly-2=") + to_string(poly) + ", nearest-neighbor=" + to_string(nn));
}

// --------------------------------------------------------------------------
// 7. Owen machinery against quadrature and the a=1 identity.

void criterion_7() {
  QuadOptions opts;
  opts.abs_tol = 1e-12;
  opts.rel_tol = 1e-12;

  RngStream rng(kBaseSeed + 400);
  double worst_integral = 0.0;
  int tested = 0;
  while (tested < 1000) {
    ProductIntegralArgs args{4.0 * (rng.uniform01() - 0.5), 4.0 * (rng.uniform01() - 0.5),
                             4.0 * (rng.uniform01() - 0.5), 4.0 * (rng.uniform01() - 0.5)};
    if (!(args.a * args.c > 0.0)) continue;
    ++tested;
    auto f = [&args](double m) {
      return norm_cdf(args.a + args.b * m) * norm_cdf(args.c + args.d * m) * norm_pdf(m);
    };
    const double direct = integrate_real_line(f, {}, opts).value;
    worst_integral =
        std::max(worst_integral, std::fabs(gaussian_product_phi_integral(args) - direct));
  }

  double worst_identity = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double h = 8.0 * (rng.uniform01() - 0.5);
    const double expected = 0.5 * norm_cdf(h) * (1.0 - norm_cdf(h));
    worst_identity = std::max(worst_identity, std::fabs(owen_t(h, 1.0) - expected));
  }

  const bool pass = worst_integral < 1e-9 && worst_identity < 1e-12;
  report(7, "owen product integral and a=1 identity", pass,
         "max |closed-quad|=" + fmt(worst_integral) +
             ", max identity gap=" + fmt(worst_identity));
}

// --------------------------------------------------------------------------
// 8. Sign evidence for the signed-cdf-gap integral across the catalog.

void criterion_8() {
  const auto scenarios = detail::sweep_scenarios("catalog");
  std::size_t violations = 0, mismatches = 0, resolved = 0, identical_bad = 0;
  std::size_t distinct = 0;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    const Scenario& s = scenarios[i];
    const ConjectureResult r = conjecture_integral(s);
    if (s.degenerate()) {
      if (std::fabs(r.integral_value) > 1e-10) ++identical_bad;
      continue;
    }
    ++distinct;
    if (r.sign_violation) {
      ++violations;
      std::printf("  FINDING: sign violation for fx=%s fz=%s (integral=%.6g, bound=%.6g)\n",
                  s.fx().describe().c_str(), s.fz().describe().c_str(), r.integral_value,
                  r.abs_error_bound);
    }
    const Estimate mc = mc_success_probability(
        s, kNn, {1'000'000, kBaseSeed + 500 + i, TiePolicy::HalfCredit, 0});
    const bool integral_resolved = std::fabs(r.integral_value) > r.abs_error_bound;
    const bool mc_resolved = std::fabs(mc.value - 0.5) > 3.0 * mc.std_error;
    if (integral_resolved && mc_resolved) {
      ++resolved;
      if ((r.integral_value > 0.0) != (mc.value > 0.5)) ++mismatches;
    }
  }
  // A genuine sign violation is a reportable finding (printed above), not a
  // test failure; the gate is on scale, consistency, and the identical pairs.
  const bool pass = distinct >= 50 && mismatches == 0 && identical_bad == 0;
  report(8, "signed-cdf-gap integral evidence", pass,
         std::to_string(distinct) + " distinct pairs, " + std::to_string(resolved) +
             " sign-resolved, " + std::to_string(mismatches) + " mismatches, " +
             std::to_string(violations) + " findings");
}

// --------------------------------------------------------------------------
// 9. Byte-identical artifacts under different thread counts.

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void criterion_9() {
  const fs::path dir = fs::temp_directory_path();
  const fs::path scenario_path = dir / "triad_acceptance_scenario.cfg";
  {
    std::ofstream out(scenario_path);
    out << "fx = gaussian(mean=0, var=1)\nfz = laplace(loc=1, scale=1)\n";
  }

  bool pass = true;
  std::string detail;
  int stamp = 0;
  auto check_command = [&](ExperimentConfig config, const std::string& label) {
    const fs::path a = dir / ("triad_acceptance_" + std::to_string(stamp++) + ".out");
    const fs::path b = dir / ("triad_acceptance_" + std::to_string(stamp++) + ".out");
    std::ostringstream diag;
    config.threads = 1;
    config.output_path = a.string();
    const int code_a = run(config, diag);
    config.threads = 4;
    config.output_path = b.string();
    const int code_b = run(config, diag);
    const bool same = code_a == code_b && slurp(a) == slurp(b) && !slurp(a).empty();
    if (!same) {
      pass = false;
      detail += label + " differs; ";
    }
    fs::remove(a);
    fs::remove(b);
  };

  {
    ExperimentConfig c;
    c.command = Command::VerifyTheorem1;
    c.n = 200'000;
    c.seed = 424242;
    check_command(c, "verify-theorem1");
  }
  {
    ExperimentConfig c;
    c.command = Command::VerifyTheorem2;
    c.n = 200'000;
    c.seed = 424243;
    c.output_format = OutputFormat::Csv;
    check_command(c, "verify-theorem2");
  }
  {
    ExperimentConfig c;
    c.command = Command::CompareRules;
    c.scenario_path = scenario_path.string();
    c.n = 100'000;
    c.seed = 424244;
    check_command(c, "compare-rules");
  }
  {
    ExperimentConfig c;
    c.command = Command::ConjectureScan;
    c.scenario_path = scenario_path.string();
    c.n = 100'000;
    c.seed = 424245;
    check_command(c, "conjecture-scan");
  }
  fs::remove(scenario_path);
  report(9, "thread-count independence of artifacts", pass,
         pass ? "4 commands byte-identical under threads 1 vs 4" : detail);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  std::printf("%s\n", g_all_pass ? "ALL CRITERIA PASSED" : "SOME CRITERIA FAILED");
  return g_all_pass ? 0 : 1;
}
