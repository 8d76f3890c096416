// Copyright (c) 2026 The triad authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef TRIAD_EXPERIMENTS_HPP
#define TRIAD_EXPERIMENTS_HPP

#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "triad/decision_rules.hpp"
#include "triad/distributions.hpp"
#include "triad/quadrature.hpp"

namespace triad {

enum class TiePolicy { HalfCredit, Exclude };

inline const char* to_string(TiePolicy p) {
  return p == TiePolicy::HalfCredit ? "half-credit" : "exclude";
}

enum class EstimateMethod { MonteCarlo, Quadrature, ClosedForm };

inline const char* to_string(EstimateMethod m) {
  switch (m) {
    case EstimateMethod::MonteCarlo: return "monte-carlo";
    case EstimateMethod::Quadrature: return "quadrature";
    default: return "closed-form";
  }
}

/// A probability estimate with its uncertainty metadata. Monte Carlo results
/// carry the binomial standard error; quadrature and closed-form results are
/// deterministic (std_error = 0, n_samples = 0).
struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t n_samples = 0;
  EstimateMethod method = EstimateMethod::MonteCarlo;
  std::uint64_t tie_count = 0;
};

inline Estimate closed_form_estimate(double value) {
  return {value, 0.0, 0, EstimateMethod::ClosedForm, 0};
}

/// Monte Carlo work is split into fixed-size chunks, each with its own
/// substream derived from (seed, chunk index). Partial tallies are integers
/// and get combined in chunk order, so results are bit-identical for any
/// thread count.
inline constexpr std::uint64_t kMcChunkSize = 1ull << 16;

struct McOptions {
  std::uint64_t n = 1'000'000;
  std::uint64_t seed = 1;
  TiePolicy tie_policy = TiePolicy::HalfCredit;
  unsigned threads = 0;  // 0 = all hardware threads
};

namespace detail {

inline unsigned resolve_threads(unsigned requested, std::uint64_t n_chunks) {
  unsigned t = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (t > n_chunks) t = static_cast<unsigned>(n_chunks);
  return std::max(1u, t);
}

/// Runs fn(chunk_index, sample_count) over every chunk, possibly in parallel,
/// and returns the per-chunk accumulators in chunk order.
template <class Acc, class ChunkFn>
std::vector<Acc> map_chunks(std::uint64_t n, unsigned threads, const ChunkFn& fn) {
  const std::uint64_t n_chunks = (n + kMcChunkSize - 1) / kMcChunkSize;
  std::vector<Acc> results(n_chunks);
  auto chunk_count = [n, n_chunks](std::uint64_t c) {
    return c + 1 < n_chunks ? kMcChunkSize : n - kMcChunkSize * (n_chunks - 1);
  };

  const unsigned workers = resolve_threads(threads, n_chunks);
  if (workers == 1) {
    for (std::uint64_t c = 0; c < n_chunks; ++c) results[c] = fn(c, chunk_count(c));
    return results;
  }

  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      for (;;) {
        const std::uint64_t c = next.fetch_add(1);
        if (c >= n_chunks) return;
        results[c] = fn(c, chunk_count(c));
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

struct SuccessTally {
  std::uint64_t correct = 0;
  std::uint64_t ties = 0;
};

inline Estimate estimate_from_tally(std::uint64_t correct, std::uint64_t ties, std::uint64_t n,
                                    TiePolicy policy) {
  Estimate est;
  est.method = EstimateMethod::MonteCarlo;
  est.n_samples = n;
  est.tie_count = ties;
  if (policy == TiePolicy::HalfCredit) {
    est.value = (static_cast<double>(correct) + 0.5 * static_cast<double>(ties)) /
                static_cast<double>(n);
    est.std_error = std::sqrt(est.value * (1.0 - est.value) / static_cast<double>(n));
  } else {
    const std::uint64_t effective = n - ties;
    if (effective == 0) {
      est.value = 0.5;
      est.std_error = 0.0;
    } else {
      est.value = static_cast<double>(correct) / static_cast<double>(effective);
      est.std_error =
          std::sqrt(est.value * (1.0 - est.value) / static_cast<double>(effective));
    }
  }
  return est;
}

template <class TripleFn>
Estimate mc_success_impl(const Scenario& s, const Rule& rule, const McOptions& opts,
                         const TripleFn& draw, Verdict (*expected)(const Triple&)) {
  if (opts.n < 1) throw std::invalid_argument("monte carlo: n must be >= 1");
  auto chunk = [&](std::uint64_t index, std::uint64_t count) {
    RngStream rng(opts.seed, index);
    SuccessTally tally;
    for (std::uint64_t i = 0; i < count; ++i) {
      const Triple t = draw(s, rng);
      const Verdict v = rule.apply(t, s);
      if (v == Verdict::Tie) {
        ++tally.ties;
      } else if (v == expected(t)) {
        ++tally.correct;
      }
    }
    return tally;
  };
  const auto tallies = map_chunks<SuccessTally>(opts.n, opts.threads, chunk);
  std::uint64_t correct = 0, ties = 0;
  for (const auto& t : tallies) {
    correct += t.correct;
    ties += t.ties;
  }
  return estimate_from_tally(correct, ties, opts.n, opts.tie_policy);
}

}  // namespace detail

/// Fraction of sampled triples on which the rule names y's true source.
/// Deterministic in (seed, n) regardless of thread count.
inline Estimate mc_success_probability(const Scenario& s, const Rule& rule,
                                       const McOptions& opts) {
  return detail::mc_success_impl(
      s, rule, opts, [](const Scenario& sc, RngStream& rng) { return sample_triple(sc, rng); },
      [](const Triple& t) { return verdict_for(t.true_source); });
}

/// Success probability conditioned on y's true source, estimated by sampling
/// the conditional law directly.
inline Estimate mc_conditional_success(const Scenario& s, const Rule& rule, Source condition,
                                       const McOptions& opts) {
  if (condition == Source::FromX) {
    return detail::mc_success_impl(
        s, rule, opts,
        [](const Scenario& sc, RngStream& rng) {
          return sample_triple_given(sc, Source::FromX, rng);
        },
        [](const Triple&) { return Verdict::FromX; });
  }
  return detail::mc_success_impl(
      s, rule, opts,
      [](const Scenario& sc, RngStream& rng) {
        return sample_triple_given(sc, Source::FromZ, rng);
      },
      [](const Triple&) { return Verdict::FromZ; });
}

/// Conditional success probability of the nearest-neighbor rule for a
/// two-Gaussian scenario by direct 2-d adaptive quadrature in the original
/// (x, z) coordinates; independent of any closed form. Throws on non-Gaussian
/// scenarios and on failure to converge.
inline Estimate quad_success_probability(const Scenario& s, Source condition,
                                         double abs_tol = 1e-7) {
  const GaussianParams* gx = s.fx().as_gaussian();
  const GaussianParams* gz = s.fz().as_gaussian();
  if (gx == nullptr || gz == nullptr)
    throw std::invalid_argument("quad_success_probability: both densities must be gaussian");

  const Density& middle = condition == Source::FromX ? s.fx() : s.fz();
  // Success set for y: closer to x when conditioning on the first component,
  // closer to z otherwise. Its probability mass given the midpoint:
  //   FromX: F((x+z)/2) on {x < z},  1 - F((x+z)/2) on {x > z}
  //   FromZ: F((x+z)/2) on {z < x},  1 - F((x+z)/2) on {z > x}
  const bool from_x = condition == Source::FromX;

  std::vector<double> z_pts;
  s.fz().add_breakpoints(z_pts);
  std::vector<double> x_pts;
  s.fx().add_breakpoints(x_pts);

  QuadOptions inner_opts;
  inner_opts.abs_tol = 1e-11;
  inner_opts.rel_tol = 1e-11;
  QuadOptions outer_opts;
  outer_opts.abs_tol = 0.3 * abs_tol;
  outer_opts.rel_tol = 0.0;

  const Density& fz = s.fz();
  auto outer = [&](double x) {
    const double fx_at = s.fx().pdf(x);
    if (fx_at < 1e-300) return 0.0;
    auto upper_part = [&](double z) {
      const double m = middle.cdf(0.5 * (x + z));
      return (from_x ? m : 1.0 - m) * fz.pdf(z);
    };
    auto lower_part = [&](double z) {
      const double m = middle.cdf(0.5 * (x + z));
      return (from_x ? 1.0 - m : m) * fz.pdf(z);
    };
    const double up = integrate_upper(upper_part, x, z_pts, inner_opts).value;
    const double lo = integrate_lower(lower_part, x, z_pts, inner_opts).value;
    return fx_at * (up + lo);
  };

  const QuadResult r = integrate_real_line(outer, x_pts, outer_opts);
  if (!r.converged)
    throw QuadratureError("quad_success_probability: outer integral did not converge", r.value,
                          r.error);
  Estimate est;
  est.value = r.value;
  est.std_error = 0.0;
  est.n_samples = 0;
  est.method = EstimateMethod::Quadrature;
  return est;
}

/// Outcome of evaluating the signed-cdf-gap double integral for one scenario.
/// sign_violation is set only when the integral is negative beyond its error
/// bound.
struct ConjectureResult {
  Scenario scenario;
  double integral_value = 0.0;
  double abs_error_bound = 0.0;
  bool sign_violation = false;
};

/// Evaluates
///   Integral over r in R, alpha in [0, inf) of
///     (F_X(r) - F_Z(r)) * (f_X(r-a) f_Z(r+a) - f_X(r+a) f_Z(r-a))
/// by adaptive quadrature. The alpha range is truncated where both densities
/// have vanished (12 standard deviations past the mean offset) and the exact
/// cdf tail mass of the truncation is added to the reported error bound.
inline ConjectureResult conjecture_integral(const Scenario& s, double abs_tol = 1e-10) {
  const Density& fx = s.fx();
  const Density& fz = s.fz();
  const double mu_x = fx.mean(), mu_z = fz.mean();
  const double spread = fx.stddev() + fz.stddev();
  const double half_gap = 0.5 * std::fabs(mu_z - mu_x);
  const double alpha_max = half_gap + 12.0 * spread;

  // Tail of the truncated alpha range, bounded through the densities' own
  // cdfs: the alpha-integral of each pdf product is a density of (Z - X)/2.
  const double t_off = 12.0 * spread;
  const double tail_bound =
      0.5 * ((1.0 - fz.cdf(mu_z + t_off)) + fx.cdf(mu_x - t_off) +
             (1.0 - fx.cdf(mu_x + t_off)) + fz.cdf(mu_z - t_off));

  std::vector<double> alpha_pts{0.0};
  for (double p = alpha_max / 1024.0; p < alpha_max; p *= 2.0) alpha_pts.push_back(p);
  for (double j : {-4.0, -1.0, 0.0, 1.0, 4.0}) {
    const double candidate = half_gap + j * spread;
    if (candidate > 0.0 && candidate < alpha_max) alpha_pts.push_back(candidate);
  }
  alpha_pts.push_back(alpha_max);
  std::sort(alpha_pts.begin(), alpha_pts.end());
  alpha_pts.erase(std::unique(alpha_pts.begin(), alpha_pts.end()), alpha_pts.end());

  QuadOptions inner_opts;
  inner_opts.abs_tol = 1e-13;
  inner_opts.rel_tol = 1e-12;
  QuadOptions outer_opts;
  outer_opts.abs_tol = abs_tol;
  outer_opts.rel_tol = 0.0;

  const auto r_pts = s.breakpoints();
  auto outer = [&](double r) {
    const double gap = fx.cdf(r) - fz.cdf(r);
    if (gap == 0.0) return 0.0;
    auto inner = [&](double a) {
      return fx.pdf(r - a) * fz.pdf(r + a) - fx.pdf(r + a) * fz.pdf(r - a);
    };
    return gap * integrate_segments(inner, alpha_pts, inner_opts).value;
  };

  const QuadResult r = integrate_real_line(outer, r_pts, outer_opts);
  if (!r.converged)
    throw QuadratureError("conjecture_integral: integration did not converge", r.value, r.error);

  ConjectureResult result{s, r.value, r.error + 1e-12 + tail_bound, false};
  result.sign_violation = result.integral_value < -result.abs_error_bound;
  return result;
}

/// Monte Carlo estimates of the two pair-indicator expectations
///   W1 = 1{|X - X'| < |Z - X'|} + 1{|X* - Z'| > |Z* - Z'|}
///   W2 = 1{|X - X'| > |Z - X'|} + 1{|X* - Z'| < |Z* - Z'|}
/// over independent 6-tuples (X, X', X*, Z, Z', Z*); their sum is 2 up to
/// ties, and E[W1] is twice the nearest-neighbor success probability.
inline std::pair<double, double> w_expectations(const Scenario& s, std::uint64_t n,
                                                std::uint64_t seed, unsigned threads = 0) {
  if (n < 1) throw std::invalid_argument("w_expectations: n must be >= 1");
  struct Sums {
    std::uint64_t w1 = 0;
    std::uint64_t w2 = 0;
  };
  auto chunk = [&s, seed](std::uint64_t index, std::uint64_t count) {
    RngStream rng(seed, index);
    Sums sums;
    for (std::uint64_t i = 0; i < count; ++i) {
      const double x = s.fx().sample(rng);
      const double xp = s.fx().sample(rng);
      const double xs = s.fx().sample(rng);
      const double z = s.fz().sample(rng);
      const double zp = s.fz().sample(rng);
      const double zs = s.fz().sample(rng);
      const double first_gap = std::fabs(x - xp) - std::fabs(z - xp);
      const double second_gap = std::fabs(xs - zp) - std::fabs(zs - zp);
      sums.w1 += (first_gap < 0.0) + (second_gap > 0.0);
      sums.w2 += (first_gap > 0.0) + (second_gap < 0.0);
    }
    return sums;
  };
  const auto sums = detail::map_chunks<Sums>(n, threads, chunk);
  std::uint64_t w1 = 0, w2 = 0;
  for (const auto& c : sums) {
    w1 += c.w1;
    w2 += c.w2;
  }
  return {static_cast<double>(w1) / static_cast<double>(n),
          static_cast<double>(w2) / static_cast<double>(n)};
}

/// Pairwise agreement rates of a set of rules over sampled triples. A triple
/// where either rule of a pair returns Tie is excluded from that pair's
/// denominator and counted separately.
struct AgreementMatrix {
  std::vector<Rule> rules;
  std::vector<std::vector<double>> rate;
  std::vector<std::vector<std::uint64_t>> ties_excluded;
  std::uint64_t n = 0;
};

inline AgreementMatrix rule_agreement_matrix(const Scenario& s, const std::vector<Rule>& rules,
                                             std::uint64_t n, std::uint64_t seed,
                                             unsigned threads = 0) {
  if (rules.size() < 2)
    throw std::invalid_argument("rule_agreement_matrix: needs at least two rules");
  if (n < 1) throw std::invalid_argument("rule_agreement_matrix: n must be >= 1");
  const std::size_t k = rules.size();

  struct Counts {
    std::vector<std::uint64_t> agree;
    std::vector<std::uint64_t> excluded;
  };
  auto chunk = [&](std::uint64_t index, std::uint64_t count) {
    RngStream rng(seed, index);
    Counts counts{std::vector<std::uint64_t>(k * k, 0), std::vector<std::uint64_t>(k * k, 0)};
    std::vector<Verdict> verdicts(k);
    for (std::uint64_t i = 0; i < count; ++i) {
      const Triple t = sample_triple(s, rng);
      for (std::size_t a = 0; a < k; ++a) verdicts[a] = rules[a].apply(t, s);
      for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a + 1; b < k; ++b) {
          if (verdicts[a] == Verdict::Tie || verdicts[b] == Verdict::Tie) {
            ++counts.excluded[a * k + b];
          } else if (verdicts[a] == verdicts[b]) {
            ++counts.agree[a * k + b];
          }
        }
      }
    }
    return counts;
  };

  const auto partials = detail::map_chunks<Counts>(n, threads, chunk);
  std::vector<std::uint64_t> agree(k * k, 0), excluded(k * k, 0);
  for (const auto& c : partials) {
    for (std::size_t i = 0; i < k * k; ++i) {
      agree[i] += c.agree[i];
      excluded[i] += c.excluded[i];
    }
  }

  AgreementMatrix out;
  out.rules = rules;
  out.n = n;
  out.rate.assign(k, std::vector<double>(k, 1.0));
  out.ties_excluded.assign(k, std::vector<std::uint64_t>(k, 0));
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      const std::uint64_t excl = excluded[a * k + b];
      const std::uint64_t used = n - excl;
      const double rate =
          used == 0 ? 1.0 : static_cast<double>(agree[a * k + b]) / static_cast<double>(used);
      out.rate[a][b] = out.rate[b][a] = rate;
      out.ties_excluded[a][b] = out.ties_excluded[b][a] = excl;
    }
  }
  return out;
}

/// A triple on which two rules in a set disagreed (ties not counted).
struct Disagreement {
  Triple triple;
  std::size_t rule_a = 0;
  std::size_t rule_b = 0;
  Verdict verdict_a = Verdict::Tie;
  Verdict verdict_b = Verdict::Tie;
};

/// Sequential scan for the first disagreements among the rules; used for
/// reporting exemplars. Deterministic in (seed, n_max).
inline std::vector<Disagreement> find_disagreements(const Scenario& s,
                                                    const std::vector<Rule>& rules,
                                                    std::uint64_t n_max, std::uint64_t seed,
                                                    std::size_t max_results = 8) {
  std::vector<Disagreement> found;
  if (rules.size() < 2 || max_results == 0) return found;
  const std::uint64_t n_chunks = (n_max + kMcChunkSize - 1) / kMcChunkSize;
  std::vector<Verdict> verdicts(rules.size());
  std::uint64_t remaining = n_max;
  for (std::uint64_t c = 0; c < n_chunks && found.size() < max_results; ++c) {
    RngStream rng(seed, c);
    const std::uint64_t count = std::min(kMcChunkSize, remaining);
    remaining -= count;
    for (std::uint64_t i = 0; i < count && found.size() < max_results; ++i) {
      const Triple t = sample_triple(s, rng);
      for (std::size_t a = 0; a < rules.size(); ++a) verdicts[a] = rules[a].apply(t, s);
      for (std::size_t a = 0; a < rules.size() && found.size() < max_results; ++a) {
        for (std::size_t b = a + 1; b < rules.size(); ++b) {
          if (verdicts[a] != verdicts[b] && verdicts[a] != Verdict::Tie &&
              verdicts[b] != Verdict::Tie) {
            found.push_back({t, a, b, verdicts[a], verdicts[b]});
            if (found.size() >= max_results) break;
          }
        }
      }
    }
  }
  return found;
}

}  // namespace triad

#endif  // TRIAD_EXPERIMENTS_HPP
