// Copyright (c) 2026 The triad authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef TRIAD_DISTRIBUTIONS_HPP
#define TRIAD_DISTRIBUTIONS_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "triad/quadrature.hpp"
#include "triad/rng.hpp"
#include "triad/special_functions.hpp"

namespace triad {

namespace detail {

/// Shortest decimal form of x that parses back to exactly x.
inline std::string format_real(double x) {
  char buf[64];
  if (std::isfinite(x) && x == std::floor(x) && std::fabs(x) < 1e15) {
    std::snprintf(buf, sizeof(buf), "%.0f", x);
    return buf;
  }
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

}  // namespace detail

struct GaussianParams {
  double mean;
  double variance;
};

struct UniformParams {
  double lo;
  double hi;
};

struct ExponentialParams {
  double rate;
  double shift;
};

struct LaplaceParams {
  double location;
  double scale;
};

struct MixtureComponent {
  double weight;
  double mean;
  double variance;
};

struct GaussianMixtureParams {
  std::vector<MixtureComponent> components;
};

/// A 1-d probability distribution from the fixed catalog. Every member has an
/// exact pdf, cdf, and quantile, and samples by inverse transform, so a seeded
/// stream reproduces the same values no matter how work is scheduled.
/// Immutable after construction; safe to share across threads.
class Density {
 public:
  using Params = std::variant<GaussianParams, UniformParams, ExponentialParams, LaplaceParams,
                              GaussianMixtureParams>;

  static Density gaussian(double mean, double variance) {
    if (!(variance > 0.0)) throw std::invalid_argument("gaussian: variance must be > 0");
    return Density(GaussianParams{mean, variance});
  }

  static Density uniform(double lo, double hi) {
    if (!(hi > lo)) throw std::invalid_argument("uniform: requires hi > lo");
    return Density(UniformParams{lo, hi});
  }

  static Density exponential(double rate, double shift = 0.0) {
    if (!(rate > 0.0)) throw std::invalid_argument("exponential: rate must be > 0");
    return Density(ExponentialParams{rate, shift});
  }

  static Density laplace(double location, double scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("laplace: scale must be > 0");
    return Density(LaplaceParams{location, scale});
  }

  static Density gaussian_mixture(std::vector<MixtureComponent> components) {
    if (components.empty()) throw std::invalid_argument("mixture: needs >= 1 component");
    double total = 0.0;
    for (const auto& comp : components) {
      if (!(comp.weight >= 0.0)) throw std::invalid_argument("mixture: weights must be >= 0");
      if (!(comp.variance > 0.0))
        throw std::invalid_argument("mixture: component variance must be > 0");
      total += comp.weight;
    }
    if (std::fabs(total - 1.0) > 1e-12)
      throw std::invalid_argument("mixture: weights must sum to 1 (within 1e-12)");
    return Density(GaussianMixtureParams{std::move(components)});
  }

  double pdf(double w) const {
    return std::visit(
        [w](const auto& p) -> double {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, GaussianParams>) {
            const double sd = std::sqrt(p.variance);
            return norm_pdf((w - p.mean) / sd) / sd;
          } else if constexpr (std::is_same_v<T, UniformParams>) {
            return (w >= p.lo && w <= p.hi) ? 1.0 / (p.hi - p.lo) : 0.0;
          } else if constexpr (std::is_same_v<T, ExponentialParams>) {
            return w < p.shift ? 0.0 : p.rate * std::exp(-p.rate * (w - p.shift));
          } else if constexpr (std::is_same_v<T, LaplaceParams>) {
            return std::exp(-std::fabs(w - p.location) / p.scale) / (2.0 * p.scale);
          } else {
            double sum = 0.0;
            for (const auto& comp : p.components) {
              const double sd = std::sqrt(comp.variance);
              sum += comp.weight * norm_pdf((w - comp.mean) / sd) / sd;
            }
            return sum;
          }
        },
        params_);
  }

  double cdf(double w) const {
    return std::visit(
        [w](const auto& p) -> double {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, GaussianParams>) {
            return norm_cdf((w - p.mean) / std::sqrt(p.variance));
          } else if constexpr (std::is_same_v<T, UniformParams>) {
            if (w <= p.lo) return 0.0;
            if (w >= p.hi) return 1.0;
            return (w - p.lo) / (p.hi - p.lo);
          } else if constexpr (std::is_same_v<T, ExponentialParams>) {
            return w <= p.shift ? 0.0 : -std::expm1(-p.rate * (w - p.shift));
          } else if constexpr (std::is_same_v<T, LaplaceParams>) {
            const double u = (w - p.location) / p.scale;
            return u < 0.0 ? 0.5 * std::exp(u) : 1.0 - 0.5 * std::exp(-u);
          } else {
            double sum = 0.0;
            for (const auto& comp : p.components)
              sum += comp.weight * norm_cdf((w - comp.mean) / std::sqrt(comp.variance));
            return sum;
          }
        },
        params_);
  }

  double quantile(double prob) const {
    if (!(prob > 0.0 && prob < 1.0))
      throw std::domain_error("quantile: probability must be in (0,1)");
    return std::visit(
        [prob, this](const auto& p) -> double {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, GaussianParams>) {
            return p.mean + std::sqrt(p.variance) * norm_quantile(prob);
          } else if constexpr (std::is_same_v<T, UniformParams>) {
            return p.lo + prob * (p.hi - p.lo);
          } else if constexpr (std::is_same_v<T, ExponentialParams>) {
            return p.shift - std::log1p(-prob) / p.rate;
          } else if constexpr (std::is_same_v<T, LaplaceParams>) {
            return prob < 0.5 ? p.location + p.scale * std::log(2.0 * prob)
                              : p.location - p.scale * std::log(2.0 * (1.0 - prob));
          } else {
            return mixture_quantile(p, prob);
          }
        },
        params_);
  }

  /// Inverse-transform draw; a mixture consumes two uniforms (component
  /// selection, then the component draw), everything else consumes one.
  double sample(RngStream& rng) const {
    if (const auto* mix = std::get_if<GaussianMixtureParams>(&params_)) {
      const double which = rng.uniform01();
      const double u = rng.uniform01();
      double acc = 0.0;
      for (const auto& comp : mix->components) {
        acc += comp.weight;
        if (which <= acc)
          return comp.mean + std::sqrt(comp.variance) * norm_quantile(u);
      }
      const auto& last = mix->components.back();
      return last.mean + std::sqrt(last.variance) * norm_quantile(u);
    }
    return quantile(rng.uniform01());
  }

  double mean() const {
    return std::visit(
        [](const auto& p) -> double {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, GaussianParams>) {
            return p.mean;
          } else if constexpr (std::is_same_v<T, UniformParams>) {
            return 0.5 * (p.lo + p.hi);
          } else if constexpr (std::is_same_v<T, ExponentialParams>) {
            return p.shift + 1.0 / p.rate;
          } else if constexpr (std::is_same_v<T, LaplaceParams>) {
            return p.location;
          } else {
            double m = 0.0;
            for (const auto& comp : p.components) m += comp.weight * comp.mean;
            return m;
          }
        },
        params_);
  }

  double variance() const {
    return std::visit(
        [](const auto& p) -> double {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, GaussianParams>) {
            return p.variance;
          } else if constexpr (std::is_same_v<T, UniformParams>) {
            const double w = p.hi - p.lo;
            return w * w / 12.0;
          } else if constexpr (std::is_same_v<T, ExponentialParams>) {
            return 1.0 / (p.rate * p.rate);
          } else if constexpr (std::is_same_v<T, LaplaceParams>) {
            return 2.0 * p.scale * p.scale;
          } else {
            double m = 0.0, second = 0.0;
            for (const auto& comp : p.components) {
              m += comp.weight * comp.mean;
              second += comp.weight * (comp.variance + comp.mean * comp.mean);
            }
            return second - m * m;
          }
        },
        params_);
  }

  double stddev() const { return std::sqrt(variance()); }

  /// Locations where the pdf has structure (modes, support edges, shoulders);
  /// used to seed adaptive quadratures so nothing narrow gets skipped.
  void add_breakpoints(std::vector<double>& out) const {
    std::visit(
        [&out](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, GaussianParams>) {
            const double sd = std::sqrt(p.variance);
            for (double k : {-8.0, -3.0, -1.0, 0.0, 1.0, 3.0, 8.0}) out.push_back(p.mean + k * sd);
          } else if constexpr (std::is_same_v<T, UniformParams>) {
            out.push_back(p.lo);
            out.push_back(0.5 * (p.lo + p.hi));
            out.push_back(p.hi);
          } else if constexpr (std::is_same_v<T, ExponentialParams>) {
            for (double k : {0.0, 1.0, 3.0, 10.0}) out.push_back(p.shift + k / p.rate);
          } else if constexpr (std::is_same_v<T, LaplaceParams>) {
            for (double k : {-12.0, -4.0, -1.0, 0.0, 1.0, 4.0, 12.0})
              out.push_back(p.location + k * p.scale);
          } else {
            for (const auto& comp : p.components) {
              const double sd = std::sqrt(comp.variance);
              for (double k : {-8.0, -3.0, 0.0, 3.0, 8.0}) out.push_back(comp.mean + k * sd);
            }
          }
        },
        params_);
  }

  const Params& params() const { return params_; }

  const GaussianParams* as_gaussian() const { return std::get_if<GaussianParams>(&params_); }

  /// Canonical text form; matches the scenario-file syntax.
  std::string describe() const {
    using detail::format_real;
    return std::visit(
        [](const auto& p) -> std::string {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, GaussianParams>) {
            return "gaussian(mean=" + format_real(p.mean) + ", var=" + format_real(p.variance) +
                   ")";
          } else if constexpr (std::is_same_v<T, UniformParams>) {
            return "uniform(lo=" + format_real(p.lo) + ", hi=" + format_real(p.hi) + ")";
          } else if constexpr (std::is_same_v<T, ExponentialParams>) {
            return "exponential(rate=" + format_real(p.rate) + ", shift=" + format_real(p.shift) +
                   ")";
          } else if constexpr (std::is_same_v<T, LaplaceParams>) {
            return "laplace(loc=" + format_real(p.location) + ", scale=" + format_real(p.scale) +
                   ")";
          } else {
            std::string s = "mixture(";
            bool first = true;
            for (const auto& comp : p.components) {
              if (!first) s += " + ";
              first = false;
              s += format_real(comp.weight) + "*gaussian(mean=" + format_real(comp.mean) +
                   ", var=" + format_real(comp.variance) + ")";
            }
            return s + ")";
          }
        },
        params_);
  }

 private:
  explicit Density(Params params) : params_(std::move(params)) {}

  static double mixture_quantile(const GaussianMixtureParams& mix, double prob) {
    // Bracket by the extreme component quantiles, then bisect the cdf.
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    const double z = norm_quantile(prob);
    for (const auto& comp : mix.components) {
      const double q = comp.mean + std::sqrt(comp.variance) * z;
      lo = std::min(lo, q);
      hi = std::max(hi, q);
    }
    if (lo == hi) return lo;
    auto cdf_at = [&mix](double w) {
      double sum = 0.0;
      for (const auto& comp : mix.components)
        sum += comp.weight * norm_cdf((w - comp.mean) / std::sqrt(comp.variance));
      return sum;
    };
    for (int iter = 0; iter < 200; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (cdf_at(mid) < prob ? lo : hi) = mid;
      if (hi - lo <= 1e-14 * std::max({1.0, std::fabs(lo), std::fabs(hi)})) break;
    }
    return 0.5 * (lo + hi);
  }

  Params params_;
};

/// The pair of source distributions. Y is implicitly the 50-50 mixture of the
/// two. Construction measures the L1 distance between the pdfs; pairs that
/// coincide (below 1e-6) are flagged as degenerate but still usable.
class Scenario {
 public:
  Scenario(Density fx, Density fz) : fx_(std::move(fx)), fz_(std::move(fz)) {
    std::vector<double> pts;
    fx_.add_breakpoints(pts);
    fz_.add_breakpoints(pts);
    QuadOptions opts;
    opts.abs_tol = 1e-9;
    opts.rel_tol = 1e-9;
    auto gap = [this](double w) { return std::fabs(fx_.pdf(w) - fz_.pdf(w)); };
    l1_distance_ = integrate_real_line(gap, pts, opts).value;
  }

  const Density& fx() const { return fx_; }
  const Density& fz() const { return fz_; }

  double l1_distance() const { return l1_distance_; }
  bool degenerate() const { return l1_distance_ <= 1e-6; }

  std::vector<double> breakpoints() const {
    std::vector<double> pts;
    fx_.add_breakpoints(pts);
    fz_.add_breakpoints(pts);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
  }

 private:
  Density fx_;
  Density fz_;
  double l1_distance_ = 0.0;
};

enum class Source { FromX, FromZ };

inline const char* to_string(Source s) { return s == Source::FromX ? "from_x" : "from_z"; }

/// One observation of the three-point problem: the labeled endpoints x and z
/// plus the middle point y, whose generating component is recorded.
struct Triple {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  Source true_source = Source::FromX;
};

namespace detail {

inline Triple sample_triple_impl(const Scenario& s, RngStream& rng, const Source* forced) {
  Triple t;
  t.x = s.fx().sample(rng);
  t.z = s.fz().sample(rng);
  // The selection draw is consumed even when the source is forced, so the
  // conditional stream stays aligned with the unconditional one.
  const double which = rng.uniform01();
  t.true_source = forced ? *forced : (which < 0.5 ? Source::FromX : Source::FromZ);
  t.y = (t.true_source == Source::FromX ? s.fx() : s.fz()).sample(rng);
  return t;
}

}  // namespace detail

/// Draws x ~ fX, z ~ fZ, then a fair coin for y's source and y from the
/// selected component. All draws come from the given stream, in that order.
inline Triple sample_triple(const Scenario& s, RngStream& rng) {
  return detail::sample_triple_impl(s, rng, nullptr);
}

/// Same draw sequence as sample_triple, but y's source is fixed; this samples
/// the exact conditional law of the triple given the source.
inline Triple sample_triple_given(const Scenario& s, Source source, RngStream& rng) {
  return detail::sample_triple_impl(s, rng, &source);
}

}  // namespace triad

#endif  // TRIAD_DISTRIBUTIONS_HPP
