// Copyright (c) 2026 The triad authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef TRIAD_DECISION_RULES_HPP
#define TRIAD_DECISION_RULES_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

#include "triad/distributions.hpp"

namespace triad {

/// What a rule attributes the middle point to. Tie is returned only when the
/// rule's decision statistic is exactly equal for both options; rules never
/// break ties internally, the caller picks a policy.
enum class Verdict { FromX, FromZ, Tie };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::FromX: return "from_x";
    case Verdict::FromZ: return "from_z";
    default: return "tie";
  }
}

inline Verdict verdict_for(Source s) {
  return s == Source::FromX ? Verdict::FromX : Verdict::FromZ;
}

/// Symmetric kernel for change-point segmentation. Linear is u*v, Gaussian is
/// exp(-(u-v)^2 / (2 bw^2)), Polynomial of degree p is (u*v)^p.
struct Kernel {
  enum class Kind { Linear, Gaussian, Polynomial };

  Kind kind = Kind::Linear;
  double bandwidth = 1.0;
  int degree = 2;

  static Kernel linear() { return {Kind::Linear, 1.0, 1}; }

  static Kernel gaussian(double bandwidth) {
    if (!(bandwidth > 0.0)) throw std::invalid_argument("Kernel: bandwidth must be > 0");
    return {Kind::Gaussian, bandwidth, 1};
  }

  static Kernel polynomial(int degree) {
    if (degree < 1) throw std::invalid_argument("Kernel: degree must be >= 1");
    return {Kind::Polynomial, 1.0, degree};
  }

  double operator()(double u, double v) const {
    switch (kind) {
      case Kind::Linear: return u * v;
      case Kind::Gaussian: {
        const double diff = (u - v) / bandwidth;
        return std::exp(-0.5 * diff * diff);
      }
      default: return std::pow(u * v, degree);
    }
  }
};

/// Attribute y to whichever endpoint sample is closer.
inline Verdict nearest_neighbor_rule(const Triple& t) {
  const double dx = std::fabs(t.x - t.y);
  const double dz = std::fabs(t.z - t.y);
  if (dx < dz) return Verdict::FromX;
  if (dx > dz) return Verdict::FromZ;
  return Verdict::Tie;
}

/// Attribute y to the component with the higher density at y (optimal when
/// the densities are fully known).
inline Verdict bayes_rule(double y, const Density& fx, const Density& fz) {
  const double px = fx.pdf(y);
  const double pz = fz.pdf(y);
  if (px > pz) return Verdict::FromX;
  if (px < pz) return Verdict::FromZ;
  return Verdict::Tie;
}

/// Attribute y to the component whose mean is closer.
inline Verdict mean_distance_rule(double y, double mu_x, double mu_z) {
  const double dx = std::fabs(y - mu_x);
  const double dz = std::fabs(y - mu_z);
  if (dx < dz) return Verdict::FromX;
  if (dx > dz) return Verdict::FromZ;
  return Verdict::Tie;
}

/// Cumulative sums of deviations from the sequence mean over (x, y, z); the
/// change point goes after the position with the largest |S_k|. Placing it
/// after position 2 groups y with x.
inline Verdict cusum_rule(const Triple& t) {
  const double mean = (t.x + t.y + t.z) / 3.0;
  const double s1 = std::fabs(t.x - mean);
  const double s2 = std::fabs((t.x - mean) + (t.y - mean));
  if (s2 > s1) return Verdict::FromX;
  if (s2 < s1) return Verdict::FromZ;
  return Verdict::Tie;
}

/// Gaussian profile likelihood over the two segmentations {x,y | z} and
/// {x | y,z} with per-segment mean estimates and a shared variance estimate;
/// equivalent to picking the split with the smaller within-segment sum of
/// squares, which here is (x-y)^2/2 versus (y-z)^2/2.
inline Verdict max_likelihood_rule(const Triple& t) {
  const double rss_xy = 0.5 * (t.x - t.y) * (t.x - t.y);
  const double rss_yz = 0.5 * (t.y - t.z) * (t.y - t.z);
  if (rss_xy < rss_yz) return Verdict::FromX;
  if (rss_xy > rss_yz) return Verdict::FromZ;
  return Verdict::Tie;
}

/// Kernel least-squares segmentation cost of a two-point segment {u, v} plus
/// a singleton (whose cost is zero): sum of diagonal terms minus the segment
/// mean in feature space.
inline double kernel_pair_cost(const Kernel& k, double u, double v) {
  return 0.5 * (k(u, u) + k(v, v)) - k(u, v);
}

/// Pick the two-segment split of (x, y, z) with the smaller kernel
/// least-squares criterion: {x,y | z} attributes y to x's component.
inline Verdict kernel_changepoint_rule(const Triple& t, const Kernel& k) {
  const double cost_xy = kernel_pair_cost(k, t.x, t.y);
  const double cost_yz = kernel_pair_cost(k, t.y, t.z);
  if (cost_xy < cost_yz) return Verdict::FromX;
  if (cost_xy > cost_yz) return Verdict::FromZ;
  return Verdict::Tie;
}

/// A named rule that can be applied uniformly to sampled triples. The Bayes
/// and mean-distance rules consult the scenario's densities; the others use
/// the triple alone.
struct Rule {
  enum class Kind { NearestNeighbor, Bayes, MeanDistance, Cusum, MaxLikelihood, KernelChangepoint };

  Kind kind = Kind::NearestNeighbor;
  Kernel kernel = Kernel::linear();

  Verdict apply(const Triple& t, const Scenario& s) const {
    switch (kind) {
      case Kind::NearestNeighbor: return nearest_neighbor_rule(t);
      case Kind::Bayes: return bayes_rule(t.y, s.fx(), s.fz());
      case Kind::MeanDistance: return mean_distance_rule(t.y, s.fx().mean(), s.fz().mean());
      case Kind::Cusum: return cusum_rule(t);
      case Kind::MaxLikelihood: return max_likelihood_rule(t);
      default: return kernel_changepoint_rule(t, kernel);
    }
  }

  std::string name() const {
    switch (kind) {
      case Kind::NearestNeighbor: return "nearest-neighbor";
      case Kind::Bayes: return "bayes";
      case Kind::MeanDistance: return "mean-distance";
      case Kind::Cusum: return "cusum";
      case Kind::MaxLikelihood: return "max-likelihood";
      default:
        switch (kernel.kind) {
          case Kernel::Kind::Linear: return "linear-kernel";
          case Kernel::Kind::Gaussian:
            return "gaussian-kernel:" + detail::format_real(kernel.bandwidth);
          default: return "poly-kernel:" + std::to_string(kernel.degree);
        }
    }
  }

  /// Parses identifiers like "nearest-neighbor", "cusum", "gaussian-kernel",
  /// "gaussian-kernel:0.5", or "poly-kernel:2". Throws on anything unknown.
  static Rule parse(std::string_view id) {
    const auto colon = id.find(':');
    const std::string_view head = id.substr(0, colon);
    const std::string_view arg =
        colon == std::string_view::npos ? std::string_view{} : id.substr(colon + 1);

    auto require_no_arg = [&](Rule r) {
      if (!arg.empty()) throw std::invalid_argument("rule takes no parameter: " + std::string(id));
      return r;
    };

    if (head == "nearest-neighbor" || head == "nn")
      return require_no_arg({Kind::NearestNeighbor, Kernel::linear()});
    if (head == "bayes") return require_no_arg({Kind::Bayes, Kernel::linear()});
    if (head == "mean-distance") return require_no_arg({Kind::MeanDistance, Kernel::linear()});
    if (head == "cusum") return require_no_arg({Kind::Cusum, Kernel::linear()});
    if (head == "max-likelihood" || head == "ml")
      return require_no_arg({Kind::MaxLikelihood, Kernel::linear()});
    if (head == "linear-kernel")
      return require_no_arg({Kind::KernelChangepoint, Kernel::linear()});
    if (head == "gaussian-kernel") {
      double bw = 1.0;
      if (!arg.empty()) {
        char* end = nullptr;
        bw = std::strtod(std::string(arg).c_str(), &end);
        if (!(bw > 0.0)) throw std::invalid_argument("bad bandwidth in rule: " + std::string(id));
      }
      return {Kind::KernelChangepoint, Kernel::gaussian(bw)};
    }
    if (head == "poly-kernel" || head == "polynomial-kernel") {
      int degree = 2;
      if (!arg.empty()) {
        degree = std::atoi(std::string(arg).c_str());
        if (degree < 1) throw std::invalid_argument("bad degree in rule: " + std::string(id));
      }
      return {Kind::KernelChangepoint, Kernel::polynomial(degree)};
    }
    throw std::invalid_argument("unknown rule identifier: " + std::string(id));
  }
};

}  // namespace triad

#endif  // TRIAD_DECISION_RULES_HPP
