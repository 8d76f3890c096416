// Copyright (c) 2026 The triad authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef TRIAD_CLOSED_FORM_HPP
#define TRIAD_CLOSED_FORM_HPP

#include <cmath>
#include <stdexcept>

#include "triad/special_functions.hpp"

namespace triad {

/// Parameters of the two-Gaussian setting, with the first mean pinned to 0
/// (locations cancel out of every success probability below): the mean gap
/// epsilon, the std of the first component, and the variance ratio beta
/// = var_z / var_x.
struct GaussianScenarioParams {
  double epsilon = 0.0;
  double sigma_x = 1.0;
  double beta = 1.0;

  void validate() const {
    if (!(sigma_x > 0.0))
      throw std::invalid_argument("GaussianScenarioParams: sigma_x must be > 0");
    if (!(beta > 0.0)) throw std::invalid_argument("GaussianScenarioParams: beta must be > 0");
  }

  bool identical_components() const { return epsilon == 0.0 && beta == 1.0; }
};

/// Success probability of the nearest-neighbor rule for two Gaussians sharing
/// one variance, as a product-plus-complement of two normal cdfs. Exactly 1/2
/// at epsilon = 0, above 1/2 otherwise, and it depends on (epsilon, sigma)
/// only through their ratio.
inline double theorem1_success(double epsilon, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("theorem1_success: sigma must be > 0");
  const double p = norm_cdf(epsilon / (std::sqrt(2.0) * sigma));
  const double q = norm_cdf(epsilon / (std::sqrt(6.0) * sigma));
  return p * q + (1.0 - p) * (1.0 - q);
}

/// P(nearest neighbor correct | Y drawn from the first component), allowing
/// unequal variances.
inline double theorem2_p_star(const GaussianScenarioParams& params) {
  params.validate();
  if (params.identical_components()) return 0.5;
  const double e = params.epsilon, s = params.sigma_x, b = params.beta;
  return 1.0 - 2.0 * owen_t(e / (std::sqrt(5.0 + b) * s), 3.0 / std::sqrt(1.0 + 2.0 * b)) -
         2.0 * owen_t(e / (std::sqrt(1.0 + b) * s), 1.0 / std::sqrt(1.0 + 2.0 * b));
}

/// P(nearest neighbor correct | Y drawn from the second component); the same
/// expression with the variance ratio inverted.
inline double theorem2_p_star_star(const GaussianScenarioParams& params) {
  params.validate();
  if (params.identical_components()) return 0.5;
  const double e = params.epsilon, s = params.sigma_x, b = params.beta;
  return 1.0 - 2.0 * owen_t(e / (std::sqrt(1.0 + 5.0 * b) * s), 3.0 / std::sqrt(1.0 + 2.0 / b)) -
         2.0 * owen_t(e / (std::sqrt(1.0 + b) * s), 1.0 / std::sqrt(1.0 + 2.0 / b));
}

/// Unconditional success probability of the nearest-neighbor rule under the
/// 50-50 mixture; exceeds 1/2 whenever the mean gap is nonzero.
inline double theorem2_success(const GaussianScenarioParams& params) {
  params.validate();
  if (params.identical_components()) return 0.5;
  return 0.5 * theorem2_p_star(params) + 0.5 * theorem2_p_star_star(params);
}

/// The four-arctangent envelope of the Owen terms at zero mean gap. Strictly
/// below pi except at beta = 1, where it equals pi; symmetric under
/// beta <-> 1/beta.
inline double t_script_at_zero(double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("t_script_at_zero: beta must be > 0");
  const double u = 1.0 / std::sqrt(1.0 + 2.0 * beta);
  const double v = 1.0 / std::sqrt(1.0 + 2.0 / beta);
  return std::atan(3.0 * u) + std::atan(u) + std::atan(3.0 * v) + std::atan(v);
}

/// Success probability of the known-parameter Bayes classifier in the shared
/// variance setting; an upper envelope for theorem1_success.
inline double bayes_success(double epsilon, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("bayes_success: sigma must be > 0");
  return norm_cdf(std::fabs(epsilon) / (2.0 * sigma));
}

}  // namespace triad

#endif  // TRIAD_CLOSED_FORM_HPP
