// Copyright 2026 The darkstate Authors.
// SPDX-License-Identifier: Apache-2.0
#include "darkstate/entanglement.hpp"

#include <algorithm>
#include <cmath>

#include "darkstate/propagator.hpp"

namespace darkstate {

namespace {

void require_eta(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw InvalidParameters("eta must lie in [0, 1]");
}

void require_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw InvalidParameters("lambda must lie in [0, 1]");
}

ConditionedMixture from_triple(const ProbabilityTriple& p, double eta) {
  const double denom = p.p0 + p.p_spon + (1.0 - eta) * p.p_cav;
  ConditionedMixture mix;
  mix.t = p.t;
  mix.lambda = denom > 0.0 ? std::clamp(p.p0 / denom, 0.0, 1.0) : 0.0;
  return mix;
}

/// x log2 x with 0 log2 0 = 0.
double xlog2(double coeff, double x) {
  if (coeff == 0.0) return 0.0;
  return coeff * std::log2(std::max(x, 1e-300));
}

}  // namespace

ConditionedMixture mixture_at(const Parameters& params, double t, double eta) {
  require_eta(eta);
  return from_triple(probabilities(params, t), eta);
}

ConditionedMixture mixture_asymptotic(const Parameters& params, double t, double eta) {
  require_eta(eta);
  return from_triple(probabilities_asymptotic(params, t), eta);
}

Eigen::Matrix4d density_matrix(const ConditionedMixture& mix) {
  Eigen::Matrix4d rho = Eigen::Matrix4d::Zero();
  const double half = 0.5 * mix.lambda;
  rho(0, 0) = 1.0 - mix.lambda;
  rho(1, 1) = half;
  rho(2, 2) = half;
  rho(1, 2) = -half;
  rho(2, 1) = -half;
  return rho;
}

double fidelity(const ConditionedMixture& mix) { return mix.lambda; }

double relative_entropy_of_entanglement(double lambda) {
  require_lambda(lambda);
  if (lambda < 1e-3) {
    // The two logarithms cancel to O(lambda^2); use the expansion
    // ln2 * E = l^2/4 + l^3/8 + 7 l^4/96 + 3 l^5/64 + 31 l^6/960.
    const double l = lambda;
    const double series = l * l * (1.0 / 4 + l * (1.0 / 8 + l * (7.0 / 96 + l * (3.0 / 64 + l * 31.0 / 960))));
    return series / std::log(2.0);
  }
  const double e = xlog2(lambda - 2.0, 1.0 - 0.5 * lambda) + xlog2(1.0 - lambda, 1.0 - lambda);
  return std::max(e, 0.0);
}

double relative_entropy_of_entanglement(const ConditionedMixture& mix) {
  return relative_entropy_of_entanglement(mix.lambda);
}

RepumpResult repump_round(const ConditionedMixture& mix, double p_detect) {
  require_lambda(mix.lambda);
  if (!(p_detect >= 0.0 && p_detect <= 1.0)) {
    throw InvalidParameters("p_detect must lie in [0, 1]");
  }
  RepumpResult out;
  out.click_probability = (1.0 - mix.lambda) * p_detect;
  out.mixture_after_no_click = mix;
  const double no_click = mix.lambda + (1.0 - mix.lambda) * (1.0 - p_detect);
  // no_click == 0 only for lambda = 0, p_detect = 1: the no-click branch is empty.
  if (no_click > 0.0) out.mixture_after_no_click.lambda = mix.lambda / no_click;
  return out;
}

}  // namespace darkstate
