// Copyright 2026 The darkstate Authors.
// SPDX-License-Identifier: Apache-2.0
//
// The two-atom state left after a no-click record:
//
//     rho = lambda |phi-><phi-| + (1 - lambda) |00><00|,
//     |phi-> = (|01> - |10>) / sqrt(2),
//
// where lambda = P_0 / (P_0 + P_spon + (1 - eta) P_cav).  The form holds once
// the cavity has emptied (t >> 1/kappa); values at earlier t are formal.
#pragma once

#include <Eigen/Core>

#include "darkstate/model.hpp"

namespace darkstate {

struct ConditionedMixture {
  double lambda = 1.0;
  double t = 0.0;
};

/// Mixture built from the exact probabilities at time t.
ConditionedMixture mixture_at(const Parameters& params, double t, double eta);

/// Mixture built from the long-time probability forms; at t = 0 this is the
/// onset of the asymptotic regime.
ConditionedMixture mixture_asymptotic(const Parameters& params, double t, double eta);

/// 4x4 density matrix in the atomic basis (|00>, |01>, |10>, |11>).
Eigen::Matrix4d density_matrix(const ConditionedMixture& mix);

/// <phi-| rho |phi->, which is lambda.
double fidelity(const ConditionedMixture& mix);

/// Relative entropy of entanglement in bits,
///   E = (lambda - 2) log2(1 - lambda/2) + (1 - lambda) log2(1 - lambda),
/// with 0 log2 0 = 0.
double relative_entropy_of_entanglement(const ConditionedMixture& mix);
double relative_entropy_of_entanglement(double lambda);

struct RepumpResult {
  ConditionedMixture mixture_after_no_click;
  double click_probability = 0.0;
};

/*!
 * One round of repump filtering.  Driving the atoms excites a cavity photon
 * only from the |00> component, which the counter then sees with probability
 * p_detect.  The singlet is untouched, so a no-click outcome raises lambda:
 *
 *     P(click) = (1 - lambda) p_detect,
 *     lambda'  = lambda / (lambda + (1 - lambda)(1 - p_detect)).
 */
RepumpResult repump_round(const ConditionedMixture& mix, double p_detect);

}  // namespace darkstate
