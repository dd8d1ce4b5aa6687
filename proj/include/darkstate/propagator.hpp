// Copyright 2026 The darkstate Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Exact no-detection evolution U_cond(t) = exp(-M t) and the detection
// probabilities derived from it.
#pragma once

#include "darkstate/model.hpp"

namespace darkstate {

enum class PropagatorMethod { Spectral, Series };

/// Relative eigenvalue gap below which the Lagrange formula is abandoned for
/// the Taylor series.  The Lagrange terms cancel with error ~ eps (scale/gap)^2.
inline constexpr double kSeriesGapThreshold = 1e-3;

/// exp(a) by scaling and squaring of a truncated Taylor series.  The scaled
/// argument has norm <= 1/2 and terms are summed until they no longer change
/// the partial sum, well inside the 1e-13 target.
RealMatrix3 series_exponential(const RealMatrix3& a);

class Propagator {
 public:
  explicit Propagator(const Parameters& params);
  explicit Propagator(ConditionalGenerator generator);

  /// Force a method; used to cross-check the two paths.
  Propagator(ConditionalGenerator generator, PropagatorMethod method);

  const ConditionalGenerator& generator() const { return generator_; }
  const Parameters& params() const { return generator_.params; }
  PropagatorMethod method() const { return method_; }

  /// exp(-M t).  Throws NegativeTime for t < 0.
  RealMatrix3 u_cond(double t) const;

  /// U_cond(t) psi; the ground weight is carried through unchanged.
  StateVector evolve(const StateVector& psi, double t) const;

 private:
  RealMatrix3 spectral(double t) const;

  ConditionalGenerator generator_;
  PropagatorMethod method_;
  /// Spectral projectors |lambda_k><lambda^k|.
  std::array<ComplexMatrix3, 3> projectors_{};
};

/*!
 * Fast repeated evaluation of U_cond(t) psi for one fixed psi.
 *
 * With the spectral method psi is expanded once in the eigenbasis, so each
 * evaluation costs three complex exponentials.  The series method falls back
 * to a full matrix exponential per call.
 */
class NoJumpEvolution {
 public:
  NoJumpEvolution(const Propagator& prop, const StateVector& psi);

  ComplexVector3 amplitudes(double t) const;

  /// Squared norm of U_cond(t) psi: probability of no emission up to t.
  double survival(double t) const;

  /// First-emission density: 2 kappa |c_100|^2 + 2 gamma (|c_010|^2 + |c_001|^2).
  double jump_rate(double t) const;

  const Propagator& propagator() const { return *prop_; }

 private:
  const Propagator* prop_;
  ComplexVector3 psi_;
  std::array<ComplexVector3, 3> components_{};
};

/// Emission rates of the two channels at a given (unnormalised) state.
struct ChannelRates {
  double cavity = 0.0;
  double spon_a = 0.0;
  double spon_b = 0.0;

  double total() const { return cavity + spon_a + spon_b; }
};

ChannelRates channel_rates(const Parameters& params, const ComplexVector3& amplitudes);

//---------------------------------------------------------------------------//
// Closed forms for the initial state |010>
//---------------------------------------------------------------------------//

/// Unnormalised conditional state U_cond(t)|010> from the three-term closed
/// form (dark part decaying at gamma, bright part at (kappa + gamma)/2).
StateVector psi_coh_closed_form(const Parameters& params, double t);

/// P_0(t) = ||U_cond(t)|010>||^2.
double p0(const Propagator& prop, double t);

/// Long-time form g_b^2 / (g_a^2 + g_b^2) exp(-2 gamma t), valid for t >> 1/kappa.
double p0_asymptotic(const Parameters& params, double t);

/// First-emission density for the initial state |010>; equals -dP_0/dt.
double w1(const Propagator& prop, double t);

/// Probability that the photon has left through the cavity by time t.
double p_cav(const Parameters& params, double t);

/// lim_{t->inf} p_cav = kappa g_a^2 / ((kappa + gamma)(g_a^2 + g_b^2 + kappa gamma)).
double p_cav_limit(const Parameters& params);

/// Long-time spontaneous-emission probability 1 - p0_asymptotic - p_cav_limit.
double p_spon_asymptotic(const Parameters& params, double t);

struct ProbabilityTriple {
  double p0 = 1.0;
  double p_cav = 0.0;
  double p_spon = 0.0;
  double t = 0.0;
};

/// (P_0, P_cav, 1 - P_0 - P_cav) at time t, each clamped to [0, 1].
ProbabilityTriple probabilities(const Propagator& prop, double t);
ProbabilityTriple probabilities(const Parameters& params, double t);

/// Same triple built from the long-time forms.
ProbabilityTriple probabilities_asymptotic(const Parameters& params, double t);

/// Clamp a probability to [0, 1]; throws std::logic_error if it strays by more
/// than 1e-10.
double clamp_probability(double p);

}  // namespace darkstate
