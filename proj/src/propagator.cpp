// Copyright 2026 The darkstate Authors.
// SPDX-License-Identifier: Apache-2.0
#include "darkstate/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace darkstate {

namespace {

constexpr double kImagTolerance = 1e-12;
constexpr double kProbabilityTolerance = 1e-10;

void require_time(double t) {
  if (!(t >= 0.0)) throw NegativeTime(t);
}

/// exp(-a t) cos(s t).  Written with complex exponentials so that an
/// imaginary s (overdamped) never overflows: |Im s| < a in every use here.
Complex damped_cos(Complex s, double a, double t) {
  const Complex i(0.0, 1.0);
  if (std::abs(s.imag()) * t < 30.0) return std::exp(-a * t) * std::cos(s * t);
  return 0.5 * (std::exp((i * s - a) * t) + std::exp((-i * s - a) * t));
}

/// exp(-a t) sin(s t) / s, with the removable singularity at s = 0 handled by
/// its Taylor series t - s^2 t^3 / 6 + s^4 t^5 / 120.
Complex damped_sinc(Complex s, double a, double t) {
  const Complex x = s * t;
  if (std::abs(x) < 1e-4) {
    const Complex x2 = x * x;
    return std::exp(-a * t) * t * (1.0 - x2 / 6.0 + x2 * x2 / 120.0);
  }
  if (std::abs(s.imag()) * t < 30.0) return std::exp(-a * t) * std::sin(x) / s;
  const Complex i(0.0, 1.0);
  return (std::exp((i * s - a) * t) - std::exp((-i * s - a) * t)) / (2.0 * i * s);
}

/// Take the real part after checking the imaginary residue is rounding-level
/// relative to `scale`.
double real_part(Complex z, double scale, const char* what) {
  if (std::abs(z.imag()) > kImagTolerance * std::max(1.0, scale)) {
    throw std::logic_error(std::string(what) + ": imaginary residue " +
                           std::to_string(z.imag()));
  }
  return z.real();
}

}  // namespace

RealMatrix3 series_exponential(const RealMatrix3& a) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const RealMatrix3 b = a / std::ldexp(1.0, squarings);

  RealMatrix3 sum = RealMatrix3::Identity();
  RealMatrix3 term = RealMatrix3::Identity();
  for (int k = 1; k < 64; ++k) {
    term = term * b / static_cast<double>(k);
    const RealMatrix3 next = sum + term;
    if (next == sum) break;
    sum = next;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

//---------------------------------------------------------------------------//
// Propagator
//---------------------------------------------------------------------------//

Propagator::Propagator(const Parameters& params)
    : Propagator(conditional_generator(params)) {}

Propagator::Propagator(ConditionalGenerator generator)
    : Propagator(generator,
                 generator.min_gap < kSeriesGapThreshold * generator.params.rate_scale()
                     ? PropagatorMethod::Series
                     : PropagatorMethod::Spectral) {}

Propagator::Propagator(ConditionalGenerator generator, PropagatorMethod method)
    : generator_(std::move(generator)), method_(method) {
  if (method_ == PropagatorMethod::Series) return;
  // Lagrange interpolation: P_k = prod_{j != k} (M - lambda_j) / (lambda_k - lambda_j).
  const ComplexMatrix3 m = generator_.m.cast<Complex>();
  const ComplexMatrix3 id = ComplexMatrix3::Identity();
  const auto& lam = generator_.eigenvalues;
  for (int k = 0; k < 3; ++k) {
    const int j1 = (k + 1) % 3;
    const int j2 = (k + 2) % 3;
    projectors_[k] = (m - lam[j1] * id) * (m - lam[j2] * id) /
                     ((lam[k] - lam[j1]) * (lam[k] - lam[j2]));
  }
}

RealMatrix3 Propagator::u_cond(double t) const {
  require_time(t);
  if (t == 0.0) return RealMatrix3::Identity();
  if (method_ == PropagatorMethod::Series) {
    return series_exponential(-generator_.m * t);
  }
  return spectral(t);
}

RealMatrix3 Propagator::spectral(double t) const {
  ComplexMatrix3 u = ComplexMatrix3::Zero();
  double scale = 0.0;
  for (int k = 0; k < 3; ++k) {
    const Complex e = std::exp(-generator_.eigenvalues[k] * t);
    u += e * projectors_[k];
    scale = std::max(scale, std::abs(e) * projectors_[k].cwiseAbs().maxCoeff());
  }
  RealMatrix3 out;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) out(r, c) = real_part(u(r, c), scale, "u_cond");
  }
  return out;
}

StateVector Propagator::evolve(const StateVector& psi, double t) const {
  StateVector out;
  out.amplitudes = u_cond(t).cast<Complex>() * psi.amplitudes;
  out.ground_weight = psi.ground_weight;
  return out;
}

//---------------------------------------------------------------------------//
// NoJumpEvolution
//---------------------------------------------------------------------------//

NoJumpEvolution::NoJumpEvolution(const Propagator& prop, const StateVector& psi)
    : prop_(&prop), psi_(psi.amplitudes) {
  if (prop.method() == PropagatorMethod::Spectral) {
    const auto& gen = prop.generator();
    for (int k = 0; k < 3; ++k) {
      const Complex coeff = gen.reciprocal.row(k) * psi_;
      components_[k] = coeff * gen.eigenvectors.col(k);
    }
  }
}

ComplexVector3 NoJumpEvolution::amplitudes(double t) const {
  require_time(t);
  if (prop_->method() == PropagatorMethod::Series) {
    return prop_->u_cond(t).cast<Complex>() * psi_;
  }
  ComplexVector3 out = ComplexVector3::Zero();
  for (int k = 0; k < 3; ++k) {
    out += std::exp(-prop_->generator().eigenvalues[k] * t) * components_[k];
  }
  return out;
}

double NoJumpEvolution::survival(double t) const { return amplitudes(t).squaredNorm(); }

double NoJumpEvolution::jump_rate(double t) const {
  return channel_rates(prop_->params(), amplitudes(t)).total();
}

ChannelRates channel_rates(const Parameters& params, const ComplexVector3& amplitudes) {
  return {2.0 * params.kappa * std::norm(amplitudes[index(Basis::Cavity)]),
          2.0 * params.gamma * std::norm(amplitudes[index(Basis::AtomA)]),
          2.0 * params.gamma * std::norm(amplitudes[index(Basis::AtomB)])};
}

//---------------------------------------------------------------------------//
// Closed forms
//---------------------------------------------------------------------------//

StateVector psi_coh_closed_form(const Parameters& params, double t) {
  require_time(t);
  params.validate();
  if (params.coupling_sq() <= 0.0) throw DegenerateCoupling();

  const double ga = params.g_a;
  const double gb = params.g_b;
  const double g2 = params.coupling_sq();
  const double kg = params.kappa - params.gamma;
  const double rate = params.kappa + params.gamma;
  const Complex s = std::sqrt(Complex(4.0 * g2 - kg * kg, 0.0));

  // Bright envelope exp(-(kappa+gamma) t/2) {cos(S t/2), sin(S t/2)/S}.
  const double c = real_part(damped_cos(s, rate, 0.5 * t), 1.0, "psi_coh");
  const double sn = real_part(damped_sinc(s, rate, 0.5 * t), 1.0, "psi_coh");
  const double dark = gb * std::exp(-params.gamma * t);

  StateVector out;
  out.amplitudes[0] = ga * (-2.0 * g2) * sn;
  out.amplitudes[1] = dark * gb + ga * (ga * c + ga * kg * sn);
  out.amplitudes[2] = -dark * ga + ga * (gb * c + gb * kg * sn);
  out.amplitudes /= g2;
  return out;
}

double p0(const Propagator& prop, double t) {
  return NoJumpEvolution(prop, StateVector::initial()).survival(t);
}

double p0_asymptotic(const Parameters& params, double t) {
  require_time(t);
  return params.g_b * params.g_b / params.coupling_sq() * std::exp(-2.0 * params.gamma * t);
}

double w1(const Propagator& prop, double t) {
  return NoJumpEvolution(prop, StateVector::initial()).jump_rate(t);
}

double p_cav_limit(const Parameters& params) {
  const double kg = params.kappa * params.gamma;
  return params.kappa * params.g_a * params.g_a /
         ((params.kappa + params.gamma) * (params.coupling_sq() + kg));
}

double p_cav(const Parameters& params, double t) {
  require_time(t);
  params.validate();
  if (params.coupling_sq() <= 0.0) throw DegenerateCoupling();

  // Using 4 (g^2 + kappa gamma) = S^2 + (kappa + gamma)^2 the bracket becomes
  //   1 - e^{-(k+G) t} [1 + (k+G) sin(St)/S + (k+G)^2 (1 - cos St)/S^2],
  // which has no 1/S singularity; (1 - cos St)/S^2 = 2 (sin(St/2)/S)^2.
  const double sum = params.kappa + params.gamma;
  const double kg = params.kappa - params.gamma;
  const Complex s = std::sqrt(Complex(4.0 * params.coupling_sq() - kg * kg, 0.0));

  const Complex decay(std::exp(-sum * t), 0.0);
  const Complex sinc_full = damped_sinc(s, sum, t);
  const Complex half = damped_sinc(s, sum, 0.5 * t);  // e^{-(k+G)t/2} sin(St/2)/S
  const Complex bracket = decay + sum * sinc_full + 2.0 * sum * sum * half * half;
  const double tail = real_part(bracket, 1.0, "p_cav");
  return p_cav_limit(params) * (1.0 - tail);
}

double p_spon_asymptotic(const Parameters& params, double t) {
  return 1.0 - p0_asymptotic(params, t) - p_cav_limit(params);
}

double clamp_probability(double p) {
  if (!(p >= -kProbabilityTolerance && p <= 1.0 + kProbabilityTolerance)) {
    throw std::logic_error("probability out of range: " + std::to_string(p));
  }
  return std::clamp(p, 0.0, 1.0);
}

ProbabilityTriple probabilities(const Propagator& prop, double t) {
  ProbabilityTriple out;
  out.t = t;
  out.p0 = clamp_probability(p0(prop, t));
  out.p_cav = clamp_probability(p_cav(prop.params(), t));
  out.p_spon = clamp_probability(1.0 - out.p0 - out.p_cav);
  return out;
}

ProbabilityTriple probabilities(const Parameters& params, double t) {
  return probabilities(Propagator(params), t);
}

ProbabilityTriple probabilities_asymptotic(const Parameters& params, double t) {
  ProbabilityTriple out;
  out.t = t;
  out.p0 = clamp_probability(p0_asymptotic(params, t));
  out.p_cav = clamp_probability(p_cav_limit(params));
  out.p_spon = clamp_probability(1.0 - out.p0 - out.p_cav);
  return out;
}

}  // namespace darkstate
