// Copyright 2026 The darkstate Authors.
// SPDX-License-Identifier: Apache-2.0
#include "darkstate/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/LU>

namespace darkstate {

NegativeTime::NegativeTime(double t)
    : Error("time must be non-negative, got " + std::to_string(t)) {}

void Parameters::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw InvalidParameters(what);
  };
  require(std::isfinite(g_a) && g_a >= 0.0, "g_a must be finite and >= 0");
  require(std::isfinite(g_b) && g_b >= 0.0, "g_b must be finite and >= 0");
  require(std::isfinite(kappa) && kappa > 0.0, "kappa must be finite and > 0");
  require(std::isfinite(gamma) && gamma >= 0.0, "gamma must be finite and >= 0");
  require(eta >= 0.0 && eta <= 1.0, "eta must lie in [0, 1]");
}

StateVector StateVector::basis(Basis b) {
  StateVector s;
  s.amplitudes[index(b)] = 1.0;
  return s;
}

StateVector StateVector::normalized() const {
  StateVector s;
  const double n = amplitudes.norm();
  if (n > 0.0) s.amplitudes = amplitudes / n;
  return s;
}

ComplexVector3 canonical_phase(ComplexVector3 v) {
  int k = 0;
  for (int i = 1; i < 3; ++i) {
    if (std::abs(v[i]) > std::abs(v[k])) k = i;
  }
  const double mag = std::abs(v[k]);
  if (mag > 0.0) v *= std::conj(v[k]) / mag;
  // The pivot is real by construction; drop the rounding residue.
  v[k] = Complex(v[k].real(), 0.0);
  return v;
}

RealMatrix3 interaction_hamiltonian(const Parameters& params) {
  RealMatrix3 h;
  // clang-format off
  h <<  0.0,          params.g_a, params.g_b,
       -params.g_a,   0.0,        0.0,
       -params.g_b,   0.0,        0.0;
  // clang-format on
  return h;
}

namespace {

ComplexVector3 dark_vector(const Parameters& params) {
  const double w = std::sqrt(params.coupling_sq());
  ComplexVector3 v(0.0, -params.g_b / w, params.g_a / w);
  return canonical_phase(v);
}

}  // namespace

LosslessEigensystem lossless_eigensystem(const Parameters& params) {
  params.validate();
  if (params.coupling_sq() <= 0.0) throw DegenerateCoupling();

  const double w = std::sqrt(params.coupling_sq());
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const Complex i(0.0, 1.0);

  LosslessEigensystem sys;
  sys.eigenvalues = {0.0, w, -w};
  sys.eigenvectors.col(0) = dark_vector(params);
  for (int k = 1; k < 3; ++k) {
    const double sign = (k == 1) ? 1.0 : -1.0;
    ComplexVector3 v(1.0, sign * i * params.g_a / w, sign * i * params.g_b / w);
    sys.eigenvectors.col(k) = canonical_phase(v * inv_sqrt2);
  }
  return sys;
}

ConditionalGenerator conditional_generator(const Parameters& params) {
  params.validate();
  if (params.coupling_sq() <= 0.0) throw DegenerateCoupling();

  const double ga = params.g_a;
  const double gb = params.g_b;
  const double kappa = params.kappa;
  const double gamma = params.gamma;

  ConditionalGenerator gen;
  gen.params = params;
  // clang-format off
  gen.m <<  kappa, ga,    gb,
           -ga,    gamma, 0.0,
           -gb,    0.0,   gamma;
  // clang-format on

  const double disc = 4.0 * params.coupling_sq() - (kappa - gamma) * (kappa - gamma);
  gen.s = std::sqrt(Complex(disc, 0.0));
  const Complex i(0.0, 1.0);
  gen.eigenvalues = {Complex(gamma, 0.0), 0.5 * (kappa + gamma + i * gen.s),
                     0.5 * (kappa + gamma - i * gen.s)};

  gen.dark_state.amplitudes = dark_vector(params);
  gen.eigenvectors.col(0) = gen.dark_state.amplitudes;
  for (int k = 1; k < 3; ++k) {
    // Null vector of the bright 2x2 block: (gamma - lambda, g_a, g_b).
    ComplexVector3 v(gamma - gen.eigenvalues[k], ga, gb);
    gen.eigenvectors.col(k) = canonical_phase(v.normalized());
  }
  gen.reciprocal = gen.eigenvectors.inverse();

  gen.min_gap = std::min({std::abs(gen.eigenvalues[0] - gen.eigenvalues[1]),
                          std::abs(gen.eigenvalues[0] - gen.eigenvalues[2]),
                          std::abs(gen.eigenvalues[1] - gen.eigenvalues[2])});
  gen.near_degenerate = gen.min_gap < 1e-8 * params.rate_scale();
  return gen;
}

}  // namespace darkstate
