// Copyright 2026 The darkstate Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Two atoms coupled to one leaky cavity mode, restricted to the
// single-excitation subspace.  Basis order is (|100>, |010>, |001>) where the
// first index is the cavity photon number and the other two are the atomic
// excitations of atom a and atom b.  |000> is carried as an absorbing scalar.
//
// Rate convention: `gamma` and `kappa` are amplitude decay rates (they sit on
// the diagonal of the conditional generator).  Population decay and quantum
// jump rates are 2*gamma and 2*kappa.
#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace darkstate {

using Complex = std::complex<double>;
using RealMatrix3 = Eigen::Matrix3d;
using ComplexMatrix3 = Eigen::Matrix3cd;
using ComplexVector3 = Eigen::Vector3cd;

/// Indices into the single-excitation basis.
enum class Basis : int { Cavity = 0, AtomA = 1, AtomB = 2 };

inline constexpr int index(Basis b) { return static_cast<int>(b); }

//---------------------------------------------------------------------------//
// Errors
//---------------------------------------------------------------------------//

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameters : public Error {
 public:
  using Error::Error;
};

/// Both couplings vanish: no dark state can be built.
class DegenerateCoupling : public Error {
 public:
  DegenerateCoupling() : Error("g_a and g_b are both zero") {}
};

class NegativeTime : public Error {
 public:
  explicit NegativeTime(double t);
};

//---------------------------------------------------------------------------//
// Parameters
//---------------------------------------------------------------------------//

/// Physical inputs in a common rate unit.
struct Parameters {
  double g_a = 1.0;
  double g_b = 1.0;
  double kappa = 1.0;
  double gamma = 1e-3;
  double eta = 1.0;

  /// Throws InvalidParameters unless g_a, g_b >= 0, kappa > 0, gamma >= 0 and
  /// eta in [0, 1].  Zero couplings are allowed here; the eigen-decompositions
  /// reject them separately.
  void validate() const;

  double coupling_sq() const { return g_a * g_a + g_b * g_b; }

  /// Characteristic rate used to scale tolerances.
  double rate_scale() const { return kappa + gamma + g_a + g_b; }

  /// Parameter set of the published figures: g_a = g_b = kappa = g, gamma = 1e-3 g.
  static Parameters figure_set(double g = 1.0) { return {g, g, g, 1e-3 * g, 1.0}; }
};

//---------------------------------------------------------------------------//
// StateVector
//---------------------------------------------------------------------------//

/// Amplitudes over (|100>, |010>, |001>) plus the accumulated |000> weight.
struct StateVector {
  ComplexVector3 amplitudes = ComplexVector3::Zero();
  double ground_weight = 0.0;

  static StateVector basis(Basis b);

  /// Initial state of the scheme: atom a excited, cavity empty.
  static StateVector initial() { return basis(Basis::AtomA); }

  double norm_sq() const { return amplitudes.squaredNorm(); }
  double population(Basis b) const { return std::norm(amplitudes[index(b)]); }
  Complex operator[](Basis b) const { return amplitudes[index(b)]; }

  /// Unit Euclidean norm on the amplitudes, ground weight dropped.
  StateVector normalized() const;
};

/// Fix the global phase so the largest-magnitude component is real and
/// positive.  Ties go to the lowest index.
ComplexVector3 canonical_phase(ComplexVector3 v);

//---------------------------------------------------------------------------//
// Lossless system
//---------------------------------------------------------------------------//

/// The interaction Hamiltonian H_I in the single-excitation basis, divided by
/// hbar/i:  [[0, g_a, g_b], [-g_a, 0, 0], [-g_b, 0, 0]].
RealMatrix3 interaction_hamiltonian(const Parameters& params);

/// Eigensystem of H_I / hbar.  Eigenvalues are (0, +w, -w) with
/// w = sqrt(g_a^2 + g_b^2); column k of `eigenvectors` belongs to eigenvalue k.
struct LosslessEigensystem {
  std::array<double, 3> eigenvalues{};
  ComplexMatrix3 eigenvectors = ComplexMatrix3::Zero();

  ComplexVector3 dark() const { return eigenvectors.col(0); }
};

LosslessEigensystem lossless_eigensystem(const Parameters& params);

//---------------------------------------------------------------------------//
// Conditional generator
//---------------------------------------------------------------------------//

/*!
 * Generator M of the no-detection evolution, U_cond(t) = exp(-M t), with
 *
 *     M = [[kappa, g_a,   g_b  ],
 *          [-g_a,  gamma, 0    ],
 *          [-g_b,  0,     gamma]].
 *
 * Eigenvalues are gamma (dark) and (kappa + gamma +/- i S)/2 with
 * S = sqrt(4 (g_a^2 + g_b^2) - (kappa - gamma)^2).  S is complex-valued so the
 * overdamped regime (S purely imaginary) shares the same formulas.
 *
 * M is not normal, so its eigenvectors are not orthogonal; the reciprocal
 * basis rows satisfy reciprocal.row(i) * eigenvectors.col(j) = delta_ij.
 */
struct ConditionalGenerator {
  Parameters params;
  RealMatrix3 m = RealMatrix3::Zero();
  std::array<Complex, 3> eigenvalues{};
  Complex s{};
  StateVector dark_state;
  ComplexMatrix3 eigenvectors = ComplexMatrix3::Zero();
  ComplexMatrix3 reciprocal = ComplexMatrix3::Zero();
  /// Smallest pairwise distance between eigenvalues.
  double min_gap = 0.0;
  /// Set when min_gap < 1e-8 * params.rate_scale().
  bool near_degenerate = false;

  /// Sum_i |lambda_i><lambda^i|; identity up to rounding.
  ComplexMatrix3 completeness() const { return eigenvectors * reciprocal; }
};

ConditionalGenerator conditional_generator(const Parameters& params);

}  // namespace darkstate
