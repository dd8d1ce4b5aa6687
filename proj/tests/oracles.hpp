// Copyright 2026 The darkstate Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Test-only reference computations.  Nothing here calls into the library's
// propagation code, so they can be used to check it.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Core>
#include <unsupported/Eigen/MatrixFunctions>

#include "darkstate/model.hpp"

namespace oracle {

/// The conditional generator written out directly from its definition.
inline Eigen::Matrix3d generator_matrix(const darkstate::Parameters& p) {
  Eigen::Matrix3d m;
  m << p.kappa, p.g_a, p.g_b, -p.g_a, p.gamma, 0.0, -p.g_b, 0.0, p.gamma;
  return m;
}

/// exp(-M t) by Eigen's Pade-based matrix exponential.
inline Eigen::Matrix3d expm(const darkstate::Parameters& p, double t) {
  const Eigen::Matrix3d a = -generator_matrix(p) * t;
  return a.exp();
}

/// det(M - z) expanded by cofactors.
inline std::complex<double> char_poly(const Eigen::Matrix3d& m, std::complex<double> z) {
  const Eigen::Matrix3cd a = m.cast<std::complex<double>>() -
                             z * Eigen::Matrix3cd::Identity();
  return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
         a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
         a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

namespace detail {
inline double simpson_step(const std::function<double(double)>& f, double a, double b,
                           double fa, double fm, double fb, double whole, double tol,
                           int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

/// Adaptive Simpson quadrature to absolute tolerance `tol`.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-10) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_step(f, a, b, fa, fm, fb, whole, tol, 50);
}

/// Random valid parameter sets spanning under- and overdamped regimes.
inline std::vector<darkstate::Parameters> random_parameters(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coupling(0.1, 3.0);
  std::uniform_real_distribution<double> kappa(0.2, 6.0);
  std::uniform_real_distribution<double> gamma(0.0, 0.5);
  std::vector<darkstate::Parameters> out;
  for (int i = 0; i < count; ++i) {
    darkstate::Parameters p;
    p.g_a = coupling(rng);
    p.g_b = coupling(rng);
    p.kappa = kappa(rng);
    p.gamma = gamma(rng);
    out.push_back(p);
  }
  return out;
}

/// Kolmogorov-Smirnov statistic of `samples` against the CDF `cdf`.
inline double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

/// Largest elementwise distance after aligning global phase.
inline double phase_aligned_distance(const Eigen::Vector3cd& a, const Eigen::Vector3cd& b) {
  const std::complex<double> overlap = b.dot(a);  // conj(b) . a
  const std::complex<double> phase =
      std::abs(overlap) > 0 ? overlap / std::abs(overlap) : std::complex<double>(1.0);
  return (a - phase * b).cwiseAbs().maxCoeff();
}

}  // namespace oracle
