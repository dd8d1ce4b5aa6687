// Copyright 2026 The darkstate Authors.
// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "darkstate/propagator.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace darkstate;

namespace {

const Parameters kFigure = Parameters::figure_set();

double max_diff(const RealMatrix3& a, const RealMatrix3& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("u_cond at t = 0 is the identity") {
  for (const auto& p : oracle::random_parameters(10, 1)) {
    CHECK(Propagator(p).u_cond(0.0) == RealMatrix3::Identity());
  }
  CHECK(series_exponential(RealMatrix3::Zero()) == RealMatrix3::Identity());
}

TEST_CASE("negative time is rejected") {
  const Propagator prop(kFigure);
  CHECK_THROWS_AS(prop.u_cond(-1e-9), NegativeTime);
  CHECK_THROWS_AS(p0(prop, -1.0), NegativeTime);
  CHECK_THROWS_AS(w1(prop, -1.0), NegativeTime);
  CHECK_THROWS_AS(p_cav(kFigure, -1.0), NegativeTime);
  CHECK_THROWS_AS(psi_coh_closed_form(kFigure, -1.0), NegativeTime);
  CHECK_THROWS_AS(probabilities(kFigure, -1.0), NegativeTime);
}

TEST_CASE("spectral and series propagators agree with the Pade oracle") {
  const auto gen = conditional_generator(kFigure);
  const Propagator spectral(gen, PropagatorMethod::Spectral);
  const Propagator series(gen, PropagatorMethod::Series);
  CHECK(Propagator(kFigure).method() == PropagatorMethod::Spectral);
  for (int i = 0; i <= 150; ++i) {
    const double t = 0.1 * i;
    const RealMatrix3 a = spectral.u_cond(t);
    const RealMatrix3 b = series.u_cond(t);
    CHECK(max_diff(a, b) < 1e-10);
    CHECK(max_diff(a, oracle::expm(kFigure, t)) < 1e-10);
  }
}

TEST_CASE("overdamped and random regimes") {
  auto sets = oracle::random_parameters(30, 5);
  sets.push_back({1, 1, 10, 0, 1});
  sets.push_back({0.3, 0.2, 8, 0.5, 1});
  for (const auto& p : sets) {
    const auto gen = conditional_generator(p);
    const Propagator spectral(gen, PropagatorMethod::Spectral);
    const Propagator series(gen, PropagatorMethod::Series);
    for (double t : {0.0, 0.05, 0.7, 2.0, 9.0, 40.0}) {
      CHECK(max_diff(spectral.u_cond(t), series.u_cond(t)) < 1e-10);
      CHECK(max_diff(series.u_cond(t), oracle::expm(p, t)) < 1e-10);
    }
  }
}

TEST_CASE("near-degenerate spectrum selects the series method") {
  const Parameters critical{1.0, 1.0, 2.0 * std::sqrt(2.0), 0.0, 1.0};
  const Propagator prop(critical);
  CHECK(prop.method() == PropagatorMethod::Series);
  for (double t : {0.3, 1.0, 5.0}) {
    CHECK(max_diff(prop.u_cond(t), oracle::expm(critical, t)) < 1e-12);
    // Closed form through the S -> 0 series branch.
    const auto psi = psi_coh_closed_form(critical, t);
    const ComplexVector3 ref = oracle::expm(critical, t).col(1).cast<Complex>();
    CHECK((psi.amplitudes - ref).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(p_cav(critical, t) ==
          doctest::Approx(oracle::adaptive_simpson(
                              [&](double s) {
                                return 2.0 * critical.kappa *
                                       std::pow(oracle::expm(critical, s)(0, 1), 2);
                              },
                              0.0, t, 1e-12))
              .epsilon(1e-9));
  }
}

TEST_CASE("semigroup property") {
  for (const auto& p : oracle::random_parameters(20, 9)) {
    const Propagator prop(p);
    for (auto [t, s] : {std::pair{0.3, 0.9}, std::pair{1.7, 2.2}, std::pair{5.0, 0.01}}) {
      CHECK(max_diff(prop.u_cond(t + s), prop.u_cond(t) * prop.u_cond(s)) < 1e-10);
    }
  }
}

TEST_CASE("norm never increases") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> normal;
  for (const auto& p : oracle::random_parameters(20, 13)) {
    const Propagator prop(p);
    for (int trial = 0; trial < 5; ++trial) {
      StateVector psi;
      for (int k = 0; k < 3; ++k) psi.amplitudes[k] = Complex(normal(rng), normal(rng));
      psi = psi.normalized();
      const NoJumpEvolution ev(prop, psi);
      double last = ev.survival(0.0);
      CHECK(last == doctest::Approx(1.0).epsilon(1e-14));
      for (int i = 1; i <= 100; ++i) {
        const double now = ev.survival(0.1 * i);
        CHECK(now <= last + 1e-14);
        last = now;
      }
    }
  }
}

TEST_CASE("dark component of |010> survives when gamma = 0") {
  const Parameters p{1, 1, 1, 0, 1};
  const Propagator prop(p);
  const auto psi = prop.evolve(StateVector::initial(), 60.0);
  CHECK(std::abs(psi[Basis::Cavity]) < 1e-12);
  CHECK(psi[Basis::AtomA].real() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(psi[Basis::AtomB].real() == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(psi.norm_sq() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("closed-form conditional state") {
  SUBCASE("initial condition") {
    const auto psi = psi_coh_closed_form(kFigure, 0.0);
    CHECK((psi.amplitudes - ComplexVector3(0, 1, 0)).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("matches the matrix exponential on a 200-point grid") {
    for (int i = 0; i < 200; ++i) {
      const double t = 15.0 * i / 199.0;
      const auto psi = psi_coh_closed_form(kFigure, t);
      const ComplexVector3 ref = oracle::expm(kFigure, t).col(1).cast<Complex>();
      CHECK((psi.amplitudes - ref).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
  SUBCASE("long-time plateau e^{-gamma t} (0, 1/2, -1/2)") {
    const double t = 40.0;
    const auto psi = psi_coh_closed_form(kFigure, t);
    const double env = std::exp(-kFigure.gamma * t);
    CHECK(std::abs(psi[Basis::Cavity]) < 1e-8);
    CHECK(psi[Basis::AtomA].real() == doctest::Approx(0.5 * env).epsilon(1e-8));
    CHECK(psi[Basis::AtomB].real() == doctest::Approx(-0.5 * env).epsilon(1e-8));
    CHECK(psi.population(Basis::AtomA) == doctest::Approx(0.25 * env * env).epsilon(1e-8));
  }
  SUBCASE("property: random parameter sets, overdamped included") {
    auto sets = oracle::random_parameters(50, 21);
    sets.push_back({1, 1, 10, 0, 1});
    for (const auto& p : sets) {
      for (double t : {0.0, 0.2, 1.1, 3.0, 8.0, 25.0, 120.0}) {
        const auto psi = psi_coh_closed_form(p, t);
        const ComplexVector3 ref = oracle::expm(p, t).col(1).cast<Complex>();
        CHECK((psi.amplitudes - ref).cwiseAbs().maxCoeff() < 1e-9);
      }
    }
  }
}

TEST_CASE("no-emission probability") {
  const Propagator prop(kFigure);
  CHECK(p0(prop, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  // Dark-state value at t = 10: 0.5 e^{-0.02}.
  CHECK(std::abs(p0(prop, 10.0) - 0.5 * std::exp(-0.02)) < 1e-4);
  CHECK(std::abs(p0(prop, 10.0) - 0.490099) < 1e-4);

  const Parameters no_decay{1, 1, 1, 0, 1};
  CHECK(p0(Propagator(no_decay), 200.0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("asymptotic no-emission probability") {
  CHECK(p0_asymptotic({1, 1, 1, 0, 1}, 3.0) == 0.5);
  CHECK(p0_asymptotic({2, 2, 1, 0, 1}, 1e6) == 0.5);
  CHECK(p0_asymptotic({0, 1, 1, 0.1, 1}, 2.0) == doctest::Approx(std::exp(-0.4)));

  const Propagator prop(kFigure);
  for (double t = 15.0; t <= 500.0; t += 5.0) {
    CHECK(std::abs(p0_asymptotic(kFigure, t) - p0(prop, t)) < 1e-6);
  }
  const double t20 = 20.0;
  CHECK(std::abs(p0_asymptotic(kFigure, t20) - p0(prop, t20)) / p0(prop, t20) < 1e-5);
}

TEST_CASE("first-emission density") {
  const Propagator prop(kFigure);
  CHECK(w1(prop, 0.0) == doctest::Approx(2.0 * kFigure.gamma).epsilon(1e-14));
  CHECK(w1(Propagator(Parameters{1, 1, 1, 0, 1}), 0.0) == 0.0);

  const double h = 1e-5;
  for (int i = 1; i <= 150; ++i) {
    const double t = 0.1 * i;
    const double dp0 = (p0(prop, t + h) - p0(prop, t - h)) / (2 * h);
    CHECK(std::abs(w1(prop, t) + dp0) < 1e-6);
  }
}

TEST_CASE("cavity emission probability") {
  CHECK(p_cav(kFigure, 0.0) == 0.0);
  CHECK(p_cav_limit(kFigure) == doctest::Approx(1.0 / (1.001 * 2.001)).epsilon(1e-15));
  CHECK(std::abs(p_cav(kFigure, 60.0) - 0.499251) < 1e-6);

  auto integrand = [](const Parameters& p) {
    return [p](double s) { return 2.0 * p.kappa * std::pow(oracle::expm(p, s)(0, 1), 2); };
  };
  for (int i = 1; i <= 25; ++i) {
    const double t = 0.2 * i;
    const double q = oracle::adaptive_simpson(integrand(kFigure), 0.0, t, 1e-10);
    CHECK(std::abs(p_cav(kFigure, t) - q) < 1e-8);
  }
  for (const auto& p : oracle::random_parameters(10, 4)) {
    for (double t : {0.5, 2.0, 6.0}) {
      const double q = oracle::adaptive_simpson(integrand(p), 0.0, t, 1e-11);
      CHECK(std::abs(p_cav(p, t) - q) < 1e-8);
    }
  }
  // Overdamped, long times: no overflow from sinh.
  const Parameters over{1, 1, 10, 0, 1};
  CHECK(std::isfinite(p_cav(over, 1e4)));
  CHECK(p_cav(over, 1e4) == doctest::Approx(p_cav_limit(over)).epsilon(1e-12));
}

TEST_CASE("probability triple") {
  const auto p = probabilities(kFigure, 0.0);
  CHECK(p.p0 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p.p_cav == 0.0);
  CHECK(p.p_spon == doctest::Approx(0.0).epsilon(1e-15));

  const auto q = probabilities(kFigure, 50.0);
  CHECK(std::abs(q.p0 - 0.452419) < 1e-5);
  CHECK(std::abs(q.p_cav - 0.499251) < 1e-5);
  CHECK(std::abs(q.p_spon - 0.048330) < 1e-5);

  const Propagator prop(kFigure);
  for (double t = 10.0; t <= 500.0; t += 10.0) {
    const auto exact = probabilities(prop, t);
    CHECK(std::abs(exact.p_spon - p_spon_asymptotic(kFigure, t)) < 1e-6);
  }
}

TEST_CASE("monotonicity of the probabilities") {
  for (const auto& params : oracle::random_parameters(10, 31)) {
    const Propagator prop(params);
    auto last = probabilities(prop, 0.0);
    for (int i = 1; i <= 300; ++i) {
      const auto now = probabilities(prop, 0.05 * i);
      CHECK(now.p0 <= last.p0 + 1e-13);
      CHECK(now.p_cav >= last.p_cav - 1e-13);
      CHECK(now.p_spon >= last.p_spon - 1e-13);
      CHECK(now.p0 + now.p_cav + now.p_spon == doctest::Approx(1.0).epsilon(1e-10));
      last = now;
    }
  }
}

TEST_CASE("clamp_probability") {
  CHECK(clamp_probability(-1e-13) == 0.0);
  CHECK(clamp_probability(1.0 + 1e-13) == 1.0);
  CHECK(clamp_probability(0.3) == 0.3);
  CHECK_THROWS_AS(clamp_probability(-1e-6), std::logic_error);
  CHECK_THROWS_AS(clamp_probability(1.01), std::logic_error);
}
