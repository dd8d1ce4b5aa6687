// Copyright 2026 The darkstate Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Quantum-jump unravelling of the leaky-cavity dynamics.  Because the
// no-jump evolution is known exactly, a trajectory needs just two draws: the
// first-emission time (inverse transform of the survival function) and the
// emission channel.  After an emission the system sits in |000>, which no
// channel can leave, so there is never a second jump.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "darkstate/propagator.hpp"

namespace darkstate {

class InvalidUniform : public Error {
 public:
  explicit InvalidUniform(double u);
};

class EmptyGrid : public Error {
 public:
  EmptyGrid() : Error("time grid is empty") {}
};

class ZeroRate : public Error {
 public:
  ZeroRate() : Error("total emission rate vanishes at the jump state") {}
};

enum class Channel { None, Cavity, SponA, SponB };

const char* to_string(Channel c);

struct TrajectoryOutcome {
  std::optional<double> first_jump_time;
  Channel channel = Channel::None;
  /// Cavity photon registered by the counter (probability eta).
  bool detected = false;
};

/// 15/gamma when gamma > 0, else 50/kappa.
double default_horizon(const Parameters& params);

/// Time t at which the no-jump survival of `evolution` drops to u, found by
/// bisection on [0, horizon]; nullopt when the survival is still above u at
/// the horizon.  Throws InvalidUniform unless 0 < u <= 1.
std::optional<double> sample_waiting_time(const NoJumpEvolution& evolution, double u,
                                          double horizon);
std::optional<double> sample_waiting_time(const Propagator& prop, const StateVector& psi,
                                          double u, double horizon);

/// Picks the channel by comparing v in [0, 1) against cumulative rate
/// fractions in the order cavity, atom a, atom b.
Channel classify_jump(const ChannelRates& rates, double v);
Channel classify_jump(const Propagator& prop, const StateVector& psi_at_jump, double v);

/// One trajectory from |010>, driven by substream `index` of `seed`.
TrajectoryOutcome simulate_trajectory(const NoJumpEvolution& from_initial,
                                      std::uint64_t seed, std::uint64_t index,
                                      double horizon);

struct EnsembleOptions {
  /// 0 picks worker_count_from_env().
  unsigned workers = 0;
  /// Defaults to default_horizon(params).
  std::optional<double> horizon;
};

/// Hardware concurrency, capped by DARKSTATE_THREADS when set.
unsigned worker_count_from_env();

/// Integer counts per grid point.  Merging is plain addition, so partial
/// tallies can be combined in any order.
struct EnsembleTally {
  std::uint64_t n = 0;
  std::uint64_t trapped = 0;  // no jump before the horizon
  std::vector<std::uint64_t> no_jump;
  std::vector<std::uint64_t> cavity;
  std::vector<std::uint64_t> cavity_detected;
  std::vector<std::uint64_t> spon;

  explicit EnsembleTally(std::size_t grid_size = 0);
  void merge(const EnsembleTally& other);
};

struct EnsembleEstimate {
  std::uint64_t n = 0;
  std::uint64_t trapped = 0;
  std::vector<double> times;
  std::vector<double> p0_hat;
  std::vector<double> p_cav_hat;
  std::vector<double> p_spon_hat;
  std::vector<double> p_detected_hat;
  std::vector<double> stderr_p0;
  std::vector<double> stderr_cav;
  std::vector<double> stderr_spon;
  EnsembleTally tally;
};

/// n trajectories from |010>; the result depends only on (params, n, t_grid,
/// seed, horizon), never on the worker count.  Throws EmptyGrid.
EnsembleEstimate run_ensemble(const Parameters& params, std::uint64_t n,
                              std::span<const double> t_grid, std::uint64_t seed,
                              const EnsembleOptions& options = {});

}  // namespace darkstate
