// Copyright 2026 The darkstate Authors.
// SPDX-License-Identifier: Apache-2.0
#include "darkstate/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

#include "darkstate/rng.hpp"

namespace darkstate {

InvalidUniform::InvalidUniform(double u)
    : Error("uniform variate must lie in (0, 1], got " + std::to_string(u)) {}

const char* to_string(Channel c) {
  switch (c) {
    case Channel::None: return "none";
    case Channel::Cavity: return "cavity";
    case Channel::SponA: return "spon_a";
    case Channel::SponB: return "spon_b";
  }
  return "?";
}

double default_horizon(const Parameters& params) {
  return params.gamma > 0.0 ? 15.0 / params.gamma : 50.0 / params.kappa;
}

std::optional<double> sample_waiting_time(const NoJumpEvolution& evolution, double u,
                                          double horizon) {
  if (!(u > 0.0 && u <= 1.0)) throw InvalidUniform(u);
  if (u >= evolution.survival(0.0)) return 0.0;
  if (u < evolution.survival(horizon)) return std::nullopt;

  // survival(lo) > u >= survival(hi); bisect to full double resolution, which
  // is far inside 1e-10 * horizon.
  double lo = 0.0;
  double hi = horizon;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (evolution.survival(mid) > u) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::optional<double> sample_waiting_time(const Propagator& prop, const StateVector& psi,
                                          double u, double horizon) {
  return sample_waiting_time(NoJumpEvolution(prop, psi), u, horizon);
}

Channel classify_jump(const ChannelRates& rates, double v) {
  const double total = rates.total();
  if (!(total > 0.0)) throw ZeroRate();
  const double x = v * total;
  if (x < rates.cavity) return Channel::Cavity;
  if (x < rates.cavity + rates.spon_a) return Channel::SponA;
  return Channel::SponB;
}

Channel classify_jump(const Propagator& prop, const StateVector& psi_at_jump, double v) {
  return classify_jump(channel_rates(prop.params(), psi_at_jump.amplitudes), v);
}

TrajectoryOutcome simulate_trajectory(const NoJumpEvolution& from_initial,
                                      std::uint64_t seed, std::uint64_t index,
                                      double horizon) {
  CounterStream rng(seed, index);
  const double u = rng.uniform_open_closed();
  const double v = rng.uniform();
  const double w = rng.uniform();

  TrajectoryOutcome out;
  out.first_jump_time = sample_waiting_time(from_initial, u, horizon);
  if (!out.first_jump_time) return out;

  // Channel weights only need the direction of the state, so the
  // unnormalised amplitudes serve.
  const auto amps = from_initial.amplitudes(*out.first_jump_time);
  const auto& params = from_initial.propagator().params();
  out.channel = classify_jump(channel_rates(params, amps), v);
  out.detected = out.channel == Channel::Cavity && w < params.eta;
  return out;
}

unsigned worker_count_from_env() {
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("DARKSTATE_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) workers = std::min(workers, static_cast<unsigned>(cap));
  }
  return workers;
}

//---------------------------------------------------------------------------//
// Ensemble
//---------------------------------------------------------------------------//

EnsembleTally::EnsembleTally(std::size_t grid_size)
    : no_jump(grid_size, 0), cavity(grid_size, 0), cavity_detected(grid_size, 0),
      spon(grid_size, 0) {}

void EnsembleTally::merge(const EnsembleTally& other) {
  n += other.n;
  trapped += other.trapped;
  for (std::size_t i = 0; i < no_jump.size(); ++i) {
    no_jump[i] += other.no_jump[i];
    cavity[i] += other.cavity[i];
    cavity_detected[i] += other.cavity_detected[i];
    spon[i] += other.spon[i];
  }
}

namespace {

/// Trajectories [begin, end).  Jumps are histogrammed at the first grid point
/// at or after the jump time and prefix-summed at the end.
EnsembleTally run_shard(const NoJumpEvolution& evolution, std::span<const double> grid,
                        std::uint64_t seed, std::uint64_t begin, std::uint64_t end,
                        double horizon) {
  const std::size_t m = grid.size();
  std::vector<std::uint64_t> cav_hist(m + 1, 0), det_hist(m + 1, 0), spon_hist(m + 1, 0);
  EnsembleTally tally(m);
  tally.n = end - begin;

  for (std::uint64_t i = begin; i < end; ++i) {
    const auto outcome = simulate_trajectory(evolution, seed, i, horizon);
    if (!outcome.first_jump_time) {
      ++tally.trapped;
      continue;
    }
    const auto pos = static_cast<std::size_t>(
        std::lower_bound(grid.begin(), grid.end(), *outcome.first_jump_time) - grid.begin());
    if (outcome.channel == Channel::Cavity) {
      ++cav_hist[pos];
      if (outcome.detected) ++det_hist[pos];
    } else {
      ++spon_hist[pos];
    }
  }

  std::uint64_t cav = 0, det = 0, spon = 0;
  for (std::size_t k = 0; k < m; ++k) {
    cav += cav_hist[k];
    det += det_hist[k];
    spon += spon_hist[k];
    tally.cavity[k] = cav;
    tally.cavity_detected[k] = det;
    tally.spon[k] = spon;
    tally.no_jump[k] = tally.n - cav - spon;
  }
  return tally;
}

double binomial_stderr(double p, std::uint64_t n) {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

}  // namespace

EnsembleEstimate run_ensemble(const Parameters& params, std::uint64_t n,
                              std::span<const double> t_grid, std::uint64_t seed,
                              const EnsembleOptions& options) {
  if (t_grid.empty()) throw EmptyGrid();
  if (n == 0) throw InvalidParameters("trajectory count must be >= 1");
  if (!std::is_sorted(t_grid.begin(), t_grid.end()) || t_grid.front() < 0.0) {
    throw InvalidParameters("time grid must be non-negative and sorted ascending");
  }

  const Propagator prop(params);
  const NoJumpEvolution evolution(prop, StateVector::initial());
  const double horizon = options.horizon.value_or(default_horizon(params));

  unsigned workers = options.workers ? options.workers : worker_count_from_env();
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, n));

  std::vector<EnsembleTally> partial(workers);
  auto shard_bounds = [&](unsigned w) { return n * w / workers; };
  if (workers == 1) {
    partial[0] = run_shard(evolution, t_grid, seed, 0, n, horizon);
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        partial[w] = run_shard(evolution, t_grid, seed, shard_bounds(w), shard_bounds(w + 1),
                               horizon);
      });
    }
  }

  EnsembleEstimate est;
  est.tally = EnsembleTally(t_grid.size());
  for (const auto& p : partial) est.tally.merge(p);

  const double inv_n = 1.0 / static_cast<double>(n);
  est.n = n;
  est.trapped = est.tally.trapped;
  est.times.assign(t_grid.begin(), t_grid.end());
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    const double p0 = static_cast<double>(est.tally.no_jump[k]) * inv_n;
    const double pc = static_cast<double>(est.tally.cavity[k]) * inv_n;
    const double ps = static_cast<double>(est.tally.spon[k]) * inv_n;
    est.p0_hat.push_back(p0);
    est.p_cav_hat.push_back(pc);
    est.p_spon_hat.push_back(ps);
    est.p_detected_hat.push_back(static_cast<double>(est.tally.cavity_detected[k]) * inv_n);
    est.stderr_p0.push_back(binomial_stderr(p0, n));
    est.stderr_cav.push_back(binomial_stderr(pc, n));
    est.stderr_spon.push_back(binomial_stderr(ps, n));
  }
  return est;
}

}  // namespace darkstate
