#include "heo/solvers.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

namespace heo {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void check_finite_gradient(std::span<const double> grad, int t) {
  for (double g : grad) {
    if (!std::isfinite(g))
      throw std::runtime_error("solver abort: non-finite gradient at iteration " +
                               std::to_string(t));
  }
}

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

#ifndef NDEBUG
bool in_unit_cube(const Vec& v) {
  for (double x : v) {
    if (!(x >= 0.0 && x <= 1.0)) return false;
  }
  return true;
}
#endif

SolveReport projected_surrogate_loop(Problem& problem, const SolverConfig& config,
                                     double kappa, RngStream& rng) {
  config.validate();
  const int n = problem.dimension();
  if (n < 1) throw std::invalid_argument("problem dimension must be >= 1");
  const int T = config.iterations;

  problem.begin_run(config);
  Vec theta(static_cast<std::size_t>(n), problem.initial_theta());
  Vec velocity(static_cast<std::size_t>(n), 0.0);
  Vec x(static_cast<std::size_t>(n));
  Vec grad(static_cast<std::size_t>(n));
  GradientWorkspace ws;

  SolveReport report;
  report.seed_used = rng.seed();
  report.energy_trace.reserve(static_cast<std::size_t>(T));
  report.variance_trace.reserve(static_cast<std::size_t>(T));
  report.gradient_trace.grad_norm.reserve(static_cast<std::size_t>(T));
  report.gradient_trace.sigma.reserve(static_cast<std::size_t>(T));

  const auto start = Clock::now();
  for (int t = 0; t < T; ++t) {
    const double sigma = sigma_at(config.schedule, t, T, rng);
    fill_uniform_cube(x, rng);
    problem.auxiliary_step(t, config, theta, x, sigma);
    problem.surrogate_grad(theta, x, sigma, grad, ws);
    check_finite_gradient(grad, t);

    for (int i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      velocity[k] = kappa * velocity[k] - config.step_size * grad[k];
      theta[k] = std::min(1.0, std::max(0.0, theta[k] + velocity[k]));
    }
    assert(in_unit_cube(theta));

    report.energy_trace.push_back(problem.spin_energy(binarize(theta)));
    report.variance_trace.push_back(total_variance(theta));
    report.gradient_trace.grad_norm.push_back(norm2(grad));
    report.gradient_trace.sigma.push_back(sigma);
  }
  report.wall_time_per_iteration_ms = elapsed_ms(start) / static_cast<double>(T);

  report.best_spins = problem.post_process(binarize(theta));
  report.best_energy = problem.spin_energy(report.best_spins);
  return report;
}

}  // namespace

double Problem::spin_flip_delta(const SpinVector& s, int i) const {
  SpinVector flipped = s;
  flipped.values[static_cast<std::size_t>(i)] *= -1;
  return spin_energy(flipped) - spin_energy(s);
}

SolveReport heo_solve(Problem& problem, const SolverConfig& config, RngStream& rng) {
  return projected_surrogate_loop(problem, config, /*kappa=*/0.0, rng);
}

SolveReport heo_momentum_solve(Problem& problem, const SolverConfig& config,
                               RngStream& rng) {
  return projected_surrogate_loop(problem, config, config.momentum, rng);
}

SolveReport mcge_solve(Problem& problem, const SolverConfig& config, int sample_count,
                       RngStream& rng) {
  config.validate();
  if (sample_count < 1) throw std::invalid_argument("mcge: sample count must be >= 1");
  const int n = problem.dimension();
  if (n < 1) throw std::invalid_argument("problem dimension must be >= 1");
  const int T = config.iterations;
  constexpr double kScoreEps = 1e-6;

  problem.begin_run(config);
  Vec theta(static_cast<std::size_t>(n), 0.5);
  Vec velocity(static_cast<std::size_t>(n), 0.0);
  Vec grad(static_cast<std::size_t>(n));
  SpinVector sample;
  sample.values.resize(static_cast<std::size_t>(n));

  SolveReport report;
  report.seed_used = rng.seed();

  const auto start = Clock::now();
  for (int t = 0; t < T; ++t) {
    std::fill(grad.begin(), grad.end(), 0.0);
    for (int m = 0; m < sample_count; ++m) {
      for (int i = 0; i < n; ++i) {
        sample.values[static_cast<std::size_t>(i)] =
            rng.next_double() < theta[static_cast<std::size_t>(i)] ? 1 : -1;
      }
      const double f = problem.spin_energy(sample);
      if (!std::isfinite(f))
        throw std::runtime_error("solver abort: non-finite target at iteration " +
                                 std::to_string(t));
      for (int i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        const double th = std::min(1.0 - kScoreEps, std::max(kScoreEps, theta[k]));
        grad[k] += f * (sample.values[k] > 0 ? 1.0 / th : -1.0 / (1.0 - th));
      }
    }
    for (double& g : grad) g /= static_cast<double>(sample_count);

    for (int i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      velocity[k] = config.momentum * velocity[k] - config.step_size * grad[k];
      theta[k] = std::min(1.0, std::max(0.0, theta[k] + velocity[k]));
    }
    assert(in_unit_cube(theta));

    report.energy_trace.push_back(problem.spin_energy(binarize(theta)));
    report.variance_trace.push_back(total_variance(theta));
    report.gradient_trace.grad_norm.push_back(norm2(grad));
    report.gradient_trace.sigma.push_back(0.0);
  }
  report.wall_time_per_iteration_ms = elapsed_ms(start) / static_cast<double>(T);

  report.best_spins = problem.post_process(binarize(theta));
  report.best_energy = problem.spin_energy(report.best_spins);
  return report;
}

SolveReport sa_solve(Problem& problem, const SolverConfig& config,
                     const TempSchedule& temps, RngStream& rng) {
  config.validate();
  if (!(temps.end > 0.0)) throw std::invalid_argument("sa: final temperature must be > 0");
  const int n = problem.dimension();
  if (n < 1) throw std::invalid_argument("problem dimension must be >= 1");
  const int sweeps = config.iterations;

  SpinVector s;
  s.values.resize(static_cast<std::size_t>(n));
  for (int& v : s.values) v = rng.next_double() < 0.5 ? -1 : 1;

  double t_start = temps.start;
  if (!(t_start > 0.0)) {
    // calibrate from the flip-size distribution of the initial state
    Vec deltas;
    deltas.reserve(128);
    for (int k = 0; k < 128; ++k) {
      deltas.push_back(std::fabs(
          problem.spin_flip_delta(s, static_cast<int>(rng.next_index(
                                         static_cast<std::size_t>(n))))));
    }
    std::nth_element(deltas.begin(), deltas.begin() + 64, deltas.end());
    t_start = 2.0 * deltas[64];
    if (!(t_start > 0.0)) t_start = 1.0;
  }
  if (t_start < temps.end)
    throw std::invalid_argument("sa: initial temperature must exceed final");

  double current = problem.spin_energy(s);
  SpinVector best_s = s;
  double best = current;

  SolveReport report;
  report.seed_used = rng.seed();

  const auto start = Clock::now();
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    const double frac =
        sweeps > 1 ? static_cast<double>(sweep) / static_cast<double>(sweeps - 1) : 0.0;
    const double temp = t_start * std::pow(temps.end / t_start, frac);
    for (int k = 0; k < n; ++k) {
      const int i = static_cast<int>(rng.next_index(static_cast<std::size_t>(n)));
      const double delta = problem.spin_flip_delta(s, i);
      if (delta <= 0.0 || rng.next_double() < std::exp(-delta / temp)) {
        s.values[static_cast<std::size_t>(i)] *= -1;
        current += delta;
        if (current < best) {
          best = current;
          best_s = s;
        }
      }
    }
    current = problem.spin_energy(s);  // resync accumulated energy
    report.energy_trace.push_back(current);
    report.variance_trace.push_back(0.0);
    report.gradient_trace.grad_norm.push_back(0.0);
    report.gradient_trace.sigma.push_back(temp);
  }
  report.wall_time_per_iteration_ms = elapsed_ms(start) / static_cast<double>(sweeps);

  report.best_spins = problem.post_process(best_s);
  report.best_energy = problem.spin_energy(report.best_spins);
  return report;
}

SolveReport restart_best(const SolveFn& solve, Problem& problem,
                         const SolverConfig& config, int count) {
  if (count < 1) throw std::invalid_argument("restart_best: count must be >= 1");
  SolveReport best;
  bool have = false;
  for (int r = 0; r < count; ++r) {
    SolverConfig child = config;
    child.seed = derive_child_seed(config.seed, static_cast<std::uint64_t>(r));
    RngStream rng(child.seed);
    SolveReport rep = solve(problem, child, rng);
    if (!have || rep.best_energy < best.best_energy) {
      best = std::move(rep);
      have = true;
    }
  }
  return best;
}

}  // namespace heo
