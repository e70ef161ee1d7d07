#pragma once

#include <functional>
#include <span>

#include "heo/core.hpp"
#include "heo/poly.hpp"

namespace heo {

/// A binary optimization target the solver loops can drive. Implementations
/// are read-only after construction except for per-run state updated through
/// begin_run / auxiliary_step (penalty coefficients, coupled continuous
/// parameters), which is owned by one solving run at a time.
class Problem {
 public:
  virtual ~Problem() = default;

  virtual int dimension() const = 0;

  /// Deterministic evaluation of the discrete target.
  virtual double spin_energy(const SpinVector& s) const = 0;

  /// Gradient of f(erf((theta - x)/sigma)) with respect to theta, written
  /// into grad (length dimension()).
  virtual void surrogate_grad(std::span<const double> theta,
                              std::span<const double> x, double sigma,
                              std::span<double> grad, GradientWorkspace& ws) const = 0;

  /// Energy change from flipping spin i. Default recomputes both energies;
  /// polynomial-backed problems override with an incidence-based O(degree)
  /// path.
  virtual double spin_flip_delta(const SpinVector& s, int i) const;

  /// Initial value for every coordinate of theta (0.5 unless an adapter
  /// prescribes otherwise).
  virtual double initial_theta() const { return 0.5; }

  /// Called once before the first iteration of a solve; resets per-run state.
  virtual void begin_run(const SolverConfig& config) { (void)config; }

  /// Called each iteration after x and sigma are drawn and before the
  /// gradient. Hook for coupled continuous parameters and
  /// iteration-dependent coefficients.
  virtual void auxiliary_step(int t, const SolverConfig& config,
                              std::span<const double> theta,
                              std::span<const double> x, double sigma) {
    (void)t, (void)config, (void)theta, (void)x, (void)sigma;
  }

  /// Applied to the binarized output of a solve (e.g. cover refinement).
  virtual SpinVector post_process(const SpinVector& s) const { return s; }
};

/// Problem whose target is a sparse multilinear polynomial; covers QUBO and
/// general PUBO instances.
class PolynomialProblem : public Problem {
 public:
  explicit PolynomialProblem(MultilinearPolynomial poly) : poly_(std::move(poly)) {}

  int dimension() const override { return poly_.dimension(); }
  double spin_energy(const SpinVector& s) const override { return poly_.evaluate(s); }
  void surrogate_grad(std::span<const double> theta, std::span<const double> x,
                      double sigma, std::span<double> grad,
                      GradientWorkspace& ws) const override {
    poly_.surrogate_gradient(theta, x, sigma, grad, ws);
  }
  double spin_flip_delta(const SpinVector& s, int i) const override {
    return poly_.flip_delta(s, i);
  }

  const MultilinearPolynomial& polynomial() const { return poly_; }

 private:
  MultilinearPolynomial poly_;
};

/// Projected gradient descent on the erf surrogate with a single sample of x
/// per iteration:
///   theta_0 = initial_theta(); per step draw x ~ Unif[0,1]^n,
///   g = surrogate_grad(theta, x, sigma_t), theta <- Proj(theta - gamma g).
/// Output spins are sgn(theta_T - 0.5) after the problem's post-processing.
/// Aborts with a diagnostic naming the iteration if a gradient goes
/// non-finite. Ignores config.momentum.
SolveReport heo_solve(Problem& problem, const SolverConfig& config, RngStream& rng);

/// Momentum variant: v <- kappa v - gamma g, theta <- Proj(theta + v).
/// With kappa = 0 the trajectory is bitwise identical to heo_solve.
SolveReport heo_momentum_solve(Problem& problem, const SolverConfig& config,
                               RngStream& rng);

/// Score-function (log-derivative) baseline: per iteration draw sample_count
/// spin vectors from p(s|theta) and estimate
///   grad = (1/M) sum_m f(s^m) grad_theta log p(s^m|theta),
/// with d/dtheta_i log p = 1/theta_i for s_i = +1 and -1/(1-theta_i)
/// otherwise. The score is evaluated with theta clamped into
/// [1e-6, 1 - 1e-6]; the stored theta is clamped to [0,1]. Momentum follows
/// config.momentum with the same accumulation as heo_momentum_solve.
/// theta starts at 0.5 regardless of the problem's initial_theta().
SolveReport mcge_solve(Problem& problem, const SolverConfig& config, int sample_count,
                       RngStream& rng);

/// Geometric cooling schedule for the annealing baseline. A non-positive
/// start requests calibration as 2 * median |delta f| over random
/// single-spin probes.
struct TempSchedule {
  double start = 0.0;
  double end = 1e-3;
};

/// Single-spin-flip Metropolis baseline: config.iterations counts sweeps of
/// dimension() proposals each; a flip with energy change d is accepted with
/// probability min(1, exp(-d / T_t)). Returns the best-seen spins. The
/// temperature per sweep is stored in the report's sigma trace; the variance
/// trace is zero.
SolveReport sa_solve(Problem& problem, const SolverConfig& config,
                     const TempSchedule& temps, RngStream& rng);

using SolveFn = std::function<SolveReport(Problem&, const SolverConfig&, RngStream&)>;

/// Runs `count` independent solves with child seeds derived deterministically
/// from config.seed and returns the report with the lowest best_energy
/// (earliest restart wins ties).
SolveReport restart_best(const SolveFn& solve, Problem& problem,
                         const SolverConfig& config, int count);

}  // namespace heo
