#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace heo {

using Vec = std::vector<double>;

/// Deterministic pseudo-random stream seeded from a 64-bit value.
/// Identical seeds yield identical draw sequences across runs and platforms
/// for the same build (mt19937_64 with explicit bit-to-double conversion,
/// no distribution objects). No global state: every stochastic operation
/// takes an explicit stream.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  /// The seed this stream was created with.
  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64();

  /// Uniform on [0, 1), 53-bit resolution.
  double next_double();

  /// Standard normal via Box-Muller (two uniforms per draw).
  double next_gaussian();

  /// Uniform on {0, ..., bound-1}; bound >= 1.
  std::size_t next_index(std::size_t bound);

  /// Independent stream derived from this stream's seed and an index.
  /// Does not consume or depend on the current draw position.
  RngStream child(std::uint64_t index) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// Deterministic child-seed derivation (splittable counter scheme).
std::uint64_t derive_child_seed(std::uint64_t parent_seed, std::uint64_t index);

/// Assignment s in {-1,+1}^n, the discrete solution.
struct SpinVector {
  std::vector<int> values;

  int size() const { return static_cast<int>(values.size()); }
  bool operator==(const SpinVector&) const = default;
};

/// True iff every entry is -1 or +1.
bool spins_valid(const SpinVector& s);

/// Bernoulli parameters in [0,1]^n. Entries stay inside the unit cube after
/// any public mutation; projection is the enforcement mechanism.
struct ParamVector {
  Vec values;

  int size() const { return static_cast<int>(values.size()); }
};

enum class ScheduleShape { linear };

/// Per-iteration smoothing width sigma_t. With perturb_delta = 0 the value at
/// step t is start + (end - start) * t / T; with delta > 0 it is additionally
/// multiplied by c_t ~ Unif[1-delta, 1+delta]. Always floored at kSigmaFloor.
struct SigmaSchedule {
  double start = 2.0;
  double end = 0.0;
  ScheduleShape shape = ScheduleShape::linear;
  double perturb_delta = 0.0;  // in [0, 1)
};

struct SolverConfig {
  int iterations = 5000;     // T >= 1
  double step_size = 2.0;    // gamma > 0
  double momentum = 0.0;     // kappa in [0, 1)
  SigmaSchedule schedule;
  std::uint64_t seed = 0;
  int restarts = 1;

  /// Throws std::invalid_argument when any field violates its range.
  void validate() const;
};

/// Per-iteration gradient norm and the sigma actually used. The simulated
/// annealing baseline stores its temperature in the sigma slot.
struct GradientTrace {
  Vec grad_norm;
  Vec sigma;
};

struct SolveReport {
  SpinVector best_spins;
  double best_energy = 0.0;
  Vec energy_trace;    // f(sgn(theta_t - 0.5)) per iteration
  Vec variance_trace;  // V(theta_t) per iteration
  GradientTrace gradient_trace;
  double wall_time_per_iteration_ms = 0.0;
  std::uint64_t seed_used = 0;
};

inline constexpr double kSigmaFloor = 1e-6;
inline constexpr double kTwoOverSqrtPi = 1.1283791670955126;  // 2/sqrt(pi)

/// Proj_I(v)_i = min(1, max(0, v_i)). Throws on non-finite entries.
ParamVector project_unit_cube(std::span<const double> v);

/// In-place clamp to [0,1] (solver hot path; entries assumed finite).
void project_in_place(Vec& v);

/// sgn(theta - 0.5) with the tie rule sgn(0) := +1.
SpinVector binarize(std::span<const double> theta);
SpinVector binarize(const ParamVector& theta);

/// V(theta) = sum_i theta_i (1 - theta_i). Zero exactly on cube vertices,
/// maximal (n/4) at the all-0.5 point.
double total_variance(std::span<const double> theta);
double total_variance(const ParamVector& theta);

/// Error function with exactly enforced odd symmetry: erf(-x) == -erf(x).
double erf(double x);

/// d/dx erf(x) = (2/sqrt(pi)) exp(-x^2).
double erf_prime(double x);

/// Sigma at step t of T. Consumes one draw from rng iff perturb_delta > 0.
/// Throws std::invalid_argument unless 0 <= t < T.
double sigma_at(const SigmaSchedule& schedule, int t, int iterations, RngStream& rng);

/// n independent draws uniform on [0,1). n >= 1.
Vec sample_uniform_cube(int n, RngStream& rng);

/// Fills an existing buffer with uniform draws (allocation-free hot path).
void fill_uniform_cube(std::span<double> out, RngStream& rng);

}  // namespace heo
