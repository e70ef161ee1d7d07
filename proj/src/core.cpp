#include "heo/core.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace heo {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

std::uint64_t RngStream::next_u64() { return engine_(); }

double RngStream::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::next_gaussian() {
  // u1 in (0,1] so the log never sees zero.
  const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  const double u2 = next_double();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::size_t RngStream::next_index(std::size_t bound) {
  if (bound == 0) throw std::invalid_argument("next_index: bound must be >= 1");
  return static_cast<std::size_t>(
      (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
}

RngStream RngStream::child(std::uint64_t index) const {
  return RngStream(derive_child_seed(seed_, index));
}

std::uint64_t derive_child_seed(std::uint64_t parent_seed, std::uint64_t index) {
  return splitmix64(parent_seed ^ splitmix64(index + 1));
}

bool spins_valid(const SpinVector& s) {
  for (int v : s.values) {
    if (v != -1 && v != 1) return false;
  }
  return true;
}

void SolverConfig::validate() const {
  if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  if (!(step_size > 0.0)) throw std::invalid_argument("step_size must be > 0");
  if (!(momentum >= 0.0 && momentum < 1.0))
    throw std::invalid_argument("momentum must be in [0, 1)");
  if (!(schedule.start > 0.0)) throw std::invalid_argument("sigma start must be > 0");
  if (!(schedule.end >= 0.0)) throw std::invalid_argument("sigma end must be >= 0");
  if (!(schedule.perturb_delta >= 0.0 && schedule.perturb_delta < 1.0))
    throw std::invalid_argument("perturb_delta must be in [0, 1)");
  if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
}

ParamVector project_unit_cube(std::span<const double> v) {
  ParamVector out;
  out.values.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i]))
      throw std::invalid_argument("project_unit_cube: non-finite entry at index " +
                                  std::to_string(i));
    out.values.push_back(std::min(1.0, std::max(0.0, v[i])));
  }
  return out;
}

void project_in_place(Vec& v) {
  for (double& x : v) x = std::min(1.0, std::max(0.0, x));
}

SpinVector binarize(std::span<const double> theta) {
  SpinVector s;
  s.values.reserve(theta.size());
  for (double t : theta) s.values.push_back(t >= 0.5 ? 1 : -1);
  return s;
}

SpinVector binarize(const ParamVector& theta) {
  return binarize(std::span<const double>(theta.values));
}

double total_variance(std::span<const double> theta) {
  double v = 0.0;
  for (double t : theta) v += t * (1.0 - t);
  return v;
}

double total_variance(const ParamVector& theta) {
  return total_variance(std::span<const double>(theta.values));
}

double erf(double x) {
  const double a = std::erf(std::fabs(x));
  return std::signbit(x) ? -a : a;
}

double erf_prime(double x) { return kTwoOverSqrtPi * std::exp(-x * x); }

double sigma_at(const SigmaSchedule& schedule, int t, int iterations, RngStream& rng) {
  if (t < 0 || t >= iterations)
    throw std::invalid_argument("sigma_at: step " + std::to_string(t) +
                                " outside 0.." + std::to_string(iterations - 1));
  double sigma = schedule.start +
                 (schedule.end - schedule.start) * static_cast<double>(t) /
                     static_cast<double>(iterations);
  if (schedule.perturb_delta > 0.0) {
    const double c =
        1.0 + schedule.perturb_delta * (2.0 * rng.next_double() - 1.0);
    sigma *= c;
  }
  return std::max(sigma, kSigmaFloor);
}

Vec sample_uniform_cube(int n, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("sample_uniform_cube: n must be >= 1");
  Vec out(static_cast<std::size_t>(n));
  fill_uniform_cube(out, rng);
  return out;
}

void fill_uniform_cube(std::span<double> out, RngStream& rng) {
  for (double& x : out) x = rng.next_double();
}

}  // namespace heo
