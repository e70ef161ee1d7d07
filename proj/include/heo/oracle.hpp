#pragma once

#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <unordered_map>

#include "heo/problems.hpp"
#include "heo/solvers.hpp"

namespace heo {

/// Exhaustive checks are refused beyond this dimension (2^26 evaluations).
inline constexpr int kBruteForceMaxDim = 26;

/// Minimizer lists are truncated here; minimizer_count always holds the full
/// total.
inline constexpr std::size_t kMinimizerListCap = 65536;

struct OracleResult {
  double optimum = 0.0;
  std::vector<SpinVector> minimizers;  // in enumeration order, possibly truncated
  std::uint64_t minimizer_count = 0;
  std::uint64_t enumerated = 0;
};

/// Exhaustive minimization over all 2^n spin vectors. Enumeration order is
/// lexicographic in the assignment mask, bit i set meaning s_i = +1, mask
/// ascending from 0; minimizers are reported in that order. Throws for
/// dimensions over kBruteForceMaxDim.
OracleResult brute_force_min(const Problem& problem);

/// Minimum vertex cover by enumerating subsets in increasing cardinality and
/// returning every cover of the first feasible size (optimum is the cover
/// size). Same dimension cap as brute_force_min.
OracleResult brute_force_mvc(const WeightedGraph& graph);

/// Early-exit satisfiability check by enumeration.
bool formula_satisfiable(const CnfFormula& formula);

/// Central differences (f(x + h e_i) - f(x - h e_i)) / (2h). Throws when an
/// evaluation is non-finite.
Vec finite_difference_gradient(const std::function<double(std::span<const double>)>& fn,
                               std::span<const double> point, double step);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

/// Sample mean and standard error of fn over uniform draws from [0,1]^n.
/// samples >= 2.
McEstimate mc_expectation(const std::function<double(std::span<const double>)>& fn,
                          int n, std::size_t samples, RngStream& rng);

/// Keyed memo for oracle results so acceptance suites do not re-enumerate the
/// same instance; callers supply collision-free keys.
class OracleCache {
 public:
  OracleResult get_or_compute(std::uint64_t key,
                              const std::function<OracleResult()>& compute);

 private:
  std::mutex mutex_;
  std::unordered_map<std::uint64_t, OracleResult> results_;
};

}  // namespace heo
