#include "heo/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace heo {

namespace {

void check_dimension_cap(int n, const char* who) {
  if (n < 1) throw std::invalid_argument(std::string(who) + ": dimension must be >= 1");
  if (n > kBruteForceMaxDim)
    throw std::invalid_argument(std::string(who) + ": dimension " + std::to_string(n) +
                                " exceeds the exhaustive-search cap of " +
                                std::to_string(kBruteForceMaxDim));
}

void spins_from_mask(std::uint64_t mask, SpinVector& s) {
  for (int i = 0; i < s.size(); ++i) {
    s.values[static_cast<std::size_t>(i)] = (mask >> i) & 1u ? 1 : -1;
  }
}

}  // namespace

OracleResult brute_force_min(const Problem& problem) {
  const int n = problem.dimension();
  check_dimension_cap(n, "brute_force_min");
  const std::uint64_t total = std::uint64_t{1} << n;

  OracleResult result;
  result.enumerated = total;
  SpinVector s;
  s.values.resize(static_cast<std::size_t>(n));
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    spins_from_mask(mask, s);
    const double e = problem.spin_energy(s);
    if (mask == 0 || e < result.optimum) {
      result.optimum = e;
      result.minimizers.clear();
      result.minimizers.push_back(s);
      result.minimizer_count = 1;
    } else if (e == result.optimum) {
      if (result.minimizers.size() < kMinimizerListCap) result.minimizers.push_back(s);
      result.minimizer_count++;
    }
  }
  return result;
}

OracleResult brute_force_mvc(const WeightedGraph& graph) {
  const int n = graph.vertex_count;
  check_dimension_cap(n, "brute_force_mvc");

  OracleResult result;
  SpinVector s;
  s.values.resize(static_cast<std::size_t>(n));
  for (int k = 0; k <= n; ++k) {
    bool found = false;
    // Gosper's hack over all n-bit masks with k set bits, ascending
    std::uint64_t mask = k == 0 ? 0 : (std::uint64_t{1} << k) - 1;
    const std::uint64_t limit = std::uint64_t{1} << n;
    for (;;) {
      result.enumerated++;
      spins_from_mask(mask, s);
      if (is_vertex_cover(graph, s)) {
        found = true;
        if (result.minimizers.size() < kMinimizerListCap) result.minimizers.push_back(s);
        result.minimizer_count++;
      }
      if (k == 0) break;
      const std::uint64_t c = mask & (~mask + 1);
      const std::uint64_t r = mask + c;
      mask = (((r ^ mask) >> 2) / c) | r;
      if (mask >= limit) break;
    }
    if (found) {
      result.optimum = k;
      return result;
    }
  }
  result.optimum = n;  // unreachable: all-selected is always a cover
  return result;
}

bool formula_satisfiable(const CnfFormula& formula) {
  const int n = formula.variable_count;
  check_dimension_cap(n, "formula_satisfiable");
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    bool satisfied = true;
    for (const CnfClause& c : formula.clauses) {
      bool clause_true = false;
      for (const CnfLiteral& lit : c.literals) {
        const int s = (mask >> lit.variable) & 1u ? 1 : -1;
        if (lit.polarity * s > 0) {
          clause_true = true;
          break;
        }
      }
      if (!clause_true) {
        satisfied = false;
        break;
      }
    }
    if (satisfied) return true;
  }
  return false;
}

Vec finite_difference_gradient(const std::function<double(std::span<const double>)>& fn,
                               std::span<const double> point, double step) {
  if (!(step > 0.0))
    throw std::invalid_argument("finite_difference_gradient: step must be > 0");
  Vec x(point.begin(), point.end());
  Vec grad(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double saved = x[i];
    x[i] = saved + step;
    const double fp = fn(x);
    x[i] = saved - step;
    const double fm = fn(x);
    x[i] = saved;
    if (!std::isfinite(fp) || !std::isfinite(fm))
      throw std::runtime_error("finite_difference_gradient: non-finite evaluation");
    grad[i] = (fp - fm) / (2.0 * step);
  }
  return grad;
}

McEstimate mc_expectation(const std::function<double(std::span<const double>)>& fn,
                          int n, std::size_t samples, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("mc_expectation: n must be >= 1");
  if (samples < 2) throw std::invalid_argument("mc_expectation: need at least 2 samples");
  Vec x(static_cast<std::size_t>(n));
  double mean = 0.0;
  double m2 = 0.0;  // Welford
  for (std::size_t k = 0; k < samples; ++k) {
    fill_uniform_cube(x, rng);
    const double v = fn(x);
    const double d = v - mean;
    mean += d / static_cast<double>(k + 1);
    m2 += d * (v - mean);
  }
  const double variance = m2 / static_cast<double>(samples - 1);
  return {mean, std::sqrt(variance / static_cast<double>(samples)), samples};
}

OracleResult OracleCache::get_or_compute(std::uint64_t key,
                                         const std::function<OracleResult()>& compute) {
  {
    std::lock_guard lock(mutex_);
    auto it = results_.find(key);
    if (it != results_.end()) return it->second;
  }
  OracleResult r = compute();
  std::lock_guard lock(mutex_);
  return results_.emplace(key, std::move(r)).first->second;
}

}  // namespace heo
