#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "heo/io.hpp"
#include "heo/oracle.hpp"
#include "test_util.hpp"

using namespace heo;

TEST_CASE("brute_force_min on f = s0") {
  PolynomialProblem problem(MultilinearPolynomial::normalize(1, {{1.0, {0}}}));
  const OracleResult r = brute_force_min(problem);
  CHECK(r.optimum == -1.0);
  CHECK(r.minimizer_count == 1);
  CHECK(r.minimizers.front().values == std::vector<int>{-1});
  CHECK(r.enumerated == 2);
}

TEST_CASE("brute_force_min on a constant") {
  PolynomialProblem problem(MultilinearPolynomial::normalize(4, {{2.0, {}}}));
  const OracleResult r = brute_force_min(problem);
  CHECK(r.optimum == 2.0);
  CHECK(r.minimizer_count == 16);
  CHECK(r.minimizers.size() == 16);
  // enumeration order: ascending assignment mask, bit i set <=> s_i = +1
  CHECK(r.minimizers.front().values == std::vector<int>{-1, -1, -1, -1});
  CHECK(r.minimizers[1].values == std::vector<int>{1, -1, -1, -1});
  CHECK(r.minimizers.back().values == std::vector<int>{1, 1, 1, 1});
}

TEST_CASE("brute_force_min on the four cycle has two alternating minimizers") {
  const WeightedGraph cycle =
      WeightedGraph::create(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {0, 3, 1.0}});
  MaxCutProblem problem(cycle);
  const OracleResult r = brute_force_min(problem);
  CHECK(r.optimum == -4.0);
  CHECK(r.minimizer_count == 2);
  // ascending mask order: 0b0101 = {s0, s2 selected} comes first
  CHECK(r.minimizers[0].values == std::vector<int>{1, -1, 1, -1});
  CHECK(r.minimizers[1].values == std::vector<int>{-1, 1, -1, 1});
}

TEST_CASE("brute force cap is enforced") {
  PolynomialProblem problem(MultilinearPolynomial::normalize(27, {{1.0, {0}}}));
  CHECK_THROWS_WITH_AS(brute_force_min(problem), doctest::Contains("cap"),
                       std::invalid_argument);
}

TEST_CASE("brute_force_mvc cases") {
  const OracleResult tri = brute_force_mvc(
      WeightedGraph::create(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}}));
  CHECK(tri.optimum == 2.0);
  CHECK(tri.minimizer_count == 3);

  const OracleResult edgeless = brute_force_mvc(WeightedGraph::create(5, {}));
  CHECK(edgeless.optimum == 0.0);
  CHECK(edgeless.minimizer_count == 1);

  std::vector<WeightedGraph::Edge> star_edges;
  for (int i = 1; i <= 5; ++i) star_edges.push_back({0, i, 1.0});
  const OracleResult star = brute_force_mvc(WeightedGraph::create(6, star_edges));
  CHECK(star.optimum == 1.0);
  CHECK(star.minimizer_count == 1);
  CHECK(star.minimizers.front().values.front() == 1);
}

TEST_CASE("formula satisfiability") {
  // (x1) forced three ways is satisfiable
  const CnfFormula sat = parse_dimacs_cnf("p cnf 3 1\n1 2 3 0\n");
  CHECK(formula_satisfiable(sat));

  // all eight sign patterns on three variables: unsatisfiable
  std::string text = "p cnf 3 8\n";
  for (int mask = 0; mask < 8; ++mask) {
    text += std::to_string(mask & 1 ? 1 : -1) + " ";
    text += std::to_string(mask & 2 ? 2 : -2) + " ";
    text += std::to_string(mask & 4 ? 3 : -3) + " 0\n";
  }
  CHECK_FALSE(formula_satisfiable(parse_dimacs_cnf(text)));
}

TEST_CASE("finite differences on linear and quadratic functions") {
  const Vec linear_grad = finite_difference_gradient(
      [](std::span<const double> x) { return 3.0 * x[0] - 2.0 * x[1]; }, Vec{0.3, 0.7},
      1e-3);
  CHECK(linear_grad[0] == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(linear_grad[1] == doctest::Approx(-2.0).epsilon(1e-9));

  const Vec quad_grad = finite_difference_gradient(
      [](std::span<const double> x) { return x[0] * x[0]; }, Vec{1.0}, 1e-5);
  CHECK(std::fabs(quad_grad[0] - 2.0) <= 1e-9);

  CHECK_THROWS_AS(finite_difference_gradient(
                      [](std::span<const double>) { return std::nan(""); }, Vec{0.0}, 1e-5),
                  std::runtime_error);
  CHECK_THROWS_AS(finite_difference_gradient(
                      [](std::span<const double> x) { return x[0]; }, Vec{0.0}, 0.0),
                  std::invalid_argument);
}

TEST_CASE("mc_expectation") {
  RngStream rng(5);
  const McEstimate constant = mc_expectation(
      [](std::span<const double>) { return 4.2; }, 3, 1000, rng);
  CHECK(constant.mean == doctest::Approx(4.2));
  CHECK(constant.std_error == doctest::Approx(0.0));

  const McEstimate mean_x = mc_expectation(
      [](std::span<const double> x) { return x[0]; }, 2, 100000, rng);
  CHECK(std::fabs(mean_x.mean - 0.5) <= 3.0 * mean_x.std_error);

  CHECK_THROWS_AS(mc_expectation([](std::span<const double>) { return 0.0; }, 1, 1, rng),
                  std::invalid_argument);
}

TEST_CASE("oracle cache returns memoized results") {
  OracleCache cache;
  int computed = 0;
  auto expensive = [&]() {
    computed++;
    PolynomialProblem p(MultilinearPolynomial::normalize(1, {{1.0, {0}}}));
    return brute_force_min(p);
  };
  const OracleResult a = cache.get_or_compute(1, expensive);
  const OracleResult b = cache.get_or_compute(1, expensive);
  CHECK(computed == 1);
  CHECK(a.optimum == b.optimum);
  cache.get_or_compute(2, expensive);
  CHECK(computed == 2);
}
