#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "heo/oracle.hpp"
#include "heo/poly.hpp"
#include "test_util.hpp"

using namespace heo;

TEST_CASE("normalize merges, cancels and validates") {
  auto merged = MultilinearPolynomial::normalize(2, {{1.0, {0, 1}}, {2.0, {1, 0}}});
  REQUIRE(merged.term_count() == 1);
  CHECK(merged.monomials()[0].coefficient == 3.0);
  CHECK(merged.monomials()[0].variables == std::vector<int>{0, 1});

  auto cancelled = MultilinearPolynomial::normalize(1, {{1.0, {0}}, {-1.0, {0}}});
  CHECK(cancelled.term_count() == 0);
  CHECK(cancelled.evaluate(Vec{0.3}) == 0.0);

  auto constant = MultilinearPolynomial::normalize(0, {{5.0, {}}});
  CHECK(constant.term_count() == 1);
  CHECK(constant.evaluate(Vec{}) == 5.0);

  CHECK_THROWS_AS(MultilinearPolynomial::normalize(2, {{1.0, {2}}}), std::invalid_argument);
  CHECK_THROWS_AS(MultilinearPolynomial::normalize(2, {{1.0, {0, 0}}}), std::invalid_argument);
}

TEST_CASE("evaluate on spins and relaxed points") {
  auto f = MultilinearPolynomial::normalize(2, {{1.0, {0, 1}}});
  SpinVector s{{1, -1}};
  CHECK(f.evaluate(s) == -1.0);

  auto affine = MultilinearPolynomial::normalize(1, {{3.0, {}}, {2.0, {0}}});
  CHECK(affine.evaluate(Vec{0.0}) == 3.0);
}

TEST_CASE("evaluate matches a naive per-monomial oracle") {
  RngStream rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    auto poly = test::random_polynomial(10, 4, rng);
    const SpinVector s = test::random_spins(10, rng);
    double expected = 0.0;
    for (const Monomial& m : poly.monomials()) {
      double prod = m.coefficient;
      for (int v : m.variables) prod *= s.values[static_cast<std::size_t>(v)];
      expected += prod;
    }
    CHECK(poly.evaluate(s) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("incidence index is consistent with the term list") {
  RngStream rng(8);
  auto poly = test::random_polynomial(12, 4, rng);
  const auto monomials = poly.monomials();
  for (int v = 0; v < poly.dimension(); ++v) {
    std::vector<int> expected;
    for (std::size_t t = 0; t < monomials.size(); ++t) {
      for (int u : monomials[t].variables) {
        if (u == v) expected.push_back(static_cast<int>(t));
      }
    }
    const auto got = poly.monomials_containing(v);
    REQUIRE(got.size() == expected.size());
    for (std::size_t k = 0; k < expected.size(); ++k) CHECK(got[k] == expected[k]);
  }
}

TEST_CASE("flip_delta equals the evaluate difference") {
  RngStream rng(9);
  auto poly = test::random_polynomial(10, 4, rng);
  for (int trial = 0; trial < 30; ++trial) {
    SpinVector s = test::random_spins(10, rng);
    const int i = static_cast<int>(rng.next_index(10));
    SpinVector flipped = s;
    flipped.values[static_cast<std::size_t>(i)] *= -1;
    CHECK(poly.flip_delta(s, i) ==
          doctest::Approx(poly.evaluate(flipped) - poly.evaluate(s)).epsilon(1e-11));
  }
}

TEST_CASE("surrogate_point basics") {
  CHECK(surrogate_point(Vec{0.4}, Vec{0.4}, 0.7)[0] == 0.0);
  const double sat = surrogate_point(Vec{0.9}, Vec{0.9 - 6.0 * 0.1}, 0.1)[0];
  CHECK(sat >= 1.0 - 1e-15);
  CHECK(surrogate_point(Vec{0.5}, Vec{0.25}, 0.5)[0] ==
        doctest::Approx(0.5204998778).epsilon(1e-7));
  CHECK_THROWS_AS(surrogate_point(Vec{0.5}, Vec{0.5}, 0.0), std::invalid_argument);
}

TEST_CASE("surrogate_gradient closed forms") {
  auto constant = MultilinearPolynomial::normalize(3, {{4.2, {}}});
  const Vec g = constant.surrogate_gradient(Vec{0.2, 0.5, 0.9}, Vec{0.1, 0.4, 0.2}, 0.7);
  CHECK(g == Vec{0.0, 0.0, 0.0});

  auto linear = MultilinearPolynomial::normalize(1, {{1.0, {0}}});
  const double sigma = 0.37;
  const Vec g1 = linear.surrogate_gradient(Vec{0.6}, Vec{0.6}, sigma);
  CHECK(g1[0] == doctest::Approx(kTwoOverSqrtPi / sigma).epsilon(1e-12));

  CHECK_THROWS_AS(linear.surrogate_gradient(Vec{0.6}, Vec{0.6}, -1.0),
                  std::invalid_argument);
}

TEST_CASE("surrogate_gradient matches central finite differences") {
  RngStream rng(100);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 4 + static_cast<int>(rng.next_index(13));  // 4..16
    auto poly = test::random_polynomial(n, 4, rng);
    Vec theta(static_cast<std::size_t>(n)), x(static_cast<std::size_t>(n));
    for (double& t : theta) t = rng.next_double();
    for (double& v : x) v = rng.next_double();
    const double sigma = 0.2 + 1.8 * rng.next_double();

    const Vec analytic = poly.surrogate_gradient(theta, x, sigma);
    const Vec numeric = finite_difference_gradient(
        [&](std::span<const double> p) {
          return poly.evaluate(surrogate_point(p, x, sigma));
        },
        theta, 1e-5);
    CHECK(test::relative_gap(analytic, numeric) <= 1e-5);
  }
}

TEST_CASE("closed_form_h special points") {
  RngStream rng(13);
  auto poly = MultilinearPolynomial::normalize(
      3, {{2.5, {}}, {1.0, {0}}, {-0.5, {1, 2}}, {0.25, {0, 1, 2}}});
  ParamVector half{Vec{0.5, 0.5, 0.5}};
  CHECK(poly.closed_form_h(half) == doctest::Approx(2.5));  // constant term only

  auto pair = MultilinearPolynomial::normalize(2, {{1.0, {0, 1}}});
  CHECK(pair.closed_form_h(ParamVector{Vec{1.0, 0.0}}) == doctest::Approx(-1.0));
  (void)rng;
}

TEST_CASE("closed_form_h equals the exhaustive expectation") {
  const int n = 10;
  RngStream rng(14);
  for (int trial = 0; trial < 5; ++trial) {
    auto poly = test::random_polynomial(n, 3, rng);
    Vec theta(n);
    for (double& t : theta) t = rng.next_double();
    double expectation = 0.0;
    for (std::uint64_t mask = 0; mask < (1u << n); ++mask) {
      const SpinVector s = test::spins_from_mask(mask, n);
      expectation += test::bernoulli_probability(s, theta) * poly.evaluate(s);
    }
    const double h = poly.closed_form_h(ParamVector{theta});
    CHECK(h == doctest::Approx(expectation).epsilon(1e-10));
  }
}

// Split quadrature oracle for phi(theta, sigma) = int_0^1 erf((theta-x)/sigma) dx:
// outside theta +- 10 sigma the integrand is +-1 to ~1e-44; the transition
// window is integrated with Simpson's rule.
static double phi_quadrature(double theta, double sigma) {
  const double lo = std::max(0.0, theta - 10.0 * sigma);
  const double hi = std::min(1.0, theta + 10.0 * sigma);
  double total = 0.0;
  if (lo > 0.0) total += lo * 1.0;          // x < theta - 10 sigma: erf ~ +1
  if (hi < 1.0) total += (1.0 - hi) * -1.0; // x > theta + 10 sigma: erf ~ -1
  if (hi > lo) {
    const int steps = 4000;  // even
    const double h = (hi - lo) / steps;
    auto f = [&](double x) { return heo::erf((theta - x) / sigma); };
    double simpson = f(lo) + f(hi);
    for (int k = 1; k < steps; ++k) simpson += f(lo + k * h) * (k % 2 ? 4.0 : 2.0);
    total += simpson * h / 3.0;
  }
  return total;
}

TEST_CASE("smoothed_coordinate against quadrature") {
  CHECK(smoothed_coordinate(0.5, 0.37) == 0.0);
  CHECK(smoothed_coordinate(0.5, 1e-3) == 0.0);
  CHECK(smoothed_coordinate(0.75, 1e-4) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(phi_quadrature(0.75, 1e-4) == doctest::Approx(0.5).epsilon(1e-6));

  RngStream rng(15);
  for (int trial = 0; trial < 25; ++trial) {
    const double theta = rng.next_double();
    const double sigma = 0.01 + rng.next_double();
    CHECK(smoothed_coordinate(theta, sigma) ==
          doctest::Approx(phi_quadrature(theta, sigma)).epsilon(1e-8));
  }
}

TEST_CASE("smoothed_coordinate odd symmetry about one half") {
  RngStream rng(16);
  for (int trial = 0; trial < 100; ++trial) {
    const double theta = 3.0 * rng.next_double() - 1.0;  // also outside the cube
    const double sigma = 0.05 + 2.0 * rng.next_double();
    // 1 - theta itself rounds, so exact equality only holds up to one ulp
    CHECK(smoothed_coordinate(theta, sigma) ==
          doctest::Approx(-smoothed_coordinate(1.0 - theta, sigma)).epsilon(1e-14));
  }
  CHECK(smoothed_coordinate(0.5, 0.73) == 0.0);  // the fixed point is exact
}

TEST_CASE("exact_smoothed_expectation agrees with Monte Carlo") {
  auto poly = MultilinearPolynomial::normalize(2, {{1.0, {0, 1}}});
  RngStream rng(17);
  const Vec theta{0.3, 0.8};
  const double sigma = 0.45;
  const double exact = poly.exact_smoothed_expectation(theta, sigma);
  const McEstimate mc = mc_expectation(
      [&](std::span<const double> x) {
        return poly.evaluate(surrogate_point(theta, x, sigma));
      },
      2, 100000, rng);
  CHECK(std::fabs(mc.mean - exact) <= 3.0 * mc.std_error);
}

TEST_CASE("exact_smoothed_expectation converges to closed_form_h") {
  RngStream rng(18);
  for (int trial = 0; trial < 10; ++trial) {
    auto poly = test::random_polynomial(8, 3, rng);
    Vec theta(8);
    for (double& t : theta) t = 0.02 + 0.96 * rng.next_double();
    const double h = poly.closed_form_h(ParamVector{theta});
    double prev_gap = std::numeric_limits<double>::infinity();
    for (double sigma : {1e-2, 1e-3, 1e-4}) {
      const double gap = std::fabs(poly.exact_smoothed_expectation(theta, sigma) - h);
      CHECK(gap <= std::max(prev_gap, 1e-12));
      prev_gap = gap;
    }
    CHECK(prev_gap <= 1e-10);
  }
}

TEST_CASE("saturated extended vertices reproduce spin energies") {
  RngStream rng(19);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 6;
    auto poly = test::random_polynomial(n, 3, rng);
    for (std::uint64_t mask = 0; mask < (1u << n); ++mask) {
      const SpinVector s = test::spins_from_mask(mask, n);
      Vec extended(n);
      for (int i = 0; i < n; ++i) {
        extended[static_cast<std::size_t>(i)] =
            s.values[static_cast<std::size_t>(i)] > 0 ? 11.0 : -10.0;
      }
      CHECK(std::fabs(poly.exact_smoothed_expectation(extended, 1.0) - poly.evaluate(s)) <=
            1e-12);
    }
  }
}

TEST_CASE("evolution-strategy identity spot check") {
  // grad of u_sigma(theta) equals (1/c) E[h(theta + c z) z] with c = sigma/sqrt(2),
  // h extended by clamping E[s_i] into [-1, 1].
  const int n = 4;
  RngStream rng(20);
  auto poly = test::random_polynomial(n, 3, rng);
  const Vec theta{0.35, 0.6, 0.5, 0.75};
  const double sigma = 0.6;
  const double c = sigma / std::sqrt(2.0);

  const Vec grad_fd = finite_difference_gradient(
      [&](std::span<const double> p) { return poly.exact_smoothed_expectation(p, sigma); },
      theta, 1e-6);

  const std::size_t samples = 1000000;
  Vec mean(n, 0.0), m2(n, 0.0);
  Vec point(n), clamped(n);
  for (std::size_t k = 0; k < samples; ++k) {
    Vec z(n);
    for (int i = 0; i < n; ++i) z[static_cast<std::size_t>(i)] = rng.next_gaussian();
    for (int i = 0; i < n; ++i) {
      point[static_cast<std::size_t>(i)] =
          theta[static_cast<std::size_t>(i)] + c * z[static_cast<std::size_t>(i)];
      clamped[static_cast<std::size_t>(i)] =
          std::clamp(2.0 * point[static_cast<std::size_t>(i)] - 1.0, -1.0, 1.0);
    }
    const double h = poly.evaluate(clamped);
    for (int i = 0; i < n; ++i) {
      const double v = h * z[static_cast<std::size_t>(i)] / c;
      const double d = v - mean[static_cast<std::size_t>(i)];
      mean[static_cast<std::size_t>(i)] += d / static_cast<double>(k + 1);
      m2[static_cast<std::size_t>(i)] += d * (v - mean[static_cast<std::size_t>(i)]);
    }
  }
  for (int i = 0; i < n; ++i) {
    const double se = std::sqrt(m2[static_cast<std::size_t>(i)] /
                                static_cast<double>(samples - 1) /
                                static_cast<double>(samples));
    CHECK(std::fabs(mean[static_cast<std::size_t>(i)] - grad_fd[static_cast<std::size_t>(i)]) <=
          3.0 * se);
  }
}

TEST_CASE("exact_smoothed_expectation input validation") {
  auto poly = MultilinearPolynomial::normalize(1, {{1.0, {0}}});
  CHECK_THROWS_AS(poly.exact_smoothed_expectation(Vec{0.5}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(poly.exact_smoothed_expectation(Vec{std::nan("")}, 1.0),
                  std::invalid_argument);
}
