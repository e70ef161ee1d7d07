#pragma once

#include <span>
#include <vector>

#include "heo/core.hpp"

namespace heo {

/// One term of a multilinear polynomial: coefficient * prod_{i in variables} s_i.
/// Variables are distinct 0-based indices in strictly increasing order; an
/// empty list is the constant term.
struct Monomial {
  double coefficient = 0.0;
  std::vector<int> variables;

  int degree() const { return static_cast<int>(variables.size()); }
  bool operator==(const Monomial&) const = default;
};

/// Reusable scratch space for surrogate gradient evaluation so solver loops
/// stay allocation-free.
struct GradientWorkspace {
  Vec y;
};

/// Sparse multilinear polynomial
///     f(s) = a_0 + sum_i a_i s_i + sum_{i<j} a_ij s_i s_j + ...
/// Terms are stored packed (CSR-style) and sorted by variable set; a
/// per-variable incidence index maps each variable to the terms containing
/// it. Immutable after normalize(); evaluation and gradients are pure and
/// safe to call concurrently.
class MultilinearPolynomial {
 public:
  MultilinearPolynomial() = default;

  /// Builds a normalized polynomial over n variables: duplicate variable sets
  /// merged by coefficient addition, exact-zero coefficients dropped,
  /// incidence index built. Throws std::invalid_argument for indices outside
  /// [0, n), duplicated indices within a term, or unsorted terms.
  static MultilinearPolynomial normalize(int n, std::vector<Monomial> terms);

  int dimension() const { return n_; }
  std::size_t term_count() const { return coefficients_.size(); }

  /// Materialized term list in canonical (variable-set lexicographic) order.
  std::vector<Monomial> monomials() const;

  /// Indices (into monomials()) of the terms containing `variable`.
  std::span<const int> monomials_containing(int variable) const;

  /// sum_m coef_m * prod_{i in vars_m} y_i. On spin vectors this is f(s).
  double evaluate(std::span<const double> y) const;
  double evaluate(const SpinVector& s) const;

  /// Energy change f(s with spin i flipped) - f(s). O(degree) per incident
  /// term via the incidence index.
  double flip_delta(const SpinVector& s, int i) const;

  /// Gradient of f(erf((theta - x)/sigma)) with respect to theta. Entry i is
  ///   [sum over terms m containing i of coef_m * prod_{j in m, j != i} y_j]
  ///   * erf'((theta_i - x_i)/sigma) / sigma
  /// with y the surrogate point. The inner products are recomputed per term
  /// (no division), so a zero y_j never poisons the others. Cost is linear in
  /// the total term size for the bounded degrees used here.
  void surrogate_gradient(std::span<const double> theta, std::span<const double> x,
                          double sigma, std::span<double> grad,
                          GradientWorkspace& ws) const;
  Vec surrogate_gradient(std::span<const double> theta, std::span<const double> x,
                         double sigma) const;

  /// h(theta) = E_{p(s|theta)}[f(s)] = f evaluated at 2*theta - 1
  /// (coordinates independent, E[s_i] = 2 theta_i - 1, f multilinear).
  double closed_form_h(const ParamVector& theta) const;

  /// Exact smoothed expectation E_{x~U[0,1]^n}[f(erf((theta - x)/sigma))]:
  /// each s_i is replaced by smoothed_coordinate(theta_i, sigma) and the
  /// polynomial is evaluated. Test oracle, not a solver path. Accepts theta
  /// outside the unit cube (extended parameters). Throws for sigma <= 0 or
  /// non-finite theta.
  double exact_smoothed_expectation(std::span<const double> theta, double sigma) const;

 private:
  int n_ = 0;
  std::vector<double> coefficients_;
  std::vector<int> term_offsets_;    // size term_count() + 1
  std::vector<int> term_variables_;  // flattened, sorted within each term
  std::vector<int> incidence_offsets_;  // size n + 1
  std::vector<int> incidence_terms_;
};

/// y_i = erf((theta_i - x_i)/sigma). Throws for sigma <= 0 or length mismatch.
Vec surrogate_point(std::span<const double> theta, std::span<const double> x,
                    double sigma);

/// phi(theta, sigma) = E_{x~U[0,1]}[erf((theta - x)/sigma)]
///                   = sigma * (G(theta/sigma) - G((theta-1)/sigma)),
/// G(t) = t erf(t) + exp(-t^2)/sqrt(pi). Odd about theta = 1/2 and -> 2*theta-1
/// as sigma -> 0 for theta in (0,1).
double smoothed_coordinate(double theta, double sigma);

}  // namespace heo
