#include "heo/poly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace heo {

MultilinearPolynomial MultilinearPolynomial::normalize(int n,
                                                       std::vector<Monomial> terms) {
  if (n < 0) throw std::invalid_argument("normalize: dimension must be >= 0");
  for (Monomial& m : terms) {
    std::sort(m.variables.begin(), m.variables.end());
    for (std::size_t k = 0; k < m.variables.size(); ++k) {
      const int v = m.variables[k];
      if (v < 0 || v >= n)
        throw std::invalid_argument("normalize: variable index " + std::to_string(v) +
                                    " outside [0, " + std::to_string(n) + ")");
      if (k > 0 && m.variables[k - 1] == v)
        throw std::invalid_argument("normalize: repeated variable " + std::to_string(v) +
                                    " within a monomial");
    }
  }

  std::sort(terms.begin(), terms.end(), [](const Monomial& a, const Monomial& b) {
    return a.variables < b.variables;
  });

  MultilinearPolynomial p;
  p.n_ = n;
  std::size_t i = 0;
  while (i < terms.size()) {
    double coef = terms[i].coefficient;
    std::size_t j = i + 1;
    while (j < terms.size() && terms[j].variables == terms[i].variables) {
      coef += terms[j].coefficient;
      ++j;
    }
    if (coef != 0.0) {
      p.coefficients_.push_back(coef);
      p.term_offsets_.push_back(static_cast<int>(p.term_variables_.size()));
      p.term_variables_.insert(p.term_variables_.end(), terms[i].variables.begin(),
                               terms[i].variables.end());
    }
    i = j;
  }
  p.term_offsets_.push_back(static_cast<int>(p.term_variables_.size()));

  // incidence index: counting sort of (variable, term) pairs
  std::vector<int> counts(static_cast<std::size_t>(n) + 1, 0);
  for (int v : p.term_variables_) counts[static_cast<std::size_t>(v) + 1]++;
  std::partial_sum(counts.begin(), counts.end(), counts.begin());
  p.incidence_offsets_ = counts;
  p.incidence_terms_.resize(p.term_variables_.size());
  std::vector<int> cursor(p.incidence_offsets_.begin(), p.incidence_offsets_.end() - 1);
  for (std::size_t t = 0; t < p.coefficients_.size(); ++t) {
    for (int k = p.term_offsets_[t]; k < p.term_offsets_[t + 1]; ++k) {
      const int v = p.term_variables_[static_cast<std::size_t>(k)];
      p.incidence_terms_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(v)]++)] =
          static_cast<int>(t);
    }
  }
  return p;
}

std::vector<Monomial> MultilinearPolynomial::monomials() const {
  std::vector<Monomial> out(term_count());
  for (std::size_t t = 0; t < term_count(); ++t) {
    out[t].coefficient = coefficients_[t];
    out[t].variables.assign(term_variables_.begin() + term_offsets_[t],
                            term_variables_.begin() + term_offsets_[t + 1]);
  }
  return out;
}

std::span<const int> MultilinearPolynomial::monomials_containing(int variable) const {
  if (variable < 0 || variable >= n_)
    throw std::invalid_argument("monomials_containing: bad variable index");
  const auto begin = incidence_offsets_[static_cast<std::size_t>(variable)];
  const auto end = incidence_offsets_[static_cast<std::size_t>(variable) + 1];
  return {incidence_terms_.data() + begin, static_cast<std::size_t>(end - begin)};
}

double MultilinearPolynomial::evaluate(std::span<const double> y) const {
  double sum = 0.0;
  for (std::size_t t = 0; t < coefficients_.size(); ++t) {
    double prod = coefficients_[t];
    for (int k = term_offsets_[t]; k < term_offsets_[t + 1]; ++k) {
      prod *= y[static_cast<std::size_t>(term_variables_[static_cast<std::size_t>(k)])];
    }
    sum += prod;
  }
  return sum;
}

double MultilinearPolynomial::evaluate(const SpinVector& s) const {
  double sum = 0.0;
  for (std::size_t t = 0; t < coefficients_.size(); ++t) {
    int sign = 1;
    for (int k = term_offsets_[t]; k < term_offsets_[t + 1]; ++k) {
      sign *= s.values[static_cast<std::size_t>(
          term_variables_[static_cast<std::size_t>(k)])];
    }
    sum += coefficients_[t] * sign;
  }
  return sum;
}

double MultilinearPolynomial::flip_delta(const SpinVector& s, int i) const {
  // flipping s_i negates exactly the terms containing i
  double incident = 0.0;
  for (int t : monomials_containing(i)) {
    int sign = 1;
    for (int k = term_offsets_[t]; k < term_offsets_[t + 1]; ++k) {
      sign *= s.values[static_cast<std::size_t>(
          term_variables_[static_cast<std::size_t>(k)])];
    }
    incident += coefficients_[static_cast<std::size_t>(t)] * sign;
  }
  return -2.0 * incident;
}

void MultilinearPolynomial::surrogate_gradient(std::span<const double> theta,
                                               std::span<const double> x, double sigma,
                                               std::span<double> grad,
                                               GradientWorkspace& ws) const {
  if (!(sigma > 0.0)) throw std::invalid_argument("surrogate_gradient: sigma must be > 0");
  const std::size_t n = static_cast<std::size_t>(n_);
  if (theta.size() != n || x.size() != n || grad.size() != n)
    throw std::invalid_argument("surrogate_gradient: length mismatch");

  ws.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) ws.y[i] = heo::erf((theta[i] - x[i]) / sigma);

  std::fill(grad.begin(), grad.end(), 0.0);
  for (std::size_t t = 0; t < coefficients_.size(); ++t) {
    const int begin = term_offsets_[t];
    const int end = term_offsets_[t + 1];
    for (int k = begin; k < end; ++k) {
      double prod = coefficients_[t];
      for (int l = begin; l < end; ++l) {
        if (l == k) continue;
        prod *= ws.y[static_cast<std::size_t>(term_variables_[static_cast<std::size_t>(l)])];
      }
      grad[static_cast<std::size_t>(term_variables_[static_cast<std::size_t>(k)])] += prod;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    grad[i] *= erf_prime((theta[i] - x[i]) / sigma) / sigma;
  }
}

Vec MultilinearPolynomial::surrogate_gradient(std::span<const double> theta,
                                              std::span<const double> x,
                                              double sigma) const {
  Vec grad(static_cast<std::size_t>(n_));
  GradientWorkspace ws;
  surrogate_gradient(theta, x, sigma, grad, ws);
  return grad;
}

double MultilinearPolynomial::closed_form_h(const ParamVector& theta) const {
  if (theta.size() != n_) throw std::invalid_argument("closed_form_h: length mismatch");
  Vec y(theta.values.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = 2.0 * theta.values[i] - 1.0;
  return evaluate(y);
}

double MultilinearPolynomial::exact_smoothed_expectation(std::span<const double> theta,
                                                         double sigma) const {
  if (!(sigma > 0.0))
    throw std::invalid_argument("exact_smoothed_expectation: sigma must be > 0");
  if (theta.size() != static_cast<std::size_t>(n_))
    throw std::invalid_argument("exact_smoothed_expectation: length mismatch");
  Vec phi(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    if (!std::isfinite(theta[i]))
      throw std::invalid_argument("exact_smoothed_expectation: non-finite theta");
    phi[i] = smoothed_coordinate(theta[i], sigma);
  }
  return evaluate(phi);
}

namespace {

// G(t) = t erf(t) + exp(-t^2)/sqrt(pi), the antiderivative of erf. Even in t.
double erf_antiderivative(double t) {
  return t * heo::erf(t) + std::exp(-t * t) / std::sqrt(M_PI);
}

}  // namespace

double smoothed_coordinate(double theta, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("smoothed_coordinate: sigma must be > 0");
  return sigma *
         (erf_antiderivative(theta / sigma) - erf_antiderivative((theta - 1.0) / sigma));
}

Vec surrogate_point(std::span<const double> theta, std::span<const double> x,
                    double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("surrogate_point: sigma must be > 0");
  if (theta.size() != x.size())
    throw std::invalid_argument("surrogate_point: length mismatch");
  Vec y(theta.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = heo::erf((theta[i] - x[i]) / sigma);
  return y;
}

}  // namespace heo
