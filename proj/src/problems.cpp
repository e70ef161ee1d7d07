#include "heo/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace heo {

namespace {

Eigen::Map<const Eigen::VectorXd> as_eigen(std::span<const double> v) {
  return {v.data(), static_cast<Eigen::Index>(v.size())};
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

double WeightedGraph::total_weight() const {
  double w = 0.0;
  for (const Edge& e : edges) w += e.weight;
  return w;
}

WeightedGraph WeightedGraph::create(int vertex_count, std::vector<Edge> edges) {
  if (vertex_count < 0) throw std::invalid_argument("graph: negative vertex count");
  for (Edge& e : edges) {
    if (e.u == e.v)
      throw std::invalid_argument("graph: self-loop at vertex " + std::to_string(e.u));
    if (e.u > e.v) std::swap(e.u, e.v);
    if (e.u < 0 || e.v >= vertex_count)
      throw std::invalid_argument("graph: edge (" + std::to_string(e.u) + ", " +
                                  std::to_string(e.v) + ") outside vertex range");
    if (!std::isfinite(e.weight))
      throw std::invalid_argument("graph: non-finite edge weight");
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return std::pair(a.u, a.v) < std::pair(b.u, b.v);
  });
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (edges[i].u == edges[i - 1].u && edges[i].v == edges[i - 1].v)
      throw std::invalid_argument("graph: duplicate edge (" + std::to_string(edges[i].u) +
                                  ", " + std::to_string(edges[i].v) + ")");
  }
  WeightedGraph g;
  g.vertex_count = vertex_count;
  g.edges = std::move(edges);
  return g;
}

double cut_value(const WeightedGraph& graph, const SpinVector& s) {
  double cut = 0.0;
  for (const auto& e : graph.edges) {
    cut += e.weight *
           (1.0 - static_cast<double>(s.values[static_cast<std::size_t>(e.u)] *
                                      s.values[static_cast<std::size_t>(e.v)])) /
           2.0;
  }
  return cut;
}

Vec relative_loss(const Vec& energies) {
  double cmin = std::numeric_limits<double>::infinity();
  for (double e : energies) {
    if (std::isfinite(e)) cmin = std::min(cmin, e);
  }
  if (!std::isfinite(cmin))
    throw std::invalid_argument("relative_loss: no finite entry");
  Vec out(energies.size());
  for (std::size_t i = 0; i < energies.size(); ++i) {
    if (cmin == 0.0) {
      out[i] = energies[i] == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    } else {
      out[i] = std::fabs(energies[i] - cmin) / std::fabs(cmin);
    }
  }
  return out;
}

MaxCutProblem::MaxCutProblem(WeightedGraph graph)
    : PolynomialProblem([&graph] {
        std::vector<Monomial> terms;
        terms.reserve(graph.edges.size());
        for (const auto& e : graph.edges) terms.push_back({e.weight, {e.u, e.v}});
        return MultilinearPolynomial::normalize(graph.vertex_count, std::move(terms));
      }()),
      graph_(std::move(graph)) {}

MaxCutProblem maxcut_problem(WeightedGraph graph) {
  return MaxCutProblem(std::move(graph));
}

CnfFormula CnfFormula::create(int variable_count, std::vector<CnfClause> clauses) {
  if (variable_count < 1) throw std::invalid_argument("cnf: variable count must be >= 1");
  for (const CnfClause& c : clauses) {
    for (int i = 0; i < 3; ++i) {
      const CnfLiteral& lit = c.literals[static_cast<std::size_t>(i)];
      if (lit.variable < 0 || lit.variable >= variable_count)
        throw std::invalid_argument("cnf: literal variable out of range");
      if (lit.polarity != 1 && lit.polarity != -1)
        throw std::invalid_argument("cnf: literal polarity must be +1 or -1");
      for (int j = i + 1; j < 3; ++j) {
        if (c.literals[static_cast<std::size_t>(j)].variable == lit.variable)
          throw std::invalid_argument("cnf: clause repeats variable " +
                                      std::to_string(lit.variable + 1));
      }
    }
  }
  CnfFormula f;
  f.variable_count = variable_count;
  f.clauses = std::move(clauses);
  return f;
}

Sat3Problem::Sat3Problem(CnfFormula formula) : formula_(std::move(formula)) {}

Sat3Problem sat3_problem(CnfFormula formula) { return Sat3Problem(std::move(formula)); }

double Sat3Problem::spin_energy(const SpinVector& s) const {
  double violated = 0.0;
  for (const CnfClause& c : formula_.clauses) {
    double prod = 1.0;
    for (const CnfLiteral& lit : c.literals) {
      prod *= (1.0 - static_cast<double>(
                         lit.polarity *
                         s.values[static_cast<std::size_t>(lit.variable)])) /
              2.0;
    }
    violated += prod;
  }
  return violated;
}

void Sat3Problem::surrogate_grad(std::span<const double> theta,
                                 std::span<const double> x, double sigma,
                                 std::span<double> grad, GradientWorkspace& ws) const {
  if (!(sigma > 0.0)) throw std::invalid_argument("sat gradient: sigma must be > 0");
  const std::size_t n = static_cast<std::size_t>(formula_.variable_count);
  ws.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) ws.y[i] = heo::erf((theta[i] - x[i]) / sigma);

  std::fill(grad.begin(), grad.end(), 0.0);
  for (const CnfClause& c : formula_.clauses) {
    double t[3];
    for (int j = 0; j < 3; ++j) {
      const CnfLiteral& lit = c.literals[static_cast<std::size_t>(j)];
      t[j] = (1.0 - static_cast<double>(lit.polarity) *
                        ws.y[static_cast<std::size_t>(lit.variable)]) /
             2.0;
    }
    const double prod = t[0] * t[1] * t[2];
    const double prod3 = prod * prod * prod;
    for (int j = 0; j < 3; ++j) {
      const CnfLiteral& lit = c.literals[static_cast<std::size_t>(j)];
      const double others = t[(j + 1) % 3] * t[(j + 2) % 3];
      // d/dy_j of (t0 t1 t2)^4 with dt_j/dy_j = -c_j/2
      grad[static_cast<std::size_t>(lit.variable)] +=
          -2.0 * static_cast<double>(lit.polarity) * prod3 * others;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    grad[i] *= erf_prime((theta[i] - x[i]) / sigma) / sigma;
  }
}

bool is_vertex_cover(const WeightedGraph& graph, const SpinVector& s) {
  for (const auto& e : graph.edges) {
    if (s.values[static_cast<std::size_t>(e.u)] < 0 &&
        s.values[static_cast<std::size_t>(e.v)] < 0)
      return false;
  }
  return true;
}

int cover_size(const SpinVector& s) {
  int size = 0;
  for (int v : s.values) size += v > 0;
  return size;
}

int uncovered_edge_count(const WeightedGraph& graph, const SpinVector& s) {
  int count = 0;
  for (const auto& e : graph.edges) {
    count += (s.values[static_cast<std::size_t>(e.u)] < 0 &&
              s.values[static_cast<std::size_t>(e.v)] < 0);
  }
  return count;
}

RefineResult refine_cover(const WeightedGraph& graph, const SpinVector& s) {
  if (!is_vertex_cover(graph, s)) return {s, false};
  RefineResult result{s, true};
  // adjacency needed to test removals in O(deg)
  std::vector<std::vector<int>> adjacent(static_cast<std::size_t>(graph.vertex_count));
  for (const auto& e : graph.edges) {
    adjacent[static_cast<std::size_t>(e.u)].push_back(e.v);
    adjacent[static_cast<std::size_t>(e.v)].push_back(e.u);
  }
  for (int i = 0; i < graph.vertex_count; ++i) {
    auto& vals = result.spins.values;
    if (vals[static_cast<std::size_t>(i)] < 0) continue;
    bool removable = true;
    for (int nb : adjacent[static_cast<std::size_t>(i)]) {
      if (vals[static_cast<std::size_t>(nb)] < 0) {
        removable = false;
        break;
      }
    }
    if (removable) vals[static_cast<std::size_t>(i)] = -1;
  }
  return result;
}

MvcProblem::MvcProblem(WeightedGraph graph, double lambda_max)
    : graph_(std::move(graph)), lambda_max_(lambda_max) {
  if (!(lambda_max_ >= 0.0)) throw std::invalid_argument("mvc: lambda_max must be >= 0");
  degree_.assign(static_cast<std::size_t>(graph_.vertex_count), 0);
  std::vector<Monomial> penalty_terms;
  penalty_terms.reserve(3 * graph_.edges.size() + 1);
  for (const auto& e : graph_.edges) {
    degree_[static_cast<std::size_t>(e.u)]++;
    degree_[static_cast<std::size_t>(e.v)]++;
    // g_ij = (1 - s_i - s_j + s_i s_j) / 4
    penalty_terms.push_back({0.25, {}});
    penalty_terms.push_back({-0.25, {e.u}});
    penalty_terms.push_back({-0.25, {e.v}});
    penalty_terms.push_back({0.25, {e.u, e.v}});
  }
  penalty_ = MultilinearPolynomial::normalize(graph_.vertex_count,
                                              std::move(penalty_terms));
}

MvcProblem mvc_problem(WeightedGraph graph, double lambda_max) {
  return MvcProblem(std::move(graph), lambda_max);
}

double MvcProblem::spin_energy(const SpinVector& s) const {
  return static_cast<double>(cover_size(s)) +
         lambda_max_ * static_cast<double>(uncovered_edge_count(graph_, s));
}

void MvcProblem::surrogate_grad(std::span<const double> theta,
                                std::span<const double> x, double sigma,
                                std::span<double> grad, GradientWorkspace& ws) const {
  penalty_.surrogate_gradient(theta, x, sigma, grad, ws);
  // cover-size part is linear: d/dtheta_i of sum (y_i + 1)/2
  for (std::size_t i = 0; i < grad.size(); ++i) {
    grad[i] = current_lambda_ * grad[i] +
              0.5 * erf_prime((theta[i] - x[i]) / sigma) / sigma;
  }
}

void MvcProblem::begin_run(const SolverConfig&) { current_lambda_ = 0.0; }

void MvcProblem::auxiliary_step(int t, const SolverConfig& config,
                                std::span<const double>, std::span<const double>,
                                double) {
  current_lambda_ = lambda_max_ * static_cast<double>(t) /
                    static_cast<double>(config.iterations);
}

SpinVector MvcProblem::post_process(const SpinVector& s) const {
  SpinVector repaired = s;
  // cover any uncovered edge by its higher-degree endpoint (ties: lower index)
  for (const auto& e : graph_.edges) {
    if (repaired.values[static_cast<std::size_t>(e.u)] < 0 &&
        repaired.values[static_cast<std::size_t>(e.v)] < 0) {
      const int pick =
          degree_[static_cast<std::size_t>(e.v)] > degree_[static_cast<std::size_t>(e.u)]
              ? e.v
              : e.u;
      repaired.values[static_cast<std::size_t>(pick)] = 1;
    }
  }
  return refine_cover(graph_, repaired).spins;
}

Eigen::MatrixXi ternary_weights_from_spins(int m, int n, const SpinVector& s) {
  if (s.size() != 2 * m * n)
    throw std::invalid_argument("ternary decode: expected " + std::to_string(2 * m * n) +
                                " spins, got " + std::to_string(s.size()));
  Eigen::MatrixXi w(m, n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      const std::size_t base = 2 * (static_cast<std::size_t>(i) * n + j);
      w(i, j) = (s.values[base] + s.values[base + 1]) / 2;
    }
  }
  return w;
}

double weight_accuracy(const Eigen::MatrixXi& estimated, const Eigen::MatrixXi& truth) {
  if (estimated.rows() != truth.rows() || estimated.cols() != truth.cols())
    throw std::invalid_argument("weight_accuracy: shape mismatch");
  const auto total = truth.size();
  if (total == 0) throw std::invalid_argument("weight_accuracy: empty matrices");
  Eigen::Index equal = 0;
  for (Eigen::Index i = 0; i < total; ++i) equal += estimated(i) == truth(i);
  return static_cast<double>(equal) / static_cast<double>(total);
}

TernaryProblem::TernaryProblem(TernaryDataset data) : data_(std::move(data)) {
  m_ = data_.output_dim();
  n_ = data_.input_dim();
  if (m_ < 1 || n_ < 1 || data_.sample_count() < 1)
    throw std::invalid_argument("ternary: dataset must be non-empty");
  if (data_.outputs.cols() != data_.inputs.cols() || data_.weights_gt.rows() != m_ ||
      data_.weights_gt.cols() != n_)
    throw std::invalid_argument("ternary: inconsistent dataset shapes");
}

TernaryProblem ternary_problem(TernaryDataset data) {
  return TernaryProblem(std::move(data));
}

double TernaryProblem::mse(const Eigen::MatrixXd& weights) const {
  const Eigen::MatrixXd pred = (weights * data_.inputs).cwiseMax(0.0);
  return (pred - data_.outputs).squaredNorm() /
         static_cast<double>(data_.sample_count());
}

Eigen::MatrixXi TernaryProblem::weights_from_spins(const SpinVector& s) const {
  return ternary_weights_from_spins(m_, n_, s);
}

double TernaryProblem::spin_energy(const SpinVector& s) const {
  return mse(weights_from_spins(s).cast<double>());
}

void TernaryProblem::surrogate_grad(std::span<const double> theta,
                                    std::span<const double> x, double sigma,
                                    std::span<double> grad,
                                    GradientWorkspace& ws) const {
  if (!(sigma > 0.0)) throw std::invalid_argument("ternary gradient: sigma must be > 0");
  const std::size_t dim = static_cast<std::size_t>(dimension());
  ws.y.resize(dim);
  for (std::size_t i = 0; i < dim; ++i) ws.y[i] = heo::erf((theta[i] - x[i]) / sigma);

  Eigen::MatrixXd w(m_, n_);
  for (int i = 0; i < m_; ++i) {
    for (int j = 0; j < n_; ++j) {
      const std::size_t base = 2 * (static_cast<std::size_t>(i) * n_ + j);
      w(i, j) = 0.5 * (ws.y[base] + ws.y[base + 1]);
    }
  }

  const Eigen::MatrixXd z = w * data_.inputs;  // m x samples
  const Eigen::MatrixXd residual =
      (z.cwiseMax(0.0) - data_.outputs)
          .cwiseProduct((z.array() > 0.0).cast<double>().matrix());
  const Eigen::MatrixXd grad_w = (2.0 / static_cast<double>(data_.sample_count())) *
                                 (residual * data_.inputs.transpose());

  for (int i = 0; i < m_; ++i) {
    for (int j = 0; j < n_; ++j) {
      const std::size_t base = 2 * (static_cast<std::size_t>(i) * n_ + j);
      for (std::size_t b = 0; b < 2; ++b) {
        const std::size_t k = base + b;
        grad[k] = 0.5 * grad_w(i, j) * erf_prime((theta[k] - x[k]) / sigma) / sigma;
      }
    }
  }
}

VarSelectProblem::VarSelectProblem(RegressionDataset data) : data_(std::move(data)) {
  if (data_.sample_count() < 1 || data_.dimension() < 1)
    throw std::invalid_argument("varselect: dataset must be non-empty");
  if (data_.responses.size() != data_.inputs.rows())
    throw std::invalid_argument("varselect: inconsistent dataset shapes");
  beta_ = Eigen::VectorXd::Zero(data_.dimension());
  beta_velocity_ = Eigen::VectorXd::Zero(data_.dimension());
}

VarSelectProblem varselect_problem(RegressionDataset data) {
  return VarSelectProblem(std::move(data));
}

double VarSelectProblem::spin_energy(const SpinVector& s) const {
  Eigen::VectorXd w(data_.dimension());
  for (int i = 0; i < data_.dimension(); ++i) {
    w(i) = s.values[static_cast<std::size_t>(i)] > 0 ? beta_(i) : 0.0;
  }
  return (data_.inputs * w - data_.responses).squaredNorm() /
         static_cast<double>(data_.sample_count());
}

void VarSelectProblem::begin_run(const SolverConfig&) {
  beta_.setZero();
  beta_velocity_.setZero();
}

void VarSelectProblem::auxiliary_step(int, const SolverConfig& config,
                                      std::span<const double> theta,
                                      std::span<const double> x, double sigma) {
  const Eigen::VectorXd e =
      ((as_eigen(theta) - as_eigen(x)) / sigma)
          .unaryExpr([](double d) { return (heo::erf(d) + 1.0) / 2.0; });
  const Eigen::VectorXd w = beta_.cwiseProduct(e);
  const Eigen::VectorXd residual = data_.inputs * w - data_.responses;
  const Eigen::VectorXd grad_w = (2.0 / static_cast<double>(data_.sample_count())) *
                                 (data_.inputs.transpose() * residual);
  const Eigen::VectorXd grad_beta = grad_w.cwiseProduct(e);

  const double beta_step = config.step_size / static_cast<double>(config.iterations);
  beta_velocity_ = config.momentum * beta_velocity_ + beta_step * grad_beta;
  beta_ -= beta_velocity_;
}

void VarSelectProblem::surrogate_grad(std::span<const double> theta,
                                      std::span<const double> x, double sigma,
                                      std::span<double> grad,
                                      GradientWorkspace& ws) const {
  if (!(sigma > 0.0)) throw std::invalid_argument("varselect gradient: sigma must be > 0");
  const std::size_t n = static_cast<std::size_t>(data_.dimension());
  ws.y.resize(n);
  Eigen::VectorXd e(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    ws.y[i] = heo::erf((theta[i] - x[i]) / sigma);
    e(static_cast<Eigen::Index>(i)) = (ws.y[i] + 1.0) / 2.0;
  }
  const Eigen::VectorXd w = beta_.cwiseProduct(e);
  const Eigen::VectorXd residual = data_.inputs * w - data_.responses;
  const Eigen::VectorXd grad_w = (2.0 / static_cast<double>(data_.sample_count())) *
                                 (data_.inputs.transpose() * residual);
  for (std::size_t i = 0; i < n; ++i) {
    grad[i] = grad_w(static_cast<Eigen::Index>(i)) * beta_(static_cast<Eigen::Index>(i)) *
              0.5 * erf_prime((theta[i] - x[i]) / sigma) / sigma;
  }
}

namespace {

// OLS on the rows in `rows` restricted to columns in `support`.
Eigen::VectorXd ols_fit(const RegressionDataset& data, const std::vector<int>& rows,
                        const std::vector<int>& support) {
  Eigen::MatrixXd a(rows.size(), support.size());
  Eigen::VectorXd b(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    b(static_cast<Eigen::Index>(r)) = data.responses(rows[r]);
    for (std::size_t c = 0; c < support.size(); ++c) {
      a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          data.inputs(rows[r], support[c]);
    }
  }
  return a.colPivHouseholderQr().solve(b);
}

double prediction_mse(const RegressionDataset& data, const std::vector<int>& rows,
                      const std::vector<int>& support, const Eigen::VectorXd& coef) {
  double sum = 0.0;
  for (int r : rows) {
    double pred = 0.0;
    for (std::size_t c = 0; c < support.size(); ++c) {
      pred += coef(static_cast<Eigen::Index>(c)) * data.inputs(r, support[c]);
    }
    const double d = pred - data.responses(r);
    sum += d * d;
  }
  return sum / static_cast<double>(rows.size());
}

}  // namespace

VarSelectResult varselect_pipeline(const RegressionDataset& data, int ensemble_size,
                                   int folds, const SolverConfig& config) {
  if (ensemble_size < 1) throw std::invalid_argument("varselect: ensemble size must be >= 1");
  if (folds < 2) throw std::invalid_argument("varselect: folds must be >= 2");
  const int samples = data.sample_count();
  if (folds > samples) throw std::invalid_argument("varselect: more folds than samples");

  VarSelectProblem problem(data);
  std::vector<SpinVector> ensemble;
  ensemble.reserve(static_cast<std::size_t>(ensemble_size));
  for (int e = 0; e < ensemble_size; ++e) {
    SolverConfig child = config;
    child.seed = derive_child_seed(config.seed, static_cast<std::uint64_t>(e));
    RngStream rng(child.seed);
    ensemble.push_back(heo_momentum_solve(problem, child, rng).best_spins);
  }

  // deterministic shuffled fold assignment
  std::vector<int> order(static_cast<std::size_t>(samples));
  std::iota(order.begin(), order.end(), 0);
  RngStream fold_rng(derive_child_seed(config.seed, 0xf01d5ULL));
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[fold_rng.next_index(i)]);
  }

  VarSelectResult result;
  result.mean_validation_mse = std::numeric_limits<double>::infinity();
  for (std::size_t e = 0; e < ensemble.size(); ++e) {
    std::vector<int> support;
    for (int i = 0; i < data.dimension(); ++i) {
      if (ensemble[e].values[static_cast<std::size_t>(i)] > 0) support.push_back(i);
    }
    double total = 0.0;
    bool failed = false;
    for (int f = 0; f < folds; ++f) {
      const std::size_t lo = static_cast<std::size_t>(f) * order.size() /
                             static_cast<std::size_t>(folds);
      const std::size_t hi = (static_cast<std::size_t>(f) + 1) * order.size() /
                             static_cast<std::size_t>(folds);
      std::vector<int> val(order.begin() + static_cast<std::ptrdiff_t>(lo),
                           order.begin() + static_cast<std::ptrdiff_t>(hi));
      std::vector<int> train;
      train.reserve(order.size() - val.size());
      train.insert(train.end(), order.begin(), order.begin() + static_cast<std::ptrdiff_t>(lo));
      train.insert(train.end(), order.begin() + static_cast<std::ptrdiff_t>(hi), order.end());
      if (support.size() > train.size()) {
        failed = true;
        break;
      }
      if (support.empty()) {
        total += prediction_mse(data, val, support, Eigen::VectorXd());
      } else {
        total += prediction_mse(data, val, support, ols_fit(data, train, support));
      }
    }
    if (failed) {
      result.failed_fits++;
      continue;
    }
    const double mean_mse = total / static_cast<double>(folds);
    if (mean_mse < result.mean_validation_mse) {
      result.mean_validation_mse = mean_mse;
      result.ensemble_index = static_cast<int>(e);
      result.indicator = ensemble[e];
    }
  }
  if (result.ensemble_index < 0)
    throw std::runtime_error(
        "varselect: OLS failed for every ensemble indicator (support exceeds sample count)");

  std::vector<int> support;
  for (int i = 0; i < data.dimension(); ++i) {
    if (result.indicator.values[static_cast<std::size_t>(i)] > 0) support.push_back(i);
  }
  result.coefficients = Eigen::VectorXd::Zero(data.dimension());
  if (!support.empty()) {
    std::vector<int> all_rows(static_cast<std::size_t>(samples));
    std::iota(all_rows.begin(), all_rows.end(), 0);
    const Eigen::VectorXd coef = ols_fit(data, all_rows, support);
    for (std::size_t c = 0; c < support.size(); ++c) {
      result.coefficients(support[c]) = coef(static_cast<Eigen::Index>(c));
    }
  }
  return result;
}

ToyNnProblem::ToyNnProblem(int n, int m, std::uint64_t seed) {
  if (n < 1 || m < 1) throw std::invalid_argument("toynn: n and m must be >= 1");
  RngStream rng(seed);
  weights_.resize(m, n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) weights_(i, j) = 2.0 * rng.next_double() - 1.0;
  }
  bias_.resize(m);
  for (int i = 0; i < m; ++i) bias_(i) = 2.0 * rng.next_double() - 1.0;
  readout_.resize(m);
  for (int i = 0; i < m; ++i) readout_(i) = 2.0 * rng.next_double() - 1.0;
}

ToyNnProblem::ToyNnProblem(Eigen::MatrixXd weights, Eigen::VectorXd bias,
                           Eigen::VectorXd readout)
    : weights_(std::move(weights)), bias_(std::move(bias)), readout_(std::move(readout)) {
  if (weights_.rows() != bias_.size() || weights_.rows() != readout_.size() ||
      weights_.rows() < 1 || weights_.cols() < 1)
    throw std::invalid_argument("toynn: inconsistent parameter shapes");
}

ToyNnProblem toynn_problem(int n, int m, std::uint64_t seed) {
  return ToyNnProblem(n, m, seed);
}

double ToyNnProblem::spin_energy(const SpinVector& s) const {
  Eigen::VectorXd sd(s.size());
  for (int i = 0; i < s.size(); ++i) {
    sd(i) = static_cast<double>(s.values[static_cast<std::size_t>(i)]);
  }
  const Eigen::VectorXd z = weights_ * sd + bias_;
  return readout_.dot(z.unaryExpr([](double v) { return sigmoid(v); }));
}

void ToyNnProblem::surrogate_grad(std::span<const double> theta,
                                  std::span<const double> x, double sigma,
                                  std::span<double> grad, GradientWorkspace& ws) const {
  if (!(sigma > 0.0)) throw std::invalid_argument("toynn gradient: sigma must be > 0");
  const std::size_t n = static_cast<std::size_t>(dimension());
  ws.y.resize(n);
  Eigen::VectorXd y(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    ws.y[i] = heo::erf((theta[i] - x[i]) / sigma);
    y(static_cast<Eigen::Index>(i)) = ws.y[i];
  }
  const Eigen::VectorXd z = weights_ * y + bias_;
  const Eigen::VectorXd p = z.unaryExpr([](double v) { return sigmoid(v); });
  const Eigen::VectorXd df_dy =
      weights_.transpose() * readout_.cwiseProduct(p.cwiseProduct(
                                 (Eigen::VectorXd::Ones(p.size()) - p)));
  for (std::size_t i = 0; i < n; ++i) {
    grad[i] = df_dy(static_cast<Eigen::Index>(i)) *
              erf_prime((theta[i] - x[i]) / sigma) / sigma;
  }
}

}  // namespace heo
