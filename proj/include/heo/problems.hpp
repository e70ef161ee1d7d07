#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <vector>

#include "heo/solvers.hpp"

namespace heo {

/// Undirected weighted graph. Edges are stored with u < v, sorted, without
/// self-loops or duplicate pairs.
struct WeightedGraph {
  struct Edge {
    int u = 0;
    int v = 0;
    double weight = 1.0;
  };

  int vertex_count = 0;
  std::vector<Edge> edges;

  double total_weight() const;

  /// Validates indices and weights, swaps u > v into order, sorts edges.
  /// Throws std::invalid_argument on self-loops, duplicate pairs, indices
  /// outside [0, vertex_count) or non-finite weights.
  static WeightedGraph create(int vertex_count, std::vector<Edge> edges);
};

/// cut(s) = sum_{(i,j,w)} w (1 - s_i s_j) / 2. With f from maxcut_problem the
/// identity cut = (total_weight - f(s)) / 2 holds exactly.
double cut_value(const WeightedGraph& graph, const SpinVector& s);

/// Per-algorithm relative loss |C_alg - C_min| / |C_min| with C_min the
/// minimum over the entries. Throws if no entry is finite; if C_min is zero,
/// entries equal to it get 0 and the rest +infinity.
Vec relative_loss(const Vec& energies);

/// Max-cut as the quadratic target f(s) = sum_{(i,j,w) in E} w s_i s_j.
/// Minimizing f maximizes the cut.
class MaxCutProblem : public PolynomialProblem {
 public:
  explicit MaxCutProblem(WeightedGraph graph);
  const WeightedGraph& graph() const { return graph_; }

 private:
  WeightedGraph graph_;
};

MaxCutProblem maxcut_problem(WeightedGraph graph);

struct CnfLiteral {
  int variable = 0;   // 0-based
  int polarity = 1;   // -1 when the literal negates the variable
};

struct CnfClause {
  std::array<CnfLiteral, 3> literals;
};

/// 3-CNF formula; every clause has exactly three literals over distinct
/// variables.
struct CnfFormula {
  int variable_count = 0;
  std::vector<CnfClause> clauses;

  static CnfFormula create(int variable_count, std::vector<CnfClause> clauses);
};

/// 3-SAT target f(s) = sum_h prod_i (1 - c_{h_i} s_{h_i}) / 2, i.e. the
/// number of violated clauses. The gradient path uses the 4th-power-adjusted
/// objective sum_h prod_i ((1 - c_{h_i} y_{h_i}) / 2)^4; reported energies
/// always use the unadjusted count.
class Sat3Problem : public Problem {
 public:
  explicit Sat3Problem(CnfFormula formula);

  int dimension() const override { return formula_.variable_count; }
  double spin_energy(const SpinVector& s) const override;
  void surrogate_grad(std::span<const double> theta, std::span<const double> x,
                      double sigma, std::span<double> grad,
                      GradientWorkspace& ws) const override;

  const CnfFormula& formula() const { return formula_; }
  int clause_count() const { return static_cast<int>(formula_.clauses.size()); }

 private:
  CnfFormula formula_;
};

Sat3Problem sat3_problem(CnfFormula formula);

/// True iff every edge has a selected endpoint (s_i = +1 means selected).
bool is_vertex_cover(const WeightedGraph& graph, const SpinVector& s);
int cover_size(const SpinVector& s);
int uncovered_edge_count(const WeightedGraph& graph, const SpinVector& s);

struct RefineResult {
  SpinVector spins;
  bool input_was_cover = false;
};

/// Greedy cover refinement: visits vertices in ascending index order and
/// deselects each selected vertex whose removal keeps the cover valid. If the
/// input is not a cover it is returned unchanged with the flag cleared; the
/// output is otherwise a minimal cover contained in the input selection.
RefineResult refine_cover(const WeightedGraph& graph, const SpinVector& s);

/// Minimum vertex cover via the penalty method:
///   f_lambda(s) = sum_i (s_i + 1)/2 + lambda_t * sum_{(i,j) in E} g_ij(s),
///   g_ij(s) = (1 - (s_i+1)/2)(1 - (s_j+1)/2),
/// with lambda_t ramping linearly from 0 to lambda_max over the run.
/// spin_energy evaluates at the fixed lambda_max so reports are
/// time-independent (equal to the cover size on feasible outputs).
/// post_process repairs any uncovered edges deterministically and then
/// applies greedy refinement, so solve outputs are always valid covers.
class MvcProblem : public Problem {
 public:
  MvcProblem(WeightedGraph graph, double lambda_max);

  int dimension() const override { return graph_.vertex_count; }
  double spin_energy(const SpinVector& s) const override;
  void surrogate_grad(std::span<const double> theta, std::span<const double> x,
                      double sigma, std::span<double> grad,
                      GradientWorkspace& ws) const override;
  void begin_run(const SolverConfig& config) override;
  void auxiliary_step(int t, const SolverConfig& config, std::span<const double> theta,
                      std::span<const double> x, double sigma) override;
  SpinVector post_process(const SpinVector& s) const override;

  const WeightedGraph& graph() const { return graph_; }
  double lambda_max() const { return lambda_max_; }
  double current_lambda() const { return current_lambda_; }

 private:
  WeightedGraph graph_;
  std::vector<int> degree_;
  MultilinearPolynomial penalty_;  // sum_e g_ij as a degree-2 polynomial
  double lambda_max_ = 0.0;
  double current_lambda_ = 0.0;
};

MvcProblem mvc_problem(WeightedGraph graph, double lambda_max);

/// Dataset generated by a ground-truth ternary perceptron
/// y = Relu(W_gt v) with v in {-1,0,1}^n.
struct TernaryDataset {
  Eigen::MatrixXd inputs;      // n x samples
  Eigen::MatrixXd outputs;     // m x samples
  Eigen::MatrixXi weights_gt;  // m x n, entries in {-1,0,1}

  int input_dim() const { return static_cast<int>(inputs.rows()); }
  int output_dim() const { return static_cast<int>(outputs.rows()); }
  int sample_count() const { return static_cast<int>(inputs.cols()); }
};

/// Decodes the two-bit ternary encoding W_ij = (s_{ij,1} + s_{ij,2}) / 2;
/// spin layout index(i, j, b) = 2 (i n + j) + b.
Eigen::MatrixXi ternary_weights_from_spins(int m, int n, const SpinVector& s);

/// Fraction of exactly equal entries. Throws on shape mismatch.
double weight_accuracy(const Eigen::MatrixXi& estimated, const Eigen::MatrixXi& truth);

/// Ternary perceptron training as binary optimization over 2 m n spins.
/// spin_energy is the dataset MSE with hard ternary weights; the surrogate
/// relaxes each weight to (y_1 + y_2)/2 with y the erf point and chains
/// through Relu (subgradient 0 at 0). theta starts at 1.
class TernaryProblem : public Problem {
 public:
  explicit TernaryProblem(TernaryDataset data);

  int dimension() const override { return 2 * m_ * n_; }
  double initial_theta() const override { return 1.0; }
  double spin_energy(const SpinVector& s) const override;
  void surrogate_grad(std::span<const double> theta, std::span<const double> x,
                      double sigma, std::span<double> grad,
                      GradientWorkspace& ws) const override;

  double mse(const Eigen::MatrixXd& weights) const;
  Eigen::MatrixXi weights_from_spins(const SpinVector& s) const;
  const TernaryDataset& dataset() const { return data_; }

 private:
  TernaryDataset data_;
  int m_ = 0, n_ = 0;
};

TernaryProblem ternary_problem(TernaryDataset data);

/// Linear-regression dataset with sparse ground-truth coefficients:
/// y = beta* . v + eps, inputs standard Gaussian, nonzero |beta*_i| in [1,2].
struct RegressionDataset {
  Eigen::MatrixXd inputs;     // samples x n
  Eigen::VectorXd responses;  // samples
  Eigen::VectorXd beta_gt;    // n
  double sparsity_q = 0.0;
  double noise_sigma = 0.0;

  int dimension() const { return static_cast<int>(inputs.cols()); }
  int sample_count() const { return static_cast<int>(inputs.rows()); }
};

/// Variable selection: spins are the n selection indicators and a coupled
/// continuous coefficient vector beta is descended alongside theta,
///   f(s, beta) = (1/|D|) sum |(beta .* (s+1)/2) . v - y|^2.
/// auxiliary_step performs the beta update (step gamma/T, its own momentum
/// accumulator); spin_energy evaluates f at the current beta. theta starts
/// at 1.
class VarSelectProblem : public Problem {
 public:
  explicit VarSelectProblem(RegressionDataset data);

  int dimension() const override { return static_cast<int>(data_.inputs.cols()); }
  double initial_theta() const override { return 1.0; }
  double spin_energy(const SpinVector& s) const override;
  void surrogate_grad(std::span<const double> theta, std::span<const double> x,
                      double sigma, std::span<double> grad,
                      GradientWorkspace& ws) const override;
  void begin_run(const SolverConfig& config) override;
  void auxiliary_step(int t, const SolverConfig& config, std::span<const double> theta,
                      std::span<const double> x, double sigma) override;

  const Eigen::VectorXd& beta() const { return beta_; }
  const RegressionDataset& dataset() const { return data_; }

 private:
  RegressionDataset data_;
  Eigen::VectorXd beta_, beta_velocity_;
};

VarSelectProblem varselect_problem(RegressionDataset data);

struct VarSelectResult {
  SpinVector indicator;
  Eigen::VectorXd coefficients;  // zeros outside the selected support
  double mean_validation_mse = 0.0;
  int ensemble_index = -1;  // which ensemble member won
  int failed_fits = 0;      // indicators whose OLS refit was impossible
};

/// Runs the solver ensemble_size times with child seeds, refits each
/// indicator by OLS on its selected coordinates under k-fold cross
/// validation, and returns the indicator with the lowest mean validation MSE
/// together with its full-data OLS coefficients. Indicators whose support
/// exceeds the available rows are recorded as failed fits; if every indicator
/// fails, throws std::runtime_error.
VarSelectResult varselect_pipeline(const RegressionDataset& data, int ensemble_size,
                                   int folds, const SolverConfig& config);

/// Toy target f(s) = a2 . sigmoid(W s + a1) with entries of W (m x n),
/// a1, a2 (m) drawn once from U[-1,1]: W row-major first, then a1, then a2.
class ToyNnProblem : public Problem {
 public:
  ToyNnProblem(int n, int m, std::uint64_t seed);
  ToyNnProblem(Eigen::MatrixXd weights, Eigen::VectorXd bias, Eigen::VectorXd readout);

  int dimension() const override { return static_cast<int>(weights_.cols()); }
  double spin_energy(const SpinVector& s) const override;
  void surrogate_grad(std::span<const double> theta, std::span<const double> x,
                      double sigma, std::span<double> grad,
                      GradientWorkspace& ws) const override;

  const Eigen::MatrixXd& weights() const { return weights_; }
  const Eigen::VectorXd& bias() const { return bias_; }
  const Eigen::VectorXd& readout() const { return readout_; }

 private:
  Eigen::MatrixXd weights_;
  Eigen::VectorXd bias_, readout_;
};

ToyNnProblem toynn_problem(int n, int m, std::uint64_t seed);

}  // namespace heo
