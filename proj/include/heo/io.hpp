#pragma once

#include <string>
#include <string_view>
#include <utility>

#include "json.hpp"

#include "heo/problems.hpp"

namespace heo {

enum class InstanceFormat { maxcut_edge, dimacs_cnf, edge_list };

/// Deterministic detection from the first content line: "p cnf" headers are
/// DIMACS, a two-token numeric line is a max-cut "n m" header, three-token
/// lines are a plain edge list.
InstanceFormat detect_format(std::string_view text);

/// Max-cut instance format: first non-comment line "n m", then exactly m
/// lines "i j w" with 1-based endpoints. '#' starts a comment. Parsers reject
/// rather than repair; messages carry line numbers. With strict_order, lines
/// with i > j are rejected instead of normalized.
WeightedGraph parse_maxcut(std::string_view text, bool strict_order = false);

/// DIMACS CNF restricted to exactly-3-literal clauses over distinct
/// variables. Clause count must match the "p cnf n m" header; literals may
/// span lines and are 0-terminated; 'c' lines are comments.
CnfFormula parse_dimacs_cnf(std::string_view text);

/// Plain 1-based edge list, one "i j" or "i j w" per line (default weight 1),
/// vertex count inferred from the largest index. Exact duplicate pairs are
/// merged (undirected listings often carry both directions); duplicates with
/// conflicting weights are rejected.
WeightedGraph parse_edge_list(std::string_view text);

/// Sparse-linear-model data: inputs standard Gaussian, beta*_i zero with
/// probability 1-q and otherwise uniform on [-2,-1] u [1,2],
/// y = beta* . v + N(0, noise_sigma). Pure function of its arguments.
RegressionDataset generate_regression_dataset(int n, int samples, double q,
                                              double noise_sigma, std::uint64_t seed);

/// Ternary perceptron data: W_gt and inputs uniform on {-1,0,1}, outputs
/// Relu(W_gt v) computed exactly.
TernaryDataset generate_ternary_dataset(int n, int m, int samples, std::uint64_t seed);

/// Uniform random 3-SAT: each clause picks 3 distinct variables and
/// independent polarities. Satisfiability is not guaranteed.
CnfFormula random_3sat(int variables, int clause_count, RngStream& rng);

enum class ReportFormat { json, csv };

/// JSON report: caller context (config echo, problem info) merged at the top
/// level, plus seed, best energy, spins and traces. Spins switch to
/// run-length encoding [[value, count], ...] above kSpinRleThreshold entries.
/// Timing is deliberately excluded so identical seeds give byte-identical
/// reports.
inline constexpr int kSpinRleThreshold = 10000;
nlohmann::json report_to_json(const SolveReport& report,
                              const nlohmann::json& context = nlohmann::json::object());

/// Serializes a report; CSV emits "iteration,energy,variance,sigma" rows with
/// round-trip-lossless numbers.
std::string write_report(const SolveReport& report, ReportFormat format,
                         const nlohmann::json& context = nlohmann::json::object());

/// Reads a whole file; throws std::invalid_argument if it cannot be opened.
std::string read_text_file(const std::string& path);

/// Fresh rows drawn from a dataset's generating model (its beta* and noise
/// level); used for held-out evaluation.
std::pair<Eigen::MatrixXd, Eigen::VectorXd> sample_regression_rows(
    const RegressionDataset& data, int count, RngStream& rng);

}  // namespace heo
