#include "heo/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace heo {

namespace {

struct LineScanner {
  std::string_view text;
  std::size_t pos = 0;
  int line_number = 0;

  // next non-empty, non-comment line; empty view at end of input
  std::string_view next_content_line() {
    while (pos < text.size()) {
      std::size_t end = text.find('\n', pos);
      if (end == std::string_view::npos) end = text.size();
      std::string_view line = text.substr(pos, end - pos);
      pos = end + 1;
      ++line_number;
      std::size_t first = line.find_first_not_of(" \t\r");
      if (first == std::string_view::npos) continue;
      if (line[first] == '#') continue;
      std::size_t last = line.find_last_not_of(" \t\r");
      return line.substr(first, last - first + 1);
    }
    return {};
  }
};

[[noreturn]] void parse_fail(int line, const std::string& what) {
  throw std::invalid_argument("parse error at line " + std::to_string(line) + ": " + what);
}

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

int parse_int(std::string_view token, int line) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    parse_fail(line, "expected integer, got '" + std::string(token) + "'");
  return value;
}

double parse_double(std::string_view token, int line) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    parse_fail(line, "expected number, got '" + std::string(token) + "'");
  return value;
}

bool numeric_token(std::string_view t) {
  double v;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  return ec == std::errc() && ptr == t.data() + t.size();
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

InstanceFormat detect_format(std::string_view text) {
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    auto tokens = split_tokens(line);
    if (tokens.empty() || tokens[0].starts_with("#")) continue;
    if (tokens[0] == "c") continue;
    if (tokens[0] == "p") return InstanceFormat::dimacs_cnf;
    if (tokens.size() == 2 && numeric_token(tokens[0]) && numeric_token(tokens[1]))
      return InstanceFormat::maxcut_edge;
    if (tokens.size() == 3 && numeric_token(tokens[0]) && numeric_token(tokens[1]) &&
        numeric_token(tokens[2]))
      return InstanceFormat::edge_list;
    break;
  }
  throw std::invalid_argument("unrecognized instance format");
}

WeightedGraph parse_maxcut(std::string_view text, bool strict_order) {
  LineScanner scan{text};
  std::string_view header = scan.next_content_line();
  if (header.empty()) parse_fail(scan.line_number, "missing 'n m' header");
  auto head = split_tokens(header);
  if (head.size() != 2) parse_fail(scan.line_number, "header must be 'n m'");
  const int n = parse_int(head[0], scan.line_number);
  const int m = parse_int(head[1], scan.line_number);
  if (n < 0 || m < 0) parse_fail(scan.line_number, "negative header counts");

  std::vector<WeightedGraph::Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    std::string_view line = scan.next_content_line();
    if (line.empty())
      parse_fail(scan.line_number, "expected " + std::to_string(m) + " edges, got " +
                                       std::to_string(k));
    auto tok = split_tokens(line);
    if (tok.size() != 3) parse_fail(scan.line_number, "edge line must be 'i j w'");
    const int i = parse_int(tok[0], scan.line_number);
    const int j = parse_int(tok[1], scan.line_number);
    const double w = parse_double(tok[2], scan.line_number);
    if (i < 1 || i > n || j < 1 || j > n)
      parse_fail(scan.line_number, "vertex index outside 1.." + std::to_string(n));
    if (i == j) parse_fail(scan.line_number, "self-loop");
    if (strict_order && i > j) parse_fail(scan.line_number, "endpoints not in i < j order");
    edges.push_back({i - 1, j - 1, w});
  }
  if (!scan.next_content_line().empty())
    parse_fail(scan.line_number, "trailing content after " + std::to_string(m) + " edges");
  try {
    return WeightedGraph::create(n, std::move(edges));
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("parse error: ") + e.what());
  }
}

CnfFormula parse_dimacs_cnf(std::string_view text) {
  LineScanner scan{text};
  int n = 0, m = 0;
  bool have_header = false;
  std::vector<CnfClause> clauses;
  std::vector<int> pending;

  for (;;) {
    std::string_view line = scan.next_content_line();
    if (line.empty()) break;
    auto tok = split_tokens(line);
    if (tok.empty() || tok[0] == "c") continue;
    if (tok[0] == "%") break;  // SATLIB trailer
    if (tok[0] == "p") {
      if (have_header) parse_fail(scan.line_number, "duplicate header");
      if (tok.size() != 4 || tok[1] != "cnf")
        parse_fail(scan.line_number, "header must be 'p cnf n m'");
      n = parse_int(tok[2], scan.line_number);
      m = parse_int(tok[3], scan.line_number);
      if (n < 1 || m < 0) parse_fail(scan.line_number, "bad header counts");
      have_header = true;
      continue;
    }
    if (!have_header) parse_fail(scan.line_number, "clause before 'p cnf' header");
    for (std::string_view t : tok) {
      if (t == "0") {
        if (pending.size() != 3)
          throw std::invalid_argument(
              "unsupported instance at line " + std::to_string(scan.line_number) +
              ": clause has " + std::to_string(pending.size()) +
              " literals (only 3-SAT is supported)");
        CnfClause clause;
        for (int i = 0; i < 3; ++i) {
          const int lit = pending[static_cast<std::size_t>(i)];
          const int var = std::abs(lit) - 1;
          if (var >= n) parse_fail(scan.line_number, "literal variable exceeds header n");
          clause.literals[static_cast<std::size_t>(i)] = {var, lit > 0 ? 1 : -1};
        }
        clauses.push_back(clause);
        pending.clear();
      } else {
        const int lit = parse_int(t, scan.line_number);
        if (lit == 0) parse_fail(scan.line_number, "bare zero literal");
        pending.push_back(lit);
      }
    }
  }
  if (!pending.empty())
    throw std::invalid_argument("parse error: unterminated clause at end of input");
  if (static_cast<int>(clauses.size()) != m)
    throw std::invalid_argument("parse error: header promises " + std::to_string(m) +
                                " clauses, found " + std::to_string(clauses.size()));
  try {
    return CnfFormula::create(n, std::move(clauses));
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("parse error: ") + e.what());
  }
}

WeightedGraph parse_edge_list(std::string_view text) {
  LineScanner scan{text};
  struct RawEdge {
    int u, v;
    double w;
    int line;
  };
  std::vector<RawEdge> raw;
  int max_vertex = 0;
  for (;;) {
    std::string_view line = scan.next_content_line();
    if (line.empty()) break;
    auto tok = split_tokens(line);
    if (tok[0] == "c" || tok[0] == "%") continue;
    if (tok.size() != 2 && tok.size() != 3)
      parse_fail(scan.line_number, "edge line must be 'i j' or 'i j w'");
    int i = parse_int(tok[0], scan.line_number);
    int j = parse_int(tok[1], scan.line_number);
    const double w = tok.size() == 3 ? parse_double(tok[2], scan.line_number) : 1.0;
    if (i < 1 || j < 1) parse_fail(scan.line_number, "vertex indices are 1-based");
    if (i == j) parse_fail(scan.line_number, "self-loop");
    if (i > j) std::swap(i, j);
    max_vertex = std::max(max_vertex, j);
    raw.push_back({i - 1, j - 1, w, scan.line_number});
  }
  std::sort(raw.begin(), raw.end(), [](const RawEdge& a, const RawEdge& b) {
    return std::tuple(a.u, a.v, a.line) < std::tuple(b.u, b.v, b.line);
  });
  std::vector<WeightedGraph::Edge> edges;
  edges.reserve(raw.size());
  for (std::size_t k = 0; k < raw.size(); ++k) {
    if (k > 0 && raw[k].u == raw[k - 1].u && raw[k].v == raw[k - 1].v) {
      if (raw[k].w != raw[k - 1].w)
        parse_fail(raw[k].line, "duplicate edge with conflicting weight");
      continue;
    }
    edges.push_back({raw[k].u, raw[k].v, raw[k].w});
  }
  return WeightedGraph::create(max_vertex, std::move(edges));
}

RegressionDataset generate_regression_dataset(int n, int samples, double q,
                                              double noise_sigma, std::uint64_t seed) {
  if (n < 1 || samples < 1)
    throw std::invalid_argument("regression dataset: sizes must be >= 1");
  if (!(q > 0.0 && q < 1.0))
    throw std::invalid_argument("regression dataset: q must be in (0, 1)");
  if (!(noise_sigma >= 0.0))
    throw std::invalid_argument("regression dataset: noise sigma must be >= 0");
  RngStream rng(seed);
  RegressionDataset d;
  d.sparsity_q = q;
  d.noise_sigma = noise_sigma;
  d.beta_gt = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (rng.next_double() < q) {
      const double magnitude = 1.0 + rng.next_double();
      d.beta_gt(i) = rng.next_double() < 0.5 ? -magnitude : magnitude;
    }
  }
  d.inputs.resize(samples, n);
  d.responses.resize(samples);
  for (int r = 0; r < samples; ++r) {
    for (int c = 0; c < n; ++c) d.inputs(r, c) = rng.next_gaussian();
    d.responses(r) = d.inputs.row(r).dot(d.beta_gt) + noise_sigma * rng.next_gaussian();
  }
  return d;
}

std::pair<Eigen::MatrixXd, Eigen::VectorXd> sample_regression_rows(
    const RegressionDataset& data, int count, RngStream& rng) {
  if (count < 1) throw std::invalid_argument("sample_regression_rows: count must be >= 1");
  const int n = data.dimension();
  Eigen::MatrixXd inputs(count, n);
  Eigen::VectorXd responses(count);
  for (int r = 0; r < count; ++r) {
    for (int c = 0; c < n; ++c) inputs(r, c) = rng.next_gaussian();
    responses(r) =
        inputs.row(r).dot(data.beta_gt) + data.noise_sigma * rng.next_gaussian();
  }
  return {std::move(inputs), std::move(responses)};
}

TernaryDataset generate_ternary_dataset(int n, int m, int samples, std::uint64_t seed) {
  if (n < 1 || m < 1 || samples < 1)
    throw std::invalid_argument("ternary dataset: sizes must be >= 1");
  RngStream rng(seed);
  TernaryDataset d;
  d.weights_gt.resize(m, n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      d.weights_gt(i, j) = static_cast<int>(rng.next_index(3)) - 1;
    }
  }
  d.inputs.resize(n, samples);
  for (int c = 0; c < samples; ++c) {
    for (int r = 0; r < n; ++r) {
      d.inputs(r, c) = static_cast<double>(static_cast<int>(rng.next_index(3)) - 1);
    }
  }
  d.outputs = (d.weights_gt.cast<double>() * d.inputs).cwiseMax(0.0);
  return d;
}

CnfFormula random_3sat(int variables, int clause_count, RngStream& rng) {
  if (variables < 3) throw std::invalid_argument("random_3sat: need at least 3 variables");
  if (clause_count < 1) throw std::invalid_argument("random_3sat: need at least 1 clause");
  std::vector<CnfClause> clauses;
  clauses.reserve(static_cast<std::size_t>(clause_count));
  for (int h = 0; h < clause_count; ++h) {
    int vars[3];
    for (int i = 0; i < 3; ++i) {
      bool fresh;
      do {
        vars[i] = static_cast<int>(rng.next_index(static_cast<std::size_t>(variables)));
        fresh = true;
        for (int j = 0; j < i; ++j) fresh = fresh && vars[j] != vars[i];
      } while (!fresh);
    }
    CnfClause c;
    for (int i = 0; i < 3; ++i) {
      c.literals[static_cast<std::size_t>(i)] = {vars[i],
                                                 rng.next_double() < 0.5 ? -1 : 1};
    }
    clauses.push_back(c);
  }
  return CnfFormula::create(variables, std::move(clauses));
}

nlohmann::json report_to_json(const SolveReport& report, const nlohmann::json& context) {
  nlohmann::json j = context.is_null() ? nlohmann::json::object() : context;
  j["seed_used"] = report.seed_used;
  j["best_energy"] = report.best_energy;
  j["n"] = report.best_spins.size();
  if (report.best_spins.size() > kSpinRleThreshold) {
    nlohmann::json rle = nlohmann::json::array();
    const auto& v = report.best_spins.values;
    std::size_t i = 0;
    while (i < v.size()) {
      std::size_t j2 = i;
      while (j2 < v.size() && v[j2] == v[i]) ++j2;
      rle.push_back({v[i], j2 - i});
      i = j2;
    }
    j["best_spins_rle"] = std::move(rle);
  } else {
    j["best_spins"] = report.best_spins.values;
  }
  j["trace"] = {{"energy", report.energy_trace},
                {"variance", report.variance_trace},
                {"sigma", report.gradient_trace.sigma},
                {"grad_norm", report.gradient_trace.grad_norm}};
  return j;
}

std::string write_report(const SolveReport& report, ReportFormat format,
                         const nlohmann::json& context) {
  if (format == ReportFormat::json) {
    return report_to_json(report, context).dump(2) + "\n";
  }
  std::string out = "iteration,energy,variance,sigma\n";
  for (std::size_t t = 0; t < report.energy_trace.size(); ++t) {
    out += std::to_string(t);
    out += ',';
    out += format_double(report.energy_trace[t]);
    out += ',';
    out += format_double(report.variance_trace[t]);
    out += ',';
    out += format_double(report.gradient_trace.sigma[t]);
    out += '\n';
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace heo
