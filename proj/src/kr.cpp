#include "credal/kr.hpp"

#include <algorithm>
#include <cmath>

namespace credal {

namespace {

// Lipschitz-ball variables inside a larger LP: f_x = g_x - a with g >= 0,
// max|f| <= a, Lip(f) <= b and a + b <= radius.
struct BallVars {
  std::vector<int> g;
  int a = -1;
  int b = -1;
};

// For nonincreasing weight families the ball is encoded hierarchically: one
// (upper, lower) bound pair per window prefix, with a span constraint per
// node. This is exactly equivalent to the all-pairs formulation (the span of
// f over a depth-j subtree is attained at a pair whose first disagreement is
// at offset >= j) and keeps the row count linear in the window size.
void encode_ball_tree(LinearProgram& lp, const OutcomeWindow& w, const MetricFamily& metric,
                      BallVars& v, double radius) {
  const int depth = w.depth();
  // upper[d][p], lower[d][p]: bound variables for the length-d prefix p.
  std::vector<std::vector<int>> upper(depth), lower(depth);
  for (int d = 0; d < depth; ++d) {
    const int np = w.num_prefixes(d);
    upper[d].resize(np);
    lower[d].resize(np);
    for (int p = 0; p < np; ++p) {
      upper[d][p] = lp.add_var(0.0);
      lower[d][p] = lp.add_var(0.0);
      lp.add_row({{upper[d][p], 1.0}, {lower[d][p], -1.0}, {v.b, -metric.weight(d)}},
                 LinearProgram::Rel::kLe, 0.0);
    }
  }
  // Children of the deepest prefixes are the completions themselves.
  for (int x = 0; x < w.size(); ++x) {
    const int p = w.prefix_block(x, depth - 1);
    lp.add_row({{v.g[x], 1.0}, {upper[depth - 1][p], -1.0}}, LinearProgram::Rel::kLe, 0.0);
    lp.add_row({{lower[depth - 1][p], 1.0}, {v.g[x], -1.0}}, LinearProgram::Rel::kLe, 0.0);
  }
  for (int d = 1; d < depth; ++d) {
    for (int p = 0; p < w.num_prefixes(d); ++p) {
      const int parent = p / w.size_at(d - 1);
      lp.add_row({{upper[d][p], 1.0}, {upper[d - 1][parent], -1.0}}, LinearProgram::Rel::kLe, 0.0);
      lp.add_row({{lower[d - 1][parent], 1.0}, {lower[d][p], -1.0}}, LinearProgram::Rel::kLe, 0.0);
    }
  }
  // max|f| <= a  <=>  g <= 2a given g >= 0.
  lp.add_row({{upper[0][0], 1.0}, {v.a, -2.0}}, LinearProgram::Rel::kLe, 0.0);
  lp.add_row({{v.a, 1.0}, {v.b, 1.0}}, LinearProgram::Rel::kLe, radius);
}

void encode_ball_pairwise(LinearProgram& lp, const OutcomeWindow& w, const MetricFamily& metric,
                          BallVars& v, double radius) {
  for (int i = 0; i < w.size(); ++i)
    lp.add_row({{v.g[i], 1.0}, {v.a, -2.0}}, LinearProgram::Rel::kLe, 0.0);
  for (int i = 0; i < w.size(); ++i) {
    for (int j = i + 1; j < w.size(); ++j) {
      const double r = metric.distance(w, i, j);
      lp.add_row({{v.g[i], 1.0}, {v.g[j], -1.0}, {v.b, -r}}, LinearProgram::Rel::kLe, 0.0);
      lp.add_row({{v.g[j], 1.0}, {v.g[i], -1.0}, {v.b, -r}}, LinearProgram::Rel::kLe, 0.0);
    }
  }
  lp.add_row({{v.a, 1.0}, {v.b, 1.0}}, LinearProgram::Rel::kLe, radius);
}

BallVars encode_ball(LinearProgram& lp, const OutcomeWindow& w, const MetricFamily& metric,
                     double radius, BallEncoding encoding) {
  BallVars v;
  v.g.resize(w.size());
  for (int& id : v.g) id = lp.add_var(0.0);
  v.a = lp.add_var(0.0);
  v.b = lp.add_var(0.0);
  const bool tree = encoding == BallEncoding::kTree ||
                    (encoding == BallEncoding::kAuto && metric.nonincreasing());
  if (tree) {
    if (!metric.nonincreasing())
      throw DomainError("tree ball encoding requires nonincreasing metric weights");
    encode_ball_tree(lp, w, metric, v, radius);
  } else {
    encode_ball_pairwise(lp, w, metric, v, radius);
  }
  return v;
}

std::vector<double> extract_f(const LpSolution& sol, const BallVars& v) {
  std::vector<double> f(v.g.size());
  for (std::size_t i = 0; i < v.g.size(); ++i) f[i] = sol.x[v.g[i]] - sol.x[v.a];
  return f;
}

}  // namespace

ModelPolytope::ModelPolytope(OutcomeWindow window, std::vector<Constraint> constraints)
    : window_(std::move(window)), constraints_(std::move(constraints)) {
  for (const Constraint& c : constraints_)
    if (static_cast<int>(c.coeffs.size()) != window_.size())
      throw DomainError("constraint coefficient length does not match window");
}

ModelPolytope ModelPolytope::full_simplex(OutcomeWindow window) {
  return ModelPolytope(std::move(window), {});
}

double lipschitz_norm(std::span<const double> f, const OutcomeWindow& window,
                      const MetricFamily& metric) {
  if (static_cast<int>(f.size()) != window.size())
    throw DomainError("payoff vector length does not match window");
  double max_abs = 0.0;
  for (double v : f) max_abs = std::max(max_abs, std::fabs(v));
  double lip = 0.0;
  for (int i = 0; i < window.size(); ++i) {
    for (int j = i + 1; j < window.size(); ++j) {
      const double diff = std::fabs(f[i] - f[j]);
      if (diff > 0.0) lip = std::max(lip, diff / metric.distance(window, i, j));
    }
  }
  return max_abs + lip;
}

bool verify_lipschitz_ball(std::span<const double> f, double bound, const OutcomeWindow& window,
                           const MetricFamily& metric, double tol) {
  return lipschitz_norm(f, window, metric) <= bound + tol;
}

double kr_distance(const FiniteMeasure& mu, const FiniteMeasure& nu, const MetricFamily& metric,
                   BallEncoding encoding) {
  if (!mu.window().same_window(nu.window()))
    throw DomainError("kr_distance requires measures on the same window");
  LinearProgram lp;
  BallVars v = encode_ball(lp, mu.window(), metric, 1.0, encoding);
  for (int x = 0; x < mu.size(); ++x) lp.set_objective(v.g[x], mu[x] - nu[x]);
  LpSolution sol = lp.maximize();
  if (sol.status != LpStatus::kOptimal) throw SolverError("kr_distance LP did not solve");
  return std::max(sol.value, 0.0);
}

ModelDistance distance_to_model(const FiniteMeasure& mu, const ModelPolytope& model,
                                const MetricFamily& metric, BallEncoding encoding) {
  const OutcomeWindow& w = model.window();
  if (!mu.window().same_window(w))
    throw DomainError("distance_to_model requires matching windows");
  ModelDistance out;
  if (model.is_full_simplex()) {
    out.witness.values.assign(w.size(), 0.0);
    return out;
  }

  LinearProgram lp;
  BallVars v = encode_ball(lp, w, metric, 1.0, encoding);

  if (model.vertices()) {
    // r = max_f min_vertex (E_v[f] - E_mu[f]) with the min taken over the
    // listed hull vertices; the normalization terms cancel in the difference.
    const int s = lp.add_var(1.0, /*is_free=*/true);
    for (int x = 0; x < w.size(); ++x) lp.set_objective(v.g[x], -mu[x]);
    for (const std::vector<double>& vert : *model.vertices()) {
      std::vector<std::pair<int, double>> row{{s, 1.0}};
      for (int x = 0; x < w.size(); ++x)
        if (vert[x] != 0.0) row.push_back({v.g[x], -vert[x]});
      lp.add_row(row, LinearProgram::Rel::kLe, 0.0);
    }
    LpSolution sol = lp.maximize();
    if (sol.status != LpStatus::kOptimal) throw SolverError("distance LP did not solve");
    out.distance = std::max(sol.value, 0.0);
    out.witness.values = extract_f(sol, v);
    out.witness.norm_bound = lipschitz_norm(out.witness.values, w, metric);
    return out;
  }

  // Dual of the inner minimization over the polytope: one multiplier per
  // constraint row, one free variable for the simplex normalization.
  // Objective: t - c·multipliers - E_mu[f] with E_mu[f] = mu·g - a.
  for (int x = 0; x < w.size(); ++x) lp.set_objective(v.g[x], -mu[x]);
  lp.set_objective(v.a, 1.0);
  const int t = lp.add_var(1.0, /*is_free=*/true);
  std::vector<int> mult;
  mult.reserve(model.constraints().size());
  for (const Constraint& c : model.constraints())
    mult.push_back(lp.add_var(-c.bound, /*is_free=*/c.equality));
  for (int x = 0; x < w.size(); ++x) {
    std::vector<std::pair<int, double>> row{{t, 1.0}, {v.g[x], -1.0}, {v.a, 1.0}};
    for (std::size_t i = 0; i < mult.size(); ++i) {
      const double coeff = model.constraints()[i].coeffs[x];
      if (coeff != 0.0) row.push_back({mult[i], -coeff});
    }
    lp.add_row(row, LinearProgram::Rel::kLe, 0.0);
  }
  LpSolution sol = lp.maximize();
  if (sol.status == LpStatus::kUnbounded) throw DomainError("model polytope is empty");
  if (sol.status != LpStatus::kOptimal) throw SolverError("distance LP did not solve");
  out.distance = std::max(sol.value, 0.0);
  out.witness.values = extract_f(sol, v);
  out.witness.norm_bound = lipschitz_norm(out.witness.values, w, metric);
  return out;
}

double violation(const FiniteMeasure& mu, const ModelPolytope& model) {
  if (!mu.window().same_window(model.window()))
    throw DomainError("violation requires matching windows");
  double worst = 0.0;
  for (const Constraint& c : model.constraints()) {
    double dot = 0.0;
    for (int x = 0; x < mu.size(); ++x) dot += c.coeffs[x] * mu[x];
    const double gap = c.equality ? std::fabs(dot - c.bound) : dot - c.bound;
    worst = std::max(worst, gap);
  }
  return worst;
}

bool polytope_feasible(const ModelPolytope& model, double tol) {
  if (model.is_full_simplex()) return true;
  const int k = model.window().size();
  LinearProgram lp;
  std::vector<int> nu(k);
  for (int& id : nu) id = lp.add_var(0.0);
  const int slack = lp.add_var(-1.0);
  std::vector<std::pair<int, double>> total;
  for (int x = 0; x < k; ++x) total.push_back({nu[x], 1.0});
  lp.add_row(total, LinearProgram::Rel::kEq, 1.0);
  for (const Constraint& c : model.constraints()) {
    std::vector<std::pair<int, double>> row{{slack, -1.0}};
    for (int x = 0; x < k; ++x)
      if (c.coeffs[x] != 0.0) row.push_back({nu[x], c.coeffs[x]});
    lp.add_row(row, LinearProgram::Rel::kLe, c.bound);
    if (c.equality) {
      std::vector<std::pair<int, double>> neg{{slack, -1.0}};
      for (int x = 0; x < k; ++x)
        if (c.coeffs[x] != 0.0) neg.push_back({nu[x], -c.coeffs[x]});
      lp.add_row(neg, LinearProgram::Rel::kLe, -c.bound);
    }
  }
  LpSolution sol = lp.maximize();
  if (sol.status != LpStatus::kOptimal) throw SolverError("feasibility LP did not solve");
  return -sol.value <= tol;
}

}  // namespace credal
