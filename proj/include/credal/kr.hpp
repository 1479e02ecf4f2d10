#pragma once

#include <optional>
#include <span>
#include <vector>

#include "credal/lp.hpp"
#include "credal/measure.hpp"
#include "credal/observation.hpp"

namespace credal {

// A payoff vector together with its computed rho-Lipschitz norm
// max|f| + Lip(f).
struct LipschitzFunction {
  std::vector<double> values;
  double norm_bound = 0.0;
};

// One linear constraint a·mu <= c (or = c) on a window measure.
struct Constraint {
  std::vector<double> coeffs;
  double bound = 0.0;
  bool equality = false;
};

// A convex set of window measures: the probability simplex intersected with
// explicit linear constraints. An optional vertex list records polytopes that
// are known to be hulls of finitely many measures (degenerate kernels,
// conditioned vertex families); solvers use it as a fast path.
class ModelPolytope {
 public:
  ModelPolytope(OutcomeWindow window, std::vector<Constraint> constraints);

  static ModelPolytope full_simplex(OutcomeWindow window);

  const OutcomeWindow& window() const { return window_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  bool is_full_simplex() const { return constraints_.empty() && !vertices_; }
  const std::optional<std::vector<std::vector<double>>>& vertices() const { return vertices_; }

  void set_vertices(std::vector<std::vector<double>> v) { vertices_ = std::move(v); }

 private:
  OutcomeWindow window_;
  std::vector<Constraint> constraints_;
  std::optional<std::vector<std::vector<double>>> vertices_;
};

// How the unit ball of the Lipschitz norm is written as LP rows. kTree uses
// one bound pair per window prefix (linear row count; exact for nonincreasing
// weight families), kPairwise materializes all completion pairs. kAuto picks
// kTree whenever the metric weights are nonincreasing.
enum class BallEncoding { kAuto, kTree, kPairwise };

// Exact norm over the finite window: max_x |f(x)| + max_{x!=x'} |f(x)-f(x')| / rho(x,x').
double lipschitz_norm(std::span<const double> f, const OutcomeWindow& window,
                      const MetricFamily& metric);

bool verify_lipschitz_ball(std::span<const double> f, double bound, const OutcomeWindow& window,
                           const MetricFamily& metric, double tol = 1e-9);

// sup over the unit Lipschitz ball of E_mu[f] - E_nu[f], solved as an LP.
double kr_distance(const FiniteMeasure& mu, const FiniteMeasure& nu, const MetricFamily& metric,
                   BallEncoding encoding = BallEncoding::kAuto);

struct ModelDistance {
  double distance = 0.0;
  LipschitzFunction witness;  // for all nu in the model: E_nu[f*] - E_mu[f*] >= distance - tol
};

// Distance from mu to the polytope in the KR metric, with the separating
// witness from the equivalent maximin program (one LP via inner-dual).
ModelDistance distance_to_model(const FiniteMeasure& mu, const ModelPolytope& model,
                                const MetricFamily& metric,
                                BallEncoding encoding = BallEncoding::kAuto);

// Max constraint violation of mu against the polytope rows; 0 iff member.
double violation(const FiniteMeasure& mu, const ModelPolytope& model);

// Feasibility of the polytope (simplex + rows), via an auxiliary LP.
bool polytope_feasible(const ModelPolytope& model, double tol = 1e-8);

}  // namespace credal
