#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "credal/kr.hpp"
#include "credal/measure.hpp"
#include "credal/observation.hpp"

namespace credal {

// Which absolute steps a kernel constraint applies to.
class ActiveSteps {
 public:
  static ActiveSteps all();
  static ActiveSteps even();
  static ActiveSteps odd();
  static ActiveSteps from_list(std::vector<int> steps);
  static ActiveSteps none();

  bool contains(int step) const;
  std::string describe() const;

 private:
  enum class Kind { kAll, kEven, kOdd, kList, kNone } kind_ = Kind::kAll;
  std::vector<int> list_;
};

// Linear rows over a single symbol distribution (used for next-symbol
// constraint sets and the marginal-rows model kind).
struct SymbolRow {
  std::vector<double> coeffs;
  double bound = 0.0;
  bool equality = false;
};

// The model's admissible set of next-symbol conditionals at a history:
// either a single forced row or the simplex cut by rows.
struct NextSymbolSet {
  std::optional<std::vector<double>> forced;
  std::vector<SymbolRow> rows;
};

struct KernelConstraintModel {
  std::shared_ptr<const Kernel> kernel;
  ActiveSteps active;
};

struct NoisySensorModel {
  double p_min = 0.0;
};

// Convex hull of explicit measures over the first `depth` positions.
struct VertexFamilyModel {
  int depth = 0;
  std::vector<std::vector<double>> vertices;
};

// Fixed rows applied to the symbol marginals at the given window offsets.
struct MarginalRowsModel {
  std::vector<SymbolRow> rows;
  std::vector<int> offsets;
};

// An incomplete model: a convex set of sequence measures described by one of
// the supported parameterizations, together with its per-history conditional
// polytope rule.
class IncompleteModel {
 public:
  using Spec =
      std::variant<KernelConstraintModel, NoisySensorModel, VertexFamilyModel, MarginalRowsModel>;

  IncompleteModel(std::string name, Spec spec) : name_(std::move(name)), spec_(std::move(spec)) {}

  const std::string& name() const { return name_; }
  const Spec& spec() const { return spec_; }

  // The conditional polytope over the depth-H window at history y.
  ModelPolytope bound(const History& y, int horizon, const AlphabetSchedule& schedule) const;

  // Admissible next-symbol conditionals at y (for in-model environments).
  // Throws for kinds without a tractable one-step description.
  NextSymbolSet next_symbol_set(const History& y, const AlphabetSchedule& schedule) const;

 private:
  std::string name_;
  Spec spec_;
};

// The per-history conditional rule for one model, with a one-entry cache so
// ladder members at the same step share the polytope instance.
class RegularUpperBound {
 public:
  RegularUpperBound(std::shared_ptr<const IncompleteModel> model, AlphabetSchedule schedule);

  std::shared_ptr<const ModelPolytope> at(const History& y) const;
  const IncompleteModel& model() const { return *model_; }

 private:
  std::shared_ptr<const IncompleteModel> model_;
  AlphabetSchedule schedule_;
  mutable std::optional<History> cached_key_;
  mutable std::shared_ptr<const ModelPolytope> cached_;
};

// Equality constraints tying window weights to the kernel rows on active
// steps inside [n, n+H). Degenerate (0/1) kernels also yield the vertex list
// of compatible completions as a solver fast path.
ModelPolytope kernel_model_bound(const Kernel& kernel, const ActiveSteps& active,
                                 const History& y, int horizon,
                                 const AlphabetSchedule& schedule);

// Every one-step conditional inside the window gives each symbol probability
// at least p_min, encoded as rows linear in the window weights.
ModelPolytope noisy_sensor_bound(double p_min, const History& y, int horizon,
                                 const AlphabetSchedule& schedule);

// Conditional polytope of an explicit vertex family given history y: the
// hull of the conditioned (and window-marginalized) vertices, converted to
// facet rows. Returns the full simplex when every vertex misses y's cylinder.
ModelPolytope finite_conditional_bound(const VertexFamilyModel& family, const History& y,
                                       int horizon, const AlphabetSchedule& schedule);

// V-representation to facet rows for small vertex sets (affine hull
// equalities plus facet inequalities, enumerated brute force).
ModelPolytope polytope_from_vertices(const OutcomeWindow& window,
                                     std::vector<std::vector<double>> vertices);

}  // namespace credal
