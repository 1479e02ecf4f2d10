#include "credal/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace credal {

namespace {
constexpr double kTol = 1e-9;

History window_prefix_history(const OutcomeWindow& w, int block, int d,
                              const AlphabetSchedule& schedule) {
  // Decode the mixed-radix block back into symbols at offsets [0, d).
  std::vector<int> digits(d);
  for (int j = d - 1; j >= 0; --j) {
    const int s = w.size_at(j);
    digits[j] = block % s;
    block /= s;
  }
  History h = w.base();
  for (int j = 0; j < d; ++j) h = h.extended(digits[j], schedule);
  return h;
}

}  // namespace

ActiveSteps ActiveSteps::all() { return ActiveSteps{}; }
ActiveSteps ActiveSteps::even() {
  ActiveSteps a;
  a.kind_ = Kind::kEven;
  return a;
}
ActiveSteps ActiveSteps::odd() {
  ActiveSteps a;
  a.kind_ = Kind::kOdd;
  return a;
}
ActiveSteps ActiveSteps::from_list(std::vector<int> steps) {
  ActiveSteps a;
  a.kind_ = Kind::kList;
  std::sort(steps.begin(), steps.end());
  a.list_ = std::move(steps);
  return a;
}
ActiveSteps ActiveSteps::none() {
  ActiveSteps a;
  a.kind_ = Kind::kNone;
  return a;
}

bool ActiveSteps::contains(int step) const {
  switch (kind_) {
    case Kind::kAll: return true;
    case Kind::kEven: return step % 2 == 0;
    case Kind::kOdd: return step % 2 == 1;
    case Kind::kList: return std::binary_search(list_.begin(), list_.end(), step);
    case Kind::kNone: return false;
  }
  return false;
}

std::string ActiveSteps::describe() const {
  switch (kind_) {
    case Kind::kAll: return "all";
    case Kind::kEven: return "even";
    case Kind::kOdd: return "odd";
    case Kind::kList: return "list";
    case Kind::kNone: return "none";
  }
  return "?";
}

ModelPolytope kernel_model_bound(const Kernel& kernel, const ActiveSteps& active,
                                 const History& y, int horizon,
                                 const AlphabetSchedule& schedule) {
  OutcomeWindow w(y, horizon, schedule);
  const int n = y.size();
  std::vector<Constraint> rows;
  bool all_deterministic = true;
  // row cache per (offset, block): the kernel row at that context.
  std::vector<std::vector<std::vector<double>>> krows(horizon);
  for (int d = 0; d < horizon; ++d) {
    if (!active.contains(n + d)) continue;
    krows[d].resize(w.num_prefixes(d));
    for (int block = 0; block < w.num_prefixes(d); ++block) {
      History ctx = window_prefix_history(w, block, d, schedule);
      std::vector<double> krow = kernel.row(ctx);
      if (static_cast<int>(krow.size()) != w.size_at(d))
        throw DomainError("kernel row size does not match alphabet");
      for (double p : krow)
        if (p > kTol && p < 1.0 - kTol) all_deterministic = false;
      for (int o = 0; o < w.size_at(d); ++o) {
        Constraint c;
        c.coeffs.assign(w.size(), 0.0);
        c.bound = 0.0;
        c.equality = true;
        for (int x = 0; x < w.size(); ++x) {
          if (w.prefix_block(x, d) != block) continue;
          c.coeffs[x] -= krow[o];
          if (w.symbol(x, d) == o) c.coeffs[x] += 1.0;
        }
        rows.push_back(std::move(c));
      }
      krows[d][block] = std::move(krow);
    }
  }
  ModelPolytope poly(w, std::move(rows));
  if (all_deterministic) {
    // The polytope is the sub-simplex of completions compatible with every
    // active kernel row; its vertices are the compatible point masses.
    std::vector<std::vector<double>> vertices;
    for (int x = 0; x < w.size(); ++x) {
      bool ok = true;
      for (int d = 0; d < horizon && ok; ++d) {
        if (!active.contains(n + d)) continue;
        const std::vector<double>& krow = krows[d][w.prefix_block(x, d)];
        if (krow[w.symbol(x, d)] < 1.0 - kTol) ok = false;
      }
      if (!ok) continue;
      std::vector<double> v(w.size(), 0.0);
      v[x] = 1.0;
      vertices.push_back(std::move(v));
    }
    if (!vertices.empty()) poly.set_vertices(std::move(vertices));
  }
  return poly;
}

ModelPolytope noisy_sensor_bound(double p_min, const History& y, int horizon,
                                 const AlphabetSchedule& schedule) {
  OutcomeWindow w(y, horizon, schedule);
  if (p_min < 0.0) throw DomainError("p_min must be nonnegative");
  for (int d = 0; d < horizon; ++d)
    if (p_min > 1.0 / w.size_at(d) + kTol)
      throw DomainError("p_min exceeds 1/|alphabet|: sensor polytope is empty");
  if (p_min == 0.0) return ModelPolytope::full_simplex(w);
  std::vector<Constraint> rows;
  for (int d = 0; d < horizon; ++d) {
    for (int block = 0; block < w.num_prefixes(d); ++block) {
      for (int o = 0; o < w.size_at(d); ++o) {
        // p_min * mu(z) - mu(z, o) <= 0
        Constraint c;
        c.coeffs.assign(w.size(), 0.0);
        c.bound = 0.0;
        for (int x = 0; x < w.size(); ++x) {
          if (w.prefix_block(x, d) != block) continue;
          c.coeffs[x] += p_min;
          if (w.symbol(x, d) == o) c.coeffs[x] -= 1.0;
        }
        rows.push_back(std::move(c));
      }
    }
  }
  return ModelPolytope(w, std::move(rows));
}

namespace {

// Facet enumeration support: orthonormalize `vecs` in place, dropping
// near-zero directions; returns the basis.
std::vector<std::vector<double>> gram_schmidt(const std::vector<std::vector<double>>& vecs,
                                              double tol = 1e-10) {
  std::vector<std::vector<double>> basis;
  for (std::vector<double> v : vecs) {
    for (const auto& b : basis) {
      double dot = std::inner_product(v.begin(), v.end(), b.begin(), 0.0);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= dot * b[i];
    }
    double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    if (norm > tol) {
      for (double& x : v) x /= norm;
      basis.push_back(std::move(v));
    }
  }
  return basis;
}

}  // namespace

ModelPolytope polytope_from_vertices(const OutcomeWindow& window,
                                     std::vector<std::vector<double>> vertices) {
  const int D = window.size();
  for (const auto& v : vertices)
    if (static_cast<int>(v.size()) != D)
      throw DomainError("vertex length does not match window size");
  // Dedupe.
  std::vector<std::vector<double>> verts;
  for (auto& v : vertices) {
    bool dup = false;
    for (const auto& u : verts) {
      double gap = 0.0;
      for (int i = 0; i < D; ++i) gap = std::max(gap, std::fabs(u[i] - v[i]));
      if (gap < 1e-12) {
        dup = true;
        break;
      }
    }
    if (!dup) verts.push_back(std::move(v));
  }
  if (verts.empty()) throw DomainError("vertex polytope needs at least one vertex");

  const std::vector<double>& v0 = verts[0];
  std::vector<std::vector<double>> diffs;
  for (std::size_t i = 1; i < verts.size(); ++i) {
    std::vector<double> d(D);
    for (int x = 0; x < D; ++x) d[x] = verts[i][x] - v0[x];
    diffs.push_back(std::move(d));
  }
  std::vector<std::vector<double>> span = gram_schmidt(diffs);
  const int d = static_cast<int>(span.size());

  std::vector<Constraint> rows;
  // Affine-hull equalities: complement directions of the span.
  {
    std::vector<std::vector<double>> all = span;
    for (int j = 0; j < D; ++j) {
      std::vector<double> e(D, 0.0);
      e[j] = 1.0;
      all.push_back(std::move(e));
    }
    std::vector<std::vector<double>> full = gram_schmidt(all);
    for (std::size_t i = span.size(); i < full.size(); ++i) {
      const std::vector<double>& u = full[i];
      double c = std::inner_product(u.begin(), u.end(), v0.begin(), 0.0);
      rows.push_back({u, c, true});
    }
  }

  if (d > 0) {
    // Hull coordinates.
    const int NV = static_cast<int>(verts.size());
    std::vector<std::vector<double>> t(NV, std::vector<double>(d, 0.0));
    for (int i = 0; i < NV; ++i)
      for (int j = 0; j < d; ++j)
        for (int x = 0; x < D; ++x) t[i][j] += span[j][x] * (verts[i][x] - v0[x]);

    // Facets: hyperplanes through d affinely independent vertices with all
    // others on one side. Brute force over d-subsets; desk scale only.
    double subsets = 1.0;
    for (int i = 0; i < d; ++i) subsets *= static_cast<double>(NV - i) / (i + 1);
    if (subsets > 20000.0 || d > 6)
      throw DomainError("explicit vertex family too large for facet enumeration");

    std::vector<int> idx(d);
    for (int i = 0; i < d; ++i) idx[i] = i;
    auto emit = [&](const std::vector<double>& w_dir, double c) {
      // Lift w to window coordinates: a = span^T w, bound c + a·v0.
      std::vector<double> a(D, 0.0);
      for (int j = 0; j < d; ++j)
        for (int x = 0; x < D; ++x) a[x] += w_dir[j] * span[j][x];
      double bound = c + std::inner_product(a.begin(), a.end(), v0.begin(), 0.0);
      // Dedupe by direction.
      for (const Constraint& r : rows) {
        if (r.equality) continue;
        double gap = std::fabs(r.bound - bound);
        for (int x = 0; x < D; ++x) gap += std::fabs(r.coeffs[x] - a[x]);
        if (gap < 1e-9) return;
      }
      rows.push_back({a, bound, false});
    };
    for (;;) {
      // Hyperplane through t[idx...]: normal orthogonal to the d-1 edges.
      std::vector<std::vector<double>> edges;
      for (int i = 1; i < d; ++i) {
        std::vector<double> e(d);
        for (int j = 0; j < d; ++j) e[j] = t[idx[i]][j] - t[idx[0]][j];
        edges.push_back(std::move(e));
      }
      std::vector<std::vector<double>> eb = gram_schmidt(edges);
      if (static_cast<int>(eb.size()) == d - 1) {
        // Find a unit normal in the orthogonal complement.
        std::vector<double> w_dir;
        for (int j = 0; j < d && w_dir.empty(); ++j) {
          std::vector<double> cand(d, 0.0);
          cand[j] = 1.0;
          for (const auto& b : eb) {
            double dot = std::inner_product(cand.begin(), cand.end(), b.begin(), 0.0);
            for (int x = 0; x < d; ++x) cand[x] -= dot * b[x];
          }
          double norm = std::sqrt(std::inner_product(cand.begin(), cand.end(), cand.begin(), 0.0));
          if (norm > 1e-9) {
            for (double& x : cand) x /= norm;
            w_dir = std::move(cand);
          }
        }
        if (!w_dir.empty()) {
          double c = std::inner_product(w_dir.begin(), w_dir.end(), t[idx[0]].begin(), 0.0);
          bool all_le = true, all_ge = true;
          for (int i = 0; i < NV; ++i) {
            double val = std::inner_product(w_dir.begin(), w_dir.end(), t[i].begin(), 0.0);
            if (val > c + 1e-10) all_le = false;
            if (val < c - 1e-10) all_ge = false;
          }
          if (all_le) emit(w_dir, c);
          if (all_ge) {
            std::vector<double> neg(d);
            for (int j = 0; j < d; ++j) neg[j] = -w_dir[j];
            emit(neg, -c);
          }
        }
      }
      // Next subset.
      int i = d - 1;
      while (i >= 0 && idx[i] == NV - d + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (int j = i + 1; j < d; ++j) idx[j] = idx[j - 1] + 1;
    }
  }

  ModelPolytope poly(window, std::move(rows));
  poly.set_vertices(std::move(verts));
  return poly;
}

ModelPolytope finite_conditional_bound(const VertexFamilyModel& family, const History& y,
                                       int horizon, const AlphabetSchedule& schedule) {
  OutcomeWindow w(y, horizon, schedule);
  const int n = y.size();
  if (n >= family.depth) return ModelPolytope::full_simplex(w);
  const int cond_depth = std::min(horizon, family.depth - n);
  OutcomeWindow family_window(History(), family.depth, schedule);
  OutcomeWindow cond_window(y, cond_depth, schedule);

  // Condition each family vertex on y's cylinder and marginalize to the
  // conditional window depth.
  std::vector<std::vector<double>> cond_vertices;
  for (const std::vector<double>& vw : family.vertices) {
    FiniteMeasure v(family_window, vw);
    try {
      FiniteMeasure c = v.conditioned(y);
      std::vector<double> marg(cond_window.size(), 0.0);
      const int rest = c.window().size() / cond_window.size();
      for (int x = 0; x < c.size(); ++x) marg[x / rest] += c[x];
      cond_vertices.push_back(std::move(marg));
    } catch (const ConditioningError&) {
      // vertex gives zero mass to y's cylinder: contributes nothing
    }
  }
  if (cond_vertices.empty()) return ModelPolytope::full_simplex(w);  // unbounded update

  ModelPolytope cond_poly = polytope_from_vertices(cond_window, std::move(cond_vertices));
  if (cond_depth == horizon) return cond_poly;

  // Lift rows to the full window: constraints act on prefix-cylinder masses.
  std::vector<Constraint> rows;
  for (const Constraint& c : cond_poly.constraints()) {
    Constraint lifted;
    lifted.coeffs.assign(w.size(), 0.0);
    lifted.bound = c.bound;
    lifted.equality = c.equality;
    for (int x = 0; x < w.size(); ++x)
      lifted.coeffs[x] = c.coeffs[w.prefix_block(x, cond_depth)];
    rows.push_back(std::move(lifted));
  }
  return ModelPolytope(w, std::move(rows));
}

ModelPolytope IncompleteModel::bound(const History& y, int horizon,
                                     const AlphabetSchedule& schedule) const {
  if (std::holds_alternative<KernelConstraintModel>(spec_)) {
    const auto& k = std::get<KernelConstraintModel>(spec_);
    return kernel_model_bound(*k.kernel, k.active, y, horizon, schedule);
  }
  if (std::holds_alternative<NoisySensorModel>(spec_)) {
    return noisy_sensor_bound(std::get<NoisySensorModel>(spec_).p_min, y, horizon, schedule);
  }
  if (std::holds_alternative<VertexFamilyModel>(spec_)) {
    return finite_conditional_bound(std::get<VertexFamilyModel>(spec_), y, horizon, schedule);
  }
  const auto& m = std::get<MarginalRowsModel>(spec_);
  OutcomeWindow w(y, horizon, schedule);
  std::vector<Constraint> rows;
  for (int offset : m.offsets) {
    if (offset < 0 || offset >= horizon) continue;
    for (const SymbolRow& r : m.rows) {
      if (static_cast<int>(r.coeffs.size()) != w.size_at(offset))
        throw DomainError("marginal row length does not match alphabet");
      Constraint c;
      c.coeffs.assign(w.size(), 0.0);
      c.bound = r.bound;
      c.equality = r.equality;
      for (int x = 0; x < w.size(); ++x) c.coeffs[x] = r.coeffs[w.symbol(x, offset)];
      rows.push_back(std::move(c));
    }
  }
  return ModelPolytope(w, std::move(rows));
}

NextSymbolSet IncompleteModel::next_symbol_set(const History& y,
                                               const AlphabetSchedule& schedule) const {
  NextSymbolSet out;
  const int s = schedule.size_at(y.size());
  if (std::holds_alternative<KernelConstraintModel>(spec_)) {
    const auto& k = std::get<KernelConstraintModel>(spec_);
    if (k.active.contains(y.size())) out.forced = k.kernel->row(y);
    return out;
  }
  if (std::holds_alternative<NoisySensorModel>(spec_)) {
    const double p = std::get<NoisySensorModel>(spec_).p_min;
    for (int o = 0; o < s; ++o) {
      SymbolRow r;
      r.coeffs.assign(s, 0.0);
      r.coeffs[o] = -1.0;
      r.bound = -p;
      out.rows.push_back(std::move(r));
    }
    return out;
  }
  if (std::holds_alternative<MarginalRowsModel>(spec_)) {
    const auto& m = std::get<MarginalRowsModel>(spec_);
    if (std::find(m.offsets.begin(), m.offsets.end(), 0) != m.offsets.end()) out.rows = m.rows;
    return out;
  }
  throw DomainError("model kind '" + name_ + "' has no one-step conditional description");
}

RegularUpperBound::RegularUpperBound(std::shared_ptr<const IncompleteModel> model,
                                     AlphabetSchedule schedule)
    : model_(std::move(model)), schedule_(std::move(schedule)) {}

std::shared_ptr<const ModelPolytope> RegularUpperBound::at(const History& y) const {
  if (cached_key_ && *cached_key_ == y) return cached_;
  cached_ = std::make_shared<const ModelPolytope>(
      model_->bound(y, schedule_.horizon(), schedule_));
  cached_key_ = y;
  return cached_;
}

}  // namespace credal
