#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace credal::oracle {

namespace {

struct GridSearch {
  const std::vector<double>& d;  // mu - nu
  const OutcomeWindow& w;
  const MetricFamily& metric;
  double step;
  std::vector<double> f;
  std::vector<double> remaining_gain;  // max extra objective from suffix coords
  double best = 0.0;

  void run() {
    const int k = static_cast<int>(d.size());
    f.assign(k, 0.0);
    remaining_gain.assign(k + 1, 0.0);
    for (int i = k - 1; i >= 0; --i)
      remaining_gain[i] = remaining_gain[i + 1] + std::fabs(d[i]);
    descend(0, 0.0, 0.0, 0.0);
  }

  void descend(int i, double obj, double max_abs, double lip) {
    if (max_abs + lip > 1.0 + 1e-12) return;
    if (obj + remaining_gain[i] <= best) return;
    if (i == static_cast<int>(d.size())) {
      best = std::max(best, obj);
      return;
    }
    const int steps = static_cast<int>(std::llround(1.0 / step));
    for (int s = -steps; s <= steps; ++s) {
      const double v = s * step;
      double new_max = std::max(max_abs, std::fabs(v));
      double new_lip = lip;
      bool ok = true;
      for (int j = 0; j < i; ++j) {
        const double diff = std::fabs(f[j] - v);
        if (diff == 0.0) continue;
        new_lip = std::max(new_lip, diff / metric.distance(w, j, i));
        if (new_max + new_lip > 1.0 + 1e-12) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      f[i] = v;
      descend(i + 1, obj + d[i] * v, new_max, new_lip);
    }
    f[i] = 0.0;
  }
};

}  // namespace

double grid_kr_distance(const FiniteMeasure& mu, const FiniteMeasure& nu,
                        const MetricFamily& metric, double step) {
  std::vector<double> d(mu.size());
  for (int i = 0; i < mu.size(); ++i) d[i] = mu[i] - nu[i];
  GridSearch gs{d, mu.window(), metric, step, {}, {}, 0.0};
  gs.run();
  return gs.best;
}

double grid_distance_to_halfline(const FiniteMeasure& mu, double lo, const MetricFamily& metric,
                                 double outer_step, double inner_step) {
  if (mu.size() != 2) throw std::invalid_argument("oracle expects a two-outcome window");
  double best = std::numeric_limits<double>::infinity();
  for (double p = lo; p <= 1.0 + 1e-12; p += outer_step) {
    const double q = std::min(p, 1.0);
    FiniteMeasure nu(mu.window(), {1.0 - q, q});
    best = std::min(best, grid_kr_distance(mu, nu, metric, inner_step));
  }
  return best;
}

std::vector<std::vector<double>> sensor_polytope_vertices(const OutcomeWindow& w, double p_min) {
  // Contexts: all prefixes of length 0..depth-1, indexed by (d, block).
  struct Context {
    int d;
    int block;
    int symbols;
  };
  std::vector<Context> contexts;
  long long total = 1;
  for (int d = 0; d < w.depth(); ++d) {
    for (int b = 0; b < w.num_prefixes(d); ++b) {
      contexts.push_back({d, b, w.size_at(d)});
      total *= w.size_at(d);
      if (total > 200000) throw std::invalid_argument("sensor vertex enumeration too large");
    }
  }
  std::vector<std::vector<double>> vertices;
  std::vector<int> choice(contexts.size(), 0);
  for (;;) {
    std::vector<double> v(w.size(), 1.0);
    for (int x = 0; x < w.size(); ++x) {
      for (std::size_t c = 0; c < contexts.size(); ++c) {
        const Context& ctx = contexts[c];
        if (w.prefix_block(x, ctx.d) != ctx.block) continue;
        const int sym = w.symbol(x, ctx.d);
        const double p =
            sym == choice[c] ? 1.0 - (ctx.symbols - 1) * p_min : p_min;
        v[x] *= p;
      }
    }
    vertices.push_back(std::move(v));
    std::size_t c = 0;
    while (c < contexts.size() && ++choice[c] == contexts[c].symbols) choice[c++] = 0;
    if (c == contexts.size()) break;
  }
  return vertices;
}

double min_vertex_edge(const std::vector<double>& f, const FiniteMeasure& mu,
                       const std::vector<std::vector<double>>& vertices) {
  double worst = std::numeric_limits<double>::infinity();
  const double base = mu.expectation(f);
  for (const std::vector<double>& v : vertices) {
    double ev = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) ev += v[i] * f[i];
    worst = std::min(worst, ev - base);
  }
  return worst;
}

std::vector<double> random_simplex_point(RandomStream& rng, int k) {
  std::vector<double> v(k);
  double sum = 0.0;
  for (double& x : v) {
    x = -std::log(1.0 - rng.next_double());
    sum += x;
  }
  for (double& x : v) x /= sum;
  return v;
}

double bisect_residual_boundary(const std::function<double(double)>& residual, double lo,
                                double hi, int iters) {
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (residual(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace credal::oracle
