#include "credal/market.hpp"

#include <algorithm>
#include <cmath>

namespace credal {

double FixedPointConfig::tau(int step) const {
  return std::max(tau0 * std::pow(2.0, -0.5 * step), tau_floor);
}

void FixedPointConfig::validate() const {
  if (tau0 <= 0.0 || tau_floor <= 0.0) throw DomainError("residual schedule must be positive");
  if (max_evals < 1 || restarts < 1) throw DomainError("solver budgets must be positive");
  if (eta_max <= 0.0 || eta_halvings < 1) throw DomainError("step-size schedule must be positive");
}

namespace {

struct Evaluation {
  std::vector<double> payoff;
  double residual = 0.0;
  std::unique_ptr<BetEvalCache> cache;
};

Evaluation evaluate(const Bet& bet, const FiniteMeasure& mu, const MetricFamily& metric) {
  Evaluation ev;
  ev.cache = std::make_unique<BetEvalCache>(&metric);
  std::vector<double> values = bet.values(mu, *ev.cache);
  ev.payoff = payoff_V(values, mu);
  ev.residual = *std::max_element(ev.payoff.begin(), ev.payoff.end());
  return ev;
}

FiniteMeasure exp_tilt(const FiniteMeasure& mu, const std::vector<double>& payoff, double eta) {
  const double shift = *std::max_element(payoff.begin(), payoff.end());
  std::vector<double> w(mu.size());
  double sum = 0.0;
  for (int x = 0; x < mu.size(); ++x) {
    w[x] = mu[x] * std::exp(eta * (payoff[x] - shift));
    sum += w[x];
  }
  for (double& v : w) v /= sum;
  return FiniteMeasure(mu.window(), std::move(w));
}

}  // namespace

SolveResult solve_step(const std::optional<Bet>& bet, const OutcomeWindow& window,
                       const MetricFamily& metric, const FixedPointConfig& cfg, int step,
                       const std::optional<FiniteMeasure>& warm_start) {
  SolveResult out;
  if (!bet) {
    out.forecast = FiniteMeasure::uniform(window);
    out.cache = std::make_unique<BetEvalCache>(&metric);
    return out;
  }
  const double tau = cfg.tau(step);

  std::optional<FiniteMeasure> best_mu;
  std::vector<double> best_payoff;
  double best_residual = std::numeric_limits<double>::infinity();
  int evals = 0;

  auto eval_point = [&](const FiniteMeasure& mu) {
    ++evals;
    Evaluation ev = evaluate(*bet, mu, metric);
    if (ev.residual < best_residual) {
      best_mu = mu;
      best_residual = ev.residual;
      best_payoff = ev.payoff;
    }
    return ev;
  };

  // Deterministic restart candidates: warm start, uniform, then a point-mass
  // mix toward the largest payoff seen so far.
  auto candidate = [&](int r) -> FiniteMeasure {
    if (r == 0 && warm_start) return *warm_start;
    if (r <= 1) return FiniteMeasure::uniform(window);
    int corner = 0;
    if (!best_payoff.empty())
      corner = static_cast<int>(
          std::max_element(best_payoff.begin(), best_payoff.end()) - best_payoff.begin());
    std::vector<double> w(window.size(), 0.1 / window.size());
    w[corner] += 0.9;
    return FiniteMeasure(window, std::move(w));
  };

  for (int r = 0; r < cfg.restarts && evals < cfg.max_evals; ++r) {
    out.restarts_used = r + 1;
    FiniteMeasure mu = candidate(r);
    Evaluation current = eval_point(mu);
    if (current.residual <= tau) {
      out.forecast = std::move(mu);
      out.residual = current.residual;
      out.evaluations = evals;
      out.cache = std::move(current.cache);
      return out;
    }
    while (evals < cfg.max_evals) {
      double scale = 1e-12;
      for (double p : current.payoff) scale = std::max(scale, std::fabs(p));
      bool moved = false;
      double eta_rel = cfg.eta_max;
      for (int h = 0; h < cfg.eta_halvings && evals < cfg.max_evals; ++h, eta_rel *= 0.5) {
        FiniteMeasure trial = exp_tilt(mu, current.payoff, eta_rel / scale);
        Evaluation ev = eval_point(trial);
        if (ev.residual <= tau) {
          out.forecast = std::move(trial);
          out.residual = ev.residual;
          out.evaluations = evals;
          out.cache = std::move(ev.cache);
          return out;
        }
        if (ev.residual < current.residual - 1e-15) {
          mu = std::move(trial);
          current = std::move(ev);
          moved = true;
          break;
        }
      }
      if (!moved) break;
    }
  }

  // Budget exhausted: return the best candidate, flagged.
  out.flagged = true;
  if (!best_mu) best_mu = FiniteMeasure::uniform(window);
  Evaluation fin = evaluate(*bet, *best_mu, metric);
  out.evaluations = evals;
  out.forecast = std::move(best_mu);
  out.residual = fin.residual;
  out.cache = std::move(fin.cache);
  return out;
}

std::optional<Bet> aggregate_bet(RosterMixtureGambler& roster, const StepContext& ctx) {
  return roster.propose(ctx);
}

Forecaster::Forecaster(AlphabetSchedule schedule, MetricFamily metric,
                       std::vector<std::shared_ptr<const IncompleteModel>> models,
                       std::vector<int> precision_ladder, int b_max, FixedPointConfig cfg)
    : schedule_(std::move(schedule)),
      metric_(std::move(metric)),
      models_(std::move(models)),
      ladder_(std::move(precision_ladder)),
      cfg_(cfg) {
  cfg_.validate();
  for (int k : ladder_)
    if (k < 1) throw DomainError("precision ladder entries must be >= 1");
  std::vector<std::unique_ptr<Gambler>> roster_members;
  for (const auto& model : models_) {
    bounds_.push_back(std::make_shared<RegularUpperBound>(model, schedule_));
    for (int k : ladder_) {
      auto strategy = std::make_unique<SavvyStrategy>(bounds_.back(), 1.0 / k);
      auto patient = pg_wrap(std::move(strategy));
      PatientGambler* patient_ptr = patient.get();
      auto mixed = zeta_mix(std::move(patient), b_max);
      members_.push_back({model->name(), k, 1.0 / k, patient_ptr, mixed.get()});
      roster_members.push_back(std::move(mixed));
    }
  }
  roster_ = xi_mix(std::move(roster_members));
}

const ForecastStep& Forecaster::step() {
  if (awaiting_observe_) throw DomainError("step() called twice without observe()");
  pending_window_.emplace(history_, schedule_.horizon(), schedule_);
  StepContext ctx{step_index_, &history_, &*pending_window_, &metric_};
  std::optional<Bet> bet = aggregate_bet(*roster_, ctx);
  SolveResult solved = solve_step(bet, *pending_window_, metric_, cfg_, step_index_, warm_);

  pending_ = ForecastStep{};
  pending_.step = step_index_;
  pending_.history = history_;
  pending_.forecast = std::move(solved.forecast);
  pending_.residual = solved.residual;
  pending_.tau = cfg_.tau(step_index_);
  pending_.flagged = solved.flagged;
  pending_.evaluations = solved.evaluations;
  pending_.restarts_used = solved.restarts_used;
  pending_cache_ = std::move(solved.cache);
  for (std::size_t m = 0; m < models_.size(); ++m) {
    const ModelDistance& md =
        pending_cache_->distance(*pending_.forecast, bounds_[m]->at(history_));
    pending_.model_distance[models_[m]->name()] = md.distance;
  }
  awaiting_observe_ = true;
  return pending_;
}

void Forecaster::observe(int symbol) {
  if (!awaiting_observe_) throw DomainError("observe() called before step()");
  StepContext ctx{step_index_, &history_, &*pending_window_, &metric_};
  StepOutcome out{&*pending_.forecast, symbol, pending_cache_.get()};
  roster_->observe(ctx, out);

  History next = history_.extended(symbol, schedule_);
  warm_ = warm_start_for(next);
  history_ = std::move(next);
  ++step_index_;
  awaiting_observe_ = false;
}

std::optional<FiniteMeasure> Forecaster::warm_start_for(const History& next) const {
  // Next window's deepest position: extend with the mean of the kernels
  // active there, or uniformly when none applies. The rest is the previous
  // forecast conditioned on the revealed symbol.
  const int new_pos = next.size() + schedule_.horizon() - 1;
  std::vector<const KernelConstraintModel*> active;
  for (const auto& model : models_) {
    if (const auto* k = std::get_if<KernelConstraintModel>(&model->spec()))
      if (k->active.contains(new_pos)) active.push_back(k);
  }
  Kernel extension(
      [this, active](const History& h) {
        const int s = schedule_.size_at(h.size());
        std::vector<double> row(s, 0.0);
        if (active.empty()) {
          std::fill(row.begin(), row.end(), 1.0 / s);
          return row;
        }
        for (const auto* k : active) {
          std::vector<double> r = k->kernel->row(h);
          for (int o = 0; o < s; ++o) row[o] += r[o] / active.size();
        }
        return row;
      },
      "warm-extension");

  try {
    if (!pending_.forecast) return std::nullopt;
    if (schedule_.horizon() == 1) {
      OutcomeWindow w(next, 1, schedule_);
      return FiniteMeasure(w, extension.row(next));
    }
    FiniteMeasure cond = pending_.forecast->conditioned(next);
    return semidirect(cond, extension);
  } catch (const ConditioningError&) {
    return std::nullopt;  // revealed a zero-mass branch; solver starts fresh
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

std::unique_ptr<Forecaster> dominant_forecaster(
    AlphabetSchedule schedule, MetricFamily metric,
    std::vector<std::shared_ptr<const IncompleteModel>> models, std::vector<int> precision_ladder,
    int b_max, FixedPointConfig cfg) {
  return std::make_unique<Forecaster>(std::move(schedule), std::move(metric), std::move(models),
                                      std::move(precision_ladder), b_max, cfg);
}

}  // namespace credal
