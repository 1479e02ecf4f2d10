#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "credal/gambling.hpp"

namespace credal {

// Controls for the per-step fixed-point search. The residual target tau_n
// decays geometrically and is floored; the summability of the schedule keeps
// accumulated dominance slack finite over any run.
struct FixedPointConfig {
  double tau0 = 1e-3;
  double tau_floor = 1e-7;
  int max_evals = 160;    // evaluation budget per step (each costs one LP per model)
  int restarts = 3;       // warm start, uniform, then corner mixes
  double eta_max = 32.0;  // multiplicative step scale, relative to max |payoff|
  int eta_halvings = 12;

  double tau(int step) const;
  void validate() const;
};

// One round's output: the forecast, its residual certificate, and per-model
// distances at the accepted forecast.
struct ForecastStep {
  int step = 0;
  History history;
  std::optional<FiniteMeasure> forecast;
  double residual = 0.0;
  double tau = 0.0;
  bool flagged = false;
  int evaluations = 0;
  int restarts_used = 0;
  std::map<std::string, double> model_distance;
};

struct SolveResult {
  std::optional<FiniteMeasure> forecast;
  double residual = 0.0;
  bool flagged = false;
  int evaluations = 0;
  int restarts_used = 0;
  std::unique_ptr<BetEvalCache> cache;  // memo at the accepted forecast
};

// Finds a forecast making the bet unwinnable up to tau: residual(mu) =
// max_x (bet(mu,x) - E_mu[bet(mu,.)]) <= tau. Damped multiplicative-weights
// ascent with a big-to-small step sweep and deterministic restarts; returns
// the best candidate found (flagged) when the budget runs out. A missing bet
// yields the uniform reference measure with residual zero.
SolveResult solve_step(const std::optional<Bet>& bet, const OutcomeWindow& window,
                       const MetricFamily& metric, const FixedPointConfig& cfg, int step,
                       const std::optional<FiniteMeasure>& warm_start);

// The aggregate market bet at the current step (nothing when every member
// structurally sits out).
std::optional<Bet> aggregate_bet(RosterMixtureGambler& roster, const StepContext& ctx);

// Handles to one roster member's layers, for audits.
struct MemberHandles {
  std::string model_name;
  int precision_k = 1;
  double eps = 1.0;
  PatientGambler* patient = nullptr;
  BudgetMixtureGambler* mixture = nullptr;
};

// The dominant forecaster: a roster of patient savvy gamblers (one per model
// and precision level), budget-mixed and aggregated, priced step by step
// through the fixed-point solver.
class Forecaster {
 public:
  Forecaster(AlphabetSchedule schedule, MetricFamily metric,
             std::vector<std::shared_ptr<const IncompleteModel>> models,
             std::vector<int> precision_ladder, int b_max, FixedPointConfig cfg);

  // Computes the forecast for the current history. Call observe() next.
  const ForecastStep& step();
  // Reveals the environment's symbol and settles every ledger.
  void observe(int symbol);

  const History& history() const { return history_; }
  const AlphabetSchedule& schedule() const { return schedule_; }
  const MetricFamily& metric() const { return metric_; }
  int current_step() const { return step_index_; }
  const std::vector<MemberHandles>& members() const { return members_; }
  RosterMixtureGambler& roster() { return *roster_; }
  const ForecastStep& last_step() const { return pending_; }

 private:
  std::optional<FiniteMeasure> warm_start_for(const History& next) const;

  AlphabetSchedule schedule_;
  MetricFamily metric_;
  std::vector<std::shared_ptr<const IncompleteModel>> models_;
  std::vector<std::shared_ptr<RegularUpperBound>> bounds_;
  std::vector<int> ladder_;
  FixedPointConfig cfg_;
  std::unique_ptr<RosterMixtureGambler> roster_;
  std::vector<MemberHandles> members_;

  History history_;
  int step_index_ = 0;
  std::optional<FiniteMeasure> warm_;
  ForecastStep pending_;
  std::unique_ptr<BetEvalCache> pending_cache_;
  std::optional<OutcomeWindow> pending_window_;
  bool awaiting_observe_ = false;
};

std::unique_ptr<Forecaster> dominant_forecaster(
    AlphabetSchedule schedule, MetricFamily metric,
    std::vector<std::shared_ptr<const IncompleteModel>> models, std::vector<int> precision_ladder,
    int b_max, FixedPointConfig cfg);

}  // namespace credal
