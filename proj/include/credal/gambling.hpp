#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "credal/kr.hpp"
#include "credal/models.hpp"

namespace credal {

// Memo of model-distance solves for one fixed candidate forecast. Shared by
// every ladder member and by the harness within a single evaluation, so the
// per-model LP runs once per candidate.
class BetEvalCache {
 public:
  explicit BetEvalCache(const MetricFamily* metric) : metric_(metric) {}

  const ModelDistance& distance(const FiniteMeasure& mu,
                                const std::shared_ptr<const ModelPolytope>& poly);
  const MetricFamily& metric() const { return *metric_; }

 private:
  const MetricFamily* metric_;
  std::map<const ModelPolytope*, ModelDistance> memo_;
};

// A bet: raw payoff values over the window as a function of the candidate
// forecast. Implementations must be continuous in the forecast; the LP-backed
// separating bets below are piecewise continuous with jumps only where the
// witness is degenerate, which the fixed-point solver tolerates because it
// certifies residuals rather than assuming convergence.
struct Bet {
  std::function<std::vector<double>(const FiniteMeasure&, BetEvalCache&)> values;
};

// Fair payoff of a bet at forecast mu: values - E_mu[values].
std::vector<double> payoff_V(const std::vector<double>& bet_values, const FiniteMeasure& mu);

struct StepContext {
  int step = 0;
  const History* history = nullptr;
  const OutcomeWindow* window = nullptr;
  const MetricFamily* metric = nullptr;
};

struct StepOutcome {
  const FiniteMeasure* chosen = nullptr;
  int symbol = 0;
  BetEvalCache* cache = nullptr;  // memo evaluated at `chosen`
};

// Running account of a gambler's fair payoffs. Entries stay vector-valued
// over the not-yet-revealed positions they depend on and collapse to the
// settled scalar once fully revealed. worst()/best() are the exact min/max of
// the cumulative payoff over all joint completions of the pending positions.
class Ledger {
 public:
  void add_payoff(std::vector<double> payoff);
  // Reveal the next symbol; `first_size` is the alphabet size at the revealed
  // position.
  void reveal(int symbol, int first_size);

  double settled() const { return settled_; }
  double worst() const;
  double best() const;
  // Cumulative payoff as a vector over a window of `size` completions whose
  // leading positions cover all pending entries.
  std::vector<double> value_for_window(int size) const;
  int pending_count() const { return static_cast<int>(entries_.size()); }

 private:
  double settled_ = 0.0;
  std::vector<std::vector<double>> entries_;
};

// Spec-facing wrapper around Ledger mutation: applies one step's payoff and
// the revealed symbol.
void ledger_update(Ledger& ledger, const std::vector<double>& payoff, int symbol, int first_size);

// A forecast-history-free family of bets with a uniform sup-norm bound.
class GamblingStrategy {
 public:
  virtual ~GamblingStrategy() = default;
  virtual Bet propose(const StepContext& ctx) = 0;
  virtual double uniform_bound() const = 0;
};

// Bets the separating witness of the model's conditional polytope, scaled by
// (distance - eps)_+. Zero within eps of the model; otherwise guarantees edge
// at least (r - eps)_+ * r against every model member.
class SavvyStrategy : public GamblingStrategy {
 public:
  SavvyStrategy(std::shared_ptr<RegularUpperBound> bound, double eps);

  Bet propose(const StepContext& ctx) override;
  double uniform_bound() const override { return 2.0; }  // KR diameter of the simplex
  double eps() const { return eps_; }
  const RegularUpperBound& bound() const { return *bound_; }
  std::shared_ptr<const ModelPolytope> polytope_at(const History& y) const {
    return bound_->at(y);
  }

 private:
  std::shared_ptr<RegularUpperBound> bound_;
  double eps_;
};

// A bet emitter that may depend on the forecast history through replayable
// internal state.
class Gambler {
 public:
  virtual ~Gambler() = default;
  // May return nothing when the gambler structurally sits out this step.
  virtual std::optional<Bet> propose(const StepContext& ctx) = 0;
  // Settles the step: returns this gambler's fair payoff vector at the
  // chosen forecast (empty when it sat out).
  virtual std::vector<double> observe(const StepContext& ctx, const StepOutcome& out) = 0;
};

struct PatientAudit {
  bool played = false;
  double worst = 0.0;   // ledger extremes right after the step's payoff
  double best = 0.0;
  double bet_sup = 0.0;             // sup-norm of the played bet at the forecast
  double bet_lipschitz_norm = 0.0;  // rho-norm of the played bet
  double fair_gap = 0.0;            // |E_mu[payoff]|
  double uncertainty_bound = 0.0;   // 2 * uniform bound + 1
};

// Plays the strategy only when the ledger's best-worst spread is at most 1,
// keeping the uncertainty about outstanding bets bounded.
class PatientGambler : public Gambler {
 public:
  explicit PatientGambler(std::unique_ptr<GamblingStrategy> strategy);

  std::optional<Bet> propose(const StepContext& ctx) override;
  std::vector<double> observe(const StepContext& ctx, const StepOutcome& out) override;

  bool will_play() const { return play_next_; }
  const PatientAudit& audit() const { return audit_; }
  const Ledger& ledger() const { return ledger_; }
  GamblingStrategy& strategy() { return *strategy_; }

 private:
  std::unique_ptr<GamblingStrategy> strategy_;
  Ledger ledger_;
  bool play_next_ = true;
  std::optional<Bet> current_bet_;
  PatientAudit audit_;
};

struct BudgetAudit {
  double factor = 1.0;         // scaling applied this step
  double wrapped_worst = 0.0;  // wrapped ledger floor right after the payoff
  bool halted = false;
};

// When the inner gambler's running floor would breach -b, rescales the
// current bet so the wrapped ledger never drops below -b, and halts for good
// once the inner floor reaches -b.
class BudgetWrappedGambler : public Gambler {
 public:
  BudgetWrappedGambler(std::unique_ptr<Gambler> inner, double budget);

  std::optional<Bet> propose(const StepContext& ctx) override;
  std::vector<double> observe(const StepContext& ctx, const StepOutcome& out) override;

  const BudgetAudit& audit() const { return audit_; }
  const Ledger& wrapped_ledger() const { return wrapped_; }

 private:
  double factor_at(const std::vector<double>& inner_payoff, int window_size) const;

  std::unique_ptr<Gambler> inner_;
  double budget_;
  bool halted_ = false;
  Ledger inner_ledger_;
  Ledger wrapped_;
  std::optional<Bet> inner_bet_;
  BudgetAudit audit_;
};

struct MixtureAudit {
  double budget_margin = 0.0;  // min over budgets b of (wrapped floor_b + b)
  double mix_worst = 0.0;      // floor of the weight-mixed ledger
  double floor_bound = 0.0;    // sum_b zeta(b) * b over the truncated range
};

// The budget mixture sum_b zeta(b) * Bd_b applied to one gambler, with
// zeta(b) = max(b,1)^-3, truncated at b_max. All budget levels share the
// inner gambler and its payoff stream.
class BudgetMixtureGambler : public Gambler {
 public:
  BudgetMixtureGambler(std::unique_ptr<Gambler> inner, int b_max);

  std::optional<Bet> propose(const StepContext& ctx) override;
  std::vector<double> observe(const StepContext& ctx, const StepOutcome& out) override;

  const MixtureAudit& audit() const { return audit_; }
  Gambler& inner() { return *inner_; }

 private:
  std::vector<double> factors_at(const std::vector<double>& inner_payoff, int window_size) const;

  std::unique_ptr<Gambler> inner_;
  int b_max_;
  std::vector<double> zeta_;  // zeta_[b-1] = max(b,1)^-3
  std::vector<bool> halted_;
  Ledger inner_ledger_;
  // Per-entry payoff vectors aligned with per-budget scale factors.
  struct Entry {
    std::vector<double> v;
    std::vector<double> factors;
  };
  std::vector<Entry> entries_;
  std::vector<double> settled_b_;
  MixtureAudit audit_;
};

struct RosterAudit {
  double worst = 0.0;
  double best = 0.0;
  double fair_gap = 0.0;
};

// Aggregate of a roster with weights (j+1)^-2; member j joins at step j.
class RosterMixtureGambler : public Gambler {
 public:
  explicit RosterMixtureGambler(std::vector<std::unique_ptr<Gambler>> members);

  std::optional<Bet> propose(const StepContext& ctx) override;
  std::vector<double> observe(const StepContext& ctx, const StepOutcome& out) override;

  const RosterAudit& audit() const { return audit_; }
  int size() const { return static_cast<int>(members_.size()); }
  Gambler& member(int j) { return *members_[j]; }
  static double weight(int j);

 private:
  std::vector<std::unique_ptr<Gambler>> members_;
  Ledger ledger_;
  RosterAudit audit_;
};

// Operator-style builders mirroring the construction order: strategies are
// wrapped patient, budget-mixed, then aggregated.
std::unique_ptr<PatientGambler> pg_wrap(std::unique_ptr<GamblingStrategy> strategy);
std::unique_ptr<BudgetWrappedGambler> budget_wrap(std::unique_ptr<Gambler> gambler, double budget);
std::unique_ptr<BudgetMixtureGambler> zeta_mix(std::unique_ptr<Gambler> gambler, int b_max);
std::unique_ptr<RosterMixtureGambler> xi_mix(std::vector<std::unique_ptr<Gambler>> members);

}  // namespace credal
