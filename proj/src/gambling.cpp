#include "credal/gambling.hpp"

#include <algorithm>
#include <cmath>

namespace credal {

namespace {
std::vector<double> zeros(int n) { return std::vector<double>(n, 0.0); }
}  // namespace

const ModelDistance& BetEvalCache::distance(const FiniteMeasure& mu,
                                            const std::shared_ptr<const ModelPolytope>& poly) {
  auto it = memo_.find(poly.get());
  if (it != memo_.end()) return it->second;
  ModelDistance md = distance_to_model(mu, *poly, *metric_);
  return memo_.emplace(poly.get(), std::move(md)).first->second;
}

std::vector<double> payoff_V(const std::vector<double>& bet_values, const FiniteMeasure& mu) {
  const double mean = mu.expectation(bet_values);
  std::vector<double> out(bet_values.size());
  for (std::size_t i = 0; i < bet_values.size(); ++i) out[i] = bet_values[i] - mean;
  return out;
}

void Ledger::add_payoff(std::vector<double> payoff) {
  bool nonzero = false;
  for (double v : payoff)
    if (v != 0.0) nonzero = true;
  if (nonzero) entries_.push_back(std::move(payoff));
}

void Ledger::reveal(int symbol, int first_size) {
  std::vector<std::vector<double>> kept;
  for (std::vector<double>& v : entries_) {
    const int bs = static_cast<int>(v.size()) / first_size;
    std::vector<double> sliced(v.begin() + static_cast<std::ptrdiff_t>(symbol) * bs,
                               v.begin() + static_cast<std::ptrdiff_t>(symbol + 1) * bs);
    if (bs == 1)
      settled_ += sliced[0];
    else
      kept.push_back(std::move(sliced));
  }
  entries_ = std::move(kept);
}

double Ledger::worst() const {
  if (entries_.empty()) return settled_;
  std::size_t len = 0;
  for (const auto& v : entries_) len = std::max(len, v.size());
  double out = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < len; ++i) {
    double sum = settled_;
    for (const auto& v : entries_) sum += v[i / (len / v.size())];
    out = std::min(out, sum);
  }
  return out;
}

double Ledger::best() const {
  if (entries_.empty()) return settled_;
  std::size_t len = 0;
  for (const auto& v : entries_) len = std::max(len, v.size());
  double out = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < len; ++i) {
    double sum = settled_;
    for (const auto& v : entries_) sum += v[i / (len / v.size())];
    out = std::max(out, sum);
  }
  return out;
}

std::vector<double> Ledger::value_for_window(int size) const {
  std::vector<double> out(size, settled_);
  for (const auto& v : entries_) {
    const int rest = size / static_cast<int>(v.size());
    for (int x = 0; x < size; ++x) out[x] += v[x / rest];
  }
  return out;
}

void ledger_update(Ledger& ledger, const std::vector<double>& payoff, int symbol,
                   int first_size) {
  ledger.add_payoff(payoff);
  ledger.reveal(symbol, first_size);
}

SavvyStrategy::SavvyStrategy(std::shared_ptr<RegularUpperBound> bound, double eps)
    : bound_(std::move(bound)), eps_(eps) {
  if (eps_ <= 0.0) throw DomainError("savvy eps must be positive");
}

Bet SavvyStrategy::propose(const StepContext& ctx) {
  std::shared_ptr<const ModelPolytope> poly = bound_->at(*ctx.history);
  const double eps = eps_;
  const int size = ctx.window->size();
  return Bet{[poly, eps, size](const FiniteMeasure& mu, BetEvalCache& cache) {
    const ModelDistance& md = cache.distance(mu, poly);
    const double scale = std::max(md.distance - eps, 0.0);
    if (scale == 0.0) return zeros(size);
    std::vector<double> v(md.witness.values);
    for (double& x : v) x *= scale;
    return v;
  }};
}

PatientGambler::PatientGambler(std::unique_ptr<GamblingStrategy> strategy)
    : strategy_(std::move(strategy)) {}

std::optional<Bet> PatientGambler::propose(const StepContext& ctx) {
  current_bet_ = play_next_ ? std::optional<Bet>(strategy_->propose(ctx)) : std::nullopt;
  return current_bet_;
}

std::vector<double> PatientGambler::observe(const StepContext& ctx, const StepOutcome& out) {
  const int k = ctx.window->size();
  std::vector<double> payoff;
  audit_ = PatientAudit{};
  audit_.played = play_next_ && current_bet_.has_value();
  audit_.uncertainty_bound = 2.0 * strategy_->uniform_bound() + 1.0;
  if (audit_.played) {
    std::vector<double> values = current_bet_->values(*out.chosen, *out.cache);
    payoff = payoff_V(values, *out.chosen);
    for (double v : values) audit_.bet_sup = std::max(audit_.bet_sup, std::fabs(v));
    audit_.bet_lipschitz_norm = lipschitz_norm(values, *ctx.window, *ctx.metric);
    audit_.fair_gap = std::fabs(out.chosen->expectation(payoff));
    ledger_.add_payoff(payoff);
  }
  audit_.worst = ledger_.worst();
  audit_.best = ledger_.best();
  play_next_ = ledger_.best() - ledger_.worst() <= 1.0 + 1e-12;
  ledger_.reveal(out.symbol, ctx.window->size_at(0));
  current_bet_.reset();
  return payoff;
}

BudgetWrappedGambler::BudgetWrappedGambler(std::unique_ptr<Gambler> inner, double budget)
    : inner_(std::move(inner)), budget_(budget) {
  if (budget_ <= 0.0) throw DomainError("budget must be positive");
}

double BudgetWrappedGambler::factor_at(const std::vector<double>& inner_payoff,
                                       int window_size) const {
  std::vector<double> sv = inner_ledger_.value_for_window(window_size);
  double ratio = 1.0;
  for (int x = 0; x < window_size; ++x) {
    if (inner_payoff[x] >= 0.0) continue;
    const double headroom = sv[x] + budget_;
    if (headroom <= 0.0) throw SolverError("budget wrapper saw nonpositive headroom while active");
    ratio = std::max(ratio, -inner_payoff[x] / headroom);
  }
  return 1.0 / ratio;
}

std::optional<Bet> BudgetWrappedGambler::propose(const StepContext& ctx) {
  inner_bet_ = inner_->propose(ctx);
  if (halted_ || !inner_bet_) return std::nullopt;
  Bet inner_bet = *inner_bet_;
  const int size = ctx.window->size();
  return Bet{[this, inner_bet, size](const FiniteMeasure& mu, BetEvalCache& cache) {
    std::vector<double> values = inner_bet.values(mu, cache);
    const double f = factor_at(payoff_V(values, mu), size);
    for (double& v : values) v *= f;
    return values;
  }};
}

std::vector<double> BudgetWrappedGambler::observe(const StepContext& ctx,
                                                  const StepOutcome& out) {
  const int k = ctx.window->size();
  std::vector<double> inner_payoff = inner_->observe(ctx, out);
  std::vector<double> wrapped;
  audit_ = BudgetAudit{};
  audit_.halted = halted_;
  if (!inner_payoff.empty() && !halted_) {
    const double f = factor_at(inner_payoff, k);
    audit_.factor = f;
    wrapped = inner_payoff;
    for (double& v : wrapped) v *= f;
    wrapped_.add_payoff(wrapped);
  }
  if (!inner_payoff.empty()) inner_ledger_.add_payoff(inner_payoff);
  if (!halted_ && inner_ledger_.worst() <= -budget_) halted_ = true;
  audit_.wrapped_worst = wrapped_.worst();
  inner_ledger_.reveal(out.symbol, ctx.window->size_at(0));
  wrapped_.reveal(out.symbol, ctx.window->size_at(0));
  return wrapped;
}

BudgetMixtureGambler::BudgetMixtureGambler(std::unique_ptr<Gambler> inner, int b_max)
    : inner_(std::move(inner)), b_max_(b_max) {
  if (b_max_ < 1) throw DomainError("b_max must be at least 1");
  zeta_.resize(b_max_);
  settled_b_.assign(b_max_, 0.0);
  halted_.assign(b_max_, false);
  audit_.floor_bound = 0.0;
  for (int b = 1; b <= b_max_; ++b) {
    zeta_[b - 1] = 1.0 / (static_cast<double>(b) * b * b);
    audit_.floor_bound += zeta_[b - 1] * b;
  }
}

std::vector<double> BudgetMixtureGambler::factors_at(const std::vector<double>& inner_payoff,
                                                     int window_size) const {
  std::vector<double> sv = inner_ledger_.value_for_window(window_size);
  std::vector<double> out(b_max_, 0.0);
  for (int b = 1; b <= b_max_; ++b) {
    if (halted_[b - 1]) continue;
    double ratio = 1.0;
    for (int x = 0; x < window_size; ++x) {
      if (inner_payoff[x] >= 0.0) continue;
      const double headroom = sv[x] + b;
      if (headroom <= 0.0) throw SolverError("budget mixture saw nonpositive headroom");
      ratio = std::max(ratio, -inner_payoff[x] / headroom);
    }
    out[b - 1] = 1.0 / ratio;
  }
  return out;
}

std::optional<Bet> BudgetMixtureGambler::propose(const StepContext& ctx) {
  std::optional<Bet> inner_bet = inner_->propose(ctx);
  if (!inner_bet) return std::nullopt;
  Bet bet = *inner_bet;
  const int size = ctx.window->size();
  return Bet{[this, bet, size](const FiniteMeasure& mu, BetEvalCache& cache) {
    std::vector<double> values = bet.values(mu, cache);
    std::vector<double> factors = factors_at(payoff_V(values, mu), size);
    double scale = 0.0;
    for (int b = 1; b <= b_max_; ++b) scale += zeta_[b - 1] * factors[b - 1];
    for (double& v : values) v *= scale;
    return values;
  }};
}

std::vector<double> BudgetMixtureGambler::observe(const StepContext& ctx,
                                                  const StepOutcome& out) {
  const int k = ctx.window->size();
  std::vector<double> inner_payoff = inner_->observe(ctx, out);
  std::vector<double> mixed;
  if (!inner_payoff.empty()) {
    std::vector<double> factors = factors_at(inner_payoff, k);
    double scale = 0.0;
    for (int b = 1; b <= b_max_; ++b) scale += zeta_[b - 1] * factors[b - 1];
    mixed = inner_payoff;
    for (double& v : mixed) v *= scale;
    inner_ledger_.add_payoff(inner_payoff);
    entries_.push_back({inner_payoff, std::move(factors)});
    for (int b = 1; b <= b_max_; ++b)
      if (!halted_[b - 1] && inner_ledger_.worst() <= -static_cast<double>(b))
        halted_[b - 1] = true;
  } else {
    // Restriction can only raise floors, so halting flags stay valid.
  }

  // Audits: per-budget wrapped floors and the mixed floor, post-payoff.
  std::size_t len = 1;
  for (const Entry& e : entries_) len = std::max(len, e.v.size());
  double margin = std::numeric_limits<double>::infinity();
  for (int b = 1; b <= b_max_; ++b) {
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < len; ++i) {
      double sum = settled_b_[b - 1];
      for (const Entry& e : entries_) sum += e.factors[b - 1] * e.v[i / (len / e.v.size())];
      worst = std::min(worst, sum);
    }
    margin = std::min(margin, worst + b);
  }
  audit_.budget_margin = margin;
  double mix_worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < len; ++i) {
    double sum = 0.0;
    for (int b = 1; b <= b_max_; ++b) sum += zeta_[b - 1] * settled_b_[b - 1];
    for (const Entry& e : entries_) {
      double phi = 0.0;
      for (int b = 1; b <= b_max_; ++b) phi += zeta_[b - 1] * e.factors[b - 1];
      sum += phi * e.v[i / (len / e.v.size())];
    }
    mix_worst = std::min(mix_worst, sum);
  }
  audit_.mix_worst = mix_worst;

  // Reveal.
  const int first_size = ctx.window->size_at(0);
  inner_ledger_.reveal(out.symbol, first_size);
  std::vector<Entry> kept;
  for (Entry& e : entries_) {
    const int bs = static_cast<int>(e.v.size()) / first_size;
    std::vector<double> sliced(e.v.begin() + static_cast<std::ptrdiff_t>(out.symbol) * bs,
                               e.v.begin() + static_cast<std::ptrdiff_t>(out.symbol + 1) * bs);
    if (bs == 1) {
      for (int b = 1; b <= b_max_; ++b) settled_b_[b - 1] += e.factors[b - 1] * sliced[0];
    } else {
      kept.push_back({std::move(sliced), std::move(e.factors)});
    }
  }
  entries_ = std::move(kept);
  return mixed;
}

RosterMixtureGambler::RosterMixtureGambler(std::vector<std::unique_ptr<Gambler>> members)
    : members_(std::move(members)) {}

double RosterMixtureGambler::weight(int j) {
  return 1.0 / (static_cast<double>(j + 1) * (j + 1));
}

std::optional<Bet> RosterMixtureGambler::propose(const StepContext& ctx) {
  const int active = std::min<int>(size(), ctx.step + 1);
  std::vector<std::pair<double, Bet>> bets;
  for (int j = 0; j < active; ++j) {
    std::optional<Bet> bet = members_[j]->propose(ctx);
    if (bet) bets.push_back({weight(j), std::move(*bet)});
  }
  if (bets.empty()) return std::nullopt;
  const int size = ctx.window->size();
  return Bet{[bets, size](const FiniteMeasure& mu, BetEvalCache& cache) {
    std::vector<double> total(size, 0.0);
    for (const auto& [w, bet] : bets) {
      std::vector<double> v = bet.values(mu, cache);
      for (int x = 0; x < size; ++x) total[x] += w * v[x];
    }
    return total;
  }};
}

std::vector<double> RosterMixtureGambler::observe(const StepContext& ctx,
                                                  const StepOutcome& out) {
  const int k = ctx.window->size();
  const int active = std::min<int>(size(), ctx.step + 1);
  std::vector<double> total(k, 0.0);
  bool any = false;
  for (int j = 0; j < active; ++j) {
    std::vector<double> p = members_[j]->observe(ctx, out);
    if (p.empty()) continue;
    any = true;
    for (int x = 0; x < k; ++x) total[x] += weight(j) * p[x];
  }
  audit_ = RosterAudit{};
  if (any) {
    audit_.fair_gap = std::fabs(out.chosen->expectation(total));
    ledger_.add_payoff(total);
  }
  audit_.worst = ledger_.worst();
  audit_.best = ledger_.best();
  ledger_.reveal(out.symbol, ctx.window->size_at(0));
  return any ? total : std::vector<double>();
}

std::unique_ptr<PatientGambler> pg_wrap(std::unique_ptr<GamblingStrategy> strategy) {
  return std::make_unique<PatientGambler>(std::move(strategy));
}

std::unique_ptr<BudgetWrappedGambler> budget_wrap(std::unique_ptr<Gambler> gambler,
                                                  double budget) {
  return std::make_unique<BudgetWrappedGambler>(std::move(gambler), budget);
}

std::unique_ptr<BudgetMixtureGambler> zeta_mix(std::unique_ptr<Gambler> gambler, int b_max) {
  return std::make_unique<BudgetMixtureGambler>(std::move(gambler), b_max);
}

std::unique_ptr<RosterMixtureGambler> xi_mix(std::vector<std::unique_ptr<Gambler>> members) {
  return std::make_unique<RosterMixtureGambler>(std::move(members));
}

}  // namespace credal
