#include "rmab/strategy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rmab {

std::string_view label(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::InnovateAndObserve: return "I+O";
    case StrategyKind::InnovateOnly: return "I";
    case StrategyKind::ObserveOnly: return "O";
    case StrategyKind::ExploitOnly: return "EO";
  }
  return "?";
}

namespace {

// sum_{j=0}^{n-1} (1-p)^j = (1 - (1-p)^n) / p, with the p -> 0 limit n.
double survival_sum(double p, int n) {
  if (n <= 0) return 0.0;
  if (n == 1) return 1.0;
  if (p <= 0.0) return static_cast<double>(n);
  if (p >= 1.0) return 1.0;
  return -std::expm1(static_cast<double>(n) * std::log1p(-p)) / p;
}

double survival(double p, int age) {
  if (age <= 0) return 1.0;
  if (p >= 1.0) return 0.0;
  return std::exp(static_cast<double>(age) * std::log1p(-p));
}

// Value of acquiring information with expected payoff `gain_mean` now,
// `age` rounds stale by the first round it can be exploited.
double learning_value(const Knowledge& k, double gain_mean, int age) {
  const int remaining = k.horizon - k.current;
  const double span = static_cast<double>(remaining + 1);
  return static_cast<double>(remaining) / span * k.mean_payoff +
         survival_sum(k.p_change, remaining) * (gain_mean - k.mean_payoff) *
             survival(k.p_change, age) / span;
}

}  // namespace

double exploit_value(const BanditInfo& info, const Knowledge& k) {
  const int span = k.horizon - k.current + 1;
  const int age = k.current - info.stamp;
  // Weight of the stored payoff; written as a convex combination so that a
  // fresh record in the last round evaluates to its payoff exactly.
  const double w =
      survival_sum(k.p_change, span) * survival(k.p_change, age) / static_cast<double>(span);
  return w * info.payoff + (1.0 - w) * k.mean_payoff;
}

double innovate_value(const Knowledge& k) { return learning_value(k, k.innovate_mean, 1); }

double observe_value(const Knowledge& k) { return learning_value(k, k.observe_mean, 2); }

Action choose_action(StrategyKind kind, const Repertoire& rep, const Knowledge& k) {
  if (k.current <= 0) return Action::innovate();

  double best_value = -std::numeric_limits<double>::infinity();
  const BanditInfo* best = nullptr;
  for (const auto& e : rep.entries()) {
    const double v = exploit_value(e, k);
    if (best == nullptr || v > best_value ||
        (v == best_value &&
         (e.stamp > best->stamp || (e.stamp == best->stamp && e.bandit < best->bandit)))) {
      best = &e;
      best_value = v;
    }
  }

  if (kind == StrategyKind::ExploitOnly) {
    if (best == nullptr) throw std::logic_error("exploit-only player has an empty repertoire");
    return Action::exploit(best->bandit);
  }

  Action choice = best ? Action::exploit(best->bandit) : Action::innovate();
  double choice_value = best_value;
  const bool may_innovate = kind != StrategyKind::ObserveOnly;
  const bool may_observe = kind != StrategyKind::InnovateOnly;
  if (may_innovate) {
    const double v = innovate_value(k);
    if (best == nullptr || v > choice_value) {
      choice = Action::innovate();
      choice_value = v;
    }
  }
  if (may_observe) {
    const double v = observe_value(k);
    if (v > choice_value || (!may_innovate && best == nullptr)) {
      choice = Action::observe();
      choice_value = v;
    }
  }
  return choice;
}

}  // namespace rmab
