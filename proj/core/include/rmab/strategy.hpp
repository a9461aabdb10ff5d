#pragma once

#include <array>
#include <string_view>

#include "rmab/entrants.hpp"
#include "rmab/env.hpp"

namespace rmab {

/// What a complete-knowledge player knows at round `current`.
struct Knowledge {
  double p_change = 0.0;
  double mean_payoff = 0.0;     // E(s)
  double innovate_mean = 0.0;   // E(s_I)
  double observe_mean = 0.0;    // mean payoff exploited by agents in the previous round
  Round horizon = 100;
  Round current = 1;
};

enum class StrategyKind { InnovateAndObserve, InnovateOnly, ObserveOnly, ExploitOnly };

inline constexpr std::array<StrategyKind, 4> kAllStrategies = {
    StrategyKind::InnovateAndObserve, StrategyKind::InnovateOnly, StrategyKind::ObserveOnly,
    StrategyKind::ExploitOnly};

/// Short labels "I+O", "I", "O", "EO".
std::string_view label(StrategyKind kind);

// Expected payoff per round over the remaining rounds current..horizon.

/// Exploiting the stored bandit every remaining round; the stored payoff
/// persists with probability (1-p)^age, otherwise the prior mean applies.
double exploit_value(const BanditInfo& info, const Knowledge& k);

/// Spending this round on Innovate and exploiting its result afterwards.
double innovate_value(const Knowledge& k);

/// Spending this round on Observe; the information is one round staler than
/// Innovate's.
double observe_value(const Knowledge& k);

/// Argmax over the moves `kind` may use. Rounds current <= 0 always Innovate.
/// Ties prefer Exploit, then Innovate, then Observe.
Action choose_action(StrategyKind kind, const Repertoire& rep, const Knowledge& k);

}  // namespace rmab
