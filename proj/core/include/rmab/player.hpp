#pragma once

#include <array>
#include <optional>
#include <vector>

#include "rmab/entrants.hpp"
#include "rmab/history.hpp"
#include "rmab/strategy.hpp"

namespace rmab {

inline constexpr Round kFirstWindowRound = -2;
inline constexpr Round kLastWindowRound = 100;

enum class Phase { Learning, Playing, Finished };

const char* to_string(Phase phase);

struct MoveOutcome {
  Round round = 0;
  Action action;
  std::optional<BanditInfo> acquired;  // Innovate or successful Observe
  std::optional<Payoff> payoff;        // Exploit

  bool operator==(const MoveOutcome&) const = default;
};

/// Constants a complete-knowledge player uses for one environment.
struct EnvKnowledge {
  double p_change = 0.0;
  double mean_payoff = 0.0;
  double innovate_mean = 0.0;

  static EnvKnowledge analytic(const EnvConfig& cfg);
};

/// A player moving through a 103-round window of a stored history. The
/// history is only read; agents never see the player.
///
/// Both the simulation harness and the session service drive players through
/// this class, so a policy produces the same payoffs in either.
class WindowPlayer {
 public:
  WindowPlayer(const HistoryDB& db, Round window_start, Rng rng);

  Round current() const { return t_; }
  Phase phase() const;
  Round window_start() const { return start_; }
  const Repertoire& repertoire() const { return rep_; }
  long score() const { return score_; }
  const std::vector<MoveOutcome>& moves() const { return moves_; }

  /// Mean payoff exploited by agents in the round before `current()`, or
  /// `fallback` when nobody exploited.
  double observe_mean(double fallback) const;

  Knowledge knowledge(const EnvKnowledge& env) const;

  /// Whether `action` may be played now; fills `reason` otherwise.
  bool legal(const Action& action, std::string* reason = nullptr) const;

  /// Resolves one move and advances the round. Throws ActionRejected for an
  /// illegal move, leaving the state untouched.
  const MoveOutcome& play(const Action& action);

  /// Log of the moves so far in the history record format (entrant 'P').
  std::vector<RoundRecord> records() const { return log_; }

 private:
  Round history_round_of(Round t) const { return history_round(start_, t); }

  const HistoryDB* db_;
  Round start_;
  Rng rng_;
  Round t_ = kFirstWindowRound;
  Repertoire rep_;
  long score_ = 0;
  std::vector<MoveOutcome> moves_;
  std::vector<RoundRecord> log_;
};

/// Window scores of the 120 agents through round `t` (scored rounds 1..t).
std::array<long, kAgentCount> agent_window_scores(const HistoryDB& db, Round window_start,
                                                  Round t);

/// 1 + number of agents strictly ahead.
int rank_among_entrants(long player_score, const std::array<long, kAgentCount>& agent_scores);

}  // namespace rmab
