#include "rmab/player.hpp"

#include <string>

namespace rmab {

const char* to_string(Phase phase) {
  switch (phase) {
    case Phase::Learning: return "learning";
    case Phase::Playing: return "playing";
    case Phase::Finished: return "finished";
  }
  return "?";
}

EnvKnowledge EnvKnowledge::analytic(const EnvConfig& cfg) {
  const auto dist = payoff_pmf(cfg.rate);
  return EnvKnowledge{cfg.p_change, dist.mean(), dist.innovate_mean(cfg.n_innovate)};
}

WindowPlayer::WindowPlayer(const HistoryDB& db, Round window_start, Rng rng)
    : db_(&db), start_(window_start), rng_(rng) {
  if (window_start < 2 || history_round(window_start, kLastWindowRound) > db.rounds())
    throw std::invalid_argument("window does not fit inside the history");
  moves_.reserve(kWindowLength);
  log_.reserve(kWindowLength);
}

Phase WindowPlayer::phase() const {
  if (t_ > kLastWindowRound) return Phase::Finished;
  return t_ <= 0 ? Phase::Learning : Phase::Playing;
}

double WindowPlayer::observe_mean(double fallback) const {
  return ObservePool(db_->records(history_round_of(t_) - 1)).mean_payoff(fallback);
}

Knowledge WindowPlayer::knowledge(const EnvKnowledge& env) const {
  return Knowledge{env.p_change, env.mean_payoff, env.innovate_mean,
                   observe_mean(env.mean_payoff), kLastWindowRound, t_};
}

bool WindowPlayer::legal(const Action& action, std::string* reason) const {
  auto fail = [&](const char* why) {
    if (reason) *reason = why;
    return false;
  };
  switch (phase()) {
    case Phase::Finished: return fail("session is finished");
    case Phase::Learning:
      if (action.kind == ActionKind::Exploit) return fail("only Innovate or Observe during learning rounds");
      break;
    case Phase::Playing: break;
  }
  if (action.kind == ActionKind::Exploit && rep_.find(action.target) == nullptr)
    return fail("bandit is not in the repertoire");
  return true;
}

const MoveOutcome& WindowPlayer::play(const Action& action) {
  std::string reason;
  if (!legal(action, &reason)) throw ActionRejected(reason);

  const Round hr = history_round_of(t_);
  const BanditBoard& board = db_->board(hr);
  MoveOutcome out{t_, action, std::nullopt, std::nullopt};
  switch (action.kind) {
    case ActionKind::Innovate:
      out.acquired = innovate_draw(board, db_->config(), rng_, t_);
      rep_.update(*out.acquired);
      break;
    case ActionKind::Observe:
      // Stamped with the round the information reflects, t-1.
      if (auto info = ObservePool(db_->records(hr - 1)).draw(rng_)) {
        out.acquired = BanditInfo{info->bandit, info->payoff, t_ - 1};
        rep_.update(*out.acquired);
      }
      break;
    case ActionKind::Exploit: {
      auto [payoff, updated] = exploit(board, rep_, action.target, t_);
      rep_ = updated;
      out.payoff = payoff;
      score_ += payoff;
      break;
    }
  }

  RoundRecord rec{t_, kPlayerEntrant, action.kind, std::nullopt, out.payoff, rep_};
  if (action.kind == ActionKind::Exploit) rec.bandit = action.target;
  else if (out.acquired) rec.bandit = out.acquired->bandit;
  log_.push_back(rec);
  moves_.push_back(out);
  ++t_;
  return moves_.back();
}

std::array<long, kAgentCount> agent_window_scores(const HistoryDB& db, Round window_start,
                                                  Round t) {
  std::array<long, kAgentCount> scores{};
  for (Round u = 1; u <= std::min(t, kLastWindowRound); ++u) {
    for (const auto& rec : db.records(history_round(window_start, u)))
      if (rec.payoff) scores[static_cast<std::size_t>(rec.entrant - 1)] += *rec.payoff;
  }
  return scores;
}

int rank_among_entrants(long player_score, const std::array<long, kAgentCount>& agent_scores) {
  int ahead = 0;
  for (long s : agent_scores)
    if (s > player_score) ++ahead;
  return 1 + ahead;
}

}  // namespace rmab
