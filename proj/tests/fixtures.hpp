#pragma once

#include <vector>

#include "rmab/history.hpp"

namespace rmab::testing {

// A frozen board on which every agent innovates bandit 1 each round, so no
// agent ever exploits.
inline HistoryDB quiet_history(const BanditBoard& board, int n_innovate, Round rounds = 300) {
  EnvConfig cfg;
  cfg.n_bandits = board.size();
  cfg.p_change = 0.0;
  cfg.n_innovate = n_innovate;
  HistoryDB db(cfg, 0);
  std::vector<RoundRecord> recs(kAgentCount);
  for (Round r = 1; r <= rounds; ++r) {
    for (int i = 0; i < kAgentCount; ++i) {
      Repertoire rep;
      rep.update({1, board.at(1), r});
      recs[static_cast<std::size_t>(i)] = RoundRecord{r, i + 1, ActionKind::Innovate, 1, std::nullopt, rep};
    }
    db.append_round(board, recs);
  }
  return db;
}

}  // namespace rmab::testing
