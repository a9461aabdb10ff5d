#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "rmab/analysis.hpp"
#include "rmab/history.hpp"
#include "rmab/player.hpp"

namespace rmab {

/// Parameters (n_I, p_c) of the four game environments A-D.
EnvConfig environment_config(char label);
inline constexpr std::array<char, 4> kEnvironments = {'A', 'B', 'C', 'D'};

class SessionNotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownEnvironment : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ServiceOptions {
  bool debug = false;
  /// Seeds environment choice and session windows; random_device when unset.
  std::optional<std::uint64_t> seed;
  /// Finished sessions are written here as <id>.log when set.
  std::optional<std::filesystem::path> log_dir;
};

struct SessionView {
  std::string id;
  char environment = 'A';
  Phase phase = Phase::Learning;
  Round round = kFirstWindowRound;  // next round to play
  long score = 0;
  int rank = 1;
  std::vector<BanditInfo> repertoire;  // newest first
  // Debug-only details.
  Round window_start = 0;
  std::uint64_t seed = 0;
  EnvConfig config;
};

struct RoundOutcome {
  MoveOutcome move;
  SessionView state;
};

struct SessionSummary {
  std::string id;
  char environment = 'A';
  long score = 0;
  double mean_payoff = 0.0;
  int rank = 1;
  SessionLog log;
};

/// Turn-based sessions over read-only replayed histories. Sessions are
/// independent; each processes one action at a time.
class GameService {
 public:
  GameService(std::map<char, std::shared_ptr<const HistoryDB>> histories, ServiceOptions options);

  /// Loads <dir>/<label>.rmab for each label present.
  static GameService from_directory(const std::filesystem::path& dir, ServiceOptions options);

  const ServiceOptions& options() const { return options_; }
  std::vector<char> environments() const;

  /// `environment` unset picks one of the loaded environments uniformly. A
  /// session created with seed s replays the window and player stream that
  /// run_game(cfg, db, s) uses.
  SessionView create_session(std::optional<char> environment,
                             std::optional<std::uint64_t> seed = std::nullopt);

  /// Throws ActionRejected (round not consumed) for an illegal move, a
  /// finished session, a stale `expected_round`, or a concurrent action.
  RoundOutcome submit_action(const std::string& id, const Action& action,
                             std::optional<Round> expected_round = std::nullopt);

  SessionView state(const std::string& id) const;

  /// Throws ActionRejected unless the session is finished.
  SessionSummary summary(const std::string& id) const;

 private:
  struct Session;

  std::shared_ptr<Session> find(const std::string& id) const;
  static SessionView view_of(const Session& s);
  std::string new_id();

  std::map<char, std::shared_ptr<const HistoryDB>> histories_;
  ServiceOptions options_;

  mutable std::shared_mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;

  std::mutex rng_mutex_;
  Rng rng_;
  Rng id_rng_;
};

}  // namespace rmab
