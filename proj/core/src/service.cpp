#include "rmab/service.hpp"

#include <cstdio>
#include <fstream>
#include <random>

#include "rmab/harness.hpp"

namespace rmab {

EnvConfig environment_config(char label) {
  EnvConfig cfg;
  switch (label) {
    case 'A': cfg.n_innovate = 1; cfg.p_change = 0.1; break;
    case 'B': cfg.n_innovate = 10; cfg.p_change = 0.1; break;
    case 'C': cfg.n_innovate = 1; cfg.p_change = 0.2; break;
    case 'D': cfg.n_innovate = 10; cfg.p_change = 0.2; break;
    default: throw UnknownEnvironment(std::string("unknown environment '") + label + "'");
  }
  return cfg;
}

struct GameService::Session {
  Session(std::string id_, char env_, std::uint64_t seed_,
          std::shared_ptr<const HistoryDB> db_, Round start)
      : id(std::move(id_)), environment(env_), seed(seed_), db(std::move(db_)),
        player(*db, start, Rng(derive_seed(seed_, kPlayerStream))) {}

  std::string id;
  char environment;
  std::uint64_t seed;
  std::shared_ptr<const HistoryDB> db;
  WindowPlayer player;
  std::array<long, kAgentCount> agent_scores{};
  std::mutex turn;
};

namespace {

std::uint64_t entropy64() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

}  // namespace

GameService::GameService(std::map<char, std::shared_ptr<const HistoryDB>> histories,
                         ServiceOptions options)
    : histories_(std::move(histories)),
      options_(std::move(options)),
      rng_(options_.seed ? *options_.seed : entropy64()),
      id_rng_(entropy64()) {
  for (const auto& [label, db] : histories_) {
    const EnvConfig want = environment_config(label);
    if (!db || db->config().n_innovate != want.n_innovate || db->config().p_change != want.p_change)
      throw std::invalid_argument(std::string("history for environment ") + label +
                                  " has the wrong parameters");
  }
}

GameService GameService::from_directory(const std::filesystem::path& dir, ServiceOptions options) {
  std::map<char, std::shared_ptr<const HistoryDB>> histories;
  for (char label : kEnvironments) {
    const auto path = dir / (std::string(1, label) + ".rmab");
    if (std::filesystem::exists(path)) histories[label] = std::make_shared<const HistoryDB>(load(path));
  }
  if (histories.empty()) throw std::runtime_error("no A-D .rmab histories found in " + dir.string());
  return GameService(std::move(histories), std::move(options));
}

std::vector<char> GameService::environments() const {
  std::vector<char> out;
  for (const auto& [label, db] : histories_) out.push_back(label);
  return out;
}

std::string GameService::new_id() {
  char buf[33];
  std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(id_rng_.next()),
                static_cast<unsigned long long>(id_rng_.next()));
  return buf;
}

SessionView GameService::create_session(std::optional<char> environment,
                                        std::optional<std::uint64_t> seed) {
  if (histories_.empty()) throw std::runtime_error("no histories loaded");
  std::string id;
  char label;
  std::uint64_t session_seed;
  {
    std::lock_guard lock(rng_mutex_);
    if (environment) {
      label = *environment;
      environment_config(label);
    } else {
      const auto envs = environments();
      label = envs[rng_.below(envs.size())];
    }
    session_seed = seed ? *seed : rng_.next();
    id = new_id();
  }
  const auto it = histories_.find(label);
  if (it == histories_.end())
    throw UnknownEnvironment(std::string("no history loaded for environment ") + label);

  Rng window_rng(derive_seed(session_seed, kWindowStream));
  const Round start = sample_window(*it->second, window_rng);
  auto session = std::make_shared<Session>(id, label, session_seed, it->second, start);
  const SessionView view = view_of(*session);
  std::unique_lock lock(sessions_mutex_);
  sessions_.emplace(id, std::move(session));
  return view;
}

std::shared_ptr<GameService::Session> GameService::find(const std::string& id) const {
  std::shared_lock lock(sessions_mutex_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw SessionNotFound("no session " + id);
  return it->second;
}

SessionView GameService::view_of(const Session& s) {
  SessionView v;
  v.id = s.id;
  v.environment = s.environment;
  v.phase = s.player.phase();
  v.round = s.player.current();
  v.score = s.player.score();
  v.rank = rank_among_entrants(v.score, s.agent_scores);
  v.repertoire = s.player.repertoire().newest_first();
  v.window_start = s.player.window_start();
  v.seed = s.seed;
  v.config = s.db->config();
  return v;
}

RoundOutcome GameService::submit_action(const std::string& id, const Action& action,
                                        std::optional<Round> expected_round) {
  const auto session = find(id);
  std::unique_lock turn(session->turn, std::try_to_lock);
  if (!turn.owns_lock()) throw ActionRejected("another action for this session is in flight");
  auto& player = session->player;
  if (expected_round && *expected_round != player.current())
    throw ActionRejected("round " + std::to_string(*expected_round) + " is not the current round");

  const MoveOutcome move = player.play(action);
  if (move.round >= 1) {
    const auto hr = history_round(player.window_start(), move.round);
    for (const auto& rec : session->db->records(hr))
      if (rec.payoff) session->agent_scores[static_cast<std::size_t>(rec.entrant - 1)] += *rec.payoff;
  }
  if (player.phase() == Phase::Finished && options_.log_dir) {
    std::ofstream out(*options_.log_dir / (session->id + ".log"));
    write_session_log(out, SessionLog{std::string(1, session->environment), player.records()});
  }
  return RoundOutcome{move, view_of(*session)};
}

SessionView GameService::state(const std::string& id) const {
  const auto session = find(id);
  std::lock_guard turn(session->turn);
  return view_of(*session);
}

SessionSummary GameService::summary(const std::string& id) const {
  const auto session = find(id);
  std::lock_guard turn(session->turn);
  const auto& player = session->player;
  if (player.phase() != Phase::Finished) throw ActionRejected("session is not finished");
  SessionSummary s;
  s.id = session->id;
  s.environment = session->environment;
  s.score = player.score();
  s.mean_payoff = static_cast<double>(s.score) / kLastWindowRound;
  s.rank = rank_among_entrants(s.score, session->agent_scores);
  s.log = SessionLog{std::string(1, session->environment), player.records()};
  return s;
}

}  // namespace rmab
