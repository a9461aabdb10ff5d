#include "rmab/service_json.hpp"

#include <sstream>

namespace rmab {

using nlohmann::json;

namespace {

json info_json(const BanditInfo& info) { return json{{"bandit", info.bandit}, {"payoff", info.payoff}}; }

class BadRequest : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

json parse_body(const std::string& body) {
  if (body.empty()) return json::object();
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw BadRequest("request body must be a JSON object");
  return j;
}

Action parse_action(const json& j) {
  if (!j.contains("kind") || !j["kind"].is_string()) throw BadRequest("missing action kind");
  const auto kind = j["kind"].get<std::string>();
  if (kind == "innovate") return Action::innovate();
  if (kind == "observe") return Action::observe();
  if (kind == "exploit") {
    if (!j.contains("bandit") || !j["bandit"].is_number_integer())
      throw BadRequest("exploit needs an integer bandit");
    return Action::exploit(j["bandit"].get<BanditId>());
  }
  throw BadRequest("unknown action kind '" + kind + "'");
}

}  // namespace

json to_json(const SessionView& v, bool debug) {
  json rep = json::array();
  for (const auto& e : v.repertoire) rep.push_back(info_json(e));
  json j{{"id", v.id},
         {"environment", std::string(1, v.environment)},
         {"phase", to_string(v.phase)},
         {"round", v.round},
         {"round_label", std::to_string(v.round) + "/" + std::to_string(kLastWindowRound)},
         {"score", v.score},
         {"rank", v.rank},
         {"entrants", kAgentCount + 1},
         {"repertoire", rep}};
  if (debug) {
    j["debug"] = json{{"window_start", v.window_start},
                      {"seed", v.seed},
                      {"p_change", v.config.p_change},
                      {"n_innovate", v.config.n_innovate}};
  }
  return j;
}

json to_json(const SessionSummary& s) {
  std::ostringstream log;
  write_session_log(log, s.log);
  json moves = json::array();
  for (const auto& m : s.log.moves) {
    json jm{{"round", m.round}, {"action", to_string(m.kind)}};
    jm["bandit"] = m.bandit ? json(*m.bandit) : json(nullptr);
    jm["payoff"] = m.payoff ? json(*m.payoff) : json(nullptr);
    moves.push_back(jm);
  }
  return json{{"id", s.id},
              {"environment", std::string(1, s.environment)},
              {"score", s.score},
              {"mean_payoff", s.mean_payoff},
              {"rank", s.rank},
              {"moves", moves},
              {"log", log.str()}};
}

template <typename F>
JsonApi::Response JsonApi::guarded(F&& f) {
  try {
    return f();
  } catch (const SessionNotFound& e) {
    return {404, json{{"error", e.what()}}};
  } catch (const ActionRejected& e) {
    return {409, json{{"error", e.what()}}};
  } catch (const std::invalid_argument& e) {
    return {400, json{{"error", e.what()}}};
  } catch (const json::exception& e) {
    return {400, json{{"error", e.what()}}};
  }
}

JsonApi::Response JsonApi::create_session(const std::string& body) {
  return guarded([&]() -> Response {
    const json req = parse_body(body);
    std::optional<char> env;
    if (req.contains("environment")) {
      const auto name = req["environment"].get<std::string>();
      if (name == "random" || name == "Random") {
      } else if (name.size() == 1) {
        env = name[0];
        environment_config(*env);
      } else {
        throw UnknownEnvironment("unknown environment '" + name + "'");
      }
    }
    std::optional<std::uint64_t> seed;
    if (req.contains("seed")) {
      if (!service_->options().debug) throw BadRequest("seed is only accepted in debug mode");
      seed = req["seed"].get<std::uint64_t>();
    }
    const SessionView v = service_->create_session(env, seed);
    return {201, json{{"session", v.id}, {"state", to_json(v, service_->options().debug)}}};
  });
}

JsonApi::Response JsonApi::submit_action(const std::string& id, const std::string& body) {
  return guarded([&]() -> Response {
    const json req = parse_body(body);
    const Action action = parse_action(req);
    std::optional<Round> expected;
    if (req.contains("round")) expected = req["round"].get<Round>();
    const RoundOutcome out = service_->submit_action(id, action, expected);
    json j{{"played_round", out.move.round}, {"action", to_string(out.move.action.kind)}};
    j["bandit"] = action.kind == ActionKind::Exploit ? json(action.target) : json(nullptr);
    j["payoff"] = out.move.payoff ? json(*out.move.payoff) : json(nullptr);
    j["acquired"] = out.move.acquired ? info_json(*out.move.acquired) : json(nullptr);
    j["state"] = to_json(out.state, service_->options().debug);
    return {200, j};
  });
}

JsonApi::Response JsonApi::get_state(const std::string& id) {
  return guarded([&]() -> Response {
    return {200, to_json(service_->state(id), service_->options().debug)};
  });
}

JsonApi::Response JsonApi::get_summary(const std::string& id) {
  return guarded([&]() -> Response { return {200, to_json(service_->summary(id))}; });
}

}  // namespace rmab
