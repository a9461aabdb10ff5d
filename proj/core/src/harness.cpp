#include "rmab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace rmab {

GameResult play_window(const HistoryDB& db, Round window_start, std::uint64_t seed) {
  const EnvKnowledge env = EnvKnowledge::analytic(db.config());
  const Rng player_rng(derive_seed(seed, kPlayerStream));

  GameResult result;
  result.seed = seed;
  result.window_start = window_start;
  for (std::size_t s = 0; s < kAllStrategies.size(); ++s) {
    WindowPlayer player(db, window_start, player_rng);
    while (player.phase() != Phase::Finished) {
      player.play(choose_action(kAllStrategies[s], player.repertoire(), player.knowledge(env)));
    }
    result.strategy_mean[s] = static_cast<double>(player.score()) / kLastWindowRound;
    result.moves[s] = player.moves();
  }

  const auto agents = agent_window_scores(db, window_start, kLastWindowRound);
  result.agent_mean.resize(kAgentCount);
  for (std::size_t i = 0; i < agents.size(); ++i)
    result.agent_mean[i] = static_cast<double>(agents[i]) / kLastWindowRound;
  return result;
}

namespace {

void check_matches(const EnvConfig& cfg, const HistoryDB& db) {
  const auto& h = db.config();
  if (h.n_bandits != cfg.n_bandits || h.p_change != cfg.p_change || h.n_innovate != cfg.n_innovate)
    throw std::invalid_argument("history was generated for a different environment");
}

}  // namespace

GameResult run_game(const EnvConfig& cfg, const HistoryDB& db, std::uint64_t seed) {
  check_matches(cfg, db);
  Rng window_rng(derive_seed(seed, kWindowStream));
  return play_window(db, sample_window(db, window_rng), seed);
}

GameResult run_fresh_game(const EnvConfig& cfg, std::uint64_t seed) {
  Rng window_rng(derive_seed(seed, kWindowStream));
  const Round start = sample_window_start(kHistoryRounds, window_rng);
  const HistoryDB db = generate_history(cfg, derive_seed(seed, kHistoryStream),
                                        history_round(start, kLastWindowRound));
  return play_window(db, start, seed);
}

MonteCarloSummary monte_carlo(const EnvConfig& cfg, const MonteCarloOptions& options) {
  if (options.runs < 1) throw std::invalid_argument("monte_carlo needs at least one run");
  cfg.validate();
  if (options.shared_history) check_matches(cfg, *options.shared_history);

  const auto runs = static_cast<std::size_t>(options.runs);
  std::vector<std::array<double, 4>> strategy(runs);
  std::vector<std::vector<double>> agent(runs);

  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t r = begin; r < runs; r += stride) {
      const std::uint64_t seed = derive_seed(options.seed, r);
      GameResult g = options.shared_history ? run_game(cfg, *options.shared_history, seed)
                                            : run_fresh_game(cfg, seed);
      strategy[r] = g.strategy_mean;
      agent[r] = std::move(g.agent_mean);
    }
  };

  unsigned threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = std::clamp(threads, 1u, static_cast<unsigned>(std::min<std::size_t>(runs, 64)));
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w, threads);
  }

  // Aggregate strictly in run order.
  auto estimate = [&](auto&& value) {
    double sum = 0.0;
    for (std::size_t r = 0; r < runs; ++r) sum += value(r);
    const double mean = sum / static_cast<double>(runs);
    if (runs < 2) return Estimate{mean, 0.0};
    double ss = 0.0;
    for (std::size_t r = 0; r < runs; ++r) {
      const double d = value(r) - mean;
      ss += d * d;
    }
    return Estimate{mean, std::sqrt(ss / static_cast<double>(runs - 1) / static_cast<double>(runs))};
  };

  MonteCarloSummary s;
  s.runs = options.runs;
  for (std::size_t k = 0; k < 4; ++k)
    s.strategies[k] = estimate([&](std::size_t r) { return strategy[r][k]; });
  s.agents.resize(kAgentCount);
  for (std::size_t i = 0; i < kAgentCount; ++i)
    s.agents[i] = estimate([&](std::size_t r) { return agent[r][i]; });
  return s;
}

const char* to_string(PhaseClass c) {
  switch (c) {
    case PhaseClass::ObserveOptimal: return "observe-optimal";
    case PhaseClass::InnovateOptimal: return "innovate-optimal";
    case PhaseClass::NoiseDominant: return "noise-dominant";
  }
  return "?";
}

PhaseClass classify(const MonteCarloSummary& s, double noise_epsilon) {
  const double io = s[StrategyKind::InnovateAndObserve].mean;
  const double eo = s[StrategyKind::ExploitOnly].mean;
  if (io - eo < noise_epsilon * eo) return PhaseClass::NoiseDominant;
  return s[StrategyKind::ObserveOnly].mean > s[StrategyKind::InnovateOnly].mean
             ? PhaseClass::ObserveOptimal
             : PhaseClass::InnovateOptimal;
}

PhaseCell evaluate_cell(const EnvConfig& cfg, int runs, std::uint64_t seed, unsigned threads) {
  PhaseCell cell;
  cell.n_innovate = cfg.n_innovate;
  cell.p_change = cfg.p_change;
  cell.summary = monte_carlo(cfg, MonteCarloOptions{runs, seed, nullptr, threads});
  cell.classification = classify(cell.summary);
  const auto& o = cell.summary[StrategyKind::ObserveOnly];
  const auto& i = cell.summary[StrategyKind::InnovateOnly];
  cell.near_boundary = std::abs(o.mean - i.mean) < 3.0 * pooled_se(o, i);
  return cell;
}

std::vector<PhaseCell> phase_diagram(const std::vector<int>& n_innovate,
                                     const std::vector<double>& p_change, int runs,
                                     std::uint64_t seed, unsigned threads) {
  if (n_innovate.empty() || p_change.empty()) throw std::invalid_argument("empty phase grid");
  std::vector<PhaseCell> cells;
  for (int ni : n_innovate) {
    for (double pc : p_change) {
      EnvConfig cfg;
      cfg.n_innovate = ni;
      cfg.p_change = pc;
      cells.push_back(evaluate_cell(cfg, runs, seed, threads));
    }
  }
  return cells;
}

double swarm_effect(double mean_payoff, double innovate_only_mean) {
  if (mean_payoff < 0.0 || innovate_only_mean < 0.0)
    throw std::invalid_argument("swarm_effect expects non-negative mean payoffs");
  return mean_payoff - innovate_only_mean;
}

namespace {

struct Fixed {
  double v;
};

std::string tenths(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

std::ostream& operator<<(std::ostream& os, Fixed f) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", f.v);
  return os << buf;
}

}  // namespace

void write_results_csv(std::ostream& out, const EnvConfig& cfg, const MonteCarloSummary& s) {
  out << "n_innovate,p_change,runs,entrant,threshold,observe_prob,mean,se\n";
  const std::string prefix = std::to_string(cfg.n_innovate) + ',' + canonical_double(cfg.p_change) +
                             ',' + std::to_string(s.runs) + ',';
  for (auto kind : kAllStrategies) {
    out << prefix << label(kind) << ",,," << Fixed{s[kind].mean} << ',' << Fixed{s[kind].se}
        << '\n';
  }
  for (const auto& spec : agent_grid()) {
    const auto& e = s.agents[static_cast<std::size_t>(spec.index - 1)];
    out << prefix << "agent" << spec.index << ',' << spec.threshold << ','
        << tenths(spec.observe_prob) << ',' << Fixed{e.mean} << ','
        << Fixed{e.se} << '\n';
  }
}

void write_phase_csv(std::ostream& out, const std::vector<PhaseCell>& cells) {
  out << "n_innovate,p_change,runs,IO_mean,IO_se,I_mean,I_se,O_mean,O_se,EO_mean,EO_se,"
         "O_minus_I,pooled_se_O_I,classification,near_boundary\n";
  for (const auto& c : cells) {
    const auto& s = c.summary;
    out << c.n_innovate << ',' << canonical_double(c.p_change) << ',' << s.runs;
    for (auto kind : kAllStrategies) out << ',' << Fixed{s[kind].mean} << ',' << Fixed{s[kind].se};
    const auto& o = s[StrategyKind::ObserveOnly];
    const auto& i = s[StrategyKind::InnovateOnly];
    out << ',' << Fixed{o.mean - i.mean} << ',' << Fixed{pooled_se(o, i)} << ','
        << to_string(c.classification) << ',' << (c.near_boundary ? "true" : "false") << '\n';
  }
}

}  // namespace rmab
