#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rmab/history.hpp"
#include "rmab/player.hpp"
#include "rmab/strategy.hpp"

namespace rmab {

// Child streams of a game seed.
inline constexpr std::uint64_t kHistoryStream = 1;
inline constexpr std::uint64_t kWindowStream = 2;
inline constexpr std::uint64_t kPlayerStream = 3;

struct GameResult {
  std::uint64_t seed = 0;
  Round window_start = 0;
  std::array<double, 4> strategy_mean{};  // indexed like kAllStrategies
  std::vector<double> agent_mean;         // 120 values, agent i at i-1
  std::array<std::vector<MoveOutcome>, 4> moves;

  double mean(StrategyKind kind) const { return strategy_mean[static_cast<std::size_t>(kind)]; }
};

/// Plays the four strategy players on one window. Each player gets its own
/// copy of the same player stream.
GameResult play_window(const HistoryDB& db, Round window_start, std::uint64_t seed);

/// Samples a window of `db` from `seed` and plays it.
GameResult run_game(const EnvConfig& cfg, const HistoryDB& db, std::uint64_t seed);

/// Same as run_game on generate_history(cfg, derive_seed(seed, kHistoryStream)),
/// but only simulates the history up to the end of the sampled window.
GameResult run_fresh_game(const EnvConfig& cfg, std::uint64_t seed);

struct Estimate {
  double mean = 0.0;
  double se = 0.0;
};

inline double pooled_se(const Estimate& a, const Estimate& b) {
  return std::sqrt(a.se * a.se + b.se * b.se);
}

struct MonteCarloSummary {
  int runs = 0;
  std::array<Estimate, 4> strategies{};
  std::vector<Estimate> agents;

  const Estimate& operator[](StrategyKind kind) const {
    return strategies[static_cast<std::size_t>(kind)];
  }
};

struct MonteCarloOptions {
  int runs = 10000;
  std::uint64_t seed = 1;
  /// When set, every run samples its window from this history; otherwise
  /// each run simulates its own history.
  const HistoryDB* shared_history = nullptr;
  /// 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

/// Runs games with seeds derive_seed(seed, run) and aggregates them in run
/// order; the result does not depend on the thread count.
MonteCarloSummary monte_carlo(const EnvConfig& cfg, const MonteCarloOptions& options);

enum class PhaseClass { ObserveOptimal, InnovateOptimal, NoiseDominant };

const char* to_string(PhaseClass c);

/// Relative gap of I+O over EO below which learning is not worth it.
inline constexpr double kNoiseEpsilon = 0.02;

struct PhaseCell {
  int n_innovate = 1;
  double p_change = 0.0;
  MonteCarloSummary summary;
  PhaseClass classification = PhaseClass::ObserveOptimal;
  bool near_boundary = false;  // |O - I| < 3 pooled standard errors
};

PhaseClass classify(const MonteCarloSummary& s, double noise_epsilon = kNoiseEpsilon);

PhaseCell evaluate_cell(const EnvConfig& cfg, int runs, std::uint64_t seed, unsigned threads = 0);

/// Every (n_I, p_c) combination; all cells share `seed`.
std::vector<PhaseCell> phase_diagram(const std::vector<int>& n_innovate,
                                     const std::vector<double>& p_change, int runs,
                                     std::uint64_t seed, unsigned threads = 0);

/// Surplus of a mean payoff over the Innovate-only optimum; a lower bound on
/// the benefit of social information.
double swarm_effect(double mean_payoff, double innovate_only_mean);

void write_results_csv(std::ostream& out, const EnvConfig& cfg, const MonteCarloSummary& s);
void write_phase_csv(std::ostream& out, const std::vector<PhaseCell>& cells);

}  // namespace rmab
