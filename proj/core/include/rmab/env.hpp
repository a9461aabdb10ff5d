#pragma once

#include <cstdint>
#include <vector>

#include "rmab/rng.hpp"

namespace rmab {

using BanditId = std::int32_t;  // 1-based
using Payoff = std::int32_t;
using Round = std::int32_t;

struct EnvConfig {
  int n_bandits = 100;
  double p_change = 0.1;
  int n_innovate = 1;
  int horizon = 100;
  int learning_rounds = 3;
  double rate = 1.0;

  /// Throws std::invalid_argument on an out-of-range field.
  void validate() const;

  bool operator==(const EnvConfig&) const = default;
};

/// Current payoff of every bandit. Bandit ids are 1..size().
struct BanditBoard {
  std::vector<Payoff> payoffs;

  int size() const { return static_cast<int>(payoffs.size()); }
  Payoff at(BanditId id) const { return payoffs[static_cast<std::size_t>(id - 1)]; }

  bool operator==(const BanditBoard&) const = default;
};

/// Record of what an entrant knows about one bandit.
struct BanditInfo {
  BanditId bandit = 0;
  Payoff payoff = 0;
  Round stamp = 0;

  bool operator==(const BanditInfo&) const = default;
};

/// Exact distribution of a bandit payoff floor(x^2), x ~ Exp(rate), and of the
/// best payoff among n independent draws.
class PayoffDistribution {
 public:
  explicit PayoffDistribution(double rate = 1.0);

  /// P(s) for s = 0..max_payoff(); the omitted tail has mass below 1e-9.
  const std::vector<double>& pmf() const { return pmf_; }
  double cdf(Payoff s) const;
  double mean() const { return mean_; }
  Payoff max_payoff() const { return static_cast<Payoff>(pmf_.size()) - 1; }

  /// Distribution of the maximum of n draws: F(s)^n - F(s-1)^n.
  std::vector<double> innovate_pmf(int n) const;
  double innovate_mean(int n) const;

 private:
  double rate_;
  std::vector<double> pmf_;
  double mean_ = 0.0;
};

PayoffDistribution payoff_pmf(double rate = 1.0);

Payoff sample_payoff(Rng& rng, double rate = 1.0);

BanditBoard initial_board(const EnvConfig& cfg, Rng& rng);

/// Redraws each bandit with probability p_change, in ascending id order.
/// Returns the number of change events.
int step_board(BanditBoard& board, const EnvConfig& cfg, Rng& rng);

/// Best of n_innovate distinct uniformly chosen bandits, ties broken uniformly.
BanditInfo innovate_draw(const BanditBoard& board, const EnvConfig& cfg, Rng& rng,
                         Round stamp);

}  // namespace rmab
