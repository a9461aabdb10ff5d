#include "rmab/env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rmab {

void EnvConfig::validate() const {
  if (n_bandits < 1) throw std::invalid_argument("n_bandits must be >= 1");
  if (!(p_change >= 0.0 && p_change <= 1.0))
    throw std::invalid_argument("p_change must lie in [0, 1], got " + std::to_string(p_change));
  if (n_innovate < 1 || n_innovate > n_bandits)
    throw std::invalid_argument("n_innovate must lie in [1, n_bandits], got " +
                                std::to_string(n_innovate));
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  if (learning_rounds < 0) throw std::invalid_argument("learning_rounds must be >= 0");
  if (!(rate > 0.0)) throw std::invalid_argument("rate must be positive");
}

namespace {

constexpr double kTailMass = 1e-9;

// P(floor(x^2) <= s) = P(x < sqrt(s + 1)).
double payoff_cdf(double rate, Payoff s) {
  if (s < 0) return 0.0;
  return -std::expm1(-rate * std::sqrt(static_cast<double>(s) + 1.0));
}

}  // namespace

PayoffDistribution::PayoffDistribution(double rate) : rate_(rate) {
  if (!(rate > 0.0)) throw std::invalid_argument("rate must be positive");
  for (Payoff s = 0;; ++s) {
    const double p = payoff_cdf(rate, s) - payoff_cdf(rate, s - 1);
    pmf_.push_back(p);
    mean_ += static_cast<double>(s) * p;
    if (1.0 - payoff_cdf(rate, s) < kTailMass) break;
  }
}

double PayoffDistribution::cdf(Payoff s) const { return payoff_cdf(rate_, s); }

std::vector<double> PayoffDistribution::innovate_pmf(int n) const {
  if (n < 1) throw std::invalid_argument("innovate_pmf: n must be >= 1");
  if (n == 1) return pmf_;
  // Extend the support until the maximum's tail is negligible too.
  std::vector<double> out;
  for (Payoff s = 0;; ++s) {
    const double hi = std::pow(cdf(s), n);
    out.push_back(hi - std::pow(cdf(s - 1), n));
    if (1.0 - hi < kTailMass) break;
  }
  return out;
}

double PayoffDistribution::innovate_mean(int n) const {
  if (n == 1) return mean_;
  const auto pmf = innovate_pmf(n);
  double m = 0.0;
  for (std::size_t s = 0; s < pmf.size(); ++s) m += static_cast<double>(s) * pmf[s];
  return m;
}

PayoffDistribution payoff_pmf(double rate) { return PayoffDistribution(rate); }

Payoff sample_payoff(Rng& rng, double rate) {
  const double x = rng.exponential(rate);
  return static_cast<Payoff>(std::floor(x * x));
}

BanditBoard initial_board(const EnvConfig& cfg, Rng& rng) {
  BanditBoard board;
  board.payoffs.resize(static_cast<std::size_t>(cfg.n_bandits));
  for (auto& p : board.payoffs) p = sample_payoff(rng, cfg.rate);
  return board;
}

int step_board(BanditBoard& board, const EnvConfig& cfg, Rng& rng) {
  int changed = 0;
  for (auto& p : board.payoffs) {
    if (rng.bernoulli(cfg.p_change)) {
      p = sample_payoff(rng, cfg.rate);
      ++changed;
    }
  }
  return changed;
}

BanditInfo innovate_draw(const BanditBoard& board, const EnvConfig& cfg, Rng& rng,
                         Round stamp) {
  const int n = board.size();
  const int k = cfg.n_innovate;
  if (k < 1 || k > n) throw std::invalid_argument("innovate_draw: n_innovate out of range");

  // Floyd's algorithm: k distinct ids from 1..n without an O(n) scratch pass.
  thread_local std::vector<BanditId> chosen;
  chosen.clear();
  for (int j = n - k + 1; j <= n; ++j) {
    const auto t = static_cast<BanditId>(1 + rng.below(static_cast<std::uint64_t>(j)));
    if (std::find(chosen.begin(), chosen.end(), t) == chosen.end())
      chosen.push_back(t);
    else
      chosen.push_back(static_cast<BanditId>(j));
  }

  BanditId best = chosen.front();
  std::uint64_t ties = 1;
  for (std::size_t i = 1; i < chosen.size(); ++i) {
    const BanditId id = chosen[i];
    if (board.at(id) > board.at(best)) {
      best = id;
      ties = 1;
    } else if (board.at(id) == board.at(best)) {
      ++ties;
      if (rng.below(ties) == 0) best = id;
    }
  }
  return BanditInfo{best, board.at(best), stamp};
}

}  // namespace rmab
