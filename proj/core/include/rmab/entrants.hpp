#pragma once

#include <array>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rmab/env.hpp"
#include "rmab/rng.hpp"

namespace rmab {

inline constexpr int kRepertoireCapacity = 3;
inline constexpr int kAgentCount = 120;

/// At most three BanditInfo records with distinct bandits, kept in
/// acquisition order.
class Repertoire {
 public:
  std::span<const BanditInfo> entries() const { return {items_.data(), size_}; }
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  const BanditInfo* find(BanditId bandit) const;

  /// Refreshes an entry for the same bandit in place, otherwise appends and
  /// evicts the oldest stamp (ties: smallest bandit id) past capacity.
  void update(const BanditInfo& info);

  /// Entries ordered newest stamp first; equal stamps keep the later
  /// acquisition first.
  std::vector<BanditInfo> newest_first() const;

  bool operator==(const Repertoire& other) const;

 private:
  std::array<BanditInfo, kRepertoireCapacity> items_{};
  std::size_t size_ = 0;
};

Repertoire update_repertoire(Repertoire rep, const BanditInfo& info);

enum class ActionKind : char { Innovate = 'I', Observe = 'O', Exploit = 'X' };

struct Action {
  ActionKind kind = ActionKind::Innovate;
  BanditId target = 0;  // Exploit only

  static Action innovate() { return {ActionKind::Innovate, 0}; }
  static Action observe() { return {ActionKind::Observe, 0}; }
  static Action exploit(BanditId bandit) { return {ActionKind::Exploit, bandit}; }

  bool is_learning() const { return kind != ActionKind::Exploit; }
  bool operator==(const Action&) const = default;
};

const char* to_string(ActionKind kind);

struct AgentSpec {
  int index = 1;
  int threshold = 1;
  double observe_prob = 0.0;

  bool operator==(const AgentSpec&) const = default;
};

/// Agent i in 1..120: threshold floor((i-1)/10)+1, observe_prob 0.1*((i-1)%10).
AgentSpec agent_spec(int index);
std::vector<AgentSpec> agent_grid();

/// Exploits the best stored bandit when one beats the threshold, otherwise
/// learns, choosing Observe with probability observe_prob.
Action agent_decide(const AgentSpec& spec, const Repertoire& rep, Rng& rng);

inline constexpr int kPlayerEntrant = 0;

/// One entrant's move in one round.
struct RoundRecord {
  Round round = 0;
  int entrant = kPlayerEntrant;  // agent index 1..120, or kPlayerEntrant
  ActionKind kind = ActionKind::Innovate;
  std::optional<BanditId> bandit;
  std::optional<Payoff> payoff;  // Exploit only
  Repertoire repertoire_after;

  bool operator==(const RoundRecord&) const = default;
};

/// Exploitation events of one round, the source of Observe.
class ObservePool {
 public:
  ObservePool() = default;
  /// Collects the Exploit records of agents; player records are ignored.
  explicit ObservePool(std::span<const RoundRecord> round_records);

  bool empty() const { return exploits_.empty(); }
  std::size_t size() const { return exploits_.size(); }
  std::span<const BanditInfo> exploits() const { return exploits_; }

  /// Mean received payoff over exploiting agents; `fallback` when none.
  double mean_payoff(double fallback) const;

  /// One exploiting agent chosen uniformly. Consumes no draw when empty.
  std::optional<BanditInfo> draw(Rng& rng) const;

 private:
  std::vector<BanditInfo> exploits_;
};

std::optional<BanditInfo> observe_draw(std::span<const RoundRecord> previous_round, Rng& rng);

class ActionRejected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Plays `target` on the current board. Throws ActionRejected when the
/// target is not in the repertoire.
std::pair<Payoff, Repertoire> exploit(const BanditBoard& board, Repertoire rep,
                                      BanditId target, Round t);

}  // namespace rmab
