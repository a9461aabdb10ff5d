#include "rmab/entrants.hpp"

#include <algorithm>

namespace rmab {

const BanditInfo* Repertoire::find(BanditId bandit) const {
  for (std::size_t i = 0; i < size_; ++i)
    if (items_[i].bandit == bandit) return &items_[i];
  return nullptr;
}

void Repertoire::update(const BanditInfo& info) {
  for (std::size_t i = 0; i < size_; ++i) {
    if (items_[i].bandit == info.bandit) {
      items_[i].payoff = info.payoff;
      items_[i].stamp = info.stamp;
      return;
    }
  }
  if (size_ < items_.size()) {
    items_[size_++] = info;
    return;
  }
  std::size_t oldest = 0;
  for (std::size_t i = 1; i < size_; ++i) {
    const auto& a = items_[i];
    const auto& b = items_[oldest];
    if (a.stamp < b.stamp || (a.stamp == b.stamp && a.bandit < b.bandit)) oldest = i;
  }
  // Shift to keep acquisition order, then append.
  for (std::size_t i = oldest; i + 1 < size_; ++i) items_[i] = items_[i + 1];
  items_[size_ - 1] = info;
}

std::vector<BanditInfo> Repertoire::newest_first() const {
  std::vector<BanditInfo> out(items_.begin(), items_.begin() + static_cast<std::ptrdiff_t>(size_));
  std::reverse(out.begin(), out.end());
  std::stable_sort(out.begin(), out.end(),
                   [](const BanditInfo& a, const BanditInfo& b) { return a.stamp > b.stamp; });
  return out;
}

bool Repertoire::operator==(const Repertoire& other) const {
  return std::ranges::equal(entries(), other.entries());
}

Repertoire update_repertoire(Repertoire rep, const BanditInfo& info) {
  rep.update(info);
  return rep;
}

const char* to_string(ActionKind kind) {
  switch (kind) {
    case ActionKind::Innovate: return "innovate";
    case ActionKind::Observe: return "observe";
    case ActionKind::Exploit: return "exploit";
  }
  return "?";
}

AgentSpec agent_spec(int index) {
  if (index < 1 || index > kAgentCount)
    throw std::invalid_argument("agent index must lie in [1, 120]");
  return AgentSpec{index, (index - 1) / 10 + 1, static_cast<double>((index - 1) % 10) / 10.0};
}

std::vector<AgentSpec> agent_grid() {
  std::vector<AgentSpec> grid;
  grid.reserve(kAgentCount);
  for (int i = 1; i <= kAgentCount; ++i) grid.push_back(agent_spec(i));
  return grid;
}

Action agent_decide(const AgentSpec& spec, const Repertoire& rep, Rng& rng) {
  const BanditInfo* best = nullptr;
  for (const auto& e : rep.entries()) {
    if (e.payoff <= spec.threshold) continue;
    if (best == nullptr || e.payoff > best->payoff ||
        (e.payoff == best->payoff &&
         (e.stamp > best->stamp || (e.stamp == best->stamp && e.bandit < best->bandit))))
      best = &e;
  }
  if (best != nullptr) return Action::exploit(best->bandit);
  return rng.bernoulli(spec.observe_prob) ? Action::observe() : Action::innovate();
}

ObservePool::ObservePool(std::span<const RoundRecord> round_records) {
  for (const auto& r : round_records) {
    if (r.entrant == kPlayerEntrant || r.kind != ActionKind::Exploit) continue;
    exploits_.push_back(BanditInfo{*r.bandit, *r.payoff, r.round});
  }
}

double ObservePool::mean_payoff(double fallback) const {
  if (exploits_.empty()) return fallback;
  double sum = 0.0;
  for (const auto& e : exploits_) sum += e.payoff;
  return sum / static_cast<double>(exploits_.size());
}

std::optional<BanditInfo> ObservePool::draw(Rng& rng) const {
  if (exploits_.empty()) return std::nullopt;
  return exploits_[rng.below(exploits_.size())];
}

std::optional<BanditInfo> observe_draw(std::span<const RoundRecord> previous_round, Rng& rng) {
  return ObservePool(previous_round).draw(rng);
}

std::pair<Payoff, Repertoire> exploit(const BanditBoard& board, Repertoire rep,
                                      BanditId target, Round t) {
  if (rep.find(target) == nullptr)
    throw ActionRejected("bandit " + std::to_string(target) + " is not in the repertoire");
  const Payoff payoff = board.at(target);
  rep.update(BanditInfo{target, payoff, t});
  return {payoff, rep};
}

}  // namespace rmab
