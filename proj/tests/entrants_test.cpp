#include "rmab/entrants.hpp"

#include <gtest/gtest.h>

#include <set>
#include <utility>

namespace rmab {
namespace {

Repertoire rep_of(std::initializer_list<BanditInfo> infos) {
  Repertoire rep;
  for (const auto& i : infos) rep.update(i);
  return rep;
}

TEST(Repertoire, InsertIntoEmpty) {
  const auto rep = update_repertoire({}, {4, 7, 1});
  ASSERT_EQ(rep.size(), 1u);
  EXPECT_EQ(rep.entries()[0], (BanditInfo{4, 7, 1}));
}

TEST(Repertoire, EvictsOldestStamp) {
  auto rep = rep_of({{1, 5, 1}, {2, 6, 2}, {3, 7, 3}});
  rep.update({4, 8, 4});
  ASSERT_EQ(rep.size(), 3u);
  EXPECT_EQ(rep.find(1), nullptr);
  EXPECT_NE(rep.find(2), nullptr);
  EXPECT_NE(rep.find(3), nullptr);
  EXPECT_NE(rep.find(4), nullptr);
}

TEST(Repertoire, RefreshesExistingBandit) {
  auto rep = rep_of({{1, 5, 1}, {2, 6, 2}});
  rep.update({1, 9, 5});
  ASSERT_EQ(rep.size(), 2u);
  EXPECT_EQ(*rep.find(1), (BanditInfo{1, 9, 5}));
  // Refreshing protects the entry from the next eviction.
  rep.update({3, 0, 6});
  rep.update({4, 0, 7});
  EXPECT_NE(rep.find(1), nullptr);
  EXPECT_EQ(rep.find(2), nullptr);
}

TEST(Repertoire, EvictionTieTakesSmallestId) {
  auto rep = rep_of({{9, 1, 3}, {2, 1, 3}, {5, 1, 4}});
  rep.update({7, 1, 5});
  EXPECT_EQ(rep.find(2), nullptr);
  EXPECT_NE(rep.find(9), nullptr);
}

TEST(Repertoire, NewestFirst) {
  const auto rep = rep_of({{1, 0, 2}, {2, 0, 5}, {3, 0, 4}});
  const auto order = rep.newest_first();
  ASSERT_EQ(order.size(), 3u);
  EXPECT_EQ(order[0].bandit, 2);
  EXPECT_EQ(order[1].bandit, 3);
  EXPECT_EQ(order[2].bandit, 1);
}

TEST(Repertoire, RandomizedInvariants) {
  Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    Repertoire rep;
    Round stamp = -2;
    for (int step = 0; step < 60; ++step) {
      stamp += static_cast<Round>(rng.below(2));
      const BanditInfo info{static_cast<BanditId>(1 + rng.below(6)), static_cast<Payoff>(rng.below(10)), stamp};
      rep.update(info);
      ASSERT_LE(rep.size(), 3u);
      std::set<BanditId> ids;
      for (const auto& e : rep.entries()) ids.insert(e.bandit);
      ASSERT_EQ(ids.size(), rep.size());
      ASSERT_EQ(*rep.find(info.bandit), info);
    }
  }
}

TEST(AgentGrid, Mapping) {
  EXPECT_EQ(agent_spec(1), (AgentSpec{1, 1, 0.0}));
  EXPECT_EQ(agent_spec(120).threshold, 12);
  EXPECT_NEAR(agent_spec(120).observe_prob, 0.9, 1e-12);
  const auto grid = agent_grid();
  ASSERT_EQ(grid.size(), 120u);
  std::set<std::pair<int, int>> cells;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_EQ(grid[i].index, static_cast<int>(i) + 1);
    const int obs_tenths = static_cast<int>(std::lround(grid[i].observe_prob * 10.0));
    EXPECT_NEAR(grid[i].observe_prob, obs_tenths / 10.0, 1e-12);
    EXPECT_GE(grid[i].threshold, 1);
    EXPECT_LE(grid[i].threshold, 12);
    EXPECT_GE(obs_tenths, 0);
    EXPECT_LE(obs_tenths, 9);
    cells.emplace(grid[i].threshold, obs_tenths);
  }
  EXPECT_EQ(cells.size(), 120u);
}

TEST(AgentDecide, ExploitsAboveThreshold) {
  Rng rng(1);
  const auto rep = rep_of({{3, 2, 1}, {8, 5, 2}});
  EXPECT_EQ(agent_decide({1, 4, 0.9}, rep, rng), Action::exploit(8));
}

TEST(AgentDecide, StrictInequality) {
  Rng rng(1);
  const auto rep = rep_of({{3, 4, 1}, {8, 2, 2}});
  EXPECT_EQ(agent_decide({1, 4, 0.0}, rep, rng), Action::innovate());
}

TEST(AgentDecide, TieBreaks) {
  Rng rng(1);
  EXPECT_EQ(agent_decide({1, 1, 0.0}, rep_of({{3, 6, 1}, {8, 6, 4}, {2, 5, 9}}), rng), Action::exploit(8));
  EXPECT_EQ(agent_decide({1, 1, 0.0}, rep_of({{9, 6, 4}, {3, 6, 4}}), rng), Action::exploit(3));
}

TEST(AgentDecide, ObserveFrequency) {
  Rng rng(123);
  const AgentSpec spec{1, 12, 0.3};
  int observes = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const auto a = agent_decide(spec, Repertoire{}, rng);
    ASSERT_TRUE(a.is_learning());
    observes += a.kind == ActionKind::Observe;
  }
  EXPECT_NEAR(static_cast<double>(observes) / n, 0.30, 0.01);
}

TEST(AgentDecide, RandomizedRule) {
  Rng rng(5);
  for (int trial = 0; trial < 5000; ++trial) {
    Repertoire rep;
    const auto k = rng.below(4);
    for (std::uint64_t j = 0; j < k; ++j)
      rep.update({static_cast<BanditId>(1 + j), static_cast<Payoff>(rng.below(15)), static_cast<Round>(j)});
    const AgentSpec spec = agent_spec(static_cast<int>(1 + rng.below(120)));
    bool above = false;
    for (const auto& e : rep.entries()) above |= e.payoff > spec.threshold;
    const auto a = agent_decide(spec, rep, rng);
    ASSERT_EQ(a.kind == ActionKind::Exploit, above);
    if (above) ASSERT_GT(rep.find(a.target)->payoff, spec.threshold);
  }
}

RoundRecord exploit_record(Round round, int agent, BanditId bandit, Payoff payoff) {
  return RoundRecord{round, agent, ActionKind::Exploit, bandit, payoff, {}};
}

TEST(ObserveDraw, NoExploiters) {
  Rng rng(1);
  const std::vector<RoundRecord> recs = {RoundRecord{4, 1, ActionKind::Innovate, 3, std::nullopt, {}}};
  const Rng before = rng;
  EXPECT_FALSE(observe_draw(recs, rng).has_value());
  EXPECT_EQ(rng.next(), Rng(before).next());
}

TEST(ObserveDraw, SingleExploiter) {
  Rng rng(1);
  const std::vector<RoundRecord> recs = {exploit_record(9, 5, 7, 3)};
  EXPECT_EQ(observe_draw(recs, rng), (BanditInfo{7, 3, 9}));
}

TEST(ObserveDraw, PlayersAreInvisible) {
  Rng rng(1);
  const std::vector<RoundRecord> recs = {exploit_record(9, kPlayerEntrant, 7, 3)};
  EXPECT_FALSE(observe_draw(recs, rng).has_value());
}

TEST(ObserveDraw, ProportionalToExploiters) {
  Rng rng(31);
  const std::vector<RoundRecord> recs = {exploit_record(2, 1, 10, 4), exploit_record(2, 2, 10, 4),
                                         exploit_record(2, 3, 10, 4), exploit_record(2, 4, 20, 1)};
  int a = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) a += observe_draw(recs, rng)->bandit == 10;
  EXPECT_NEAR(static_cast<double>(a) / n, 0.75, 0.01);
}

TEST(ObservePool, MeanPayoff) {
  const std::vector<RoundRecord> recs = {exploit_record(2, 1, 10, 4), exploit_record(2, 2, 11, 1)};
  EXPECT_DOUBLE_EQ(ObservePool(recs).mean_payoff(-1.0), 2.5);
  EXPECT_DOUBLE_EQ(ObservePool{}.mean_payoff(1.68), 1.68);
}

TEST(Exploit, ReceivesCurrentBoardValue) {
  BanditBoard board{std::vector<Payoff>(10, 1)};
  board.payoffs[4] = 0;
  const auto rep = rep_of({{5, 9, 6}});
  const auto [payoff, updated] = exploit(board, rep, 5, 10);
  EXPECT_EQ(payoff, 0);
  EXPECT_EQ(*updated.find(5), (BanditInfo{5, 0, 10}));
}

TEST(Exploit, StoredValueMatches) {
  BanditBoard board{std::vector<Payoff>(10, 3)};
  const auto [payoff, updated] = exploit(board, rep_of({{2, 3, 1}}), 2, 2);
  EXPECT_EQ(payoff, 3);
}

TEST(Exploit, AbsentTargetRejected) {
  BanditBoard board{std::vector<Payoff>(10, 3)};
  EXPECT_THROW(exploit(board, rep_of({{2, 3, 1}}), 4, 2), ActionRejected);
}

TEST(Exploit, OneRoundOldInformationUsuallyHolds) {
  EnvConfig cfg;
  cfg.p_change = 0.1;
  Rng rng(8);
  auto board = initial_board(cfg, rng);
  int same = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const auto b = static_cast<BanditId>(1 + rng.below(100));
    const Repertoire rep = rep_of({{b, board.at(b), i}});
    step_board(board, cfg, rng);
    same += exploit(board, rep, b, i + 1).first == rep.find(b)->payoff;
  }
  EXPECT_GE(static_cast<double>(same) / n, 0.9);
}

}  // namespace
}  // namespace rmab
