#include "rmab/analysis.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <sstream>

#include "rmab/player.hpp"
#include "stats_support.hpp"

namespace rmab {
namespace {

// Log whose move at round t is kinds[t + 2]; exploits pay `payoff`.
SessionLog make_log(const std::string& kinds, Payoff payoff = 1) {
  SessionLog log{"A", {}};
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    const Round t = kFirstWindowRound + static_cast<Round>(i);
    RoundRecord rec{t, kPlayerEntrant, static_cast<ActionKind>(kinds[i]), std::nullopt, std::nullopt, {}};
    if (rec.kind == ActionKind::Exploit) {
      rec.bandit = 1;
      rec.payoff = payoff;
    } else if (rec.kind == ActionKind::Innovate) {
      rec.bandit = 1;
    }
    rec.repertoire_after.update({1, payoff, t});
    log.moves.push_back(rec);
  }
  return log;
}

TEST(Predictors, ForcedLearningOnly) {
  const auto row = compute_predictors(make_log("III" + std::string(100, 'X'), 4));
  EXPECT_DOUBLE_EQ(row.r_learn, 3.0 / 103.0);
  EXPECT_EQ(row.r_obs, 0.0);
  EXPECT_DOUBLE_EQ(row.dt_learn, 1.0);
  EXPECT_DOUBLE_EQ(row.payoff, 4.0);
}

TEST(Predictors, Alternating) {
  std::string kinds;
  int learned = 0;
  for (int i = 0; i < 103; ++i) {
    if (i % 2 == 0) {
      kinds += learned++ % 2 == 0 ? 'O' : 'I';
    } else {
      kinds += 'X';
    }
  }
  const auto row = compute_predictors(make_log(kinds));
  EXPECT_DOUBLE_EQ(row.r_learn, 52.0 / 103.0);
  EXPECT_DOUBLE_EQ(row.r_obs, 0.5);
  EXPECT_DOUBLE_EQ(row.dt_learn, 2.0);
  EXPECT_FALSE(row.dt_fallback);
}

TEST(Predictors, MeanGap) {
  std::string kinds(103, 'X');
  for (int t : {-2, -1, 0, 10, 20}) kinds[static_cast<std::size_t>(t + 2)] = 'I';
  EXPECT_DOUBLE_EQ(compute_predictors(make_log(kinds)).dt_learn, 5.5);
}

TEST(Predictors, FallbackForSingleLearningMove) {
  const auto row = compute_predictors(make_log("I" + std::string(102, 'X')));
  EXPECT_TRUE(row.dt_fallback);
  EXPECT_EQ(row.dt_learn, 100.0);
}

TEST(Predictors, IndependentOfPayoffValues) {
  const std::string kinds = "IOI" + std::string(50, 'X') + "O" + std::string(49, 'X');
  const auto a = compute_predictors(make_log(kinds, 0));
  const auto b = compute_predictors(make_log(kinds, 9));
  EXPECT_EQ(a.r_learn, b.r_learn);
  EXPECT_EQ(a.r_obs, b.r_obs);
  EXPECT_EQ(a.dt_learn, b.dt_learn);
  EXPECT_NE(a.payoff, b.payoff);
}

TEST(Predictors, MalformedLogs) {
  EXPECT_THROW(compute_predictors(make_log("III")), MalformedLog);
  auto log = make_log("III" + std::string(100, 'X'));
  log.moves[50].round = 7;
  EXPECT_THROW(compute_predictors(log), MalformedLog);
}

TEST(SessionLogFormat, RoundTrip) {
  const auto log = make_log("IOI" + std::string(100, 'X'), 3);
  std::stringstream io;
  write_session_log(io, log);
  const auto back = read_session_log(io);
  EXPECT_EQ(back.environment, "A");
  EXPECT_EQ(back.moves, log.moves);
  std::istringstream bad("RMABLOG1 A\nR 1 5 X 1 2 -\n");
  EXPECT_THROW(read_session_log(bad), MalformedLog);
  std::istringstream headless("R -2 P I 1 - 1:0:-2\n");
  EXPECT_THROW(read_session_log(headless), MalformedLog);
}

struct Plant {
  double intercept;
  std::array<double, 3> slope;
};

std::vector<PredictorRow> planted_rows(const Plant& plant, int n, double sigma, Rng& rng) {
  std::vector<PredictorRow> rows;
  for (int i = 0; i < n; ++i) {
    PredictorRow r;
    r.r_learn = 3.0 / 103.0 + (0.5 - 3.0 / 103.0) * rng.uniform();
    r.r_obs = rng.uniform();
    r.dt_learn = 1.0 + 7.0 * rng.uniform();
    r.payoff = plant.intercept + plant.slope[0] * r.r_learn + plant.slope[1] * r.r_obs +
               plant.slope[2] * r.dt_learn + sigma * testing::gaussian(rng);
    rows.push_back(r);
  }
  return rows;
}

TEST(Ols, ExactFit) {
  Rng rng(1);
  const auto rows = planted_rows({2.0, {3.0, 0.0, 0.0}}, 30, 0.0, rng);
  const auto fit = ols_fit(rows, kRLearn);
  EXPECT_NEAR(fit.coef[0], 2.0, 1e-9);
  EXPECT_NEAR(fit.coef[1], 3.0, 1e-9);
  EXPECT_NEAR(fit.adj_r2, 1.0, 1e-9);
  EXPECT_TRUE(std::isnan(fit.p_value[2]));
  EXPECT_EQ(fit.coef[2], 0.0);
}

TEST(Ols, PlantedCoverage) {
  int covered_intercept = 0, covered_slope = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    const auto fit = ols_fit(planted_rows({12.0, {-13.8, 0.0, 0.0}}, 200, 1.0, rng), kRLearn);
    const auto ci0 = fit.confidence_interval(0);
    const auto ci1 = fit.confidence_interval(1);
    covered_intercept += ci0[0] <= 12.0 && 12.0 <= ci0[1];
    covered_slope += ci1[0] <= -13.8 && -13.8 <= ci1[1];
  }
  EXPECT_GE(covered_intercept, 90);
  EXPECT_GE(covered_slope, 90);
}

TEST(Ols, ConstantResponse) {
  Rng rng(2);
  auto rows = planted_rows({5.0, {0.0, 0.0, 0.0}}, 50, 0.0, rng);
  const auto fit = ols_fit(rows, kAllPredictors);
  for (int j = 1; j <= 3; ++j) EXPECT_EQ(significance(fit.p_value[static_cast<std::size_t>(j)]), "n.s.");
  EXPECT_LE(fit.adj_r2, 0.0);
}

TEST(Ols, ResidualsOrthogonal) {
  Rng rng(3);
  const auto rows = planted_rows({8.0, {-5.0, 2.0, -0.3}}, 120, 1.5, rng);
  for (PredictorMask mask = 0; mask < 8; ++mask) {
    const auto fit = ols_fit(rows, mask);
    const auto res = residuals(rows, fit);
    for (int term = 0; term <= 3; ++term) {
      if (!fit.includes(term)) continue;
      double dot = 0.0;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const double x = term == 0 ? 1.0 : term == 1 ? rows[i].r_learn : term == 2 ? rows[i].r_obs : rows[i].dt_learn;
        dot += x * res[i];
      }
      EXPECT_NEAR(dot, 0.0, 1e-8) << "mask " << mask << " term " << term;
    }
  }
}

TEST(Ols, RSquaredMonotone) {
  Rng rng(4);
  const auto rows = planted_rows({8.0, {-5.0, 0.5, 0.0}}, 80, 2.0, rng);
  for (PredictorMask small = 0; small < 8; ++small) {
    for (PredictorMask big = 0; big < 8; ++big) {
      if ((small & big) != small) continue;
      EXPECT_LE(ols_fit(rows, small).r2, ols_fit(rows, big).r2 + 1e-12);
    }
  }
  EXPECT_GE(model_select(rows).adj_r2, ols_fit(rows, 0).adj_r2);
}

TEST(Ols, Errors) {
  std::vector<PredictorRow> rows(3);
  EXPECT_THROW(ols_fit(rows, kAllPredictors), std::invalid_argument);
  Rng rng(5);
  auto collinear = planted_rows({1.0, {1.0, 0.0, 0.0}}, 20, 1.0, rng);
  for (auto& r : collinear) r.r_obs = 0.25;
  EXPECT_THROW(ols_fit(collinear, kRObs), DegenerateDesign);
}

TEST(ModelSelect, SingleSignal) {
  Rng rng(6);
  EXPECT_EQ(model_select(planted_rows({2.0, {3.0, 0.0, 0.0}}, 60, 0.0, rng)).mask, kRLearn);
}

TEST(ModelSelect, AllStrongSignals) {
  int full = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    full += model_select(planted_rows({8.37, {-8.2, 3.0, -0.49}}, 200, 1.0, rng)).mask == kAllPredictors;
  }
  EXPECT_GE(full, 80);
}

TEST(ModelSelect, PureNoiseFavoursInterceptOnly) {
  std::array<int, 8> picks{};
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    ++picks[model_select(planted_rows({5.0, {0.0, 0.0, 0.0}}, 200, 1.0, rng)).mask];
  }
  for (std::size_t m = 1; m < 8; ++m) EXPECT_GT(picks[0], picks[m]) << "mask " << m;
}

TEST(ModelSelect, SkipsDegenerateSubsets) {
  Rng rng(7);
  auto rows = planted_rows({2.0, {3.0, 0.0, 0.0}}, 40, 0.1, rng);
  for (auto& r : rows) r.r_obs = 0.0;
  EXPECT_EQ(model_select(rows).mask & kRObs, 0u);
}

TEST(Significance, Labels) {
  EXPECT_EQ(significance(0.2), "n.s.");
  EXPECT_EQ(significance(0.03), "*");
  EXPECT_EQ(significance(0.005), "**");
  EXPECT_EQ(significance(5e-4), "***");
  EXPECT_EQ(significance(5e-5), "****");
}

TEST(RegressionTable, GroupsByEnvironment) {
  Rng rng(8);
  std::vector<SessionLog> logs;
  for (int k = 0; k < 40; ++k) {
    std::string kinds = "III";
    for (int i = 0; i < 100; ++i) kinds += rng.bernoulli(0.3) ? (rng.bernoulli(0.5) ? 'O' : 'I') : 'X';
    auto log = make_log(kinds, static_cast<Payoff>(rng.below(12)));
    log.environment = k % 2 ? "A" : "B";
    logs.push_back(log);
  }
  const auto table = regression_table(logs);
  ASSERT_EQ(table.size(), 3u);
  EXPECT_EQ(table[0].group, "A(20)");
  EXPECT_EQ(table[1].group, "B(20)");
  EXPECT_EQ(table[2].group, "ALL(40)");
  std::ostringstream csv;
  write_table_csv(csv, table);
  EXPECT_NE(csv.str().find("ALL(40)"), std::string::npos);
}

}  // namespace
}  // namespace rmab
