#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "rmab/entrants.hpp"

namespace rmab {

/// One player's 103 moves (rounds -2..100) in the history record format.
struct SessionLog {
  std::string environment;  // A-D, or free text
  std::vector<RoundRecord> moves;
};

class MalformedLog : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File form: a "RMABLOG1 <environment>" line followed by the player's R lines.
void write_session_log(std::ostream& out, const SessionLog& log);
SessionLog read_session_log(std::istream& in);
SessionLog read_session_log(const std::filesystem::path& path);

struct PredictorRow {
  double payoff = 0.0;    // total payoff / 100
  double r_learn = 0.0;   // learning moves / all moves
  double r_obs = 0.0;     // Observe / learning moves
  double dt_learn = 0.0;  // mean gap between consecutive learning moves
  bool dt_fallback = false;  // fewer than two learning moves; dt_learn = 100
};

PredictorRow compute_predictors(const SessionLog& log);

enum Predictor : unsigned { kRLearn = 1u, kRObs = 2u, kDtLearn = 4u };
using PredictorMask = unsigned;
inline constexpr PredictorMask kAllPredictors = kRLearn | kRObs | kDtLearn;
inline constexpr std::array<const char*, 3> kPredictorNames = {"r_learn", "r_obs", "dt_learn"};

class DegenerateDesign : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RegressionFit {
  PredictorMask mask = 0;
  int n = 0;
  // Index 0 is the intercept, 1..3 follow kPredictorNames. Excluded
  // predictors have coefficient 0 and NaN statistics.
  std::array<double, 4> coef{};
  std::array<double, 4> std_error{};
  std::array<double, 4> p_value{};
  double r2 = 0.0;
  double adj_r2 = 0.0;
  double residual_variance = 0.0;

  bool includes(int term) const { return term == 0 || (mask >> (term - 1)) & 1u; }
  int predictors() const;
  /// Two-sided confidence interval for term 0..3.
  std::array<double, 2> confidence_interval(int term, double level = 0.95) const;
};

/// Least squares with two-sided t-test p-values. Throws std::invalid_argument
/// for too few rows and DegenerateDesign for a rank-deficient design.
RegressionFit ols_fit(const std::vector<PredictorRow>& rows, PredictorMask mask);

/// Residuals y - X b of a fit (used by the orthogonality property tests).
std::vector<double> residuals(const std::vector<PredictorRow>& rows, const RegressionFit& fit);

/// Maximum adjusted R^2 over all eight predictor subsets; ties within 1e-12
/// keep the smaller subset. Rank-deficient subsets are skipped.
RegressionFit model_select(const std::vector<PredictorRow>& rows);

/// "n.s." for p > 0.05, then "*" .. "****" at 0.05, 1e-2, 1e-3, 1e-4.
std::string significance(double p_value);

struct TableRow {
  std::string group;
  RegressionFit fit;
  int dt_fallbacks = 0;
};

/// Groups logs by environment plus an "ALL" group and selects a model for
/// each group with enough rows.
std::vector<TableRow> regression_table(const std::vector<SessionLog>& logs);
void write_table_csv(std::ostream& out, const std::vector<TableRow>& table);

}  // namespace rmab
