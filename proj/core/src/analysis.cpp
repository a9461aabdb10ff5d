#include "rmab/analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "rmab/history.hpp"
#include "rmab/player.hpp"

namespace rmab {

void write_session_log(std::ostream& out, const SessionLog& log) {
  out << "RMABLOG1 " << (log.environment.empty() ? "-" : log.environment) << '\n';
  for (const auto& rec : log.moves) out << format_record(rec) << '\n';
}

SessionLog read_session_log(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("RMABLOG1 ", 0) != 0)
    throw MalformedLog("missing 'RMABLOG1 <environment>' header");
  SessionLog log;
  log.environment = line.substr(9);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    RoundRecord rec;
    try {
      rec = parse_record(line);
    } catch (const HistoryFormatError& e) {
      throw MalformedLog(e.what());
    }
    if (rec.entrant != kPlayerEntrant) throw MalformedLog("session log holds an agent record");
    log.moves.push_back(std::move(rec));
  }
  return log;
}

SessionLog read_session_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return read_session_log(in);
  } catch (const MalformedLog& e) {
    throw MalformedLog(path.filename().string() + ": " + e.what());
  }
}

PredictorRow compute_predictors(const SessionLog& log) {
  if (log.moves.size() != static_cast<std::size_t>(kWindowLength))
    throw MalformedLog("session log must hold 103 moves, found " + std::to_string(log.moves.size()));
  PredictorRow row;
  long total = 0;
  int learns = 0;
  int observes = 0;
  std::vector<Round> learn_rounds;
  for (std::size_t i = 0; i < log.moves.size(); ++i) {
    const auto& m = log.moves[i];
    if (m.round != kFirstWindowRound + static_cast<Round>(i))
      throw MalformedLog("session log rounds must run -2..100 in order");
    if (m.kind == ActionKind::Exploit) {
      if (!m.payoff) throw MalformedLog("exploit without payoff at round " + std::to_string(m.round));
      if (m.round >= 1) total += *m.payoff;
    } else {
      if (m.payoff) throw MalformedLog("payoff on a learning move at round " + std::to_string(m.round));
      ++learns;
      if (m.kind == ActionKind::Observe) ++observes;
      learn_rounds.push_back(m.round);
    }
  }
  row.payoff = static_cast<double>(total) / kLastWindowRound;
  row.r_learn = static_cast<double>(learns) / kWindowLength;
  row.r_obs = learns > 0 ? static_cast<double>(observes) / learns : 0.0;
  if (learn_rounds.size() >= 2) {
    row.dt_learn = static_cast<double>(learn_rounds.back() - learn_rounds.front()) /
                   static_cast<double>(learn_rounds.size() - 1);
  } else {
    row.dt_learn = kLastWindowRound;
    row.dt_fallback = true;
  }
  return row;
}

int RegressionFit::predictors() const { return std::popcount(mask); }

std::array<double, 2> RegressionFit::confidence_interval(int term, double level) const {
  const int df = n - predictors() - 1;
  boost::math::students_t dist(df);
  const double q = boost::math::quantile(dist, 0.5 + level / 2.0);
  return {coef[static_cast<std::size_t>(term)] - q * std_error[static_cast<std::size_t>(term)],
          coef[static_cast<std::size_t>(term)] + q * std_error[static_cast<std::size_t>(term)]};
}

namespace {

double predictor_value(const PredictorRow& r, int term) {
  switch (term) {
    case 1: return r.r_learn;
    case 2: return r.r_obs;
    case 3: return r.dt_learn;
  }
  return 1.0;
}

std::vector<int> terms_of(PredictorMask mask) {
  std::vector<int> terms{0};
  for (int j = 1; j <= 3; ++j)
    if ((mask >> (j - 1)) & 1u) terms.push_back(j);
  return terms;
}

}  // namespace

RegressionFit ols_fit(const std::vector<PredictorRow>& rows, PredictorMask mask) {
  if (mask & ~kAllPredictors) throw std::invalid_argument("unknown predictor in mask");
  const auto terms = terms_of(mask);
  const auto p = static_cast<Eigen::Index>(terms.size());
  const auto n = static_cast<Eigen::Index>(rows.size());
  if (n < p + 1)
    throw std::invalid_argument("ols_fit needs at least " + std::to_string(p + 1) + " rows");

  Eigen::MatrixXd x(n, p);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = rows[static_cast<std::size_t>(i)];
    y(i) = r.payoff;
    for (Eigen::Index j = 0; j < p; ++j) x(i, j) = predictor_value(r, terms[static_cast<std::size_t>(j)]);
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  if (qr.rank() < p) throw DegenerateDesign("design matrix is rank deficient");
  const Eigen::VectorXd beta = qr.solve(y);
  const Eigen::VectorXd resid = y - x * beta;

  const double sse = resid.squaredNorm();
  const double sst = (y.array() - y.mean()).square().sum();
  const auto df = static_cast<double>(n - p);
  // A constant response leaves nothing to explain.
  const bool constant = sst <= 1e-20 * (1.0 + y.squaredNorm());

  RegressionFit fit;
  fit.mask = mask;
  fit.n = static_cast<int>(n);
  fit.residual_variance = sse / df;
  fit.r2 = constant ? 0.0 : 1.0 - sse / sst;
  fit.adj_r2 = 1.0 - (1.0 - fit.r2) * static_cast<double>(n - 1) / df;

  const Eigen::MatrixXd xtx = x.transpose() * x;
  const Eigen::MatrixXd cov = fit.residual_variance * xtx.inverse();
  boost::math::students_t dist(df);
  fit.std_error.fill(std::numeric_limits<double>::quiet_NaN());
  fit.p_value.fill(std::numeric_limits<double>::quiet_NaN());
  for (Eigen::Index j = 0; j < p; ++j) {
    const auto term = static_cast<std::size_t>(terms[static_cast<std::size_t>(j)]);
    fit.coef[term] = beta(j);
    fit.std_error[term] = std::sqrt(std::max(0.0, cov(j, j)));
    double pv;
    if (constant && term != 0) {
      pv = 1.0;
    } else if (fit.std_error[term] == 0.0) {
      pv = beta(j) == 0.0 ? 1.0 : 0.0;
    } else {
      const double t = std::abs(beta(j) / fit.std_error[term]);
      pv = 2.0 * boost::math::cdf(boost::math::complement(dist, t));
    }
    fit.p_value[term] = pv;
  }
  return fit;
}

std::vector<double> residuals(const std::vector<PredictorRow>& rows, const RegressionFit& fit) {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    double pred = fit.coef[0];
    for (int j = 1; j <= 3; ++j)
      if (fit.includes(j)) pred += fit.coef[static_cast<std::size_t>(j)] * predictor_value(r, j);
    out.push_back(r.payoff - pred);
  }
  return out;
}

RegressionFit model_select(const std::vector<PredictorRow>& rows) {
  constexpr std::array<PredictorMask, 8> order = {0, kRLearn, kRObs, kDtLearn,
                                                  kRLearn | kRObs, kRLearn | kDtLearn,
                                                  kRObs | kDtLearn, kAllPredictors};
  constexpr double kTieTolerance = 1e-12;
  std::optional<RegressionFit> best;
  for (PredictorMask mask : order) {
    if (rows.size() < static_cast<std::size_t>(std::popcount(mask)) + 2) continue;
    try {
      RegressionFit fit = ols_fit(rows, mask);
      if (!best || fit.adj_r2 > best->adj_r2 + kTieTolerance) best = fit;
    } catch (const DegenerateDesign&) {
    }
  }
  if (!best) throw DegenerateDesign("no predictor subset could be fitted");
  return *best;
}

std::string significance(double p) {
  if (std::isnan(p) || p > 0.05) return "n.s.";
  if (p < 1e-4) return "****";
  if (p < 1e-3) return "***";
  if (p < 1e-2) return "**";
  return "*";
}

std::vector<TableRow> regression_table(const std::vector<SessionLog>& logs) {
  std::map<std::string, std::vector<const SessionLog*>> groups;
  for (const auto& log : logs) groups[log.environment].push_back(&log);
  std::vector<const SessionLog*> all;
  for (const auto& log : logs) all.push_back(&log);

  std::vector<TableRow> table;
  auto add = [&](const std::string& name, const std::vector<const SessionLog*>& members) {
    std::vector<PredictorRow> rows;
    int fallbacks = 0;
    for (const auto* log : members) {
      rows.push_back(compute_predictors(*log));
      fallbacks += rows.back().dt_fallback ? 1 : 0;
    }
    if (rows.size() < 2) return;
    table.push_back(TableRow{name + "(" + std::to_string(rows.size()) + ")", model_select(rows), fallbacks});
  };
  for (const auto& [name, members] : groups) add(name, members);
  add("ALL", all);
  return table;
}

void write_table_csv(std::ostream& out, const std::vector<TableRow>& table) {
  out << "case,n,intercept,intercept_p,intercept_sig";
  for (const char* name : kPredictorNames) out << ',' << name << ',' << name << "_p," << name << "_sig";
  out << ",adj_r2,dt_fallbacks\n";
  const auto saved = out.precision(6);
  for (const auto& row : table) {
    const auto& f = row.fit;
    out << row.group << ',' << f.n;
    for (int term = 0; term <= 3; ++term) {
      const auto k = static_cast<std::size_t>(term);
      if (f.includes(term))
        out << ',' << f.coef[k] << ',' << f.p_value[k] << ',' << significance(f.p_value[k]);
      else
        out << ",,,";
    }
    out << ',' << f.adj_r2 << ',' << row.dt_fallbacks << '\n';
  }
  out.precision(saved);
}

}  // namespace rmab
