#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rmab/entrants.hpp"
#include "rmab/env.hpp"

namespace rmab {

inline constexpr Round kHistoryRounds = 1000;
inline constexpr Round kWindowLength = 103;  // t = -2..100

/// Pre-computed agent population history that sessions replay against.
/// Rounds are numbered 1..rounds(); round r holds the board after the
/// round-r change step and all 120 agent moves made against it.
class HistoryDB {
 public:
  HistoryDB() = default;
  HistoryDB(EnvConfig config, std::uint64_t seed) : config_(config), seed_(seed) {}

  const EnvConfig& config() const { return config_; }
  std::uint64_t seed() const { return seed_; }
  Round rounds() const { return static_cast<Round>(boards_.size()); }

  const BanditBoard& board(Round r) const { return boards_.at(static_cast<std::size_t>(r - 1)); }
  std::span<const RoundRecord> records(Round r) const;

  void append_round(BanditBoard board, std::span<const RoundRecord> records);

  bool operator==(const HistoryDB&) const = default;

 private:
  EnvConfig config_;
  std::uint64_t seed_ = 0;
  std::vector<BanditBoard> boards_;
  std::vector<RoundRecord> records_;  // kAgentCount per round
};

/// Simulates the agent population from empty repertoires. `rounds` below the
/// default produces an exact prefix of the full history for the same seed.
HistoryDB generate_history(const EnvConfig& cfg, std::uint64_t seed,
                           Round rounds = kHistoryRounds);

/// Uniform window start in [2, rounds - 102], so round start-1 exists.
Round sample_window_start(Round rounds, Rng& rng);
Round sample_window(const HistoryDB& db, Rng& rng);

/// Window round t in -2..100 mapped onto a history round.
inline Round history_round(Round window_start, Round t) { return window_start + t + 2; }

/// Structural replay check: every record is consistent with the stored board,
/// the agent's previous repertoire and its decision rule. Returns an empty
/// string when consistent, otherwise a description of the first violation.
std::string verify_history(const HistoryDB& db);

class HistoryFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Line-oriented text format:
//   RMAB1 <N> <p_c> <n_I> <seed>
//   B <round> <N payoffs>
//   R <round> <agent> <I|O|X> <bandit|-> <payoff|-> <rep>   (120 per round)
//   END <rounds> <fnv1a64 of all preceding bytes, hex>
// <rep> is '-' or comma-separated bandit:payoff:stamp triples in
// acquisition order.

void save(const HistoryDB& db, std::ostream& out);
void save(const HistoryDB& db, const std::filesystem::path& path);
HistoryDB load(std::istream& in);
HistoryDB load(const std::filesystem::path& path);

std::string format_record(const RoundRecord& record);
/// Parses one R line. Player records use the entrant tag 'P'.
RoundRecord parse_record(std::string_view line);

/// Shortest decimal that round-trips the double.
std::string canonical_double(double value);

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t state = 0xcbf29ce484222325ULL);

}  // namespace rmab
