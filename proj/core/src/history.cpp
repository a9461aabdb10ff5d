#include "rmab/history.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace rmab {

std::span<const RoundRecord> HistoryDB::records(Round r) const {
  if (r < 1 || r > rounds()) throw std::out_of_range("history round out of range");
  return std::span<const RoundRecord>(records_).subspan(
      static_cast<std::size_t>(r - 1) * kAgentCount, kAgentCount);
}

void HistoryDB::append_round(BanditBoard board, std::span<const RoundRecord> records) {
  if (records.size() != kAgentCount)
    throw std::invalid_argument("a history round needs exactly 120 agent records");
  boards_.push_back(std::move(board));
  records_.insert(records_.end(), records.begin(), records.end());
}

HistoryDB generate_history(const EnvConfig& cfg, std::uint64_t seed, Round rounds) {
  cfg.validate();
  HistoryDB db(cfg, seed);
  Rng rng(seed);
  BanditBoard board = initial_board(cfg, rng);
  const auto grid = agent_grid();
  std::vector<Repertoire> reps(kAgentCount);
  std::vector<RoundRecord> current(kAgentCount);
  ObservePool previous;

  for (Round r = 1; r <= rounds; ++r) {
    step_board(board, cfg, rng);
    for (int i = 0; i < kAgentCount; ++i) {
      auto& rep = reps[static_cast<std::size_t>(i)];
      auto& rec = current[static_cast<std::size_t>(i)];
      const Action action = agent_decide(grid[static_cast<std::size_t>(i)], rep, rng);
      rec = RoundRecord{r, i + 1, action.kind, std::nullopt, std::nullopt, {}};
      switch (action.kind) {
        case ActionKind::Exploit: {
          auto [payoff, updated] = exploit(board, rep, action.target, r);
          rep = updated;
          rec.bandit = action.target;
          rec.payoff = payoff;
          break;
        }
        case ActionKind::Innovate: {
          const BanditInfo info = innovate_draw(board, cfg, rng, r);
          rep.update(info);
          rec.bandit = info.bandit;
          break;
        }
        case ActionKind::Observe:
          if (auto info = previous.draw(rng)) {
            rep.update(*info);
            rec.bandit = info->bandit;
          }
          break;
      }
      rec.repertoire_after = rep;
    }
    db.append_round(board, current);
    previous = ObservePool(current);
  }
  return db;
}

Round sample_window_start(Round rounds, Rng& rng) {
  if (rounds < kWindowLength + 1)
    throw std::invalid_argument("history too short for a 103-round window");
  return 2 + static_cast<Round>(rng.below(static_cast<std::uint64_t>(rounds - kWindowLength)));
}

Round sample_window(const HistoryDB& db, Rng& rng) { return sample_window_start(db.rounds(), rng); }

std::string verify_history(const HistoryDB& db) {
  const auto grid = agent_grid();
  const Repertoire empty;
  for (Round r = 1; r <= db.rounds(); ++r) {
    const auto recs = db.records(r);
    const BanditBoard& board = db.board(r);
    const ObservePool pool = r > 1 ? ObservePool(db.records(r - 1)) : ObservePool();
    for (int i = 0; i < kAgentCount; ++i) {
      const auto& rec = recs[static_cast<std::size_t>(i)];
      const Repertoire& before =
          r > 1 ? db.records(r - 1)[static_cast<std::size_t>(i)].repertoire_after : empty;
      const std::string where =
          "round " + std::to_string(r) + " agent " + std::to_string(i + 1) + ": ";
      if (rec.round != r || rec.entrant != i + 1) return where + "misplaced record";
      if (rec.payoff.has_value() != (rec.kind == ActionKind::Exploit))
        return where + "payoff present on a learning move";

      // Exploit is fully determined by the previous repertoire.
      Rng unused(0);
      const Action expected = agent_decide(grid[static_cast<std::size_t>(i)], before, unused);
      if (expected.kind == ActionKind::Exploit) {
        if (rec.kind != ActionKind::Exploit || rec.bandit != expected.target)
          return where + "decision rule requires exploiting bandit " +
                 std::to_string(expected.target);
        if (*rec.payoff != board.at(expected.target)) return where + "payoff differs from board";
        if (rec.repertoire_after != update_repertoire(before, {expected.target, *rec.payoff, r}))
          return where + "repertoire not updated by exploit";
        continue;
      }
      if (rec.kind == ActionKind::Exploit) return where + "exploit below threshold";
      if (rec.kind == ActionKind::Innovate) {
        if (!rec.bandit || *rec.bandit < 1 || *rec.bandit > board.size())
          return where + "innovate without a bandit";
        if (rec.repertoire_after != update_repertoire(before, {*rec.bandit, board.at(*rec.bandit), r}))
          return where + "repertoire not updated by innovate";
        continue;
      }
      if (!rec.bandit) {
        if (!pool.empty()) return where + "observe returned nothing despite exploiters";
        if (rec.repertoire_after != before) return where + "failed observe changed the repertoire";
        continue;
      }
      const BanditInfo* source = nullptr;
      for (const auto& e : pool.exploits())
        if (e.bandit == *rec.bandit) source = &e;
      if (source == nullptr) return where + "observed bandit was not exploited last round";
      if (rec.repertoire_after != update_repertoire(before, *source))
        return where + "repertoire not updated by observe";
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Serialization

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t state) {
  for (unsigned char c : bytes) {
    state ^= c;
    state *= 0x100000001b3ULL;
  }
  return state;
}

std::string canonical_double(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

namespace {

void append_optional(std::string& out, const std::optional<std::int32_t>& v) {
  out += ' ';
  out += v ? std::to_string(*v) : "-";
}

std::string format_repertoire(const Repertoire& rep) {
  if (rep.empty()) return "-";
  std::string out;
  for (const auto& e : rep.entries()) {
    if (!out.empty()) out += ',';
    out += std::to_string(e.bandit) + ':' + std::to_string(e.payoff) + ':' +
           std::to_string(e.stamp);
  }
  return out;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::vector<std::string_view> tokens(std::string_view s) {
  std::vector<std::string_view> out;
  for (auto part : split(s, ' '))
    if (!part.empty()) out.push_back(part);
  return out;
}

template <typename T>
T parse_number(std::string_view tok, const char* what) {
  T value{};
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    throw HistoryFormatError(std::string("malformed ") + what + " '" + std::string(tok) + "'");
  return value;
}

std::optional<std::int32_t> parse_optional(std::string_view tok, const char* what) {
  if (tok == "-") return std::nullopt;
  return parse_number<std::int32_t>(tok, what);
}

Repertoire parse_repertoire(std::string_view tok) {
  Repertoire rep;
  if (tok == "-") return rep;
  const auto items = split(tok, ',');
  if (items.size() > kRepertoireCapacity) throw HistoryFormatError("repertoire holds more than 3 entries");
  for (auto item : items) {
    const auto f = split(item, ':');
    if (f.size() != 3) throw HistoryFormatError("malformed repertoire entry '" + std::string(item) + "'");
    const BanditInfo info{parse_number<BanditId>(f[0], "bandit"),
                          parse_number<Payoff>(f[1], "payoff"),
                          parse_number<Round>(f[2], "stamp")};
    if (rep.find(info.bandit)) throw HistoryFormatError("repertoire repeats a bandit");
    if (info.payoff < 0) throw HistoryFormatError("negative payoff in repertoire");
    rep.update(info);
  }
  return rep;
}

}  // namespace

std::string format_record(const RoundRecord& rec) {
  std::string out = "R " + std::to_string(rec.round) + ' ';
  out += rec.entrant == kPlayerEntrant ? std::string("P") : std::to_string(rec.entrant);
  out += ' ';
  out += static_cast<char>(rec.kind);
  append_optional(out, rec.bandit);
  append_optional(out, rec.payoff);
  out += ' ';
  out += format_repertoire(rec.repertoire_after);
  return out;
}

RoundRecord parse_record(std::string_view line) {
  const auto t = tokens(line);
  if (t.size() != 7 || t[0] != "R") throw HistoryFormatError("malformed record line '" + std::string(line) + "'");
  RoundRecord rec;
  rec.round = parse_number<Round>(t[1], "round");
  rec.entrant = t[2] == "P" ? kPlayerEntrant : parse_number<int>(t[2], "entrant");
  if (rec.entrant != kPlayerEntrant && (rec.entrant < 1 || rec.entrant > kAgentCount))
    throw HistoryFormatError("agent index out of range in '" + std::string(line) + "'");
  if (t[3] == "I") rec.kind = ActionKind::Innovate;
  else if (t[3] == "O") rec.kind = ActionKind::Observe;
  else if (t[3] == "X") rec.kind = ActionKind::Exploit;
  else throw HistoryFormatError("unknown action code '" + std::string(t[3]) + "'");
  rec.bandit = parse_optional(t[4], "bandit");
  rec.payoff = parse_optional(t[5], "payoff");
  if (rec.kind == ActionKind::Exploit && (!rec.bandit || !rec.payoff))
    throw HistoryFormatError("exploit record without bandit and payoff");
  if (rec.kind != ActionKind::Exploit && rec.payoff)
    throw HistoryFormatError("payoff on a learning record");
  if (rec.payoff && *rec.payoff < 0) throw HistoryFormatError("negative payoff");
  rec.repertoire_after = parse_repertoire(t[6]);
  return rec;
}

void save(const HistoryDB& db, std::ostream& out) {
  const auto& cfg = db.config();
  std::string text = "RMAB1 " + std::to_string(cfg.n_bandits) + ' ' +
                     canonical_double(cfg.p_change) + ' ' + std::to_string(cfg.n_innovate) +
                     ' ' + std::to_string(db.seed()) + '\n';
  for (Round r = 1; r <= db.rounds(); ++r) {
    text += "B " + std::to_string(r);
    for (Payoff p : db.board(r).payoffs) {
      text += ' ';
      text += std::to_string(p);
    }
    text += '\n';
    for (const auto& rec : db.records(r)) {
      text += format_record(rec);
      text += '\n';
    }
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a64(text)));
  text += "END " + std::to_string(db.rounds()) + ' ' + hex + '\n';
  out << text;
}

void save(const HistoryDB& db, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  save(db, out);
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

HistoryDB load(std::istream& in) {
  std::string line;
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    return true;
  };
  auto absorb = [&] {
    hash = fnv1a64(line, hash);
    hash = fnv1a64("\n", hash);
  };

  if (!next_line()) throw HistoryFormatError("empty history file");
  const auto head = tokens(line);
  if (head.size() != 5 || head[0] != "RMAB1") throw HistoryFormatError("malformed header: expected 'RMAB1 <N> <p_c> <n_I> <seed>'");
  EnvConfig cfg;
  cfg.n_bandits = parse_number<int>(head[1], "N");
  cfg.p_change = parse_number<double>(head[2], "p_c");
  cfg.n_innovate = parse_number<int>(head[3], "n_I");
  const auto seed = parse_number<std::uint64_t>(head[4], "seed");
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw HistoryFormatError(std::string("invalid header: ") + e.what());
  }
  absorb();

  HistoryDB db(cfg, seed);
  std::vector<RoundRecord> recs;
  recs.reserve(kAgentCount);
  BanditBoard board;
  Round round = 0;

  auto flush = [&] {
    if (round == 0) return;
    if (recs.size() != kAgentCount)
      throw HistoryFormatError("round " + std::to_string(round) + ": expected 120 agent records, found " +
                               std::to_string(recs.size()));
    db.append_round(std::move(board), recs);
    recs.clear();
    board = {};
  };

  while (next_line()) {
    if (line.rfind("END", 0) == 0) {
      flush();
      const auto t = tokens(line);
      if (t.size() != 3) throw HistoryFormatError("malformed END line");
      if (parse_number<Round>(t[1], "round count") != db.rounds())
        throw HistoryFormatError("END declares " + std::string(t[1]) + " rounds, file holds " +
                                 std::to_string(db.rounds()));
      char hex[17];
      std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(hash));
      if (t[2] != hex) throw HistoryFormatError("checksum mismatch");
      return db;
    }
    absorb();
    if (line.rfind("B ", 0) == 0) {
      flush();
      const auto t = tokens(line);
      round = parse_number<Round>(t.at(1), "round");
      if (round != db.rounds() + 1)
        throw HistoryFormatError("round " + std::to_string(round) + " out of sequence");
      if (t.size() != static_cast<std::size_t>(cfg.n_bandits) + 2)
        throw HistoryFormatError("round " + std::to_string(round) + ": board has wrong bandit count");
      for (std::size_t i = 2; i < t.size(); ++i) {
        const auto p = parse_number<Payoff>(t[i], "payoff");
        if (p < 0) throw HistoryFormatError("round " + std::to_string(round) + ": negative payoff");
        board.payoffs.push_back(p);
      }
    } else if (line.rfind("R ", 0) == 0) {
      if (round == 0) throw HistoryFormatError("record before the first board line");
      RoundRecord rec;
      try {
        rec = parse_record(line);
      } catch (const HistoryFormatError& e) {
        throw HistoryFormatError("round " + std::to_string(round) + ": " + e.what());
      }
      if (rec.round != round || rec.entrant == kPlayerEntrant)
        throw HistoryFormatError("round " + std::to_string(round) + ": misplaced record");
      if (recs.size() >= kAgentCount || rec.entrant != static_cast<int>(recs.size()) + 1)
        throw HistoryFormatError("round " + std::to_string(round) + ": agent records out of order");
      recs.push_back(std::move(rec));
    } else {
      throw HistoryFormatError("unrecognized line '" + line.substr(0, 40) + "'");
    }
  }
  throw HistoryFormatError("truncated history: missing END line");
}

HistoryDB load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return load(in);
}

}  // namespace rmab
