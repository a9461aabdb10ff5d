// rmab: history generation, Monte Carlo experiments, regression analysis and
// the session server.

#include <algorithm>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "httplib.h"
#include "rmab/analysis.hpp"
#include "rmab/harness.hpp"
#include "rmab/history.hpp"
#include "rmab/http_routes.hpp"
#include "rmab/service.hpp"
#include "rmab/service_json.hpp"

namespace fs = std::filesystem;

namespace {

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

void apply_environment(const std::string& label, rmab::EnvConfig& cfg) {
  if (label.empty()) return;
  if (label.size() != 1) throw rmab::UnknownEnvironment("environment must be one of A, B, C, D");
  cfg = rmab::environment_config(label[0]);
}

httplib::Server* g_server = nullptr;

void stop_server(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Restless multi-armed bandit social learning simulator"};
  app.require_subcommand(1);

  // gen-history
  rmab::EnvConfig gen_cfg;
  std::string gen_env;
  std::uint64_t gen_seed = 1;
  int gen_rounds = rmab::kHistoryRounds;
  fs::path gen_out;
  auto* gen = app.add_subcommand("gen-history", "Generate a 1000-round agent history");
  gen->add_option("--pc", gen_cfg.p_change, "Per-round change probability")->check(CLI::Range(0.0, 1.0));
  gen->add_option("--ni", gen_cfg.n_innovate, "Bandits sampled by Innovate");
  gen->add_option("--env", gen_env, "Preset environment A|B|C|D (overrides --pc/--ni)");
  gen->add_option("--seed", gen_seed, "Generation seed");
  gen->add_option("--rounds", gen_rounds, "Rounds to simulate")->check(CLI::PositiveNumber);
  gen->add_option("--out", gen_out, "Output .rmab file")->required();

  // simulate
  rmab::EnvConfig sim_cfg;
  int sim_runs = 10000;
  std::uint64_t sim_seed = 1;
  unsigned sim_threads = 0;
  fs::path sim_history;
  fs::path sim_out;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo estimates of I+O, I, O, EO and P(i)");
  sim->add_option("--pc", sim_cfg.p_change, "Per-round change probability")->check(CLI::Range(0.0, 1.0));
  sim->add_option("--ni", sim_cfg.n_innovate, "Bandits sampled by Innovate");
  sim->add_option("--runs", sim_runs, "Number of games")->check(CLI::PositiveNumber);
  sim->add_option("--seed", sim_seed, "Base seed");
  sim->add_option("--threads", sim_threads, "Worker threads (0 = all cores)");
  sim->add_option("--history", sim_history,
                  "Replay windows of this history instead of simulating one per game")
      ->check(CLI::ExistingFile);
  sim->add_option("--out", sim_out, "Output CSV")->required();

  // phase
  std::vector<double> phase_pc{0.05, 0.1, 0.2, 0.3, 0.4};
  std::vector<int> phase_ni{1, 2, 5, 10, 20};
  int phase_runs = 10000;
  std::uint64_t phase_seed = 1;
  unsigned phase_threads = 0;
  fs::path phase_out;
  auto* phase = app.add_subcommand("phase", "Classify a grid of (n_I, p_c) cells");
  phase->add_option("--pc-list", phase_pc, "Change probabilities")->delimiter(',');
  phase->add_option("--ni-list", phase_ni, "Innovate sample sizes")->delimiter(',');
  phase->add_option("--runs", phase_runs, "Games per cell")->check(CLI::PositiveNumber);
  phase->add_option("--seed", phase_seed, "Base seed shared by all cells");
  phase->add_option("--threads", phase_threads, "Worker threads (0 = all cores)");
  phase->add_option("--out", phase_out, "Output CSV")->required();

  // analyze
  fs::path logs_dir;
  fs::path table_out;
  auto* analyze = app.add_subcommand("analyze", "Regression of session payoffs on learning predictors");
  analyze->add_option("--logs", logs_dir, "Directory of *.log session logs")->required()->check(CLI::ExistingDirectory);
  analyze->add_option("--out", table_out, "Output CSV")->required();

  // serve
  fs::path history_dir = ".";
  std::string listen = "127.0.0.1:8080";
  bool debug = false;
  fs::path log_dir;
  fs::path static_dir;
  auto* serve = app.add_subcommand("serve", "Run the JSON session service");
  serve->add_option("--history-dir", history_dir, "Directory holding A.rmab..D.rmab")
      ->envname("RMAB_HISTORY_DIR")
      ->check(CLI::ExistingDirectory);
  serve->add_option("--listen", listen, "host:port")->envname("RMAB_LISTEN");
  serve->add_flag("--debug", debug, "Expose environment parameters and accept seeds")->envname("RMAB_DEBUG");
  serve->add_option("--log-dir", log_dir, "Write finished session logs here")->envname("RMAB_LOG_DIR");
  serve->add_option("--static-dir", static_dir, "Serve a browser client from this directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      apply_environment(gen_env, gen_cfg);
      gen_cfg.validate();
      const auto db = rmab::generate_history(gen_cfg, gen_seed, gen_rounds);
      rmab::save(db, gen_out);
      std::cout << "wrote " << db.rounds() << " rounds to " << gen_out.string() << '\n';
    } else if (*sim) {
      std::optional<rmab::HistoryDB> history;
      if (!sim_history.empty()) {
        history = rmab::load(sim_history);
        sim_cfg.n_innovate = history->config().n_innovate;
        sim_cfg.p_change = history->config().p_change;
      }
      sim_cfg.validate();
      const auto summary = rmab::monte_carlo(
          sim_cfg, {sim_runs, sim_seed, history ? &*history : nullptr, sim_threads});
      auto out = open_output(sim_out);
      rmab::write_results_csv(out, sim_cfg, summary);
      for (auto kind : rmab::kAllStrategies) {
        std::cout << rmab::label(kind) << ' ' << summary[kind].mean << " +- " << summary[kind].se << '\n';
      }
    } else if (*phase) {
      const auto cells = rmab::phase_diagram(phase_ni, phase_pc, phase_runs, phase_seed, phase_threads);
      auto out = open_output(phase_out);
      rmab::write_phase_csv(out, cells);
      for (const auto& c : cells)
        std::cout << "n_I=" << c.n_innovate << " p_c=" << c.p_change << ' '
                  << rmab::to_string(c.classification) << (c.near_boundary ? " (near boundary)" : "")
                  << '\n';
    } else if (*analyze) {
      std::vector<fs::path> files;
      for (const auto& entry : fs::directory_iterator(logs_dir))
        if (entry.is_regular_file() && entry.path().extension() == ".log") files.push_back(entry.path());
      std::sort(files.begin(), files.end());
      std::vector<rmab::SessionLog> logs;
      for (const auto& f : files) logs.push_back(rmab::read_session_log(f));
      const auto table = rmab::regression_table(logs);
      auto out = open_output(table_out);
      rmab::write_table_csv(out, table);
      std::cout << "fitted " << table.size() << " groups from " << logs.size() << " logs\n";
    } else if (*serve) {
      rmab::ServiceOptions options;
      options.debug = debug;
      if (!log_dir.empty()) {
        fs::create_directories(log_dir);
        options.log_dir = log_dir;
      }
      auto service = rmab::GameService::from_directory(history_dir, options);
      rmab::JsonApi api(service);
      httplib::Server server;
      rmab::mount_routes(server, api);
      if (!static_dir.empty() && !server.set_mount_point("/", static_dir.string()))
        throw std::runtime_error("cannot serve " + static_dir.string());

      const auto colon = listen.rfind(':');
      if (colon == std::string::npos) throw std::invalid_argument("--listen must be host:port");
      const std::string host = listen.substr(0, colon);
      const int port = std::stoi(listen.substr(colon + 1));
      g_server = &server;
      std::signal(SIGINT, stop_server);
      std::signal(SIGTERM, stop_server);
      std::cout << "serving environments";
      for (char e : service.environments()) std::cout << ' ' << e;
      std::cout << " on " << host << ':' << port << std::endl;
      if (!server.listen(host, port)) throw std::runtime_error("cannot listen on " + listen);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
