// showdown: headless matches, the study harness, log analysis and the game server.

#include <csignal>
#include <fstream>
#include <iostream>
#include <pthread.h>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "showdown/harness/config.hpp"
#include "showdown/harness/match.hpp"
#include "showdown/harness/replay.hpp"
#include "showdown/harness/study1.hpp"
#include "showdown/metrics.hpp"
#include "showdown/net/ws_server.hpp"

#ifndef SHOWDOWN_VERSION
#define SHOWDOWN_VERSION "dev"
#endif

namespace {

using namespace showdown;
using namespace showdown::harness;

/// Options shared by every subcommand that builds a RunConfig.
struct ConfigFlags {
  std::string path;
  std::optional<std::uint64_t> seed;
  std::string mode;
  std::vector<std::string> overrides;
  bool print = false;

  void add_to(CLI::App& app, const std::string& mode_help) {
    app.add_option("--config", path, "INI config file")->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "Run seed");
    if (!mode_help.empty()) app.add_option("--mode", mode, mode_help);
    app.add_option("--set", overrides, "Override one key, e.g. --set table.length_m=3.6")
        ->type_name("KEY=VALUE");
    app.add_flag("--print-config", print, "Print the effective config and exit");
  }

  [[nodiscard]] RunConfig build() const {
    RunConfig cfg = path.empty() ? RunConfig{} : load_config(path);
    for (const auto& o : overrides) apply_override(cfg, o);
    if (seed) cfg.seed = *seed;
    if (!mode.empty()) cfg.mode = run_mode_from_string(mode);
    cfg.validate();
    return cfg;
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path);
}

void print_config(const RunConfig& cfg) {
  std::string section;
  for (const auto& [key, value] : to_pairs(cfg)) {
    const auto dot = key.find('.');
    if (key.substr(0, dot) != section) {
      if (!section.empty()) std::cout << "\n";
      section = key.substr(0, dot);
      std::cout << "[" << section << "]\n";
    }
    std::cout << key.substr(dot + 1) << " = " << value << "\n";
  }
}

int cmd_bot_match(const RunConfig& cfg, const std::string& log_path, const std::string& stats_path) {
  MatchResult r;
  try {
    r = run_bot_match(cfg, {!log_path.empty(), false});
  } catch (const MatchTimeout& e) {
    if (!log_path.empty()) write_file(log_path, e.partial_log());
    std::cerr << "timeout: " << e.what() << "\n";
    return 2;
  }
  if (!log_path.empty()) write_file(log_path, r.log);
  if (!stats_path.empty()) write_file(stats_path, stats_json(r.stats));
  std::cout << "winner " << to_string(r.winner) << ", games " << r.games[0] << "-" << r.games[1]
            << ", " << r.ticks << " ticks\n";
  if (cfg.link) {
    std::cout << "link delivered " << r.link_delivered << " of " << r.link_sent << " messages\n";
  }
  std::cout << "\n" << metrics::format_table(r.stats);
  return 0;
}

int cmd_study1(const RunConfig& cfg, const std::string& json_path) {
  const Study1Report report = run_study1(cfg);
  if (!json_path.empty()) write_file(json_path, study1_json(report));
  std::cout << study1_table(report);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", report.seconds);
  std::cout << "\n" << buf << " s\n";
  return 0;
}

int cmd_stats(const std::string& log_path, const std::string& json_path) {
  const ReplayLog log = parse_replay(read_file(log_path));
  const RunConfig cfg = log.config.value_or(RunConfig{});
  const metrics::MatchStats stats = metrics::accumulate_all(log.events, {cfg.table});
  if (!json_path.empty()) write_file(json_path, stats_json(stats));
  std::cout << metrics::format_table(stats);
  return 0;
}

int cmd_replay(const std::string& log_path) {
  const ReplayReport report = validate_replay(read_file(log_path));
  std::cout << report.lines << " lines, " << report.events << " events\n";
  for (const Check& c : report.checks) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name;
    if (!c.passed) std::cout << ": " << c.detail;
    std::cout << "\n";
  }
  return report.passed() ? 0 : 1;
}

int cmd_serve(const RunConfig& cfg, const std::string& bind, const std::string& log_path) {
  net::WsOptions options = net::parse_bind(bind);
  std::ofstream log;
  std::array<std::optional<physics::RacketState>, 2> logged;
  if (!log_path.empty()) {
    log.open(log_path, std::ios::binary);
    if (!log) throw std::runtime_error("cannot write " + log_path);
    log << header_line(cfg);
  }
  auto hook = [&](const net::GameServer& game, const net::TickResult& r) {
    if (!log.is_open()) return;
    for (PlayerId p : {PlayerId::A, PlayerId::B}) {
      if (!game.accepts_inputs(p)) continue;
      const auto& racket = game.world().rackets[index_of(p)];
      if (logged[index_of(p)] != racket) {
        log << racket_line(r.tick, p, racket);
        logged[index_of(p)] = racket;
      }
    }
    for (const Event& e : r.events) log << event_line(e);
    if (game.finished()) log << end_line({game.now(), EndStatus::Finished});
    log.flush();
  };

  // Signals are handled on a dedicated thread so stop() never runs in a handler.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  net::WsServer server(cfg.server_config(), options, hook);
  std::cout << "listening on " << options.host << ":" << server.port() << " ("
            << net::to_string(cfg.server_config().mode) << ", seed " << cfg.seed << ")"
            << std::endl;
  std::atomic<bool> done{false};
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    if (!done) server.stop();
  });
  server.run();
  done = true;
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Audio-only showdown: simulation, analysis and server"};
  app.set_version_flag("--version", SHOWDOWN_VERSION);
  app.require_subcommand(1);

  ConfigFlags serve_flags;
  std::string bind = "127.0.0.1:8080";
  std::string serve_log;
  auto* serve = app.add_subcommand("serve", "Run the WebSocket game server");
  serve_flags.add_to(*serve, "pva or pvp");
  serve->add_option("--bind", bind, "Listen address, HOST:PORT")->capture_default_str();
  serve->add_option("--log", serve_log, "Write the replay log here");

  ConfigFlags match_flags;
  std::string match_log;
  std::string match_stats;
  auto* match = app.add_subcommand("bot-match", "Play one best-of-three match headlessly");
  match_flags.add_to(*match, "pva (bot against the agent) or bots (bot against bot)");
  match->add_option("--log", match_log, "Write the replay log here ('-' for stdout)");
  match->add_option("--stats", match_stats, "Write match statistics JSON here");

  ConfigFlags study_flags;
  std::string study_json;
  auto* study = app.add_subcommand("study1", "Run the route localization trials");
  study_flags.add_to(*study, "");
  study->add_option("--json", study_json, "Write the report JSON here ('-' for stdout)");

  std::string stats_log;
  std::string stats_json_path;
  auto* stats = app.add_subcommand("stats", "Compute match statistics from a replay log");
  stats->add_option("log", stats_log, "Replay log")->required()->check(CLI::ExistingFile);
  stats->add_option("--json", stats_json_path, "Write statistics JSON here ('-' for stdout)");

  std::string replay_log;
  auto* replay = app.add_subcommand("replay", "Re-run a replay log and check every invariant");
  replay->add_option("log", replay_log, "Replay log")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    auto config_for = [](const ConfigFlags& f) -> std::optional<RunConfig> {
      RunConfig cfg = f.build();
      if (!f.print) return cfg;
      print_config(cfg);
      return std::nullopt;
    };
    if (serve->parsed()) {
      if (!serve_flags.mode.empty() && serve_flags.mode != "pva" && serve_flags.mode != "pvp") {
        throw std::invalid_argument("serve mode must be pva or pvp");
      }
      const auto cfg = config_for(serve_flags);
      return cfg ? cmd_serve(*cfg, bind, serve_log) : 0;
    }
    if (match->parsed()) {
      const auto cfg = config_for(match_flags);
      return cfg ? cmd_bot_match(*cfg, match_log, match_stats) : 0;
    }
    if (study->parsed()) {
      const auto cfg = config_for(study_flags);
      return cfg ? cmd_study1(*cfg, study_json) : 0;
    }
    if (stats->parsed()) return cmd_stats(stats_log, stats_json_path);
    if (replay->parsed()) return cmd_replay(replay_log);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
