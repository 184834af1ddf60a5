#include "showdown/harness/replay.hpp"

#include <algorithm>

#include "showdown/net/json.hpp"
#include "showdown/net/protocol.hpp"
#include "showdown/net/server.hpp"

namespace showdown::harness {
namespace {

using net::Json;
using net::JsonWriter;

void write_racket_fields(JsonWriter& w, const physics::RacketState& r) {
  w.key("tip").value(r.tip);
  w.key("normal").value(r.face_normal);
  w.key("tip_vel").value(r.tip_vel);
  w.key("trigger").value(r.trigger_held);
}

std::string describe(Tick tick, const std::string& what) {
  return "tick " + std::to_string(tick) + ": " + what;
}

std::string score_text(const std::array<int, 2>& s) {
  return std::to_string(s[0]) + "-" + std::to_string(s[1]);
}

class Checks {
 public:
  explicit Checks(std::initializer_list<const char*> names) {
    for (const char* n : names) checks_.push_back({n, true, {}});
  }
  void fail(std::string_view name, const std::string& detail) {
    for (Check& c : checks_) {
      if (c.name == name && c.passed) {
        c.passed = false;
        c.detail = detail;
      }
    }
  }
  std::vector<Check> take() { return std::move(checks_); }

 private:
  std::vector<Check> checks_;
};

}  // namespace

ReplayError::ReplayError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

std::string header_line(const RunConfig& cfg) {
  JsonWriter w;
  w.begin_object();
  w.key("type").value("header");
  w.key("format").value(kReplayFormat);
  w.key("config").begin_object();
  for (const auto& [k, v] : to_pairs(cfg)) w.key(k).value(v);
  w.end_object();
  w.end_object();
  return w.take() + "\n";
}

std::string racket_line(Tick tick, PlayerId player, const physics::RacketState& racket) {
  JsonWriter w;
  w.begin_object();
  w.key("type").value("racket");
  w.key("tick").value(static_cast<std::uint64_t>(tick));
  w.key("player").value(to_string(player));
  write_racket_fields(w, racket);
  w.end_object();
  return w.take() + "\n";
}

std::string event_line(const Event& e) { return net::encode_line(net::EventMessage{e}); }

std::string end_line(const ReplayEnd& end) {
  JsonWriter w;
  w.begin_object();
  w.key("type").value("end");
  w.key("tick").value(static_cast<std::uint64_t>(end.tick));
  w.key("status").value(end.status == EndStatus::Finished ? "finished" : "timeout");
  w.end_object();
  return w.take() + "\n";
}

ReplayLog parse_replay(std::string_view text) {
  ReplayLog log;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    const std::string_view line = text.substr(start, nl - start);
    start = nl + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    if (log.end) throw ReplayError(line_no, "content after the end line");
    try {
      const Json j = net::parse_document(line);
      const std::string type = net::get_string(j, "type", line);
      if (type == "header") {
        if (line_no != 1 || log.config) throw ReplayError(line_no, "header must be the first line");
        if (net::get_int(j, "format", line) != kReplayFormat) {
          throw ReplayError(line_no, "unsupported log format");
        }
        RunConfig cfg;
        const Json& c = net::member(j, "config", line);
        if (!c.is_object()) throw ReplayError(line_no, "config must be an object");
        for (const auto& [k, v] : c.items()) {
          if (!v.is_string()) throw ReplayError(line_no, "config value for '" + k + "' must be a string");
          set_value(cfg, k, v.get<std::string>());
        }
        cfg.validate();
        log.config = cfg;
      } else if (type == "racket") {
        RacketLine r;
        r.tick = static_cast<Tick>(net::get_uint(j, "tick", line));
        r.player = net::get_player(j, "player", line);
        r.racket.tip = net::get_vec(j, "tip", line);
        r.racket.face_normal = net::get_vec(j, "normal", line);
        r.racket.tip_vel = net::get_vec(j, "tip_vel", line);
        r.racket.trigger_held = net::get_bool(j, "trigger", line);
        log.rackets.push_back(r);
      } else if (type == "event") {
        log.events.push_back(net::read_event(net::member(j, "event", line), line));
      } else if (type == "end") {
        const std::string status = net::get_string(j, "status", line);
        if (status != "finished" && status != "timeout") {
          throw ReplayError(line_no, "unknown end status '" + status + "'");
        }
        log.end = ReplayEnd{static_cast<Tick>(net::get_uint(j, "tick", line)),
                            status == "finished" ? EndStatus::Finished : EndStatus::Timeout};
      } else {
        throw ReplayError(line_no, "unknown line type '" + type + "'");
      }
    } catch (const ReplayError&) {
      throw;
    } catch (const net::DecodeError& e) {
      throw ReplayError(line_no, "column " + std::to_string(e.offset() + 1) + ": " + e.what());
    } catch (const std::exception& e) {
      throw ReplayError(line_no, e.what());
    }
  }
  return log;
}

std::vector<Check> check_rules(const EventLog& events, const RulesExpectations& expect) {
  Checks checks{"tick_order", "score_parity", "score_steps", "game_winner",
                "goal_pause", "serve_pairs", "match_result"};
  const rules::RulesConfig& rc = expect.rules;
  const int target = rc.points_to_win;

  std::array<int, 2> score{};
  std::array<int, 2> expected_score{};
  std::array<int, 2> games{};
  std::optional<Tick> prev_tick;
  bool goal_pending = false;
  Tick goal_tick = 0;
  bool goal_ended_game = false;
  std::optional<PlayerId> serving;
  bool serve_scored = false;
  std::vector<PlayerId> counted;
  bool match_over = false;

  auto check_pairs = [&](Tick tick) {
    for (std::size_t i = 0; i < counted.size(); ++i) {
      const bool same_turn = (i / static_cast<std::size_t>(rc.serves_per_turn)) % 2 == 0;
      if ((counted[i] == counted[0]) != same_turn) {
        checks.fail("serve_pairs", describe(tick, "serve " + std::to_string(i + 1) +
                                                      " of the game went to the wrong player"));
        return;
      }
    }
  };

  for (const Event& e : events) {
    if (prev_tick && e.tick < *prev_tick) {
      checks.fail("tick_order", describe(e.tick, "earlier than tick " + std::to_string(*prev_tick)));
    }
    prev_tick = e.tick;
    if (match_over) checks.fail("match_result", describe(e.tick, "event after the match ended"));

    if (const auto* s = std::get_if<ServeStarted>(&e.payload)) {
      if (goal_pending) {
        const Tick pause = goal_ended_game ? expect.game_over_pause_ticks : rc.goal_pause_ticks();
        if (e.tick != goal_tick + pause) {
          checks.fail("goal_pause",
                      describe(e.tick, "serve " + std::to_string(e.tick - goal_tick) +
                                           " ticks after the goal, expected " +
                                           std::to_string(pause)));
        }
        goal_pending = false;
      }
      serving = s->server;
      serve_scored = false;
    } else if (const auto* g = std::get_if<GoalScored>(&e.payload)) {
      if (serving && !serve_scored) counted.push_back(*serving);
      serve_scored = true;
      goal_pending = true;
      goal_tick = e.tick;
      goal_ended_game = false;
      expected_score = score;
      expected_score[index_of(g->scorer)] += rc.points_per_goal;
    } else if (const auto* a = std::get_if<Announcement>(&e.payload)) {
      for (int v : a->score) {
        if (v % rc.points_per_goal != 0 || v < 0 || v > target) {
          checks.fail("score_parity", describe(e.tick, "announced " + score_text(a->score)));
        }
      }
      if (a->score != expected_score) {
        checks.fail("score_steps", describe(e.tick, "announced " + score_text(a->score) +
                                                        " after " + score_text(score)));
      }
      score = a->score;
    } else if (const auto* ge = std::get_if<GameEnded>(&e.payload)) {
      const int w = ge->score[index_of(ge->winner)];
      const int l = ge->score[index_of(opponent(ge->winner))];
      if (w != target || l >= target) {
        checks.fail("game_winner", describe(e.tick, "game ended " + score_text(ge->score)));
      }
      for (int v : ge->score) {
        if (v % rc.points_per_goal != 0 || v < 0 || v > target) {
          checks.fail("score_parity", describe(e.tick, "final score " + score_text(ge->score)));
        }
      }
      if (ge->score != score) {
        checks.fail("score_steps", describe(e.tick, "game ended " + score_text(ge->score) +
                                                        " but the last announcement was " +
                                                        score_text(score)));
      }
      ++games[index_of(ge->winner)];
      check_pairs(e.tick);
      counted.clear();
      serving.reset();
      score = {};
      expected_score = {};
      goal_ended_game = true;
    } else if (const auto* m = std::get_if<MatchEnded>(&e.payload)) {
      if (m->games != games || games[index_of(m->winner)] != rc.games_to_win ||
          games[index_of(opponent(m->winner))] >= rc.games_to_win) {
        checks.fail("match_result", describe(e.tick, "match ended with games " + score_text(m->games) +
                                                         ", counted " + score_text(games)));
      }
      match_over = true;
    }
  }
  if (expect.require_finished && !match_over) checks.fail("match_result", "no match end recorded");
  return checks.take();
}

bool ReplayReport::passed() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

EventLog resimulate(const ReplayLog& log) {
  if (!log.config) throw std::invalid_argument("log has no header");
  net::GameServer server(log.config->server_config());
  Tick last = log.end ? log.end->tick : 0;
  if (!log.end) {
    if (!log.events.empty()) last = std::max(last, log.events.back().tick);
    if (!log.rackets.empty()) last = std::max(last, log.rackets.back().tick);
  }
  EventLog out;
  std::size_t next = 0;
  for (Tick t = 1; t <= last; ++t) {
    for (; next < log.rackets.size() && log.rackets[next].tick <= t; ++next) {
      server.set_racket(log.rackets[next].player, log.rackets[next].racket);
    }
    auto r = server.tick({}, false);
    out.insert(out.end(), r.events.begin(), r.events.end());
  }
  return out;
}

ReplayReport validate_replay(std::string_view text) {
  ReplayReport report;
  report.lines = static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
  if (!text.empty() && text.back() != '\n') ++report.lines;
  const ReplayLog log = parse_replay(text);
  report.events = log.events.size();

  RulesExpectations expect;
  if (log.config) {
    expect.rules = log.config->rules;
    expect.game_over_pause_ticks = log.config->game_over_pause_ticks;
  }
  expect.require_finished = log.end && log.end->status == EndStatus::Finished;
  report.checks = check_rules(log.events, expect);

  Check resim{"resimulation", true, {}};
  if (log.config) {
    const EventLog again = resimulate(log);
    const auto [a, b] = std::mismatch(log.events.begin(), log.events.end(), again.begin(), again.end());
    if (a != log.events.end() || b != again.end()) {
      resim.passed = false;
      const auto i = static_cast<std::size_t>(a - log.events.begin());
      resim.detail = "logged event " + std::to_string(i + 1) + " of " +
                     std::to_string(log.events.size()) + " differs from the re-run (" +
                     std::to_string(again.size()) + " events)";
    }
  } else if (!log.events.empty() || !log.rackets.empty()) {
    resim.passed = false;
    resim.detail = "no header to re-run from";
  }
  report.checks.push_back(resim);
  return report;
}

}  // namespace showdown::harness
