// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <thread>

#include "showdown/agent.hpp"
#include "showdown/harness/bot.hpp"
#include "showdown/harness/match.hpp"
#include "showdown/harness/replay.hpp"
#include "showdown/harness/study1.hpp"
#include "showdown/metrics.hpp"
#include "showdown/net/protocol.hpp"
#include "showdown/net/server.hpp"
#include "showdown/physics.hpp"
#include "showdown/seed.hpp"

#ifndef SHOWDOWN_GOLDEN_DIR
#define SHOWDOWN_GOLDEN_DIR "tests/golden"
#endif

namespace {

using namespace showdown;
using namespace showdown::harness;

struct Outcome {
  bool passed = true;
  std::string detail;
};

/// Collects the first few failures and a summary.
class Verdict {
 public:
  void require(bool ok, const std::string& what) {
    if (ok) return;
    passed_ = false;
    if (++failures_ <= 3) problems_ += (problems_.empty() ? "" : "; ") + what;
  }
  void note(const std::string& s) { notes_ += (notes_.empty() ? "" : ", ") + s; }
  [[nodiscard]] Outcome done() const {
    if (passed_) return {true, notes_};
    std::string d = problems_;
    if (failures_ > 3) d += " (+" + std::to_string(failures_ - 3) + " more)";
    return {false, d};
  }

 private:
  bool passed_ = true;
  int failures_ = 0;
  std::string problems_;
  std::string notes_;
};

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

std::string first_failure(const ReplayReport& r) {
  for (const Check& c : r.checks) {
    if (!c.passed) return c.name + ": " + c.detail;
  }
  return {};
}

/// Runs fn(i) for i in [0, n) on all cores.
void parallel_for(int n, const std::function<void(int)>& fn) {
  const int workers = std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i; (i = next++) < n;) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

Outcome study1() {
  Verdict v;
  const RunConfig cfg;
  const Study1Report r = run_study1(cfg);
  v.require(r.noiseless.trials == 36 && r.noiseless.correct == 36,
            "noiseless " + std::to_string(r.noiseless.correct) + "/" +
                std::to_string(r.noiseless.trials));
  v.require(r.noisy.trials == 1000, "noisy trials " + std::to_string(r.noisy.trials));
  v.require(r.noisy.accuracy() >= 0.91, "noisy accuracy " + fmt("%.4f", r.noisy.accuracy()));
  v.require(r.seconds < 5.0, "runtime " + fmt("%.2f s", r.seconds));
  for (const StudyRun* run : {&r.noiseless, &r.noisy}) {
    v.require(std::abs(weighted_mean(run->by_direction) - run->accuracy()) <= 1e-12,
              run->label + " direction split inconsistent");
    v.require(std::abs(weighted_mean(run->by_point) - run->point_accuracy()) <= 1e-12,
              run->label + " point split inconsistent");
  }
  v.note("noiseless " + std::to_string(r.noiseless.correct) + "/36");
  v.note("noisy " + fmt("%.4f", r.noisy.accuracy()) + " over 1000 (departure " +
         fmt("%.4f", r.noisy.by_direction[0].accuracy()) + ", arrival " +
         fmt("%.4f", r.noisy.by_direction[1].accuracy()) + ")");
  v.note(fmt("%.3f s", r.seconds));
  return v.done();
}

Outcome physics_constants() {
  Verdict v;
  const TableGeometry t;
  physics::PhysicsConfig cfg;
  cfg.drag_per_s = 0.0;
  std::mt19937_64 rng(derive_seed(1, SeedStream::Study));
  std::uniform_real_distribution<double> speed(0.5, 9.0);
  std::uniform_real_distribution<double> along(-5.0, 5.0);
  double worst_ratio = 0.0;
  double worst_tangent = 0.0;
  auto bounce = [&](Vec2 pos, Vec2 vel, bool side) {
    physics::World w = physics::make_world(t, cfg);
    w.ball = {pos, vel, std::nullopt};
    w.in_play = true;
    EventLog ev;
    physics::step_in_place(w, kTickSeconds, 1, ev);
    const bool wall = std::any_of(ev.begin(), ev.end(), [](const Event& e) {
      return std::holds_alternative<WallHit>(e.payload);
    });
    v.require(wall, "no wall hit");
    const double ratio = side ? -w.ball.vel.x / vel.x : -w.ball.vel.y / vel.y;
    const double tangent = side ? w.ball.vel.y - vel.y : w.ball.vel.x - vel.x;
    worst_ratio = std::max(worst_ratio, std::abs(ratio - 0.9));
    worst_tangent = std::max(worst_tangent, std::abs(tangent));
  };
  for (int i = 0; i < 2000; ++i) {
    const double s = speed(rng);
    const double a = along(rng);
    // Side wall, then end wall outside the goal pocket.
    bounce({t.half_width() - t.ball_radius_m - 0.005, 0.0}, {s, a}, true);
    bounce({0.45, t.half_length() - t.ball_radius_m - 0.005}, {a * 0.1, s}, false);
  }
  v.require(worst_ratio <= 1e-9, "normal ratio off by " + fmt("%.3g", worst_ratio));
  v.require(worst_tangent <= 1e-12, "tangential drift " + fmt("%.3g", worst_tangent));

  // Racket impacts with arbitrary swings, then every contact in real matches.
  const physics::PhysicsConfig defaults;
  double fastest = 0.0;
  std::uniform_real_distribution<double> comp(-15.0, 15.0);
  std::uniform_real_distribution<double> angle(-1.2, 1.2);
  for (int i = 0; i < 100000; ++i) {
    physics::RacketState r;
    const double th = angle(rng);
    r.face_normal = {std::sin(th), std::cos(th)};
    r.tip_vel = {comp(rng), comp(rng)};
    Vec2 in{comp(rng), -std::abs(comp(rng)) - 0.1};
    if ((in - r.tip_vel).dot(r.face_normal) >= 0.0) continue;
    fastest = std::max(fastest, physics::racket_impact(in, r, 0.9, defaults).length());
  }
  std::atomic<int> matches_checked{0};
  std::vector<double> match_fastest(20, 0.0);
  parallel_for(20, [&](int i) {
    RunConfig rc;
    rc.seed = 5000 + static_cast<std::uint64_t>(i);
    rc.mode = i % 2 == 0 ? RunMode::Pva : RunMode::Bots;
    const MatchResult m = run_bot_match(rc, {false, true});
    for (const Event& e : m.events) {
      if (const auto* h = std::get_if<RacketHit>(&e.payload)) {
        match_fastest[static_cast<std::size_t>(i)] =
            std::max(match_fastest[static_cast<std::size_t>(i)], h->out_vel.length());
      } else if (const auto* w = std::get_if<WallHit>(&e.payload)) {
        match_fastest[static_cast<std::size_t>(i)] =
            std::max(match_fastest[static_cast<std::size_t>(i)], w->speed);
      }
    }
    ++matches_checked;
  });
  for (double f : match_fastest) fastest = std::max(fastest, f);
  v.require(fastest <= 11.11, "post-impact speed " + fmt("%.6f", fastest));
  v.note("ratio error " + fmt("%.2g", worst_ratio));
  v.note("tangential error " + fmt("%.2g", worst_tangent));
  v.note("fastest " + fmt("%.4f m/s", fastest) + " over 100000 impacts and " +
         std::to_string(matches_checked.load()) + " matches");
  return v.done();
}

Outcome agent_probabilities() {
  Verdict v;
  const std::array<double, 3> expected{1.0, 0.7, 0.4};
  std::string rates;
  for (int tier = 0; tier < 3; ++tier) {
    agent::AgentState s = agent::make_agent(PlayerId::B, derive_seed(100 + tier, SeedStream::Agent));
    int hits = 0;
    for (int i = 0; i < 10000; ++i) {
      s.consecutive_hits = tier;
      hits += agent::decide_hit(s, 8.0) ? 1 : 0;
    }
    const double rate = hits / 10000.0;
    const double tol = tier == 0 ? 0.0 : 0.015;
    v.require(std::abs(rate - expected[static_cast<std::size_t>(tier)]) <= tol,
              "tier " + std::to_string(tier + 1) + " rate " + fmt("%.4f", rate));
    rates += (rates.empty() ? "" : " ") + fmt("%.4f", rate);
  }
  agent::AgentState s = agent::make_agent(PlayerId::B, derive_seed(200, SeedStream::Agent));
  int fast_hits = 0;
  for (int i = 0; i < 10000; ++i) {
    s.consecutive_hits = i % 3;
    fast_hits += agent::decide_hit(s, 11.01) ? 1 : 0;
  }
  v.require(fast_hits == 0, std::to_string(fast_hits) + " hits at 11.01 m/s");
  v.note("rates " + rates);
  v.note("11.01 m/s hits " + std::to_string(fast_hits) + "/10000");
  return v.done();
}

Outcome rules_suite() {
  Verdict v;
  constexpr int kMatches = 1000;
  const RunConfig base;
  v.require(base.rules.goal_pause_ticks() == 300,
            "goal pause " + std::to_string(base.rules.goal_pause_ticks()) + " ticks");
  v.require(base.rules.points_to_win == 12, "points to win " + std::to_string(base.rules.points_to_win));
  v.require(base.rules.serves_per_turn == 2, "serves per turn " + std::to_string(base.rules.serves_per_turn));
  std::vector<std::string> problems(kMatches);
  std::vector<Tick> ticks(kMatches, 0);
  parallel_for(kMatches, [&](int i) {
    RunConfig cfg = base;
    cfg.seed = static_cast<std::uint64_t>(i + 1);
    cfg.mode = i % 2 == 0 ? RunMode::Pva : RunMode::Bots;
    try {
      const MatchResult m = run_bot_match(cfg, {false, true});
      ticks[static_cast<std::size_t>(i)] = m.ticks;
      RulesExpectations expect;
      expect.rules = cfg.rules;
      expect.game_over_pause_ticks = cfg.game_over_pause_ticks;
      expect.require_finished = true;
      for (const Check& c : check_rules(m.events, expect)) {
        if (!c.passed) {
          problems[static_cast<std::size_t>(i)] = c.name + ": " + c.detail;
          break;
        }
      }
    } catch (const MatchTimeout&) {
      problems[static_cast<std::size_t>(i)] = "timeout";
    }
  });
  for (int i = 0; i < kMatches; ++i) {
    const auto& p = problems[static_cast<std::size_t>(i)];
    v.require(p.empty(), "seed " + std::to_string(i + 1) + " " + p);
  }
  v.note(std::to_string(kMatches) + " matches");
  v.note("longest " + std::to_string(*std::max_element(ticks.begin(), ticks.end())) + " of " +
         std::to_string(base.tick_limit) + " ticks");
  return v.done();
}

bool mirrored(const net::Snapshot& a, const net::Snapshot& b) {
  if (a.tick != b.tick || mirror(b.ball_pos) != a.ball_pos || mirror(b.ball_vel) != a.ball_vel ||
      a.held_by != b.held_by || a.phase != b.phase || a.scores != b.scores || a.games != b.games ||
      a.events.size() != b.events.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.events.size(); ++i) {
    if (in_player_frame(b.events[i], PlayerId::B) != a.events[i]) return false;
  }
  return true;
}

Outcome netcode() {
  Verdict v;

  // A full bot-versus-bot match with snapshots every tick and a replay log.
  RunConfig cfg;
  cfg.mode = RunMode::Bots;
  cfg.seed = 21;
  net::GameServer server(cfg.server_config());
  ScriptedBot a(PlayerId::A, cfg.bot_a, derive_seed(cfg.seed, SeedStream::BotA), cfg.table, cfg.physics);
  ScriptedBot b(PlayerId::B, cfg.bot_b, derive_seed(cfg.seed, SeedStream::BotB), cfg.table, cfg.physics);
  std::string log = header_line(cfg);
  std::array<std::optional<physics::RacketState>, 2> logged;
  Observation seen_a = observe_world(server.world(), PlayerId::A, 0);
  Observation seen_b = observe_world(server.world(), PlayerId::B, 0);
  std::uint64_t snapshots = 0;
  std::uint64_t incoherent = 0;
  while (!server.finished() && server.now() < cfg.tick_limit) {
    const std::vector<net::InputEnvelope> inputs{{0, a.step(seen_a)}, {1, b.step(seen_b)}};
    const net::TickResult r = server.tick(inputs, true);
    // Clients see only what survives the wire.
    const auto sa = std::get<net::Snapshot>(net::decode(net::encode(*r.snapshots[0])));
    const auto sb = std::get<net::Snapshot>(net::decode(net::encode(*r.snapshots[1])));
    snapshots += 2;
    incoherent += mirrored(sa, sb) ? 0 : 1;
    seen_a = observe_snapshot(sa);
    seen_b = observe_snapshot(sb);
    for (PlayerId p : {PlayerId::A, PlayerId::B}) {
      const auto& racket = server.world().rackets[index_of(p)];
      if (logged[index_of(p)] != racket) {
        log += racket_line(r.tick, p, racket);
        logged[index_of(p)] = racket;
      }
    }
    for (const Event& e : r.events) log += event_line(e);
  }
  v.require(server.finished(), "snapshot match did not finish");
  log += end_line({server.now(), EndStatus::Finished});
  v.require(incoherent == 0, std::to_string(incoherent) + " incoherent snapshot pairs");
  const ReplayReport local = validate_replay(log);
  v.require(local.passed(), "logged match: " + first_failure(local));
  v.note(std::to_string(snapshots) + " snapshots mirrored");

  // Golden vector: decode and re-encode must reproduce the frozen bytes.
  std::ifstream in(std::string(SHOWDOWN_GOLDEN_DIR) + "/snapshot_v1.json", std::ios::binary);
  std::ostringstream golden;
  golden << in.rdbuf();
  v.require(!golden.str().empty(), "golden vector missing");
  if (!golden.str().empty()) {
    const std::string again = net::encode_line(net::decode(golden.str()));
    v.require(again == golden.str(), "golden vector re-encodes differently");
    v.require(net::encode_line(net::decode(again)) == again, "golden vector unstable");
  }

  // Remote bot against the agent over a lossy, delayed link.
  RunConfig remote;
  remote.mode = RunMode::Pva;
  remote.link = net::LinkModel{100.0, 0.0, 0.05, 0};
  try {
    const MatchResult m = run_bot_match(remote);
    const ReplayReport rr = validate_replay(m.log);
    v.require(rr.passed(), "remote match: " + first_failure(rr));
    v.note("remote match " + std::to_string(m.games[0]) + "-" + std::to_string(m.games[1]) +
           " in " + std::to_string(m.ticks) + " ticks, " +
           fmt("%.4f", static_cast<double>(m.link_delivered) / m.link_sent) + " delivered");
  } catch (const MatchTimeout&) {
    v.require(false, "remote match timed out");
  }
  return v.done();
}

Outcome determinism() {
  Verdict v;
  for (RunMode mode : {RunMode::Pva, RunMode::Bots}) {
    RunConfig cfg;
    cfg.mode = mode;
    cfg.seed = 77;
    const std::string first = run_bot_match(cfg).log;
    const std::string second = run_bot_match(cfg).log;
    v.require(first == second, std::string(to_string(mode)) + " logs differ");
    cfg.seed = 78;
    v.require(run_bot_match(cfg).log != first, std::string(to_string(mode)) + " seed ignored");
    v.note(std::string(to_string(mode)) + " " + std::to_string(first.size()) + " bytes identical");
  }
  return v.done();
}

Outcome metrics_suite() {
  Verdict v;
  const EventLog rally{
      {10, ServeStarted{PlayerId::A, {0.1, -2.0}}},
      {40, RacketHit{PlayerId::A, {-0.35, -1.2}, {0.4, 5.0}}},
      {90, CenterCrossed{PlayerId::B}},
      {130, RacketHit{PlayerId::B, {0.0, 1.3}, {0.6, -4.0}}},
      {170, CenterCrossed{PlayerId::A}},
      {200, WallHit{{0.5, -1.8}, 3.2}},
      {230, RacketHit{PlayerId::A, {0.3, -1.5}, {-0.1, 6.0}}},
      {260, CenterCrossed{PlayerId::B}},
      {300, GoalScored{PlayerId::A, {0.1, 1.83}}},
      {300, Announcement{PlayerId::A, {2, 0}}},
  };
  const metrics::MatchStats s = metrics::accumulate_all(rally, {});
  const metrics::PlayerStats& a = s.of(PlayerId::A);
  const metrics::PlayerStats& b = s.of(PlayerId::B);
  auto expect = [&](const char* name, int got, int want) {
    v.require(got == want, std::string(name) + " " + std::to_string(got) + " != " + std::to_string(want));
  };
  expect("A hits", a.hits, 2);
  expect("A left hits", a.zone_hits[0], 1);
  expect("A middle hits", a.zone_hits[1], 0);
  expect("A right hits", a.zone_hits[2], 1);
  expect("A misses", a.misses, 1);
  expect("A right misses", a.zone_misses[2], 1);
  expect("A shots on target", a.shots_on_target, 1);
  expect("A rallies", a.rallies, 1);
  expect("A balls sent", a.balls_sent, 2);
  expect("A balls approaching", a.balls_approaching, 1);
  expect("A goals", a.goals, 1);
  expect("B hits", b.hits, 1);
  expect("B middle hits", b.zone_hits[1], 1);
  expect("B misses", b.misses, 1);
  expect("B middle misses", b.zone_misses[1], 1);
  expect("B shots on target", b.shots_on_target, 0);
  expect("B rallies", b.rallies, 1);
  expect("B balls sent", b.balls_sent, 1);
  expect("B balls approaching", b.balls_approaching, 2);
  expect("B goals", b.goals, 0);
  v.require(a.hit_rate() == 2.0 / 3.0 && b.hit_rate() == 0.5, "hit rates");

  const double hr = metrics::max_hr_percent(112.0, 60.0);
  v.require(std::abs(hr - 70.0) <= 1e-9, "max_hr_percent(112, 60) = " + fmt("%.12f", hr));
  const double cohort = metrics::max_hr_percent(112.15, 61.15);
  v.require(std::abs(cohort - 69.97) <= 1.0, "cohort " + fmt("%.2f", cohort));
  v.note("10-event rally matches");
  v.note("max_hr " + fmt("%.1f%%", hr));
  v.note("cohort " + fmt("%.2f%%", cohort));
  return v.done();
}

}  // namespace

int main() {
  const std::pair<const char*, Outcome (*)()> criteria[] = {
      {"study1-localization", study1},
      {"physics-constants", physics_constants},
      {"agent-probabilities", agent_probabilities},
      {"rules-properties", rules_suite},
      {"netcode", netcode},
      {"determinism", determinism},
      {"metrics", metrics_suite},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    const auto started = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    failed += o.passed ? 0 : 1;
    std::printf("%s %-20s %s [%.1fs]\n", o.passed ? "PASS" : "FAIL", name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
