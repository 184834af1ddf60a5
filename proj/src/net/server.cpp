#include "showdown/net/server.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "showdown/seed.hpp"

namespace showdown::net {
namespace {

bool finite_input(const ClientInput& in) {
  return in.racket_tip.finite() && in.face_normal.finite() && in.tip_vel.finite();
}

}  // namespace

std::string_view to_string(Mode m) noexcept { return m == Mode::Pva ? "pva" : "pvp"; }

Mode mode_from_string(std::string_view s) {
  if (s == "pva") return Mode::Pva;
  if (s == "pvp") return Mode::Pvp;
  throw std::invalid_argument("unknown mode '" + std::string(s) + "'");
}

void ServerConfig::validate() const {
  table.validate();
  physics.validate();
  cues.validate();
  rules.validate();
  agent.validate();
}

GameServer::GameServer(const ServerConfig& config)
    : config_(config),
      world_(physics::make_world(config.table, config.physics)),
      agent_(agent::make_agent(PlayerId::B, derive_seed(config.seed, SeedStream::Agent))),
      rules_rng_(derive_seed(config.seed, SeedStream::Rules)) {
  config_.validate();
  match_ = rules::new_match(rules_rng_, config_.rules);
  const HeadPose head = default_head(config_.table);
  listeners_[0] = {PlayerId::A, head};
  listeners_[1] = {PlayerId::B, head};
}

bool GameServer::accepts_inputs(PlayerId player) const noexcept {
  return config_.mode == Mode::Pvp || player == PlayerId::A;
}

void GameServer::set_racket(PlayerId player, const physics::RacketState& racket) {
  world_.rackets[index_of(player)] = racket;
}

void GameServer::apply_input(PlayerId player, const ClientInput& in) {
  const TableGeometry& t = config_.table;
  const Vec2 own_tip{std::clamp(in.racket_tip.x, -t.half_width(), t.half_width()),
                     std::clamp(in.racket_tip.y, -t.half_length(), 0.0)};
  physics::RacketState& r = world_.rackets[index_of(player)];
  r.tip = to_player_frame(own_tip, player);
  if (in.face_normal.length() > 1e-9) {
    r.face_normal = to_player_frame(in.face_normal.normalized(), player);
  }
  r.tip_vel = to_player_frame(in.tip_vel, player);
  r.trigger_held = in.trigger_held;
}

void GameServer::run_rules_timers(EventLog& events) {
  rules::GameState& game = match_.current_game;
  if (auto e = rules::advance(game, now_)) events.push_back(*e);

  if (game_over_at_ && now_ >= *game_over_at_ + config_.game_over_pause_ticks) {
    const auto* over = std::get_if<rules::GameOver>(&game.phase);
    auto r = rules::on_game_end(match_, over->winner, now_, config_.rules);
    match_ = std::move(r.match);
    events.insert(events.end(), r.events.begin(), r.events.end());
    game_over_at_.reset();
  }

  if (!finished() && std::holds_alternative<rules::Serving>(match_.current_game.phase)) {
    auto s = rules::start_serve(match_.current_game, rules_rng_, now_, config_.table,
                                config_.rules);
    match_.current_game = s.state;
    world_.ball = s.ball;
    world_.in_play = true;
    world_.speeds.clear();
    world_.hold_ticks = {};
    world_.ball_side = 0;
    events.insert(events.end(), s.events.begin(), s.events.end());
  }
}

void GameServer::route_events(const EventLog& physics_events, EventLog& events) {
  for (const Event& e : physics_events) {
    events.push_back(e);
    if (const auto* goal = std::get_if<GoalScored>(&e.payload)) {
      auto r = rules::on_goal(match_.current_game, goal->scorer, now_, config_.rules);
      match_.current_game = r.state;
      events.insert(events.end(), r.events.begin(), r.events.end());
      if (std::holds_alternative<rules::GameOver>(r.state.phase)) game_over_at_ = now_;
    } else if (std::holds_alternative<BallDead>(e.payload)) {
      auto r = rules::on_dead_ball(match_.current_game, now_);
      match_.current_game = r.state;
      events.insert(events.end(), r.events.begin(), r.events.end());
    }
  }
}

TickResult GameServer::tick(std::span<const InputEnvelope> inputs, bool with_snapshots) {
  ++now_;
  TickResult out;
  out.tick = now_;

  std::array<const ClientInput*, 2> newest{};
  for (const InputEnvelope& env : inputs) {
    if (env.slot < 0 || env.slot > 1) {
      ++counters_.unknown_player;
      continue;
    }
    const auto player = static_cast<PlayerId>(env.slot);
    if (!accepts_inputs(player)) {
      ++counters_.unknown_player;
      continue;
    }
    if (!finite_input(env.input)) {
      ++counters_.invalid;
      continue;
    }
    const std::size_t i = index_of(player);
    if (seen_input_[i] && env.input.seq <= last_seq_[i]) {
      ++counters_.stale;
      continue;
    }
    if (newest[i] != nullptr) {
      ++counters_.stale;
      if (env.input.seq < newest[i]->seq) continue;
    }
    newest[i] = &env.input;
  }
  for (std::size_t i = 0; i < 2; ++i) {
    if (newest[i] == nullptr) continue;
    apply_input(static_cast<PlayerId>(i), *newest[i]);
    last_seq_[i] = newest[i]->seq;
    seen_input_[i] = true;
    ++counters_.applied;
  }

  if (finished()) return out;

  run_rules_timers(out.events);
  for (const Event& e : out.events) agent::observe(agent_, e, config_.agent);

  if (config_.mode == Mode::Pva) {
    world_.rackets[1] = agent::agent_step(agent_, world_.ball, kTickSeconds, config_.table,
                                          config_.physics, config_.agent);
  }

  EventLog physics_events;
  physics::step_in_place(world_, kTickSeconds, now_, physics_events);
  const std::size_t before = out.events.size();
  route_events(physics_events, out.events);
  for (std::size_t k = before; k < out.events.size(); ++k) {
    agent::observe(agent_, out.events[k], config_.agent);
  }

  if (with_snapshots) {
    out.snapshots[0] = snapshot_for(PlayerId::A, out.events);
    out.snapshots[1] = snapshot_for(PlayerId::B, out.events);
  }
  return out;
}

Snapshot GameServer::snapshot_for(PlayerId player, const EventLog& events) const {
  Snapshot s;
  s.tick = now_;
  s.player = player;
  s.ball_pos = to_player_frame(world_.ball.pos, player);
  s.ball_vel = to_player_frame(world_.ball.vel, player);
  s.held_by = world_.ball.held_by;
  s.phase = rules::tag_of(match_.current_game.phase);
  s.scores = match_.current_game.score;
  s.games = match_.games_won;

  audio::BallTrack track;
  if (world_.in_play) track[now_] = {world_.ball.pos, world_.ball.vel};
  else track[now_] = {world_.ball.pos, {}};
  for (const auto& f : audio::render_listener_stream(events, track, listeners_[index_of(player)],
                                                     config_.cues)) {
    s.cues.push_back(f.frame);
  }
  s.events.reserve(events.size());
  for (const Event& e : events) {
    s.events.push_back(in_player_frame(e, player));
    if (auto h = physics::haptic_for(e); h && h->player == player) s.haptics.push_back(*h);
  }
  return s;
}

}  // namespace showdown::net
