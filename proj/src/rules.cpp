#include "showdown/rules.hpp"

#include <cmath>
#include <string>

namespace showdown::rules {
namespace {

void require_phase(const GameState& state, PhaseTag expected, const char* what) {
  const PhaseTag actual = tag_of(state.phase);
  if (actual != expected) {
    throw RulesError(std::string(what) + " not allowed in phase " +
                     std::string(to_string(actual)));
  }
}

Event phase_event(Tick now, const Phase& phase) { return {now, PhaseChanged{tag_of(phase)}}; }

}  // namespace

Tick RulesConfig::goal_pause_ticks() const noexcept {
  return static_cast<Tick>(std::lround(goal_pause_s * kTickRate));
}

void RulesConfig::validate() const {
  if (points_per_goal <= 0) throw std::invalid_argument("points_per_goal must be positive");
  if (points_to_win <= 0) throw std::invalid_argument("points_to_win must be positive");
  if (serves_per_turn <= 0) throw std::invalid_argument("serves_per_turn must be positive");
  if (!(goal_pause_s >= 0.0)) throw std::invalid_argument("goal_pause_s must be non-negative");
  if (!(serve_speed_mps > 0.0)) throw std::invalid_argument("serve_speed_mps must be positive");
  if (games_to_win <= 0) throw std::invalid_argument("games_to_win must be positive");
}

PhaseTag tag_of(const Phase& phase) noexcept {
  switch (phase.index()) {
    case 0: return PhaseTag::Serving;
    case 1: return PhaseTag::Rally;
    case 2: return PhaseTag::GoalPause;
    default: return PhaseTag::GameOver;
  }
}

GameState new_game(PlayerId opening_server, const RulesConfig& config) {
  GameState g;
  g.server = opening_server;
  g.last_server = opening_server;
  g.serves_remaining = config.serves_per_turn;
  return g;
}

ServeResult start_serve(const GameState& state, std::mt19937_64& rng, Tick now,
                        const TableGeometry& table, const RulesConfig& config) {
  require_phase(state, PhaseTag::Serving, "serve");
  if (state.serves_remaining <= 0) throw RulesError("no serves remaining in turn");

  std::uniform_real_distribution<double> lateral(-table.width_m / 4.0, table.width_m / 4.0);
  const double target_x = lateral(rng);
  const double end_y = state.server == PlayerId::A ? -table.half_length() : table.half_length();
  const Vec2 vel = Vec2{target_x, end_y}.normalized() * config.serve_speed_mps;

  ServeResult r{state, physics::BallState{{0.0, 0.0}, vel, std::nullopt}, {}};
  r.state.last_server = state.server;
  r.state.serves_remaining -= 1;
  r.state.phase = Rally{};
  r.events.push_back({now, ServeStarted{state.server, vel}});
  r.events.push_back(phase_event(now, r.state.phase));
  return r;
}

GoalResult on_goal(const GameState& state, PlayerId scorer, Tick now, const RulesConfig& config) {
  require_phase(state, PhaseTag::Rally, "goal");
  GoalResult r{state, {}, {}};
  GameState& g = r.state;
  g.score[index_of(scorer)] += config.points_per_goal;
  r.announcement = Announcement{scorer, g.score};
  r.events.push_back({now, r.announcement});

  if (g.serves_remaining == 0) {
    g.server = opponent(g.last_server);
    g.serves_remaining = config.serves_per_turn;
  }

  if (g.score_of(scorer) >= config.points_to_win) {
    g.phase = GameOver{scorer};
    r.events.push_back(phase_event(now, g.phase));
    r.events.push_back({now, GameEnded{scorer, g.score}});
  } else {
    g.phase = GoalPause{now + config.goal_pause_ticks()};
    r.events.push_back(phase_event(now, g.phase));
  }
  return r;
}

DeadBallResult on_dead_ball(const GameState& state, Tick now) {
  require_phase(state, PhaseTag::Rally, "dead ball");
  DeadBallResult r{state, {}};
  r.state.server = state.last_server;
  r.state.serves_remaining += 1;
  r.state.phase = Serving{};
  r.events.push_back(phase_event(now, r.state.phase));
  return r;
}

std::optional<Event> advance(GameState& state, Tick now) {
  const auto* pause = std::get_if<GoalPause>(&state.phase);
  if (pause == nullptr || now < pause->until) return std::nullopt;
  state.phase = Serving{};
  return phase_event(now, state.phase);
}

MatchState new_match(std::mt19937_64& rng, const RulesConfig& config) {
  std::bernoulli_distribution coin(0.5);
  MatchState m;
  m.opening_server = coin(rng) ? PlayerId::A : PlayerId::B;
  m.current_game = new_game(m.opening_server, config);
  return m;
}

MatchResult on_game_end(const MatchState& match, PlayerId winner, Tick now,
                        const RulesConfig& config) {
  if (match.finished) throw RulesError("match already finished");
  const auto* over = std::get_if<GameOver>(&match.current_game.phase);
  if (over == nullptr) throw RulesError("game is not over");
  if (over->winner != winner) throw RulesError("winner does not match the finished game");

  MatchResult r{match, {}};
  MatchState& m = r.match;
  m.games_won[index_of(winner)] += 1;
  m.games_played += 1;
  if (m.games_won[index_of(winner)] >= config.games_to_win) {
    m.finished = winner;
    r.events.push_back({now, MatchEnded{winner, m.games_won}});
  } else {
    m.current_game = new_game(m.opening_server, config);
    r.events.push_back(phase_event(now, m.current_game.phase));
  }
  return r;
}

}  // namespace showdown::rules
