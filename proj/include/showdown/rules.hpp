#pragma once

/// @file rules.hpp
/// @brief Game and match state machine: serves, goals, pauses, dead balls.
///
/// Every transition function checks the current phase and throws RulesError
/// when the event cannot happen there, so no event is silently dropped.

#include <array>
#include <optional>
#include <random>
#include <stdexcept>
#include <variant>

#include "showdown/events.hpp"
#include "showdown/geometry.hpp"
#include "showdown/physics.hpp"

namespace showdown::rules {

class RulesError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct RulesConfig {
  int points_per_goal = 2;
  int points_to_win = 12;
  int serves_per_turn = 2;
  double goal_pause_s = 5.0;
  double serve_speed_mps = 2.0;
  int games_to_win = 2;

  [[nodiscard]] Tick goal_pause_ticks() const noexcept;
  void validate() const;

  friend bool operator==(const RulesConfig&, const RulesConfig&) = default;
};

struct Serving {
  friend bool operator==(const Serving&, const Serving&) = default;
};
struct Rally {
  friend bool operator==(const Rally&, const Rally&) = default;
};
struct GoalPause {
  Tick until = 0;
  friend bool operator==(const GoalPause&, const GoalPause&) = default;
};
struct GameOver {
  PlayerId winner = PlayerId::A;
  friend bool operator==(const GameOver&, const GameOver&) = default;
};

using Phase = std::variant<Serving, Rally, GoalPause, GameOver>;

PhaseTag tag_of(const Phase& phase) noexcept;

struct GameState {
  std::array<int, 2> score{};
  PlayerId server = PlayerId::A;
  int serves_remaining = 2;
  PlayerId last_server = PlayerId::A;
  Phase phase = Serving{};

  [[nodiscard]] int score_of(PlayerId p) const noexcept { return score[index_of(p)]; }
  friend bool operator==(const GameState&, const GameState&) = default;
};

GameState new_game(PlayerId opening_server, const RulesConfig& config = {});

struct ServeResult {
  GameState state;
  physics::BallState ball;
  EventLog events;
};

/// Spawns the ball at the table center rolling toward the server's end at a
/// seeded lateral target and consumes one serve of the turn.
ServeResult start_serve(const GameState& state, std::mt19937_64& rng, Tick now,
                        const TableGeometry& table, const RulesConfig& config = {});

struct GoalResult {
  GameState state;
  Announcement announcement;
  EventLog events;
};

/// Scores the goal, announces the new score and pauses (or ends the game).
/// The serve passes to the other player once the turn's serves are spent.
GoalResult on_goal(const GameState& state, PlayerId scorer, Tick now,
                   const RulesConfig& config = {});

struct DeadBallResult {
  GameState state;
  EventLog events;
};

/// Re-serve by the last server with the consumed serve restored.
DeadBallResult on_dead_ball(const GameState& state, Tick now);

/// Ends an expired goal pause. Returns the phase change, if any.
std::optional<Event> advance(GameState& state, Tick now);

struct MatchState {
  std::array<int, 2> games_won{};
  GameState current_game;
  std::optional<PlayerId> finished;
  PlayerId opening_server = PlayerId::A;
  int games_played = 0;

  friend bool operator==(const MatchState&, const MatchState&) = default;
};

/// Fresh match with the opening server drawn by a seeded coin flip.
MatchState new_match(std::mt19937_64& rng, const RulesConfig& config = {});

struct MatchResult {
  MatchState match;
  EventLog events;
};

/// Records a finished game. Starts the next game or finishes the match.
/// Every game opens with the match's opening server.
MatchResult on_game_end(const MatchState& match, PlayerId winner, Tick now,
                        const RulesConfig& config = {});

}  // namespace showdown::rules
