#pragma once

/// @file agent.hpp
/// @brief Computer opponent for player-versus-agent play.
///
/// The agent follows the ball along its racket line, decides once per
/// approaching ball whether to return it, and realizes a declined hit as a
/// positional miss. Each hit it lands makes the next one less likely; after
/// three hits it stops aiming and guards one edge of its goal.

#include <array>
#include <cstdint>
#include <optional>
#include <random>

#include "showdown/events.hpp"
#include "showdown/geometry.hpp"
#include "showdown/physics.hpp"

namespace showdown::agent {

struct AgentConfig {
  /// Hit probability after 0, 1 and 2 consecutive hits.
  std::array<double, 3> hit_probability{1.0, 0.7, 0.4};
  /// Balls strictly faster than this are never blocked.
  double block_threshold_mps = 11.0;
  double max_lateral_speed_mps = 1.5;
  double shot_speed_min_mps = 6.0;
  double shot_speed_max_mps = 11.0;
  /// Return shots aim at x ~ U(-spread, spread) on the opponent's end line.
  double aim_spread_m = 0.12;
  /// Extra clearance beyond blade half-length plus ball radius when dodging.
  double miss_margin_m = 0.02;
  /// Also reset the hit counter whenever the opponent touches the ball.
  bool reset_on_opponent_contact = false;

  void validate() const;
  friend bool operator==(const AgentConfig&, const AgentConfig&) = default;
};

enum class Edge : std::uint8_t { Left, Right };

/// Plan for the ball currently approaching the agent.
struct Plan {
  bool hit = false;
  double shot_speed_mps = 0.0;
  double aim_x = 0.0;
  friend bool operator==(const Plan&, const Plan&) = default;
};

struct AgentState {
  PlayerId self = PlayerId::B;
  int consecutive_hits = 0;
  std::mt19937_64 rng;
  /// Own-frame x of the racket center.
  double lateral_pos = 0.0;
  std::optional<Edge> defend_edge;
  std::optional<Plan> plan;

  friend bool operator==(const AgentState&, const AgentState&) = default;
};

AgentState make_agent(PlayerId self, std::uint64_t seed);

/// Draws whether to return a ball arriving at `incoming_speed` m/s. Never
/// draws above the threshold or once the agent has hit three times in a row.
bool decide_hit(AgentState& state, double incoming_speed, const AgentConfig& config = {});

/// Updates the hit counter and defense stance from one world event.
void observe(AgentState& state, const Event& event, const AgentConfig& config = {});

/// Where and how a ball on its current course meets the agent's racket line,
/// in the agent's own frame.
struct Intercept {
  Vec2 point;
  Vec2 velocity;
  double time_s = 0.0;
};

/// Predicts the crossing of the racket contact line, folding side-wall
/// bounces and drag. Empty when the ball is not approaching or stops short.
std::optional<Intercept> predict_intercept(const physics::BallState& own_ball,
                                           const TableGeometry& table,
                                           const physics::PhysicsConfig& physics);

/// Racket face and swing velocity that turn `incoming` into `outgoing`.
physics::RacketState aim_racket(const Vec2& contact, const Vec2& incoming, const Vec2& outgoing,
                                const TableGeometry& table,
                                const physics::PhysicsConfig& physics);

/// One tick of agent control. `ball` is world-frame; the returned racket is
/// world-frame too. `dt` must be one tick.
physics::RacketState agent_step(AgentState& state, const physics::BallState& ball, double dt,
                                const TableGeometry& table,
                                const physics::PhysicsConfig& physics,
                                const AgentConfig& config = {});

}  // namespace showdown::agent
