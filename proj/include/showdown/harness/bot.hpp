#pragma once

/// @file bot.hpp
/// @brief Scripted player that drives a racket through the same inputs a
/// client would send.

#include <deque>
#include <optional>
#include <random>

#include "showdown/harness/config.hpp"
#include "showdown/net/protocol.hpp"

namespace showdown::harness {

/// What the bot knows about the ball, in its own frame.
struct Observation {
  Tick tick = 0;
  Vec2 ball_pos;
  Vec2 ball_vel;
  std::optional<PlayerId> held_by;
};

Observation observe_world(const physics::World& world, PlayerId self, Tick tick);
Observation observe_snapshot(const net::Snapshot& snapshot);

class ScriptedBot {
 public:
  ScriptedBot(PlayerId self, const BotParams& params, std::uint64_t seed,
              const TableGeometry& table, const physics::PhysicsConfig& physics);

  /// Called once per tick with the latest observation. Decides once per
  /// approaching ball whether to go for it, then either lines up a shot at
  /// the opponent's goal or steps out of the ball's way.
  net::ClientInput step(const Observation& latest);

  [[nodiscard]] PlayerId self() const noexcept { return self_; }

 private:
  struct Plan {
    bool hit = false;
    double aim_x = 0.0;
  };

  PlayerId self_;
  BotParams params_;
  std::mt19937_64 rng_;
  TableGeometry table_;
  physics::PhysicsConfig physics_;
  std::deque<Observation> seen_;
  std::optional<Plan> plan_;
  bool swung_ = false;
  double lateral_pos_ = 0.0;
  std::uint32_t seq_ = 0;
};

}  // namespace showdown::harness
