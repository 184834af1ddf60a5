#pragma once

/// @file server.hpp
/// @brief Authoritative match simulation: inputs in, world-frame events and
/// per-player snapshots out, one call per 60 Hz tick.

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "showdown/agent.hpp"
#include "showdown/audio.hpp"
#include "showdown/events.hpp"
#include "showdown/net/protocol.hpp"
#include "showdown/physics.hpp"
#include "showdown/rules.hpp"

namespace showdown::net {

enum class Mode : std::uint8_t {
  /// Human (or bot) as A against the built-in agent as B.
  Pva,
  /// Both slots driven by client inputs.
  Pvp,
};

std::string_view to_string(Mode m) noexcept;
Mode mode_from_string(std::string_view s);

struct ServerConfig {
  TableGeometry table;
  physics::PhysicsConfig physics;
  audio::CueConfig cues;
  rules::RulesConfig rules;
  agent::AgentConfig agent;
  Mode mode = Mode::Pva;
  std::uint64_t seed = 1;
  /// Ticks between GameOver and the start of the next game.
  Tick game_over_pause_ticks = 300;

  void validate() const;
};

/// An input as received, tagged with the sender's slot index.
struct InputEnvelope {
  int slot = 0;
  ClientInput input;
};

struct InputCounters {
  std::uint64_t applied = 0;
  std::uint64_t stale = 0;
  std::uint64_t unknown_player = 0;
  std::uint64_t invalid = 0;
  friend bool operator==(const InputCounters&, const InputCounters&) = default;
};

struct TickResult {
  Tick tick = 0;
  /// World-frame events in emission order.
  EventLog events;
  /// Per-player views; empty unless requested.
  std::array<std::optional<Snapshot>, 2> snapshots;
};

class GameServer {
 public:
  explicit GameServer(const ServerConfig& config);

  /// Advances one tick: apply the newest valid input per player, run rule
  /// timers and serves, move the agent, step physics, feed the resulting
  /// events to the rules, then build snapshots when asked.
  TickResult tick(std::span<const InputEnvelope> inputs, bool with_snapshots = true);

  /// Overrides a racket directly in the world frame until the next input for
  /// that player arrives. Used by in-process bots and log replay.
  void set_racket(PlayerId player, const physics::RacketState& racket);

  /// True if `player`'s racket is driven by client inputs.
  [[nodiscard]] bool accepts_inputs(PlayerId player) const noexcept;

  [[nodiscard]] const physics::World& world() const noexcept { return world_; }
  [[nodiscard]] const rules::MatchState& match() const noexcept { return match_; }
  [[nodiscard]] const agent::AgentState& agent() const noexcept { return agent_; }
  [[nodiscard]] const ServerConfig& config() const noexcept { return config_; }
  [[nodiscard]] const InputCounters& counters() const noexcept { return counters_; }
  /// Tick number of the most recent tick() call; 0 before the first.
  [[nodiscard]] Tick now() const noexcept { return now_; }
  [[nodiscard]] bool finished() const noexcept { return match_.finished.has_value(); }

  /// Snapshot of the current state for `player` with the given events.
  [[nodiscard]] Snapshot snapshot_for(PlayerId player, const EventLog& events) const;

 private:
  void apply_input(PlayerId player, const ClientInput& input);
  void run_rules_timers(EventLog& events);
  void route_events(const EventLog& physics_events, EventLog& events);

  ServerConfig config_;
  physics::World world_;
  rules::MatchState match_;
  agent::AgentState agent_;
  std::mt19937_64 rules_rng_;
  std::array<std::uint32_t, 2> last_seq_{};
  std::array<bool, 2> seen_input_{};
  InputCounters counters_;
  Tick now_ = 0;
  std::optional<Tick> game_over_at_;
  audio::Listener listeners_[2];
};

}  // namespace showdown::net
