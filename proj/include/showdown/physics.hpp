#pragma once

/// @file physics.hpp
/// @brief Fixed-timestep ball dynamics on the playing surface.
///
/// The ball lives in the table plane. Walls reflect with the table
/// restitution and no friction; rackets are line segments that reflect the
/// ball in their own moving frame. A trigger held while the ball touches a
/// racket switches the ball into holding, where it tracks an anchor in front
/// of the racket face instead of colliding.

#include <array>
#include <optional>
#include <stdexcept>
#include <vector>

#include "showdown/events.hpp"
#include "showdown/geometry.hpp"

namespace showdown::physics {

/// Raised when the world contains non-finite state. Never clamped away.
class IntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PhysicsConfig {
  double drag_per_s = 0.12;
  double racket_restitution = 0.9;
  double max_speed_mps = 11.11;
  /// Anchor distance from the racket face is ball radius plus this gap.
  double hold_gap_m = 0.01;
  double hold_follow_speed_mps = 3.0;
  double hold_contact_slop_m = 0.005;
  double hold_sustain_s = 1.0;
  double dead_speed_eps_mps = 0.1;
  double dead_window_s = 3.0;
  double racket_length_m = 0.30;
  /// When set, the racket mass limits the impulse it can deliver.
  bool mass_weighted_impact = false;

  [[nodiscard]] int dead_window_ticks() const noexcept;
  [[nodiscard]] int hold_sustain_ticks() const noexcept;
  void validate() const;

  friend bool operator==(const PhysicsConfig&, const PhysicsConfig&) = default;
};

struct BallState {
  Vec2 pos;
  Vec2 vel;
  std::optional<PlayerId> held_by;
  friend bool operator==(const BallState&, const BallState&) = default;
};

struct RacketState {
  /// Center of the racket blade.
  Vec2 tip;
  Vec2 face_normal{0.0, 1.0};
  Vec2 tip_vel;
  bool trigger_held = false;
  double mass = 8.0;
  friend bool operator==(const RacketState&, const RacketState&) = default;
};

/// Fixed-capacity ring of recent ball speeds.
class SpeedHistory {
 public:
  explicit SpeedHistory(int capacity = 180);

  void push(double speed);
  void clear() noexcept;
  [[nodiscard]] int capacity() const noexcept { return static_cast<int>(samples_.size()); }
  [[nodiscard]] int size() const noexcept { return count_; }
  [[nodiscard]] bool full() const noexcept { return count_ == capacity(); }
  /// Largest speed currently stored; 0 when empty.
  [[nodiscard]] double max() const noexcept;

  friend bool operator==(const SpeedHistory&, const SpeedHistory&) = default;

 private:
  std::vector<double> samples_;
  int next_ = 0;
  int count_ = 0;
};

struct World {
  TableGeometry table;
  PhysicsConfig config;
  BallState ball;
  std::array<RacketState, 2> rackets;
  /// False while the ball is parked (before a serve, after a goal or a dead ball).
  bool in_play = false;
  SpeedHistory speeds;
  std::array<int, 2> hold_ticks{};
  /// Sign of the last non-zero ball y, 0 right after a serve.
  int ball_side = 0;

  friend bool operator==(const World&, const World&) = default;
};

/// World with both rackets parked at their default lines and no ball in play.
World make_world(const TableGeometry& table, const PhysicsConfig& config);

/// Default parked racket for `player` (world frame).
RacketState default_racket(PlayerId player, const TableGeometry& table);

/// Distance from each end wall to the racket line used by the default pose.
inline constexpr double kRacketLineOffset = 0.20;

struct StepResult {
  World world;
  EventLog events;
};

/// Advance one fixed tick. `dt` must be exactly 1/60 s.
StepResult step(const World& world, double dt, Tick tick);

/// In-place variant used by the simulation loop; appends to `events`.
void step_in_place(World& world, double dt, Tick tick, EventLog& events);

/// Reflects `vel` off a wall with inward normal `inward_normal`. Grazing
/// (v.n == 0) is returned unchanged; receding velocity throws std::domain_error.
Vec2 reflect_wall(const Vec2& vel, const Vec2& inward_normal, double restitution);

/// Ball velocity after striking `racket`. Reflection happens in the racket's
/// moving frame, so both the face angle and the swing speed shape the result,
/// which is clamped to the configured speed ceiling.
Vec2 racket_impact(const Vec2& ball_vel, const RacketState& racket, double restitution,
                   const PhysicsConfig& config = {});

/// True when the ball surface touches the racket blade (within the hold slop).
bool in_contact(const BallState& ball, const RacketState& racket, const TableGeometry& table,
                const PhysicsConfig& config);

/// Anchor point the held ball converges to.
Vec2 hold_anchor(const RacketState& racket, const TableGeometry& table,
                 const PhysicsConfig& config);

/// One tick of the holding mechanic for `player`'s racket. Activates when the
/// trigger is held while in contact, follows the anchor at a capped speed,
/// releases with the racket velocity when the trigger drops. Without contact
/// this is a no-op.
BallState hold_update(const BallState& ball, const RacketState& racket, PlayerId player,
                      double dt, const TableGeometry& table, const PhysicsConfig& config);

/// Scorer when the ball center is at or beyond an end-wall plane inside the
/// pocket opening. The scorer is the player at the opposite end.
std::optional<PlayerId> detect_goal(const BallState& ball, const TableGeometry& table);

/// True iff the window is fully covered, the ball is not held and every
/// recorded speed is below `eps`.
bool detect_dead_ball(const SpeedHistory& history, bool held, double eps);

Vec2 clamp_speed(const Vec2& vel, double max_speed) noexcept;

enum class HapticStrength : std::uint8_t { Strong, Weak };
enum class HapticDuration : std::uint8_t { Short, Continuous };

struct HapticEvent {
  PlayerId player = PlayerId::A;
  double pulse_rate_hz = 0.0;
  HapticStrength strength = HapticStrength::Strong;
  HapticDuration duration = HapticDuration::Short;
  friend bool operator==(const HapticEvent&, const HapticEvent&) = default;
};

inline constexpr double kStrongPulseHz = 70.0;
inline constexpr double kWeakPulseHz = 30.0;

/// Controller vibration for a racket contact or a sustained hold.
std::optional<HapticEvent> haptic_for(const Event& event);

}  // namespace showdown::physics
