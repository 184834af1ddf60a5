#include "showdown/physics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace showdown::physics {
namespace {

constexpr double kNoHit = std::numeric_limits<double>::infinity();

enum Surface : int {
  kLeftWall = 0,
  kRightWall,
  kEndWallA,
  kEndWallB,
  kRacketA,
  kRacketB,
  kSurfaceCount
};

void check_finite(const World& w) {
  const bool ok = w.ball.pos.finite() && w.ball.vel.finite() &&
                  std::all_of(w.rackets.begin(), w.rackets.end(), [](const RacketState& r) {
                    return r.tip.finite() && r.face_normal.finite() && r.tip_vel.finite() &&
                           std::isfinite(r.mass);
                  });
  if (!ok) throw IntegrityError("non-finite world state");
}

Vec2 unit_normal(const RacketState& racket) {
  const double len = racket.face_normal.length();
  if (!(len > 1e-9)) throw std::invalid_argument("degenerate racket face normal");
  return racket.face_normal / len;
}

/// Time until the ball (moving with its own velocity against a static blade)
/// touches `racket`, or kNoHit. A ball already touching a blade that moves into
/// it reports 0.
double racket_time_of_impact(const BallState& ball, const RacketState& racket, double horizon,
                             const TableGeometry& table, const PhysicsConfig& cfg) {
  const Vec2 n = unit_normal(racket);
  const Vec2 t = n.perp();
  const double r = table.ball_radius_m;
  const double reach = 0.5 * cfg.racket_length_m + r;
  const Vec2 rel = ball.pos - racket.tip;
  const double dn = rel.dot(n);
  const Vec2 n_eff = dn >= 0.0 ? n : -n;
  const double dist = std::abs(dn);
  const double approach = (ball.vel - racket.tip_vel).dot(n_eff);
  if (approach >= 0.0) return kNoHit;

  if (dist <= r) {
    return std::abs(rel.dot(t)) < reach ? 0.0 : kNoHit;
  }
  const double vn = ball.vel.dot(n_eff);
  if (vn >= 0.0) return kNoHit;
  const double toi = (dist - r) / -vn;
  if (toi > horizon) return kNoHit;
  const double lateral = (rel + ball.vel * toi).dot(t);
  return std::abs(lateral) < reach ? toi : kNoHit;
}

RacketState facing_ball(const RacketState& racket, const Vec2& ball_pos) {
  RacketState out = racket;
  out.face_normal = unit_normal(racket);
  if ((ball_pos - racket.tip).dot(out.face_normal) < 0.0) out.face_normal = -out.face_normal;
  return out;
}

Vec2 clamp_live(const Vec2& p, const TableGeometry& table) {
  const double xr = table.half_width() - table.ball_radius_m;
  const double yr = table.half_length() - table.ball_radius_m;
  return {std::clamp(p.x, -xr, xr), std::clamp(p.y, -yr, yr)};
}

void follow_anchor(BallState& ball, const RacketState& racket, double dt,
                   const TableGeometry& table, const PhysicsConfig& cfg) {
  const Vec2 anchor = clamp_live(hold_anchor(racket, table, cfg), table);
  const Vec2 before = ball.pos;
  const Vec2 delta = anchor - ball.pos;
  const double reach = cfg.hold_follow_speed_mps * dt;
  const double gap = delta.length();
  ball.pos = gap <= reach ? anchor : ball.pos + delta * (reach / gap);
  ball.vel = (ball.pos - before) / dt;
}

void track_center_line(World& w, EventLog& events, Tick tick) {
  const double y = w.ball.pos.y;
  const int side = y > 0.0 ? 1 : (y < 0.0 ? -1 : 0);
  if (side == 0) return;
  if (w.ball_side != 0 && side != w.ball_side) {
    events.push_back({tick, CenterCrossed{side > 0 ? PlayerId::B : PlayerId::A}});
  }
  w.ball_side = side;
}

void start_hold(World& w, PlayerId player, EventLog& events, Tick tick) {
  w.ball.held_by = player;
  w.ball.vel = {};
  w.hold_ticks[index_of(player)] = 0;
  events.push_back({tick, HoldStarted{player}});
}

void advance_hold(World& w, PlayerId player, double dt, EventLog& events, Tick tick) {
  const auto i = index_of(player);
  follow_anchor(w.ball, w.rackets[i], dt, w.table, w.config);
  if (++w.hold_ticks[i] == w.config.hold_sustain_ticks()) {
    events.push_back({tick, HoldSustained{player}});
  }
}

}  // namespace

int PhysicsConfig::dead_window_ticks() const noexcept {
  return std::max(1, static_cast<int>(std::lround(dead_window_s * kTickRate)));
}

int PhysicsConfig::hold_sustain_ticks() const noexcept {
  return std::max(1, static_cast<int>(std::lround(hold_sustain_s * kTickRate)));
}

void PhysicsConfig::validate() const {
  if (!(drag_per_s >= 0.0) || !(drag_per_s * kTickSeconds < 1.0)) {
    throw std::invalid_argument("drag must be non-negative and below the tick rate");
  }
  if (!(racket_restitution > 0.0) || !(racket_restitution <= 1.0)) {
    throw std::invalid_argument("racket restitution must lie in (0, 1]");
  }
  if (!(max_speed_mps > 0.0) || !(hold_follow_speed_mps > 0.0) || !(racket_length_m > 0.0)) {
    throw std::invalid_argument("speeds and racket length must be positive");
  }
  if (!(dead_speed_eps_mps > 0.0) || !(dead_window_s > 0.0) || !(hold_gap_m >= 0.0)) {
    throw std::invalid_argument("dead-ball thresholds must be positive");
  }
}

SpeedHistory::SpeedHistory(int capacity) : samples_(static_cast<std::size_t>(std::max(1, capacity))) {}

void SpeedHistory::push(double speed) {
  samples_[static_cast<std::size_t>(next_)] = speed;
  next_ = (next_ + 1) % capacity();
  count_ = std::min(count_ + 1, capacity());
}

void SpeedHistory::clear() noexcept {
  next_ = 0;
  count_ = 0;
}

double SpeedHistory::max() const noexcept {
  double m = 0.0;
  for (int i = 0; i < count_; ++i) {
    const int idx = (next_ - 1 - i + capacity()) % capacity();
    m = std::max(m, samples_[static_cast<std::size_t>(idx)]);
  }
  return m;
}

RacketState default_racket(PlayerId player, const TableGeometry& table) {
  const Vec2 tip{0.0, -table.half_length() + kRacketLineOffset};
  RacketState r;
  r.tip = to_player_frame(tip, player);
  r.face_normal = to_player_frame(Vec2{0.0, 1.0}, player);
  return r;
}

World make_world(const TableGeometry& table, const PhysicsConfig& config) {
  table.validate();
  config.validate();
  World w;
  w.table = table;
  w.config = config;
  w.rackets = {default_racket(PlayerId::A, table), default_racket(PlayerId::B, table)};
  w.speeds = SpeedHistory(config.dead_window_ticks());
  return w;
}

Vec2 clamp_speed(const Vec2& vel, double max_speed) noexcept {
  const double s = vel.length();
  if (s <= max_speed || s == 0.0) return vel;
  // Rounding can leave the scaled length an ulp or two above the cap.
  double k = max_speed / s;
  Vec2 out = vel * k;
  while (out.length() > max_speed) {
    k = std::nextafter(k, 0.0);
    out = vel * k;
  }
  return out;
}

Vec2 reflect_wall(const Vec2& vel, const Vec2& inward_normal, double restitution) {
  const double vn = vel.dot(inward_normal);
  if (vn > 0.0) throw std::domain_error("velocity is receding from the wall");
  return vel - inward_normal * ((1.0 + restitution) * vn);
}

Vec2 racket_impact(const Vec2& ball_vel, const RacketState& racket, double restitution,
                   const PhysicsConfig& config) {
  const Vec2 n = unit_normal(racket);
  const Vec2 rel = ball_vel - racket.tip_vel;
  const double rn = rel.dot(n);
  if (!(rn < 0.0)) throw std::domain_error("ball is not approaching the racket face");
  double share = 1.0;
  if (config.mass_weighted_impact) share = racket.mass / (racket.mass + 1.0);
  const Vec2 out = ball_vel - n * ((1.0 + restitution) * rn * share);
  return clamp_speed(out, config.max_speed_mps);
}

bool in_contact(const BallState& ball, const RacketState& racket, const TableGeometry& table,
                const PhysicsConfig& config) {
  const Vec2 n = unit_normal(racket);
  const Vec2 t = n.perp();
  const double h = 0.5 * config.racket_length_m;
  const Vec2 rel = ball.pos - racket.tip;
  const double along = std::clamp(rel.dot(t), -h, h);
  const Vec2 closest = racket.tip + t * along;
  return (ball.pos - closest).length() <= table.ball_radius_m + config.hold_contact_slop_m;
}

Vec2 hold_anchor(const RacketState& racket, const TableGeometry& table,
                 const PhysicsConfig& config) {
  return racket.tip + unit_normal(racket) * (table.ball_radius_m + config.hold_gap_m);
}

BallState hold_update(const BallState& ball, const RacketState& racket, PlayerId player,
                      double dt, const TableGeometry& table, const PhysicsConfig& config) {
  BallState out = ball;
  if (ball.held_by) {
    if (*ball.held_by != player) return out;
    if (!racket.trigger_held) {
      out.held_by.reset();
      out.vel = clamp_speed(racket.tip_vel, config.max_speed_mps);
      return out;
    }
  } else {
    if (!racket.trigger_held || !in_contact(ball, racket, table, config)) return out;
    out.held_by = player;
  }
  follow_anchor(out, racket, dt, table, config);
  return out;
}

std::optional<PlayerId> detect_goal(const BallState& ball, const TableGeometry& table) {
  if (std::abs(ball.pos.x) > table.goal_half_width()) return std::nullopt;
  if (ball.pos.y >= table.half_length()) return PlayerId::A;
  if (ball.pos.y <= -table.half_length()) return PlayerId::B;
  return std::nullopt;
}

bool detect_dead_ball(const SpeedHistory& history, bool held, double eps) {
  if (held || !history.full()) return false;
  return history.max() < eps;
}

StepResult step(const World& world, double dt, Tick tick) {
  StepResult result{world, {}};
  step_in_place(result.world, dt, tick, result.events);
  return result;
}

void step_in_place(World& w, double dt, Tick tick, EventLog& events) {
  if (dt != kTickSeconds) throw std::invalid_argument("physics runs at a fixed 1/60 s tick");
  check_finite(w);
  if (!w.in_play) return;

  const TableGeometry& table = w.table;
  const PhysicsConfig& cfg = w.config;
  BallState& ball = w.ball;

  if (ball.held_by) {
    const PlayerId holder = *ball.held_by;
    const RacketState& racket = w.rackets[index_of(holder)];
    if (racket.trigger_held) {
      advance_hold(w, holder, dt, events, tick);
      w.speeds.push(ball.vel.length());
      track_center_line(w, events, tick);
      return;
    }
    ball = hold_update(ball, racket, holder, dt, table, cfg);
    w.hold_ticks[index_of(holder)] = 0;
    events.push_back({tick, HoldReleased{holder, ball.vel}});
  } else {
    for (PlayerId p : {PlayerId::A, PlayerId::B}) {
      const RacketState& racket = w.rackets[index_of(p)];
      if (racket.trigger_held && in_contact(ball, racket, table, cfg)) {
        start_hold(w, p, events, tick);
        advance_hold(w, p, dt, events, tick);
        w.speeds.push(ball.vel.length());
        track_center_line(w, events, tick);
        return;
      }
    }
  }

  ball.vel *= (1.0 - cfg.drag_per_s * dt);
  ball.vel = clamp_speed(ball.vel, cfg.max_speed_mps);

  const double r = table.ball_radius_m;
  const double x_contact = table.half_width() - r;
  const double y_contact = table.half_length() - r;
  std::array<bool, kSurfaceCount> used{};
  double remaining = dt;

  for (int pass = 0; pass < kSurfaceCount; ++pass) {
    std::array<double, kSurfaceCount> toi;
    toi.fill(kNoHit);
    if (ball.vel.x < 0.0) toi[kLeftWall] = std::max(0.0, (-x_contact - ball.pos.x) / ball.vel.x);
    if (ball.vel.x > 0.0) toi[kRightWall] = std::max(0.0, (x_contact - ball.pos.x) / ball.vel.x);
    if (ball.vel.y < 0.0) toi[kEndWallA] = std::max(0.0, (-y_contact - ball.pos.y) / ball.vel.y);
    if (ball.vel.y > 0.0) toi[kEndWallB] = std::max(0.0, (y_contact - ball.pos.y) / ball.vel.y);
    toi[kRacketA] = racket_time_of_impact(ball, w.rackets[0], remaining, table, cfg);
    toi[kRacketB] = racket_time_of_impact(ball, w.rackets[1], remaining, table, cfg);

    int hit = -1;
    for (int s = 0; s < kSurfaceCount; ++s) {
      if (used[static_cast<std::size_t>(s)] || toi[static_cast<std::size_t>(s)] > remaining) continue;
      if (hit < 0 || toi[static_cast<std::size_t>(s)] < toi[static_cast<std::size_t>(hit)]) hit = s;
    }
    if (hit < 0) break;
    used[static_cast<std::size_t>(hit)] = true;
    const double t_hit = toi[static_cast<std::size_t>(hit)];
    ball.pos += ball.vel * t_hit;
    remaining -= t_hit;
    const double speed = ball.vel.length();

    switch (hit) {
      case kLeftWall:
      case kRightWall: {
        const Vec2 n{hit == kLeftWall ? 1.0 : -1.0, 0.0};
        ball.pos.x = -n.x * x_contact;
        ball.vel = reflect_wall(ball.vel, n, table.wall_restitution);
        events.push_back({tick, WallHit{ball.pos, speed}});
        break;
      }
      case kEndWallA:
      case kEndWallB: {
        const double sign = hit == kEndWallB ? 1.0 : -1.0;
        ball.pos.y = sign * y_contact;
        // Where the center would cross the end plane on its current line.
        const Vec2 on_plane{ball.pos.x + ball.vel.x * (r / std::abs(ball.vel.y)),
                            sign * table.half_length()};
        if (const auto scorer = detect_goal(BallState{on_plane, {}, {}}, table)) {
          ball.pos = on_plane;
          ball.vel = {};
          w.in_play = false;
          w.speeds.clear();
          events.push_back({tick, GoalScored{*scorer, on_plane}});
          return;
        }
        ball.vel = reflect_wall(ball.vel, Vec2{0.0, -sign}, table.wall_restitution);
        events.push_back({tick, WallHit{ball.pos, speed}});
        break;
      }
      default: {
        const PlayerId p = hit == kRacketA ? PlayerId::A : PlayerId::B;
        const RacketState& racket = w.rackets[index_of(p)];
        if (racket.trigger_held) {
          start_hold(w, p, events, tick);
          w.speeds.push(0.0);
          track_center_line(w, events, tick);
          return;
        }
        ball.vel = racket_impact(ball.vel, facing_ball(racket, ball.pos), cfg.racket_restitution,
                                 cfg);
        events.push_back({tick, RacketHit{p, ball.pos, ball.vel}});
        break;
      }
    }
  }

  ball.pos = clamp_live(ball.pos + ball.vel * remaining, table);
  check_finite(w);
  track_center_line(w, events, tick);

  w.speeds.push(ball.vel.length());
  if (detect_dead_ball(w.speeds, ball.held_by.has_value(), cfg.dead_speed_eps_mps)) {
    w.in_play = false;
    w.speeds.clear();
    events.push_back({tick, BallDead{ball.pos}});
  }
}

std::optional<HapticEvent> haptic_for(const Event& event) {
  if (const auto* hit = std::get_if<RacketHit>(&event.payload)) {
    return HapticEvent{hit->player, kStrongPulseHz, HapticStrength::Strong, HapticDuration::Short};
  }
  if (const auto* hold = std::get_if<HoldSustained>(&event.payload)) {
    return HapticEvent{hold->player, kWeakPulseHz, HapticStrength::Weak,
                       HapticDuration::Continuous};
  }
  return std::nullopt;
}

}  // namespace showdown::physics
