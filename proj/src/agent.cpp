#include "showdown/agent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace showdown::agent {
namespace {

double racket_line_y(const TableGeometry& table) {
  return -table.half_length() + physics::kRacketLineOffset;
}

double travel_time(double length, double speed, double drag) {
  if (drag == 0.0) return length / speed;
  return -std::log1p(-drag * length / speed) / drag;
}

}  // namespace

void AgentConfig::validate() const {
  for (double p : hit_probability) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("hit probability outside [0, 1]");
  }
  if (!(block_threshold_mps > 0.0)) throw std::invalid_argument("block threshold must be positive");
  if (!(max_lateral_speed_mps > 0.0)) {
    throw std::invalid_argument("lateral speed must be positive");
  }
  if (!(shot_speed_min_mps > 0.0) || !(shot_speed_max_mps >= shot_speed_min_mps)) {
    throw std::invalid_argument("shot speed range is empty");
  }
  if (!(aim_spread_m >= 0.0) || !(miss_margin_m >= 0.0)) {
    throw std::invalid_argument("aim spread and miss margin must be non-negative");
  }
}

AgentState make_agent(PlayerId self, std::uint64_t seed) {
  AgentState s;
  s.self = self;
  s.rng.seed(seed);
  return s;
}

bool decide_hit(AgentState& state, double incoming_speed, const AgentConfig& config) {
  if (incoming_speed > config.block_threshold_mps) return false;
  if (state.consecutive_hits >= 3) return false;
  const double p = config.hit_probability[static_cast<std::size_t>(state.consecutive_hits)];
  std::bernoulli_distribution draw(p);
  return draw(state.rng);
}

void observe(AgentState& state, const Event& event, const AgentConfig& config) {
  auto reset = [&] {
    state.consecutive_hits = 0;
    state.defend_edge.reset();
  };
  if (std::holds_alternative<ServeStarted>(event.payload)) {
    reset();
    state.plan.reset();
  } else if (const auto* hit = std::get_if<RacketHit>(&event.payload)) {
    if (hit->player == state.self) {
      state.consecutive_hits += 1;
      state.plan.reset();
      if (state.consecutive_hits >= 3 && !state.defend_edge) {
        std::bernoulli_distribution coin(0.5);
        state.defend_edge = coin(state.rng) ? Edge::Left : Edge::Right;
      }
    } else if (config.reset_on_opponent_contact) {
      reset();
    }
  } else if (const auto* hold = std::get_if<HoldStarted>(&event.payload)) {
    if (hold->player != state.self && config.reset_on_opponent_contact) reset();
  } else if (std::holds_alternative<GoalScored>(event.payload) ||
             std::holds_alternative<BallDead>(event.payload)) {
    state.plan.reset();
  }
}

std::optional<Intercept> predict_intercept(const physics::BallState& own_ball,
                                           const TableGeometry& table,
                                           const physics::PhysicsConfig& physics) {
  if (own_ball.held_by) return std::nullopt;
  const double r = table.ball_radius_m;
  const double target_y = racket_line_y(table) + r;
  if (!(own_ball.vel.y < 0.0) || own_ball.pos.y <= target_y) return std::nullopt;

  const double xr = table.half_width() - r;
  Vec2 pos = own_ball.pos;
  Vec2 dir = own_ball.vel.normalized();
  double speed = own_ball.vel.length();
  double time = 0.0;

  for (int bounce = 0; bounce < 32; ++bounce) {
    const double t_line = (target_y - pos.y) / dir.y;
    const double x_line = pos.x + dir.x * t_line;
    const bool reaches_line = std::abs(x_line) <= xr || dir.x == 0.0;
    const double wall = dir.x > 0.0 ? xr : -xr;
    const double len = reaches_line ? t_line : (wall - pos.x) / dir.x;
    if (physics.drag_per_s * len >= speed) return std::nullopt;
    time += travel_time(len, speed, physics.drag_per_s);
    speed -= physics.drag_per_s * len;
    pos += dir * len;
    if (reaches_line) return Intercept{{x_line, target_y}, dir * speed, time};

    Vec2 vel = dir * speed;
    vel.x = -table.wall_restitution * vel.x;
    speed = vel.length();
    dir = vel.normalized();
  }
  return std::nullopt;
}

physics::RacketState aim_racket(const Vec2& contact, const Vec2& incoming, const Vec2& outgoing,
                                const TableGeometry& table,
                                const physics::PhysicsConfig& physics) {
  const Vec2 delta = outgoing - incoming;
  const Vec2 n = delta.normalized();
  const double e = physics.racket_restitution;
  physics::RacketState racket;
  double share = 1.0;
  if (physics.mass_weighted_impact) share = racket.mass / (racket.mass + 1.0);
  const double rn = -delta.length() / ((1.0 + e) * share);
  racket.face_normal = n;
  racket.tip = contact - n * table.ball_radius_m;
  racket.tip_vel = n * (incoming.dot(n) - rn);
  return racket;
}

physics::RacketState agent_step(AgentState& state, const physics::BallState& ball, double dt,
                                const TableGeometry& table,
                                const physics::PhysicsConfig& physics,
                                const AgentConfig& config) {
  if (dt != kTickSeconds) throw std::invalid_argument("agent runs at the fixed tick only");
  const PlayerId self = state.self;
  const physics::BallState own{to_player_frame(ball.pos, self), to_player_frame(ball.vel, self),
                               ball.held_by};
  const double half_blade = 0.5 * physics.racket_length_m;
  const double x_limit = table.half_width() - half_blade;
  const double line_y = racket_line_y(table);

  const auto intercept = predict_intercept(own, table, physics);
  if (!intercept) state.plan.reset();
  if (intercept && !state.plan) {
    Plan plan;
    plan.hit = decide_hit(state, own.vel.length(), config);
    if (plan.hit) {
      std::uniform_real_distribution<double> speed(config.shot_speed_min_mps,
                                                   config.shot_speed_max_mps);
      std::uniform_real_distribution<double> aim(-config.aim_spread_m, config.aim_spread_m);
      plan.shot_speed_mps = speed(state.rng);
      plan.aim_x = aim(state.rng);
    }
    state.plan = plan;
  }

  physics::RacketState swing;
  bool aiming = false;
  double target_x = own.pos.x;
  // Behind the contact line the ball can only be met with the blade's back.
  if (own.pos.y <= line_y + table.ball_radius_m) target_x = state.lateral_pos;
  if (state.consecutive_hits >= 3 && state.defend_edge) {
    const double edge = table.goal_half_width();
    target_x = *state.defend_edge == Edge::Left ? -edge : edge;
  } else if (intercept && state.plan) {
    if (state.plan->hit) {
      const Vec2 aim_point{state.plan->aim_x, table.half_length()};
      const Vec2 out = (aim_point - intercept->point).normalized() * state.plan->shot_speed_mps;
      swing = aim_racket(intercept->point, intercept->velocity, out, table, physics);
      target_x = swing.tip.x;
      aiming = true;
    } else {
      const double clear = half_blade + table.ball_radius_m + config.miss_margin_m;
      const double lo = intercept->point.x - clear;
      const double hi = intercept->point.x + clear;
      const bool lo_ok = lo >= -x_limit;
      const bool hi_ok = hi <= x_limit;
      if (lo_ok && hi_ok) {
        target_x = std::abs(lo - state.lateral_pos) <= std::abs(hi - state.lateral_pos) ? lo : hi;
      } else {
        target_x = lo_ok ? lo : hi;
      }
      if (state.lateral_pos <= lo || state.lateral_pos >= hi) target_x = state.lateral_pos;
    }
  }
  target_x = std::clamp(target_x, -x_limit, x_limit);

  const double max_step = config.max_lateral_speed_mps * dt;
  const double step = std::clamp(target_x - state.lateral_pos, -max_step, max_step);
  state.lateral_pos += step;

  physics::RacketState own_racket;
  own_racket.tip = {state.lateral_pos, line_y};
  own_racket.face_normal = {0.0, 1.0};
  own_racket.tip_vel = {step / dt, 0.0};
  if (aiming) {
    own_racket.face_normal = swing.face_normal;
    own_racket.tip_vel = swing.tip_vel;
  }

  physics::RacketState world = own_racket;
  world.tip = to_player_frame(own_racket.tip, self);
  world.face_normal = to_player_frame(own_racket.face_normal, self);
  world.tip_vel = to_player_frame(own_racket.tip_vel, self);
  return world;
}

}  // namespace showdown::agent
