#include "showdown/harness/bot.hpp"

#include <algorithm>
#include <cmath>

#include "showdown/agent.hpp"

namespace showdown::harness {

Observation observe_world(const physics::World& world, PlayerId self, Tick tick) {
  return {tick, to_player_frame(world.ball.pos, self), to_player_frame(world.ball.vel, self),
          world.ball.held_by};
}

Observation observe_snapshot(const net::Snapshot& s) {
  return {s.tick, s.ball_pos, s.ball_vel, s.held_by};
}

ScriptedBot::ScriptedBot(PlayerId self, const BotParams& params, std::uint64_t seed,
                         const TableGeometry& table, const physics::PhysicsConfig& physics)
    : self_(self), params_(params), rng_(seed), table_(table), physics_(physics) {
  params_.validate();
}

net::ClientInput ScriptedBot::step(const Observation& latest) {
  seen_.push_back(latest);
  while (seen_.size() > static_cast<std::size_t>(params_.reaction_ticks) + 1) seen_.pop_front();
  const Observation& obs = seen_.front();

  const double half_blade = 0.5 * physics_.racket_length_m;
  const double x_limit = table_.half_width() - half_blade;
  const double line_y = -table_.half_length() + physics::kRacketLineOffset;

  const physics::BallState ball{obs.ball_pos, obs.ball_vel, obs.held_by};
  const auto intercept = obs.held_by ? std::nullopt
                                     : agent::predict_intercept(ball, table_, physics_);
  if (!intercept) plan_.reset();
  if (intercept && !plan_) {
    Plan p;
    p.hit = std::bernoulli_distribution(params_.hit_probability)(rng_);
    if (p.hit) p.aim_x = std::normal_distribution<double>(0.0, params_.aim_sigma_m)(rng_);
    plan_ = p;
    swung_ = p.hit;
  }

  double target_x = lateral_pos_;
  // Step aside from a ball crossing the line at x.
  auto dodge = [&](double x) {
    const double clear = half_blade + table_.ball_radius_m + 0.02;
    const double lo = x - clear;
    const double hi = x + clear;
    if (lateral_pos_ > lo && lateral_pos_ < hi) {
      target_x = (lo >= -x_limit && (hi > x_limit || lateral_pos_ - lo <= hi - lateral_pos_)) ? lo : hi;
    }
  };
  physics::RacketState swing;
  bool aiming = false;
  if (intercept && plan_) {
    if (plan_->hit) {
      const Vec2 aim_point{plan_->aim_x, table_.half_length()};
      const Vec2 out = (aim_point - intercept->point).normalized() * params_.shot_speed_mps;
      swing = agent::aim_racket(intercept->point, intercept->velocity, out, table_, physics_);
      target_x = swing.tip.x;
      aiming = true;
    } else {
      dodge(intercept->point.x);
    }
  } else if (obs.ball_pos.y > line_y + table_.ball_radius_m) {
    target_x = obs.ball_pos.x;
  } else if (!obs.held_by && !swung_ && obs.ball_vel.y != 0.0) {
    // Behind the line: dodge where the ball will come back through it.
    const double wall_y = -table_.half_length() + table_.ball_radius_m;
    double dy = line_y - obs.ball_pos.y;
    if (obs.ball_vel.y < 0.0) dy = (obs.ball_pos.y - wall_y) + (line_y - wall_y);
    dodge(obs.ball_pos.x + obs.ball_vel.x * dy / std::abs(obs.ball_vel.y));
  }
  target_x = std::clamp(target_x, -x_limit, x_limit);

  const double max_step = params_.max_speed_mps * kTickSeconds;
  const double step = std::clamp(target_x - lateral_pos_, -max_step, max_step);
  lateral_pos_ += step;

  net::ClientInput in;
  in.seq = ++seq_;
  in.client_tick = latest.tick;
  in.racket_tip = {lateral_pos_, line_y};
  in.face_normal = aiming ? swing.face_normal : Vec2{0.0, 1.0};
  in.tip_vel = aiming ? swing.tip_vel : Vec2{step / kTickSeconds, 0.0};
  return in;
}

}  // namespace showdown::harness
