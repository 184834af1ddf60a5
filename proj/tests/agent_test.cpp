#include "showdown/agent.hpp"

#include <gtest/gtest.h>

#include <random>

namespace showdown::agent {
namespace {

using physics::BallState;
using physics::PhysicsConfig;
using physics::World;

const TableGeometry kTable{};

double hit_rate(int consecutive, std::uint64_t seed, int trials = 10'000) {
  AgentState s = make_agent(PlayerId::B, seed);
  int hits = 0;
  for (int i = 0; i < trials; ++i) {
    s.consecutive_hits = consecutive;
    hits += decide_hit(s, 8.0) ? 1 : 0;
  }
  return static_cast<double>(hits) / trials;
}

TEST(DecideHitTest, FirstHitAlwaysLands) { EXPECT_EQ(hit_rate(0, 1), 1.0); }

TEST(DecideHitTest, SecondHitSeventyPercent) {
  const double rate = hit_rate(1, 2);
  EXPECT_GE(rate, 0.685);
  EXPECT_LE(rate, 0.715);
}

TEST(DecideHitTest, ThirdHitFortyPercent) {
  const double rate = hit_rate(2, 3);
  EXPECT_GE(rate, 0.385);
  EXPECT_LE(rate, 0.415);
}

TEST(DecideHitTest, ThresholdIsStrictlyOverEleven) {
  AgentState s = make_agent(PlayerId::B, 4);
  EXPECT_TRUE(decide_hit(s, 11.0));
  EXPECT_FALSE(decide_hit(s, 11.0 + 1e-9));
  EXPECT_FALSE(decide_hit(s, 11.01));
  EXPECT_FALSE(decide_hit(s, 12.0));
}

TEST(DecideHitTest, NoDrawAboveThresholdOrAfterThreeHits) {
  AgentState s = make_agent(PlayerId::B, 5);
  const AgentState before = s;
  EXPECT_FALSE(decide_hit(s, 11.5));
  EXPECT_EQ(s, before);
  s.consecutive_hits = 3;
  const AgentState three = s;
  EXPECT_FALSE(decide_hit(s, 2.0));
  EXPECT_EQ(s, three);
}

TEST(ObserveTest, CountsOwnHitsAndResetsOnServe) {
  AgentState s = make_agent(PlayerId::B, 6);
  const RacketHit own{PlayerId::B, {0.0, 1.6}, {0.0, -6.0}};
  const RacketHit theirs{PlayerId::A, {0.0, -1.6}, {0.0, 6.0}};
  observe(s, {1, own});
  observe(s, {2, theirs});
  observe(s, {3, own});
  EXPECT_EQ(s.consecutive_hits, 2);
  EXPECT_FALSE(s.defend_edge);
  observe(s, {4, own});
  EXPECT_EQ(s.consecutive_hits, 3);
  ASSERT_TRUE(s.defend_edge);
  const Edge edge = *s.defend_edge;
  observe(s, {5, own});
  EXPECT_EQ(s.defend_edge, edge);
  observe(s, {6, ServeStarted{PlayerId::A, {0.0, -2.0}}});
  EXPECT_EQ(s.consecutive_hits, 0);
  EXPECT_FALSE(s.defend_edge);
}

TEST(ObserveTest, OptionalResetOnOpponentContact) {
  AgentConfig cfg;
  cfg.reset_on_opponent_contact = true;
  AgentState s = make_agent(PlayerId::B, 7);
  observe(s, {1, RacketHit{PlayerId::B, {}, {}}}, cfg);
  observe(s, {2, RacketHit{PlayerId::A, {}, {}}}, cfg);
  EXPECT_EQ(s.consecutive_hits, 0);
  observe(s, {3, RacketHit{PlayerId::B, {}, {}}}, cfg);
  observe(s, {4, HoldStarted{PlayerId::A}}, cfg);
  EXPECT_EQ(s.consecutive_hits, 0);
}

TEST(ObserveTest, EdgeDrawUsesBothSides) {
  int left = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    AgentState s = make_agent(PlayerId::B, seed);
    for (int i = 0; i < 3; ++i) observe(s, {0, RacketHit{PlayerId::B, {}, {}}});
    left += *s.defend_edge == Edge::Left ? 1 : 0;
  }
  EXPECT_GT(left, 60);
  EXPECT_LT(left, 140);
}

TEST(InterceptTest, StraightApproach) {
  PhysicsConfig cfg;
  cfg.drag_per_s = 0.0;
  const BallState ball{{0.2, 1.0}, {0.0, -4.0}, std::nullopt};
  const auto hit = predict_intercept(ball, kTable, cfg);
  ASSERT_TRUE(hit);
  const double line = -kTable.half_length() + physics::kRacketLineOffset + kTable.ball_radius_m;
  EXPECT_DOUBLE_EQ(hit->point.x, 0.2);
  EXPECT_DOUBLE_EQ(hit->point.y, line);
  EXPECT_NEAR(hit->time_s, (1.0 - line) / 4.0, 1e-12);
  EXPECT_EQ(hit->velocity, ball.vel);
}

TEST(InterceptTest, NotApproachingOrStoppingShort) {
  const PhysicsConfig cfg;
  EXPECT_FALSE(predict_intercept({{0.0, 0.0}, {0.0, 3.0}, std::nullopt}, kTable, cfg));
  EXPECT_FALSE(predict_intercept({{0.0, 0.0}, {0.0, -3.0}, PlayerId::A}, kTable, cfg));
  EXPECT_FALSE(predict_intercept({{0.0, 1.5}, {0.0, -0.1}, std::nullopt}, kTable, cfg));
}

TEST(InterceptTest, MatchesSimulationThroughSideBounce) {
  const PhysicsConfig cfg;
  World w = physics::make_world(kTable, cfg);
  w.rackets[0].tip = {5.0, 5.0};
  w.rackets[1].tip = {5.0, -5.0};
  w.ball = {{0.0, 1.2}, {4.0, -5.0}, std::nullopt};
  w.in_play = true;
  const auto hit = predict_intercept(w.ball, kTable, cfg);
  ASSERT_TRUE(hit);
  EventLog log;
  Tick t = 0;
  while (w.ball.pos.y > hit->point.y && t < 600) physics::step_in_place(w, kTickSeconds, ++t, log);
  ASSERT_FALSE(log.empty());
  EXPECT_TRUE(std::holds_alternative<WallHit>(log.front().payload));
  EXPECT_NEAR(w.ball.pos.x, hit->point.x, 0.06);
  EXPECT_NEAR(t * kTickSeconds, hit->time_s, 2.0 * kTickSeconds);
}

TEST(AimTest, ImpactProducesRequestedVelocity) {
  const PhysicsConfig cfg;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const Vec2 in{2.0 * u(rng), -3.0 - 3.0 * std::abs(u(rng))};
    const Vec2 out = Vec2{0.1 * u(rng), 1.0}.normalized() * (8.5 + 2.5 * u(rng));
    const auto racket = aim_racket({0.0, -1.6}, in, out, kTable, cfg);
    const Vec2 got = physics::racket_impact(in, racket, cfg.racket_restitution, cfg);
    EXPECT_NEAR(got.x, out.x, 1e-9);
    EXPECT_NEAR(got.y, out.y, 1e-9);
  }
}

TEST(AimTest, MassWeightedImpactToo) {
  PhysicsConfig cfg;
  cfg.mass_weighted_impact = true;
  const Vec2 in{0.5, -4.0};
  const Vec2 out{0.3, 7.0};
  const auto racket = aim_racket({0.0, -1.6}, in, out, kTable, cfg);
  const Vec2 got = physics::racket_impact(in, racket, cfg.racket_restitution, cfg);
  EXPECT_NEAR(got.x, out.x, 1e-9);
  EXPECT_NEAR(got.y, out.y, 1e-9);
}

struct Rally {
  World world;
  AgentState agent;
  EventLog log;
  Tick tick = 0;
};

// Ball launched from A's half toward the agent playing B; A's racket is parked
// off the table so only the agent can touch the ball.
Rally launch(Vec2 pos, Vec2 vel, AgentConfig cfg, std::uint64_t seed, int ticks = 240,
             int hits_before = 0) {
  Rally r{physics::make_world(kTable, PhysicsConfig{}), make_agent(PlayerId::B, seed), {}, 0};
  r.world.rackets[0].tip = {0.0, -5.0};
  r.world.ball = {pos, vel, std::nullopt};
  r.world.in_play = true;
  r.agent.consecutive_hits = hits_before;
  for (int i = 0; i < ticks && r.world.in_play; ++i) {
    r.world.rackets[1] = agent_step(r.agent, r.world.ball, kTickSeconds, kTable,
                                    r.world.config, cfg);
    const std::size_t before = r.log.size();
    physics::step_in_place(r.world, kTickSeconds, ++r.tick, r.log);
    for (std::size_t k = before; k < r.log.size(); ++k) observe(r.agent, r.log[k], cfg);
  }
  return r;
}

int count_hits(const EventLog& log, PlayerId p) {
  int n = 0;
  for (const auto& e : log) {
    if (const auto* h = std::get_if<RacketHit>(&e.payload)) n += h->player == p ? 1 : 0;
  }
  return n;
}

TEST(AgentStepTest, ReturnsBallRollingStraightAtIt) {
  const auto r = launch({0.0, -0.5}, {0.0, 5.0}, {}, 9);
  ASSERT_EQ(count_hits(r.log, PlayerId::B), 1);
  const auto it = std::find_if(r.log.begin(), r.log.end(), [](const Event& e) {
    return std::holds_alternative<RacketHit>(e.payload);
  });
  const auto& hit = std::get<RacketHit>(it->payload);
  EXPECT_LT(hit.out_vel.y, 0.0);
  EXPECT_GE(hit.out_vel.length(), 6.0 - 1e-9);
  EXPECT_LE(hit.out_vel.length(), 11.0 + 1e-9);
  EXPECT_EQ(r.agent.consecutive_hits, 1);
}

TEST(AgentStepTest, ReturnsAreShotsOnGoal) {
  int scored = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto r = launch({0.1, -0.5}, {-0.3, 4.0}, {}, seed, 400);
    ASSERT_EQ(count_hits(r.log, PlayerId::B), 1) << seed;
    for (const auto& e : r.log) {
      if (const auto* g = std::get_if<GoalScored>(&e.payload)) scored += g->scorer == PlayerId::B;
    }
  }
  EXPECT_EQ(scored, 20);
}

TEST(AgentStepTest, DeclinedHitMissesByAFullBlade) {
  AgentConfig cfg;
  cfg.hit_probability = {0.0, 0.0, 0.0};
  Rally r{physics::make_world(kTable, PhysicsConfig{}), make_agent(PlayerId::B, 10), {}, 0};
  r.world.rackets[0].tip = {0.0, -5.0};
  r.world.ball = {{0.1, -0.5}, {0.0, 5.0}, std::nullopt};
  r.world.in_play = true;
  const double contact_y = kTable.half_length() - physics::kRacketLineOffset - kTable.ball_radius_m;
  bool crossed = false;
  for (int i = 0; i < 240 && r.world.in_play; ++i) {
    r.world.rackets[1] = agent_step(r.agent, r.world.ball, kTickSeconds, kTable,
                                    r.world.config, cfg);
    physics::step_in_place(r.world, kTickSeconds, ++r.tick, r.log);
    if (!crossed && r.world.ball.pos.y >= contact_y) {
      crossed = true;
      const double gap = std::abs(r.world.rackets[1].tip.x - r.world.ball.pos.x);
      EXPECT_GE(gap, 0.15 + kTable.ball_radius_m);
    }
  }
  EXPECT_TRUE(crossed);
  EXPECT_EQ(count_hits(r.log, PlayerId::B), 0);
}

TEST(AgentStepTest, DefenseModeParksOnTheChosenEdge) {
  for (Edge edge : {Edge::Left, Edge::Right}) {
    AgentState s = make_agent(PlayerId::B, 11);
    s.consecutive_hits = 3;
    s.defend_edge = edge;
    physics::RacketState racket;
    const BallState ball{{0.4, -1.0}, {0.2, 3.0}, std::nullopt};
    for (int i = 0; i < 120; ++i) {
      racket = agent_step(s, ball, kTickSeconds, kTable, PhysicsConfig{});
    }
    const double own_x = to_player_frame(racket.tip, PlayerId::B).x;
    EXPECT_DOUBLE_EQ(own_x, edge == Edge::Left ? -0.15 : 0.15);
    EXPECT_EQ(to_player_frame(racket.face_normal, PlayerId::B), (Vec2{0.0, 1.0}));
  }
}

TEST(AgentStepTest, LateralSpeedIsCapped) {
  AgentState s = make_agent(PlayerId::A, 12);
  const BallState ball{{0.5, 1.0}, {0.0, -4.0}, std::nullopt};
  double prev = s.lateral_pos;
  for (int i = 0; i < 30; ++i) {
    agent_step(s, ball, kTickSeconds, kTable, PhysicsConfig{});
    EXPECT_LE(std::abs(s.lateral_pos - prev), 1.5 / 60.0 + 1e-12);
    prev = s.lateral_pos;
  }
  EXPECT_THROW(agent_step(s, ball, 0.02, kTable, PhysicsConfig{}), std::invalid_argument);
}

TEST(AgentStepTest, DeterministicForSameSeed) {
  const auto a = launch({0.2, -0.3}, {0.5, 6.0}, {}, 13, 400, 1);
  const auto b = launch({0.2, -0.3}, {0.5, 6.0}, {}, 13, 400, 1);
  EXPECT_EQ(a.log, b.log);
  EXPECT_EQ(a.agent, b.agent);
}

TEST(AgentStepTest, DecidedHitsUsuallyConnect) {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> x(-0.5, 0.5);
  std::uniform_real_distribution<double> vx(-1.5, 1.5);
  std::uniform_real_distribution<double> vy(3.0, 9.0);
  int connected = 0;
  const int trials = 200;
  for (int i = 0; i < trials; ++i) {
    const auto r = launch({x(rng), -1.0}, {vx(rng), vy(rng)}, {}, 100 + i, 300);
    connected += count_hits(r.log, PlayerId::B) > 0 ? 1 : 0;
  }
  EXPECT_GE(connected, trials * 9 / 10);
}

TEST(AgentConfigTest, Validation) {
  AgentConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.hit_probability[1] = 1.2;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.shot_speed_max_mps = 1.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace showdown::agent
