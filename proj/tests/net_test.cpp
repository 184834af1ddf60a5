#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "showdown/net/json.hpp"
#include "showdown/net/link.hpp"
#include "showdown/net/protocol.hpp"
#include "showdown/net/server.hpp"

using namespace showdown;
using namespace showdown::net;

namespace {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double real(double lo = -20.0, double hi = 20.0) {
    // Mix plain values with awkward ones so formatting edge cases get hit.
    switch (pick(10)) {
      case 0: return 0.0;
      case 1: return -0.0;
      case 2: return std::ldexp(real01() - 0.5, static_cast<int>(pick(80)) - 40);
      default: return std::uniform_real_distribution<double>(lo, hi)(rng_);
    }
  }
  double real01() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }
  std::uint64_t pick(std::uint64_t n) { return rng_() % n; }
  Vec2 vec() { return {real(), real()}; }
  PlayerId player() { return pick(2) == 0 ? PlayerId::A : PlayerId::B; }
  std::array<int, 2> pair() { return {static_cast<int>(pick(13)), static_cast<int>(pick(13))}; }
  std::uint32_t u32() { return static_cast<std::uint32_t>(rng_()); }

  std::string text() {
    static const std::vector<std::string> parts{"a", "Zz", " ", "\"", "\\", "\n", "\t",
                                                "é", "☃", "{", "}", ":", ",", "\x01"};
    std::string s;
    for (std::uint64_t i = pick(6); i > 0; --i) s += parts[pick(parts.size())];
    return s;
  }

  Event event() {
    Event e;
    e.tick = u32();
    switch (pick(13)) {
      case 0: e.payload = WallHit{vec(), std::abs(real())}; break;
      case 1: e.payload = RacketHit{player(), vec(), vec()}; break;
      case 2: e.payload = GoalScored{player(), vec()}; break;
      case 3: e.payload = BallDead{vec()}; break;
      case 4: e.payload = HoldStarted{player()}; break;
      case 5: e.payload = HoldSustained{player()}; break;
      case 6: e.payload = HoldReleased{player(), vec()}; break;
      case 7: e.payload = CenterCrossed{player()}; break;
      case 8: e.payload = ServeStarted{player(), vec()}; break;
      case 9: e.payload = Announcement{player(), pair()}; break;
      case 10: e.payload = PhaseChanged{static_cast<PhaseTag>(pick(4))}; break;
      case 11: e.payload = GameEnded{player(), pair()}; break;
      default: e.payload = MatchEnded{player(), pair()}; break;
    }
    return e;
  }

  audio::BinauralFrame frame() {
    audio::BinauralFrame f;
    f.azimuth = real(-3.2, 3.2);
    f.elevation = real(-1.5, 1.5);
    f.distance = std::abs(real());
    f.itd = real(-7e-4, 7e-4);
    f.ild_db = real(-10, 10);
    f.left_gain = real01();
    f.right_gain = real01();
    f.source_kind = static_cast<audio::SourceKind>(pick(5));
    return f;
  }

  physics::HapticEvent haptic() {
    physics::HapticEvent h;
    h.player = player();
    h.pulse_rate_hz = pick(2) == 0 ? physics::kStrongPulseHz : physics::kWeakPulseHz;
    h.strength = static_cast<physics::HapticStrength>(pick(2));
    h.duration = static_cast<physics::HapticDuration>(pick(2));
    return h;
  }

  Message message() {
    switch (pick(6)) {
      case 0: return Hello{static_cast<int>(pick(5)), text()};
      case 1: return Join{player(), pick(2) == 0 ? "pva" : "pvp", u32()};
      case 2: {
        ClientInput in;
        in.seq = u32();
        in.client_tick = u32();
        in.racket_tip = vec();
        in.face_normal = vec();
        in.tip_vel = vec();
        in.trigger_held = pick(2) == 1;
        return in;
      }
      case 3: {
        Snapshot s;
        s.tick = u32();
        s.player = player();
        s.ball_pos = vec();
        s.ball_vel = vec();
        if (pick(2) == 0) s.held_by = player();
        s.phase = static_cast<PhaseTag>(pick(4));
        s.scores = pair();
        s.games = {static_cast<int>(pick(3)), static_cast<int>(pick(3))};
        for (std::uint64_t i = pick(4); i > 0; --i) s.cues.push_back(frame());
        for (std::uint64_t i = pick(5); i > 0; --i) s.events.push_back(event());
        for (std::uint64_t i = pick(3); i > 0; --i) s.haptics.push_back(haptic());
        return s;
      }
      case 4: return EventMessage{event()};
      default: return Bye{text()};
    }
  }

 private:
  std::mt19937_64 rng_;
};

Snapshot golden_snapshot() {
  Snapshot s;
  s.tick = 4242;
  s.player = PlayerId::B;
  s.ball_pos = {-0.3, -1.0};
  s.ball_vel = {0.75, 2.5};
  s.phase = PhaseTag::Rally;
  s.scores = {4, 6};
  s.games = {1, 0};
  audio::BinauralFrame rolling;
  rolling.azimuth = 0.2914567944778671;
  rolling.elevation = -0.4636476090008061;
  rolling.distance = 1.1180339887498949;
  rolling.itd = 0.00011204891218563612;
  rolling.ild_db = 2.8734788556634538;
  rolling.left_gain = 0.12897258180939386;
  rolling.right_gain = 0.17888543819998318;
  rolling.source_kind = audio::SourceKind::Rolling;
  audio::BinauralFrame goal = audio::shared_frame(audio::SourceKind::Goal, {});
  s.cues = {rolling, goal};
  s.events = {
      {4242, RacketHit{PlayerId::B, {0.1, -1.1}, {-0.5, 6.25}}},
      {4242, GoalScored{PlayerId::A, {0.05, -1.37}}},
      {4242, Announcement{PlayerId::A, {4, 6}}},
  };
  s.haptics = {{PlayerId::B, physics::kStrongPulseHz, physics::HapticStrength::Strong,
                physics::HapticDuration::Short}};
  return s;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string kGoldenPath = std::string(SHOWDOWN_GOLDEN_DIR) + "/snapshot_v1.json";

}  // namespace

// ---- codec ----

TEST(Codec, RandomizedRoundTrip) {
  Gen gen(20260418);
  for (int i = 0; i < 3000; ++i) {
    const Message m = gen.message();
    const std::string bytes = encode(m);
    ASSERT_EQ(bytes.find('\n'), std::string::npos) << bytes;
    const Message back = decode(bytes);
    ASSERT_EQ(back, m) << bytes;
    ASSERT_EQ(encode(back), bytes);
  }
}

TEST(Codec, ItdMicrosecondsAreExact) {
  Gen gen(7);
  for (int i = 0; i < 20000; ++i) {
    const double itd = gen.real(-7e-4, 7e-4);
    const std::string micros = seconds_to_micros_text(itd);
    ASSERT_EQ(micros_text_to_seconds(micros), itd) << micros;
  }
  EXPECT_EQ(seconds_to_micros_text(0.000125), "125");
  EXPECT_EQ(seconds_to_micros_text(-6.5e-5), "-65");
  EXPECT_EQ(seconds_to_micros_text(1.5e-7), "0.15");
}

TEST(Codec, FieldOrderIsFixed) {
  ClientInput in;
  in.seq = 3;
  in.client_tick = 10;
  in.racket_tip = {0.25, -1.0};
  in.tip_vel = {0.0, 1.5};
  in.trigger_held = true;
  EXPECT_EQ(encode_line(in),
            "{\"type\":\"input\",\"seq\":3,\"client_tick\":10,\"tip\":[0.25,-1],"
            "\"normal\":[0,1],\"tip_vel\":[0,1.5],\"trigger\":true}\n");
  EXPECT_EQ(encode(Bye{"done"}), R"({"type":"bye","reason":"done"})");
}

TEST(Codec, GoldenSnapshotIsStable) {
  if (std::getenv("SHOWDOWN_WRITE_GOLDEN") != nullptr) {
    std::ofstream(kGoldenPath, std::ios::binary) << encode_line(golden_snapshot());
  }
  const std::string golden = read_file(kGoldenPath);
  ASSERT_FALSE(golden.empty()) << "missing " << kGoldenPath;
  EXPECT_EQ(encode_line(golden_snapshot()), golden);
  EXPECT_EQ(decode(golden), Message(golden_snapshot()));
}

TEST(Codec, TruncatedFrameReportsOffset) {
  const std::string full = encode(golden_snapshot());
  for (std::size_t cut : {std::size_t{1}, std::size_t{17}, full.size() / 2, full.size() - 1}) {
    const std::string part = full.substr(0, cut);
    try {
      decode(part);
      FAIL() << "decoded a truncated frame of " << cut << " bytes";
    } catch (const DecodeError& e) {
      EXPECT_EQ(e.kind(), DecodeError::Kind::Malformed);
      EXPECT_LE(e.offset(), part.size());
      EXPECT_GE(e.offset() + 2, part.size()) << part;
    }
  }
}

TEST(Codec, MalformedOffsetPointsAtBadByte) {
  try {
    decode(R"({"type":"bye",#"reason":"x"})");
    FAIL();
  } catch (const DecodeError& e) {
    EXPECT_EQ(e.kind(), DecodeError::Kind::Malformed);
    EXPECT_EQ(e.offset(), 14u);
  }
}

TEST(Codec, BadFieldReportsKeyOffset) {
  const std::string text = R"({"type":"input","seq":-1,"client_tick":0})";
  try {
    decode(text);
    FAIL();
  } catch (const DecodeError& e) {
    EXPECT_EQ(e.kind(), DecodeError::Kind::BadField);
    EXPECT_EQ(e.offset(), text.find("\"seq\""));
  }
  EXPECT_THROW(decode(R"({"type":"hello","version":1})"), DecodeError);
  EXPECT_THROW(decode(R"([1,2])"), DecodeError);
  EXPECT_THROW(decode(R"({"type":"snapshot","tick":1})"), DecodeError);
}

TEST(Codec, UnknownTypeIsTyped) {
  try {
    decode(R"({"type":"teleport","x":1})");
    FAIL();
  } catch (const DecodeError& e) {
    EXPECT_EQ(e.kind(), DecodeError::Kind::UnknownType);
    EXPECT_EQ(e.offset(), 1u);
  }
}

TEST(Codec, NonFiniteValuesRefuseToEncode) {
  ClientInput in;
  in.racket_tip = {std::nan(""), 0.0};
  EXPECT_THROW(encode(in), std::invalid_argument);
}

TEST(LineDecoderTest, SurvivesBadLinesAndSplitsAnywhere) {
  const std::string stream = encode_line(Hello{1, "x"}) + "{\"type\":\"warp\"}\n" + "{\"ty\n" +
                             encode_line(golden_snapshot()) + encode_line(Bye{"end"});
  for (std::size_t chunk : {std::size_t{1}, std::size_t{7}, std::size_t{64}, stream.size()}) {
    LineDecoder dec;
    std::vector<LineDecoder::Item> items;
    for (std::size_t i = 0; i < stream.size(); i += chunk) {
      auto got = dec.feed(std::string_view(stream).substr(i, chunk));
      items.insert(items.end(), got.begin(), got.end());
    }
    ASSERT_EQ(items.size(), 5u);
    EXPECT_EQ(items[0].message, Message(Hello{1, "x"}));
    ASSERT_TRUE(items[1].error);
    EXPECT_EQ(items[1].error->kind(), DecodeError::Kind::UnknownType);
    ASSERT_TRUE(items[2].error);
    EXPECT_EQ(items[2].error->kind(), DecodeError::Kind::Malformed);
    EXPECT_FALSE(items[2].message);
    EXPECT_EQ(items[3].message, Message(golden_snapshot()));
    EXPECT_EQ(items[4].message, Message(Bye{"end"}));
    EXPECT_EQ(dec.pending(), 0u);
  }
}

TEST(LineDecoderTest, HoldsIncompleteTail) {
  LineDecoder dec;
  const std::string line = encode_line(Bye{"later"});
  EXPECT_TRUE(dec.feed(line.substr(0, 10)).empty());
  EXPECT_EQ(dec.pending(), 10u);
  const auto items = dec.feed(line.substr(10));
  ASSERT_EQ(items.size(), 1u);
  EXPECT_EQ(items[0].message, Message(Bye{"later"}));
}

// ---- link ----

TEST(LinkTest, ZeroModelIsIdentity) {
  std::vector<Timed<int>> sent;
  for (int i = 0; i < 100; ++i) sent.push_back({static_cast<Tick>(i / 3), i});
  EXPECT_EQ(link_deliver(LinkModel{}, sent), sent);
}

TEST(LinkTest, DeliveredFractionTracksLoss) {
  for (double eps : {0.05, 0.3}) {
    std::vector<Timed<int>> sent;
    for (int i = 0; i < 10000; ++i) sent.push_back({static_cast<Tick>(i), i});
    const auto out = link_deliver(LinkModel{0, 0, 1.0 - eps, 99}, sent);
    EXPECT_NEAR(static_cast<double>(out.size()) / 10000.0, eps, 0.01);
  }
}

TEST(LinkTest, SameSeedSameSchedule) {
  std::vector<Timed<int>> sent;
  for (int i = 0; i < 2000; ++i) sent.push_back({static_cast<Tick>(i), i});
  const LinkModel m{100, 30, 0.05, 5};
  const auto a = link_deliver(m, sent);
  EXPECT_EQ(a, link_deliver(m, sent));
  EXPECT_NE(a, link_deliver(LinkModel{100, 30, 0.05, 6}, sent));
}

TEST(LinkTest, DelayAndOrder) {
  std::vector<Timed<int>> sent;
  for (int i = 0; i < 3000; ++i) sent.push_back({static_cast<Tick>(i / 2), i});
  const auto out = link_deliver(LinkModel{100, 50, 0.0, 3}, sent);
  ASSERT_EQ(out.size(), sent.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    EXPECT_EQ(out[i].msg, static_cast<int>(i));
    EXPECT_GE(out[i].tick, sent[i].tick + 6);
    if (i > 0) {
      EXPECT_GE(out[i].tick, out[i - 1].tick);
    }
  }
  EXPECT_EQ(link_deliver(LinkModel{100, 0, 0.0, 3}, sent).front().tick, 6u);
}

TEST(LinkTest, RejectsBadInput) {
  EXPECT_THROW(Link<int>(LinkModel{0, 0, 1.0, 0}), std::invalid_argument);
  EXPECT_THROW(Link<int>(LinkModel{-1, 0, 0.0, 0}), std::invalid_argument);
  EXPECT_THROW(link_deliver(LinkModel{}, std::vector<Timed<int>>{{5, 1}, {4, 2}}),
               std::invalid_argument);
}

TEST(LinkTest, PollReleasesDueMessages) {
  Link<int> link(LinkModel{50, 0, 0.0, 1});
  link.send(10, 1);
  link.send(11, 2);
  EXPECT_TRUE(link.poll(12).empty());
  EXPECT_EQ(link.poll(13).size(), 1u);
  EXPECT_EQ(link.in_flight(), 1u);
  EXPECT_EQ(link.poll(14).front().msg, 2);
  EXPECT_EQ(link.sent(), 2u);
  EXPECT_EQ(link.delivered(), 2u);
}

// ---- server ----

namespace {

ServerConfig config(Mode mode = Mode::Pva, std::uint64_t seed = 11) {
  ServerConfig c;
  c.mode = mode;
  c.seed = seed;
  return c;
}

/// Tracks the ball laterally in the player's own frame.
ClientInput follower(const GameServer& server, PlayerId p, std::uint32_t seq) {
  const Vec2 ball = to_player_frame(server.world().ball.pos, p);
  ClientInput in;
  in.seq = seq;
  in.client_tick = server.now();
  in.racket_tip = {std::clamp(ball.x, -0.5, 0.5), -1.05};
  in.face_normal = {0.0, 1.0};
  return in;
}

void expect_mirrored(const Snapshot& a, const Snapshot& b) {
  EXPECT_EQ(a.tick, b.tick);
  EXPECT_EQ(mirror(b.ball_pos), a.ball_pos);
  EXPECT_EQ(mirror(b.ball_vel), a.ball_vel);
  EXPECT_EQ(a.held_by, b.held_by);
  EXPECT_EQ(a.phase, b.phase);
  EXPECT_EQ(a.scores, b.scores);
  EXPECT_EQ(a.games, b.games);
  ASSERT_EQ(a.events.size(), b.events.size());
  for (std::size_t i = 0; i < a.events.size(); ++i) {
    EXPECT_EQ(in_player_frame(b.events[i], PlayerId::B), a.events[i]);
  }
}

}  // namespace

TEST(Server, SnapshotsAreInRecipientFrame) {
  GameServer server(config());
  std::vector<InputEnvelope> none;
  const TickResult r = server.tick(none);
  ASSERT_TRUE(r.snapshots[0] && r.snapshots[1]);
  const Vec2 ball = server.world().ball.pos;
  EXPECT_EQ(r.snapshots[0]->ball_pos, ball);
  EXPECT_EQ(r.snapshots[1]->ball_pos, (Vec2{-ball.x, -ball.y}));
  EXPECT_EQ(r.snapshots[0]->player, PlayerId::A);
  EXPECT_EQ(r.snapshots[1]->player, PlayerId::B);
  EXPECT_EQ(r.tick, 1u);
}

TEST(Server, MirrorCoherenceOverLongPlay) {
  GameServer server(config(Mode::Pvp, 3));
  std::uint32_t seq = 0;
  int goals = 0;
  for (int t = 0; t < 20000 && !server.finished(); ++t) {
    ++seq;
    // B parks off-centre so goals happen on both sides.
    ClientInput parked = follower(server, PlayerId::B, seq);
    parked.racket_tip.x = 0.4;
    const std::vector<InputEnvelope> inputs{{0, follower(server, PlayerId::A, seq)},
                                            {1, parked}};
    const TickResult r = server.tick(inputs);
    expect_mirrored(*r.snapshots[0], *r.snapshots[1]);
    for (const Event& e : r.events) goals += std::holds_alternative<GoalScored>(e.payload);
    if (HasFatalFailure()) return;
  }
  EXPECT_GT(goals, 0);
}

TEST(Server, GoalTickCarriesIdenticalAnnouncement) {
  GameServer server(config(Mode::Pva, 5));
  std::vector<InputEnvelope> none;
  for (int t = 0; t < 100000; ++t) {
    const TickResult r = server.tick(none);
    const auto has_goal = std::any_of(r.events.begin(), r.events.end(), [](const Event& e) {
      return std::holds_alternative<GoalScored>(e.payload);
    });
    if (!has_goal) continue;
    auto announcement = [](const Snapshot& s) {
      std::vector<Event> out;
      for (const Event& e : s.events) {
        if (std::holds_alternative<Announcement>(e.payload)) out.push_back(e);
      }
      return out;
    };
    const auto a = announcement(*r.snapshots[0]);
    ASSERT_EQ(a.size(), 1u);
    EXPECT_EQ(a, announcement(*r.snapshots[1]));
    auto goal_cues = [](const Snapshot& s) {
      std::vector<audio::BinauralFrame> out;
      for (const auto& f : s.cues) {
        if (f.source_kind == audio::SourceKind::Goal ||
            f.source_kind == audio::SourceKind::Announcement) {
          out.push_back(f);
        }
      }
      return out;
    };
    EXPECT_FALSE(goal_cues(*r.snapshots[0]).empty());
    EXPECT_EQ(goal_cues(*r.snapshots[0]), goal_cues(*r.snapshots[1]));
    return;
  }
  FAIL() << "no goal scored";
}

TEST(Server, RacketPersistsWithoutInput) {
  GameServer server(config());
  ClientInput in;
  in.seq = 1;
  in.racket_tip = {0.2, -1.0};
  in.face_normal = {0.0, 2.0};
  in.tip_vel = {0.5, 0.0};
  in.trigger_held = true;
  server.tick(std::vector<InputEnvelope>{{0, in}});
  const auto racket = server.world().rackets[0];
  EXPECT_EQ(racket.tip, (Vec2{0.2, -1.0}));
  EXPECT_EQ(racket.face_normal, (Vec2{0.0, 1.0}));
  EXPECT_TRUE(racket.trigger_held);
  for (int i = 0; i < 30; ++i) server.tick({});
  EXPECT_EQ(server.world().rackets[0], racket);
}

TEST(Server, InputsForBAreMirroredIntoWorld) {
  GameServer server(config(Mode::Pvp));
  ClientInput in;
  in.seq = 1;
  in.racket_tip = {0.2, -1.0};
  in.face_normal = {0.6, 0.8};
  in.tip_vel = {1.0, 2.0};
  server.tick(std::vector<InputEnvelope>{{1, in}});
  const auto& r = server.world().rackets[1];
  EXPECT_EQ(r.tip, (Vec2{-0.2, 1.0}));
  EXPECT_EQ(r.face_normal, (Vec2{-0.6, -0.8}));
  EXPECT_EQ(r.tip_vel, (Vec2{-1.0, -2.0}));
}

TEST(Server, TipIsClampedToOwnHalf) {
  GameServer server(config());
  ClientInput in;
  in.seq = 1;
  in.racket_tip = {5.0, 3.0};
  server.tick(std::vector<InputEnvelope>{{0, in}});
  const TableGeometry& t = server.config().table;
  EXPECT_EQ(server.world().rackets[0].tip, (Vec2{t.half_width(), 0.0}));
}

TEST(Server, StaleInputsHaveNoEffect) {
  GameServer clean(config(Mode::Pva, 9));
  GameServer noisy(config(Mode::Pva, 9));
  std::uint32_t seq = 100;
  for (int t = 0; t < 3000; ++t) {
    ++seq;
    const ClientInput good = follower(clean, PlayerId::A, seq);
    ClientInput stale = good;
    stale.seq = seq - 1;
    stale.racket_tip = {-0.5, -0.2};
    ClientInput ancient = stale;
    ancient.seq = 0;
    clean.tick(std::vector<InputEnvelope>{{0, good}}, false);
    noisy.tick(std::vector<InputEnvelope>{{0, stale}, {0, good}, {0, ancient}}, false);
    ASSERT_EQ(noisy.world().ball, clean.world().ball) << "tick " << t;
    ASSERT_EQ(noisy.world().rackets, clean.world().rackets);
  }
  EXPECT_EQ(clean.counters().stale, 0u);
  EXPECT_EQ(noisy.counters().applied, clean.counters().applied);
  EXPECT_GT(noisy.counters().stale, 5000u);
}

TEST(Server, LatestSeqWinsWithinATick) {
  GameServer server(config());
  ClientInput older;
  older.seq = 4;
  older.racket_tip = {-0.3, -1.0};
  ClientInput newer = older;
  newer.seq = 5;
  newer.racket_tip = {0.3, -1.0};
  server.tick(std::vector<InputEnvelope>{{0, newer}, {0, older}});
  EXPECT_EQ(server.world().rackets[0].tip, newer.racket_tip);
  EXPECT_EQ(server.counters().applied, 1u);
  EXPECT_EQ(server.counters().stale, 1u);
}

TEST(Server, UnknownAndInvalidInputsAreCounted) {
  GameServer server(config(Mode::Pva));
  const auto before = server.world().rackets;
  ClientInput in;
  in.seq = 1;
  in.racket_tip = {0.1, -1.0};
  ClientInput bad = in;
  bad.tip_vel = {std::numeric_limits<double>::infinity(), 0.0};
  server.tick(std::vector<InputEnvelope>{{7, in}, {-1, in}, {1, in}, {0, bad}}, false);
  EXPECT_EQ(server.counters().unknown_player, 3u);
  EXPECT_EQ(server.counters().invalid, 1u);
  EXPECT_EQ(server.counters().applied, 0u);
  EXPECT_EQ(server.world().rackets[0], before[0]);
}

TEST(Server, TruncatedInputAppliesNothing) {
  GameServer server(config());
  ClientInput in;
  in.seq = 1;
  in.racket_tip = {0.4, -1.0};
  const std::string line = encode_line(in);
  LineDecoder dec;
  const auto items = dec.feed(line.substr(0, line.size() - 8) + "\n");
  ASSERT_EQ(items.size(), 1u);
  ASSERT_FALSE(items[0].message);
  std::vector<InputEnvelope> inputs;
  for (const auto& item : items) {
    if (item.message) inputs.push_back({0, std::get<ClientInput>(*item.message)});
  }
  const auto before = server.world().rackets[0];
  server.tick(inputs);
  EXPECT_EQ(server.world().rackets[0], before);
  EXPECT_EQ(server.counters(), InputCounters{});
}

TEST(Server, SameSeedSameMatch) {
  GameServer a(config(Mode::Pva, 21));
  GameServer b(config(Mode::Pva, 21));
  for (int t = 0; t < 5000; ++t) {
    const auto ra = a.tick({});
    const auto rb = b.tick({});
    ASSERT_EQ(ra.events, rb.events);
    ASSERT_EQ(ra.snapshots, rb.snapshots);
  }
}

TEST(Server, HapticsGoOnlyToTheirPlayer) {
  GameServer server(config(Mode::Pva, 2));
  int seen = 0;
  for (int t = 0; t < 30000 && seen < 5; ++t) {
    const auto r = server.tick({});
    for (int p = 0; p < 2; ++p) {
      for (const auto& h : r.snapshots[p]->haptics) {
        EXPECT_EQ(h.player, static_cast<PlayerId>(p));
        ++seen;
      }
    }
  }
  EXPECT_GT(seen, 0);
}

TEST(Server, RejectsBadMode) {
  EXPECT_EQ(mode_from_string("pvp"), Mode::Pvp);
  EXPECT_THROW(mode_from_string("bots"), std::invalid_argument);
}
