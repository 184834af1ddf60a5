#include "showdown/harness/match.hpp"

#include <memory>

#include "showdown/harness/bot.hpp"
#include "showdown/net/json.hpp"
#include "showdown/net/link.hpp"
#include "showdown/net/protocol.hpp"
#include "showdown/net/server.hpp"
#include "showdown/seed.hpp"

namespace showdown::harness {
namespace {

/// A bot plus, in remote play, its two links and the last snapshot it saw.
struct Seat {
  ScriptedBot bot;
  std::unique_ptr<net::Link<std::string>> up;
  std::unique_ptr<net::Link<std::string>> down;
  Observation last;
};

net::LinkModel seeded(net::LinkModel m, std::uint64_t seed) {
  m.seed = seed;
  return m;
}

}  // namespace

MatchTimeout::MatchTimeout(Tick limit, std::string partial_log)
    : std::runtime_error("match unfinished after " + std::to_string(limit) + " ticks"),
      log_(std::move(partial_log)) {}

MatchResult run_bot_match(const RunConfig& cfg, const MatchOptions& options) {
  cfg.validate();
  net::GameServer server(cfg.server_config());
  const metrics::MetricsConfig mcfg{cfg.table};

  std::vector<Seat> seats;
  auto add_seat = [&](PlayerId p, const BotParams& params, SeedStream stream) {
    Seat s{ScriptedBot(p, params, derive_seed(cfg.seed, stream), cfg.table, cfg.physics), nullptr,
           nullptr, observe_world(server.world(), p, 0)};
    if (cfg.link) {
      const std::uint64_t salt = static_cast<std::uint64_t>(index_of(p));
      s.up = std::make_unique<net::Link<std::string>>(
          seeded(*cfg.link, derive_seed(cfg.seed, SeedStream::Uplink) + salt));
      s.down = std::make_unique<net::Link<std::string>>(
          seeded(*cfg.link, derive_seed(cfg.seed, SeedStream::Downlink) + salt));
    }
    seats.push_back(std::move(s));
  };
  add_seat(PlayerId::A, cfg.bot_a, SeedStream::BotA);
  if (cfg.mode == RunMode::Bots) add_seat(PlayerId::B, cfg.bot_b, SeedStream::BotB);

  MatchResult result;
  std::string& log = result.log;
  if (options.write_log) log += header_line(cfg);
  std::array<std::optional<physics::RacketState>, 2> logged;

  std::vector<net::InputEnvelope> inputs;
  while (!server.finished()) {
    const Tick t = server.now() + 1;
    if (t > cfg.tick_limit) {
      if (options.write_log) log += end_line({server.now(), EndStatus::Timeout});
      throw MatchTimeout(cfg.tick_limit, std::move(log));
    }

    inputs.clear();
    for (Seat& s : seats) {
      const int slot = static_cast<int>(index_of(s.bot.self()));
      if (!s.up) {
        inputs.push_back({slot, s.bot.step(observe_world(server.world(), s.bot.self(), t - 1))});
        continue;
      }
      for (auto& m : s.down->poll(t)) {
        const auto msg = net::decode(m.msg);
        if (const auto* snap = std::get_if<net::Snapshot>(&msg)) s.last = observe_snapshot(*snap);
      }
      s.up->send(t, net::encode(s.bot.step(s.last)));
      for (auto& m : s.up->poll(t)) {
        inputs.push_back({slot, std::get<net::ClientInput>(net::decode(m.msg))});
      }
    }

    const net::TickResult r = server.tick(inputs, cfg.link.has_value());
    for (Seat& s : seats) {
      if (s.down) s.down->send(t, net::encode(*r.snapshots[index_of(s.bot.self())]));
    }

    if (options.write_log) {
      for (PlayerId p : {PlayerId::A, PlayerId::B}) {
        if (!server.accepts_inputs(p)) continue;
        const auto& racket = server.world().rackets[index_of(p)];
        if (logged[index_of(p)] != racket) {
          log += racket_line(t, p, racket);
          logged[index_of(p)] = racket;
        }
      }
      for (const Event& e : r.events) log += event_line(e);
    }
    for (const Event& e : r.events) result.stats = metrics::accumulate(std::move(result.stats), e, mcfg);
    if (options.keep_events) result.events.insert(result.events.end(), r.events.begin(), r.events.end());
  }

  result.ticks = server.now();
  result.winner = *server.match().finished;
  result.games = server.match().games_won;
  result.counters = server.counters();
  for (const Seat& s : seats) {
    if (s.up) {
      result.link_sent += s.up->sent() + s.down->sent();
      result.link_delivered += s.up->delivered() + s.down->delivered();
    }
  }
  if (options.write_log) log += end_line({result.ticks, EndStatus::Finished});
  return result;
}

std::string stats_json(const metrics::MatchStats& stats) {
  net::JsonWriter w;
  auto rate = [&](std::string_view key, std::optional<double> v) {
    w.key(key);
    if (v) {
      w.value(*v);
    } else {
      w.null();
    }
  };
  w.begin_object();
  for (PlayerId p : {PlayerId::A, PlayerId::B}) {
    const metrics::PlayerStats& s = stats.of(p);
    w.key(to_string(p)).begin_object();
    w.key("match_win").value(s.match_win);
    w.key("matches").value(s.matches);
    w.key("game_win").value(s.game_win);
    w.key("games").value(s.games);
    w.key("shots_on_target").value(s.shots_on_target);
    w.key("hits").value(s.hits);
    w.key("left_hits").value(s.zone_hits[0]);
    w.key("middle_hits").value(s.zone_hits[1]);
    w.key("right_hits").value(s.zone_hits[2]);
    w.key("misses").value(s.misses);
    w.key("left_misses").value(s.zone_misses[0]);
    w.key("middle_misses").value(s.zone_misses[1]);
    w.key("right_misses").value(s.zone_misses[2]);
    w.key("rallies").value(s.rallies);
    w.key("balls_sent").value(s.balls_sent);
    w.key("balls_approaching").value(s.balls_approaching);
    w.key("goals").value(s.goals);
    rate("match_win_rate", s.match_win_rate());
    rate("game_win_rate", s.game_win_rate());
    rate("shots_on_target_rate", s.shots_on_target_rate());
    rate("hit_rate", s.hit_rate());
    rate("left_hit_rate", s.zone_hit_rate(metrics::Third::Left));
    rate("middle_hit_rate", s.zone_hit_rate(metrics::Third::Middle));
    rate("right_hit_rate", s.zone_hit_rate(metrics::Third::Right));
    w.end_object();
  }
  w.end_object();
  return w.take() + "\n";
}

}  // namespace showdown::harness
