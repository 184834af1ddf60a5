#include "showdown/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <variant>

namespace showdown::metrics {
namespace {

std::optional<double> ratio(int num, int den) noexcept {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / den;
}

bool at_end_wall(const Vec2& pos, const TableGeometry& t) noexcept {
  return t.half_length() - std::abs(pos.y) <= t.half_width() - std::abs(pos.x);
}

/// Player whose end (or half) contains the world-frame y.
PlayerId side_of(double y) noexcept { return y <= 0.0 ? PlayerId::A : PlayerId::B; }

Third third_of(const Vec2& world_pos, PlayerId p, const TableGeometry& t) noexcept {
  return static_cast<Third>(lateral_third(to_player_frame(world_pos, p).x, t));
}

void record_miss(MatchStats& s, PlayerId p, const Vec2& pos, const TableGeometry& t) {
  auto& approaching = s.approaching[index_of(p)];
  if (!approaching) return;
  approaching = false;
  PlayerStats& ps = s.players[index_of(p)];
  ++ps.misses;
  ++ps.zone_misses[static_cast<std::size_t>(third_of(pos, p, t))];
}

void reached_end(MatchStats& s, PlayerId end_owner, const Vec2& pos, const MetricsConfig& cfg) {
  const PlayerId attacker = opponent(end_owner);
  if (s.last_hitter == attacker && !s.shot_counted &&
      std::abs(pos.x) <= cfg.shot_width_factor * cfg.table.goal_half_width()) {
    ++s.players[index_of(attacker)].shots_on_target;
    s.shot_counted = true;
  }
  record_miss(s, end_owner, pos, cfg.table);
}

void touch(MatchStats& s, PlayerId p) {
  s.approaching[index_of(p)] = false;
  s.last_hitter = p;
  s.shot_counted = false;
}

std::string percent(std::optional<double> r) {
  if (!r) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * *r);
  return buf;
}

}  // namespace

void MetricsConfig::validate() const {
  table.validate();
  if (!(shot_width_factor > 0.0) || !std::isfinite(shot_width_factor)) {
    throw std::invalid_argument("shot width factor must be positive");
  }
}

std::optional<double> PlayerStats::match_win_rate() const noexcept {
  return ratio(match_win, matches);
}
std::optional<double> PlayerStats::game_win_rate() const noexcept { return ratio(game_win, games); }
std::optional<double> PlayerStats::shots_on_target_rate() const noexcept {
  return ratio(shots_on_target, hits);
}
std::optional<double> PlayerStats::hit_rate() const noexcept { return ratio(hits, hits + misses); }
std::optional<double> PlayerStats::zone_hit_rate(Third t) const noexcept {
  const auto i = static_cast<std::size_t>(t);
  return ratio(zone_hits[i], zone_hits[i] + zone_misses[i]);
}

MatchStats accumulate(MatchStats s, const Event& e, const MetricsConfig& cfg) {
  if (s.last_tick && e.tick < *s.last_tick) {
    throw std::invalid_argument("event at tick " + std::to_string(e.tick) +
                                " arrived after tick " + std::to_string(*s.last_tick));
  }
  s.last_tick = e.tick;
  const TableGeometry& t = cfg.table;

  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, RacketHit>) {
          PlayerStats& ps = s.players[index_of(p.player)];
          ++ps.hits;
          ++ps.zone_hits[static_cast<std::size_t>(third_of(p.pos, p.player, t))];
          if (s.last_hitter == opponent(p.player)) ++s.players[index_of(*s.last_hitter)].rallies;
          touch(s, p.player);
        } else if constexpr (std::is_same_v<T, HoldStarted>) {
          touch(s, p.player);
        } else if constexpr (std::is_same_v<T, WallHit>) {
          if (at_end_wall(p.pos, t)) reached_end(s, side_of(p.pos.y), p.pos, cfg);
        } else if constexpr (std::is_same_v<T, GoalScored>) {
          ++s.players[index_of(p.scorer)].goals;
          reached_end(s, opponent(p.scorer), p.pos, cfg);
          s.last_hitter.reset();
          s.approaching = {};
        } else if constexpr (std::is_same_v<T, BallDead>) {
          record_miss(s, side_of(p.pos.y), p.pos, t);
          s.last_hitter.reset();
          s.approaching = {};
        } else if constexpr (std::is_same_v<T, CenterCrossed>) {
          ++s.players[index_of(p.toward)].balls_approaching;
          ++s.players[index_of(opponent(p.toward))].balls_sent;
          s.approaching[index_of(p.toward)] = true;
          s.approaching[index_of(opponent(p.toward))] = false;
        } else if constexpr (std::is_same_v<T, ServeStarted>) {
          s.last_hitter.reset();
          s.shot_counted = false;
          s.approaching = {};
          s.approaching[index_of(p.server)] = true;
        } else if constexpr (std::is_same_v<T, Announcement>) {
          s.score = p.score;
        } else if constexpr (std::is_same_v<T, GameEnded>) {
          s.score = p.score;
          for (auto& ps : s.players) ++ps.games;
          ++s.players[index_of(p.winner)].game_win;
        } else if constexpr (std::is_same_v<T, MatchEnded>) {
          for (auto& ps : s.players) ++ps.matches;
          ++s.players[index_of(p.winner)].match_win;
        }
      },
      e.payload);
  return s;
}

MatchStats accumulate_all(const EventLog& log, const MetricsConfig& cfg) {
  cfg.validate();
  MatchStats s;
  for (const Event& e : log) s = accumulate(std::move(s), e, cfg);
  return s;
}

double max_hr_percent(double measured_max_hr, double age) {
  if (!(age < 220.0)) throw std::domain_error("age must be below 220");
  if (!(age > 0.0)) throw std::invalid_argument("age must be positive");
  if (!(measured_max_hr > 0.0) || !std::isfinite(measured_max_hr)) {
    throw std::invalid_argument("heart rate must be positive");
  }
  return 100.0 * measured_max_hr / (220.0 - age);
}

std::vector<Row> table_rows(const MatchStats& stats) {
  std::vector<Row> rows;
  auto add = [&](std::string name, auto get) {
    rows.push_back({std::move(name), {get(stats.players[0]), get(stats.players[1])}});
  };
  auto count = [](int PlayerStats::*field) {
    return [field](const PlayerStats& p) { return std::to_string(p.*field); };
  };
  auto zone = [](std::size_t i) {
    return [i](const PlayerStats& p) { return std::to_string(p.zone_hits[i]); };
  };
  auto zone_rate = [](Third t) {
    return [t](const PlayerStats& p) { return percent(p.zone_hit_rate(t)); };
  };
  add("Match Win", count(&PlayerStats::match_win));
  add("Game Win", count(&PlayerStats::game_win));
  add("Shots on Target", count(&PlayerStats::shots_on_target));
  add("Hit", count(&PlayerStats::hits));
  add("Left Hit", zone(0));
  add("Middle Hit", zone(1));
  add("Right Hit", zone(2));
  add("Miss", count(&PlayerStats::misses));
  add("Match Win Rate", [](const PlayerStats& p) { return percent(p.match_win_rate()); });
  add("Game Win Rate", [](const PlayerStats& p) { return percent(p.game_win_rate()); });
  add("Shots on Target Rate",
      [](const PlayerStats& p) { return percent(p.shots_on_target_rate()); });
  add("Hit Rate", [](const PlayerStats& p) { return percent(p.hit_rate()); });
  add("Left Hit Rate", zone_rate(Third::Left));
  add("Middle Hit Rate", zone_rate(Third::Middle));
  add("Right Hit Rate", zone_rate(Third::Right));
  add("Rally", count(&PlayerStats::rallies));
  add("Number of Ball sent", count(&PlayerStats::balls_sent));
  add("Number of approaching Balls", count(&PlayerStats::balls_approaching));
  return rows;
}

std::string format_table(const MatchStats& stats) {
  const auto rows = table_rows(stats);
  std::size_t name_w = 0;
  std::size_t val_w = 1;
  for (const auto& r : rows) {
    name_w = std::max(name_w, r.name.size());
    for (const auto& v : r.values) val_w = std::max(val_w, v.size());
  }
  auto pad_left = [](const std::string& s, std::size_t w) {
    return std::string(w > s.size() ? w - s.size() : 0, ' ') + s;
  };
  std::string out = std::string(name_w, ' ') + "  " + pad_left("A", val_w) + "  " +
                    pad_left("B", val_w) + "\n";
  for (const auto& r : rows) {
    out += r.name + std::string(name_w - r.name.size(), ' ') + "  " + pad_left(r.values[0], val_w) +
           "  " + pad_left(r.values[1], val_w) + "\n";
  }
  return out;
}

}  // namespace showdown::metrics
