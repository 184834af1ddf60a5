#include "showdown/harness/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "showdown/net/json.hpp"

namespace showdown::harness {
namespace {

struct Entry {
  std::string key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, std::string_view)> set;
};

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view want) {
  throw ConfigError("'" + std::string(key) + "': cannot read '" + std::string(value) + "' as " +
                    std::string(want));
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    bad_value(key, text, std::is_floating_point_v<T> ? "a number" : "an integer");
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(v)) bad_value(key, text, "a finite number");
  }
  return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  bad_value(key, text, "a boolean");
}

template <class T>
std::string number_text(T v) {
  if constexpr (std::is_floating_point_v<T>) return net::format_double(v);
  return std::to_string(v);
}

net::LinkModel& link_of(RunConfig& cfg) {
  if (!cfg.link) cfg.link = net::LinkModel{};
  return *cfg.link;
}

/// Entry for a numeric field reached through `field(cfg)`.
template <class T, class F>
Entry number(std::string key, F field) {
  return {key,
          [field](const RunConfig& c) { return number_text(field(const_cast<RunConfig&>(c))); },
          [field, key](RunConfig& c, std::string_view v) { field(c) = parse_number<T>(key, v); }};
}

template <class F>
Entry boolean(std::string key, F field) {
  return {key,
          [field](const RunConfig& c) {
            return std::string(field(const_cast<RunConfig&>(c)) ? "true" : "false");
          },
          [field, key](RunConfig& c, std::string_view v) { field(c) = parse_bool(key, v); }};
}

void add_bot(std::vector<Entry>& out, const std::string& section, BotParams RunConfig::*bot) {
  out.push_back(number<double>(section + ".hit_probability",
                               [bot](RunConfig& c) -> double& { return (c.*bot).hit_probability; }));
  out.push_back(number<double>(section + ".aim_sigma_m",
                               [bot](RunConfig& c) -> double& { return (c.*bot).aim_sigma_m; }));
  out.push_back(number<int>(section + ".reaction_ticks",
                            [bot](RunConfig& c) -> int& { return (c.*bot).reaction_ticks; }));
  out.push_back(number<double>(section + ".max_speed_mps",
                               [bot](RunConfig& c) -> double& { return (c.*bot).max_speed_mps; }));
  out.push_back(number<double>(section + ".shot_speed_mps",
                               [bot](RunConfig& c) -> double& { return (c.*bot).shot_speed_mps; }));
}

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries = [] {
    std::vector<Entry> e;
    e.push_back({"run.mode", [](const RunConfig& c) { return std::string(to_string(c.mode)); },
                 [](RunConfig& c, std::string_view v) {
                   try {
                     c.mode = run_mode_from_string(v);
                   } catch (const std::invalid_argument&) {
                     bad_value("run.mode", v, "pva or bots");
                   }
                 }});
    e.push_back(number<std::uint64_t>("run.seed", [](RunConfig& c) -> auto& { return c.seed; }));
    e.push_back(number<Tick>("run.tick_limit", [](RunConfig& c) -> auto& { return c.tick_limit; }));
    e.push_back(number<Tick>("run.game_over_pause_ticks",
                             [](RunConfig& c) -> auto& { return c.game_over_pause_ticks; }));

    e.push_back(number<double>("table.length_m", [](RunConfig& c) -> auto& { return c.table.length_m; }));
    e.push_back(number<double>("table.width_m", [](RunConfig& c) -> auto& { return c.table.width_m; }));
    e.push_back(number<double>("table.wall_restitution",
                               [](RunConfig& c) -> auto& { return c.table.wall_restitution; }));
    e.push_back(number<double>("table.goal_width_m",
                               [](RunConfig& c) -> auto& { return c.table.goal_width_m; }));
    e.push_back(number<double>("table.ball_radius_m",
                               [](RunConfig& c) -> auto& { return c.table.ball_radius_m; }));

    e.push_back(number<double>("physics.drag_per_s",
                               [](RunConfig& c) -> auto& { return c.physics.drag_per_s; }));
    e.push_back(number<double>("physics.racket_restitution",
                               [](RunConfig& c) -> auto& { return c.physics.racket_restitution; }));
    e.push_back(number<double>("physics.max_speed_mps",
                               [](RunConfig& c) -> auto& { return c.physics.max_speed_mps; }));
    e.push_back(number<double>("physics.hold_gap_m",
                               [](RunConfig& c) -> auto& { return c.physics.hold_gap_m; }));
    e.push_back(number<double>("physics.hold_follow_speed_mps",
                               [](RunConfig& c) -> auto& { return c.physics.hold_follow_speed_mps; }));
    e.push_back(number<double>("physics.hold_contact_slop_m",
                               [](RunConfig& c) -> auto& { return c.physics.hold_contact_slop_m; }));
    e.push_back(number<double>("physics.hold_sustain_s",
                               [](RunConfig& c) -> auto& { return c.physics.hold_sustain_s; }));
    e.push_back(number<double>("physics.dead_speed_eps_mps",
                               [](RunConfig& c) -> auto& { return c.physics.dead_speed_eps_mps; }));
    e.push_back(number<double>("physics.dead_window_s",
                               [](RunConfig& c) -> auto& { return c.physics.dead_window_s; }));
    e.push_back(number<double>("physics.racket_length_m",
                               [](RunConfig& c) -> auto& { return c.physics.racket_length_m; }));
    e.push_back(boolean("physics.mass_weighted_impact",
                        [](RunConfig& c) -> auto& { return c.physics.mass_weighted_impact; }));

    e.push_back(number<double>("cues.head_radius_m",
                               [](RunConfig& c) -> auto& { return c.cues.head_radius_m; }));
    e.push_back(number<double>("cues.sound_speed_mps",
                               [](RunConfig& c) -> auto& { return c.cues.sound_speed_mps; }));
    e.push_back(number<double>("cues.ild_slope_db",
                               [](RunConfig& c) -> auto& { return c.cues.ild_slope_db; }));
    e.push_back(number<double>("cues.near_clamp_m",
                               [](RunConfig& c) -> auto& { return c.cues.near_clamp_m; }));
    e.push_back(number<double>("cues.rolling_knee_kmh",
                               [](RunConfig& c) -> auto& { return c.cues.rolling_knee_kmh; }));
    e.push_back({"cues.gain_model",
                 [](const RunConfig& c) {
                   return std::string(c.cues.gain_model == audio::GainModel::LinearRamp
                                          ? "linear"
                                          : "multiplicative");
                 },
                 [](RunConfig& c, std::string_view v) {
                   if (v == "linear") {
                     c.cues.gain_model = audio::GainModel::LinearRamp;
                   } else if (v == "multiplicative") {
                     c.cues.gain_model = audio::GainModel::Multiplicative;
                   } else {
                     bad_value("cues.gain_model", v, "linear or multiplicative");
                   }
                 }});

    e.push_back(number<int>("rules.points_per_goal",
                            [](RunConfig& c) -> auto& { return c.rules.points_per_goal; }));
    e.push_back(number<int>("rules.points_to_win",
                            [](RunConfig& c) -> auto& { return c.rules.points_to_win; }));
    e.push_back(number<int>("rules.serves_per_turn",
                            [](RunConfig& c) -> auto& { return c.rules.serves_per_turn; }));
    e.push_back(number<double>("rules.goal_pause_s",
                               [](RunConfig& c) -> auto& { return c.rules.goal_pause_s; }));
    e.push_back(number<double>("rules.serve_speed_mps",
                               [](RunConfig& c) -> auto& { return c.rules.serve_speed_mps; }));
    e.push_back(number<int>("rules.games_to_win",
                            [](RunConfig& c) -> auto& { return c.rules.games_to_win; }));

    e.push_back({"agent.hit_probability",
                 [](const RunConfig& c) {
                   const auto& p = c.agent.hit_probability;
                   return net::format_double(p[0]) + "," + net::format_double(p[1]) + "," +
                          net::format_double(p[2]);
                 },
                 [](RunConfig& c, std::string_view v) {
                   std::array<double, 3> p{};
                   std::size_t start = 0;
                   for (std::size_t i = 0; i < 3; ++i) {
                     const std::size_t comma = v.find(',', start);
                     if ((i < 2) == (comma == std::string_view::npos)) {
                       bad_value("agent.hit_probability", v, "three comma-separated numbers");
                     }
                     std::string_view part = v.substr(start, comma - start);
                     while (!part.empty() && part.front() == ' ') part.remove_prefix(1);
                     while (!part.empty() && part.back() == ' ') part.remove_suffix(1);
                     p[i] = parse_number<double>("agent.hit_probability", part);
                     start = comma + 1;
                   }
                   c.agent.hit_probability = p;
                 }});
    e.push_back(number<double>("agent.block_threshold_mps",
                               [](RunConfig& c) -> auto& { return c.agent.block_threshold_mps; }));
    e.push_back(number<double>("agent.max_lateral_speed_mps",
                               [](RunConfig& c) -> auto& { return c.agent.max_lateral_speed_mps; }));
    e.push_back(number<double>("agent.shot_speed_min_mps",
                               [](RunConfig& c) -> auto& { return c.agent.shot_speed_min_mps; }));
    e.push_back(number<double>("agent.shot_speed_max_mps",
                               [](RunConfig& c) -> auto& { return c.agent.shot_speed_max_mps; }));
    e.push_back(number<double>("agent.aim_spread_m",
                               [](RunConfig& c) -> auto& { return c.agent.aim_spread_m; }));
    e.push_back(number<double>("agent.miss_margin_m",
                               [](RunConfig& c) -> auto& { return c.agent.miss_margin_m; }));
    e.push_back(boolean("agent.reset_on_opponent_contact",
                        [](RunConfig& c) -> auto& { return c.agent.reset_on_opponent_contact; }));

    add_bot(e, "bot_a", &RunConfig::bot_a);
    add_bot(e, "bot_b", &RunConfig::bot_b);

    e.push_back(number<double>("link.delay_ms",
                               [](RunConfig& c) -> auto& { return link_of(c).one_way_delay_ms; }));
    e.push_back(number<double>("link.jitter_ms",
                               [](RunConfig& c) -> auto& { return link_of(c).jitter_ms; }));
    e.push_back(number<double>("link.loss_rate",
                               [](RunConfig& c) -> auto& { return link_of(c).loss_rate; }));

    e.push_back(number<int>("study.noisy_trials",
                            [](RunConfig& c) -> auto& { return c.study.noisy_trials; }));
    e.push_back(number<double>("study.sigma_itd_s",
                               [](RunConfig& c) -> auto& { return c.study.noise.sigma_itd_s; }));
    e.push_back(number<double>("study.sigma_ild_db",
                               [](RunConfig& c) -> auto& { return c.study.noise.sigma_ild_db; }));
    e.push_back(number<double>("study.speed_mps",
                               [](RunConfig& c) -> auto& { return c.study.speed_mps; }));
    return e;
  }();
  return entries;
}

const Entry& find(std::string_view key) {
  for (const Entry& e : registry()) {
    if (e.key == key) return e;
  }
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

}  // namespace

std::string_view to_string(RunMode m) noexcept { return m == RunMode::Pva ? "pva" : "bots"; }

RunMode run_mode_from_string(std::string_view s) {
  if (s == "pva") return RunMode::Pva;
  if (s == "bots" || s == "pvp") return RunMode::Bots;
  throw std::invalid_argument("unknown run mode '" + std::string(s) + "'");
}

void BotParams::validate() const {
  if (!(hit_probability >= 0.0 && hit_probability <= 1.0)) {
    throw std::invalid_argument("bot hit probability must lie in [0, 1]");
  }
  if (!(aim_sigma_m >= 0.0)) throw std::invalid_argument("bot aim sigma must be non-negative");
  if (reaction_ticks < 0) throw std::invalid_argument("bot reaction must be non-negative");
  if (!(max_speed_mps > 0.0) || !(shot_speed_mps > 0.0)) {
    throw std::invalid_argument("bot speeds must be positive");
  }
}

void StudyParams::validate() const {
  if (noisy_trials < 0) throw std::invalid_argument("noisy trial count must be non-negative");
  if (!(noise.sigma_itd_s >= 0.0) || !(noise.sigma_ild_db >= 0.0)) {
    throw std::invalid_argument("cue noise must be non-negative");
  }
  if (!(speed_mps > 0.0)) throw std::invalid_argument("route speed must be positive");
}

void RunConfig::validate() const {
  server_config().validate();
  bot_a.validate();
  bot_b.validate();
  if (link) link->validate();
  if (tick_limit == 0) throw std::invalid_argument("tick limit must be positive");
  study.validate();
}

net::ServerConfig RunConfig::server_config() const {
  net::ServerConfig s;
  s.table = table;
  s.physics = physics;
  s.cues = cues;
  s.rules = rules;
  s.agent = agent;
  s.mode = mode == RunMode::Pva ? net::Mode::Pva : net::Mode::Pvp;
  s.seed = seed;
  s.game_over_pause_ticks = game_over_pause_ticks;
  return s;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const Entry& e : registry()) keys.push_back(e.key);
  return keys;
}

void set_value(RunConfig& cfg, std::string_view key, std::string_view value) {
  find(key).set(cfg, value);
}

std::string get_value(const RunConfig& cfg, std::string_view key) {
  const Entry& e = find(key);
  if (key.substr(0, 5) == "link." && !cfg.link) {
    throw ConfigError("no link configured");
  }
  return e.get(cfg);
}

std::vector<std::pair<std::string, std::string>> to_pairs(const RunConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const Entry& e : registry()) {
    if (e.key.rfind("link.", 0) == 0 && !cfg.link) continue;
    out.emplace_back(e.key, e.get(cfg));
  }
  return out;
}

void apply_ini(RunConfig& cfg, const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config line " + std::to_string(e.line()) + ": " + e.message());
  }
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      throw ConfigError("key '" + section + "' must be inside a [section]");
    }
    for (const auto& [name, value] : body) {
      set_value(cfg, section + "." + name, value.get_value<std::string>());
    }
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  RunConfig cfg;
  apply_ini(cfg, ss.str());
  return cfg;
}

void apply_override(RunConfig& cfg, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("override '" + std::string(assignment) + "' is not key=value");
  }
  set_value(cfg, assignment.substr(0, eq), assignment.substr(eq + 1));
}

}  // namespace showdown::harness
