#pragma once

/// @file config.hpp
/// @brief Run configuration for headless matches, the study harness and the
/// server, loadable from an INI file and overridable key by key.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "showdown/net/link.hpp"
#include "showdown/net/server.hpp"
#include "showdown/route.hpp"

namespace showdown::harness {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class RunMode : std::uint8_t {
  /// Scripted bot as A against the agent as B.
  Pva,
  /// Scripted bots on both sides.
  Bots,
};

std::string_view to_string(RunMode m) noexcept;
RunMode run_mode_from_string(std::string_view s);

/// Stand-in for a human player.
struct BotParams {
  /// Chance of going for each approaching ball.
  double hit_probability = 0.75;
  /// Lateral aim error at the opponent's end wall.
  double aim_sigma_m = 0.08;
  /// The bot acts on what it saw this many ticks ago.
  int reaction_ticks = 6;
  double max_speed_mps = 2.0;
  double shot_speed_mps = 7.0;

  void validate() const;
  friend bool operator==(const BotParams&, const BotParams&) = default;
};

struct StudyParams {
  int noisy_trials = 1000;
  audio::CueNoise noise;
  double speed_mps = 2.0;

  void validate() const;
  friend bool operator==(const StudyParams&, const StudyParams&) = default;
};

struct RunConfig {
  RunMode mode = RunMode::Pva;
  std::uint64_t seed = 1;
  TableGeometry table;
  physics::PhysicsConfig physics;
  audio::CueConfig cues;
  rules::RulesConfig rules;
  agent::AgentConfig agent;
  Tick game_over_pause_ticks = 300;
  BotParams bot_a;
  BotParams bot_b;
  /// When set, bots talk to the server through simulated links and the wire
  /// codec instead of reading the world directly.
  std::optional<net::LinkModel> link;
  Tick tick_limit = 60 * 60 * 60;
  StudyParams study;

  void validate() const;
  /// Server settings for this run. Bots mode maps to two input-driven slots.
  [[nodiscard]] net::ServerConfig server_config() const;
};

/// Every settable key, "section.name", in a fixed order.
std::vector<std::string> config_keys();

/// Sets one key from its text value. Throws ConfigError for an unknown key or
/// a value that does not parse.
void set_value(RunConfig& cfg, std::string_view key, std::string_view value);

/// Current value of a key as text that set_value reads back exactly.
std::string get_value(const RunConfig& cfg, std::string_view key);

/// All keys and values. link.* keys are present only when a link is set.
std::vector<std::pair<std::string, std::string>> to_pairs(const RunConfig& cfg);

/// Reads an INI file: [section] headers, name = value lines, ';' or '#'
/// comments. Keys not set keep their defaults. Throws ConfigError.
RunConfig load_config(const std::string& path);
/// Applies INI text on top of `cfg`.
void apply_ini(RunConfig& cfg, const std::string& text);

/// Parses "section.name=value". Throws ConfigError.
void apply_override(RunConfig& cfg, std::string_view assignment);

}  // namespace showdown::harness
