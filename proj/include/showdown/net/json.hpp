#pragma once

/// @file json.hpp
/// @brief JSON building blocks shared by the wire codec and the replay log.
///
/// Output is written by hand so field order is fixed and every double is
/// printed in its shortest round-trip form. Input goes through nlohmann.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "showdown/audio.hpp"
#include "showdown/events.hpp"
#include "showdown/geometry.hpp"
#include "showdown/physics.hpp"

namespace showdown::net {

using Json = nlohmann::ordered_json;

class DecodeError : public std::runtime_error {
 public:
  enum class Kind : std::uint8_t { Malformed, UnknownType, BadField };

  DecodeError(Kind kind, std::size_t offset, const std::string& what);

  [[nodiscard]] Kind kind() const noexcept { return kind_; }
  /// Byte offset into the decoded text where the problem was found.
  [[nodiscard]] std::size_t offset() const noexcept { return offset_; }

 private:
  Kind kind_;
  std::size_t offset_;
};

class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(std::string_view k);

  JsonWriter& value(double v);
  JsonWriter& value(std::int64_t v);
  JsonWriter& value(std::uint64_t v);
  JsonWriter& value(int v) { return value(static_cast<std::int64_t>(v)); }
  JsonWriter& value(unsigned v) { return value(static_cast<std::uint64_t>(v)); }
  JsonWriter& value(bool v);
  JsonWriter& value(std::string_view v);
  JsonWriter& value(const char* v) { return value(std::string_view(v)); }
  JsonWriter& null();
  /// Writes `text` verbatim; it must already be a valid JSON number.
  JsonWriter& raw_number(std::string_view text);

  JsonWriter& value(const Vec2& v);

  [[nodiscard]] const std::string& str() const noexcept { return out_; }
  std::string take() { return std::move(out_); }

 private:
  void separate();

  std::string out_;
  std::vector<bool> has_items_;
  bool after_key_ = false;
};

/// Shortest decimal text that parses back to exactly `v`. Throws
/// std::invalid_argument for NaN or infinity.
std::string format_double(double v);

/// Parses one JSON document. Numbers under the key "itd_us" keep their exact
/// text (as a JSON string) so microsecond values convert back to seconds
/// without rounding. Throws DecodeError(Malformed) with the failing offset.
Json parse_document(std::string_view text);

/// Seconds to microsecond text and back, exact in both directions.
std::string seconds_to_micros_text(double seconds);
double micros_text_to_seconds(std::string_view text);

/// Offset of the first occurrence of `"key"` in `text`, or 0.
std::size_t key_offset(std::string_view text, std::string_view key);

// Field access helpers. All throw DecodeError(BadField) on a missing or
// mistyped member, with the offset of the key in `source` when known.
const Json& member(const Json& obj, std::string_view key, std::string_view source = {});
double get_double(const Json& obj, std::string_view key, std::string_view source = {});
std::int64_t get_int(const Json& obj, std::string_view key, std::string_view source = {});
std::uint64_t get_uint(const Json& obj, std::string_view key, std::string_view source = {});
bool get_bool(const Json& obj, std::string_view key, std::string_view source = {});
std::string get_string(const Json& obj, std::string_view key, std::string_view source = {});
Vec2 get_vec(const Json& obj, std::string_view key, std::string_view source = {});
PlayerId get_player(const Json& obj, std::string_view key, std::string_view source = {});
std::array<int, 2> get_pair(const Json& obj, std::string_view key, std::string_view source = {});

/// {"tick":..,"kind":..,<payload fields>}
void write_event(JsonWriter& w, const Event& e);
Event read_event(const Json& j, std::string_view source = {});

/// {"az","el","dist","itd_us","ild_db","gl","gr","kind"}
void write_frame(JsonWriter& w, const audio::BinauralFrame& f);
audio::BinauralFrame read_frame(const Json& j, std::string_view source = {});

void write_haptic(JsonWriter& w, const physics::HapticEvent& h);
physics::HapticEvent read_haptic(const Json& j, std::string_view source = {});

}  // namespace showdown::net
