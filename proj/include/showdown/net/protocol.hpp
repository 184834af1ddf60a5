#pragma once

/// @file protocol.hpp
/// @brief Wire messages between the authoritative server and its clients.
///
/// Each message is one JSON object with a leading "type" field. Stream
/// transports terminate every object with a newline; message transports send
/// one object per frame. docs/protocol.md lists every field.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "showdown/audio.hpp"
#include "showdown/events.hpp"
#include "showdown/geometry.hpp"
#include "showdown/net/json.hpp"
#include "showdown/physics.hpp"

namespace showdown::net {

inline constexpr int kProtocolVersion = 1;

/// Client greeting.
struct Hello {
  int version = kProtocolVersion;
  std::string name;
  friend bool operator==(const Hello&, const Hello&) = default;
};

/// Server acceptance: the slot the client plays.
struct Join {
  PlayerId player = PlayerId::A;
  std::string mode;
  Tick tick = 0;
  friend bool operator==(const Join&, const Join&) = default;
};

/// Racket state from a client, in the client's own frame.
struct ClientInput {
  std::uint32_t seq = 0;
  std::uint32_t client_tick = 0;
  Vec2 racket_tip;
  Vec2 face_normal{0.0, 1.0};
  Vec2 tip_vel;
  bool trigger_held = false;
  friend bool operator==(const ClientInput&, const ClientInput&) = default;
};

/// Per-recipient world view. Every spatial field, including those inside
/// events, is in the recipient's own frame.
struct Snapshot {
  Tick tick = 0;
  PlayerId player = PlayerId::A;
  Vec2 ball_pos;
  Vec2 ball_vel;
  std::optional<PlayerId> held_by;
  PhaseTag phase = PhaseTag::Serving;
  std::array<int, 2> scores{};
  std::array<int, 2> games{};
  /// Sounds this recipient hears on this tick.
  std::vector<audio::BinauralFrame> cues;
  std::vector<Event> events;
  std::vector<physics::HapticEvent> haptics;
  friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

/// A standalone event, used for notices outside the snapshot stream.
struct EventMessage {
  Event event;
  friend bool operator==(const EventMessage&, const EventMessage&) = default;
};

struct Bye {
  std::string reason;
  friend bool operator==(const Bye&, const Bye&) = default;
};

using Message = std::variant<Hello, Join, ClientInput, Snapshot, EventMessage, Bye>;

std::string_view type_name(const Message& m) noexcept;

/// One JSON object, no trailing newline.
std::string encode(const Message& m);
/// encode(m) plus the stream terminator.
std::string encode_line(const Message& m);

/// Throws DecodeError. Unknown "type" values raise Kind::UnknownType.
Message decode(std::string_view text);

/// Splits a byte stream into newline-terminated messages.
class LineDecoder {
 public:
  struct Item {
    std::optional<Message> message;
    std::optional<DecodeError> error;
  };

  /// Appends bytes and returns every complete line decoded so far. A bad
  /// line yields an error item; later lines still decode.
  std::vector<Item> feed(std::string_view bytes);
  [[nodiscard]] std::size_t pending() const noexcept { return buffer_.size(); }

 private:
  std::string buffer_;
};

}  // namespace showdown::net
