#include "showdown/net/protocol.hpp"

#include <limits>

namespace showdown::net {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::uint32_t get_u32(const Json& j, std::string_view key, std::string_view source) {
  const std::uint64_t v = get_uint(j, key, source);
  if (v > std::numeric_limits<std::uint32_t>::max()) {
    throw DecodeError(DecodeError::Kind::BadField, key_offset(source, key),
                      "field '" + std::string(key) + "' out of range");
  }
  return static_cast<std::uint32_t>(v);
}

void write_snapshot(JsonWriter& w, const Snapshot& s) {
  w.key("tick").value(static_cast<std::uint64_t>(s.tick));
  w.key("player").value(to_string(s.player));
  w.key("ball").begin_object();
  w.key("pos").value(s.ball_pos);
  w.key("vel").value(s.ball_vel);
  w.key("held_by");
  if (s.held_by) {
    w.value(to_string(*s.held_by));
  } else {
    w.null();
  }
  w.end_object();
  w.key("phase").value(to_string(s.phase));
  w.key("scores").begin_array().value(s.scores[0]).value(s.scores[1]).end_array();
  w.key("games").begin_array().value(s.games[0]).value(s.games[1]).end_array();
  w.key("cues").begin_array();
  for (const auto& f : s.cues) write_frame(w, f);
  w.end_array();
  w.key("events").begin_array();
  for (const auto& e : s.events) write_event(w, e);
  w.end_array();
  w.key("haptics").begin_array();
  for (const auto& h : s.haptics) write_haptic(w, h);
  w.end_array();
}

Snapshot read_snapshot(const Json& j, std::string_view source) {
  Snapshot s;
  s.tick = get_u32(j, "tick", source);
  s.player = get_player(j, "player", source);
  const Json& ball = member(j, "ball", source);
  s.ball_pos = get_vec(ball, "pos", source);
  s.ball_vel = get_vec(ball, "vel", source);
  if (!member(ball, "held_by", source).is_null()) s.held_by = get_player(ball, "held_by", source);
  try {
    s.phase = phase_from_string(get_string(j, "phase", source));
  } catch (const std::invalid_argument& e) {
    throw DecodeError(DecodeError::Kind::BadField, key_offset(source, "phase"), e.what());
  }
  s.scores = get_pair(j, "scores", source);
  s.games = get_pair(j, "games", source);
  auto list = [&](std::string_view key) -> const Json& {
    const Json& v = member(j, key, source);
    if (!v.is_array()) {
      throw DecodeError(DecodeError::Kind::BadField, key_offset(source, key),
                        "field '" + std::string(key) + "': expected an array");
    }
    return v;
  };
  for (const Json& f : list("cues")) s.cues.push_back(read_frame(f, source));
  for (const Json& e : list("events")) s.events.push_back(read_event(e, source));
  for (const Json& h : list("haptics")) s.haptics.push_back(read_haptic(h, source));
  return s;
}

}  // namespace

std::string_view type_name(const Message& m) noexcept {
  return std::visit(Overloaded{
                        [](const Hello&) { return std::string_view("hello"); },
                        [](const Join&) { return std::string_view("join"); },
                        [](const ClientInput&) { return std::string_view("input"); },
                        [](const Snapshot&) { return std::string_view("snapshot"); },
                        [](const EventMessage&) { return std::string_view("event"); },
                        [](const Bye&) { return std::string_view("bye"); },
                    },
                    m);
}

std::string encode(const Message& m) {
  JsonWriter w;
  w.begin_object();
  w.key("type").value(type_name(m));
  std::visit(Overloaded{
                 [&](const Hello& h) { w.key("version").value(h.version).key("name").value(h.name); },
                 [&](const Join& j) {
                   w.key("player").value(to_string(j.player));
                   w.key("mode").value(j.mode);
                   w.key("tick").value(static_cast<std::uint64_t>(j.tick));
                 },
                 [&](const ClientInput& in) {
                   w.key("seq").value(static_cast<std::uint64_t>(in.seq));
                   w.key("client_tick").value(static_cast<std::uint64_t>(in.client_tick));
                   w.key("tip").value(in.racket_tip);
                   w.key("normal").value(in.face_normal);
                   w.key("tip_vel").value(in.tip_vel);
                   w.key("trigger").value(in.trigger_held);
                 },
                 [&](const Snapshot& s) { write_snapshot(w, s); },
                 [&](const EventMessage& e) {
                   w.key("event");
                   write_event(w, e.event);
                 },
                 [&](const Bye& b) { w.key("reason").value(b.reason); },
             },
             m);
  w.end_object();
  return w.take();
}

std::string encode_line(const Message& m) { return encode(m) + "\n"; }

Message decode(std::string_view text) {
  const Json j = parse_document(text);
  if (!j.is_object()) throw DecodeError(DecodeError::Kind::Malformed, 0, "message is not an object");
  const std::string type = get_string(j, "type", text);
  if (type == "hello") {
    const std::int64_t version = get_int(j, "version", text);
    return Hello{static_cast<int>(version), get_string(j, "name", text)};
  }
  if (type == "join") {
    return Join{get_player(j, "player", text), get_string(j, "mode", text),
                get_u32(j, "tick", text)};
  }
  if (type == "input") {
    ClientInput in;
    in.seq = get_u32(j, "seq", text);
    in.client_tick = get_u32(j, "client_tick", text);
    in.racket_tip = get_vec(j, "tip", text);
    in.face_normal = get_vec(j, "normal", text);
    in.tip_vel = get_vec(j, "tip_vel", text);
    in.trigger_held = get_bool(j, "trigger", text);
    return in;
  }
  if (type == "snapshot") return read_snapshot(j, text);
  if (type == "event") return EventMessage{read_event(member(j, "event", text), text)};
  if (type == "bye") return Bye{get_string(j, "reason", text)};
  throw DecodeError(DecodeError::Kind::UnknownType, key_offset(text, "type"),
                    "unknown message type '" + type + "'");
}

std::vector<LineDecoder::Item> LineDecoder::feed(std::string_view bytes) {
  buffer_.append(bytes);
  std::vector<Item> out;
  std::size_t start = 0;
  for (auto nl = buffer_.find('\n', start); nl != std::string::npos;
       nl = buffer_.find('\n', start)) {
    const std::string_view line(buffer_.data() + start, nl - start);
    start = nl + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      out.push_back({decode(line), std::nullopt});
    } catch (const DecodeError& e) {
      out.push_back({std::nullopt, e});
    }
  }
  buffer_.erase(0, start);
  return out;
}

}  // namespace showdown::net
