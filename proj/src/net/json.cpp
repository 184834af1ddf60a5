#include "showdown/net/json.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <system_error>

namespace showdown::net {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr std::string_view kItdKey = "itd_us";

/// Builds an ordered DOM, keeping the text of itd_us numbers.
class DomBuilder {
 public:
  explicit DomBuilder(Json& root) : root_(root) {}

  bool null() { return put(Json(nullptr)), true; }
  bool boolean(bool v) { return put(Json(v)), true; }
  bool number_integer(Json::number_integer_t v) {
    return put(itd_key() ? Json(std::to_string(v)) : Json(v)), true;
  }
  bool number_unsigned(Json::number_unsigned_t v) {
    return put(itd_key() ? Json(std::to_string(v)) : Json(v)), true;
  }
  bool number_float(Json::number_float_t v, const std::string& text) {
    return put(itd_key() ? Json(text) : Json(v)), true;
  }
  bool string(std::string& v) { return put(Json(v)), true; }
  bool binary(Json::binary_t&) { return false; }
  bool start_object(std::size_t) { return stack_.push_back(put(Json::object())), true; }
  bool key(std::string& k) { return key_ = k, true; }
  bool end_object() { return stack_.pop_back(), true; }
  bool start_array(std::size_t) { return stack_.push_back(put(Json::array())), true; }
  bool end_array() { return stack_.pop_back(), true; }
  bool parse_error(std::size_t position, const std::string&, const Json::exception& ex) {
    error_offset = position;
    error_message = ex.what();
    return false;
  }

  std::size_t error_offset = 0;
  std::string error_message;

 private:
  bool itd_key() const {
    return !stack_.empty() && stack_.back()->is_object() && key_ == kItdKey;
  }

  Json* put(Json v) {
    if (stack_.empty()) {
      root_ = std::move(v);
      return &root_;
    }
    Json& top = *stack_.back();
    if (top.is_array()) {
      top.push_back(std::move(v));
      return &top.back();
    }
    top[key_] = std::move(v);
    return &top[key_];
  }

  Json& root_;
  std::vector<Json*> stack_;
  std::string key_;
};

/// Decimal text split as integer digits times a power of ten.
struct Decimal {
  bool negative = false;
  std::string digits;
  int exponent = 0;
};

Decimal split_decimal(std::string_view text) {
  Decimal d;
  std::size_t i = 0;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) d.negative = text[i++] == '-';
  int fraction = 0;
  bool in_fraction = false;
  for (; i < text.size() && text[i] != 'e' && text[i] != 'E'; ++i) {
    if (text[i] == '.') {
      in_fraction = true;
      continue;
    }
    if (text[i] < '0' || text[i] > '9') throw std::invalid_argument("not a decimal number");
    d.digits.push_back(text[i]);
    if (in_fraction) ++fraction;
  }
  int exp = 0;
  if (i < text.size()) {
    std::string_view e = text.substr(i + 1);
    if (!e.empty() && e.front() == '+') e.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(e.data(), e.data() + e.size(), exp);
    if (ec != std::errc() || ptr != e.data() + e.size()) {
      throw std::invalid_argument("bad exponent");
    }
  }
  if (d.digits.empty()) throw std::invalid_argument("not a decimal number");
  const auto nz = d.digits.find_first_not_of('0');
  d.digits = nz == std::string::npos ? "0" : d.digits.substr(nz);
  d.exponent = exp - fraction;
  return d;
}

std::string join_decimal(const Decimal& d) {
  if (d.digits == "0") return "0";
  std::string out = d.negative ? "-" : "";
  const int len = static_cast<int>(d.digits.size());
  if (d.exponent >= 0 && d.exponent <= 6) {
    out += d.digits + std::string(static_cast<std::size_t>(d.exponent), '0');
  } else if (d.exponent < 0 && -d.exponent < len) {
    const auto point = static_cast<std::size_t>(len + d.exponent);
    out += d.digits.substr(0, point) + "." + d.digits.substr(point);
  } else if (d.exponent < 0 && -d.exponent - len < 6) {
    out += "0." + std::string(static_cast<std::size_t>(-d.exponent - len), '0') + d.digits;
  } else {
    out += d.digits + "e" + std::to_string(d.exponent);
  }
  return out;
}

double parse_double(std::string_view text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::invalid_argument("bad number '" + std::string(text) + "'");
  }
  return v;
}

DecodeError bad_field(std::string_view key, std::string_view source, const std::string& what) {
  return DecodeError(DecodeError::Kind::BadField, key_offset(source, key),
                     "field '" + std::string(key) + "': " + what);
}

std::string_view strength_name(physics::HapticStrength s) {
  return s == physics::HapticStrength::Strong ? "strong" : "weak";
}
std::string_view duration_name(physics::HapticDuration d) {
  return d == physics::HapticDuration::Short ? "short" : "continuous";
}

}  // namespace

DecodeError::DecodeError(Kind kind, std::size_t offset, const std::string& what)
    : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"),
      kind_(kind),
      offset_(offset) {}

void JsonWriter::separate() {
  if (after_key_) {
    after_key_ = false;
    return;
  }
  if (!has_items_.empty()) {
    if (has_items_.back()) out_.push_back(',');
    has_items_.back() = true;
  }
}

JsonWriter& JsonWriter::begin_object() {
  separate();
  out_.push_back('{');
  has_items_.push_back(false);
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  out_.push_back('}');
  has_items_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::begin_array() {
  separate();
  out_.push_back('[');
  has_items_.push_back(false);
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  out_.push_back(']');
  has_items_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::key(std::string_view k) {
  separate();
  out_ += Json(k).dump();
  out_.push_back(':');
  after_key_ = true;
  return *this;
}

JsonWriter& JsonWriter::value(double v) { return raw_number(format_double(v)); }

JsonWriter& JsonWriter::value(std::int64_t v) { return raw_number(std::to_string(v)); }

JsonWriter& JsonWriter::value(std::uint64_t v) { return raw_number(std::to_string(v)); }

JsonWriter& JsonWriter::value(bool v) {
  separate();
  out_ += v ? "true" : "false";
  return *this;
}

JsonWriter& JsonWriter::value(std::string_view v) {
  separate();
  out_ += Json(v).dump();
  return *this;
}

JsonWriter& JsonWriter::null() {
  separate();
  out_ += "null";
  return *this;
}

JsonWriter& JsonWriter::raw_number(std::string_view text) {
  separate();
  out_ += text;
  return *this;
}

JsonWriter& JsonWriter::value(const Vec2& v) {
  begin_array();
  value(v.x);
  value(v.y);
  return end_array();
}

std::string format_double(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("cannot encode a non-finite number");
  // "-0" would parse back as the integer 0.
  if (v == 0.0 && std::signbit(v)) return "-0.0";
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw std::invalid_argument("cannot format number");
  return {buf.data(), ptr};
}

std::string seconds_to_micros_text(double seconds) {
  Decimal d = split_decimal(format_double(seconds));
  d.exponent += 6;
  return join_decimal(d);
}

double micros_text_to_seconds(std::string_view text) {
  Decimal d = split_decimal(text);
  d.exponent -= 6;
  const std::string s = (d.negative ? "-" : "") + d.digits + "e" + std::to_string(d.exponent);
  return parse_double(s);
}

Json parse_document(std::string_view text) {
  Json root;
  DomBuilder builder(root);
  const bool ok = Json::sax_parse(text.begin(), text.end(), &builder);
  if (!ok) {
    const std::size_t offset = builder.error_offset == 0 ? 0 : builder.error_offset - 1;
    throw DecodeError(DecodeError::Kind::Malformed, offset, builder.error_message);
  }
  return root;
}

std::size_t key_offset(std::string_view text, std::string_view key) {
  if (text.empty()) return 0;
  const std::string quoted = "\"" + std::string(key) + "\"";
  const auto pos = text.find(quoted);
  return pos == std::string_view::npos ? 0 : pos;
}

const Json& member(const Json& obj, std::string_view key, std::string_view source) {
  if (!obj.is_object()) throw bad_field(key, source, "parent is not an object");
  const auto it = obj.find(std::string(key));
  if (it == obj.end()) throw bad_field(key, source, "missing");
  return *it;
}

double get_double(const Json& obj, std::string_view key, std::string_view source) {
  const Json& v = member(obj, key, source);
  if (!v.is_number()) throw bad_field(key, source, "expected a number");
  return v.get<double>();
}

std::int64_t get_int(const Json& obj, std::string_view key, std::string_view source) {
  const Json& v = member(obj, key, source);
  if (!v.is_number_integer()) throw bad_field(key, source, "expected an integer");
  return v.get<std::int64_t>();
}

std::uint64_t get_uint(const Json& obj, std::string_view key, std::string_view source) {
  const Json& v = member(obj, key, source);
  if (!v.is_number_unsigned()) throw bad_field(key, source, "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

bool get_bool(const Json& obj, std::string_view key, std::string_view source) {
  const Json& v = member(obj, key, source);
  if (!v.is_boolean()) throw bad_field(key, source, "expected a boolean");
  return v.get<bool>();
}

std::string get_string(const Json& obj, std::string_view key, std::string_view source) {
  const Json& v = member(obj, key, source);
  if (!v.is_string()) throw bad_field(key, source, "expected a string");
  return v.get<std::string>();
}

Vec2 get_vec(const Json& obj, std::string_view key, std::string_view source) {
  const Json& v = member(obj, key, source);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw bad_field(key, source, "expected [x, y]");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

PlayerId get_player(const Json& obj, std::string_view key, std::string_view source) {
  try {
    return player_from_string(get_string(obj, key, source));
  } catch (const std::invalid_argument& e) {
    throw bad_field(key, source, e.what());
  }
}

std::array<int, 2> get_pair(const Json& obj, std::string_view key, std::string_view source) {
  const Json& v = member(obj, key, source);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() ||
      !v[1].is_number_integer()) {
    throw bad_field(key, source, "expected [a, b]");
  }
  return {v[0].get<int>(), v[1].get<int>()};
}

void write_event(JsonWriter& w, const Event& e) {
  w.begin_object();
  w.key("tick").value(static_cast<std::uint64_t>(e.tick));
  w.key("kind").value(kind_name(e.payload));
  std::visit(Overloaded{
                 [&](const WallHit& p) { w.key("pos").value(p.pos).key("speed").value(p.speed); },
                 [&](const RacketHit& p) {
                   w.key("player").value(to_string(p.player));
                   w.key("pos").value(p.pos).key("out_vel").value(p.out_vel);
                 },
                 [&](const GoalScored& p) {
                   w.key("scorer").value(to_string(p.scorer)).key("pos").value(p.pos);
                 },
                 [&](const BallDead& p) { w.key("pos").value(p.pos); },
                 [&](const HoldStarted& p) { w.key("player").value(to_string(p.player)); },
                 [&](const HoldSustained& p) { w.key("player").value(to_string(p.player)); },
                 [&](const HoldReleased& p) {
                   w.key("player").value(to_string(p.player)).key("vel").value(p.vel);
                 },
                 [&](const CenterCrossed& p) { w.key("toward").value(to_string(p.toward)); },
                 [&](const ServeStarted& p) {
                   w.key("server").value(to_string(p.server)).key("vel").value(p.vel);
                 },
                 [&](const Announcement& p) {
                   w.key("scorer").value(to_string(p.scorer));
                   w.key("score").begin_array().value(p.score[0]).value(p.score[1]).end_array();
                 },
                 [&](const PhaseChanged& p) { w.key("phase").value(to_string(p.phase)); },
                 [&](const GameEnded& p) {
                   w.key("winner").value(to_string(p.winner));
                   w.key("score").begin_array().value(p.score[0]).value(p.score[1]).end_array();
                 },
                 [&](const MatchEnded& p) {
                   w.key("winner").value(to_string(p.winner));
                   w.key("games").begin_array().value(p.games[0]).value(p.games[1]).end_array();
                 },
             },
             e.payload);
  w.end_object();
}

Event read_event(const Json& j, std::string_view source) {
  const std::uint64_t tick = get_uint(j, "tick", source);
  if (tick > std::numeric_limits<Tick>::max()) throw bad_field("tick", source, "out of range");
  Event e;
  e.tick = static_cast<Tick>(tick);
  const std::string kind = get_string(j, "kind", source);
  if (kind == "wall_hit") {
    e.payload = WallHit{get_vec(j, "pos", source), get_double(j, "speed", source)};
  } else if (kind == "racket_hit") {
    e.payload = RacketHit{get_player(j, "player", source), get_vec(j, "pos", source),
                          get_vec(j, "out_vel", source)};
  } else if (kind == "goal") {
    e.payload = GoalScored{get_player(j, "scorer", source), get_vec(j, "pos", source)};
  } else if (kind == "ball_dead") {
    e.payload = BallDead{get_vec(j, "pos", source)};
  } else if (kind == "hold_started") {
    e.payload = HoldStarted{get_player(j, "player", source)};
  } else if (kind == "hold_sustained") {
    e.payload = HoldSustained{get_player(j, "player", source)};
  } else if (kind == "hold_released") {
    e.payload = HoldReleased{get_player(j, "player", source), get_vec(j, "vel", source)};
  } else if (kind == "center_crossed") {
    e.payload = CenterCrossed{get_player(j, "toward", source)};
  } else if (kind == "serve") {
    e.payload = ServeStarted{get_player(j, "server", source), get_vec(j, "vel", source)};
  } else if (kind == "announcement") {
    e.payload = Announcement{get_player(j, "scorer", source), get_pair(j, "score", source)};
  } else if (kind == "phase") {
    try {
      e.payload = PhaseChanged{phase_from_string(get_string(j, "phase", source))};
    } catch (const std::invalid_argument& ex) {
      throw bad_field("phase", source, ex.what());
    }
  } else if (kind == "game_over") {
    e.payload = GameEnded{get_player(j, "winner", source), get_pair(j, "score", source)};
  } else if (kind == "match_over") {
    e.payload = MatchEnded{get_player(j, "winner", source), get_pair(j, "games", source)};
  } else {
    throw bad_field("kind", source, "unknown event kind '" + kind + "'");
  }
  return e;
}

void write_frame(JsonWriter& w, const audio::BinauralFrame& f) {
  w.begin_object();
  w.key("az").value(f.azimuth);
  w.key("el").value(f.elevation);
  w.key("dist").value(f.distance);
  w.key("itd_us").raw_number(seconds_to_micros_text(f.itd));
  w.key("ild_db").value(f.ild_db);
  w.key("gl").value(f.left_gain);
  w.key("gr").value(f.right_gain);
  w.key("kind").value(audio::to_string(f.source_kind));
  w.end_object();
}

audio::BinauralFrame read_frame(const Json& j, std::string_view source) {
  audio::BinauralFrame f;
  f.azimuth = get_double(j, "az", source);
  f.elevation = get_double(j, "el", source);
  f.distance = get_double(j, "dist", source);
  const Json& itd = member(j, kItdKey, source);
  try {
    if (itd.is_string()) {
      f.itd = micros_text_to_seconds(itd.get<std::string>());
    } else if (itd.is_number()) {
      f.itd = micros_text_to_seconds(format_double(itd.get<double>()));
    } else {
      throw std::invalid_argument("expected a number");
    }
  } catch (const std::invalid_argument& e) {
    throw bad_field(kItdKey, source, e.what());
  }
  f.ild_db = get_double(j, "ild_db", source);
  f.left_gain = get_double(j, "gl", source);
  f.right_gain = get_double(j, "gr", source);
  try {
    f.source_kind = audio::source_kind_from_string(get_string(j, "kind", source));
  } catch (const std::invalid_argument& e) {
    throw bad_field("kind", source, e.what());
  }
  return f;
}

void write_haptic(JsonWriter& w, const physics::HapticEvent& h) {
  w.begin_object();
  w.key("player").value(to_string(h.player));
  w.key("hz").value(h.pulse_rate_hz);
  w.key("strength").value(strength_name(h.strength));
  w.key("duration").value(duration_name(h.duration));
  w.end_object();
}

physics::HapticEvent read_haptic(const Json& j, std::string_view source) {
  physics::HapticEvent h;
  h.player = get_player(j, "player", source);
  h.pulse_rate_hz = get_double(j, "hz", source);
  const std::string strength = get_string(j, "strength", source);
  const std::string duration = get_string(j, "duration", source);
  if (strength != "strong" && strength != "weak") throw bad_field("strength", source, strength);
  if (duration != "short" && duration != "continuous") {
    throw bad_field("duration", source, duration);
  }
  h.strength = strength == "strong" ? physics::HapticStrength::Strong
                                    : physics::HapticStrength::Weak;
  h.duration = duration == "short" ? physics::HapticDuration::Short
                                   : physics::HapticDuration::Continuous;
  return h;
}

}  // namespace showdown::net
