#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "proxysync/record.hpp"

namespace proxysync {

enum class MessageKind : std::uint8_t {
  PoseUpdate = 1,
  BindingUpdate = 2,
  GestureEvent = 3,
  GameEvent = 4,
  Ack = 5,
};

const char* message_kind_name(MessageKind k);

// Sender logical timestamps travel as whole microseconds so that encoding is
// exact and replays are byte-stable.
inline std::int64_t to_micros(double seconds) {
  return std::llround(seconds * 1e6);
}
inline double from_micros(std::int64_t us) { return static_cast<double>(us) / 1e6; }

struct Envelope {
  MessageKind kind = MessageKind::PoseUpdate;
  std::uint8_t room_id = 0;
  std::uint32_t seq = 0;          // strictly increasing per (room, kind)
  std::int64_t sent_at_us = 0;    // sender logical clock, microseconds
  Record body;

  double sent_at() const { return from_micros(sent_at_us); }
  bool operator==(const Envelope&) const = default;
};

// Wire layout, big-endian multi-byte fields:
//   "HPRX" | version=1 | kind | room | seq u32 | sent_at_us i64 | body_len u16 | body
// The body is the canonical text form of the record (sorted keys, fixed
// 6-decimal reals), so decode(encode(e)) == e.
std::vector<std::uint8_t> encode(const Envelope& e);

// Raises BadMagic, UnknownVersion, TruncatedBody, or MalformedBody.
Envelope decode(const std::vector<std::uint8_t>& bytes);

inline constexpr std::size_t kHeaderSize = 4 + 1 + 1 + 1 + 4 + 8 + 2;

}  // namespace proxysync
