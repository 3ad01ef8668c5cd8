#include "proxysync/wire.hpp"

#include <string>

#include "proxysync/errors.hpp"

namespace proxysync {

const char* message_kind_name(MessageKind k) {
  switch (k) {
    case MessageKind::PoseUpdate: return "pose";
    case MessageKind::BindingUpdate: return "binding";
    case MessageKind::GestureEvent: return "gesture";
    case MessageKind::GameEvent: return "game";
    case MessageKind::Ack: return "ack";
  }
  return "unknown";
}

namespace {

constexpr std::uint8_t kMagic[4] = {'H', 'P', 'R', 'X'};
constexpr std::uint8_t kVersion = 1;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) {
    out.push_back(static_cast<std::uint8_t>((v >> shift) & 0xFF));
  }
}

void put_i64(std::vector<std::uint8_t>& out, std::int64_t v) {
  auto u = static_cast<std::uint64_t>(v);
  for (int shift = 56; shift >= 0; shift -= 8) {
    out.push_back(static_cast<std::uint8_t>((u >> shift) & 0xFF));
  }
}

std::uint32_t get_u32(const std::vector<std::uint8_t>& b, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v = (v << 8) | b[at + i];
  return v;
}

std::int64_t get_i64(const std::vector<std::uint8_t>& b, std::size_t at) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | b[at + i];
  return static_cast<std::int64_t>(v);
}

}  // namespace

std::vector<std::uint8_t> encode(const Envelope& e) {
  std::string body = e.body.serialize();
  if (body.size() > 0xFFFF) raise(Err::MalformedBody, "body exceeds 65535 bytes");
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderSize + body.size());
  for (std::uint8_t m : kMagic) out.push_back(m);
  out.push_back(kVersion);
  out.push_back(static_cast<std::uint8_t>(e.kind));
  out.push_back(e.room_id);
  put_u32(out, e.seq);
  put_i64(out, e.sent_at_us);
  out.push_back(static_cast<std::uint8_t>((body.size() >> 8) & 0xFF));
  out.push_back(static_cast<std::uint8_t>(body.size() & 0xFF));
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

Envelope decode(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 4) raise(Err::TruncatedBody, "shorter than the magic");
  for (int i = 0; i < 4; ++i) {
    if (bytes[i] != kMagic[i]) raise(Err::BadMagic, "magic mismatch");
  }
  if (bytes.size() < kHeaderSize) raise(Err::TruncatedBody, "incomplete header");
  if (bytes[4] != kVersion) {
    raise(Err::UnknownVersion, "version " + std::to_string(bytes[4]));
  }
  std::uint8_t kind_byte = bytes[5];
  if (kind_byte < 1 || kind_byte > 5) {
    raise(Err::MalformedBody, "unknown message kind " + std::to_string(kind_byte));
  }
  Envelope e;
  e.kind = static_cast<MessageKind>(kind_byte);
  e.room_id = bytes[6];
  e.seq = get_u32(bytes, 7);
  e.sent_at_us = get_i64(bytes, 11);
  std::size_t body_len = (static_cast<std::size_t>(bytes[19]) << 8) | bytes[20];
  if (bytes.size() != kHeaderSize + body_len) {
    raise(Err::TruncatedBody, "body length does not match the frame");
  }
  std::string body(bytes.begin() + kHeaderSize, bytes.end());
  e.body = Record::parse(body);  // raises MalformedBody
  return e;
}

}  // namespace proxysync
