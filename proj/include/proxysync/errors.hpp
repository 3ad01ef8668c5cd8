#pragma once

#include <stdexcept>
#include <string>

namespace proxysync {

enum class Err {
  NonCardinalRotation,
  EmptyRoomSet,
  BadTileIndex,
  CommandOutOfLimits,
  UnboundObject,
  MissingRoomProxy,
  EmptyPool,
  OracleTooLarge,
  DegenerateAxis,
  BadMagic,
  UnknownVersion,
  TruncatedBody,
  MalformedBody,
  CellOccupied,
  OutOfTurn,
  Underflow,
  ScriptValidation,
};

inline const char* err_name(Err e) {
  switch (e) {
    case Err::NonCardinalRotation: return "NonCardinalRotation";
    case Err::EmptyRoomSet: return "EmptyRoomSet";
    case Err::BadTileIndex: return "BadTileIndex";
    case Err::CommandOutOfLimits: return "CommandOutOfLimits";
    case Err::UnboundObject: return "UnboundObject";
    case Err::MissingRoomProxy: return "MissingRoomProxy";
    case Err::EmptyPool: return "EmptyPool";
    case Err::OracleTooLarge: return "OracleTooLarge";
    case Err::DegenerateAxis: return "DegenerateAxis";
    case Err::BadMagic: return "BadMagic";
    case Err::UnknownVersion: return "UnknownVersion";
    case Err::TruncatedBody: return "TruncatedBody";
    case Err::MalformedBody: return "MalformedBody";
    case Err::CellOccupied: return "CellOccupied";
    case Err::OutOfTurn: return "OutOfTurn";
    case Err::Underflow: return "Underflow";
    case Err::ScriptValidation: return "ScriptValidation";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& what)
      : std::runtime_error(std::string(err_name(code)) + ": " + what), code_(code) {}
  Err code() const { return code_; }

 private:
  Err code_;
};

[[noreturn]] inline void raise(Err code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace proxysync
