#pragma once

#include <map>
#include <string>
#include <vector>

#include "proxysync/errors.hpp"

namespace proxysync {

// Canonical text record: unique sorted keys, "key=value" pairs joined with
// single spaces. The same syntax is used for wire bodies, scenario scripts and
// trace lines, so equality of records implies byte equality of serializations.
//
// Keys match [a-z_][a-z0-9_]*. Values are non-empty and may use
// [A-Za-z0-9_.+:/#|-]. Real numbers are always formatted with fixed six
// decimals ("-0.000000" is canonicalized to "0.000000").
class Record {
 public:
  static std::string format_num(double v);
  static bool valid_key(const std::string& k);
  static bool valid_value(const std::string& v);

  Record& set(const std::string& key, const std::string& value);
  Record& set_num(const std::string& key, double v);
  Record& set_int(const std::string& key, long long v);

  bool has(const std::string& key) const { return fields_.count(key) != 0; }
  // Missing keys and unparsable numbers raise MalformedBody.
  const std::string& get(const std::string& key) const;
  double get_num(const std::string& key) const;
  long long get_int(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  double get_num_or(const std::string& key, double fallback) const;

  std::string serialize() const;
  static Record parse(const std::string& line);  // raises MalformedBody

  bool operator==(const Record&) const = default;
  const std::map<std::string, std::string>& fields() const { return fields_; }
  bool empty() const { return fields_.empty(); }

 private:
  std::map<std::string, std::string> fields_;
};

// Newline-delimited canonical records. Blank lines and '#'-comments are
// accepted on parse and never produced on write.
std::string serialize_records(const std::vector<Record>& records);
std::vector<Record> parse_records(const std::string& text);

}  // namespace proxysync
