#include "proxysync/record.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace proxysync {

std::string Record::format_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  std::string s(buf);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

bool Record::valid_key(const std::string& k) {
  if (k.empty()) return false;
  if (!(std::islower(static_cast<unsigned char>(k[0])) || k[0] == '_')) return false;
  for (char c : k) {
    unsigned char u = static_cast<unsigned char>(c);
    if (!(std::islower(u) || std::isdigit(u) || c == '_')) return false;
  }
  return true;
}

bool Record::valid_value(const std::string& v) {
  if (v.empty()) return false;
  for (char c : v) {
    unsigned char u = static_cast<unsigned char>(c);
    if (std::isalnum(u)) continue;
    switch (c) {
      case '_': case '.': case '+': case ':': case '/': case '#':
      case '|': case '-':
        continue;
      default:
        return false;
    }
  }
  return true;
}

Record& Record::set(const std::string& key, const std::string& value) {
  if (!valid_key(key)) raise(Err::MalformedBody, "invalid key '" + key + "'");
  if (!valid_value(value)) {
    raise(Err::MalformedBody, "invalid value '" + value + "' for key '" + key + "'");
  }
  fields_[key] = value;
  return *this;
}

Record& Record::set_num(const std::string& key, double v) {
  return set(key, format_num(v));
}

Record& Record::set_int(const std::string& key, long long v) {
  return set(key, std::to_string(v));
}

const std::string& Record::get(const std::string& key) const {
  auto it = fields_.find(key);
  if (it == fields_.end()) raise(Err::MalformedBody, "missing key '" + key + "'");
  return it->second;
}

double Record::get_num(const std::string& key) const {
  const std::string& s = get(key);
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    raise(Err::MalformedBody, "non-numeric value for key '" + key + "'");
  }
  return v;
}

long long Record::get_int(const std::string& key) const {
  const std::string& s = get(key);
  char* end = nullptr;
  long long v = std::strtoll(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0') {
    raise(Err::MalformedBody, "non-integer value for key '" + key + "'");
  }
  return v;
}

std::string Record::get_or(const std::string& key, const std::string& fallback) const {
  auto it = fields_.find(key);
  return it == fields_.end() ? fallback : it->second;
}

double Record::get_num_or(const std::string& key, double fallback) const {
  return has(key) ? get_num(key) : fallback;
}

std::string Record::serialize() const {
  std::string out;
  bool first = true;
  for (const auto& [k, v] : fields_) {
    if (!first) out += ' ';
    first = false;
    out += k;
    out += '=';
    out += v;
  }
  return out;
}

Record Record::parse(const std::string& line) {
  Record rec;
  size_t i = 0;
  const size_t n = line.size();
  while (i < n) {
    while (i < n && line[i] == ' ') ++i;
    if (i >= n) break;
    size_t eq = line.find('=', i);
    size_t sp = line.find(' ', i);
    if (eq == std::string::npos || (sp != std::string::npos && sp < eq)) {
      raise(Err::MalformedBody, "token without '=' in record");
    }
    std::string key = line.substr(i, eq - i);
    size_t end = (sp == std::string::npos) ? n : line.find(' ', eq + 1);
    if (end == std::string::npos) end = n;
    std::string value = line.substr(eq + 1, end - (eq + 1));
    if (rec.has(key)) raise(Err::MalformedBody, "duplicate key '" + key + "'");
    rec.set(key, value);
    i = end;
  }
  if (rec.empty()) raise(Err::MalformedBody, "empty record");
  return rec;
}

std::string serialize_records(const std::vector<Record>& records) {
  std::string out;
  for (const Record& r : records) {
    out += r.serialize();
    out += '\n';
  }
  return out;
}

std::vector<Record> parse_records(const std::string& text) {
  std::vector<Record> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    size_t stop = line.find_last_not_of(" \t\r");
    std::string body = line.substr(start, stop - start + 1);
    if (body.empty() || body[0] == '#') continue;
    out.push_back(Record::parse(body));
  }
  return out;
}

}  // namespace proxysync
