#include "fieldnav/core/config_file.hpp"

#include <charconv>
#include <sstream>

namespace fieldnav {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& text, int line) {
  T value{};
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError("line " + std::to_string(line) + ": invalid value '" + text + "' for key '" + key + "'");
  }
  return value;
}

}  // namespace

KeyValueFile KeyValueFile::parse(std::string_view text) {
  KeyValueFile file;
  int line_number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto newline = text.find('\n', pos);
    const auto raw = text.substr(pos, newline == std::string_view::npos ? std::string_view::npos : newline - pos);
    pos = newline == std::string_view::npos ? text.size() + 1 : newline + 1;
    ++line_number;

    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_number) + ": expected 'key = value'");
    }
    const std::string key{trim(line.substr(0, eq))};
    const std::string value{trim(line.substr(eq + 1))};
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(line_number) + ": empty key");
    }
    if (file.entries_.contains(key)) {
      throw ConfigError("line " + std::to_string(line_number) + ": duplicate key '" + key + "'");
    }
    file.entries_[key] = Entry{value, line_number};
  }
  return file;
}

const KeyValueFile::Entry* KeyValueFile::find(const std::string& key) {
  const auto it = entries_.find(key);
  if (it == entries_.end()) {
    return nullptr;
  }
  consumed_.insert(key);
  return &it->second;
}

double KeyValueFile::get_double(const std::string& key, double fallback) {
  const Entry* e = find(key);
  return e != nullptr ? parse_number<double>(key, e->value, e->line) : fallback;
}

std::int64_t KeyValueFile::get_int(const std::string& key, std::int64_t fallback) {
  const Entry* e = find(key);
  return e != nullptr ? parse_number<std::int64_t>(key, e->value, e->line) : fallback;
}

std::uint64_t KeyValueFile::get_uint(const std::string& key, std::uint64_t fallback) {
  const Entry* e = find(key);
  return e != nullptr ? parse_number<std::uint64_t>(key, e->value, e->line) : fallback;
}

bool KeyValueFile::get_bool(const std::string& key, bool fallback) {
  const Entry* e = find(key);
  if (e == nullptr) {
    return fallback;
  }
  if (e->value == "true" || e->value == "1") {
    return true;
  }
  if (e->value == "false" || e->value == "0") {
    return false;
  }
  throw ConfigError("line " + std::to_string(e->line) + ": expected true/false for key '" + key + "'");
}

std::string KeyValueFile::get_string(const std::string& key, const std::string& fallback) {
  const Entry* e = find(key);
  return e != nullptr ? e->value : fallback;
}

std::vector<double> KeyValueFile::get_doubles(const std::string& key, const std::vector<double>& fallback) {
  const Entry* e = find(key);
  if (e == nullptr) {
    return fallback;
  }
  std::vector<double> values;
  std::istringstream in(e->value);
  std::string token;
  while (in >> token) {
    values.push_back(parse_number<double>(key, token, e->line));
  }
  return values;
}

void KeyValueFile::reject_unconsumed() const {
  std::string unknown;
  for (const auto& [key, entry] : entries_) {
    if (!consumed_.contains(key)) {
      unknown += (unknown.empty() ? "" : ", ") + key + " (line " + std::to_string(entry.line) + ")";
    }
  }
  if (!unknown.empty()) {
    throw ConfigError("unknown configuration keys: " + unknown);
  }
}

const std::map<std::string, std::string> KeyValueFile::values() const {
  std::map<std::string, std::string> out;
  for (const auto& [key, entry] : entries_) {
    out.emplace(key, entry.value);
  }
  return out;
}

std::string format_double(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ec == std::errc{} ? ptr : buffer);
}

}  // namespace fieldnav
