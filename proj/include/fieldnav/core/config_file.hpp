#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fieldnav {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat `key = value` text. Blank lines and lines starting with `#` are ignored.
///
/// Every getter marks its key as consumed; `reject_unconsumed()` then turns typos and stale keys
/// into errors instead of silently falling back to defaults.
class KeyValueFile {
 public:
  KeyValueFile() = default;

  static KeyValueFile parse(std::string_view text);

  [[nodiscard]] bool has(const std::string& key) const { return entries_.contains(key); }

  double get_double(const std::string& key, double fallback);
  std::int64_t get_int(const std::string& key, std::int64_t fallback);
  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback);
  bool get_bool(const std::string& key, bool fallback);
  std::string get_string(const std::string& key, const std::string& fallback);
  std::vector<double> get_doubles(const std::string& key, const std::vector<double>& fallback);

  void reject_unconsumed() const;

  void set(const std::string& key, const std::string& value) { entries_[key] = Entry{value, 0}; }

  [[nodiscard]] const std::map<std::string, std::string> values() const;

 private:
  struct Entry {
    std::string value;
    int line{0};
  };

  const Entry* find(const std::string& key);

  std::map<std::string, Entry> entries_;
  std::set<std::string> consumed_;
};

/// Round-trippable text form of a double (shortest form that parses back to the same value).
std::string format_double(double value);

}  // namespace fieldnav
