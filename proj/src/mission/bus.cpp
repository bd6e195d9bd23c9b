#include "fieldnav/mission/bus.hpp"

#include <algorithm>

namespace fieldnav {

void Bus::subscribe(const std::string& topic, const std::string& subscriber) {
  const auto it = topics_.find(topic);
  if (it == topics_.end()) {
    throw BusError("unknown topic '" + topic + "'");
  }
  it->second.cursors.try_emplace(subscriber, it->second.next_seq);
}

void Bus::unsubscribe(const std::string& topic, const std::string& subscriber) {
  const auto it = topics_.find(topic);
  if (it == topics_.end()) {
    throw BusError("unknown topic '" + topic + "'");
  }
  it->second.cursors.erase(subscriber);
  trim(it->second);
}

std::uint64_t Bus::published(const std::string& topic) const {
  const auto it = topics_.find(topic);
  if (it == topics_.end()) {
    throw BusError("unknown topic '" + topic + "'");
  }
  return it->second.next_seq;
}

void Bus::trim(Topic& t) {
  std::uint64_t oldest_needed = t.next_seq;
  for (const auto& [name, cursor] : t.cursors) {
    oldest_needed = std::min(oldest_needed, cursor);
  }
  while (t.base < oldest_needed && !t.log.empty()) {
    t.log.pop_front();
    ++t.base;
  }
}

}  // namespace fieldnav
