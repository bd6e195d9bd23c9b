#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <typeindex>
#include <vector>

namespace fieldnav {

class BusError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

template <class T>
struct Message {
  std::shared_ptr<const T> payload;
  std::uint64_t tick{0};
  std::uint64_t seq{0};

  const T& operator*() const { return *payload; }
  const T* operator->() const { return payload.get(); }
};

/// Deterministic publish/subscribe with one tick of latency.
///
/// A message published during tick t becomes visible to pollers from tick t + 1 on. Each subscriber
/// has its own cursor, so every subscriber sees every message of a topic in publication order.
/// Messages already read by all subscribers are dropped.
class Bus {
 public:
  template <class T>
  void advertise(const std::string& topic) {
    auto [it, inserted] = topics_.try_emplace(topic, Topic{std::type_index(typeid(T))});
    if (!inserted && it->second.type != std::type_index(typeid(T))) {
      throw BusError("topic '" + topic + "' already advertised with a different payload type");
    }
  }

  /// Registers a cursor; a subscriber only sees messages published after it subscribed.
  void subscribe(const std::string& topic, const std::string& subscriber);
  void unsubscribe(const std::string& topic, const std::string& subscriber);

  template <class T>
  void publish(const std::string& topic, T payload) {
    Topic& t = checked<T>(topic);
    t.log.push_back({std::make_shared<const T>(std::move(payload)), tick_, t.next_seq++});
    trim(t);
  }

  /// Every unread message of `topic` published before the current tick, oldest first.
  template <class T>
  std::vector<Message<T>> poll(const std::string& topic, const std::string& subscriber) {
    Topic& t = checked<T>(topic);
    const auto cursor = t.cursors.find(subscriber);
    if (cursor == t.cursors.end()) {
      throw BusError("'" + subscriber + "' is not subscribed to '" + topic + "'");
    }
    std::vector<Message<T>> out;
    std::uint64_t& next = cursor->second;
    while (next < t.base + t.log.size()) {
      const Record& r = t.log[static_cast<std::size_t>(next - t.base)];
      if (r.tick >= tick_) {
        break;
      }
      out.push_back({std::static_pointer_cast<const T>(r.payload), r.tick, r.seq});
      ++next;
    }
    trim(t);
    return out;
  }

  /// Convenience: the newest message from a poll, if any.
  template <class T>
  std::shared_ptr<const T> poll_latest(const std::string& topic, const std::string& subscriber) {
    auto messages = poll<T>(topic, subscriber);
    return messages.empty() ? nullptr : messages.back().payload;
  }

  void set_tick(std::uint64_t tick) { tick_ = tick; }
  [[nodiscard]] std::uint64_t tick() const { return tick_; }

  /// Messages ever published on the topic.
  [[nodiscard]] std::uint64_t published(const std::string& topic) const;

 private:
  struct Record {
    std::shared_ptr<const void> payload;
    std::uint64_t tick;
    std::uint64_t seq;
  };

  struct Topic {
    std::type_index type;
    std::deque<Record> log{};
    std::uint64_t base{0};  ///< sequence number of log.front()
    std::uint64_t next_seq{0};
    std::map<std::string, std::uint64_t> cursors{};
  };

  template <class T>
  Topic& checked(const std::string& topic) {
    const auto it = topics_.find(topic);
    if (it == topics_.end()) {
      throw BusError("unknown topic '" + topic + "'");
    }
    if (it->second.type != std::type_index(typeid(T))) {
      throw BusError("payload type mismatch on topic '" + topic + "'");
    }
    return it->second;
  }

  static void trim(Topic& t);

  std::map<std::string, Topic> topics_;
  std::uint64_t tick_{0};
};

}  // namespace fieldnav
