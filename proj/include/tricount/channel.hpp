#pragma once

#include <condition_variable>
#include <cstddef>
#include <deque>
#include <mutex>
#include <optional>
#include <vector>

#include "tricount/types.hpp"

namespace tricount {

// Blocking message channel with an explicit close event. Capacity 0 gives
// rendezvous semantics: send returns only after a receiver has taken the
// value. Safe for multiple senders and receivers.
template <class T>
class Channel {
 public:
  explicit Channel(std::size_t capacity) : capacity_(capacity) {}

  void send(T value) {
    std::unique_lock lk(mu_);
    not_full_.wait(lk, [&] { return closed_ || q_.size() < slots(); });
    if (closed_) throw ProtocolViolation("send on closed channel");
    q_.push_back(std::move(value));
    not_empty_.notify_one();
    if (capacity_ == 0) {
      const std::uint64_t my_seq = ++push_seq_;
      taken_.wait(lk, [&] { return pop_seq_ >= my_seq || closed_; });
    }
  }

  // Returns nullopt once the channel is closed and drained.
  std::optional<T> recv() {
    std::unique_lock lk(mu_);
    not_empty_.wait(lk, [&] { return closed_ || !q_.empty(); });
    if (q_.empty()) return std::nullopt;
    T v = std::move(q_.front());
    q_.pop_front();
    ++pop_seq_;
    not_full_.notify_one();
    taken_.notify_all();
    return v;
  }

  // Drains up to max_items currently queued messages without blocking past
  // the first one. Returns false when closed and drained.
  bool recv_some(std::vector<T>& out, std::size_t max_items) {
    std::unique_lock lk(mu_);
    not_empty_.wait(lk, [&] { return closed_ || !q_.empty(); });
    if (q_.empty()) return false;
    std::size_t take = std::min(max_items, q_.size());
    for (std::size_t i = 0; i < take; ++i) {
      out.push_back(std::move(q_.front()));
      q_.pop_front();
    }
    pop_seq_ += take;
    not_full_.notify_all();
    taken_.notify_all();
    return true;
  }

  void close() {
    std::lock_guard lk(mu_);
    closed_ = true;
    not_empty_.notify_all();
    not_full_.notify_all();
    taken_.notify_all();
  }

 private:
  // Rendezvous admits one in-flight value; the sender then waits for the pop.
  std::size_t slots() const { return capacity_ == 0 ? 1 : capacity_; }

  std::size_t capacity_;
  std::mutex mu_;
  std::condition_variable not_empty_, not_full_, taken_;
  std::deque<T> q_;
  bool closed_ = false;
  std::uint64_t push_seq_ = 0, pop_seq_ = 0;
};

}  // namespace tricount
