#ifndef EMCERT_TFP_HPP
#define EMCERT_TFP_HPP

// External min-priority queue over TFP messages, plus the mailbox that
// enforces topological delivery order.
//
// The queue keeps an in-memory insertion buffer of at most half the space
// available at construction; overflow is flushed as a sorted run file and
// runs are merged lazily on pop. When the number of run files exceeds what
// the reader budget allows, all runs are consolidated into one. Amortized
// I/O is within sort(k) as long as the run count stays inside the merge
// fan-in (one merge level), which holds whenever k <= M^2/(4B);
// consolidation beyond that point trades optimality for budget safety.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "emcert/kernel.hpp"

namespace emcert {

class empty_queue_error : public em_error {
public:
  using em_error::em_error;
};

/// One TFP message. Dequeue order is lexicographic over
/// (recipient, sender, a, b); messages with equal recipient therefore come
/// out grouped, ordered by sender rank and then payload.
struct Message {
  std::uint64_t recipient = 0;
  std::uint64_t sender = 0;
  std::uint64_t a = 0;  // payload word 1
  std::uint64_t b = 0;  // payload word 2

  friend auto operator<=>(const Message&, const Message&) = default;
};

class MessagePQ {
public:
  explicit MessagePQ(Kernel& k) : kernel_(&k) {
    std::size_t avail = k.memory_available();
    std::size_t b = k.block_records();
    if (avail < 4 * b)
      throw budget_error(
          "MessagePQ: needs at least 4 blocks of free budget, have " +
          std::to_string(avail / b));
    buffer_cap_ = std::max(2 * b, avail / 2);
    max_open_runs_ = (avail - buffer_cap_) / b;  // >= 2 by construction
    k.mem_acquire(buffer_cap_);
    buffer_.reserve(buffer_cap_);
  }

  MessagePQ(const MessagePQ&) = delete;
  MessagePQ& operator=(const MessagePQ&) = delete;

  ~MessagePQ() {
    if (kernel_) kernel_->mem_release(buffer_cap_);
    for (auto& r : runs_) {
      r.reader.close();
      std::error_code ec;
      fs::remove(r.path, ec);
    }
  }

  void push(const Message& m) {
    if (buffer_.size() == buffer_cap_) spill();
    buffer_.push_back(m);
    std::push_heap(buffer_.begin(), buffer_.end(), std::greater<>{});
    ++pushed_;
  }

  bool empty() {
    if (!buffer_.empty()) return false;
    drop_exhausted();
    return runs_.empty();
  }

  /// Minimum by (recipient, sender, a, b).
  Message top() {
    const Message* best = nullptr;
    drop_exhausted();
    for (auto& r : runs_) {
      const Message& h = r.reader.peek();
      if (!best || h < *best) best = &h;
    }
    if (!buffer_.empty() && (!best || buffer_.front() < *best))
      best = &buffer_.front();
    if (!best) throw empty_queue_error("MessagePQ: top on empty queue");
    return *best;
  }

  Message pop_min() {
    drop_exhausted();
    std::size_t best_run = runs_.size();
    for (std::size_t i = 0; i < runs_.size(); ++i) {
      if (best_run == runs_.size() ||
          runs_[i].reader.peek() < runs_[best_run].reader.peek())
        best_run = i;
    }
    if (!buffer_.empty() &&
        (best_run == runs_.size() ||
         buffer_.front() < runs_[best_run].reader.peek())) {
      std::pop_heap(buffer_.begin(), buffer_.end(), std::greater<>{});
      Message m = buffer_.back();
      buffer_.pop_back();
      return m;
    }
    if (best_run == runs_.size())
      throw empty_queue_error("MessagePQ: pop on empty queue");
    return runs_[best_run].reader.next();
  }

  std::uint64_t pushed() const { return pushed_; }

private:
  struct Run {
    fs::path path;
    StreamReader<Message> reader;
  };

  void drop_exhausted() {
    for (std::size_t i = 0; i < runs_.size();) {
      if (runs_[i].reader.done()) {
        runs_[i].reader.close();
        std::error_code ec;
        fs::remove(runs_[i].path, ec);
        runs_.erase(runs_.begin() + static_cast<std::ptrdiff_t>(i));
      } else {
        ++i;
      }
    }
  }

  void spill() {
    std::sort(buffer_.begin(), buffer_.end());
    fs::path rp = kernel_->make_temp_path("pqrun");
    write_span_as_file(*kernel_, rp, buffer_.data(), buffer_.size());
    buffer_.clear();
    if (runs_.size() + 1 > max_open_runs_) {
      // The idle insertion buffer is lent to the merge for the overflow
      // run's reader and the output writer.
      kernel_->mem_release(buffer_cap_);
      runs_.push_back(Run{rp, {}});
      runs_.back().reader.open(*kernel_, rp);
      consolidate();
      kernel_->mem_acquire(buffer_cap_);
    } else {
      runs_.push_back(Run{rp, {}});
      runs_.back().reader.open(*kernel_, rp);
    }
  }

  // Merge every run into a single one. Only called while the insertion
  // buffer's capacity is released.
  void consolidate() {
    fs::path mp = kernel_->make_temp_path("pqmerge");
    {
      StreamWriter<Message> w(*kernel_, mp);
      for (;;) {
        std::size_t best = runs_.size();
        for (std::size_t i = 0; i < runs_.size(); ++i) {
          if (runs_[i].reader.done()) continue;
          if (best == runs_.size() ||
              runs_[i].reader.peek() < runs_[best].reader.peek())
            best = i;
        }
        if (best == runs_.size()) break;
        w.push(runs_[best].reader.next());
      }
      w.close();
    }
    for (auto& r : runs_) {
      r.reader.close();
      std::error_code ec;
      fs::remove(r.path, ec);
    }
    runs_.clear();
    runs_.push_back(Run{mp, {}});
    runs_.back().reader.open(*kernel_, mp);
  }

  Kernel* kernel_;
  std::vector<Message> buffer_;  // min-heap via std::greater
  std::size_t buffer_cap_;
  std::size_t max_open_runs_;
  std::vector<Run> runs_;
  std::uint64_t pushed_ = 0;
};

/// Mailbox for time-forward processing over ranks 1..n. Ranks must be
/// drained in strictly increasing order, and messages may only be sent to
/// ranks that have not been drained yet.
class TfpMailbox {
public:
  explicit TfpMailbox(Kernel& k) : pq_(k) {}

  void send(std::uint64_t recipient, std::uint64_t sender, std::uint64_t a,
            std::uint64_t b = 0) {
    if (recipient <= drained_)
      throw protocol_error("tfp: message sent backwards in time to rank " +
                           std::to_string(recipient));
    pq_.push(Message{recipient, sender, a, b});
    ++sent_;
  }

  /// Invokes `fn` for every message addressed to `rank`, in
  /// (sender, payload) order, and removes them from the queue.
  template <typename Fn>
  void deliver_all_for(std::uint64_t rank, Fn&& fn) {
    if (rank <= drained_)
      throw protocol_error("tfp: rank " + std::to_string(rank) +
                           " delivered out of topological order");
    while (!pq_.empty()) {
      Message m = pq_.top();
      if (m.recipient < rank)
        throw protocol_error("tfp: undrained messages for rank " +
                             std::to_string(m.recipient));
      if (m.recipient > rank) break;
      pq_.pop_min();
      fn(m);
    }
    drained_ = rank;
  }

  std::vector<Message> deliver_all_for(std::uint64_t rank) {
    std::vector<Message> out;
    deliver_all_for(rank, [&](const Message& m) { out.push_back(m); });
    return out;
  }

  std::uint64_t messages_sent() const { return sent_; }

private:
  MessagePQ pq_;
  std::uint64_t drained_ = 0;
  std::uint64_t sent_ = 0;
};

}  // namespace emcert

#endif  // EMCERT_TFP_HPP
