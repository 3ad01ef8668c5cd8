#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "proxysync/wire.hpp"

namespace proxysync {

// Sender half of the exactly-once ordered event stream: every queued event is
// retransmitted on a fixed interval until a cumulative acknowledgement covers
// its sequence number. Retransmissions carry the original seq with a fresh
// send time, so the lossy channel rolls new dice for them.
class ReliableSender {
 public:
  ReliableSender(std::uint8_t room_id, double retransmit_interval = 0.2)
      : room_id_(room_id), interval_(retransmit_interval) {}

  std::uint32_t send(const Record& body);  // queues; returns the assigned seq

  // Envelopes due at `now`: never-sent events plus those whose last
  // transmission is at least the retransmit interval old.
  std::vector<Envelope> poll(double now);

  void on_ack(std::uint32_t acked_seq);  // cumulative: clears every seq <= acked

  std::size_t pending() const { return pending_.size(); }
  std::uint32_t last_assigned_seq() const { return next_seq_ - 1; }

 private:
  struct Item {
    Record body;
    double last_sent = 0.0;
    bool sent_once = false;
  };

  std::uint8_t room_id_;
  double interval_;
  std::uint32_t next_seq_ = 1;
  std::map<std::uint32_t, Item> pending_;
};

// Receiver half: delivers event bodies exactly once and in sequence order,
// holding later arrivals in a gap buffer until the missing ones show up.
class ReliableReceiver {
 public:
  // Feed one received event envelope; returns the bodies that became
  // deliverable (possibly several when a gap closes, possibly none).
  std::vector<Record> on_receive(const Envelope& e);

  // Highest sequence number delivered contiguously; what a cumulative Ack
  // should carry back to the sender.
  std::uint32_t ack_seq() const { return next_expected_ - 1; }

 private:
  std::uint32_t next_expected_ = 1;
  std::map<std::uint32_t, Record> gap_;
};

}  // namespace proxysync
