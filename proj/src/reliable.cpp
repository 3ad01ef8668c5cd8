#include "proxysync/reliable.hpp"

namespace proxysync {

std::uint32_t ReliableSender::send(const Record& body) {
  std::uint32_t seq = next_seq_++;
  pending_[seq] = Item{body, 0.0, false};
  return seq;
}

std::vector<Envelope> ReliableSender::poll(double now) {
  std::vector<Envelope> out;
  for (auto& [seq, item] : pending_) {
    if (item.sent_once && now - item.last_sent < interval_ - 1e-9) continue;
    Envelope e;
    e.kind = MessageKind::GameEvent;
    e.room_id = room_id_;
    e.seq = seq;
    e.sent_at_us = to_micros(now);
    e.body = item.body;
    out.push_back(e);
    item.last_sent = now;
    item.sent_once = true;
  }
  return out;
}

void ReliableSender::on_ack(std::uint32_t acked_seq) {
  pending_.erase(pending_.begin(), pending_.upper_bound(acked_seq));
}

std::vector<Record> ReliableReceiver::on_receive(const Envelope& e) {
  std::vector<Record> delivered;
  if (e.seq < next_expected_) return delivered;  // duplicate of old news
  if (e.seq > next_expected_) {
    gap_.emplace(e.seq, e.body);  // keep the first copy, wait for the gap
    return delivered;
  }
  delivered.push_back(e.body);
  ++next_expected_;
  for (auto it = gap_.begin(); it != gap_.end() && it->first == next_expected_;) {
    delivered.push_back(it->second);
    ++next_expected_;
    it = gap_.erase(it);
  }
  // Drop anything the contiguous run has overtaken.
  gap_.erase(gap_.begin(), gap_.lower_bound(next_expected_));
  return delivered;
}

}  // namespace proxysync
