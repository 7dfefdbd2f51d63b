#pragma once

#include <algorithm>
#include <set>
#include <stdexcept>

#include "reorder/types.hpp"

namespace reorder {

// Per-stage state of a reorder-buffer receiver fed one packet at a time.
// Stage i reflects the state just after the i-th packet was handled.
//
// The receiver uploads in id order: packet ACK (the "pivot") triggers an
// upload of the maximal contiguous run starting at it, anything above ACK
// is buffered, and packets seen before are discarded.
struct ReceiverTrace {
  std::vector<Id> buffer_size;    // B_i: ids currently buffered
  std::vector<Id> signed_buffer;  // -B_i when stage i consumed a repeat
  std::vector<Id> fb;             // H_i - (ACK_i - 1): forward span of the window
  std::vector<Id> ack;            // smallest id not yet received
  std::vector<Id> highest_seen;   // H_i: largest id received so far
  std::vector<bool> repeat_flag;  // packet was a copy of an earlier one
  std::vector<bool> stale_flag;   // copy of an id that was already uploaded

  std::size_t size() const { return buffer_size.size(); }
};

// Feeds seq through the receiver. IDs must be >= 1; duplicates are allowed
// (they are discarded on arrival) and gaps are allowed (the missing id
// simply never becomes the pivot).
inline ReceiverTrace simulate_receiver(const PacketIdSequence& seq) {
  ReceiverTrace t;
  const std::size_t n = seq.size();
  t.buffer_size.reserve(n);
  t.signed_buffer.reserve(n);
  t.fb.reserve(n);
  t.ack.reserve(n);
  t.highest_seen.reserve(n);
  t.repeat_flag.reserve(n);
  t.stale_flag.reserve(n);

  std::set<Id> buffered;
  Id ack = 1;
  Id highest = 0;

  for (Id p : seq) {
    if (p < 1) throw std::invalid_argument("packet ids must be positive");

    bool repeat = false;
    bool stale = false;
    if (p < ack) {
      repeat = true;  // already uploaded, dropped on arrival
      stale = true;
    } else if (buffered.count(p)) {
      repeat = true;  // already waiting in the buffer, dropped
    } else if (p == ack) {
      // Pivot: upload it plus the contiguous run it releases.
      ++ack;
      auto it = buffered.begin();
      while (it != buffered.end() && *it == ack) {
        it = buffered.erase(it);
        ++ack;
      }
    } else {
      buffered.insert(p);
    }

    highest = std::max(highest, p);
    const Id b = static_cast<Id>(buffered.size());
    t.buffer_size.push_back(b);
    t.signed_buffer.push_back(repeat ? -b : b);
    t.fb.push_back(highest - (ack - 1));
    t.ack.push_back(ack);
    t.highest_seen.push_back(highest);
    t.repeat_flag.push_back(repeat);
    t.stale_flag.push_back(stale);
  }
  return t;
}

inline bool is_permutation(const PacketIdSequence& seq) {
  const std::size_t n = seq.size();
  std::vector<bool> seen(n, false);
  for (Id p : seq) {
    if (p < 1 || p > static_cast<Id>(n)) return false;
    const std::size_t idx = static_cast<std::size_t>(p) - 1;
    if (seen[idx]) return false;
    seen[idx] = true;
  }
  return true;
}

inline BufferPattern buffer_sizes(const PacketIdSequence& seq) {
  return simulate_receiver(seq).buffer_size;
}

inline SignedBufferPattern signed_buffer_sizes(const PacketIdSequence& seq) {
  return simulate_receiver(seq).signed_buffer;
}

inline std::vector<Id> fb_sizes(const PacketIdSequence& seq) {
  return simulate_receiver(seq).fb;
}

inline std::vector<Id> ack_trace(const PacketIdSequence& seq) {
  return simulate_receiver(seq).ack;
}

// The four trace equivalences. Sequences of different lengths are never
// equivalent (their traces differ in length).
inline bool buf_equiv(const PacketIdSequence& a, const PacketIdSequence& b) {
  return buffer_sizes(a) == buffer_sizes(b);
}

inline bool beh_equiv(const PacketIdSequence& a, const PacketIdSequence& b) {
  return ack_trace(a) == ack_trace(b);
}

inline bool fb_equiv(const PacketIdSequence& a, const PacketIdSequence& b) {
  return fb_sizes(a) == fb_sizes(b);
}

inline bool modified_buf_equiv(const PacketIdSequence& a, const PacketIdSequence& b) {
  return signed_buffer_sizes(a) == signed_buffer_sizes(b);
}

}  // namespace reorder
