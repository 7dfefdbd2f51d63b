#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "reorder/receiver.hpp"
#include "reorder/types.hpp"

namespace reorder {

// Brute-force ground truth. Everything here enumerates complete input
// universes and filters or groups them, so the caps below are hard limits:
// exceeding one throws UniverseTooLarge rather than silently truncating.
inline constexpr std::size_t kMaxOraclePermutationN = 8;
inline constexpr std::size_t kMaxOracleRepeatN = 6;
inline constexpr std::size_t kMaxOracleRepeats = 2;
inline constexpr std::size_t kMaxOraclePartitionN = 7;

struct UniverseTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Which universe a brute-force query ranges over.
struct UniverseSpec {
  std::size_t n = 0;            // sequence length
  bool allow_repeats = false;   // false: permutations of 1..n
  std::size_t max_repeats = 0;  // with repeats: at most this many duplicates
};

// All permutations of 1..n in lexicographic order.
inline std::vector<PacketIdSequence> all_permutations(std::size_t n) {
  if (n > kMaxOraclePermutationN)
    throw UniverseTooLarge("permutation universe capped at n = 8");
  PacketIdSequence ids(n);
  std::iota(ids.begin(), ids.end(), 1);
  std::vector<PacketIdSequence> out;
  do {
    out.push_back(ids);
  } while (std::next_permutation(ids.begin(), ids.end()));
  return out;
}

namespace detail {

// Depth-first emission of every length-n arrival stream whose distinct ids
// are exactly 1..m, extended with (n - m) re-deliveries of ids that are
// sitting in the buffer when they re-arrive. Candidates are tried in
// ascending id order.
inline void repeat_streams(std::size_t n, std::size_t m,
                           std::vector<PacketIdSequence>& out) {
  PacketIdSequence seq;
  std::vector<bool> used(m + 1, false);
  std::size_t used_count = 0;
  std::size_t repeats_left = n - m;

  auto rec = [&](auto&& self, Id ack, const std::set<Id>& buffered) -> void {
    if (seq.size() == n) {
      if (used_count == m) out.push_back(seq);
      return;
    }
    // A fresh id or, while duplicates remain, a buffered one. Ids already
    // uploaded are out: the receiver would drop them, but they are not
    // re-deliveries of waiting packets, which is the universe meant here.
    for (Id p = 1; p <= static_cast<Id>(m); ++p) {
      const bool fresh = !used[static_cast<std::size_t>(p)];
      const bool duplicate = repeats_left > 0 && buffered.count(p) > 0;
      if (!fresh && !duplicate) continue;

      seq.push_back(p);
      if (fresh) {
        used[static_cast<std::size_t>(p)] = true;
        ++used_count;
        Id a = ack;
        std::set<Id> buf = buffered;
        if (p == a) {
          ++a;
          while (!buf.empty() && *buf.begin() == a) {
            buf.erase(buf.begin());
            ++a;
          }
        } else {
          buf.insert(p);
        }
        self(self, a, buf);
        used[static_cast<std::size_t>(p)] = false;
        --used_count;
      } else {
        --repeats_left;
        self(self, ack, buffered);
        ++repeats_left;
      }
      seq.pop_back();
    }
  };
  rec(rec, 1, {});
}

}  // namespace detail

// Every length-n stream built from a permutation of some 1..m by inserting
// up to max_repeats re-deliveries of currently buffered ids, sorted
// lexicographically. max_repeats = 0 degenerates to the permutations of 1..n.
inline std::vector<PacketIdSequence> repeat_universe(std::size_t n, std::size_t max_repeats) {
  if (n > kMaxOracleRepeatN)
    throw UniverseTooLarge("repeat universe capped at n = 6");
  if (max_repeats > kMaxOracleRepeats)
    throw UniverseTooLarge("repeat universe capped at 2 duplicates");

  std::vector<PacketIdSequence> out;
  for (std::size_t r = 0; r <= max_repeats && r <= n; ++r)
    detail::repeat_streams(n, n - r, out);
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<PacketIdSequence> universe(const UniverseSpec& spec) {
  return spec.allow_repeats ? repeat_universe(spec.n, spec.max_repeats)
                            : all_permutations(spec.n);
}

// Permutations whose buffer-size trace equals w, by exhaustive filtering.
inline std::vector<PacketIdSequence> brute_force_preimages(const BufferPattern& w,
                                                           const UniverseSpec& spec) {
  if (w.size() != spec.n)
    throw std::invalid_argument("pattern length differs from universe length");
  std::vector<PacketIdSequence> out;
  for (const PacketIdSequence& a : all_permutations(spec.n))
    if (buffer_sizes(a) == w) out.push_back(a);
  return out;
}

// Streams in the given universe whose signed trace equals w.
inline std::vector<PacketIdSequence> brute_force_signed(const SignedBufferPattern& w,
                                                        const UniverseSpec& spec) {
  if (w.size() != spec.n)
    throw std::invalid_argument("pattern length differs from universe length");
  std::vector<PacketIdSequence> out;
  for (const PacketIdSequence& a : universe(spec))
    if (signed_buffer_sizes(a) == w) out.push_back(a);
  return out;
}

// Trace to group by when partitioning a universe.
enum class MapSelector {
  Buffer,
  SignedBuffer,
  ForwardBuffer,
  Ack,
};

inline std::vector<Id> trace_of(const PacketIdSequence& seq, MapSelector sel) {
  const ReceiverTrace t = simulate_receiver(seq);
  switch (sel) {
    case MapSelector::Buffer: return t.buffer_size;
    case MapSelector::SignedBuffer: return t.signed_buffer;
    case MapSelector::ForwardBuffer: return t.fb;
    case MapSelector::Ack: return t.ack;
  }
  return {};
}

using TracePartition = std::map<std::vector<Id>, std::vector<PacketIdSequence>>;

inline TracePartition partition_universe(const std::vector<PacketIdSequence>& streams,
                                         MapSelector sel) {
  TracePartition parts;
  for (const PacketIdSequence& a : streams) parts[trace_of(a, sel)].push_back(a);
  return parts;
}

// Equivalence classes of the permutations of 1..n under the chosen trace.
inline TracePartition partition_by_map(std::size_t n, MapSelector sel) {
  if (n > kMaxOraclePartitionN)
    throw UniverseTooLarge("partition oracle capped at n = 7");
  return partition_universe(all_permutations(n), sel);
}

}  // namespace reorder
