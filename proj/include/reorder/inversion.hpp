#pragma once

#include <cstddef>
#include <set>

#include "reorder/receiver.hpp"
#include "reorder/types.hpp"

namespace reorder {

// Syntactic validity check. A pattern can be realized by some arrival
// sequence iff every stage falls into one of the four classes below:
//
//   Growth:  |w_i| = |w_{i-1}| + 1, w_i > 0   (new id buffered)
//   Flush:   |w_i| <  |w_{i-1}|,    w_i >= 0  (pivot released a run)
//   Hold:    |w_i| = |w_{i-1}|,     w_i >= 0  (id passed straight through)
//   Repeat:  w_i < 0, |w_i| = |w_{i-1}|       (duplicate of a buffered id)
//
// plus: no zero before the last stage, and the last stage must be zero
// (an interior zero means the stream decomposes; see decompose_at_zeros).
// The reported rejection is the first violation in stage order.
inline Result<StageClassification> classify_stages(const SignedBufferPattern& w) {
  const std::size_t n = w.size();
  StageClassification out;
  out.classes.reserve(n);

  Id prev = 0;  // |w_0|, the buffer starts empty
  for (std::size_t i = 1; i <= n; ++i) {
    const Id v = w[i - 1];
    const Id mag = v < 0 ? -v : v;
    if (v >= 0 && v - prev > 1) return Rejection{i, RejectRule::GrowthTooLarge};
    if (v == 0 && i < n) return Rejection{i, RejectRule::InteriorZero};
    if (v != 0 && i == n) return Rejection{i, RejectRule::NonzeroTail};
    if (v < 0 && mag != prev) return Rejection{i, RejectRule::BadRepeat};

    StageClass c;
    if (v < 0) {
      c = StageClass::Repeat;
      out.repeat_stages.push_back(i);
    } else if (mag == prev + 1) {
      c = StageClass::Growth;
      out.growth_stages.push_back(i);
    } else if (mag < prev) {
      c = StageClass::Flush;
      out.flush_stages.push_back(i);
    } else {
      // mag == prev; covers the lone terminal zero of an empty-buffer stage
      c = StageClass::Hold;
      out.hold_stages.push_back(i);
    }
    out.classes.push_back(c);
    prev = mag;
  }
  return out;
}

// ACK values forced by a pattern: ack[i] is the receiver's ACK after stage i,
// with ack[0] = 1. Growth and Repeat stages leave ACK alone, a Hold stage
// advances it by one, and a Flush stage advances it past the released run:
//
//   ack_i = ack_{i-1} + |w_{i-1}| - |w_i| + 1
inline Result<std::vector<Id>> ack_from_pattern(const SignedBufferPattern& w) {
  auto cls = classify_stages(w);
  if (!cls.ok()) return cls.rejection();

  const std::size_t n = w.size();
  std::vector<Id> ack(n + 1);
  ack[0] = 1;
  Id prev = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    const Id v = w[i - 1];
    const Id mag = v < 0 ? -v : v;
    switch (cls.value().classes[i - 1]) {
      case StageClass::Growth:
      case StageClass::Repeat:
        ack[i] = ack[i - 1];
        break;
      case StageClass::Hold:
        ack[i] = ack[i - 1] + 1;
        break;
      case StageClass::Flush:
        ack[i] = ack[i - 1] + prev - mag + 1;
        break;
    }
    prev = mag;
  }
  return ack;
}

// One maximal zero-free chunk of a pattern, ending at its zero. A witness
// for the whole pattern is the concatenation of per-segment witnesses with
// ids shifted by id_offset (the count of distinct ids consumed by earlier
// segments; repeats consume none, so they do not advance the offset).
struct PatternSegment {
  SignedBufferPattern values;
  Id id_offset = 0;
  std::size_t stage_offset = 0;

  bool operator==(const PatternSegment&) const = default;
};

// Splits after every zero. The final entry must be zero (an empty pattern
// splits into nothing); interior validity of each segment is not checked
// here, only by the per-segment routines.
inline Result<std::vector<PatternSegment>> decompose_at_zeros(const SignedBufferPattern& w) {
  std::vector<PatternSegment> segs;
  if (w.empty()) return segs;
  if (w.back() != 0) return Rejection{w.size(), RejectRule::NonzeroTail};

  Id id_offset = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] != 0) continue;
    PatternSegment seg;
    seg.values.assign(w.begin() + start, w.begin() + i + 1);
    seg.id_offset = id_offset;
    seg.stage_offset = start;
    Id repeats = 0;
    for (Id v : seg.values)
      if (v < 0) ++repeats;
    id_offset += static_cast<Id>(seg.values.size()) - repeats;
    segs.push_back(std::move(seg));
    start = i + 1;
  }
  return segs;
}

// ACK trace across a zero-decomposed pattern, glued back together so that
// ack[i] matches what simulate_receiver reports on a stitched witness.
inline Result<std::vector<Id>> ack_from_pattern_split(const SignedBufferPattern& w) {
  auto segs = decompose_at_zeros(w);
  if (!segs.ok()) return segs.rejection();

  std::vector<Id> ack(w.size() + 1);
  ack[0] = 1;
  for (const PatternSegment& seg : segs.value()) {
    auto local = ack_from_pattern(seg.values);
    if (!local.ok()) {
      Rejection r = local.rejection();
      r.index += seg.stage_offset;
      return r;
    }
    for (std::size_t j = 1; j <= seg.values.size(); ++j)
      ack[seg.stage_offset + j] = seg.id_offset + local.value()[j];
  }
  return ack;
}

namespace detail {

// Shared skeleton of the two greedy reconstructions. Fills the forced
// stages first, then assigns growth stages left to right with a moving
// pointer. Repeat stages are left as zeros for the caller.
//
// Forced stages take their pre-stage ACK (the pivot that must arrive
// there); because ACK advances strictly at each of them, forced ids are
// distinct and at most the number of distinct ids in the segment. Growth
// stage i needs any still-free id above ack[i-1]; thresholds never
// decrease, so one pointer sweep suffices. For any pattern accepted by
// classify_stages a free id always exists (each flushed unit was buffered
// by an earlier growth stage), so the failure branch is a guard only.
inline Result<PacketIdSequence> reconstruct_skeleton(const SignedBufferPattern& w,
                                                     const StageClassification& cls,
                                                     const std::vector<Id>& ack,
                                                     Id n_distinct) {
  PacketIdSequence out(w.size(), 0);
  std::vector<char> chosen(static_cast<std::size_t>(n_distinct) + 2, 0);

  for (std::size_t i : cls.flush_stages) {
    out[i - 1] = ack[i - 1];
    chosen[static_cast<std::size_t>(ack[i - 1])] = 1;
  }
  for (std::size_t i : cls.hold_stages) {
    out[i - 1] = ack[i - 1];
    chosen[static_cast<std::size_t>(ack[i - 1])] = 1;
  }

  Id next = 1;
  for (std::size_t i : cls.growth_stages) {
    const Id lo = ack[i - 1] + 1;  // anything at or below ack[i-1] would flush
    if (next < lo) next = lo;
    while (next <= n_distinct && chosen[static_cast<std::size_t>(next)]) ++next;
    if (next > n_distinct) return Rejection{i, RejectRule::NoPerfectMatching};
    out[i - 1] = next;
    chosen[static_cast<std::size_t>(next)] = 1;
  }
  return out;
}

}  // namespace detail

// Canonical permutation witness for a single zero-free segment (entries
// must be nonnegative; a repeat stage means no permutation maps here).
inline Result<PacketIdSequence> reconstruct_single(const BufferPattern& w) {
  auto cls = classify_stages(w);
  if (!cls.ok()) return cls.rejection();
  if (!cls.value().repeat_stages.empty())
    return Rejection{cls.value().repeat_stages.front(), RejectRule::UnexpectedRepeat};

  auto ack = ack_from_pattern(w);
  return detail::reconstruct_skeleton(w, cls.value(), ack.value(),
                                      static_cast<Id>(w.size()));
}

// Canonical witness for a single zero-free signed segment. Repeat stages
// re-deliver the smallest id buffered at that point, which the forward
// simulation below tracks.
inline Result<PacketIdSequence> reconstruct_signed_single(const SignedBufferPattern& w) {
  auto cls = classify_stages(w);
  if (!cls.ok()) return cls.rejection();

  auto ack = ack_from_pattern(w);
  const Id n_distinct =
      static_cast<Id>(w.size()) - static_cast<Id>(cls.value().repeat_stages.size());
  auto base = detail::reconstruct_skeleton(w, cls.value(), ack.value(), n_distinct);
  if (!base.ok()) return base;

  PacketIdSequence out = std::move(base).value();
  if (cls.value().repeat_stages.empty()) return out;

  std::set<Id> buffered;
  Id a = 1;
  for (std::size_t i = 1; i <= w.size(); ++i) {
    switch (cls.value().classes[i - 1]) {
      case StageClass::Growth:
        buffered.insert(out[i - 1]);
        break;
      case StageClass::Repeat:
        if (buffered.empty()) return Rejection{i, RejectRule::BadRepeat};
        out[i - 1] = *buffered.begin();
        break;
      case StageClass::Hold:
      case StageClass::Flush:
        // out[i-1] == a: uploading the pivot releases the contiguous run
        ++a;
        while (!buffered.empty() && *buffered.begin() == a) {
          buffered.erase(buffered.begin());
          ++a;
        }
        break;
    }
  }
  return out;
}

namespace detail {

// Runs a per-segment reconstruction over the zero-decomposition and stitches
// the pieces, rebasing both the rejection stage and the ids.
template <typename SegmentFn>
inline Result<PacketIdSequence> reconstruct_split(const SignedBufferPattern& w,
                                                  SegmentFn&& per_segment) {
  auto segs = decompose_at_zeros(w);
  if (!segs.ok()) return segs.rejection();

  PacketIdSequence out;
  out.reserve(w.size());
  for (const PatternSegment& seg : segs.value()) {
    auto part = per_segment(seg.values);
    if (!part.ok()) {
      Rejection r = part.rejection();
      r.index += seg.stage_offset;
      return r;
    }
    for (Id p : part.value()) out.push_back(p + seg.id_offset);
  }
  return out;
}

}  // namespace detail

// Canonical permutation preimage of a buffer pattern, or the first reason
// none exists. Interior zeros are handled by splitting there: each segment
// is inverted on its own id range and the pieces are concatenated.
inline Result<PacketIdSequence> reconstruct(const BufferPattern& w) {
  return detail::reconstruct_split(w, [](const BufferPattern& seg) {
    return reconstruct_single(seg);
  });
}

// Signed counterpart of reconstruct: repeat stages are honored by
// re-delivering a buffered id.
inline Result<PacketIdSequence> reconstruct_signed(const SignedBufferPattern& w) {
  return detail::reconstruct_split(w, [](const SignedBufferPattern& seg) {
    return reconstruct_signed_single(seg);
  });
}

}  // namespace reorder
