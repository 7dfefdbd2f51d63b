#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <set>

#include "reorder/inversion.hpp"
#include "reorder/types.hpp"

namespace reorder {

// Truncated subtraction.
inline Id monus(Id a, Id b) { return a > b ? a - b : 0; }

// Bipartite view of the free choices left after the forced assignments.
// One row per growth stage; the columns are the ids not claimed by a
// flush or hold stage. Row (i, t) is adjacent to every column j > t,
// where t is the ACK in force while stage i runs. Thresholds never
// decrease in stage order, so neighborhoods are nested suffixes of the
// column list and the whole structure is captured by the row degrees.
struct StaircaseRow {
  std::size_t stage = 0;
  Id threshold = 0;

  bool operator==(const StaircaseRow&) const = default;
};

struct StaircaseGraph {
  std::vector<StaircaseRow> rows;  // in stage order, thresholds non-decreasing
  std::vector<Id> columns;         // ascending
};

// Row degrees in stage order; non-increasing for a staircase graph.
using StaircaseType = std::vector<Id>;

// Builds the graph for one zero-free segment (signed entries allowed:
// repeat stages contribute neither a row nor a column).
inline Result<StaircaseGraph> build_graph(const SignedBufferPattern& w) {
  auto cls = classify_stages(w);
  if (!cls.ok()) return cls.rejection();
  auto ack = ack_from_pattern(w);

  const Id n_distinct =
      static_cast<Id>(w.size()) - static_cast<Id>(cls.value().repeat_stages.size());

  // Forced ids in ascending order: ACK advances strictly at each flush or
  // hold stage, so merging the two stage lists by stage index sorts them.
  std::vector<Id> forced;
  forced.reserve(cls.value().flush_stages.size() + cls.value().hold_stages.size());
  {
    const auto& f = cls.value().flush_stages;
    const auto& h = cls.value().hold_stages;
    std::size_t a = 0, b = 0;
    while (a < f.size() || b < h.size()) {
      const bool pick_f = b == h.size() || (a < f.size() && f[a] < h[b]);
      const std::size_t i = pick_f ? f[a++] : h[b++];
      forced.push_back(ack.value()[i - 1]);
    }
  }

  StaircaseGraph g;
  g.columns.reserve(static_cast<std::size_t>(n_distinct) - forced.size());
  std::size_t fi = 0;
  for (Id j = 1; j <= n_distinct; ++j) {
    if (fi < forced.size() && forced[fi] == j) {
      ++fi;
      continue;
    }
    g.columns.push_back(j);
  }

  g.rows.reserve(cls.value().growth_stages.size());
  for (std::size_t i : cls.value().growth_stages)
    g.rows.push_back({i, ack.value()[i]});
  return g;
}

inline StaircaseType row_type(const StaircaseGraph& g) {
  StaircaseType t;
  t.reserve(g.rows.size());
  std::size_t b = 0;  // first column strictly above the current threshold
  for (const StaircaseRow& r : g.rows) {
    while (b < g.columns.size() && g.columns[b] <= r.threshold) ++b;
    t.push_back(static_cast<Id>(g.columns.size() - b));
  }
  return t;
}

// A staircase type (non-increasing degrees a_1 >= ... >= a_m) admits a
// perfect matching iff a_i >= m + 1 - i for every i: the i-th row must
// still see a column after the m - i rows below it take theirs.
inline bool has_perfect_matching(const StaircaseType& type) {
  const std::size_t m = type.size();
  for (std::size_t i = 1; i <= m; ++i)
    if (type[i - 1] < static_cast<Id>(m + 1 - i)) return false;
  return true;
}

// Number of perfect matchings of a staircase type. Matching rows from the
// most constrained up, the k-th row matched (k = 0, 1, ...) sees its
// degree minus the k columns already taken, all of which lie in its
// neighborhood because neighborhoods are nested:
//
//   |matchings| = prod_k (a_{m-k} monus k)
inline BigCount count_matchings(const StaircaseType& type) {
  const std::size_t m = type.size();
  BigCount c = 1;
  for (std::size_t k = 0; k < m; ++k) {
    const Id factor = monus(type[m - 1 - k], static_cast<Id>(k));
    if (factor == 0) return 0;
    c *= factor;
  }
  return c;
}

namespace detail {

inline BigCount count_single_common(const SignedBufferPattern& w, bool signed_mode) {
  auto g = build_graph(w);
  if (!g.ok()) return 0;
  BigCount c = count_matchings(row_type(g.value()));
  if (c == 0) return 0;
  for (Id v : w) {
    if (v >= 0) continue;
    if (!signed_mode) return 0;  // permutations never repeat
    c *= -v;                     // any of the |v| buffered ids may re-arrive
  }
  return c;
}

template <typename PerSegment>
inline BigCount count_split(const SignedBufferPattern& w, PerSegment&& per_segment) {
  auto segs = decompose_at_zeros(w);
  if (!segs.ok()) return 0;
  BigCount total = 1;
  for (const PatternSegment& seg : segs.value()) {
    total *= per_segment(seg.values);
    if (total == 0) return 0;
  }
  return total;
}

}  // namespace detail

// Permutation preimages of one zero-free segment. Zero when invalid.
inline BigCount count_preimages_single(const BufferPattern& w) {
  return detail::count_single_common(w, false);
}

// Signed variant: each repeat stage independently multiplies the count by
// its buffer size.
inline BigCount count_preimages_signed_single(const SignedBufferPattern& w) {
  return detail::count_single_common(w, true);
}

// Number of permutations mapping to w, splitting at interior zeros
// (segments choose independently, so the counts multiply). Zero when no
// preimage exists.
inline BigCount count_preimages(const BufferPattern& w) {
  return detail::count_split(w, count_preimages_single);
}

inline BigCount count_preimages_signed(const SignedBufferPattern& w) {
  return detail::count_split(w, count_preimages_signed_single);
}

// Uniform draw from the permutation preimages of w (split at zeros).
// Growth stages are filled from the most constrained row up: the pool
// starts as the columns above the last threshold and gains the columns
// between consecutive thresholds as the sweep moves to earlier rows.
// Every pool element leaves the same number of completions (neighborhoods
// are nested suffixes), so uniform picks compose to a uniform witness.
inline Result<PacketIdSequence> sample_preimage(const BufferPattern& w, std::uint64_t seed) {
  auto segs = decompose_at_zeros(w);
  if (!segs.ok()) return segs.rejection();

  std::mt19937_64 rng(seed);
  PacketIdSequence out;
  out.reserve(w.size());

  for (const PatternSegment& seg : segs.value()) {
    auto cls = classify_stages(seg.values);
    auto globalize = [&](Rejection r) {
      r.index += seg.stage_offset;
      return r;
    };
    if (!cls.ok()) return globalize(cls.rejection());
    if (!cls.value().repeat_stages.empty())
      return globalize({cls.value().repeat_stages.front(), RejectRule::UnexpectedRepeat});

    auto graph = build_graph(seg.values);
    auto ack = ack_from_pattern(seg.values);
    const auto& g = graph.value();

    PacketIdSequence part(seg.values.size(), 0);
    for (std::size_t i : cls.value().flush_stages) part[i - 1] = ack.value()[i - 1];
    for (std::size_t i : cls.value().hold_stages) part[i - 1] = ack.value()[i - 1];

    std::vector<Id> pool;
    pool.reserve(g.columns.size());
    std::size_t cur = g.columns.size();
    for (std::size_t k = g.rows.size(); k-- > 0;) {
      while (cur > 0 && g.columns[cur - 1] > g.rows[k].threshold)
        pool.push_back(g.columns[--cur]);
      if (pool.empty())
        return globalize({g.rows[k].stage, RejectRule::NoPerfectMatching});
      std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
      const std::size_t idx = pick(rng);
      part[g.rows[k].stage - 1] = pool[idx];
      pool[idx] = pool.back();
      pool.pop_back();
    }

    for (Id p : part) out.push_back(p + seg.id_offset);
  }
  return out;
}

// enumerate_preimages outcome: either the full sorted preimage list, or
// the exact count when it exceeds the caller's limit.
struct EnumerateResult {
  std::vector<PacketIdSequence> items;
  std::optional<BigCount> exceeded;

  bool ok() const { return !exceeded.has_value(); }
};

namespace detail {

// All preimages of one zero-free segment, unsorted. Assumes the segment is
// classifier-valid and its count is small enough to materialize.
inline std::vector<PacketIdSequence> enumerate_segment(const SignedBufferPattern& w) {
  auto cls = classify_stages(w);
  auto ack = ack_from_pattern(w);
  auto graph = build_graph(w);
  const auto& g = graph.value();
  const std::size_t m = g.rows.size();

  PacketIdSequence base(w.size(), 0);
  for (std::size_t i : cls.value().flush_stages) base[i - 1] = ack.value()[i - 1];
  for (std::size_t i : cls.value().hold_stages) base[i - 1] = ack.value()[i - 1];

  // Columns entering the pool at each step of the bottom-up row sweep.
  std::vector<std::vector<Id>> additions(m);
  {
    std::size_t cur = g.columns.size();
    for (std::size_t k = m; k-- > 0;)
      while (cur > 0 && g.columns[cur - 1] > g.rows[k].threshold)
        additions[k].push_back(g.columns[--cur]);
  }

  std::vector<PacketIdSequence> result;

  // Expands one growth assignment into full sequences by walking the
  // receiver forward and branching over the buffer at each repeat stage.
  auto expand = [&](const PacketIdSequence& skeleton) {
    std::vector<PacketIdSequence> partial{skeleton};
    if (!cls.value().repeat_stages.empty()) {
      std::vector<PacketIdSequence> next;
      // Repeat options depend only on the growth assignment, not on the
      // ids picked at earlier repeat stages, so options per stage are
      // independent and a stage-by-stage product expansion is exact.
      std::set<Id> buffered;
      Id a = 1;
      std::vector<std::vector<Id>> options;
      for (std::size_t i = 1; i <= w.size(); ++i) {
        switch (cls.value().classes[i - 1]) {
          case StageClass::Growth:
            buffered.insert(skeleton[i - 1]);
            break;
          case StageClass::Repeat:
            options.emplace_back(buffered.begin(), buffered.end());
            break;
          case StageClass::Hold:
          case StageClass::Flush:
            ++a;
            while (!buffered.empty() && *buffered.begin() == a) {
              buffered.erase(buffered.begin());
              ++a;
            }
            break;
        }
      }
      std::size_t oi = 0;
      for (std::size_t i : cls.value().repeat_stages) {
        next.clear();
        for (const PacketIdSequence& p : partial) {
          for (Id choice : options[oi]) {
            next.push_back(p);
            next.back()[i - 1] = choice;
          }
        }
        partial.swap(next);
        ++oi;
      }
    }
    for (PacketIdSequence& p : partial) result.push_back(std::move(p));
  };

  // Depth-first over growth rows, most constrained first.
  PacketIdSequence assign = base;
  auto rec = [&](auto&& self, std::size_t k, std::vector<Id> avail) -> void {
    for (Id c : additions[k]) avail.push_back(c);
    for (std::size_t idx = 0; idx < avail.size(); ++idx) {
      assign[g.rows[k].stage - 1] = avail[idx];
      if (k == 0) {
        expand(assign);
      } else {
        std::vector<Id> rest = avail;
        rest[idx] = rest.back();
        rest.pop_back();
        self(self, k - 1, std::move(rest));
      }
    }
  };
  if (m == 0) {
    expand(base);
  } else {
    rec(rec, m - 1, {});
  }
  return result;
}

}  // namespace detail

// Every arrival sequence mapping to w, sorted lexicographically. Signed
// entries are honored (repeat stages branch over the buffered ids); an
// unsigned pattern therefore enumerates exactly its permutation preimages.
// When the exact count exceeds `limit` nothing is materialized and the
// count is reported instead.
inline EnumerateResult enumerate_preimages(const SignedBufferPattern& w, std::uint64_t limit) {
  EnumerateResult res;
  const BigCount total = count_preimages_signed(w);
  if (total > limit) {
    res.exceeded = total;
    return res;
  }
  if (total == 0) return res;

  auto segs = decompose_at_zeros(w);
  res.items.push_back({});  // product seed: one empty prefix
  for (const PatternSegment& seg : segs.value()) {
    std::vector<PacketIdSequence> parts = detail::enumerate_segment(seg.values);
    std::vector<PacketIdSequence> next;
    next.reserve(res.items.size() * parts.size());
    for (const PacketIdSequence& prefix : res.items) {
      for (const PacketIdSequence& part : parts) {
        PacketIdSequence full = prefix;
        full.reserve(prefix.size() + part.size());
        for (Id p : part) full.push_back(p + seg.id_offset);
        next.push_back(std::move(full));
      }
    }
    res.items.swap(next);
  }
  std::sort(res.items.begin(), res.items.end());
  return res;
}

}  // namespace reorder
