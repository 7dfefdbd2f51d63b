#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace reorder {

// Packet IDs are positive integers. Buffer patterns reuse the same integer
// type so a signed pattern can mark repeat stages with negative entries.
using Id = std::int64_t;

using PacketIdSequence = std::vector<Id>;
using BufferPattern = std::vector<Id>;        // entries >= 0
using SignedBufferPattern = std::vector<Id>;  // entries < 0 flag repeat stages

// Preimage counts reach n! and beyond, so they need arbitrary precision.
using BigCount = boost::multiprecision::cpp_int;

// Role of one stage in a buffer pattern, judged against the previous entry.
enum class StageClass : unsigned char {
  Growth,  // |w_i| = |w_{i-1}| + 1: a new id was buffered
  Flush,   // |w_i| < |w_{i-1}|:     the pivot arrived and a run was uploaded
  Hold,    // |w_i| = |w_{i-1}|:     an id arrived and left immediately
  Repeat,  // w_i < 0:               a buffered id arrived again
};

// First rule a pattern violates. Stages are numbered from 1.
enum class RejectRule : unsigned char {
  GrowthTooLarge,     // entry exceeds previous magnitude by more than 1
  InteriorZero,       // zero before the final stage
  NonzeroTail,        // final stage is not zero
  BadRepeat,          // negative entry whose magnitude changed the buffer
  UnexpectedRepeat,   // repeat stage in a context restricted to permutations
  NoPerfectMatching,  // no preimage completes the forced assignments
};

inline const char* to_string(StageClass c) {
  switch (c) {
    case StageClass::Growth: return "growth";
    case StageClass::Flush: return "flush";
    case StageClass::Hold: return "hold";
    case StageClass::Repeat: return "repeat";
  }
  return "?";
}

inline const char* to_string(RejectRule r) {
  switch (r) {
    case RejectRule::GrowthTooLarge: return "growth-too-large";
    case RejectRule::InteriorZero: return "interior-zero";
    case RejectRule::NonzeroTail: return "nonzero-tail";
    case RejectRule::BadRepeat: return "bad-repeat";
    case RejectRule::UnexpectedRepeat: return "unexpected-repeat";
    case RejectRule::NoPerfectMatching: return "no-perfect-matching";
  }
  return "?";
}

struct Rejection {
  std::size_t index = 0;  // 1-based stage of the first violation
  RejectRule rule = RejectRule::GrowthTooLarge;

  bool operator==(const Rejection&) const = default;
};

inline std::string describe(const Rejection& r) {
  return std::string(to_string(r.rule)) + " at stage " + std::to_string(r.index);
}

// Value-or-rejection. Inversion routines return this instead of throwing:
// an invalid pattern is an expected outcome, not a programming error.
template <typename T>
class Result {
 public:
  Result(T value) : v_(std::move(value)) {}
  Result(Rejection r) : v_(std::move(r)) {}

  bool ok() const { return std::holds_alternative<T>(v_); }
  explicit operator bool() const { return ok(); }

  const T& value() const& { return std::get<T>(v_); }
  T&& value() && { return std::get<T>(std::move(v_)); }
  const Rejection& rejection() const { return std::get<Rejection>(v_); }

 private:
  std::variant<T, Rejection> v_;
};

// classify_stages output: per-stage classes plus the 1-based index sets,
// each in increasing stage order.
struct StageClassification {
  std::vector<StageClass> classes;
  std::vector<std::size_t> growth_stages;
  std::vector<std::size_t> flush_stages;
  std::vector<std::size_t> hold_stages;
  std::vector<std::size_t> repeat_stages;
};

}  // namespace reorder
