#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "escot/errors.hpp"
#include "escot/sequence.hpp"

namespace escot {

struct Threshold {
  std::uint32_t k = 0;
};

// Distance(d) or ExceedsThreshold; the wire maps the latter to 0xFFFFFFFF.
class EditDistanceResult {
 public:
  static constexpr std::uint32_t kExceedsWire = 0xFFFFFFFFu;

  static EditDistanceResult distance(std::uint32_t d) { return EditDistanceResult(d); }
  static EditDistanceResult exceeds_threshold() { return EditDistanceResult(kExceedsWire); }
  static EditDistanceResult from_wire(std::uint32_t v) { return EditDistanceResult(v); }

  bool within_threshold() const { return value_ != kExceedsWire; }
  std::uint32_t value() const {
    if (!within_threshold()) throw Error("no distance: threshold exceeded");
    return value_;
  }
  std::uint32_t wire_value() const { return value_; }

  bool operator==(const EditDistanceResult&) const = default;

 private:
  explicit EditDistanceResult(std::uint32_t v) : value_(v) {}
  std::uint32_t value_;
};

// Always (i indexes the query X, j indexes the database entry Y),
// independent of any internal operand swapping.
struct IndexPair {
  std::uint32_t i = 0;
  std::uint32_t j = 0;
  bool operator==(const IndexPair&) const = default;
};

using Stripe = std::vector<IndexPair>;

// Character-equality capability; the secure comparison plugs in here.
// Returned bits are aligned with the request, values 0/1.
class EqualityComparator {
 public:
  virtual ~EqualityComparator() = default;
  virtual std::vector<std::uint8_t> compare_batch(std::span<const IndexPair> pairs) = 0;
};

class CleartextComparator final : public EqualityComparator {
 public:
  CleartextComparator(const EncodedSequence& x, const EncodedSequence& y) : x_(x), y_(y) {}
  std::vector<std::uint8_t> compare_batch(std::span<const IndexPair> pairs) override;

 private:
  const EncodedSequence& x_;
  const EncodedSequence& y_;
};

// Exact Levenshtein distance, unit costs, full O(m*m') table.
EditDistanceResult wagner_fischer(const EncodedSequence& x, const EncodedSequence& y);

// The exact DP cells the banded engine evaluates for lengths (m, m') at
// threshold k, grouped into stripes (one stripe = one batched comparator
// call). Deterministic; both protocol parties derive it independently.
std::vector<Stripe> band_cells(std::size_t m, std::size_t m_prime, Threshold k);

// Threshold-banded distance: Distance(d) iff the true distance d <= k,
// ExceedsThreshold otherwise. Only band cells are evaluated; comparator
// failures propagate unchanged. All character information flows through
// the comparator, so the engine itself needs only the two lengths (the
// secure client runs it without ever holding Y).
EditDistanceResult banded_distance(std::size_t m, std::size_t m_prime, Threshold k,
                                   EqualityComparator& cmp);

inline EditDistanceResult ukkonen_banded(const EncodedSequence& x, const EncodedSequence& y,
                                         Threshold k, EqualityComparator& cmp) {
  return banded_distance(x.length(), y.length(), k, cmp);
}

}  // namespace escot
