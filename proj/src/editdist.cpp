#include "escot/editdist.hpp"

#include <algorithm>
#include <limits>

namespace escot {

std::vector<std::uint8_t> CleartextComparator::compare_batch(std::span<const IndexPair> pairs) {
  std::vector<std::uint8_t> bits;
  bits.reserve(pairs.size());
  for (const auto& p : pairs) bits.push_back(x_.codes.at(p.i) == y_.codes.at(p.j) ? 1 : 0);
  return bits;
}

EditDistanceResult wagner_fischer(const EncodedSequence& x, const EncodedSequence& y) {
  const std::size_t m = x.length(), n = y.length();
  std::vector<std::uint32_t> prev(n + 1), cur(n + 1);
  for (std::size_t j = 0; j <= n; ++j) prev[j] = static_cast<std::uint32_t>(j);
  for (std::size_t i = 1; i <= m; ++i) {
    cur[0] = static_cast<std::uint32_t>(i);
    for (std::size_t j = 1; j <= n; ++j) {
      std::uint32_t sub = prev[j - 1] + (x.codes[i - 1] == y.codes[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return EditDistanceResult::distance(prev[n]);
}

namespace {

// Band geometry in the swapped orientation: the shorter sequence indexes
// DP rows, diagonal offsets (col - row) range over [-k, k], clamped to the
// table. window(r) for r >= 1 never comes up empty when |m - m'| <= k.
struct BandShape {
  std::size_t rows, cols;
  bool x_is_rows;
  std::int64_t k;

  BandShape(std::size_t m, std::size_t m_prime, Threshold threshold) {
    x_is_rows = m <= m_prime;
    rows = std::min(m, m_prime);
    cols = std::max(m, m_prime);
    k = threshold.k;
  }

  bool gap_exceeds() const { return static_cast<std::int64_t>(cols - rows) > k; }

  // Inclusive DP-column window of row r.
  std::pair<std::size_t, std::size_t> window(std::size_t r) const {
    auto sr = static_cast<std::int64_t>(r);
    std::size_t lo = static_cast<std::size_t>(std::max<std::int64_t>(0, sr - k));
    std::size_t hi = std::min(cols, static_cast<std::size_t>(sr + k));
    return {lo, hi};
  }

  IndexPair char_pair(std::size_t r, std::size_t c) const {
    auto a = static_cast<std::uint32_t>(r - 1);
    auto b = static_cast<std::uint32_t>(c - 1);
    return x_is_rows ? IndexPair{a, b} : IndexPair{b, a};
  }
};

}  // namespace

std::vector<Stripe> band_cells(std::size_t m, std::size_t m_prime, Threshold k) {
  BandShape shape(m, m_prime, k);
  std::vector<Stripe> stripes;
  if (shape.gap_exceeds()) return stripes;
  stripes.reserve(shape.rows);
  for (std::size_t r = 1; r <= shape.rows; ++r) {
    auto [lo, hi] = shape.window(r);
    Stripe stripe;
    stripe.reserve(hi - std::max<std::size_t>(lo, 1) + 1);
    for (std::size_t c = std::max<std::size_t>(lo, 1); c <= hi; ++c)
      stripe.push_back(shape.char_pair(r, c));
    stripes.push_back(std::move(stripe));
  }
  return stripes;
}

EditDistanceResult banded_distance(std::size_t m, std::size_t m_prime, Threshold k,
                                   EqualityComparator& cmp) {
  BandShape shape(m, m_prime, k);
  if (shape.gap_exceeds()) return EditDistanceResult::exceeds_threshold();

  constexpr std::uint32_t kInf = std::numeric_limits<std::uint32_t>::max() / 2;
  // Two rolling rows over the full column range; cells outside the band
  // stay at kInf.
  std::vector<std::uint32_t> prev(shape.cols + 1, kInf), cur(shape.cols + 1, kInf);
  {
    auto [lo, hi] = shape.window(0);
    for (std::size_t j = lo; j <= hi; ++j) prev[j] = static_cast<std::uint32_t>(j);
  }

  Stripe pairs;
  for (std::size_t r = 1; r <= shape.rows; ++r) {
    auto [lo, hi] = shape.window(r);
    auto [plo, phi] = shape.window(r - 1);

    pairs.clear();
    for (std::size_t c = std::max<std::size_t>(lo, 1); c <= hi; ++c)
      pairs.push_back(shape.char_pair(r, c));
    std::vector<std::uint8_t> eq = cmp.compare_batch(pairs);
    if (eq.size() != pairs.size())
      throw DimensionMismatch("comparator returned " + std::to_string(eq.size()) + " bits for " +
                              std::to_string(pairs.size()) + " pairs");

    std::uint32_t row_min = kInf;
    std::size_t t = 0;
    for (std::size_t c = lo; c <= hi; ++c) {
      std::uint32_t best = kInf;
      if (c == 0) {
        best = static_cast<std::uint32_t>(r);
      } else {
        std::uint32_t diag = (c - 1 >= plo && c - 1 <= phi) ? prev[c - 1] : kInf;
        std::uint32_t up = (c >= plo && c <= phi) ? prev[c] : kInf;
        std::uint32_t left = (c - 1 >= lo) ? cur[c - 1] : kInf;
        best = std::min({diag + (eq[t++] ? 0 : 1), up + 1, left + 1});
      }
      cur[c] = best;
      row_min = std::min(row_min, best);
    }
    // Every path to the final cell crosses this row inside the band; once
    // its minimum exceeds k the distance cannot come back under it.
    if (row_min > shape.k) return EditDistanceResult::exceeds_threshold();

    for (std::size_t c = plo; c <= phi; ++c) prev[c] = kInf;
    std::swap(prev, cur);
  }

  std::uint32_t final_value = prev[shape.cols];
  if (final_value > shape.k) return EditDistanceResult::exceeds_threshold();
  return EditDistanceResult::distance(final_value);
}

}  // namespace escot
