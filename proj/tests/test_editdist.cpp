#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "escot/editdist.hpp"

using namespace escot;

namespace {

EncodedSequence seq(const std::string& s) { return encode(s, Alphabet::dna()); }

EncodedSequence random_seq(std::mt19937& rng, std::size_t max_len) {
  std::size_t len = 1 + rng() % max_len;
  EncodedSequence s;
  s.codes.resize(len);
  for (auto& c : s.codes) c = static_cast<std::uint8_t>(rng() % 4);
  return s;
}

// Independent oracle: is there an edit script of length <= d? Exhaustive
// recursion over {match, substitute, insert, delete}; only usable for tiny
// d, which is all the spot checks need.
bool within_edits(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b, int d) {
  if (d < 0) return false;
  while (!a.empty() && !b.empty() && a.front() == b.front()) {
    a = a.subspan(1);
    b = b.subspan(1);
  }
  if (a.empty()) return static_cast<int>(b.size()) <= d;
  if (b.empty()) return static_cast<int>(a.size()) <= d;
  return within_edits(a.subspan(1), b.subspan(1), d - 1) ||  // substitute
         within_edits(a, b.subspan(1), d - 1) ||             // insert into a
         within_edits(a.subspan(1), b, d - 1);               // delete from a
}

// Counts comparator traffic and records the requested cells.
class RecordingComparator final : public EqualityComparator {
 public:
  RecordingComparator(const EncodedSequence& x, const EncodedSequence& y) : inner_(x, y) {}

  std::vector<std::uint8_t> compare_batch(std::span<const IndexPair> pairs) override {
    stripes.emplace_back(pairs.begin(), pairs.end());
    comparisons += pairs.size();
    return inner_.compare_batch(pairs);
  }

  std::vector<Stripe> stripes;
  std::uint64_t comparisons = 0;

 private:
  CleartextComparator inner_;
};

}  // namespace

TEST_CASE("wagner_fischer on spot inputs") {
  CHECK(wagner_fischer(seq("GCTA"), seq("GCTA")) == EditDistanceResult::distance(0));
  CHECK(wagner_fischer(seq("AAAA"), seq("TTTT")) == EditDistanceResult::distance(4));

  // oracle: "ACGT" vs "AGT" is not reachable in 0 edits but is in 1
  auto a = seq("ACGT"), b = seq("AGT");
  CHECK_FALSE(within_edits(a.codes, b.codes, 0));
  CHECK(within_edits(a.codes, b.codes, 1));
  CHECK(wagner_fischer(a, b) == EditDistanceResult::distance(1));
}

TEST_CASE("wagner_fischer agrees with the edit-script oracle on tiny inputs") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    auto a = random_seq(rng, 7);
    auto b = random_seq(rng, 7);
    std::uint32_t d = wagner_fischer(a, b).value();
    CHECK(within_edits(a.codes, b.codes, static_cast<int>(d)));
    if (d > 0) CHECK_FALSE(within_edits(a.codes, b.codes, static_cast<int>(d) - 1));
  }
}

TEST_CASE("oracle satisfies metric properties on random small inputs") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 80; ++trial) {
    auto x = random_seq(rng, 30);
    auto y = random_seq(rng, 30);
    auto z = random_seq(rng, 30);
    std::uint32_t dxx = wagner_fischer(x, x).value();
    std::uint32_t dxy = wagner_fischer(x, y).value();
    std::uint32_t dyx = wagner_fischer(y, x).value();
    std::uint32_t dxz = wagner_fischer(x, z).value();
    std::uint32_t dyz = wagner_fischer(y, z).value();
    CHECK(dxx == 0);
    CHECK(dxy == dyx);
    CHECK(dxz <= dxy + dyz);
  }
}

TEST_CASE("banded distance on spot inputs") {
  auto acgt = seq("ACGT"), agt = seq("AGT");
  CleartextComparator cmp1(acgt, agt);
  CHECK(ukkonen_banded(acgt, agt, Threshold{2}, cmp1) == EditDistanceResult::distance(1));

  auto aaaa = seq("AAAA"), tttt = seq("TTTT");
  CleartextComparator cmp2(aaaa, tttt);
  CHECK(ukkonen_banded(aaaa, tttt, Threshold{1}, cmp2) ==
        EditDistanceResult::exceeds_threshold());

  auto same = seq("TTAGC");
  CleartextComparator cmp3(same, same);
  CHECK(ukkonen_banded(same, same, Threshold{0}, cmp3) == EditDistanceResult::distance(0));
}

TEST_CASE("length gap beyond k exceeds without any comparisons") {
  auto x = seq("ACGTACGTAC");  // 10
  auto y = seq("ACG");         // 3
  RecordingComparator cmp(x, y);
  CHECK(ukkonen_banded(x, y, Threshold{5}, cmp) == EditDistanceResult::exceeds_threshold());
  CHECK(cmp.comparisons == 0);
  CHECK(band_cells(10, 3, Threshold{5}).empty());
}

TEST_CASE("band cells for k=0 are the main diagonal, one stripe per row") {
  auto stripes = band_cells(4, 4, Threshold{0});
  REQUIRE(stripes.size() == 4);
  for (std::size_t r = 0; r < 4; ++r) {
    REQUIRE(stripes[r].size() == 1);
    CHECK(stripes[r][0] == IndexPair{static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(r)});
  }
}

TEST_CASE("band shape at production-scale parameters") {
  auto stripes = band_cells(3500, 3500, Threshold{60});
  CHECK(stripes.size() == 3500);
  std::size_t widest = 0;
  for (const auto& s : stripes) widest = std::max(widest, s.size());
  CHECK(widest == 121);  // 2k+1 in mid-table

  auto tiny = band_cells(5, 5, Threshold{0});
  REQUIRE(tiny.size() == 5);
  for (const auto& s : tiny) CHECK(s.size() == 1);
}

TEST_CASE("band cells cover the full table once k reaches the longer length") {
  auto stripes = band_cells(5, 3, Threshold{5});
  std::size_t total = 0;
  for (const auto& s : stripes) total += s.size();
  CHECK(total == 15);

  std::vector<std::vector<bool>> seen(5, std::vector<bool>(3, false));
  for (const auto& s : stripes)
    for (const auto& p : s) {
      CHECK_FALSE(seen[p.i][p.j]);
      seen[p.i][p.j] = true;
    }
  for (const auto& row : seen)
    for (bool cell : row) CHECK(cell);
}

TEST_CASE("band cells equal the cells an instrumented banded run touches") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    auto x = random_seq(rng, 24);
    auto y = random_seq(rng, 24);
    std::uint32_t k = rng() % 8;
    // force the run to completion by checking only non-aborting cases
    auto exact = wagner_fischer(x, y);
    if (exact.value() > k) continue;
    RecordingComparator cmp(x, y);
    (void)ukkonen_banded(x, y, Threshold{k}, cmp);
    CHECK(cmp.stripes == band_cells(x.length(), y.length(), Threshold{k}));
  }

  // pinned instance from the (4,3,k=1) shape: window width <= 3 per row
  auto x = seq("ACGT"), y = seq("ACG");
  RecordingComparator cmp(x, y);
  (void)ukkonen_banded(x, y, Threshold{1}, cmp);
  auto cells = band_cells(4, 3, Threshold{1});
  CHECK(cmp.stripes == cells);
  for (const auto& stripe : cells) CHECK(stripe.size() <= 3);
}

TEST_CASE("banded equals thresholded oracle for all k on random pairs") {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 12; ++trial) {
    auto x = random_seq(rng, 200);
    auto y = random_seq(rng, 200);
    std::uint32_t exact = wagner_fischer(x, y).value();
    std::uint32_t max_k = static_cast<std::uint32_t>(std::max(x.length(), y.length())) + 2;
    for (std::uint32_t k = 0; k <= max_k; ++k) {
      CleartextComparator cmp(x, y);
      auto banded = ukkonen_banded(x, y, Threshold{k}, cmp);
      if (exact <= k) {
        REQUIRE(banded.within_threshold());
        REQUIRE(banded.value() == exact);
      } else {
        REQUIRE_FALSE(banded.within_threshold());
      }
    }
  }
}

TEST_CASE("comparison counts stay within the band budget") {
  std::mt19937 rng(37);
  for (int trial = 0; trial < 60; ++trial) {
    auto x = random_seq(rng, 120);
    auto y = random_seq(rng, 120);
    std::uint32_t k = rng() % 12;
    RecordingComparator cmp(x, y);
    (void)ukkonen_banded(x, y, Threshold{k}, cmp);

    std::uint64_t band_size = 0;
    for (const auto& s : band_cells(x.length(), y.length(), Threshold{k})) band_size += s.size();
    std::uint64_t budget =
        static_cast<std::uint64_t>(2 * k + 1) * std::max(x.length(), y.length());
    CHECK(cmp.comparisons <= budget);
    CHECK(cmp.comparisons <= band_size);
  }
}

TEST_CASE("abort stops the comparator stream immediately") {
  // distance 4 at k=1 aborts once the running row minimum passes k
  auto x = seq("AAAAAAAA"), y = seq("TTTTTTTT");
  RecordingComparator cmp(x, y);
  CHECK(ukkonen_banded(x, y, Threshold{1}, cmp) == EditDistanceResult::exceeds_threshold());
  auto full = band_cells(x.length(), y.length(), Threshold{1});
  CHECK(cmp.stripes.size() < full.size());
  // the stripes that did run match the schedule prefix
  for (std::size_t s = 0; s < cmp.stripes.size(); ++s) CHECK(cmp.stripes[s] == full[s]);
}

TEST_CASE("result is independent of stripe grouping") {
  // whole-band prefetching comparator: answers from one big batch
  class PrefetchComparator final : public EqualityComparator {
   public:
    PrefetchComparator(const EncodedSequence& x, const EncodedSequence& y, Threshold k)
        : inner_(x, y) {
      for (const auto& stripe : band_cells(x.length(), y.length(), k))
        flat_.insert(flat_.end(), stripe.begin(), stripe.end());
      bits_ = inner_.compare_batch(flat_);
    }
    std::vector<std::uint8_t> compare_batch(std::span<const IndexPair> pairs) override {
      std::vector<std::uint8_t> out(bits_.begin() + cursor_,
                                    bits_.begin() + cursor_ + static_cast<long>(pairs.size()));
      cursor_ += static_cast<long>(pairs.size());
      return out;
    }

   private:
    CleartextComparator inner_;
    std::vector<IndexPair> flat_;
    std::vector<std::uint8_t> bits_;
    long cursor_ = 0;
  };

  std::mt19937 rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    auto x = random_seq(rng, 60);
    auto y = random_seq(rng, 60);
    std::uint32_t k = rng() % 10;
    CleartextComparator per_stripe(x, y);
    auto expected = ukkonen_banded(x, y, Threshold{k}, per_stripe);
    PrefetchComparator whole_band(x, y, Threshold{k});
    CHECK(ukkonen_banded(x, y, Threshold{k}, whole_band) == expected);
  }
}

TEST_CASE("wire sentinel for exceeded threshold") {
  CHECK(EditDistanceResult::exceeds_threshold().wire_value() == 0xFFFFFFFFu);
  CHECK(EditDistanceResult::from_wire(7) == EditDistanceResult::distance(7));
  CHECK_THROWS_AS(EditDistanceResult::exceeds_threshold().value(), Error);
}
