#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "pronlex/attnalign.hpp"
#include "pronlex/error.hpp"
#include "pronlex/synthbench.hpp"

using namespace pronlex;

namespace {

SegmentedUtterance the_cat() { return {"u1", {{"the", {"DH", "AH"}}, {"cat", {"K", "AE", "T"}}}}; }

// Attention map whose row r peaks at column peaks[r].
AttentionMap peaked(const SegmentedUtterance& ref, const Pronunciation& hyp,
                    const std::vector<std::size_t>& peaks) {
  const auto rows = ref.phones();
  std::vector<double> w(rows.size() * hyp.size(), 0.0);
  for (std::size_t r = 0; r < rows.size(); ++r) w[r * hyp.size() + peaks[r]] = 1.0;
  return AttentionMap(ref.utterance_id, rows, hyp, w);
}

std::vector<std::vector<std::size_t>> cut_lists(const std::vector<Segmentation>& segs) {
  std::vector<std::vector<std::size_t>> out;
  for (const auto& s : segs) out.push_back(s.cuts);
  return out;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected pronlex::Error");
  return ErrorKind::InvalidConfig;
}

}  // namespace

TEST_CASE("attention map construction guards") {
  CHECK(kind_of([] { AttentionMap("u", {"A"}, {"B"}, {1.0, 2.0}); }) ==
        ErrorKind::DimensionMismatch);
  CHECK(kind_of([] { AttentionMap("u", {"A"}, {"B"}, {-0.5}); }) == ErrorKind::NegativeWeight);
}

TEST_CASE("parse_attention_file") {
  const auto inv = PhoneInventory::open();
  const auto maps = parse_attention_file("u1 2 2\nA B\nC D\n1 0\n0 1\n", inv);
  REQUIRE(maps.size() == 1);
  CHECK(maps[0].weights() == std::vector<double>{1, 0, 0, 1});
  CHECK(maps[0].row_phones() == Pronunciation{"A", "B"});
  CHECK(maps[0].col_phones() == Pronunciation{"C", "D"});

  CHECK(kind_of([&] { parse_attention_file("u1 2 2\nA B\nC D\n1 0\n0 1\n0 0\n", inv); }) ==
        ErrorKind::DimensionMismatch);
  CHECK(kind_of([&] { parse_attention_file("u1 2 2\nA B\nC D\n1 0\n", inv); }) ==
        ErrorKind::DimensionMismatch);
  CHECK(kind_of([&] { parse_attention_file("u1 1 2\nA\nC D\n1 -1\n", inv); }) ==
        ErrorKind::NegativeWeight);
  CHECK(kind_of([&] { parse_attention_file("u1 1 1\nA\nC\nx\n", inv); }) ==
        ErrorKind::MalformedLine);
  CHECK(kind_of([&] { parse_attention_file("u1 1 1\nA\nC\n1\n\nu1 1 1\nA\nC\n1\n", inv); }) ==
        ErrorKind::DuplicateUtteranceId);
}

TEST_CASE("diagonal map for doesn't survives a round trip") {
  const Pronunciation p = {"D", "AH", "Z", "N", "T"};
  const Pronunciation h = {"D", "AH", "S", "N", "T"};
  std::vector<double> w(25, 0.05);
  for (std::size_t i = 0; i < 5; ++i) w[i * 5 + i] = 0.8;
  const std::vector<AttentionMap> maps = {AttentionMap("u1", p, h, w),
                                          AttentionMap("u2", {"A"}, {}, {})};
  const auto text = emit_attention_file(maps);
  const auto back = parse_attention_file(text, PhoneInventory::open());
  CHECK(back == maps);
  CHECK(emit_attention_file(back) == text);
}

TEST_CASE("bounds files") {
  const std::vector<UtteranceCuts> b = {{"u1", {2, 5}}, {"u2", {}}};
  const auto text = emit_bounds_file(b);
  CHECK(text == "u1\t2 5\nu2\t\n");
  CHECK(parse_bounds_file(text) == b);
  CHECK_THROWS_AS(parse_bounds_file("u1\tx\n"), Error);
}

TEST_CASE("place_boundaries") {
  const auto ref = the_cat();
  const Pronunciation hyp = {"DH", "AH", "K", "AE", "T"};
  CHECK(place_boundaries(peaked(ref, hyp, {0, 1, 2, 3, 4}), ref).cuts ==
        std::vector<std::size_t>{2});
  CHECK(place_boundaries(peaked(ref, hyp, {0, 3, 2, 3, 4}), ref).cuts ==
        std::vector<std::size_t>{4});

  SegmentedUtterance one{"u1", {{"cat", {"K", "AE", "T"}}}};
  const Pronunciation h3 = {"K", "AE", "T"};
  CHECK(place_boundaries(peaked(one, h3, {2, 2, 2}), one).cuts.empty());

  SUBCASE("ties go to the earliest column") {
    std::vector<double> w(25, 0.0);
    w[1 * 5 + 1] = 0.5;
    w[1 * 5 + 3] = 0.5;
    CHECK(place_boundaries(AttentionMap("u1", ref.phones(), hyp, w), ref).cuts ==
          std::vector<std::size_t>{2});
  }
  SUBCASE("row mismatch") {
    const auto other = AttentionMap("u1", {"DH", "AH", "K"}, hyp, std::vector<double>(15, 0.0));
    CHECK(kind_of([&] { place_boundaries(other, ref); }) == ErrorKind::RowMismatch);
  }
}

TEST_CASE("repair keeps cuts increasing and within the hypothesis") {
  SegmentedUtterance three{"u", {{"a", {"A"}}, {"b", {"B"}}, {"c", {"C"}}}};
  const Pronunciation hyp = {"A", "B", "C"};
  // Both non-final words peak on column 0.
  auto seg = place_boundaries(peaked(three, hyp, {0, 0, 0}), three);
  CHECK(seg.cuts == std::vector<std::size_t>{1, 2});
  CHECK(seg.repaired == 1);
  // Overflow clamps to the length, giving empty trailing spans.
  const Pronunciation two = {"A", "B"};
  seg = place_boundaries(peaked(three, two, {1, 1, 1}), three);
  CHECK(seg.cuts == std::vector<std::size_t>{2, 2});
  CHECK(seg.has_empty_span(2));
}

TEST_CASE("global shift candidates") {
  const auto ref = the_cat();
  const Pronunciation hyp = {"DH", "AH", "K", "AE", "T"};
  const auto map = peaked(ref, hyp, {0, 1, 2, 3, 4});
  AttnConfig cfg;
  cfg.shift_radius = 1;
  CHECK(cut_lists(split_by_attention(map, ref, cfg)) ==
        std::vector<std::vector<std::size_t>>{{1}, {2}, {3}});
  cfg.shift_radius = 3;
  CHECK(cut_lists(split_by_attention(map, ref, cfg)) ==
        std::vector<std::vector<std::size_t>>{{1}, {2}, {3}, {4}, {5}});
  cfg.shift_radius = 0;
  CHECK(cut_lists(split_by_attention(map, ref, cfg)) ==
        std::vector<std::vector<std::size_t>>{{2}});
}

TEST_CASE("per-boundary candidates cover every offset combination") {
  SegmentedUtterance three{"u", {{"a", {"A", "A"}}, {"b", {"B", "B"}}, {"c", {"C", "C"}}}};
  Pronunciation hyp(12, "A");
  const auto map = peaked(three, hyp, {0, 3, 4, 7, 8, 9});
  AttnConfig cfg;
  cfg.mode = ShiftMode::PerBoundary;
  cfg.shift_radius = 1;
  const auto segs = split_by_attention(map, three, cfg);
  REQUIRE(segs.size() == 9);
  CHECK(segs.front().cuts == std::vector<std::size_t>{4, 8});
  for (const auto& s : segs) {
    CHECK(s.cuts[0] >= 3);
    CHECK(s.cuts[0] <= 5);
    CHECK(s.cuts[1] >= 7);
    CHECK(s.cuts[1] <= 9);
  }
  cfg.per_boundary_cap = 4;
  CHECK(split_by_attention(map, three, cfg).size() == 4);
}

TEST_CASE("edit_distance") {
  const Pronunciation a = {"D", "AH", "Z", "N", "T"};
  const Pronunciation b = {"D", "AH", "S", "N", "T"};
  const Pronunciation cat = {"K", "AE", "T"};
  CHECK(edit_distance(a, a) == 0);
  CHECK(edit_distance({}, cat) == 3);
  CHECK(oracle::levenshtein(b, a) == 1);
  CHECK(edit_distance(b, a) == 1);
}

TEST_CASE("edit distance is a metric and matches the recursive definition") {
  const std::vector<Phone> alphabet = {"A", "B", "C"};
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = oracle::random_sequence(rng, 6, alphabet);
    const auto b = oracle::random_sequence(rng, 6, alphabet);
    const auto c = oracle::random_sequence(rng, 6, alphabet);
    CHECK(edit_distance(a, b) == oracle::levenshtein(a, b));
    CHECK(edit_distance(a, b) == edit_distance(b, a));
    CHECK((edit_distance(a, b) == 0) == (a == b));
    CHECK(edit_distance(a, c) <= edit_distance(a, b) + edit_distance(b, c));
  }
}

TEST_CASE("align_word_boundaries") {
  const auto ref = the_cat();
  const auto dict = parse_dictionary("the\tDH AH\ncat\tK AE T\n", PhoneInventory::open());

  SUBCASE("exact hypothesis is accepted with canonical spans") {
    const Pronunciation hyp = {"DH", "AH", "K", "AE", "T"};
    const auto d = align_word_boundaries(peaked(ref, hyp, {0, 1, 2, 3, 4}), ref, &dict);
    REQUIRE(std::holds_alternative<Accepted>(d));
    const auto& acc = std::get<Accepted>(d);
    CHECK(acc.total_distance == 0);
    CHECK(acc.distance == 0.0);
    CHECK(slice(hyp, acc.spans[0]) == Pronunciation{"DH", "AH"});
    CHECK(slice(hyp, acc.spans[1]) == Pronunciation{"K", "AE", "T"});
  }
  SUBCASE("shift back by one recovers the boundary") {
    const Pronunciation hyp = {"D", "AH", "K", "AE", "T"};
    // Candidate totals, by the recursive definition.
    const Pronunciation the = {"DH", "AH"};
    const Pronunciation cat = {"K", "AE", "T"};
    auto total = [&](std::size_t cut) {
      const Pronunciation left(hyp.begin(), hyp.begin() + static_cast<std::ptrdiff_t>(cut));
      const Pronunciation right(hyp.begin() + static_cast<std::ptrdiff_t>(cut), hyp.end());
      return oracle::levenshtein(left, the) + oracle::levenshtein(right, cat);
    };
    CHECK(total(2) == 1);
    CHECK(total(3) == 3);
    CHECK(total(4) == 5);

    AttnConfig cfg;
    cfg.shift_radius = 1;
    const auto map = peaked(ref, hyp, {0, 2, 2, 3, 4});
    CHECK(place_boundaries(map, ref).cuts == std::vector<std::size_t>{3});
    const auto d = align_word_boundaries(map, ref, &dict, cfg);
    REQUIRE(std::holds_alternative<Accepted>(d));
    const auto& acc = std::get<Accepted>(d);
    CHECK(acc.segmentation.cuts == std::vector<std::size_t>{2});
    CHECK(acc.total_distance == 1);
    CHECK(acc.distance == doctest::Approx(0.2));

    cfg.threshold = 0.0;
    const auto rej = align_word_boundaries(map, ref, &dict, cfg);
    REQUIRE(std::holds_alternative<Rejected>(rej));
    CHECK(std::get<Rejected>(rej).best_distance == doctest::Approx(0.2));
  }
  SUBCASE("without a dictionary the reference spans are used") {
    const Pronunciation hyp = {"D", "AH", "K", "AE", "T"};
    const auto d = align_word_boundaries(peaked(ref, hyp, {0, 1, 2, 3, 4}), ref, nullptr);
    REQUIRE(std::holds_alternative<Accepted>(d));
    CHECK(std::get<Accepted>(d).total_distance == 1);
  }
}

TEST_CASE("align_attention_batch and accepted_variants") {
  const auto dict = parse_dictionary("the\tDH AH\ncat\tK AE T\n", PhoneInventory::open());
  auto ref2 = the_cat();
  ref2.utterance_id = "u2";
  const std::vector<SegmentedUtterance> refs = {the_cat(), ref2};
  const Pronunciation good = {"D", "AH", "K", "AE", "T"};
  const Pronunciation bad = {"S", "S", "S", "S", "S"};
  std::vector<AttentionMap> maps = {peaked(refs[0], good, {0, 1, 2, 3, 4}),
                                    peaked(refs[1], bad, {0, 1, 2, 3, 4})};
  const auto batch = align_attention_batch(maps, refs, &dict);
  CHECK(batch.accepted() == 1);
  CHECK(batch.rejected() == 1);
  const auto v = accepted_variants(batch, maps);
  CHECK(v.pairs == std::vector<VariantPair>{{"the", {"D", "AH"}}, {"cat", {"K", "AE", "T"}}});

  const auto parallel = align_attention_batch(maps, refs, &dict, AttnConfig{}, 3);
  CHECK(accepted_variants(parallel, maps).pairs == v.pairs);

  const std::vector<SegmentedUtterance> only_first = {refs[0]};
  CHECK(kind_of([&] { align_attention_batch(maps, only_first, &dict); }) ==
        ErrorKind::MissingUtterance);
}
