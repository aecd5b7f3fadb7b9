#include <gtest/gtest.h>

#include <random>
#include <set>

#include "belief/frame.hpp"
#include "oracles.hpp"

namespace {

using belief::Frame;
using belief::HyperElement;
using belief::PowerElement;

// Part mask from a list of signatures written as class digits, e.g. {12, 123}.
std::uint64_t parts_of(std::initializer_list<int> signatures) {
  std::uint64_t parts = 0;
  for (int sig : signatures) {
    std::uint32_t s = 0;
    for (; sig > 0; sig /= 10) s |= 1u << (sig % 10 - 1);
    parts |= std::uint64_t{1} << (s - 1);
  }
  return parts;
}

TEST(Lattice, SingletonPartsFollowVennSignatures) {
  EXPECT_EQ(HyperElement::singleton(3, 0).parts(), parts_of({1, 12, 13, 123}));
  EXPECT_EQ(HyperElement::singleton(2, 1).parts(), parts_of({2, 12}));
  for (int n = 1; n <= 6; ++n) {
    for (int i = 0; i < n; ++i) {
      EXPECT_EQ(HyperElement::singleton(n, i).parts(), oracle::venn_singleton(n, i));
      EXPECT_EQ(HyperElement::singleton(n, i).cardinality(), 1 << (n - 1));
    }
  }
  EXPECT_EQ(HyperElement::singleton(5, 3).cardinality(), 16);
}

TEST(Lattice, SingletonIndexOutOfRangeThrows) {
  EXPECT_THROW(HyperElement::singleton(3, 3), std::out_of_range);
  EXPECT_THROW(HyperElement::singleton(3, -1), std::out_of_range);
  EXPECT_THROW(Frame({"a", "b"}).singleton(2), std::out_of_range);
}

TEST(Lattice, IntersectionAndCardinality) {
  const auto c1 = HyperElement::singleton(3, 0);
  const auto c2 = HyperElement::singleton(3, 1);
  const auto c3 = HyperElement::singleton(3, 2);
  EXPECT_EQ((c1 & c2).parts(), parts_of({12, 123}));
  EXPECT_EQ((c1 & c2).cardinality(), 2);
  EXPECT_EQ((c1 & c2 & c3).cardinality(), 1);
  EXPECT_EQ((c1 | c2 | c3).cardinality(), 7);
  EXPECT_EQ(c1 & c2 & c3, HyperElement::total_intersection(3));
  EXPECT_EQ(c1 | c2 | c3, HyperElement::whole(3));
}

TEST(Lattice, MixedFramesAreRejected) {
  EXPECT_THROW(HyperElement::singleton(3, 0) | HyperElement::singleton(2, 0),
               belief::FrameMismatch);
  EXPECT_THROW(PowerElement::singleton(3, 0) & PowerElement::singleton(4, 0),
               belief::FrameMismatch);
}

TEST(Lattice, NonUpsetsAreRejected) {
  EXPECT_THROW(HyperElement(3, parts_of({1})), std::invalid_argument);
  EXPECT_THROW(HyperElement(3, 0), std::invalid_argument);
  EXPECT_NO_THROW(HyperElement(3, parts_of({123})));
  EXPECT_FALSE(belief::is_upset(2, parts_of({1, 2})));
  EXPECT_TRUE(belief::is_upset(2, parts_of({1, 2, 12})));
}

TEST(Lattice, EnumerationMatchesSingletonClosure) {
  for (int n = 1; n <= 4; ++n) {
    const auto expected = oracle::closure(n);
    const auto got = belief::enumerate_upsets(n);
    std::set<std::uint64_t> masks;
    for (const auto& x : got) masks.insert(x.parts());
    EXPECT_EQ(masks.size(), got.size()) << "duplicates at n=" << n;
    EXPECT_EQ(masks, expected) << "n=" << n;
  }
}

TEST(Lattice, EnumerationSizesAreDedekindMinusTwo) {
  const std::size_t expected[] = {1, 4, 18, 166, 7579};
  for (int n = 1; n <= 5; ++n) {
    EXPECT_EQ(belief::enumerate_upsets(n).size(), expected[n - 1]);
  }
}

TEST(Lattice, FiveClassHistogramMatchesAntichainOracle) {
  const auto expected = oracle::antichain_histogram(5);
  std::map<int, std::size_t> got;
  const auto frame = oracle::numbered_frame(5);
  for (const auto& x : belief::enumerate_hyper(frame)) {
    ++got[x.cardinality()];
  }
  EXPECT_EQ(got, expected);
  // U -> {complement of s : s not in U} maps up-sets to up-sets and C_M to
  // 32 - C_M, so the histogram is symmetric.
  for (const auto& [card, count] : got) EXPECT_EQ(count, got.at(32 - card)) << card;
}

TEST(Lattice, EnumerationOrderAndValidity) {
  const auto frame = oracle::numbered_frame(4);
  const auto all = belief::enumerate_hyper(frame);
  for (std::size_t k = 0; k < all.size(); ++k) {
    EXPECT_TRUE(belief::is_upset(4, all[k].parts()));
    if (k > 0) {
      const auto& a = all[k - 1];
      const auto& b = all[k];
      EXPECT_TRUE(a.cardinality() < b.cardinality() ||
                  (a.cardinality() == b.cardinality() && a.parts() < b.parts()));
    }
  }
}

TEST(Lattice, EnumerationAboveSixClassesThrows) {
  EXPECT_THROW(belief::enumerate_hyper(oracle::numbered_frame(7)),
               std::invalid_argument);
}

TEST(Lattice, WindowSelection) {
  const auto frame = oracle::numbered_frame(3);
  const auto c1 = frame.singleton(0), c2 = frame.singleton(1), c3 = frame.singleton(2);

  const auto two = belief::elements_in_window(frame, {2, 2});
  const std::set<HyperElement> expected_two = {c1 & c2, c1 & c3, c2 & c3};
  EXPECT_EQ(std::set<HyperElement>(two.begin(), two.end()), expected_two);

  const auto four = belief::elements_in_window(frame, {4, 4});
  const std::set<HyperElement> expected_four = {
      c1, c2, c3, (c1 & c2) | (c1 & c3) | (c2 & c3)};
  EXPECT_EQ(std::set<HyperElement>(four.begin(), four.end()), expected_four);

  EXPECT_EQ(belief::elements_in_window(frame, {1, 7}).size(), 18u);
  EXPECT_THROW(belief::elements_in_window(frame, {0, 3}), std::invalid_argument);
  EXPECT_THROW(belief::elements_in_window(frame, {3, 2}), std::invalid_argument);
  EXPECT_THROW(belief::elements_in_window(frame, {1, 8}), std::invalid_argument);
}

TEST(Lattice, PowerEmbedding) {
  const auto frame = oracle::numbered_frame(3);
  EXPECT_EQ(belief::embed_power(PowerElement::singleton(3, 0)), frame.singleton(0));
  const auto u = belief::embed_power(PowerElement(3, 0b011));
  EXPECT_EQ(u.parts(), parts_of({1, 2, 12, 13, 23, 123}));
  EXPECT_EQ(u.cardinality(), 6);
  EXPECT_EQ(belief::embed_power(PowerElement::whole(2)).cardinality(), 3);
  EXPECT_THROW(belief::embed_power(PowerElement::conflict(3)), std::invalid_argument);
}

TEST(LatticeProperty, AlgebraicLawsOnRandomTriples) {
  std::mt19937_64 rng(11);
  for (int n = 2; n <= 5; ++n) {
    const auto frame = oracle::numbered_frame(n);
    const auto all = belief::enumerate_hyper(frame);
    std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
    for (int t = 0; t < 2000; ++t) {
      const auto a = all[pick(rng)], b = all[pick(rng)], c = all[pick(rng)];
      ASSERT_EQ(a | b, b | a);
      ASSERT_EQ(a & b, b & a);
      ASSERT_EQ((a | b) | c, a | (b | c));
      ASSERT_EQ((a & b) & c, a & (b & c));
      ASSERT_EQ(a | a, a);
      ASSERT_EQ(a & a, a);
      ASSERT_EQ(a & (b | c), (a & b) | (a & c));
      ASSERT_EQ(a | (b & c), (a | b) & (a | c));
      ASSERT_EQ(a | (a & b), a);
      ASSERT_EQ(a & (a | b), a);
      ASSERT_LE((a & b).cardinality(), std::min(a.cardinality(), b.cardinality()));
      ASSERT_GE((a | b).cardinality(), std::max(a.cardinality(), b.cardinality()));
      ASSERT_TRUE(belief::is_upset(n, (a & b).parts()));
    }
  }
}

TEST(Grammar, CanonicalForms) {
  const auto frame = oracle::numbered_frame(3);
  const auto fmt = [&](std::string_view s) {
    return belief::format_element(frame, belief::parse_hyper(frame, s));
  };
  EXPECT_EQ(fmt("C1&C2"), "C1&C2");
  EXPECT_EQ(fmt("(C1|C2)&C3"), "C1&C3|C2&C3");
  EXPECT_EQ(fmt("C1|C1&C2"), "C1");
  EXPECT_EQ(fmt(" C2 | C1 "), "C1|C2");
  EXPECT_EQ(belief::parse_hyper(frame, "C1&C2"), frame.singleton(0) & frame.singleton(1));
  EXPECT_EQ(belief::format_element(frame, belief::parse_power(frame, "C3|C1")), "C1|C3");
  EXPECT_EQ(belief::format_element(frame, belief::parse_power(frame, "{}")), "{}");
}

TEST(Grammar, ErrorsCarryPositions) {
  const auto frame = oracle::numbered_frame(3);
  try {
    belief::parse_hyper(frame, "C1|C9");
    FAIL() << "unknown label accepted";
  } catch (const belief::ParseError& e) {
    EXPECT_EQ(e.position(), 3u);
  }
  EXPECT_THROW(belief::parse_hyper(frame, "(C1|C2"), belief::ParseError);
  EXPECT_THROW(belief::parse_hyper(frame, "C1&&C2"), belief::ParseError);
  EXPECT_THROW(belief::parse_hyper(frame, ""), belief::ParseError);
  EXPECT_THROW(belief::parse_power(frame, "C1&C2"), std::exception);
}

TEST(Grammar, RoundTripOverWholeLattices) {
  for (int n = 2; n <= 4; ++n) {
    const auto frame = oracle::numbered_frame(n);
    std::set<std::string> seen;
    for (const auto& x : belief::enumerate_hyper(frame)) {
      const auto text = belief::format_element(frame, x);
      EXPECT_TRUE(seen.insert(text).second) << text;
      EXPECT_EQ(belief::parse_hyper(frame, text), x) << text;
      EXPECT_EQ(belief::format_element(frame, belief::parse_hyper(frame, text)), text);
    }
  }
}

TEST(Grammar, CustomLabels) {
  const Frame frame({"rock", "sand", "silt"});
  const auto x = belief::parse_hyper(frame, "sand&silt|rock&sand");
  EXPECT_EQ(belief::format_element(frame, x), "rock&sand|sand&silt");
  EXPECT_EQ(frame.index_of("silt"), 2);
  EXPECT_EQ(frame.index_of("ripple"), -1);
}

TEST(Frame, RejectsBadLabels) {
  EXPECT_THROW(Frame({}), std::invalid_argument);
  EXPECT_THROW(Frame({"a"}), std::invalid_argument);
  EXPECT_THROW(Frame({"a", "b|c"}), std::invalid_argument);
  EXPECT_THROW(Frame({"a", "a"}), std::invalid_argument);
}

TEST(Frame, CanonicalOrdering) {
  const auto frame = oracle::numbered_frame(3);
  const auto c1 = frame.singleton(0), c2 = frame.singleton(1);
  EXPECT_TRUE(belief::canonical_less(frame, c1 & c2, c1));
  EXPECT_TRUE(belief::canonical_less(frame, c1, c2));
  EXPECT_FALSE(belief::canonical_less(frame, c1, c1));
}

}  // namespace
