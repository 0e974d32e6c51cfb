#include <gtest/gtest.h>

#include "support.hpp"

using namespace dlmc;
using dlmc::testing::bits_of;

namespace {

bits run(const fragment& f, const bits& in) { return evaluate(f.circ, in, bits(f.circ.random_count())); }

bits parse(const char* s) { return parse_bits(s); }

} // namespace

TEST(Bin, Examples) {
  EXPECT_EQ(bits_str(bin(5, 4)), "0101");
  EXPECT_EQ(bits_str(bin(0, 3)), "000");
  EXPECT_EQ(bits_str(bin(7, 3)), "111");
  EXPECT_THROW(bin(8, 3), invalid_argument);
  EXPECT_EQ(from_bin(bin(37, 6)), 37u);
}

TEST(ShiftR, Examples) {
  EXPECT_EQ(run(shift_r(3), parse("010")), parse("101"));
  EXPECT_EQ(run(shift_r(3), parse("111")), parse("111"));
  EXPECT_EQ(run(shift_r(4), parse("0000")), parse("1000"));
  EXPECT_THROW(shift_r(0), invalid_argument);
}

TEST(AddOne, Examples) {
  EXPECT_EQ(run(add_one(3), parse("bbb")), parse("aaa"));
  EXPECT_EQ(run(add_one(2), parse("ab")), parse("ba"));
  EXPECT_EQ(run(add_one(2), parse("aa")), parse("ab"));
}

TEST(Identify, Examples) {
  EXPECT_EQ(run(identify(2, 2), parse("10")), bits{true});
  EXPECT_EQ(run(identify(2, 2), parse("01")), bits{false});
  EXPECT_EQ(run(identify(0, 3), parse("000")), bits{true});
  EXPECT_THROW(identify(4, 2), invalid_argument);
}

TEST(Mux, Examples) {
  std::vector<fragment> br{constant_fragment(false, 1), constant_fragment(true, 1)};
  fragment m = mux(br, 2);
  EXPECT_EQ(run(m, parse("0" "10")), bits{true});
  EXPECT_EQ(run(m, parse("0" "01")), bits{false});
  EXPECT_EQ(run(m, parse("1" "00")), bits{false});
  EXPECT_EQ(run(m, parse("1" "11")), bits{false});
  std::vector<fragment> bad{constant_fragment(false, 1), constant_fragment(true, 2)};
  EXPECT_THROW(mux(bad, 2), invalid_argument);
  EXPECT_THROW(mux(br, 1), invalid_argument);
}

TEST(Mux, IdenticalBranchesIgnoreTheSelector) {
  fragment f = identify(1, 2); // any single-output function of two bits
  std::vector<fragment> br(3, f);
  fragment m = mux(br, 2);
  for (std::uint64_t x = 0; x < 4; ++x) {
    for (std::uint64_t s = 1; s <= 3; ++s) {
      bits in = bits_of(x, 2), sel = bin(s, 2);
      bits all = in;
      all.insert(all.end(), sel.begin(), sel.end());
      EXPECT_EQ(run(m, all), run(f, in));
    }
  }
}

TEST(Fragments, NamesDeclaredDepthAndFanin) {
  for (const fragment& f : {shift_r(5), add_one(5), identify(3, 5)}) {
    EXPECT_EQ(f.circ.name.rfind("fragment", 0), 0u);
    EXPECT_EQ(f.declared_depth, f.circ.depth());
    EXPECT_TRUE(validate(f.circ).ok());
    EXPECT_EQ(f.circ.fanin_bound, 2u);
  }
}

TEST(ShiftR, ExhaustiveAndConstantDepth) {
  for (std::size_t n = 1; n <= 12; ++n) {
    fragment f = shift_r(n);
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
      bits in = bits_of(x, n), want(n);
      want[0] = true;
      for (std::size_t i = 1; i < n; ++i) want[i] = in[i - 1];
      ASSERT_EQ(run(f, in), want);
    }
  }
  const unsigned d1 = shift_r(1).circ.depth();
  for (std::size_t n = 1; n <= 64; ++n) EXPECT_EQ(shift_r(n).circ.depth(), d1);
}

TEST(AddOne, ExhaustiveIncrementWithWraparound) {
  for (std::size_t d = 1; d <= 12; ++d) {
    fragment f = add_one(d);
    const std::uint64_t mod = std::uint64_t{1} << d;
    for (std::uint64_t x = 0; x < mod; ++x) ASSERT_EQ(run(f, bits_of(x, d)), bits_of((x + 1) % mod, d));
  }
}

TEST(Identify, ExhaustiveEquality) {
  for (std::size_t d = 1; d <= 6; ++d) {
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << d); ++i) {
      fragment f = identify(i, d);
      for (std::uint64_t x = 0; x < (std::uint64_t{1} << d); ++x) ASSERT_EQ(run(f, bits_of(x, d)), bits{x == i});
    }
  }
  for (std::uint64_t i : {0u, 1u, 2730u, 4095u}) {
    fragment f = identify(i, 12);
    for (std::uint64_t x = 0; x < 4096; ++x) ASSERT_EQ(run(f, bits_of(x, 12)), bits{x == i});
  }
}

TEST(Mux, ExhaustiveSelection) {
  // branches over 3 inputs: branch k computes bit (k mod 3) XOR (k odd)
  std::vector<fragment> all;
  for (std::size_t k = 0; k < 7; ++k) {
    circuit_builder b("fragment.branch");
    auto x = b.inputs(3);
    std::vector<circuit_builder::signal> out{k % 2 ? b.not_(x[k % 3]) : b.id(x[k % 3])};
    all.push_back({b.build(out, false, 2u), 3, 1, 0});
  }
  for (std::size_t count = 1; count <= 7; ++count) {
    std::vector<fragment> br(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(count));
    const std::size_t d = 3;
    fragment m = mux(br, d);
    for (std::uint64_t x = 0; x < 8; ++x) {
      for (std::uint64_t s = 0; s < 8; ++s) {
        bits in = bits_of(x, 3), sel = bin(s, d);
        bits full = in;
        full.insert(full.end(), sel.begin(), sel.end());
        bool want = s >= 1 && s <= count ? (in[(s - 1) % 3] != ((s - 1) % 2 == 1)) : false;
        ASSERT_EQ(run(m, full), bits{want}) << "count=" << count << " x=" << x << " s=" << s;
      }
    }
  }
}

// depth <= 2 * ceil(log2 d) + 4 over d = 1..64
TEST(GadgetDepth, LogarithmicGrowth) {
  for (std::size_t d = 1; d <= 64; ++d) {
    const unsigned bound = 2 * ceil_log2(d) + 4;
    EXPECT_LE(add_one(d).circ.depth(), bound) << "add_one d=" << d;
    const std::uint64_t top = d >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << d) - 1;
    EXPECT_LE(identify(0, d).circ.depth(), bound) << "identify d=" << d;
    EXPECT_LE(identify(top, d).circ.depth(), bound) << "identify d=" << d;
    std::vector<fragment> br;
    for (std::size_t k = 0; k < d; ++k) br.push_back(constant_fragment(k % 2 == 1, 1));
    EXPECT_LE(mux(br, ceil_log2(d + 1)).circ.depth(), bound) << "mux d=" << d;
  }
}
