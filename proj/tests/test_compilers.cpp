#include <gtest/gtest.h>

#include "support.hpp"

using namespace dlmc;
using dlmc::testing::bits_of;
using dlmc::testing::brute_distribution;
using dlmc::testing::tokens_of;

namespace {

circuit xor_circuit() {
  return normalize(parse_netlist("circuit xor inputs=2\nv 0 input\nv 1 input\nv 2 OR(0,1)\nv 3 AND(0,1)\n"
                                 "v 4 NOT(3)\nv 5 AND(2,4)\noutputs 5\n"));
}

circuit coin_circuit() { return normalize(parse_netlist("circuit coin inputs=1\nv 0 input\nv 1 random\noutputs 1\n")); }

// Width-2 ladder: layer k holds AND and OR of layer k-1; one coin at layer 2.
circuit ladder(unsigned layers) {
  circuit_builder b("ladder");
  auto x = b.inputs(2);
  std::vector<circuit_builder::signal> cur = x;
  for (unsigned k = 2; k <= layers; ++k) {
    auto a = b.and_(cur[0], cur[1]);
    auto o = k == 2 ? b.or_(cur[1], b.random()) : b.or_(cur[0], cur[1]);
    cur = {a, o};
  }
  return b.build(cur, true, 2u);
}

// Every input on one layer-2 XOR chain: inputs x1..xn, outputs x_i xor x_{i+1}.
circuit xor_family(std::size_t n) {
  circuit_builder b("xorfam");
  auto x = b.inputs(n);
  std::vector<circuit_builder::signal> out;
  for (std::size_t i = 0; i + 1 < n; ++i) out.push_back(b.xor_(x[i], x[i + 1]));
  return b.build(out);
}

void expect_matches_oracle(const dlm_spec& s, const circuit& c) {
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << c.input_count); ++x) {
    bits in = bits_of(x, c.input_count);
    auto got = exact_output_distribution(s, tokens_of(in));
    auto want = brute_distribution(c, in);
    ASSERT_EQ(got, want) << s.name << " input " << bits_str(in) << "\n" << serialize_netlist(c);
  }
}

} // namespace

TEST(CompileCot, XorExample) {
  circuit c = xor_circuit();
  ASSERT_EQ(c.size(), 7u);
  ASSERT_EQ(c.depth(), 4u);
  dlm_spec s = compile_cot(c);
  EXPECT_EQ(s.length, 7u);
  EXPECT_EQ(s.rounds, 4u);
  EXPECT_EQ(s.mode, dlm_mode::standard);
  EXPECT_EQ(exact_output_distribution(s, "ba").probability("b"), rational(1));
  expect_matches_oracle(s, c);
}

TEST(CompileCot, SingleRandomBit) {
  circuit c = coin_circuit();
  dlm_spec s = compile_cot(c);
  EXPECT_EQ(s.length, 2u);
  EXPECT_EQ(s.rounds, 2u);
  distribution want;
  want.add("a", rational(1, 2));
  want.add("b", rational(1, 2));
  EXPECT_EQ(exact_output_distribution(s, "a"), want);
}

TEST(CompileCot, RoundIUnmasksExactlyLayerIPlusOne) {
  for (const circuit& c : dlmc::testing::random_corpus(40, 3)) {
    dlm_spec s = compile_cot(c);
    auto widths = layer_widths(c);
    std::size_t start = 1 + widths[1]; // 1-based first position of layer k + 1
    auto r = run(s, token_seq(c.input_count, 'b'), 1);
    ASSERT_EQ(r.records.size(), c.depth());
    for (unsigned k = 1; k <= c.depth(); ++k) {
      const auto& rec = r.records[k - 1];
      const std::size_t w = k < c.depth() ? widths[k + 1] : 0;
      std::vector<std::size_t> want;
      for (std::size_t p = start; p < start + w; ++p) want.push_back(p);
      EXPECT_EQ(rec.unmask_set, want) << "round " << k;
      // masked set after round k is exactly the layers past k + 1
      const std::size_t next = start + w;
      for (std::size_t p = 1; p <= s.length; ++p) EXPECT_EQ(rec.state_after[p - 1] == mask_token, p >= next);
      start = next;
    }
  }
}

TEST(CompileCot, PredictorDepthIndependentOfSize) {
  unsigned depth = 0;
  for (std::size_t n : {2u, 4u, 8u, 16u}) {
    auto a = audit(compile_cot(xor_family(n)));
    if (depth == 0) depth = a.max_predictor_depth;
    EXPECT_EQ(a.max_predictor_depth, depth) << "n=" << n;
  }
}

TEST(CompileCot, RejectsUnnormalizedCircuits) {
  circuit raw = parse_netlist("circuit r inputs=1\nv 0 input\nv 1 NOT(0)\nv 2 AND(0,1)\noutputs 2\n");
  EXPECT_THROW(compile_cot(raw), invalid_argument);
}

TEST(CompileRemask, LengthForWidthThreeDepthFour) {
  circuit_builder b("w3d4");
  auto x = b.inputs(3);
  std::vector<circuit_builder::signal> l2{b.and_(x[0], x[1]), b.or_(x[1], x[2]), b.not_(x[2])};
  std::vector<circuit_builder::signal> l3{b.and_(l2[0], l2[1]), b.or_(l2[1], l2[2]), b.not_(l2[2])};
  std::vector<circuit_builder::signal> out{b.or_(l3[0], l3[1]), b.and_(l3[1], l3[2])};
  circuit c = b.build(out, true);
  ASSERT_EQ(c.width(), 3u);
  ASSERT_EQ(c.depth(), 4u);
  dlm_spec s = compile_remask(c);
  EXPECT_EQ(s.length, 12u);
  EXPECT_EQ(s.rounds, 5u);
  expect_matches_oracle(s, c);
  dlm_spec r = compile_revision(c);
  EXPECT_EQ(r.length, 6u);
  EXPECT_EQ(r.rounds, 5u);
  expect_matches_oracle(r, c);
}

TEST(CompileRemask, XorOnAllInputs) {
  circuit c = normalize(xor_circuit(), true);
  dlm_spec s = compile_remask(c);
  EXPECT_TRUE(validate_spec(s, 24).ok()) << validate_spec(s, 24).str();
  expect_matches_oracle(s, c);
}

TEST(CompileRemask, OddDepthIsRejected) {
  circuit c = normalize(parse_netlist("circuit t inputs=1\nv 0 input\nv 1 NOT(0)\nv 2 NOT(1)\noutputs 2\n"));
  ASSERT_EQ(c.depth(), 3u);
  EXPECT_THROW(compile_remask(c), invalid_argument);
}

TEST(CompileRemask, BlockShapesAlongTheRun) {
  for (const circuit& raw : dlmc::testing::random_corpus(40, 4)) {
    circuit c = normalize(raw, true);
    dlm_spec s = compile_remask(c);
    const std::size_t w = c.width();
    const unsigned ds = ceil_log2(c.depth() + 1);
    auto widths = layer_widths(c);
    auto r = run(s, token_seq(c.input_count, 'a'), 5);
    ASSERT_EQ(r.records.size(), c.depth() + 1u);
    for (unsigned i = 1; i <= c.depth(); ++i) {
      // after round i the live data is layer i, the live counter reads bin(i)
      const token_seq& x = r.records[i - 1].state_after;
      std::size_t unmasked = 0;
      for (char t : x) unmasked += t != mask_token;
      EXPECT_LE(unmasked, w + ds);
      token_seq want_counter;
      for (bool bit : bin(i, ds)) want_counter += bit ? 'b' : 'a';
      if (i % 2 == 1) {
        EXPECT_EQ(x.substr(w, ds), want_counter);
        for (std::size_t p = 0; p < w; ++p) EXPECT_EQ(x[p] == mask_token, p >= widths[i]) << "round " << i;
        for (std::size_t p = w + ds; p < s.length; ++p) EXPECT_EQ(x[p], mask_token);
      } else {
        EXPECT_EQ(x.substr(w + ds, ds), want_counter);
        for (std::size_t p = 0; p < w + ds; ++p) EXPECT_EQ(x[p], mask_token);
        for (std::size_t t = 0; t < w; ++t) EXPECT_EQ(x[w + 2 * ds + t] == mask_token, t < w - widths[i]);
      }
    }
  }
}

TEST(CompileRevision, XorAndCoin) {
  circuit c = xor_circuit();
  dlm_spec s = compile_revision(c);
  EXPECT_EQ(s.mode, dlm_mode::revision);
  expect_matches_oracle(s, c);
  circuit coin = coin_circuit();
  dlm_spec t = compile_revision(coin);
  EXPECT_EQ(t.length, 1u + ceil_log2(coin.depth() + 1));
  distribution want;
  want.add("a", rational(1, 2));
  want.add("b", rational(1, 2));
  EXPECT_EQ(exact_output_distribution(t, "b"), want);
}

TEST(CompileRevision, NoMaskAfterRoundOne) {
  for (const circuit& c : dlmc::testing::random_corpus(40, 6)) {
    dlm_spec s = compile_revision(c);
    auto r = run(s, token_seq(c.input_count, 'b'), 9);
    ASSERT_EQ(r.records.size(), c.depth() + 1u);
    for (const auto& rec : r.records) EXPECT_EQ(rec.state_after.find(mask_token), std::string::npos);
  }
}

TEST(Compilers, CorpusSampleMatchesOracle) {
  for (const circuit& c : dlmc::testing::random_corpus(30, 99)) {
    expect_matches_oracle(compile_cot(c), c);
    circuit e = normalize(c, true);
    expect_matches_oracle(compile_remask(e), e);
    expect_matches_oracle(compile_revision(c), c);
  }
}

// depth <= 2 * ceil(log2 d) + 10 over d in {2, 4, 8, 16}
TEST(Compilers, LogDepthAudit) {
  for (unsigned layers : {2u, 4u, 8u, 16u}) {
    circuit c = ladder(layers);
    const unsigned bound = 2 * ceil_log2(c.depth()) + 10;
    auto a = audit(compile_remask(c), bound);
    EXPECT_TRUE(a.within_bound) << "remask d=" << c.depth() << " depth " << a.max_depth;
    auto r = audit(compile_revision(c), bound);
    EXPECT_TRUE(r.within_bound) << "revision d=" << c.depth() << " depth " << r.max_depth;
    EXPECT_TRUE(a.remask.has_value());
  }
}
