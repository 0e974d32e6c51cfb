#include <gtest/gtest.h>

#include "support.hpp"

using namespace dlmc;

namespace {

// All n-token strings with an even number of b's, by direct counting.
distribution even_strings(std::size_t n) {
  distribution d;
  std::vector<std::string> keys;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
    std::string k;
    int bs = 0;
    for (std::size_t i = 0; i < n; ++i) {
      bool b = (x >> i) & 1u;
      bs += b;
      k += b ? 'b' : 'a';
    }
    if (bs % 2 == 0) keys.push_back(k);
  }
  for (const auto& k : keys) d.add(k, rational(1, static_cast<std::int64_t>(keys.size())));
  return d;
}

} // namespace

TEST(ParityTarget, Examples) {
  distribution two;
  two.add("aa", rational(1, 2));
  two.add("bb", rational(1, 2));
  EXPECT_EQ(parity_target(2), two);
  distribution three;
  for (const char* k : {"aaa", "abb", "bab", "bba"}) three.add(k, rational(1, 4));
  EXPECT_EQ(parity_target(3), three);
  distribution one;
  one.add("a", rational(1));
  EXPECT_EQ(parity_target(1), one);
  EXPECT_THROW(parity_target(0), invalid_argument);
  EXPECT_THROW(parity_target(21), invalid_argument);
}

TEST(ParityTarget, MatchesCounting) {
  for (std::size_t n = 1; n <= 12; ++n) {
    auto t = parity_target(n);
    EXPECT_EQ(t, even_strings(n));
    EXPECT_EQ(t.support_size(), std::size_t{1} << (n - 1));
  }
}

TEST(ParityRevision, SmallCasesAndRounds) {
  for (std::size_t n = 1; n <= 10; ++n) {
    dlm_spec s = parity_revision_dlm(n);
    EXPECT_TRUE(validate_spec(s).ok());
    EXPECT_EQ(exact_output_distribution(s, ""), even_strings(n)) << "n=" << n;
    EXPECT_EQ(run(s, "", n).records.size(), 2u);
  }
}

TEST(ParityRevision, IntermediateIsUniformPrefixWithLastA) {
  for (std::size_t n : {1u, 4u, 6u}) {
    dlm_spec s = parity_revision_dlm(n);
    compiled_spec cs(s);
    distribution y;
    detail::enumerate_paths(execution(cs, token_seq(n, mask_token), 1, true), default_branch_budget,
                            [&](const execution& e) {
                              y.add(e.sampled(), rational::dyadic(1, static_cast<unsigned>(e.bits_consumed())));
                            });
    EXPECT_EQ(y.support_size(), std::size_t{1} << (n - 1));
    for (const auto& [k, p] : y.entries()) {
      EXPECT_EQ(k.back(), 'a');
      EXPECT_EQ(p, rational::dyadic(1, static_cast<unsigned>(n - 1)));
    }
  }
  auto r = run(parity_revision_dlm(4), "", 3);
  EXPECT_EQ(r.records[0].state_after[3], 'a');
}

TEST(ParityRevision, ConstantCone) {
  for (std::size_t n : {1u, 2u, 5u, 16u, 40u}) {
    auto a = audit(parity_revision_dlm(n));
    EXPECT_LE(a.max_cone_inputs, 3u);
    EXPECT_LE(a.max_cone_randoms, 1u);
  }
}

TEST(ParityRemask, SmallCases) {
  for (std::size_t n = 2; n <= 10; n += 2) {
    dlm_spec s = parity_remask_dlm(n);
    auto rep = validate_spec(s);
    EXPECT_TRUE(rep.ok()) << rep.str();
    EXPECT_EQ(exact_output_distribution(s, ""), even_strings(n)) << "n=" << n;
    EXPECT_EQ(s.rounds, parity_remask_rounds);
  }
  EXPECT_THROW(parity_remask_dlm(3), invalid_argument);
}

TEST(ParityRemask, BlockOfOneZeroBecomesOneOne) {
  // a block reading (b, a) after its odd token is sampled is remasked to
  // (b, M) and then fixed to (b, b)
  dlm_spec s = parity_remask_dlm(4);
  bool seen = false;
  for (std::uint64_t seed = 0; seed < 200 && !seen; ++seed) {
    auto r = run(s, "", seed);
    const auto& r3 = r.records[2];
    for (std::size_t blk = 0; blk < 2; ++blk) {
      const std::size_t p = 2 * blk;
      if (r3.state_after[p] == 'b' && r3.state_after[p + 1] == mask_token && r3.state_before[p + 1] == 'a') {
        EXPECT_EQ(r.records[3].state_after.substr(p, 2), "bb");
        seen = true;
      }
    }
  }
  EXPECT_TRUE(seen);
}

TEST(ParityRemask, NoMaskInOutput) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto r = run(parity_remask_dlm(8), "", seed);
    EXPECT_EQ(r.output.find(mask_token), std::string::npos);
  }
}

TEST(ParityStandard, ExactAndRoundCounts) {
  for (std::size_t m = 1; m <= 4; ++m) {
    dlm_spec s = parity_standard_dlm(m + 2, m);
    EXPECT_TRUE(validate_spec(s).ok());
    EXPECT_EQ(exact_output_distribution(s, ""), even_strings(m + 2));
    auto s1 = first_round_set(s);
    EXPECT_EQ(s1, (std::vector<std::size_t>{1, 2}));
  }
}

TEST(Advantage, ResidualMasksOneAndTwo) {
  auto s1 = parity_standard_dlm(3, 1);
  EXPECT_EQ(advantage(s1, first_round_set(s1), s1.rounds - 1).accuracy, rational(3, 4));
  auto s2 = parity_standard_dlm(4, 2);
  EXPECT_EQ(advantage(s2, first_round_set(s2), s2.rounds - 1).accuracy, rational(5, 8));
}

TEST(Advantage, InputIgnoringSpecIsAGuess) {
  // positions 2..3 always become b, so "all a" never happens
  dlm_spec s;
  s.name = "allb";
  s.length = 3;
  s.rounds = 2;
  s.output_length = 3;
  detail::state_frame f("F", 3, 0);
  s.unmask_policy = f.policy({f.masked(0), f.b.const0(), f.b.const0()});
  for (std::size_t p = 0; p < 3; ++p) {
    detail::state_frame g("p", 3, 0);
    s.predictors.push_back({g.identity_predictor(p, g.b.const1()), {}});
  }
  EXPECT_EQ(advantage(s, {1}, 1).accuracy, rational(1, 2));
}

TEST(Advantage, UsesOneWideAnd) {
  auto s = parity_standard_dlm(5, 3);
  circuit c = advantage_circuit(s, {1, 2}, 2);
  std::size_t wide = 0;
  for (const auto& v : c.vertices) wide += v.op == gate_op::AND && v.args.size() == 3;
  EXPECT_GE(wide, 1u);
  EXPECT_THROW(advantage_circuit(parity_revision_dlm(3), {1}, 1), invalid_argument);
}
