#pragma once

// Even-parity samplers and the parity-advantage reduction circuit.

#include <bit>
#include <set>

#include "dlmc/compile_common.hpp"

namespace dlmc {

/// Uniform distribution over n-token strings with an even number of b's.
inline distribution parity_target(std::size_t n) {
  if (n < 1 || n > 20) throw invalid_argument("parity_target: need 1 <= n <= 20");
  distribution d;
  const rational p = rational::dyadic(1, static_cast<unsigned>(n - 1));
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
    if (std::popcount(x) % 2 != 0) continue;
    std::string key(n, 'a');
    for (std::size_t i = 0; i < n; ++i) key[i] = ((x >> (n - 1 - i)) & 1u) ? 'b' : 'a';
    d.add(key, p);
  }
  return d;
}

/// Two-round revision sampler. Round 1 writes prefix parities y with
/// y^n = a; round 2 rewrites every position to z^i = y^i xor y^(i-1).
/// Position 1's mask bit tells the two rounds apart.
inline dlm_spec parity_revision_dlm(std::size_t n) {
  if (n < 1) throw invalid_argument("parity_revision_dlm: need n >= 1");
  dlm_spec s;
  s.name = "parity.revision." + std::to_string(n);
  s.length = n;
  s.rounds = 2;
  s.mode = dlm_mode::revision;
  s.output_length = n;
  {
    detail::state_frame f(s.name + ".F", n, 0);
    std::vector<detail::signal> out(n, f.b.const1());
    s.unmask_policy = f.policy(out);
  }
  for (std::size_t j = 0; j < n; ++j) {
    detail::state_frame f(s.name + ".p" + std::to_string(j + 1), n, 0);
    auto first = f.hi(0);
    auto diff = j == 0 ? f.lo(0) : f.b.xor_(f.lo(j), f.lo(j - 1));
    auto second = f.b.and_(f.b.not_(first), diff);
    auto value = j + 1 == n ? second : f.b.or_(f.b.and_(first, f.b.random()), second);
    s.predictors.push_back({f.token_predictor(value), {}});
  }
  assign_private_slots(s);
  return s;
}

inline constexpr std::size_t parity_remask_rounds = 6;

/// Step-indexed remasking sampler over n/2 blocks (2i-1, 2i).
///
///   round 1: odd positions get y (uniform, last block a)
///   round 2: even positions get z^i = y^i xor y^(i-1); all odd positions remasked
///   round 3: odd positions of blocks with z = a sampled; (b, a) blocks lose the a
///   round 4: masked even positions become b; blocks (M, b) lose the b
///   round 5: masked odd positions sampled
///   round 6: masked even positions become NOT odd
inline dlm_spec parity_remask_dlm(std::size_t n) {
  if (n < 2 || n % 2 != 0) throw invalid_argument("parity_remask_dlm: need even n >= 2");
  dlm_spec s;
  s.name = "parity.remask." + std::to_string(n);
  s.length = n;
  s.rounds = parity_remask_rounds;
  s.mode = dlm_mode::remask;
  s.step_indexed = true;
  s.output_length = n;
  const unsigned cb = ceil_log2(s.rounds);
  auto at = [](detail::state_frame& f, std::uint64_t k) { return gadget::identify(f.b, f.counter, k); };
  auto is_a = [](detail::state_frame& f, std::size_t p) { return f.b.and_(f.b.not_(f.hi(p)), f.b.not_(f.lo(p))); };

  {
    detail::state_frame f(s.name + ".F", n, cb);
    std::vector<detail::signal> out(n);
    for (std::size_t p = 0; p < n; p += 2) {
      std::vector<detail::signal> odd{at(f, 0), f.b.and_(at(f, 2), is_a(f, p + 1)), f.b.and_(at(f, 4), f.masked(p))};
      std::vector<detail::signal> even{at(f, 1), f.b.and_(at(f, 3), f.masked(p + 1)),
                                       f.b.and_(at(f, 5), f.masked(p + 1))};
      out[p] = f.b.or_tree(odd);
      out[p + 1] = f.b.or_tree(even);
    }
    s.unmask_policy = f.policy(out);
  }
  {
    detail::state_frame f(s.name + ".G", n, cb);
    std::vector<detail::signal> out(n);
    for (std::size_t p = 0; p < n; p += 2) {
      auto odd_b = f.b.and_(f.b.not_(f.hi(p)), f.lo(p));
      out[p] = at(f, 1);
      out[p + 1] = f.b.or_(f.b.and_(at(f, 2), f.b.and_(odd_b, is_a(f, p + 1))), f.b.and_(at(f, 3), f.masked(p)));
    }
    s.remask_policy = f.policy(out);
  }
  for (std::size_t p = 0; p < n; ++p) {
    detail::state_frame f(s.name + ".p" + std::to_string(p + 1), n, cb);
    detail::signal value;
    if (p % 2 == 0) {
      auto r = f.b.random();
      value = p + 2 == n ? f.b.and_(f.b.not_(at(f, 0)), r) : r;
    } else {
      auto z = p == 1 ? f.lo(0) : f.b.xor_(f.lo(p - 1), f.lo(p - 3));
      std::vector<std::pair<std::uint64_t, detail::signal>> arms{
          {1, z}, {3, f.b.const1()}, {5, f.b.not_(f.lo(p - 1))}};
      value = gadget::mux(f.b, f.counter, arms);
    }
    s.predictors.push_back({f.identity_predictor(p, value), {}});
  }
  assign_private_slots(s);
  return s;
}

/// Standard-mode exact sampler of the even-parity law whose first round
/// decodes positions 1..n-m, leaving m masks. With m >= 2 a second round
/// decodes n-m+1..n-1; the last round sets position n to the XOR of the rest.
inline dlm_spec parity_standard_dlm(std::size_t n, std::size_t m) {
  if (m < 1 || m >= n) throw invalid_argument("parity_standard_dlm: need 1 <= m < n");
  dlm_spec s;
  s.name = "parity.standard." + std::to_string(n) + "." + std::to_string(m);
  s.length = n;
  s.rounds = m == 1 ? 2 : 3;
  s.mode = dlm_mode::standard;
  s.output_length = n;
  {
    detail::state_frame f(s.name + ".F", n, 0);
    std::vector<detail::signal> out(n);
    auto fresh = f.masked(0);
    for (std::size_t j = 0; j < n; ++j) {
      if (j < n - m) out[j] = fresh;
      else if (j + 1 < n) out[j] = f.b.and_(f.b.not_(fresh), f.masked(j));
      else out[j] = f.b.const0();
    }
    s.unmask_policy = f.policy(out);
  }
  for (std::size_t j = 0; j < n; ++j) {
    detail::state_frame f(s.name + ".p" + std::to_string(j + 1), n, 0);
    detail::signal value;
    if (j + 1 < n) {
      value = f.b.random();
    } else {
      value = f.lo(0);
      for (std::size_t i = 1; i + 1 < n; ++i) value = f.b.xor_(value, f.lo(i));
    }
    s.predictors.push_back({f.identity_predictor(j, value), {}});
  }
  assign_private_slots(s);
  return s;
}

/// Probabilistic circuit guessing PARITY of its |S1| input bits: the bits
/// seed positions S1 (0 -> a, 1 -> b), rounds 2..k+1 of the DLM are
/// unrolled, and the circuit outputs 0 if every position outside S1 reads a,
/// else one fresh random bit.
struct advantage_result {
  circuit circ;
  std::vector<std::size_t> seeded; // S1, 1-based
  rational accuracy;               // Pr over uniform inputs and R of C = PARITY
};

inline circuit advantage_circuit(const dlm_spec& spec, const std::vector<std::size_t>& s1, std::size_t k) {
  if (spec.mode != dlm_mode::standard) throw invalid_argument("advantage circuit needs a standard-mode spec");
  if (k < 1) throw invalid_argument("advantage circuit needs k >= 1 rounds");
  auto rep = validate_spec(spec, 0);
  if (!rep.ok()) throw invalid_argument("invalid DLM spec: " + rep.str());
  const std::size_t L = spec.length;
  std::set<std::size_t> seeded;
  for (auto p : s1) {
    if (p < 1 || p > L) throw invalid_argument("seeded position " + std::to_string(p) + " out of range");
    seeded.insert(p - 1);
  }
  if (seeded.size() != s1.size()) throw invalid_argument("seeded positions repeat");
  if (seeded.empty()) throw invalid_argument("advantage circuit needs at least one seeded position");

  circuit_builder b("advantage." + spec.name);
  auto in = b.inputs(seeded.size());
  std::vector<detail::signal> hi(L), lo(L);
  {
    std::size_t q = 0;
    for (std::size_t p = 0; p < L; ++p) {
      if (seeded.count(p)) {
        hi[p] = b.const0();
        lo[p] = in[q++];
      } else {
        hi[p] = b.const1();
        lo[p] = b.const0();
      }
    }
  }
  const unsigned cb = counter_bits(spec);
  for (std::size_t round = 2; round <= k + 1 && round <= spec.rounds; ++round) {
    std::vector<detail::signal> enc;
    for (std::size_t p = 0; p < L; ++p) {
      enc.push_back(hi[p]);
      enc.push_back(lo[p]);
    }
    if (cb > 0) {
      bits c = bin(round - 1, cb);
      for (bool bit : c) enc.push_back(bit ? b.const1() : b.const0());
    }
    auto sel = b.inline_circuit(spec.unmask_policy, enc);
    std::vector<detail::signal> nhi(L), nlo(L);
    for (std::size_t p = 0; p < L; ++p) {
      auto s = round == spec.rounds ? b.or_(sel[p], b.and_(hi[p], b.not_(lo[p]))) : sel[p];
      auto out = b.inline_circuit(spec.predictors[p].circ, enc);
      nhi[p] = b.select(s, out[0], hi[p]);
      nlo[p] = b.select(s, out[1], lo[p]);
    }
    hi = std::move(nhi);
    lo = std::move(nlo);
  }
  std::vector<detail::signal> all_a_terms;
  for (std::size_t p = 0; p < L; ++p) {
    if (seeded.count(p)) continue;
    all_a_terms.push_back(b.and_(b.not_(hi[p]), b.not_(lo[p])));
  }
  auto all_a = b.and_wide(all_a_terms);
  std::vector<detail::signal> out{b.and_(b.not_(all_a), b.random())};
  return b.build(out);
}

/// Pr[C(x, R) = PARITY(x)] for x uniform over {0,1}^n and R uniform.
inline rational parity_accuracy(const circuit& c, unsigned budget = default_enumeration_budget) {
  const std::size_t n = c.input_count;
  if (n > 20) throw budget_exceeded("parity accuracy over " + std::to_string(n) + " inputs exceeds 2^20 inputs");
  rational acc(0);
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
    bits in(n);
    for (std::size_t i = 0; i < n; ++i) in[i] = (x >> (n - 1 - i)) & 1u;
    const std::string want = std::popcount(x) % 2 ? "1" : "0";
    acc += output_distribution(c, in, budget).probability(want);
  }
  return acc / rational(static_cast<std::int64_t>(std::uint64_t{1} << n));
}

inline advantage_result advantage(const dlm_spec& spec, const std::vector<std::size_t>& s1, std::size_t k,
                                  unsigned budget = default_enumeration_budget) {
  advantage_result r{advantage_circuit(spec, s1, k), s1, rational(0)};
  r.accuracy = parity_accuracy(r.circ, budget);
  return r;
}

/// S1 = F(M^L): the positions decoded by the first round from the all-mask state.
inline std::vector<std::size_t> first_round_set(const dlm_spec& spec) {
  if (spec.prompt_length != 0) throw invalid_argument("first_round_set needs n = 0");
  bits in = encode(token_seq(spec.length, mask_token));
  if (spec.step_indexed) {
    bits c = bin(0, counter_bits(spec));
    in.insert(in.end(), c.begin(), c.end());
  }
  bits f = evaluate(spec.unmask_policy, in, {});
  std::vector<std::size_t> s1;
  for (std::size_t p = 0; p < f.size(); ++p) {
    if (f[p]) s1.push_back(p + 1);
  }
  return s1;
}

} // namespace dlmc
