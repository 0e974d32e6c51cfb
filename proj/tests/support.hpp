#pragma once

// Test-side oracles and generators. Nothing here calls the library's
// evaluator, so it can serve as an independent reference.

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "dlmc/dlmc.hpp"

namespace dlmc::testing {

/// Recursive evaluation straight off the vertex list. Random bits are
/// assigned to random vertices in increasing id order.
inline bits brute_evaluate(const circuit& c, const bits& input, const bits& random) {
  std::unordered_map<vertex_id, const vertex*> by_id;
  std::vector<vertex_id> inputs, randoms;
  for (const auto& v : c.vertices) {
    by_id[v.id] = &v;
    if (v.kind == vertex_kind::input) inputs.push_back(v.id);
    if (v.kind == vertex_kind::random) randoms.push_back(v.id);
  }
  std::sort(inputs.begin(), inputs.end());
  std::sort(randoms.begin(), randoms.end());
  std::unordered_map<vertex_id, bool> memo;
  for (std::size_t k = 0; k < inputs.size(); ++k) memo[inputs[k]] = input.at(k);
  for (std::size_t k = 0; k < randoms.size(); ++k) memo[randoms[k]] = random.at(k);
  std::function<bool(vertex_id)> value = [&](vertex_id id) -> bool {
    if (auto it = memo.find(id); it != memo.end()) return it->second;
    const vertex& v = *by_id.at(id);
    std::size_t ones = 0;
    for (vertex_id a : v.args) ones += value(a);
    bool r = false;
    switch (v.op) {
    case gate_op::ID: r = ones == 1; break;
    case gate_op::NOT: r = ones == 0; break;
    case gate_op::AND: r = ones == v.args.size(); break;
    case gate_op::OR: r = ones > 0; break;
    case gate_op::MAJ: r = 2 * ones > v.args.size(); break;
    }
    memo[id] = r;
    return r;
  };
  bits out;
  for (vertex_id o : c.outputs) out.push_back(value(o));
  return out;
}

/// Exact output law by looping over every random assignment; keys use a/b.
inline distribution brute_distribution(const circuit& c, const bits& input) {
  std::size_t r = 0;
  for (const auto& v : c.vertices) r += v.kind == vertex_kind::random;
  std::map<std::string, std::int64_t> counts;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << r); ++x) {
    bits rnd(r);
    for (std::size_t k = 0; k < r; ++k) rnd[k] = (x >> k) & 1u;
    std::string key;
    for (bool b : brute_evaluate(c, input, rnd)) key += b ? 'b' : 'a';
    ++counts[key];
  }
  distribution d;
  for (auto& [k, n] : counts) d.add(k, rational(n, static_cast<std::int64_t>(std::uint64_t{1} << r)));
  return d;
}

inline bits bits_of(std::uint64_t x, std::size_t n) {
  bits b(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = (x >> (n - 1 - i)) & 1u;
  return b;
}

inline token_seq tokens_of(const bits& b) {
  token_seq t;
  for (bool x : b) t += x ? 'b' : 'a';
  return t;
}

/// Raw (unlayered) random DAG: args may come from any earlier vertex.
inline circuit random_raw_circuit(std::mt19937_64& rng, std::size_t max_inputs = 4, std::size_t max_random = 6,
                                  std::size_t max_gates = 14) {
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  circuit c;
  c.name = "rand";
  c.input_count = pick(0, max_inputs);
  vertex_id id = 0;
  for (std::size_t i = 0; i < c.input_count; ++i) c.vertices.push_back({id++, vertex_kind::input, gate_op::ID, {}, 0});
  const std::size_t r = pick(c.input_count == 0 ? 1 : 0, max_random);
  const std::size_t g = pick(1, max_gates);
  std::size_t randoms_left = r;
  for (std::size_t k = 0; k < r + g; ++k) {
    const bool make_random = randoms_left > 0 && (pick(0, r + g - k - 1) < randoms_left || c.vertices.empty());
    if (make_random || c.vertices.empty()) {
      c.vertices.push_back({id++, vertex_kind::random, gate_op::ID, {}, 0});
      --randoms_left;
      continue;
    }
    static constexpr gate_op ops[] = {gate_op::AND, gate_op::OR, gate_op::NOT, gate_op::ID, gate_op::MAJ};
    gate_op op = ops[pick(0, 4)];
    std::size_t arity = op == gate_op::NOT || op == gate_op::ID ? 1 : (op == gate_op::MAJ ? pick(1, 3) : pick(2, 3));
    std::vector<vertex_id> args;
    for (std::size_t a = 0; a < arity; ++a) args.push_back(c.vertices[pick(0, c.vertices.size() - 1)].id);
    c.vertices.push_back({id++, vertex_kind::gate, op, args, 0});
  }
  const std::size_t m = pick(1, std::min<std::size_t>(3, c.vertices.size()));
  std::vector<vertex_id> pool;
  for (const auto& v : c.vertices) pool.push_back(v.id);
  std::shuffle(pool.begin(), pool.end(), rng);
  c.outputs.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(m));
  return c;
}

/// Normalized random circuits with n <= 4, r <= 6, N <= 24, d <= 6.
inline std::vector<circuit> random_corpus(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<circuit> out;
  while (out.size() < count) {
    circuit raw = random_raw_circuit(rng);
    circuit c = normalize(raw);
    if (c.size() > 24 || c.depth() > 6 || c.random_count() > 6) continue;
    c.name = "corpus" + std::to_string(out.size());
    out.push_back(std::move(c));
  }
  return out;
}

/// Random standard-mode spec over short sequences. Predictors copy unmasked
/// pairs and write a random function of the state and a few private bits at
/// masked positions; F picks a random subset of the masked positions.
inline dlm_spec random_standard_spec(std::mt19937_64& rng, bool step_indexed = false) {
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  dlm_spec s;
  s.name = "randspec";
  s.length = pick(1, 4);
  s.rounds = pick(1, 4);
  s.step_indexed = step_indexed;
  s.mode = dlm_mode::standard;
  s.prompt_length = pick(0, s.length);
  s.output_length = pick(0, s.length - s.prompt_length);
  const std::size_t L = s.length;
  const unsigned cb = counter_bits(s);

  auto random_signal = [&](detail::state_frame& f, std::vector<detail::signal> pool) {
    detail::signal x = pool[pick(0, pool.size() - 1)];
    for (std::size_t k = 0, steps = pick(0, 3); k < steps; ++k) {
      detail::signal y = pool[pick(0, pool.size() - 1)];
      switch (pick(0, 3)) {
      case 0: x = f.b.and_(x, y); break;
      case 1: x = f.b.or_(x, y); break;
      case 2: x = f.b.xor_(x, y); break;
      default: x = f.b.not_(x); break;
      }
      pool.push_back(x);
    }
    return x;
  };

  {
    detail::state_frame f("randspec.F", L, cb);
    std::vector<detail::signal> pool = f.enc;
    pool.insert(pool.end(), f.counter.begin(), f.counter.end());
    std::vector<detail::signal> out;
    for (std::size_t p = 0; p < L; ++p) out.push_back(f.b.and_(f.masked(p), random_signal(f, pool)));
    s.unmask_policy = f.policy(out);
  }
  for (std::size_t p = 0; p < L; ++p) {
    detail::state_frame f("randspec.p" + std::to_string(p + 1), L, cb);
    std::vector<detail::signal> pool = f.enc;
    pool.insert(pool.end(), f.counter.begin(), f.counter.end());
    for (std::size_t k = 0, r = pick(0, 2); k < r; ++k) pool.push_back(f.b.random());
    s.predictors.push_back({f.identity_predictor(p, random_signal(f, pool)), {}});
  }
  assign_private_slots(s);
  return s;
}

inline token_seq random_prompt(std::mt19937_64& rng, std::size_t n) {
  token_seq q;
  for (std::size_t i = 0; i < n; ++i) q += (rng() & 1u) ? 'b' : 'a';
  return q;
}

} // namespace dlmc::testing
