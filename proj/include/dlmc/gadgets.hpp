#pragma once

// Small circuit fragments shared by the compilers: ShiftR, the +1
// incrementer, equality-with-constant (IDENTIFY) and the IDENTIFY-driven
// multiplexer. All multi-bit numbers are MSB-first.

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dlmc/builder.hpp"
#include "dlmc/circuit.hpp"

namespace dlmc {

/// A standalone gadget circuit together with its interface sizes.
struct fragment {
  circuit circ;
  std::size_t in_arity = 0;
  std::size_t out_arity = 0;
  unsigned declared_depth = 0;
};

/// ceil(log2(x)) for x >= 1; 0 for x <= 1.
constexpr unsigned ceil_log2(std::uint64_t x) {
  unsigned k = 0;
  while ((std::uint64_t{1} << k) < x) ++k;
  return k;
}

/// Fixed-width MSB-first binary encoding of i.
inline bits bin(std::uint64_t i, unsigned width) {
  if (width < 64 && i >= (std::uint64_t{1} << width)) {
    throw invalid_argument("bin(" + std::to_string(i) + ", " + std::to_string(width) + "): value does not fit");
  }
  bits b(width);
  for (unsigned k = 0; k < width; ++k) b[k] = (i >> (width - 1 - k)) & 1u;
  return b;
}

inline std::uint64_t from_bin(const bits& b) {
  std::uint64_t v = 0;
  for (bool x : b) v = (v << 1) | (x ? 1u : 0u);
  return v;
}

namespace gadget {

using signal = circuit_builder::signal;

/// ShiftR: out[0] = 1 (as x0 OR NOT x0), out[i] = x[i-1].
inline std::vector<signal> shift_r(circuit_builder& b, std::span<const signal> x) {
  if (x.empty()) throw invalid_argument("shift_r needs at least one bit");
  std::vector<signal> out;
  out.reserve(x.size());
  out.push_back(b.or_(x[0], b.not_(x[0])));
  for (std::size_t i = 1; i < x.size(); ++i) out.push_back(x[i - 1]);
  return out;
}

/// MSB-first x + 1 mod 2^d. Carries come from a Kogge-Stone prefix-AND over
/// the low bits, so depth is ceil(log2 d) plus a constant.
inline std::vector<signal> increment(circuit_builder& b, std::span<const signal> x) {
  const std::size_t d = x.size();
  if (d == 0) return {};
  // LSB-first view.
  std::vector<signal> y(x.rbegin(), x.rend());
  std::vector<signal> prefix = y; // prefix[k] = AND(y[0..k])
  for (std::size_t span = 1; span < d; span *= 2) {
    std::vector<signal> next = prefix;
    for (std::size_t k = span; k < d; ++k) next[k] = b.and_(prefix[k], prefix[k - span]);
    prefix = std::move(next);
  }
  std::vector<signal> out_lsb(d);
  out_lsb[0] = b.not_(y[0]);
  for (std::size_t k = 1; k < d; ++k) out_lsb[k] = b.xor_(y[k], prefix[k - 1]);
  return {out_lsb.rbegin(), out_lsb.rend()};
}

/// 1 iff x == bin(value, |x|), as a balanced AND over per-bit literals.
inline signal identify(circuit_builder& b, std::span<const signal> x, std::uint64_t value) {
  bits pattern = bin(value, static_cast<unsigned>(x.size()));
  std::vector<signal> lits;
  lits.reserve(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) lits.push_back(pattern[j] ? x[j] : b.not_(x[j]));
  return b.and_tree(lits);
}

/// OR over (identify(sel, k) AND branch_k) for the given (k, branch) pairs.
/// Selector values matching no listed k give 0.
inline signal mux(circuit_builder& b, std::span<const signal> sel,
                  const std::vector<std::pair<std::uint64_t, signal>>& branches) {
  std::vector<signal> terms;
  terms.reserve(branches.size());
  for (const auto& [k, branch] : branches) terms.push_back(b.and_(identify(b, sel, k), branch));
  if (terms.empty()) return b.const0();
  return b.or_tree(terms);
}

/// mux() with branches that are constant 1: OR over identify(sel, k).
inline signal match_any(circuit_builder& b, std::span<const signal> sel, const std::vector<std::uint64_t>& ks) {
  std::vector<signal> terms;
  terms.reserve(ks.size());
  for (auto k : ks) terms.push_back(identify(b, sel, k));
  if (terms.empty()) return b.const0();
  return b.or_tree(terms);
}

} // namespace gadget

namespace detail {

inline fragment make_fragment(circuit c, std::size_t in, std::size_t out) {
  fragment f;
  f.declared_depth = c.depth();
  f.circ = std::move(c);
  f.in_arity = in;
  f.out_arity = out;
  return f;
}

} // namespace detail

/// ShiftR over n bits. Depth is 3 for every n: input, NOT, OR.
inline fragment shift_r(std::size_t n) {
  if (n == 0) throw invalid_argument("shift_r(0): need n >= 1");
  circuit_builder b("fragment.shift_r." + std::to_string(n));
  auto x = b.inputs(n);
  auto out = gadget::shift_r(b, x);
  fragment f = detail::make_fragment(b.build(out, false, 2u), n, n);
  f.declared_depth = 3;
  return f;
}

/// d-bit incrementer with wraparound (b^d -> 0^d).
inline fragment add_one(std::size_t d) {
  if (d == 0) throw invalid_argument("add_one(0): need d >= 1");
  circuit_builder b("fragment.add_one." + std::to_string(d));
  auto x = b.inputs(d);
  auto out = gadget::increment(b, x);
  return detail::make_fragment(b.build(out, false, 2u), d, d);
}

/// Single-output test x == bin(i) over d bits.
inline fragment identify(std::uint64_t i, std::size_t d) {
  if (d == 0 || (d < 64 && i >= (std::uint64_t{1} << d))) {
    throw invalid_argument("identify(" + std::to_string(i) + ", " + std::to_string(d) + "): need i < 2^d");
  }
  circuit_builder b("fragment.identify." + std::to_string(i) + "." + std::to_string(d));
  auto x = b.inputs(d);
  std::vector<circuit_builder::signal> out{gadget::identify(b, x, i)};
  return detail::make_fragment(b.build(out, false, 2u), d, 1);
}

/// Multiplexer over single-output branches sharing one input arity.
///
/// Inputs are the branches' x bits followed by d selector bits. Branch k
/// (1-based, branches[k-1]) is selected by selector bin(k); selector 0 and
/// values past the last branch give 0.
inline fragment mux(const std::vector<fragment>& branches, std::size_t d) {
  if (branches.empty()) throw invalid_argument("mux: no branches");
  const std::size_t arity = branches.front().in_arity;
  for (const auto& br : branches) {
    if (br.in_arity != arity || br.out_arity != 1) {
      throw invalid_argument("mux: branches must share input arity and have one output");
    }
  }
  if (d < 64 && branches.size() >= (std::uint64_t{1} << d)) {
    throw invalid_argument("mux: " + std::to_string(branches.size()) + " branches need more than " +
                           std::to_string(d) + " selector bits (selector 0 is unused)");
  }
  circuit_builder b("fragment.mux." + std::to_string(branches.size()) + "." + std::to_string(d));
  auto x = b.inputs(arity);
  auto sel = b.inputs(d);
  std::vector<std::pair<std::uint64_t, circuit_builder::signal>> arms;
  for (std::size_t k = 0; k < branches.size(); ++k) {
    arms.emplace_back(k + 1, b.inline_circuit(branches[k].circ, x).at(0));
  }
  std::vector<circuit_builder::signal> out{gadget::mux(b, sel, arms)};
  bool bounded = true;
  for (const auto& br : branches) {
    if (!br.circ.fanin_bound || *br.circ.fanin_bound > 2) bounded = false;
  }
  return detail::make_fragment(b.build(out, false, bounded ? std::optional<unsigned>(2u) : std::nullopt), arity + d, 1);
}

/// Constant single-output fragment over `arity` ignored inputs (arity >= 1).
inline fragment constant_fragment(bool value, std::size_t arity) {
  if (arity == 0) throw invalid_argument("constant_fragment needs an input to anchor the constant");
  circuit_builder b(std::string("fragment.const") + (value ? "1" : "0"));
  b.inputs(arity);
  std::vector<circuit_builder::signal> out{value ? b.const1() : b.const0()};
  return detail::make_fragment(b.build(out, false, 2u), arity, 1);
}

} // namespace dlmc
