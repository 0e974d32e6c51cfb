#pragma once

// Helpers shared by the circuit-to-DLM compilers: layer indexing of a
// normalized circuit and a builder frame over the encoded state.

#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dlmc/builder.hpp"
#include "dlmc/circuit.hpp"
#include "dlmc/dlm.hpp"
#include "dlmc/gadgets.hpp"

namespace dlmc {

/// Vertices of a normalized circuit grouped by layer, each layer sorted by id.
struct layer_index {
  unsigned depth = 0;
  std::size_t width = 0;
  std::vector<std::vector<const vertex*>> layers; // layers[1..depth]
  std::unordered_map<vertex_id, std::pair<unsigned, std::size_t>> where; // id -> (layer, 0-based slot)

  std::size_t layer_width(unsigned k) const { return k >= 1 && k <= depth ? layers[k].size() : 0; }
};

inline layer_index index_layers(const circuit& c) {
  auto rep = normalization_report(c);
  if (!rep.ok()) throw invalid_argument("circuit '" + c.name + "' is not normalized: " + rep.str());
  circuit sorted = c;
  sort_vertices(sorted);
  layer_index li;
  li.depth = c.depth();
  li.layers.resize(li.depth + 1);
  for (const auto& v : c.vertices) li.layers[v.layer].push_back(&v);
  for (auto& layer : li.layers) {
    std::sort(layer.begin(), layer.end(), [](const vertex* a, const vertex* b) { return a->id < b->id; });
  }
  for (unsigned k = 1; k <= li.depth; ++k) {
    li.width = std::max(li.width, li.layers[k].size());
    for (std::size_t s = 0; s < li.layers[k].size(); ++s) li.where[li.layers[k][s]->id] = {k, s};
  }
  return li;
}

namespace detail {

using signal = circuit_builder::signal;

/// Builder whose inputs are the 2L-bit state encoding followed by the
/// round-counter bits. Positions are 0-based here.
class state_frame {
public:
  state_frame(std::string name, std::size_t length, unsigned counter_width) : b(std::move(name)), length_(length) {
    enc = b.inputs(2 * length);
    counter = b.inputs(counter_width);
  }

  signal hi(std::size_t p) const { return enc.at(2 * p); }
  signal lo(std::size_t p) const { return enc.at(2 * p + 1); }
  signal masked(std::size_t p) { return b.and_(hi(p), b.not_(lo(p))); }

  /// Standard/remask predictor output at position p: a masked position
  /// becomes `value`; any other pair is copied unchanged.
  circuit identity_predictor(std::size_t p, signal value) {
    signal m = masked(p);
    std::vector<signal> out{b.and_(hi(p), lo(p)), b.or_(b.and_(m, value), b.and_(b.not_(m), lo(p)))};
    return b.build(out);
  }

  /// Revision predictor output: always the token `value`.
  circuit token_predictor(signal value) {
    std::vector<signal> out{b.const0(), value};
    return b.build(out);
  }

  circuit policy(const std::vector<signal>& out) { return b.build(out); }

  std::size_t length() const noexcept { return length_; }

  circuit_builder b;
  std::vector<signal> enc;
  std::vector<signal> counter;

private:
  std::size_t length_;
};

/// Copy of vertex v (layer >= 2) in builder b with args resolved by `arg`.
/// Random vertices resolve through `rnd`, which supplies one shared bit.
inline signal emit_vertex(circuit_builder& b, const vertex& v, const std::function<signal(vertex_id)>& arg,
                          const std::function<signal()>& rnd) {
  switch (v.kind) {
  case vertex_kind::input: throw invalid_argument("input vertex " + std::to_string(v.id) + " outside layer 1");
  case vertex_kind::random: return rnd();
  case vertex_kind::gate: break;
  }
  std::vector<signal> args;
  args.reserve(v.args.size());
  for (vertex_id a : v.args) args.push_back(arg(a));
  if (v.op == gate_op::ID) return args[0];
  return b.gate(v.op, std::move(args));
}

/// Lazily created private random bit shared by all branches of a predictor.
class shared_random {
public:
  explicit shared_random(circuit_builder& b) : b_(&b) {}
  signal operator()() {
    if (!r_) r_ = b_->random();
    return *r_;
  }

private:
  circuit_builder* b_;
  std::optional<signal> r_;
};

/// Value read from a block of counter positions: lo bits, MSB-first.
/// A masked counter reads as zero.
inline std::vector<signal> read_counter(const state_frame& f, std::size_t first, unsigned width) {
  std::vector<signal> v;
  for (unsigned k = 0; k < width; ++k) v.push_back(f.lo(first + k));
  return v;
}

} // namespace detail
} // namespace dlmc
