#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dlmc/circuit.hpp"

namespace dlmc {

/// Incremental construction of circuits from signals (vertex ids).
///
/// Gates are structurally hashed, so asking twice for AND(a, b) returns the
/// same vertex. `build` drops everything outside the output cone (inputs are
/// always kept) and returns a normalized circuit.
class circuit_builder {
public:
  using signal = vertex_id;

  explicit circuit_builder(std::string name) : name_(std::move(name)) {}

  signal input() {
    signal s = push({next_id_, vertex_kind::input, gate_op::ID, {}, 0});
    ++inputs_;
    if (!anchor_) anchor_ = s;
    return s;
  }

  std::vector<signal> inputs(std::size_t n) {
    std::vector<signal> v;
    v.reserve(n);
    for (std::size_t i = 0; i < n; ++i) v.push_back(input());
    return v;
  }

  signal random() {
    signal s = push({next_id_, vertex_kind::random, gate_op::ID, {}, 0});
    if (!anchor_) anchor_ = s;
    return s;
  }

  signal gate(gate_op op, std::vector<signal> args) {
    auto key = std::make_pair(op, args);
    auto it = hashed_.find(key);
    if (it != hashed_.end()) return it->second;
    signal s = push({next_id_, vertex_kind::gate, op, std::move(args), 0});
    hashed_.emplace(std::move(key), s);
    return s;
  }

  signal not_(signal a) { return gate(gate_op::NOT, {a}); }
  signal id(signal a) { return gate(gate_op::ID, {a}); }
  signal and_(signal a, signal b) { return a == b ? a : gate(gate_op::AND, {a, b}); }
  signal or_(signal a, signal b) { return a == b ? a : gate(gate_op::OR, {a, b}); }
  signal maj(std::vector<signal> args) { return gate(gate_op::MAJ, std::move(args)); }

  /// (a OR b) AND NOT (a AND b)
  signal xor_(signal a, signal b) { return and_(or_(a, b), not_(and_(a, b))); }

  /// (sel AND a) OR (NOT sel AND b)
  signal select(signal sel, signal a, signal b) { return or_(and_(sel, a), and_(not_(sel), b)); }

  /// Balanced tree of 2-input ANDs; depth ceil(log2 n).
  signal and_tree(std::span<const signal> xs) { return tree(gate_op::AND, xs); }
  signal or_tree(std::span<const signal> xs) { return tree(gate_op::OR, xs); }

  /// Single AND gate with unbounded fan-in (AC-style).
  signal and_wide(std::span<const signal> xs) {
    if (xs.empty()) return const1();
    if (xs.size() == 1) return xs[0];
    return gate(gate_op::AND, std::vector<signal>(xs.begin(), xs.end()));
  }

  /// eta OR NOT eta over the first input (or first random vertex).
  signal const1() {
    require_anchor();
    return or_(*anchor_, not_(*anchor_));
  }
  /// eta AND NOT eta
  signal const0() {
    require_anchor();
    return and_(*anchor_, not_(*anchor_));
  }

  /// Copy `c` into this builder with `ins` driving its inputs. Every random
  /// vertex of `c` becomes a fresh random vertex here. Returns the outputs.
  std::vector<signal> inline_circuit(const circuit& c, std::span<const signal> ins) {
    if (ins.size() != c.input_count) {
      throw invalid_argument("inline of '" + c.name + "' with " + std::to_string(ins.size()) + " inputs, expected " +
                             std::to_string(c.input_count));
    }
    circuit sorted = c;
    for (auto& v : sorted.vertices) {
      if (v.layer == 0) {
        sorted = normalize(c);
        break;
      }
    }
    sort_vertices(sorted);
    std::vector<std::pair<vertex_id, std::size_t>> input_ids;
    for (const auto& v : sorted.vertices) {
      if (v.kind == vertex_kind::input) input_ids.emplace_back(v.id, 0);
    }
    std::sort(input_ids.begin(), input_ids.end());
    std::map<vertex_id, signal> map;
    for (std::size_t k = 0; k < input_ids.size(); ++k) map[input_ids[k].first] = ins[k];
    for (const auto& v : sorted.vertices) {
      if (v.kind == vertex_kind::input) continue;
      if (v.kind == vertex_kind::random) {
        map[v.id] = random();
        continue;
      }
      std::vector<signal> args;
      for (vertex_id a : v.args) args.push_back(map.at(a));
      map[v.id] = (v.op == gate_op::ID) ? args[0] : gate(v.op, std::move(args));
    }
    std::vector<signal> outs;
    for (vertex_id o : sorted.outputs) outs.push_back(map.at(o));
    return outs;
  }

  std::size_t input_count() const noexcept { return inputs_; }

  /// Normalized circuit over the output cone.
  circuit build(std::span<const signal> outputs, bool even_depth = false,
                std::optional<unsigned> fanin_bound = std::nullopt) const {
    std::map<vertex_id, std::size_t> index;
    for (std::size_t i = 0; i < vertices_.size(); ++i) index[vertices_[i].id] = i;
    std::vector<char> keep(vertices_.size(), 0);
    std::vector<vertex_id> stack(outputs.begin(), outputs.end());
    while (!stack.empty()) {
      vertex_id v = stack.back();
      stack.pop_back();
      std::size_t i = index.at(v);
      if (keep[i]) continue;
      keep[i] = 1;
      for (vertex_id a : vertices_[i].args) stack.push_back(a);
    }
    circuit c;
    c.name = name_;
    c.input_count = inputs_;
    c.fanin_bound = fanin_bound;
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      if (keep[i] || vertices_[i].kind == vertex_kind::input) c.vertices.push_back(vertices_[i]);
    }
    c.outputs.assign(outputs.begin(), outputs.end());
    return normalize(c, even_depth);
  }

private:
  signal push(vertex v) {
    signal s = v.id;
    vertices_.push_back(std::move(v));
    ++next_id_;
    return s;
  }

  void require_anchor() const {
    if (!anchor_) throw invalid_argument("circuit '" + name_ + "' needs an input or random vertex to derive a constant");
  }

  signal tree(gate_op op, std::span<const signal> xs) {
    if (xs.empty()) return op == gate_op::AND ? const1() : const0();
    std::vector<signal> level(xs.begin(), xs.end());
    while (level.size() > 1) {
      std::vector<signal> next;
      next.reserve((level.size() + 1) / 2);
      for (std::size_t i = 0; i + 1 < level.size(); i += 2) {
        next.push_back(op == gate_op::AND ? and_(level[i], level[i + 1]) : or_(level[i], level[i + 1]));
      }
      if (level.size() % 2 == 1) next.push_back(level.back());
      level = std::move(next);
    }
    return level[0];
  }

  std::string name_;
  vertex_id next_id_ = 0;
  std::size_t inputs_ = 0;
  std::optional<signal> anchor_;
  std::vector<vertex> vertices_;
  std::map<std::pair<gate_op, std::vector<signal>>, signal> hashed_;
};

} // namespace dlmc
