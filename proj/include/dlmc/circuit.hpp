#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dlmc/distribution.hpp"
#include "dlmc/error.hpp"

namespace dlmc {

using vertex_id = std::uint32_t;
using bits = std::vector<bool>;

enum class vertex_kind : std::uint8_t { input, random, gate };
enum class gate_op : std::uint8_t { AND, OR, NOT, ID, MAJ };

inline std::string_view to_string(gate_op op) {
  switch (op) {
  case gate_op::AND: return "AND";
  case gate_op::OR: return "OR";
  case gate_op::NOT: return "NOT";
  case gate_op::ID: return "ID";
  case gate_op::MAJ: return "MAJ";
  }
  return "?";
}

inline std::optional<gate_op> gate_op_from_string(std::string_view s) {
  if (s == "AND") return gate_op::AND;
  if (s == "OR") return gate_op::OR;
  if (s == "NOT") return gate_op::NOT;
  if (s == "ID") return gate_op::ID;
  if (s == "MAJ") return gate_op::MAJ;
  return std::nullopt;
}

struct vertex {
  vertex_id id = 0;
  vertex_kind kind = vertex_kind::gate;
  gate_op op = gate_op::ID; // meaningful for gates only
  std::vector<vertex_id> args;
  unsigned layer = 0;       // 0 = not yet assigned

  friend bool operator==(const vertex&, const vertex&) = default;
};

/// Layered Boolean circuit with input, random and gate vertices.
///
/// Input bit k feeds the k-th input vertex in id order; random bit k feeds
/// the k-th random vertex in id order. Outputs are read in list order.
struct circuit {
  std::string name;
  std::size_t input_count = 0;
  std::vector<vertex> vertices;
  std::vector<vertex_id> outputs;
  std::optional<unsigned> fanin_bound;

  std::size_t size() const noexcept { return vertices.size(); }

  unsigned depth() const noexcept {
    unsigned d = 0;
    for (const auto& v : vertices) d = std::max(d, v.layer);
    return d;
  }

  std::size_t width() const {
    std::map<unsigned, std::size_t> per_layer;
    for (const auto& v : vertices) ++per_layer[v.layer];
    std::size_t w = 0;
    for (const auto& [l, c] : per_layer) w = std::max(w, c);
    return w;
  }

  std::size_t random_count() const noexcept {
    return static_cast<std::size_t>(std::count_if(vertices.begin(), vertices.end(),
                                                  [](const vertex& v) { return v.kind == vertex_kind::random; }));
  }

  std::size_t output_count() const noexcept { return outputs.size(); }

  /// Index into `vertices` by id; nullopt when absent.
  std::optional<std::size_t> find(vertex_id id) const {
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      if (vertices[i].id == id) return i;
    }
    return std::nullopt;
  }

  friend bool operator==(const circuit&, const circuit&) = default;
};

/// Sort vertices by (layer, id), the canonical order for every consumer.
inline void sort_vertices(circuit& c) {
  std::stable_sort(c.vertices.begin(), c.vertices.end(),
                   [](const vertex& a, const vertex& b) { return std::tie(a.layer, a.id) < std::tie(b.layer, b.id); });
}

/// Per-layer vertex counts indexed 1..depth (index 0 unused).
inline std::vector<std::size_t> layer_widths(const circuit& c) {
  std::vector<std::size_t> w(c.depth() + 1, 0);
  for (const auto& v : c.vertices) ++w[v.layer];
  return w;
}

// ---------------------------------------------------------------------------
// validation

enum class violation_kind {
  duplicate_id,
  undefined_arg,
  arity,
  fanin,
  cycle,
  input_count,
  no_outputs,
  undefined_output,
  layer_order,  // arg is not in a strictly earlier layer
  layer_skip,   // arg is more than one layer back
  layer_missing,
  input_layer,
  random_layer,
  output_layer,
  final_layer,  // final layer is not exactly the output list
};

struct violation {
  violation_kind kind;
  std::string message;
};

struct validation_report {
  std::vector<violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  bool has(violation_kind k) const {
    return std::any_of(violations.begin(), violations.end(), [k](const violation& v) { return v.kind == k; });
  }
  std::string str() const {
    std::string s;
    for (const auto& v : violations) {
      if (!s.empty()) s += "; ";
      s += v.message;
    }
    return s;
  }
};

namespace detail {

inline bool arity_ok(const vertex& v) {
  if (v.kind != vertex_kind::gate) return v.args.empty();
  switch (v.op) {
  case gate_op::NOT:
  case gate_op::ID: return v.args.size() == 1;
  case gate_op::AND:
  case gate_op::OR: return v.args.size() >= 2;
  case gate_op::MAJ: return !v.args.empty();
  }
  return false;
}

inline std::string vname(const vertex& v) { return "vertex " + std::to_string(v.id); }

} // namespace detail

/// Structural checks plus the layer rule on every annotated edge.
///
/// Missing layer annotations are not violations here (normalize assigns
/// them); see `normalization_report` for the placement invariants.
inline validation_report validate(const circuit& c) {
  validation_report r;
  auto add = [&](violation_kind k, std::string m) { r.violations.push_back({k, std::move(m)}); };

  std::unordered_map<vertex_id, std::size_t> index;
  for (std::size_t i = 0; i < c.vertices.size(); ++i) {
    if (!index.emplace(c.vertices[i].id, i).second) {
      add(violation_kind::duplicate_id, "duplicate id " + std::to_string(c.vertices[i].id));
    }
  }

  std::size_t inputs = 0;
  for (const auto& v : c.vertices) {
    if (v.kind == vertex_kind::input) ++inputs;
    if (!detail::arity_ok(v)) {
      add(violation_kind::arity, "arity: " + detail::vname(v) +
                                     (v.kind == vertex_kind::gate ? " (" + std::string(to_string(v.op)) + ")" : "") +
                                     " has " + std::to_string(v.args.size()) + " args");
    }
    if (c.fanin_bound && v.kind == vertex_kind::gate && v.args.size() > *c.fanin_bound) {
      add(violation_kind::fanin, "fan-in: " + detail::vname(v) + " has " + std::to_string(v.args.size()) +
                                     " args, bound is " + std::to_string(*c.fanin_bound));
    }
    for (vertex_id a : v.args) {
      auto it = index.find(a);
      if (it == index.end()) {
        add(violation_kind::undefined_arg, detail::vname(v) + " references undefined id " + std::to_string(a));
        continue;
      }
      const vertex& u = c.vertices[it->second];
      if (v.layer != 0 && u.layer != 0) {
        if (u.layer >= v.layer) {
          add(violation_kind::layer_order, detail::vname(v) + " in layer " + std::to_string(v.layer) +
                                               " has arg " + std::to_string(a) + " in layer " + std::to_string(u.layer));
        } else if (u.layer + 1 != v.layer) {
          add(violation_kind::layer_skip, "edge skips a layer: " + detail::vname(v) + " in layer " +
                                              std::to_string(v.layer) + " has arg " + std::to_string(a) +
                                              " in layer " + std::to_string(u.layer));
        }
      }
    }
  }
  if (inputs != c.input_count) {
    add(violation_kind::input_count, "header declares " + std::to_string(c.input_count) + " inputs, found " +
                                         std::to_string(inputs) + " input vertices");
  }
  if (c.outputs.empty()) add(violation_kind::no_outputs, "no outputs");
  for (vertex_id o : c.outputs) {
    if (!index.count(o)) add(violation_kind::undefined_output, "output references undefined id " + std::to_string(o));
  }

  // Cycle check (Kahn) over resolvable edges.
  std::vector<std::size_t> indeg(c.vertices.size(), 0);
  std::vector<std::vector<std::size_t>> users(c.vertices.size());
  for (std::size_t i = 0; i < c.vertices.size(); ++i) {
    for (vertex_id a : c.vertices[i].args) {
      auto it = index.find(a);
      if (it == index.end()) continue;
      ++indeg[i];
      users[it->second].push_back(i);
    }
  }
  std::vector<std::size_t> queue;
  for (std::size_t i = 0; i < indeg.size(); ++i) {
    if (indeg[i] == 0) queue.push_back(i);
  }
  std::size_t seen = 0;
  while (!queue.empty()) {
    std::size_t i = queue.back();
    queue.pop_back();
    ++seen;
    for (std::size_t u : users[i]) {
      if (--indeg[u] == 0) queue.push_back(u);
    }
  }
  if (seen != c.vertices.size()) add(violation_kind::cycle, "cycle among vertices");
  return r;
}

/// validate() plus the placement invariants every compiler relies on:
/// inputs in layer 1, no random vertex in layer 1, all layers assigned with
/// no skipped layers, and a final layer consisting of exactly the outputs in
/// list order.
inline validation_report normalization_report(const circuit& c) {
  validation_report r = validate(c);
  auto add = [&](violation_kind k, std::string m) { r.violations.push_back({k, std::move(m)}); };
  const unsigned d = c.depth();
  for (const auto& v : c.vertices) {
    if (v.layer == 0) add(violation_kind::layer_missing, "layer missing on " + detail::vname(v));
    if (v.kind == vertex_kind::input && v.layer != 1) {
      add(violation_kind::input_layer, "input " + detail::vname(v) + " is not in layer 1");
    }
    if (v.kind == vertex_kind::random && v.layer == 1) {
      add(violation_kind::random_layer, "random " + detail::vname(v) + " is in layer 1");
    }
  }
  std::vector<vertex_id> final_layer;
  for (const auto& v : c.vertices) {
    if (v.layer == d) final_layer.push_back(v.id);
  }
  std::sort(final_layer.begin(), final_layer.end());
  for (vertex_id o : c.outputs) {
    auto idx = c.find(o);
    if (idx && c.vertices[*idx].layer != d) {
      add(violation_kind::output_layer, "output " + std::to_string(o) + " is not in the last layer");
    }
  }
  if (final_layer != c.outputs) {
    add(violation_kind::final_layer, "last layer is not exactly the ordered output list");
  }
  return r;
}

inline bool is_normalized(const circuit& c) { return normalization_report(c).ok(); }

/// Rewrite a structurally valid circuit into normalized form.
///
/// Layers are recomputed as max(annotation, 1 + max arg layer), inputs go to
/// layer 1 and random vertices to layer >= 2. Edges that skip layers and
/// outputs below the last layer are bridged with ID chains. When the last
/// layer is not exactly the ordered output list, one more layer of ID copies
/// is appended; `even_depth` appends one more when the depth is odd.
inline circuit normalize(const circuit& in, bool even_depth = false) {
  validation_report rep = validate(in);
  std::string fatal;
  for (const auto& v : rep.violations) {
    if (v.kind == violation_kind::layer_skip || v.kind == violation_kind::layer_order) continue;
    fatal += (fatal.empty() ? "" : "; ") + v.message;
  }
  if (!fatal.empty()) throw invalid_argument("cannot normalize circuit '" + in.name + "': " + fatal);

  circuit c = in;
  std::unordered_map<vertex_id, std::size_t> index;
  for (std::size_t i = 0; i < c.vertices.size(); ++i) index[c.vertices[i].id] = i;

  // Layer assignment in topological order.
  std::vector<unsigned> layer(c.vertices.size(), 0);
  std::vector<char> done(c.vertices.size(), 0);
  std::vector<std::size_t> stack;
  for (std::size_t root = 0; root < c.vertices.size(); ++root) {
    if (done[root]) continue;
    stack.push_back(root);
    while (!stack.empty()) {
      std::size_t i = stack.back();
      const vertex& v = c.vertices[i];
      bool ready = true;
      for (vertex_id a : v.args) {
        std::size_t j = index.at(a);
        if (!done[j]) {
          stack.push_back(j);
          ready = false;
        }
      }
      if (!ready) continue;
      stack.pop_back();
      if (done[i]) continue;
      unsigned l = v.layer;
      if (v.kind == vertex_kind::input) l = 1;
      else if (v.kind == vertex_kind::random) l = std::max(l, 2u);
      for (vertex_id a : v.args) l = std::max(l, layer[index.at(a)] + 1);
      layer[i] = std::max(l, 1u);
      done[i] = 1;
    }
  }
  for (std::size_t i = 0; i < c.vertices.size(); ++i) c.vertices[i].layer = layer[i];
  sort_vertices(c);
  index.clear();
  for (std::size_t i = 0; i < c.vertices.size(); ++i) index[c.vertices[i].id] = i;

  vertex_id next_id = 0;
  for (const auto& v : c.vertices) next_id = std::max(next_id, v.id + 1);
  unsigned d = c.depth();

  std::vector<vertex> extra;
  std::map<std::pair<vertex_id, unsigned>, vertex_id> chain;
  auto layer_of = [&](vertex_id id) -> unsigned {
    auto it = index.find(id);
    if (it != index.end()) return c.vertices[it->second].layer;
    for (const auto& e : extra) {
      if (e.id == id) return e.layer;
    }
    return 0;
  };
  // Vertex carrying `src`'s value at layer `target`.
  auto carry = [&](vertex_id src, unsigned target) {
    unsigned l = layer_of(src);
    vertex_id cur = src;
    for (unsigned t = l + 1; t <= target; ++t) {
      auto key = std::make_pair(src, t);
      auto it = chain.find(key);
      if (it == chain.end()) {
        vertex idv{next_id++, vertex_kind::gate, gate_op::ID, {cur}, t};
        extra.push_back(idv);
        it = chain.emplace(key, idv.id).first;
      }
      cur = it->second;
    }
    return cur;
  };

  for (auto& v : c.vertices) {
    for (auto& a : v.args) {
      unsigned la = c.vertices[index.at(a)].layer;
      if (la + 1 < v.layer) a = carry(a, v.layer - 1);
    }
  }
  for (auto& o : c.outputs) o = carry(o, d);
  for (auto& e : extra) c.vertices.push_back(std::move(e));
  extra.clear();

  auto append_output_layer = [&]() {
    ++d;
    for (auto& o : c.outputs) {
      vertex idv{next_id++, vertex_kind::gate, gate_op::ID, {o}, d};
      o = idv.id;
      c.vertices.push_back(std::move(idv));
    }
  };

  std::vector<vertex_id> final_layer;
  for (const auto& v : c.vertices) {
    if (v.layer == d) final_layer.push_back(v.id);
  }
  std::sort(final_layer.begin(), final_layer.end());
  if (final_layer != c.outputs) append_output_layer();
  if (even_depth && d % 2 == 1) append_output_layer();
  sort_vertices(c);
  return c;
}

// ---------------------------------------------------------------------------
// evaluation

/// Flattened, topologically ordered form of a circuit used for evaluation.
///
/// Requires a circuit that passes validate() with every layer assigned;
/// edges may skip layers.
class evaluator {
public:
  static constexpr std::uint8_t unknown = 2;

  evaluator() = default;

  explicit evaluator(const circuit& c) {
    auto rep = validate(c);
    if (!rep.ok() && !only_skips(rep)) throw invalid_argument("cannot evaluate circuit '" + c.name + "': " + rep.str());
    std::vector<std::size_t> order(c.vertices.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (c.vertices[i].layer == 0) throw invalid_argument("cannot evaluate circuit '" + c.name + "': unassigned layer");
      order[i] = i;
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return std::tie(c.vertices[a].layer, c.vertices[a].id) < std::tie(c.vertices[b].layer, c.vertices[b].id);
    });
    std::unordered_map<vertex_id, std::uint32_t> pos;
    for (std::uint32_t k = 0; k < order.size(); ++k) pos[c.vertices[order[k]].id] = k;

    std::vector<std::pair<vertex_id, std::uint32_t>> ins, rnds;
    nodes_.reserve(order.size());
    for (std::uint32_t k = 0; k < order.size(); ++k) {
      const vertex& v = c.vertices[order[k]];
      node n;
      n.kind = v.kind;
      n.op = v.op;
      n.id = v.id;
      n.first_arg = static_cast<std::uint32_t>(args_.size());
      for (vertex_id a : v.args) args_.push_back(pos.at(a));
      n.arg_count = static_cast<std::uint32_t>(v.args.size());
      nodes_.push_back(n);
      if (v.kind == vertex_kind::input) ins.emplace_back(v.id, k);
      if (v.kind == vertex_kind::random) rnds.emplace_back(v.id, k);
    }
    std::sort(ins.begin(), ins.end());
    std::sort(rnds.begin(), rnds.end());
    for (auto& [id, k] : ins) inputs_.push_back(k);
    for (auto& [id, k] : rnds) randoms_.push_back(k);
    for (vertex_id o : c.outputs) outputs_.push_back(pos.at(o));
  }

  std::size_t input_count() const noexcept { return inputs_.size(); }
  std::size_t random_count() const noexcept { return randoms_.size(); }
  std::size_t output_count() const noexcept { return outputs_.size(); }
  std::size_t node_count() const noexcept { return nodes_.size(); }

  /// Vertex id of the k-th random vertex (id order).
  vertex_id random_vertex_id(std::size_t k) const { return nodes_[randoms_[k]].id; }

  bits operator()(const bits& input, const bits& random) const {
    check_lengths(input.size(), random.size());
    std::vector<std::uint8_t> val(nodes_.size(), 0);
    for (std::size_t k = 0; k < inputs_.size(); ++k) val[inputs_[k]] = input[k];
    for (std::size_t k = 0; k < randoms_.size(); ++k) val[randoms_[k]] = random[k];
    run_scalar(val);
    bits out(outputs_.size());
    for (std::size_t k = 0; k < outputs_.size(); ++k) out[k] = val[outputs_[k]] != 0;
    return out;
  }

  /// 64 independent evaluations, one per bit lane.
  std::vector<std::uint64_t> eval_words(std::span<const std::uint64_t> input,
                                        std::span<const std::uint64_t> random) const {
    check_lengths(input.size(), random.size());
    std::vector<std::uint64_t> val(nodes_.size(), 0);
    for (std::size_t k = 0; k < inputs_.size(); ++k) val[inputs_[k]] = input[k];
    for (std::size_t k = 0; k < randoms_.size(); ++k) val[randoms_[k]] = random[k];
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const node& n = nodes_[i];
      if (n.kind != vertex_kind::gate) continue;
      const std::uint32_t* a = args_.data() + n.first_arg;
      std::uint64_t r = 0;
      switch (n.op) {
      case gate_op::ID: r = val[a[0]]; break;
      case gate_op::NOT: r = ~val[a[0]]; break;
      case gate_op::AND:
        r = ~std::uint64_t{0};
        for (std::uint32_t j = 0; j < n.arg_count; ++j) r &= val[a[j]];
        break;
      case gate_op::OR:
        for (std::uint32_t j = 0; j < n.arg_count; ++j) r |= val[a[j]];
        break;
      case gate_op::MAJ:
        for (unsigned lane = 0; lane < 64; ++lane) {
          std::uint32_t ones = 0;
          for (std::uint32_t j = 0; j < n.arg_count; ++j) ones += (val[a[j]] >> lane) & 1u;
          if (2 * ones > n.arg_count) r |= std::uint64_t{1} << lane;
        }
        break;
      }
      val[i] = r;
    }
    std::vector<std::uint64_t> out(outputs_.size());
    for (std::size_t k = 0; k < outputs_.size(); ++k) out[k] = val[outputs_[k]];
    return out;
  }

  /// Three-valued evaluation (0, 1, unknown) over every vertex, in node order.
  /// `input` and `random` entries may be `unknown`.
  std::vector<std::uint8_t> eval_ternary(std::span<const std::uint8_t> input, std::span<const std::uint8_t> random) const {
    check_lengths(input.size(), random.size());
    std::vector<std::uint8_t> val(nodes_.size(), 0);
    for (std::size_t k = 0; k < inputs_.size(); ++k) val[inputs_[k]] = input[k];
    for (std::size_t k = 0; k < randoms_.size(); ++k) val[randoms_[k]] = random[k];
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const node& n = nodes_[i];
      if (n.kind != vertex_kind::gate) continue;
      const std::uint32_t* a = args_.data() + n.first_arg;
      std::uint8_t r = 0;
      switch (n.op) {
      case gate_op::ID: r = val[a[0]]; break;
      case gate_op::NOT: r = val[a[0]] == unknown ? unknown : std::uint8_t(1 - val[a[0]]); break;
      case gate_op::AND: {
        r = 1;
        for (std::uint32_t j = 0; j < n.arg_count; ++j) {
          if (val[a[j]] == 0) {
            r = 0;
            break;
          }
          if (val[a[j]] == unknown) r = unknown;
        }
        break;
      }
      case gate_op::OR: {
        r = 0;
        for (std::uint32_t j = 0; j < n.arg_count; ++j) {
          if (val[a[j]] == 1) {
            r = 1;
            break;
          }
          if (val[a[j]] == unknown) r = unknown;
        }
        break;
      }
      case gate_op::MAJ: {
        std::uint32_t ones = 0, unk = 0;
        for (std::uint32_t j = 0; j < n.arg_count; ++j) {
          ones += val[a[j]] == 1;
          unk += val[a[j]] == unknown;
        }
        if (2 * ones > n.arg_count) r = 1;
        else if (2 * (ones + unk) <= n.arg_count) r = 0;
        else r = unknown;
        break;
      }
      }
      val[i] = r;
    }
    return val;
  }

  std::uint8_t output_value(const std::vector<std::uint8_t>& all, std::size_t k) const { return all[outputs_[k]]; }

  /// Among random vertices that are `unknown` and reach an unknown output
  /// through unknown-valued vertices, the one with the smallest vertex id.
  /// Returns its random index (id order), or nullopt when every output is known.
  std::optional<std::size_t> next_relevant_random(const std::vector<std::uint8_t>& all) const {
    std::vector<char> live(nodes_.size(), 0);
    bool any = false;
    for (std::uint32_t o : outputs_) {
      if (all[o] == unknown) {
        live[o] = 1;
        any = true;
      }
    }
    if (!any) return std::nullopt;
    for (std::size_t i = nodes_.size(); i-- > 0;) {
      if (!live[i]) continue;
      const node& n = nodes_[i];
      for (std::uint32_t j = 0; j < n.arg_count; ++j) {
        std::uint32_t a = args_[n.first_arg + j];
        if (all[a] == unknown) live[a] = 1;
      }
    }
    for (std::size_t k = 0; k < randoms_.size(); ++k) {
      if (live[randoms_[k]]) return k;
    }
    return std::nullopt;
  }

  /// Input and random vertices in each output's transitive fan-in.
  struct cone {
    std::size_t inputs = 0;
    std::size_t randoms = 0;
  };
  std::vector<cone> output_cones() const {
    std::vector<cone> res;
    for (std::uint32_t o : outputs_) {
      std::vector<char> mark(nodes_.size(), 0);
      mark[o] = 1;
      cone c;
      for (std::size_t i = o + 1; i-- > 0;) {
        if (!mark[i]) continue;
        const node& n = nodes_[i];
        if (n.kind == vertex_kind::input) ++c.inputs;
        if (n.kind == vertex_kind::random) ++c.randoms;
        for (std::uint32_t j = 0; j < n.arg_count; ++j) mark[args_[n.first_arg + j]] = 1;
      }
      res.push_back(c);
    }
    return res;
  }

private:
  struct node {
    vertex_kind kind;
    gate_op op;
    vertex_id id;
    std::uint32_t first_arg;
    std::uint32_t arg_count;
  };

  static bool only_skips(const validation_report& r) {
    return std::all_of(r.violations.begin(), r.violations.end(),
                       [](const violation& v) { return v.kind == violation_kind::layer_skip; });
  }

  void check_lengths(std::size_t in, std::size_t rnd) const {
    if (in != inputs_.size()) {
      throw invalid_argument("input length " + std::to_string(in) + " does not match " + std::to_string(inputs_.size()));
    }
    if (rnd != randoms_.size()) {
      throw invalid_argument("random length " + std::to_string(rnd) + " does not match " +
                             std::to_string(randoms_.size()));
    }
  }

  void run_scalar(std::vector<std::uint8_t>& val) const {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const node& n = nodes_[i];
      if (n.kind != vertex_kind::gate) continue;
      const std::uint32_t* a = args_.data() + n.first_arg;
      std::uint8_t r = 0;
      switch (n.op) {
      case gate_op::ID: r = val[a[0]]; break;
      case gate_op::NOT: r = !val[a[0]]; break;
      case gate_op::AND:
        r = 1;
        for (std::uint32_t j = 0; j < n.arg_count; ++j) r &= val[a[j]];
        break;
      case gate_op::OR:
        for (std::uint32_t j = 0; j < n.arg_count; ++j) r |= val[a[j]];
        break;
      case gate_op::MAJ: {
        std::uint32_t ones = 0;
        for (std::uint32_t j = 0; j < n.arg_count; ++j) ones += val[a[j]];
        r = 2 * ones > n.arg_count; // ties -> 0
        break;
      }
      }
      val[i] = r;
    }
  }

  std::vector<node> nodes_;
  std::vector<std::uint32_t> args_;
  std::vector<std::uint32_t> inputs_;
  std::vector<std::uint32_t> randoms_;
  std::vector<std::uint32_t> outputs_;
};

inline bits evaluate(const circuit& c, const bits& input, const bits& random) { return evaluator(c)(input, random); }

inline std::string bits_str(const bits& b) {
  std::string s;
  s.reserve(b.size());
  for (bool x : b) s += x ? '1' : '0';
  return s;
}

/// Parses "0101" (also accepts a/b as 0/1).
inline bits parse_bits(std::string_view s) {
  bits b;
  b.reserve(s.size());
  for (char ch : s) {
    if (ch == '0' || ch == 'a') b.push_back(false);
    else if (ch == '1' || ch == 'b') b.push_back(true);
    else throw invalid_argument("bad bit '" + std::string(1, ch) + "' in \"" + std::string(s) + "\"");
  }
  return b;
}

inline constexpr unsigned default_enumeration_budget = 24;

/// Exact output law of C(input, R) for R uniform, by enumerating all 2^r
/// random assignments 64 at a time. Probabilities have denominator 2^r.
inline distribution output_distribution(const circuit& c, const bits& input,
                                        unsigned budget = default_enumeration_budget) {
  evaluator ev(c);
  const std::size_t r = ev.random_count();
  if (r > budget) {
    throw budget_exceeded("circuit '" + c.name + "' has r=" + std::to_string(r) +
                          " random bits, enumeration budget is " + std::to_string(budget));
  }
  if (input.size() != ev.input_count()) {
    throw invalid_argument("input length " + std::to_string(input.size()) + " does not match " +
                           std::to_string(ev.input_count()));
  }
  std::vector<std::uint64_t> in(input.size());
  for (std::size_t k = 0; k < input.size(); ++k) in[k] = input[k] ? ~std::uint64_t{0} : 0;

  const std::uint64_t total = std::uint64_t{1} << r;
  std::map<std::string, std::int64_t> counts;
  std::vector<std::uint64_t> rnd(r);
  for (std::uint64_t base = 0; base < total; base += 64) {
    const unsigned lanes = static_cast<unsigned>(std::min<std::uint64_t>(64, total - base));
    for (std::size_t k = 0; k < r; ++k) {
      std::uint64_t w = 0;
      for (unsigned lane = 0; lane < lanes; ++lane) w |= (((base + lane) >> k) & 1u) << lane;
      rnd[k] = w;
    }
    auto out = ev.eval_words(in, rnd);
    std::string key(out.size(), '0');
    for (unsigned lane = 0; lane < lanes; ++lane) {
      for (std::size_t k = 0; k < out.size(); ++k) key[k] = ((out[k] >> lane) & 1u) ? '1' : '0';
      ++counts[key];
    }
  }
  distribution d;
  for (auto& [k, n] : counts) d.add(k, rational::dyadic(n, static_cast<unsigned>(r)));
  return d;
}

} // namespace dlmc
