#pragma once

// Circuit -> standard-mode DLM with one position per vertex and one round
// per layer. Round j fills layer j + 1 and the last round only finalizes;
// positions follow (layer, id) order.

#include "dlmc/compile_common.hpp"

namespace dlmc {

inline dlm_spec compile_cot(const circuit& c) {
  const layer_index li = index_layers(c);
  const unsigned d = li.depth;

  std::unordered_map<vertex_id, std::size_t> pos; // 0-based position per vertex
  std::vector<std::size_t> layer_start(d + 2, 0); // 0-based first position of layer k
  std::size_t next = 0;
  for (unsigned k = 1; k <= d; ++k) {
    layer_start[k] = next;
    for (const vertex* v : li.layers[k]) pos[v->id] = next++;
  }
  const std::size_t L = next;

  dlm_spec s;
  s.name = c.name + ".cot";
  s.length = L;
  s.rounds = d;
  s.mode = dlm_mode::standard;
  s.prompt_length = c.input_count;
  s.output_length = c.output_count();

  // F: layer j is selected when layer j-1 is decoded and layer j is masked.
  {
    detail::state_frame f(s.name + ".F", L, 0);
    std::vector<detail::signal> decoded; // NOT mask bit of each layer's first position
    for (unsigned k = 1; k <= d; ++k) {
      decoded.push_back(li.layers[k].empty() ? f.b.const1() : f.b.not_(f.hi(layer_start[k])));
    }
    auto prev = gadget::shift_r(f.b, decoded);
    std::vector<detail::signal> out(L);
    for (unsigned k = 1; k <= d; ++k) {
      auto sel = f.b.and_(prev[k - 1], f.b.not_(decoded[k - 1]));
      for (std::size_t p = layer_start[k]; p < layer_start[k] + li.layers[k].size(); ++p) out[p] = sel;
    }
    s.unmask_policy = f.policy(out);
  }

  for (unsigned k = 1; k <= d; ++k) {
    for (const vertex* v : li.layers[k]) {
      const std::size_t p = pos.at(v->id);
      detail::state_frame f(s.name + ".p" + std::to_string(p + 1), L, 0);
      detail::signal value;
      if (k == 1) {
        value = f.b.const0();
      } else {
        detail::shared_random rnd(f.b);
        value = detail::emit_vertex(f.b, *v, [&](vertex_id a) { return f.lo(pos.at(a)); }, std::ref(rnd));
      }
      s.predictors.push_back({f.identity_predictor(p, value), {}});
    }
  }
  assign_private_slots(s);
  return s;
}

} // namespace dlmc
