#pragma once

// Circuit -> revision DLM over one block of w positions plus a d*-bit
// counter (positions w+1..w+d*). Every round rewrites the whole sequence:
// round k+1 reads counter value k and replaces layer k by layer k+1 in place.
// The last round moves the outputs to the final m positions.

#include "dlmc/compile_common.hpp"

namespace dlmc {

inline dlm_spec compile_revision(const circuit& c) {
  const layer_index li = index_layers(c);
  const unsigned d = li.depth;
  const std::size_t w = li.width;
  const unsigned ds = ceil_log2(d + 1);
  const std::size_t L = w + ds;
  const std::size_t m = c.output_count();
  if (m > w) throw invalid_argument("revision compilation needs m <= w");

  dlm_spec s;
  s.name = c.name + ".revision";
  s.length = L;
  s.rounds = d + 1;
  s.mode = dlm_mode::revision;
  s.prompt_length = c.input_count;
  s.output_length = m;

  {
    detail::state_frame f(s.name + ".F", L, 0);
    std::vector<detail::signal> out(L, f.b.const1());
    s.unmask_policy = f.policy(out);
  }

  const std::size_t tail = L - m; // 0-based first output position
  for (std::size_t p = 0; p < L; ++p) {
    detail::state_frame f(s.name + ".p" + std::to_string(p + 1), L, 0);
    auto cur = detail::read_counter(f, w, ds);
    const detail::signal final_value = p >= tail ? f.lo(p - tail) : f.lo(p);
    if (p >= w) {
      auto next = gadget::increment(f.b, cur);
      auto value = f.b.select(gadget::identify(f.b, cur, d), final_value, next[p - w]);
      s.predictors.push_back({f.token_predictor(value), {}});
      continue;
    }
    std::vector<std::pair<std::uint64_t, detail::signal>> arms;
    {
      arms.emplace_back(0, f.lo(p));
      detail::shared_random rnd(f.b);
      for (unsigned k = 1; k + 1 <= d; ++k) {
        if (p >= li.layer_width(k + 1)) continue;
        const vertex& v = *li.layers[k + 1][p];
        auto arg = [&](vertex_id id) { return f.lo(li.where.at(id).second); };
        arms.emplace_back(k, detail::emit_vertex(f.b, v, arg, std::ref(rnd)));
      }
    }
    arms.emplace_back(d, final_value);
    s.predictors.push_back({f.token_predictor(gadget::mux(f.b, cur, arms)), {}});
  }
  assign_private_slots(s);
  return s;
}

} // namespace dlmc
