#pragma once

// Circuit -> remasking DLM over two alternating blocks.
//
// Layout (1-based): data block A = 1..w, counter A = w+1..w+d*,
// counter B = w+d*+1..w+2d*, data block B = w+2d*+1..L, d* = ceil(log2(d+1)).
// Odd layers live at the head of block A, even layers at the tail of block B.
// The live counter is A when A is unmasked, otherwise B (a masked B reads 0).

#include "dlmc/compile_common.hpp"

namespace dlmc {

struct remask_layout {
  std::size_t w = 0;
  unsigned d = 0;
  unsigned dstar = 0;
  std::size_t length() const { return 2 * w + 2 * dstar; }
  // 0-based position helpers
  std::size_t a_data(std::size_t j) const { return j; }
  std::size_t a_counter(unsigned k) const { return w + k; }
  std::size_t b_counter(unsigned k) const { return w + dstar + k; }
  std::size_t b_data(std::size_t t) const { return w + 2 * dstar + t; }
};

inline remask_layout remask_layout_for(const circuit& c) {
  remask_layout lay;
  lay.w = c.width();
  lay.d = c.depth();
  lay.dstar = ceil_log2(lay.d + 1);
  return lay;
}

inline dlm_spec compile_remask(const circuit& c) {
  const layer_index li = index_layers(c);
  const unsigned d = li.depth;
  if (d % 2 != 0) throw invalid_argument("remask compilation needs even depth, circuit '" + c.name + "' has depth " +
                                         std::to_string(d) + " (normalize with even_depth)");
  const remask_layout lay = remask_layout_for(c);
  const std::size_t w = lay.w, L = lay.length();
  const unsigned ds = lay.dstar;

  dlm_spec s;
  s.name = c.name + ".remask";
  s.length = L;
  s.rounds = d + 1;
  s.mode = dlm_mode::remask;
  s.prompt_length = c.input_count;
  s.output_length = c.output_count();

  // 0-based position of vertex slot `t` of layer k.
  auto place = [&](unsigned k, std::size_t t) {
    return k % 2 == 1 ? lay.a_data(t) : lay.b_data(w - li.layer_width(k) + t);
  };

  auto counters = [&](detail::state_frame& f) {
    auto a = detail::read_counter(f, lay.a_counter(0), ds);
    auto bb = detail::read_counter(f, lay.b_counter(0), ds);
    detail::signal a_live = f.b.not_(f.hi(lay.a_counter(0)));
    std::vector<detail::signal> cur;
    for (unsigned k = 0; k < ds; ++k) cur.push_back(f.b.select(a_live, a[k], bb[k]));
    return std::tuple{a, bb, cur};
  };

  // F: S_0 = counter A; S_k (1 <= k <= d-1) = counter and data of the block
  // receiving layer k+1.
  {
    detail::state_frame f(s.name + ".F", L, 0);
    auto [a, bb, cur] = counters(f);
    std::vector<std::vector<std::uint64_t>> keys(L);
    for (unsigned k = 0; k < ds; ++k) keys[lay.a_counter(k)].push_back(0);
    for (unsigned k = 1; k + 1 <= d; ++k) {
      for (unsigned q = 0; q < ds; ++q) keys[k % 2 == 1 ? lay.b_counter(q) : lay.a_counter(q)].push_back(k);
      for (std::size_t t = 0; t < li.layer_width(k + 1); ++t) keys[place(k + 1, t)].push_back(k);
    }
    std::vector<detail::signal> out;
    for (std::size_t p = 0; p < L; ++p) out.push_back(gadget::match_any(f.b, cur, keys[p]));
    s.unmask_policy = f.policy(out);
  }

  // G: after layer k+1 is written, erase the block holding layer k.
  {
    detail::state_frame f(s.name + ".G", L, 0);
    auto [a, bb, cur] = counters(f);
    std::vector<detail::signal> erase_a, erase_b;
    for (unsigned k = 1; k + 1 <= d; ++k) {
      if (k % 2 == 1) erase_a.push_back(f.b.and_(gadget::identify(f.b, a, k), gadget::identify(f.b, bb, k + 1)));
      else erase_b.push_back(f.b.and_(gadget::identify(f.b, bb, k), gadget::identify(f.b, a, k + 1)));
    }
    detail::signal ea = erase_a.empty() ? f.b.const0() : f.b.or_tree(erase_a);
    detail::signal eb = erase_b.empty() ? f.b.const0() : f.b.or_tree(erase_b);
    std::vector<detail::signal> out(L);
    for (std::size_t p = 0; p < L; ++p) out[p] = p < w + ds ? ea : eb;
    s.remask_policy = f.policy(out);
  }

  for (std::size_t p = 0; p < L; ++p) {
    detail::state_frame f(s.name + ".p" + std::to_string(p + 1), L, 0);
    auto [a, bb, cur] = counters(f);
    detail::signal value;
    const bool in_a_counter = p >= lay.a_counter(0) && p < lay.a_counter(0) + ds;
    const bool in_b_counter = p >= lay.b_counter(0) && p < lay.b_counter(0) + ds;
    if (in_a_counter || in_b_counter) {
      auto next = gadget::increment(f.b, cur);
      value = next[p - (in_a_counter ? lay.a_counter(0) : lay.b_counter(0))];
    } else {
      detail::shared_random rnd(f.b);
      std::vector<std::pair<std::uint64_t, detail::signal>> arms;
      for (unsigned k = 1; k + 1 <= d; ++k) {
        const unsigned target = k + 1;
        const std::size_t wt = li.layer_width(target);
        for (std::size_t t = 0; t < wt; ++t) {
          if (place(target, t) != p) continue;
          const vertex& v = *li.layers[target][t];
          auto arg = [&](vertex_id id) {
            auto [lk, slot] = li.where.at(id);
            return f.lo(place(lk, slot));
          };
          arms.emplace_back(k, detail::emit_vertex(f.b, v, arg, std::ref(rnd)));
        }
      }
      value = gadget::mux(f.b, cur, arms);
    }
    s.predictors.push_back({f.identity_predictor(p, value), {}});
  }
  assign_private_slots(s);
  return s;
}

} // namespace dlmc
