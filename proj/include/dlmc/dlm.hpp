#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dlmc/circuit.hpp"
#include "dlmc/distribution.hpp"
#include "dlmc/error.hpp"
#include "dlmc/gadgets.hpp"

namespace dlmc {

// ---------------------------------------------------------------------------
// tokens

/// Token sequences are strings over {'a', 'b', 'M'}.
using token_seq = std::string;

inline constexpr char mask_token = 'M';

/// a -> 00, b -> 01, M -> 10, pair (2i, 2i+1) encodes position i.
inline bits encode(const token_seq& x) {
  bits e(2 * x.size(), false);
  for (std::size_t i = 0; i < x.size(); ++i) {
    switch (x[i]) {
    case 'a': break;
    case 'b': e[2 * i + 1] = true; break;
    case 'M': e[2 * i] = true; break;
    default: throw invalid_argument(std::string("bad token '") + x[i] + "'");
    }
  }
  return e;
}

/// Inverse of encode; the pair 11 is rejected.
inline token_seq decode(const bits& e) {
  if (e.size() % 2 != 0) throw invalid_argument("encoding has odd length");
  token_seq x(e.size() / 2, 'a');
  for (std::size_t i = 0; i < x.size(); ++i) {
    const bool hi = e[2 * i], lo = e[2 * i + 1];
    if (hi && lo) throw invalid_argument("encoding pair 11 at position " + std::to_string(i + 1));
    x[i] = hi ? mask_token : (lo ? 'b' : 'a');
  }
  return x;
}

/// Prompt strings accept a/b or 0/1.
inline token_seq parse_tokens(std::string_view s) {
  token_seq t;
  for (char c : s) {
    if (c == 'a' || c == '0') t += 'a';
    else if (c == 'b' || c == '1') t += 'b';
    else if (c == 'M') t += 'M';
    else throw invalid_argument("bad token '" + std::string(1, c) + "' in \"" + std::string(s) + "\"");
  }
  return t;
}

// ---------------------------------------------------------------------------
// spec

enum class dlm_mode { standard, remask, revision };

inline std::string_view to_string(dlm_mode m) {
  switch (m) {
  case dlm_mode::standard: return "standard";
  case dlm_mode::remask: return "remask";
  case dlm_mode::revision: return "revision";
  }
  return "?";
}

inline dlm_mode mode_from_string(std::string_view s) {
  if (s == "standard") return dlm_mode::standard;
  if (s == "remask") return dlm_mode::remask;
  if (s == "revision") return dlm_mode::revision;
  throw invalid_argument("unknown mode '" + std::string(s) + "'");
}

/// Per-position predictor: 2L (+ counter) encoded inputs, private random
/// vertices, two output bits. `random_slots[k]` names the per-round random
/// bit feeding the k-th random vertex (id order); predictors sharing a slot
/// are correlated, which breaks the product form.
struct position_predictor {
  circuit circ;
  std::vector<std::uint32_t> random_slots;
};

struct dlm_spec {
  std::string name;
  std::size_t length = 0;        // L
  std::size_t rounds = 0;        // D
  dlm_mode mode = dlm_mode::standard;
  bool step_indexed = false;
  std::size_t prompt_length = 0; // n
  std::size_t output_length = 0; // m
  std::vector<position_predictor> predictors;
  circuit unmask_policy;                // F
  std::optional<circuit> remask_policy; // G
};

/// Width of the round counter appended to every policy/predictor input when
/// the DLM is step-indexed. Round j (1-based) is presented as bin(j - 1).
inline unsigned counter_bits(const dlm_spec& s) {
  return s.step_indexed ? ceil_log2(s.rounds) : 0u;
}

/// Assigns slots 0, 1, 2, ... to predictor random vertices in position order.
inline void assign_private_slots(dlm_spec& s) {
  std::uint32_t next = 0;
  for (auto& p : s.predictors) {
    p.random_slots.clear();
    for (std::size_t k = 0; k < p.circ.random_count(); ++k) p.random_slots.push_back(next++);
  }
}

struct spec_report {
  std::vector<std::string> violations;

  bool ok() const noexcept { return violations.empty(); }
  bool mentions(std::string_view needle) const {
    return std::any_of(violations.begin(), violations.end(),
                       [&](const std::string& v) { return v.find(needle) != std::string::npos; });
  }
  std::string str() const {
    std::string s;
    for (const auto& v : violations) s += (s.empty() ? "" : "; ") + v;
    return s;
  }
};

inline constexpr unsigned default_exhaustive_limit = 16;

/// Structural checks, product-form disjointness and, for standard/remask
/// specs small enough (2L + counter bits <= exhaustive_limit), an exhaustive
/// check that every predictor copies unmasked input pairs.
inline spec_report validate_spec(const dlm_spec& s, unsigned exhaustive_limit = default_exhaustive_limit) {
  spec_report r;
  auto add = [&](std::string m) { r.violations.push_back(std::move(m)); };
  const std::size_t L = s.length;
  const unsigned cb = counter_bits(s);
  const std::size_t width = 2 * L + cb;

  if (L == 0) add("length L must be positive");
  if (s.rounds == 0) add("round count D must be positive");
  // revision specs overwrite the prompt in place, so only each part must fit
  if (s.mode == dlm_mode::revision) {
    if (s.prompt_length > L || s.output_length > L) add("n or m exceeds L");
  } else if (s.prompt_length + s.output_length > L) {
    add("n + m exceeds L");
  }
  if (s.predictors.size() != L) {
    add("expected " + std::to_string(L) + " predictors, found " + std::to_string(s.predictors.size()));
  }
  if (s.remask_policy.has_value() != (s.mode == dlm_mode::remask)) add("remask policy G present iff mode is remask");

  auto check_shape = [&](const circuit& c, const std::string& what, std::size_t outs) {
    auto rep = validate(c);
    if (!rep.ok()) add(what + " is malformed: " + rep.str());
    if (c.input_count != width) {
      add(what + " has " + std::to_string(c.input_count) + " inputs, expected " + std::to_string(width));
    }
    if (c.output_count() != outs) {
      add(what + " has " + std::to_string(c.output_count()) + " outputs, expected " + std::to_string(outs));
    }
    return rep.ok() && c.input_count == width && c.output_count() == outs;
  };

  check_shape(s.unmask_policy, "F", L);
  if (s.unmask_policy.random_count() != 0) add("F must be deterministic (has random vertices)");
  if (s.remask_policy) check_shape(*s.remask_policy, "G", L);

  std::map<std::uint32_t, std::size_t> slot_owner;
  std::vector<char> shape_ok(s.predictors.size(), 0);
  for (std::size_t i = 0; i < s.predictors.size(); ++i) {
    const auto& p = s.predictors[i];
    const std::string what = "predictor " + std::to_string(i + 1);
    shape_ok[i] = check_shape(p.circ, what, 2);
    if (p.random_slots.size() != p.circ.random_count()) {
      add(what + " lists " + std::to_string(p.random_slots.size()) + " random slots for " +
          std::to_string(p.circ.random_count()) + " random vertices");
      shape_ok[i] = 0;
    }
    for (auto slot : p.random_slots) {
      auto [it, fresh] = slot_owner.emplace(slot, i);
      if (!fresh && it->second != i) {
        add("product form: predictors " + std::to_string(it->second + 1) + " and " + std::to_string(i + 1) +
            " share random slot " + std::to_string(slot));
      } else if (!fresh) {
        add("product form: " + what + " uses random slot " + std::to_string(slot) + " twice");
      }
    }
  }

  if (s.mode == dlm_mode::revision || width > exhaustive_limit || width > 30) return r;

  // Identity on unmasked positions, 64 encodings per pass.
  const std::uint64_t total = std::uint64_t{1} << width;
  for (std::size_t i = 0; i < s.predictors.size(); ++i) {
    if (!shape_ok[i]) continue;
    evaluator ev(s.predictors[i].circ);
    const std::size_t rc = ev.random_count();
    if (rc > 16) {
      add("predictor " + std::to_string(i + 1) + " has too many random vertices for the exhaustive check");
      continue;
    }
    bool bad = false;
    std::vector<std::uint64_t> in(width), rnd(rc);
    for (std::uint64_t base = 0; base < total && !bad; base += 64) {
      const unsigned lanes = static_cast<unsigned>(std::min<std::uint64_t>(64, total - base));
      for (std::size_t k = 0; k < width; ++k) {
        std::uint64_t w = 0;
        for (unsigned lane = 0; lane < lanes; ++lane) w |= (((base + lane) >> k) & 1u) << lane;
        in[k] = w;
      }
      const std::uint64_t lane_mask = lanes == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << lanes) - 1);
      // Lanes where position i is not masked (pair != 10).
      const std::uint64_t unmasked = ~(in[2 * i] & ~in[2 * i + 1]) & lane_mask;
      for (std::uint64_t ra = 0; ra < (std::uint64_t{1} << rc) && !bad; ++ra) {
        for (std::size_t k = 0; k < rc; ++k) rnd[k] = ((ra >> k) & 1u) ? ~std::uint64_t{0} : 0;
        auto out = ev.eval_words(in, rnd);
        const std::uint64_t diff = ((out[0] ^ in[2 * i]) | (out[1] ^ in[2 * i + 1])) & unmasked;
        if (diff != 0) {
          unsigned lane = 0;
          while (!((diff >> lane) & 1u)) ++lane;
          const std::uint64_t enc = base + lane;
          token_seq witness;
          for (std::size_t p = 0; p < L; ++p) {
            const bool hi = (enc >> (2 * p)) & 1u, lo = (enc >> (2 * p + 1)) & 1u;
            witness += hi ? (lo ? '?' : 'M') : (lo ? 'b' : 'a');
          }
          add("predictor " + std::to_string(i + 1) + " changes unmasked token (state " + witness + ")");
          bad = true;
        }
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// execution

struct round_record {
  std::size_t round = 0;
  token_seq state_before;
  std::vector<std::size_t> unmask_set;  // S, 1-based
  token_seq sampled;                    // tokens written at S, in S order
  std::vector<std::size_t> remask_set;  // T, 1-based
  token_seq state_after;
  bits random_bits;                     // in consumption order
};

using trace = std::vector<round_record>;

/// Immutable, evaluation-ready form of a dlm_spec.
class compiled_spec {
public:
  explicit compiled_spec(const dlm_spec& s) : spec_(&s), cbits_(counter_bits(s)) {
    // shared random slots are reported by validate_spec but still executable
    auto rep = validate_spec(s, 0);
    std::erase_if(rep.violations, [](const std::string& v) { return v.starts_with("product form"); });
    if (!rep.ok()) throw invalid_argument("invalid DLM spec '" + s.name + "': " + rep.str());
    unmask_ = evaluator(s.unmask_policy);
    if (s.remask_policy) remask_ = evaluator(*s.remask_policy);
    predictors_.reserve(s.predictors.size());
    for (const auto& p : s.predictors) {
      predictors_.emplace_back(p.circ);
      for (auto slot : p.random_slots) slot_count_ = std::max<std::size_t>(slot_count_, slot + 1);
    }
  }

  const dlm_spec& spec() const noexcept { return *spec_; }
  unsigned counter_width() const noexcept { return cbits_; }
  std::size_t slot_count() const noexcept { return slot_count_; }
  const evaluator& unmask() const noexcept { return unmask_; }
  const std::optional<evaluator>& remask() const noexcept { return remask_; }
  const evaluator& predictor(std::size_t i) const { return predictors_[i]; }

private:
  const dlm_spec* spec_;
  unsigned cbits_;
  std::size_t slot_count_ = 0;
  evaluator unmask_;
  std::optional<evaluator> remask_;
  std::vector<evaluator> predictors_;
};

/// Resumable Algorithm-1 run.
///
/// Random bits are requested one at a time from a source returning
/// std::optional<bool>. When the source has nothing left, `advance` returns
/// `starved` and leaves the execution at the request point, so a copy can be
/// resumed with either bit. This is what the exact enumerator branches on.
class execution {
public:
  enum class status { starved, finished };

  execution(const compiled_spec& cs, const token_seq& prompt, bool record_trace = true)
      : cs_(&cs), record_(record_trace) {
    const auto& s = cs.spec();
    if (prompt.size() != s.prompt_length) {
      throw invalid_argument("prompt length " + std::to_string(prompt.size()) + " does not match n = " +
                             std::to_string(s.prompt_length));
    }
    for (char c : prompt) {
      if (c != 'a' && c != 'b') throw invalid_argument("prompt must be over {a, b}");
    }
    x_ = prompt + token_seq(s.length - prompt.size(), mask_token);
  }

  /// Start at an arbitrary state and round; with `sampling_only` the
  /// execution stops right after that round's predictor sampling.
  execution(const compiled_spec& cs, token_seq state, std::size_t round, bool sampling_only)
      : cs_(&cs), record_(false), x_(std::move(state)), round_(round), sampling_only_(sampling_only) {
    if (x_.size() != cs.spec().length) throw invalid_argument("state length does not match L");
  }

  template <class Source>
  status advance(Source&& src) {
    const auto& s = cs_->spec();
    while (true) {
      switch (phase_) {
      case phase::select: begin_round(); break;
      case phase::sample:
        if (!sample(src)) return status::starved;
        break;
      case phase::remask:
        if (!remask(src)) return status::starved;
        break;
      case phase::done: return status::finished;
      }
      if (phase_ == phase::select && round_ > s.rounds) {
        for (std::size_t i = 0; i < x_.size(); ++i) {
          if (x_[i] == mask_token) {
            throw run_error("position " + std::to_string(i + 1) + " is still masked after round " +
                            std::to_string(s.rounds));
          }
        }
        phase_ = phase::done;
      }
    }
  }

  const token_seq& state() const noexcept { return x_; }
  token_seq output() const {
    const auto& s = cs_->spec();
    return x_.substr(s.length - s.output_length);
  }
  /// Tokens written during the sampling phase of a `sampling_only` run, in S order.
  token_seq sampled() const {
    token_seq t;
    for (auto i : S_) t += pending_[i];
    return t;
  }
  const std::vector<std::size_t>& unmask_set() const noexcept { return S_; }
  std::size_t bits_consumed() const noexcept { return consumed_; }
  std::size_t rounds_completed() const noexcept { return round_ - 1; }
  const trace& records() const noexcept { return trace_; }

private:
  enum class phase { select, sample, remask, done };

  std::vector<std::uint8_t> policy_input(const token_seq& x) const {
    bits e = encode(x);
    std::vector<std::uint8_t> in(e.begin(), e.end());
    if (cs_->counter_width() > 0) {
      bits c = bin(round_ - 1, cs_->counter_width());
      in.insert(in.end(), c.begin(), c.end());
    }
    return in;
  }

  void begin_round() {
    const auto& s = cs_->spec();
    before_ = x_;
    input_ = policy_input(x_);
    bits in(input_.begin(), input_.end());
    bits f = cs_->unmask()(in, {});
    S_.clear();
    for (std::size_t i = 0; i < s.length; ++i) {
      const bool masked = x_[i] == mask_token;
      if (!f[i] && !(round_ == s.rounds && masked)) continue;
      if (f[i] && !masked && s.mode != dlm_mode::revision) {
        throw run_error("round " + std::to_string(round_) + ": F selects unmasked position " + std::to_string(i + 1));
      }
      S_.push_back(i);
    }
    slots_.assign(cs_->slot_count(), evaluator::unknown);
    round_bits_.clear();
    pending_ = x_;
    cursor_ = 0;
    phase_ = phase::sample;
  }

  template <class Source>
  bool sample(Source& src) {
    const auto& s = cs_->spec();
    while (cursor_ < S_.size()) {
      const std::size_t i = S_[cursor_];
      const evaluator& ev = cs_->predictor(i);
      const auto& slot_ids = s.predictors[i].random_slots;
      std::vector<std::uint8_t> rnd(slot_ids.size());
      for (std::size_t k = 0; k < rnd.size(); ++k) rnd[k] = slots_[slot_ids[k]];
      auto all = ev.eval_ternary(input_, rnd);
      auto need = ev.next_relevant_random(all);
      if (need) {
        auto b = src();
        if (!b) return false;
        slots_[slot_ids[*need]] = *b ? 1 : 0;
        take_bit(*b);
        continue;
      }
      const std::uint8_t hi = ev.output_value(all, 0), lo = ev.output_value(all, 1);
      if (hi) {
        throw run_error("round " + std::to_string(round_) + ": predictor " + std::to_string(i + 1) + " emitted " +
                        (lo ? "invalid pair 11" : "M") + " at an unmask step");
      }
      pending_[i] = lo ? 'b' : 'a';
      ++cursor_;
    }
    if (sampling_only_) {
      phase_ = phase::done;
      return true;
    }
    x_ = pending_;
    if (s.mode == dlm_mode::remask && round_ < s.rounds) {
      const auto& g = *cs_->remask();
      g_random_.assign(g.random_count(), evaluator::unknown);
      g_input_ = policy_input(x_);
      phase_ = phase::remask;
    } else {
      T_.clear();
      finish_round();
    }
    return true;
  }

  template <class Source>
  bool remask(Source& src) {
    const evaluator& g = *cs_->remask();
    while (true) {
      auto all = g.eval_ternary(g_input_, g_random_);
      auto need = g.next_relevant_random(all);
      if (!need) {
        T_.clear();
        for (std::size_t i = 0; i < cs_->spec().length; ++i) {
          if (g.output_value(all, i)) {
            T_.push_back(i);
            x_[i] = mask_token;
          }
        }
        finish_round();
        return true;
      }
      auto b = src();
      if (!b) return false;
      g_random_[*need] = *b ? 1 : 0;
      take_bit(*b);
    }
  }

  void take_bit(bool b) {
    ++consumed_;
    if (record_) round_bits_.push_back(b);
  }

  void finish_round() {
    if (record_) {
      round_record rec;
      rec.round = round_;
      rec.state_before = before_;
      for (auto i : S_) {
        rec.unmask_set.push_back(i + 1);
        rec.sampled += pending_[i];
      }
      for (auto i : T_) rec.remask_set.push_back(i + 1);
      rec.state_after = x_;
      rec.random_bits = round_bits_;
      trace_.push_back(std::move(rec));
    }
    ++round_;
    phase_ = phase::select;
  }

  const compiled_spec* cs_;
  bool record_;
  token_seq x_;
  std::size_t round_ = 1;
  bool sampling_only_ = false;
  phase phase_ = phase::select;

  token_seq before_;
  token_seq pending_;
  std::vector<std::uint8_t> input_;
  std::vector<std::uint8_t> g_input_;
  std::vector<std::size_t> S_;
  std::vector<std::size_t> T_;
  std::size_t cursor_ = 0;
  std::vector<std::uint8_t> slots_;
  std::vector<std::uint8_t> g_random_;
  bits round_bits_;
  std::size_t consumed_ = 0;
  trace trace_;
};

struct run_result {
  token_seq output;
  token_seq final_state;
  trace records;
};

/// Bits from a 64-bit Mersenne twister, consumed MSB-first per word.
class rng_bit_source {
public:
  explicit rng_bit_source(std::uint64_t seed) : rng_(seed) {}
  std::optional<bool> operator()() {
    if (left_ == 0) {
      word_ = rng_();
      left_ = 64;
    }
    --left_;
    return ((word_ >> left_) & 1u) != 0;
  }

private:
  std::mt19937_64 rng_;
  std::uint64_t word_ = 0;
  unsigned left_ = 0;
};

/// Run the machine once with bits drawn from `seed`.
inline run_result run(const dlm_spec& spec, const token_seq& prompt, std::uint64_t seed) {
  compiled_spec cs(spec);
  execution e(cs, prompt);
  rng_bit_source src(seed);
  e.advance(src);
  return {e.output(), e.state(), e.records()};
}

/// Re-run with the random bits recorded in `recorded`; throws if the run
/// would consume a different number of bits than recorded.
inline run_result replay(const dlm_spec& spec, const token_seq& prompt, const trace& recorded) {
  bits flat;
  for (const auto& r : recorded) flat.insert(flat.end(), r.random_bits.begin(), r.random_bits.end());
  std::size_t pos = 0;
  auto src = [&]() -> std::optional<bool> {
    if (pos >= flat.size()) return std::nullopt;
    return flat[pos++];
  };
  compiled_spec cs(spec);
  execution e(cs, prompt);
  if (e.advance(src) == execution::status::starved) throw run_error("replay ran out of recorded random bits");
  if (pos != flat.size()) throw run_error("replay left recorded random bits unused");
  return {e.output(), e.state(), e.records()};
}

inline constexpr std::uint64_t default_branch_budget = std::uint64_t{1} << 24;

namespace detail {

/// Depth-first branching over every random bit an execution consumes.
/// `leaf(execution&)` is called on each finished path with weight 2^-bits.
template <class Leaf>
void enumerate_paths(const execution& start, std::uint64_t budget, Leaf&& leaf) {
  struct item {
    execution e;
    std::optional<bool> forced;
  };
  std::vector<item> stack;
  stack.push_back({start, std::nullopt});
  std::uint64_t paths = 1;
  while (!stack.empty()) {
    item it = std::move(stack.back());
    stack.pop_back();
    auto src = [&it]() -> std::optional<bool> {
      auto b = it.forced;
      it.forced.reset();
      return b;
    };
    if (it.e.advance(src) == execution::status::finished) {
      leaf(it.e);
      continue;
    }
    ++paths;
    if (paths > budget) {
      throw budget_exceeded("exact enumeration reached " + std::to_string(paths) + " branches, budget is " +
                            std::to_string(budget));
    }
    stack.push_back({it.e, true});
    stack.push_back({std::move(it.e), false});
  }
}

} // namespace detail

/// Exact output law of a DLM on prompt q, by branching on each consumed bit.
inline distribution exact_output_distribution(const dlm_spec& spec, const token_seq& prompt,
                                              std::uint64_t branch_budget = default_branch_budget) {
  compiled_spec cs(spec);
  execution start(cs, prompt, false);
  distribution d;
  detail::enumerate_paths(start, branch_budget, [&](const execution& e) {
    d.add(e.output(), rational::dyadic(1, static_cast<unsigned>(e.bits_consumed())));
  });
  return d;
}

/// Joint law of the tokens one round writes at S from `state` (predictor
/// sampling only, no remask). Keys list the sampled tokens in S order.
inline distribution step_distribution(const dlm_spec& spec, const token_seq& state, std::size_t round,
                                      std::vector<std::size_t>* unmask_set = nullptr,
                                      std::uint64_t branch_budget = default_branch_budget) {
  compiled_spec cs(spec);
  execution start(cs, state, round, true);
  distribution d;
  bool first = true;
  detail::enumerate_paths(start, branch_budget, [&](const execution& e) {
    if (first && unmask_set) {
      *unmask_set = e.unmask_set();
      for (auto& i : *unmask_set) ++i;
    }
    first = false;
    d.add(e.sampled(), rational::dyadic(1, static_cast<unsigned>(e.bits_consumed())));
  });
  return d;
}

// ---------------------------------------------------------------------------
// audit

struct circuit_stats {
  unsigned depth = 0;
  std::size_t size = 0;
  std::size_t max_fanin = 0;
  std::size_t max_cone_inputs = 0;  // structural inputs feeding one output bit
  std::size_t max_cone_randoms = 0; // random vertices feeding one output bit
};

inline circuit_stats measure(const circuit& c) {
  circuit_stats st;
  st.depth = c.depth();
  st.size = c.size();
  for (const auto& v : c.vertices) st.max_fanin = std::max(st.max_fanin, v.args.size());
  for (const auto& cone : evaluator(c).output_cones()) {
    st.max_cone_inputs = std::max(st.max_cone_inputs, cone.inputs);
    st.max_cone_randoms = std::max(st.max_cone_randoms, cone.randoms);
  }
  return st;
}

struct audit_report {
  std::vector<circuit_stats> predictors;
  circuit_stats unmask;
  std::optional<circuit_stats> remask;
  unsigned max_predictor_depth = 0;
  unsigned max_depth = 0; // over predictors, F and G
  std::size_t max_cone_inputs = 0;
  std::size_t max_cone_randoms = 0;
  std::optional<unsigned> depth_bound;
  bool within_bound = true;
};

inline audit_report audit(const dlm_spec& spec, std::optional<unsigned> depth_bound = std::nullopt) {
  audit_report a;
  for (const auto& p : spec.predictors) {
    a.predictors.push_back(measure(p.circ));
    const auto& st = a.predictors.back();
    a.max_predictor_depth = std::max(a.max_predictor_depth, st.depth);
    a.max_cone_inputs = std::max(a.max_cone_inputs, st.max_cone_inputs);
    a.max_cone_randoms = std::max(a.max_cone_randoms, st.max_cone_randoms);
  }
  a.unmask = measure(spec.unmask_policy);
  a.max_depth = std::max(a.max_predictor_depth, a.unmask.depth);
  if (spec.remask_policy) {
    a.remask = measure(*spec.remask_policy);
    a.max_depth = std::max(a.max_depth, a.remask->depth);
  }
  a.depth_bound = depth_bound;
  a.within_bound = !depth_bound || a.max_depth <= *depth_bound;
  return a;
}

} // namespace dlmc
