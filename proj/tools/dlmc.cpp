// dlmc: compile circuits into DLM specs, run them and check their output laws.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dlmc/dlmc.hpp"
#include "dlmc/manifest.hpp"

using namespace dlmc;
using json = nlohmann::ordered_json;

namespace {

struct options {
  std::uint64_t seed = 0;
  std::uint64_t samples = 0;
  std::uint64_t branch_budget = default_branch_budget;
  unsigned enum_budget = default_enumeration_budget;
  std::string trace_out;
  bool json_out = false;

  std::string theorem;
  std::string in, out, spec, circuit_path, input, replay_path;
  bool exact = false;
  std::optional<unsigned> depth_bound;

  std::string parity_mode = "revision";
  std::size_t n = 0;
  std::size_t m = 1;
  bool verify = false;
  std::size_t rounds = 1;
};

json dist_json(const distribution& d) {
  json j = json::object();
  for (const auto& [k, p] : d.entries()) j[k] = p.str();
  return j;
}

void print_dist(const distribution& d) {
  for (const auto& [k, p] : d.entries()) std::cout << (k.empty() ? "\"\"" : k) << ' ' << p << '\n';
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw error("cannot write '" + path + "'");
  f << text;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int cmd_compile(const options& o) {
  circuit c = read_netlist_file(o.in);
  dlm_spec s;
  if (o.theorem == "cot") s = compile_cot(normalize(c));
  else if (o.theorem == "remask") s = compile_remask(normalize(c, true));
  else s = compile_revision(normalize(c));
  save_spec(o.out, s);
  if (o.json_out) {
    std::cout << json{{"spec", o.out}, {"L", s.length}, {"D", s.rounds}, {"mode", to_string(s.mode)}}.dump() << '\n';
  } else {
    std::cout << "wrote " << o.out << ": L=" << s.length << " D=" << s.rounds << " mode=" << to_string(s.mode) << '\n';
  }
  return 0;
}

int cmd_run(const options& o) {
  dlm_spec s = load_spec(o.spec);
  auto r = run(s, parse_tokens(o.input), o.seed);
  if (!o.trace_out.empty()) write_file(o.trace_out, trace_jsonl(r.records));
  if (o.json_out) {
    std::cout << json{{"output", r.output}, {"rounds", r.records.size()}, {"final_state", r.final_state}}.dump() << '\n';
  } else {
    std::cout << (r.output.empty() ? "\"\"" : r.output) << '\n';
  }
  return 0;
}

int cmd_sample(const options& o) {
  dlm_spec s = load_spec(o.spec);
  token_seq q = parse_tokens(o.input);
  distribution d = o.samples > 0 ? monte_carlo(s, q, o.samples, o.seed) : exact_output_distribution(s, q, o.branch_budget);
  if (o.json_out) {
    std::cout << json{{"exact", o.samples == 0}, {"distribution", dist_json(d)}}.dump() << '\n';
  } else {
    print_dist(d);
  }
  return 0;
}

int cmd_verify(const options& o) {
  circuit c = read_netlist_file(o.circuit_path);
  dlm_spec s = load_spec(o.spec);
  circuit nc = normalize(c);
  std::vector<bits> inputs;
  if (!o.input.empty()) {
    inputs.push_back(parse_bits(o.input));
  } else {
    if (nc.input_count > 16) throw invalid_argument("more than 16 inputs; pass --input");
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << nc.input_count); ++x) {
      bits b(nc.input_count);
      for (std::size_t i = 0; i < b.size(); ++i) b[i] = (x >> (b.size() - 1 - i)) & 1u;
      inputs.push_back(b);
    }
  }
  bool ok = true;
  json report = json::array();
  for (const bits& in : inputs) {
    token_seq q;
    for (bool b : in) q += b ? 'b' : 'a';
    distribution want = to_tokens(output_distribution(nc, in, o.enum_budget));
    json entry{{"input", q}};
    if (o.samples > 0 && !o.exact) {
      distribution got = monte_carlo(s, q, o.samples, o.seed);
      const double dist = tvd(got, want).to_double();
      const double bound = 4 * std::sqrt(static_cast<double>(want.support_size()) / static_cast<double>(o.samples));
      const bool pass = dist <= bound;
      ok = ok && pass;
      entry["tvd"] = dist;
      entry["bound"] = bound;
      entry["match"] = pass;
      if (!o.json_out) {
        std::cout << "input " << (q.empty() ? "\"\"" : q) << ": tvd " << dist << (pass ? " within " : " exceeds ")
                  << bound << '\n';
      }
    } else {
      distribution got = exact_output_distribution(s, q, o.branch_budget);
      auto cmp = assert_equal(got, want);
      ok = ok && cmp.equal;
      entry["match"] = cmp.equal;
      if (!cmp.equal) {
        json diffs = json::array();
        for (const auto& d : cmp.diffs) diffs.push_back({{"key", d.key}, {"spec", d.left.str()}, {"circuit", d.right.str()}});
        entry["diff"] = diffs;
      }
      if (!o.json_out) {
        std::cout << "input " << (q.empty() ? "\"\"" : q) << ": " << (cmp.equal ? "exact match" : "MISMATCH") << '\n';
        if (!cmp.equal) std::cout << cmp.str() << '\n';
      }
    }
    report.push_back(entry);
  }
  if (o.json_out) std::cout << json{{"match", ok}, {"inputs", report}}.dump() << '\n';
  return ok ? 0 : 1;
}

json stats_json(const circuit_stats& s) {
  return {{"depth", s.depth}, {"size", s.size}, {"max_fanin", s.max_fanin}, {"max_cone_inputs", s.max_cone_inputs},
          {"max_cone_randoms", s.max_cone_randoms}};
}

int cmd_audit(const options& o) {
  dlm_spec s = load_spec(o.spec);
  auto a = audit(s, o.depth_bound);
  if (o.json_out) {
    json preds = json::array();
    for (const auto& p : a.predictors) preds.push_back(stats_json(p));
    json j{{"predictors", preds}, {"F", stats_json(a.unmask)}};
    j["G"] = a.remask ? stats_json(*a.remask) : json(nullptr);
    j["max_depth"] = a.max_depth;
    j["max_cone_inputs"] = a.max_cone_inputs;
    if (a.depth_bound) j["depth_bound"] = *a.depth_bound;
    j["within_bound"] = a.within_bound;
    std::cout << j.dump() << '\n';
  } else {
    for (std::size_t i = 0; i < a.predictors.size(); ++i) {
      const auto& p = a.predictors[i];
      std::cout << "p" << i + 1 << ": depth " << p.depth << ", size " << p.size << ", max fan-in " << p.max_fanin
                << ", cone " << p.max_cone_inputs << " inputs + " << p.max_cone_randoms << " random\n";
    }
    std::cout << "F: depth " << a.unmask.depth << ", size " << a.unmask.size << '\n';
    if (a.remask) std::cout << "G: depth " << a.remask->depth << ", size " << a.remask->size << '\n';
    std::cout << "max depth " << a.max_depth;
    if (a.depth_bound) std::cout << (a.within_bound ? " <= " : " > ") << *a.depth_bound;
    std::cout << '\n';
  }
  return a.within_bound ? 0 : 1;
}

int cmd_trace(const options& o) {
  dlm_spec s = load_spec(o.spec);
  token_seq q = parse_tokens(o.input);
  if (!o.replay_path.empty()) {
    trace recorded = parse_trace_jsonl(read_file(o.replay_path));
    auto r = replay(s, q, recorded);
    const bool same = trace_jsonl(r.records) == trace_jsonl(recorded);
    std::cout << (same ? "replay matches " : "replay DIFFERS from ") << o.replay_path << " (" << r.records.size()
              << " rounds)\n";
    return same ? 0 : 1;
  }
  auto r = run(s, q, o.seed);
  const std::string text = trace_jsonl(r.records);
  if (!o.trace_out.empty()) write_file(o.trace_out, text);
  else std::cout << text;
  return 0;
}

int cmd_parity(const options& o) {
  dlm_spec s;
  if (o.parity_mode == "revision") s = parity_revision_dlm(o.n);
  else if (o.parity_mode == "remask") s = parity_remask_dlm(o.n);
  else s = parity_standard_dlm(o.n, o.m);
  if (!o.out.empty()) save_spec(o.out, s);
  if (!o.verify) {
    std::cout << s.name << ": L=" << s.length << " D=" << s.rounds << '\n';
    return 0;
  }
  auto cmp = assert_equal(exact_output_distribution(s, "", o.branch_budget), parity_target(o.n));
  const std::size_t rounds = run(s, "", o.seed).records.size();
  if (o.json_out) {
    std::cout << json{{"match", cmp.equal}, {"rounds", rounds}}.dump() << '\n';
  } else if (cmp.equal) {
    std::cout << "exact match, " << rounds << " rounds\n";
  } else {
    std::cout << "MISMATCH\n" << cmp.str() << '\n';
  }
  return cmp.equal ? 0 : 1;
}

int cmd_advantage(const options& o) {
  dlm_spec s = load_spec(o.spec);
  auto s1 = first_round_set(s);
  auto r = advantage(s, s1, o.rounds, o.enum_budget);
  if (o.json_out) {
    std::cout << json{{"accuracy", r.accuracy.str()}, {"seeded", s1}, {"random_bits", r.circ.random_count()},
                      {"depth", r.circ.depth()}}
                     .dump()
              << '\n';
  } else {
    std::cout << r.accuracy << '\n';
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compile layered circuits into diffusion-LM sampling programs and check them exactly"};
  app.require_subcommand(1);
  options o;
  app.add_option("--seed", o.seed, "seed for every random choice")->capture_default_str();
  app.add_option("--branch-budget", o.branch_budget, "max branches for exact DLM enumeration")->capture_default_str();
  app.add_option("--enum-budget", o.enum_budget, "max random bits for exact circuit enumeration")->capture_default_str();
  app.add_flag("--json", o.json_out, "structured output");
  app.fallthrough();

  auto* compile = app.add_subcommand("compile", "compile a netlist into a DLM spec manifest");
  compile->add_option("--theorem", o.theorem, "construction")->required()->check(CLI::IsMember({"cot", "remask", "revision"}));
  compile->add_option("--in", o.in, "input netlist")->required();
  compile->add_option("--out", o.out, "output manifest")->required();

  auto* runc = app.add_subcommand("run", "run a spec once");
  runc->add_option("--spec", o.spec)->required();
  runc->add_option("--input", o.input, "prompt (a/b or 0/1)");
  runc->add_option("--trace-out", o.trace_out, "write the JSONL trace here");

  auto* sample = app.add_subcommand("sample", "output distribution of a spec (exact, or --samples N)");
  sample->add_option("--spec", o.spec)->required();
  sample->add_option("--input", o.input);
  sample->add_option("--samples", o.samples, "Monte Carlo sample count");

  auto* verify = app.add_subcommand("verify", "compare a spec against its circuit");
  verify->add_option("--circuit", o.circuit_path)->required();
  verify->add_option("--spec", o.spec)->required();
  verify->add_option("--input", o.input, "single input (default: all)");
  verify->add_flag("--exact", o.exact, "exact comparison (default)");
  verify->add_option("--samples", o.samples, "Monte Carlo comparison");

  auto* auditc = app.add_subcommand("audit", "depth, size, fan-in and cone report");
  auditc->add_option("--spec", o.spec)->required();
  auditc->add_option("--depth-bound", o.depth_bound);

  auto* tracec = app.add_subcommand("trace", "print a run's trace, or replay a recorded one");
  tracec->add_option("--spec", o.spec)->required();
  tracec->add_option("--input", o.input);
  tracec->add_option("--trace-out", o.trace_out);
  tracec->add_option("--replay", o.replay_path, "recorded JSONL trace to replay");

  auto* parity = app.add_subcommand("parity", "even-parity samplers");
  parity->add_option("--mode", o.parity_mode)->check(CLI::IsMember({"revision", "remask", "standard"}))->capture_default_str();
  auto* n_opt = parity->add_option("--n", o.n, "length");
  parity->add_option("--m", o.m, "residual masks after round 1 (standard mode)")->capture_default_str();
  parity->add_flag("--verify", o.verify, "compare exactly with the even-parity law");
  parity->add_option("--out", o.out, "write the DLM manifest");
  auto* adv = parity->add_subcommand("advantage", "exact PARITY accuracy of the advantage circuit");
  adv->add_option("--spec", o.spec)->required();
  adv->add_option("--rounds", o.rounds)->required();

  try {
    app.parse(argc, argv);
    if (parity->parsed() && !adv->parsed() && n_opt->count() == 0) {
      throw CLI::RequiredError("--n");
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (compile->parsed()) return cmd_compile(o);
    if (runc->parsed()) return cmd_run(o);
    if (sample->parsed()) return cmd_sample(o);
    if (verify->parsed()) return cmd_verify(o);
    if (auditc->parsed()) return cmd_audit(o);
    if (tracec->parsed()) return cmd_trace(o);
    if (adv->parsed()) return cmd_advantage(o);
    if (parity->parsed()) return cmd_parity(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
