#pragma once

// DLM spec manifests (JSON plus one netlist per circuit) and JSONL traces.
//
// A manifest at <path> stores its netlists in <path>.d/ and refers to them
// by paths relative to the manifest's directory.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "dlmc/dlm.hpp"
#include "dlmc/netlist.hpp"

namespace dlmc {

inline void save_spec(const std::string& path, const dlm_spec& s) {
  namespace fs = std::filesystem;
  const fs::path manifest(path);
  const fs::path base = manifest.has_parent_path() ? manifest.parent_path() : fs::path(".");
  const fs::path dir_name = manifest.filename().string() + ".d";
  fs::create_directories(base / dir_name);

  auto put = [&](const std::string& file, const circuit& c) {
    write_netlist_file((base / dir_name / file).string(), c);
    return (dir_name / file).generic_string();
  };

  nlohmann::json j;
  j["name"] = s.name;
  j["L"] = s.length;
  j["D"] = s.rounds;
  j["mode"] = std::string(to_string(s.mode));
  j["step_indexed"] = s.step_indexed;
  j["n"] = s.prompt_length;
  j["m"] = s.output_length;
  j["F"] = put("F.net", s.unmask_policy);
  j["G"] = s.remask_policy ? nlohmann::json(put("G.net", *s.remask_policy)) : nlohmann::json(nullptr);
  j["predictors"] = nlohmann::json::array();
  for (std::size_t i = 0; i < s.predictors.size(); ++i) {
    j["predictors"].push_back({{"netlist", put("p" + std::to_string(i + 1) + ".net", s.predictors[i].circ)},
                               {"random_slots", s.predictors[i].random_slots}});
  }
  std::ofstream out(path);
  if (!out) throw error("cannot write manifest '" + path + "'");
  out << j.dump(2) << '\n';
}

inline dlm_spec load_spec(const std::string& path) {
  namespace fs = std::filesystem;
  std::ifstream in(path);
  if (!in) throw error("cannot open manifest '" + path + "'");
  const fs::path base = fs::path(path).has_parent_path() ? fs::path(path).parent_path() : fs::path(".");
  nlohmann::json j;
  try {
    in >> j;
    dlm_spec s;
    s.name = j.value("name", std::string("spec"));
    s.length = j.at("L").get<std::size_t>();
    s.rounds = j.at("D").get<std::size_t>();
    s.mode = mode_from_string(j.at("mode").get<std::string>());
    s.step_indexed = j.value("step_indexed", false);
    s.prompt_length = j.at("n").get<std::size_t>();
    s.output_length = j.at("m").get<std::size_t>();
    s.unmask_policy = read_netlist_file((base / j.at("F").get<std::string>()).string());
    if (j.contains("G") && !j.at("G").is_null()) {
      s.remask_policy = read_netlist_file((base / j.at("G").get<std::string>()).string());
    }
    for (const auto& p : j.at("predictors")) {
      position_predictor pp;
      pp.circ = read_netlist_file((base / p.at("netlist").get<std::string>()).string());
      pp.random_slots = p.at("random_slots").get<std::vector<std::uint32_t>>();
      s.predictors.push_back(std::move(pp));
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw error("manifest '" + path + "': " + e.what());
  }
}

/// Bits packed MSB-first into hex digits; the last digit is zero-padded.
inline std::string bits_to_hex(const bits& b) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string s;
  for (std::size_t i = 0; i < b.size(); i += 4) {
    unsigned v = 0;
    for (std::size_t k = 0; k < 4; ++k) v = (v << 1) | (i + k < b.size() && b[i + k] ? 1u : 0u);
    s += digits[v];
  }
  return s;
}

inline bits hex_to_bits(std::string_view hex, std::size_t count) {
  if (hex.size() != (count + 3) / 4) throw invalid_argument("hex string length does not match bit count");
  bits b;
  for (char c : hex) {
    unsigned v;
    if (c >= '0' && c <= '9') v = static_cast<unsigned>(c - '0');
    else if (c >= 'a' && c <= 'f') v = static_cast<unsigned>(c - 'a' + 10);
    else throw invalid_argument("bad hex digit '" + std::string(1, c) + "'");
    for (int k = 3; k >= 0; --k) b.push_back((v >> k) & 1u);
  }
  b.resize(count);
  return b;
}

inline std::string trace_jsonl(const trace& t) {
  std::string out;
  for (const auto& r : t) {
    nlohmann::ordered_json j;
    j["round"] = r.round;
    j["state_before"] = r.state_before;
    j["S"] = r.unmask_set;
    j["sampled"] = r.sampled;
    j["T"] = r.remask_set;
    j["state_after"] = r.state_after;
    j["random_bits"] = bits_to_hex(r.random_bits);
    j["random_bit_count"] = r.random_bits.size();
    out += j.dump() + "\n";
  }
  return out;
}

inline trace parse_trace_jsonl(const std::string& text) {
  trace t;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto j = nlohmann::json::parse(line);
      round_record r;
      r.round = j.at("round").get<std::size_t>();
      r.state_before = j.at("state_before").get<std::string>();
      r.unmask_set = j.at("S").get<std::vector<std::size_t>>();
      r.sampled = j.at("sampled").get<std::string>();
      r.remask_set = j.at("T").get<std::vector<std::size_t>>();
      r.state_after = j.at("state_after").get<std::string>();
      r.random_bits = hex_to_bits(j.at("random_bits").get<std::string>(), j.at("random_bit_count").get<std::size_t>());
      t.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw parse_error(line_no, 1, std::string("trace record: ") + e.what());
    }
  }
  return t;
}

} // namespace dlmc
