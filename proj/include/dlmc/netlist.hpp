#pragma once

// Text netlist format, one construct per line:
//
//   circuit <name> inputs=<n> [fanin=<k>]
//   v <id> input|random|<OP>(<id>,<id>,...) [layer=<k>]
//   outputs <id>,<id>,...
//
// Blank lines and lines starting with '#' are ignored. Whitespace between
// tokens is free.

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>

#include "dlmc/circuit.hpp"
#include "dlmc/error.hpp"

namespace dlmc {

namespace detail {

class line_cursor {
public:
  line_cursor(std::string_view text, std::size_t line) : text_(text), line_(line) {}

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }
  std::size_t column() const { return pos_ + 1; }

  [[noreturn]] void fail(const std::string& msg) const { throw parse_error(line_, column(), msg); }
  [[noreturn]] void fail_at(std::size_t col, const std::string& msg) const { throw parse_error(line_, col, msg); }

  bool try_char(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect_char(char c) {
    if (!try_char(c)) fail(std::string("expected '") + c + "'");
  }

  std::string_view word() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
                                   text_[pos_] == '.' || text_[pos_] == '-' || text_[pos_] == ':')) {
      ++pos_;
    }
    if (start == pos_) fail("expected a word");
    return text_.substr(start, pos_ - start);
  }

  std::string_view peek_word() {
    std::size_t save = pos_;
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    std::string_view w = text_.substr(start, pos_ - start);
    pos_ = save;
    return w;
  }

  std::uint64_t number() {
    skip_ws();
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
    if (ec != std::errc() || ptr == text_.data() + pos_) fail("expected a decimal number");
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    return v;
  }

  /// key=<number>
  std::uint64_t keyed_number(std::string_view key) {
    std::string_view w = word();
    if (w != key) fail("expected '" + std::string(key) + "='");
    expect_char('=');
    return number();
  }

private:
  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

} // namespace detail

/// Parse a netlist. Errors carry the 1-based line and column.
inline circuit parse_netlist(std::string_view text) {
  circuit c;
  bool have_header = false;
  bool have_outputs = false;
  struct ref {
    vertex_id id;
    std::size_t line, col;
  };
  std::vector<ref> refs;
  std::unordered_map<vertex_id, std::size_t> seen;

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    detail::line_cursor cur(line, line_no);
    if (cur.at_end()) {
      if (end == text.size()) break;
      continue;
    }
    if (cur.try_char('#')) continue;

    std::size_t kw_col = cur.column();
    std::string_view kw = cur.word();
    if (kw == "circuit") {
      if (have_header) cur.fail_at(kw_col, "duplicate circuit header");
      c.name = std::string(cur.word());
      c.input_count = cur.keyed_number("inputs");
      if (!cur.at_end()) c.fanin_bound = static_cast<unsigned>(cur.keyed_number("fanin"));
      have_header = true;
    } else if (kw == "v") {
      if (!have_header) cur.fail_at(kw_col, "vertex before circuit header");
      if (have_outputs) cur.fail_at(kw_col, "vertex after outputs line");
      vertex v;
      std::size_t id_col = (cur.skip_ws(), cur.column());
      v.id = static_cast<vertex_id>(cur.number());
      if (seen.count(v.id)) cur.fail_at(id_col, "duplicate vertex id " + std::to_string(v.id));
      std::size_t op_col = (cur.skip_ws(), cur.column());
      std::string_view op = cur.word();
      if (op == "input") {
        v.kind = vertex_kind::input;
      } else if (op == "random") {
        v.kind = vertex_kind::random;
      } else {
        auto g = gate_op_from_string(op);
        if (!g) cur.fail_at(op_col, "unknown gate '" + std::string(op) + "'");
        v.kind = vertex_kind::gate;
        v.op = *g;
        cur.expect_char('(');
        if (!cur.try_char(')')) {
          do {
            std::size_t col = (cur.skip_ws(), cur.column());
            vertex_id a = static_cast<vertex_id>(cur.number());
            v.args.push_back(a);
            refs.push_back({a, line_no, col});
          } while (cur.try_char(','));
          cur.expect_char(')');
        }
      }
      if (!cur.at_end()) v.layer = static_cast<unsigned>(cur.keyed_number("layer"));
      if (!cur.at_end()) cur.fail("unexpected trailing text");
      seen.emplace(v.id, c.vertices.size());
      c.vertices.push_back(std::move(v));
      continue;
    } else if (kw == "outputs") {
      if (!have_header) cur.fail_at(kw_col, "outputs before circuit header");
      if (have_outputs) cur.fail_at(kw_col, "duplicate outputs line");
      have_outputs = true;
      if (!cur.at_end()) {
        do {
          std::size_t col = (cur.skip_ws(), cur.column());
          vertex_id o = static_cast<vertex_id>(cur.number());
          c.outputs.push_back(o);
          refs.push_back({o, line_no, col});
        } while (cur.try_char(','));
      }
    } else {
      cur.fail_at(kw_col, "unknown construct '" + std::string(kw) + "'");
    }
    if (!cur.at_end()) cur.fail("unexpected trailing text");
  }

  if (!have_header) throw parse_error(1, 1, "missing circuit header");
  if (c.outputs.empty()) throw parse_error(line_no, 1, "no outputs");
  for (const auto& r : refs) {
    if (!seen.count(r.id)) throw parse_error(r.line, r.col, "undefined id " + std::to_string(r.id));
  }
  std::size_t inputs = 0;
  for (const auto& v : c.vertices) inputs += v.kind == vertex_kind::input;
  if (inputs != c.input_count) {
    throw parse_error(1, 1, "header declares inputs=" + std::to_string(c.input_count) + " but " +
                                std::to_string(inputs) + " input vertices are defined");
  }
  return c;
}

inline std::string serialize_netlist(const circuit& c) {
  std::ostringstream os;
  os << "circuit " << c.name << " inputs=" << c.input_count;
  if (c.fanin_bound) os << " fanin=" << *c.fanin_bound;
  os << '\n';
  for (const auto& v : c.vertices) {
    os << "v " << v.id << ' ';
    switch (v.kind) {
    case vertex_kind::input: os << "input"; break;
    case vertex_kind::random: os << "random"; break;
    case vertex_kind::gate:
      os << to_string(v.op) << '(';
      for (std::size_t k = 0; k < v.args.size(); ++k) os << (k ? "," : "") << v.args[k];
      os << ')';
      break;
    }
    if (v.layer != 0) os << " layer=" << v.layer;
    os << '\n';
  }
  os << "outputs ";
  for (std::size_t k = 0; k < c.outputs.size(); ++k) os << (k ? "," : "") << c.outputs[k];
  os << '\n';
  return os.str();
}

inline circuit read_netlist_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error("cannot open netlist '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_netlist(ss.str());
  } catch (const parse_error& e) {
    throw error(path + ": " + e.what());
  }
}

inline void write_netlist_file(const std::string& path, const circuit& c) {
  std::ofstream out(path);
  if (!out) throw error("cannot write netlist '" + path + "'");
  out << serialize_netlist(c);
}

} // namespace dlmc
