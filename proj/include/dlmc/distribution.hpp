#pragma once

#include <map>
#include <sstream>
#include <string>

#include "dlmc/error.hpp"
#include "dlmc/rational.hpp"

namespace dlmc {

/// Finite distribution over equal-length output strings with exact probabilities.
///
/// Keys are either bit strings ("0101") from circuits or token strings
/// ("abab") from DLM runs; `to_tokens` maps the former onto the latter.
/// Zero-probability entries are never stored.
class distribution {
public:
  using map_type = std::map<std::string, rational>;

  distribution() = default;
  explicit distribution(map_type entries) {
    for (auto& [k, p] : entries) add(k, p);
  }

  void add(const std::string& key, const rational& p) {
    if (p == rational(0)) return;
    if (!entries_.empty() && entries_.begin()->first.size() != key.size()) {
      throw error("distribution keys must have equal length ('" + key + "' vs '" + entries_.begin()->first + "')");
    }
    auto [it, inserted] = entries_.try_emplace(key, p);
    if (!inserted) {
      it->second += p;
      if (it->second == rational(0)) entries_.erase(it);
    }
  }

  rational probability(const std::string& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? rational(0) : it->second;
  }

  rational total() const {
    rational t(0);
    for (const auto& [k, p] : entries_) t += p;
    return t;
  }

  const map_type& entries() const noexcept { return entries_; }
  std::size_t support_size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  /// True when every probability has a power-of-two denominator.
  bool is_dyadic() const {
    for (const auto& [k, p] : entries_) {
      if (!p.is_dyadic()) return false;
    }
    return true;
  }

  std::string str() const {
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (const auto& [k, p] : entries_) {
      os << (first ? "" : ", ") << (k.empty() ? "\"\"" : k) << ": " << p;
      first = false;
    }
    os << '}';
    return os.str();
  }

  friend bool operator==(const distribution&, const distribution&) = default;

private:
  map_type entries_;
};

/// 0 -> a, 1 -> b on every key.
inline distribution to_tokens(const distribution& bits) {
  distribution out;
  for (const auto& [k, p] : bits.entries()) {
    std::string t = k;
    for (char& c : t) {
      if (c == '0') c = 'a';
      else if (c == '1') c = 'b';
    }
    out.add(t, p);
  }
  return out;
}

} // namespace dlmc
