#pragma once

// Exact and sampled comparison of output distributions.

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "dlmc/distribution.hpp"
#include "dlmc/dlm.hpp"

namespace dlmc {

struct distribution_diff {
  std::string key;
  rational left;
  rational right;
};

struct comparison {
  bool equal = true;
  std::vector<distribution_diff> diffs;

  explicit operator bool() const noexcept { return equal; }

  std::string str() const {
    if (equal) return "equal";
    std::string s;
    for (const auto& d : diffs) {
      s += (s.empty() ? "" : "\n") + (d.key.empty() ? std::string("\"\"") : d.key) + ": " + d.left.str() + " vs " +
           d.right.str();
    }
    return s;
  }
};

/// Exact equality; every key whose probabilities differ is listed.
inline comparison assert_equal(const distribution& p, const distribution& q) {
  comparison c;
  std::set<std::string> keys;
  for (const auto& [k, v] : p.entries()) keys.insert(k);
  for (const auto& [k, v] : q.entries()) keys.insert(k);
  for (const auto& k : keys) {
    rational a = p.probability(k), b = q.probability(k);
    if (a != b) c.diffs.push_back({k, a, b});
  }
  c.equal = c.diffs.empty();
  return c;
}

/// Total variation distance, exactly.
inline rational tvd(const distribution& p, const distribution& q) {
  std::set<std::string> keys;
  for (const auto& [k, v] : p.entries()) keys.insert(k);
  for (const auto& [k, v] : q.entries()) keys.insert(k);
  rational sum(0);
  for (const auto& k : keys) sum += abs(p.probability(k) - q.probability(k));
  return sum / rational(2);
}

/// Empirical output law from `samples` independent runs; run i uses the
/// i-th draw of a mt19937_64 seeded with `seed` as its own seed.
inline distribution monte_carlo(const dlm_spec& spec, const token_seq& prompt, std::uint64_t samples,
                                std::uint64_t seed) {
  if (samples == 0) throw invalid_argument("monte_carlo needs at least one sample");
  compiled_spec cs(spec);
  std::mt19937_64 seeds(seed);
  std::map<std::string, std::int64_t> counts;
  for (std::uint64_t i = 0; i < samples; ++i) {
    execution e(cs, prompt, false);
    rng_bit_source src(seeds());
    e.advance(src);
    ++counts[e.output()];
  }
  distribution d;
  for (const auto& [k, n] : counts) d.add(k, rational(n, static_cast<std::int64_t>(samples)));
  return d;
}

} // namespace dlmc
