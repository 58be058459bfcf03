#pragma once

#include <random>
#include <string>
#include <vector>

#include "ordkit/ordinal_sum.hpp"
#include "ordkit/search.hpp"

namespace families {

/// Sectionally pseudocomplemented posets with 2..4 elements that contain a
/// comparable pair, in census order.
inline std::vector<ordkit::FinitePoset> secpc_pool() {
  std::vector<ordkit::FinitePoset> pool;
  for (std::size_t n = 2; n <= 4; ++n) {
    for (const auto& p : ordkit::enumerate_posets(n)) {
      if (!ordkit::classify(p).is_sec_pc || ordkit::hasse_covers(p).empty()) continue;
      pool.push_back(p);
    }
  }
  return pool;
}

inline ordkit::FinitePoset relabel(const ordkit::FinitePoset& p, const std::string& prefix) {
  std::vector<std::string> names;
  for (const auto& n : p.names()) names.push_back(prefix + n);
  std::vector<ordkit::Subset> down;
  for (ordkit::Elem x = 0; x < p.size(); ++x) down.push_back(p.down(x));
  return ordkit::FinitePoset::from_down_sets(prefix + p.name(), std::move(names), std::move(down));
}

/// A random 2- or 3-summand family over the pool that satisfies the sum
/// hypothesis, with random glue where the boundary elements allow it.
inline ordkit::SumFamily random_family(std::mt19937_64& rng, const std::vector<ordkit::FinitePoset>& pool) {
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::uniform_int_distribution<std::size_t> count(2, 3);
  std::bernoulli_distribution glue(0.5);
  while (true) {
    ordkit::SumFamily f;
    f.name = "random";
    const std::size_t k = count(rng);
    for (std::size_t i = 0; i < k; ++i) {
      f.index.push_back(std::to_string(i + 1));
      f.summands.push_back(relabel(pool[pick(rng)], "s" + std::to_string(i + 1) + "_"));
    }
    if (!ordkit::top(f.summands.back()) || !ordkit::sum_hypothesis_holds(f)) continue;
    for (std::size_t i = 0; i + 1 < k; ++i) {
      auto t = ordkit::top(f.summands[i]);
      auto b = ordkit::bottom(f.summands[i + 1]);
      if (t && b && glue(rng)) f.glue.push_back({i, *t, i + 1, *b});
    }
    return f;
  }
}

}  // namespace families
