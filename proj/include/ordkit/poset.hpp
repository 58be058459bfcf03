#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "ordkit/error.hpp"
#include "ordkit/subset.hpp"

namespace ordkit {

/// A finite partially ordered set on the elements 0..size()-1.
///
/// The order is stored fully closed: for every element both its principal
/// down-set L(x) and up-set U(x) are kept as bit masks, so cone operators
/// reduce to row intersections. Names are for presentation only.
class FinitePoset {
 public:
  FinitePoset() = default;

  /// Builds a poset from the closed down-sets `down[x] = {y : y <= x}`.
  /// Throws InputError if the relation is not a partial order.
  static FinitePoset from_down_sets(std::string name, std::vector<std::string> names,
                                    std::vector<Subset> down) {
    FinitePoset p;
    const std::size_t n = names.size();
    if (n > kMaxElements) {
      throw SizeCapExceeded("posets are limited to " + std::to_string(kMaxElements) + " elements");
    }
    if (down.size() != n) throw InputError("order relation size does not match label count");
    std::set<std::string> seen;
    for (const auto& s : names) {
      if (!seen.insert(s).second) throw InputError("duplicate element label '" + s + "'");
    }
    p.name_ = std::move(name);
    p.names_ = std::move(names);
    p.down_ = std::move(down);
    p.up_.assign(n, Subset(n));
    for (Elem x = 0; x < n; ++x) {
      if (p.down_[x].size() != n) throw InputError("order relation row has the wrong width");
      if (!p.down_[x].contains(x)) throw InputError("order is not reflexive at '" + p.names_[x] + "'");
      p.down_[x].for_each([&](Elem y) { p.up_[y].insert(x); });
    }
    for (Elem x = 0; x < n; ++x) {
      for (Elem y : p.down_[x].elements()) {
        if (y != x && p.down_[y].contains(x)) throw CycleError(p.names_[x], p.names_[y]);
        if (!p.down_[y].is_subset_of(p.down_[x])) {
          throw InputError("order is not transitive below '" + p.names_[x] + "'");
        }
      }
    }
    return p;
  }

  /// Builds a poset from a square boolean relation, `leq[x][y]` iff x <= y.
  static FinitePoset from_relation(std::string name, std::vector<std::string> names,
                                   const std::vector<std::vector<bool>>& leq) {
    const std::size_t n = names.size();
    if (leq.size() != n) throw InputError("order relation size does not match label count");
    std::vector<Subset> down(n, Subset(n));
    for (Elem x = 0; x < n; ++x) {
      if (leq[x].size() != n) throw InputError("order relation row has the wrong width");
      for (Elem y = 0; y < n; ++y) {
        if (leq[x][y]) down[y].insert(x);
      }
    }
    return from_down_sets(std::move(name), std::move(names), std::move(down));
  }

  std::size_t size() const noexcept { return names_.size(); }
  const std::string& name() const noexcept { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::string& label(Elem x) const { return names_.at(x); }

  std::optional<Elem> find(std::string_view label) const {
    for (Elem x = 0; x < size(); ++x) {
      if (names_[x] == label) return x;
    }
    return std::nullopt;
  }
  Elem index_of(std::string_view label) const {
    if (auto x = find(label)) return *x;
    throw UnknownLabel(std::string(label));
  }

  bool leq(Elem x, Elem y) const noexcept { return down_[y].contains(x); }
  bool lt(Elem x, Elem y) const noexcept { return x != y && leq(x, y); }
  bool comparable(Elem x, Elem y) const noexcept { return leq(x, y) || leq(y, x); }

  /// L(x) = {y : y <= x}
  const Subset& down(Elem x) const noexcept { return down_[x]; }
  /// U(x) = {y : x <= y}
  const Subset& up(Elem x) const noexcept { return up_[x]; }

  Subset all() const { return Subset::full(size()); }
  Subset none() const { return Subset(size()); }
  Subset subset(std::initializer_list<Elem> elems) const { return Subset(size(), elems); }
  Subset subset_of(std::initializer_list<std::string_view> labels) const {
    Subset s(size());
    for (auto l : labels) s.insert(index_of(l));
    return s;
  }

  std::vector<std::string> labels_of(std::span<const Elem> elems) const {
    std::vector<std::string> out;
    out.reserve(elems.size());
    for (Elem e : elems) out.push_back(label(e));
    return out;
  }

  /// Same labels in the same order and the same relation.
  friend bool operator==(const FinitePoset& a, const FinitePoset& b) {
    return a.names_ == b.names_ && a.down_ == b.down_;
  }

 private:
  std::string name_;
  std::vector<std::string> names_;
  std::vector<Subset> down_;
  std::vector<Subset> up_;
};

/// Closes `rel` (rel[x] = set of y with x R y) reflexively and transitively
/// by iterated squaring R <- R u R.R until it stabilises.
inline std::vector<Subset> reflexive_transitive_closure(std::vector<Subset> rel) {
  const std::size_t n = rel.size();
  for (Elem x = 0; x < n; ++x) rel[x].insert(x);
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<Subset> next = rel;
    for (Elem x = 0; x < n; ++x) {
      rel[x].for_each([&](Elem y) { next[x] |= rel[y]; });
      changed = changed || next[x] != rel[x];
    }
    rel = std::move(next);
  }
  return rel;
}

/// Builds the poset whose order is the reflexive-transitive closure of the
/// given pairs (each pair reads "first < second").
inline FinitePoset build_poset(std::vector<std::string> labels,
                               const std::vector<std::pair<std::string, std::string>>& covers,
                               std::string name = {}) {
  const std::size_t n = labels.size();
  if (n > kMaxElements) {
    throw SizeCapExceeded("posets are limited to " + std::to_string(kMaxElements) + " elements");
  }
  auto index = [&](const std::string& l) -> Elem {
    auto it = std::find(labels.begin(), labels.end(), l);
    if (it == labels.end()) throw UnknownLabel(l);
    return static_cast<Elem>(it - labels.begin());
  };
  std::vector<Subset> above(n, Subset(n));
  for (const auto& [lo, hi] : covers) {
    if (lo == hi) throw CycleError(lo, hi);
    above[index(lo)].insert(index(hi));
  }
  above = reflexive_transitive_closure(std::move(above));
  std::vector<Subset> down(n, Subset(n));
  for (Elem x = 0; x < n; ++x) {
    above[x].for_each([&](Elem y) {
      if (y != x && above[y].contains(x)) throw CycleError(labels[x], labels[y]);
      down[y].insert(x);
    });
  }
  return FinitePoset::from_down_sets(std::move(name), std::move(labels), std::move(down));
}

// ---------------------------------------------------------------------------
// Cones

/// L(A): common lower bounds of A. L(empty) = P.
inline Subset lower_cone(const FinitePoset& p, const Subset& a) {
  Subset out = p.all();
  a.for_each([&](Elem y) { out &= p.down(y); });
  return out;
}

/// U(A): common upper bounds of A. U(empty) = P.
inline Subset upper_cone(const FinitePoset& p, const Subset& a) {
  Subset out = p.all();
  a.for_each([&](Elem y) { out &= p.up(y); });
  return out;
}

/// Down-closure of A: elements below some member of A.
inline Subset down_closure(const FinitePoset& p, const Subset& a) {
  Subset out = p.none();
  a.for_each([&](Elem y) { out |= p.down(y); });
  return out;
}

inline Subset up_closure(const FinitePoset& p, const Subset& a) {
  Subset out = p.none();
  a.for_each([&](Elem y) { out |= p.up(y); });
  return out;
}

inline bool is_down_set(const FinitePoset& p, const Subset& a) { return down_closure(p, a) == a; }

/// Greatest element of A, if any.
inline std::optional<Elem> greatest(const FinitePoset& p, const Subset& a) {
  std::optional<Elem> out;
  a.for_each([&](Elem g) {
    if (!out && a.is_subset_of(p.down(g))) out = g;
  });
  return out;
}

/// Least element of A, if any.
inline std::optional<Elem> least(const FinitePoset& p, const Subset& a) {
  std::optional<Elem> out;
  a.for_each([&](Elem g) {
    if (!out && a.is_subset_of(p.up(g))) out = g;
  });
  return out;
}

inline std::optional<Elem> top(const FinitePoset& p) { return greatest(p, p.all()); }
inline std::optional<Elem> bottom(const FinitePoset& p) { return least(p, p.all()); }

inline Subset maximal_elements(const FinitePoset& p, const Subset& a) {
  Subset out = p.none();
  a.for_each([&](Elem x) {
    if ((p.up(x) & a).count() == 1) out.insert(x);
  });
  return out;
}

inline Subset minimal_elements(const FinitePoset& p, const Subset& a) {
  Subset out = p.none();
  a.for_each([&](Elem x) {
    if ((p.down(x) & a).count() == 1) out.insert(x);
  });
  return out;
}

inline std::optional<Elem> join(const FinitePoset& p, Elem a, Elem b) {
  return least(p, p.up(a) & p.up(b));
}

inline std::optional<Elem> meet(const FinitePoset& p, Elem a, Elem b) {
  return greatest(p, p.down(a) & p.down(b));
}

inline bool is_lattice(const FinitePoset& p) {
  for (Elem a = 0; a < p.size(); ++a) {
    for (Elem b = a + 1; b < p.size(); ++b) {
      if (!join(p, a, b) || !meet(p, a, b)) return false;
    }
  }
  return true;
}

/// Covering pairs (a, b): a < b with nothing strictly between.
inline std::vector<std::pair<Elem, Elem>> hasse_covers(const FinitePoset& p) {
  std::vector<std::pair<Elem, Elem>> out;
  for (Elem a = 0; a < p.size(); ++a) {
    for (Elem b = 0; b < p.size(); ++b) {
      if (p.lt(a, b) && (p.up(a) & p.down(b)).count() == 2) out.emplace_back(a, b);
    }
  }
  return out;
}

/// Copy of `p` with elements relabelled; `order[k]` is the old element that
/// becomes element k.
inline FinitePoset permute(const FinitePoset& p, std::span<const Elem> order,
                           std::vector<std::string> names) {
  const std::size_t n = p.size();
  std::vector<Elem> pos(n);
  for (Elem k = 0; k < n; ++k) pos[order[k]] = k;
  std::vector<Subset> down(n, Subset(n));
  for (Elem k = 0; k < n; ++k) {
    p.down(order[k]).for_each([&](Elem y) { down[k].insert(pos[y]); });
  }
  return FinitePoset::from_down_sets(p.name(), std::move(names), std::move(down));
}

/// Sub-poset induced on the members of `keep`, in increasing element order.
inline FinitePoset induced(const FinitePoset& p, const Subset& keep, std::string name = {}) {
  auto elems = keep.elements();
  std::vector<std::string> names;
  std::vector<Subset> down(elems.size(), Subset(elems.size()));
  for (Elem i = 0; i < elems.size(); ++i) {
    names.push_back(p.label(elems[i]));
    for (Elem j = 0; j < elems.size(); ++j) {
      if (p.leq(elems[j], elems[i])) down[i].insert(j);
    }
  }
  return FinitePoset::from_down_sets(std::move(name), std::move(names), std::move(down));
}

// ---------------------------------------------------------------------------
// Isomorphism

/// A bijection between the elements of two posets preserving <= both ways.
struct IsoWitness {
  std::vector<Elem> mapping;

  IsoWitness inverse() const {
    IsoWitness inv{std::vector<Elem>(mapping.size())};
    for (Elem x = 0; x < mapping.size(); ++x) inv.mapping[mapping[x]] = x;
    return inv;
  }
  friend bool operator==(const IsoWitness&, const IsoWitness&) = default;
};

/// Length of the longest chain ending in each element (minimal elements: 0).
inline std::vector<std::size_t> heights(const FinitePoset& p) {
  std::vector<Elem> order(p.size());
  std::iota(order.begin(), order.end(), Elem{0});
  std::sort(order.begin(), order.end(),
            [&](Elem a, Elem b) { return p.down(a).count() < p.down(b).count(); });
  std::vector<std::size_t> h(p.size(), 0);
  for (Elem x : order) {
    p.down(x).for_each([&](Elem y) {
      if (y != x) h[x] = std::max(h[x], h[y] + 1);
    });
  }
  return h;
}

/// Per-element isomorphism invariant: (height, |down-set|, |up-set|).
inline std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> element_signatures(
    const FinitePoset& p) {
  auto h = heights(p);
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> sig(p.size());
  for (Elem x = 0; x < p.size(); ++x) sig[x] = {h[x], p.down(x).count(), p.up(x).count()};
  return sig;
}

inline bool is_iso_witness(const FinitePoset& p, const FinitePoset& q, const IsoWitness& w) {
  if (p.size() != q.size() || w.mapping.size() != p.size()) return false;
  std::vector<bool> used(q.size(), false);
  for (Elem x : w.mapping) {
    if (x >= q.size() || used[x]) return false;
    used[x] = true;
  }
  for (Elem a = 0; a < p.size(); ++a) {
    for (Elem b = 0; b < p.size(); ++b) {
      if (p.leq(a, b) != q.leq(w.mapping[a], w.mapping[b])) return false;
    }
  }
  return true;
}

/// Finds an isomorphism P -> Q extending the given pinned pairs (p, q), or
/// nothing. Backtracking over candidates with matching signatures.
inline std::optional<IsoWitness> find_isomorphism(const FinitePoset& p, const FinitePoset& q,
                                                  std::span<const std::pair<Elem, Elem>> pinned = {}) {
  const std::size_t n = p.size();
  if (q.size() != n) return std::nullopt;
  auto sp = element_signatures(p);
  auto sq = element_signatures(q);
  {
    auto a = sp, b = sq;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) return std::nullopt;
  }
  constexpr Elem kUnset = static_cast<Elem>(-1);
  std::vector<Elem> map(n, kUnset);
  std::vector<bool> used(n, false);
  for (auto [a, b] : pinned) {
    if (a >= n || b >= n || sp[a] != sq[b]) return std::nullopt;
    if (map[a] != kUnset && map[a] != b) return std::nullopt;
    if (map[a] == kUnset && used[b]) return std::nullopt;
    map[a] = b;
    used[b] = true;
  }
  auto consistent = [&](Elem a, Elem b) {
    for (Elem x = 0; x < n; ++x) {
      if (map[x] == kUnset || x == a) continue;
      if (p.leq(x, a) != q.leq(map[x], b) || p.leq(a, x) != q.leq(b, map[x])) return false;
    }
    return true;
  };
  for (auto [a, b] : pinned) {
    if (!consistent(a, b)) return std::nullopt;
  }
  std::vector<Elem> todo;
  for (Elem x = 0; x < n; ++x) {
    if (map[x] == kUnset) todo.push_back(x);
  }
  std::sort(todo.begin(), todo.end(), [&](Elem a, Elem b) { return sp[a] < sp[b]; });

  auto search = [&](auto&& self, std::size_t k) -> bool {
    if (k == todo.size()) return true;
    Elem a = todo[k];
    for (Elem b = 0; b < n; ++b) {
      if (used[b] || sq[b] != sp[a] || !consistent(a, b)) continue;
      map[a] = b;
      used[b] = true;
      if (self(self, k + 1)) return true;
      map[a] = kUnset;
      used[b] = false;
    }
    return false;
  };
  if (!search(search, 0)) return std::nullopt;
  return IsoWitness{map};
}

inline std::optional<IsoWitness> is_isomorphic(const FinitePoset& p, const FinitePoset& q) {
  return find_isomorphism(p, q);
}

}  // namespace ordkit
