#pragma once

#include <algorithm>
#include <deque>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ordkit/error.hpp"
#include "ordkit/poset.hpp"
#include "ordkit/report.hpp"
#include "ordkit/secpsc.hpp"

namespace ordkit {

/// An equivalence relation on {0..n-1}, stored as a class id per element.
/// Class ids are normalised: contiguous from 0, numbered in order of first
/// occurrence, so equal relations compare equal.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<std::size_t> class_of) : class_of_(std::move(class_of)) {
    normalise();
  }

  static Partition identity(std::size_t n) {
    std::vector<std::size_t> c(n);
    std::iota(c.begin(), c.end(), std::size_t{0});
    return Partition(std::move(c));
  }
  static Partition total(std::size_t n) { return Partition(std::vector<std::size_t>(n, 0)); }

  /// Builds a partition from explicit classes; every element must appear once.
  static Partition from_classes(std::size_t n, const std::vector<std::vector<Elem>>& classes) {
    constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> c(n, kUnset);
    for (std::size_t k = 0; k < classes.size(); ++k) {
      for (Elem x : classes[k]) {
        if (x >= n) throw InputError("partition element out of range");
        if (c[x] != kUnset) throw InputError("partition lists an element twice");
        c[x] = k;
      }
    }
    if (std::find(c.begin(), c.end(), kUnset) != c.end()) {
      throw InputError("partition does not cover every element");
    }
    return Partition(std::move(c));
  }

  std::size_t size() const noexcept { return class_of_.size(); }
  std::size_t class_of(Elem x) const { return class_of_.at(x); }
  const std::vector<std::size_t>& class_ids() const noexcept { return class_of_; }
  bool same(Elem x, Elem y) const { return class_of_.at(x) == class_of_.at(y); }
  std::size_t class_count() const noexcept { return count_; }

  Subset members(std::size_t cls) const {
    Subset s(size());
    for (Elem x = 0; x < size(); ++x) {
      if (class_of_[x] == cls) s.insert(x);
    }
    return s;
  }
  std::vector<Subset> classes() const {
    std::vector<Subset> out(count_, Subset(size()));
    for (Elem x = 0; x < size(); ++x) out[class_of_[x]].insert(x);
    return out;
  }

  bool is_identity() const noexcept { return count_ == size(); }
  bool is_total() const noexcept { return count_ <= 1; }

  /// Every pair identified here is identified in `other`.
  bool refines(const Partition& other) const {
    for (Elem x = 0; x < size(); ++x) {
      for (Elem y = x + 1; y < size(); ++y) {
        if (same(x, y) && !other.same(x, y)) return false;
      }
    }
    return true;
  }

  friend bool operator==(const Partition& a, const Partition& b) { return a.class_of_ == b.class_of_; }
  friend auto operator<=>(const Partition& a, const Partition& b) { return a.class_of_ <=> b.class_of_; }

 private:
  void normalise() {
    std::vector<std::size_t> ids;
    for (auto& c : class_of_) {
      auto it = std::find(ids.begin(), ids.end(), c);
      if (it == ids.end()) {
        ids.push_back(c);
        c = ids.size() - 1;
      } else {
        c = static_cast<std::size_t>(it - ids.begin());
      }
    }
    count_ = ids.size();
  }

  std::vector<std::size_t> class_of_;
  std::size_t count_ = 0;
};

namespace detail {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  explicit UnionFind(const Partition& p) : UnionFind(p.size()) {
    std::vector<std::optional<Elem>> first(p.class_count());
    for (Elem x = 0; x < p.size(); ++x) {
      auto& f = first[p.class_of(x)];
      if (f) {
        parent_[x] = *f;
      } else {
        f = x;
      }
    }
  }
  Elem find(Elem x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  bool unite(Elem a, Elem b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[std::max(a, b)] = std::min(a, b);
    return true;
  }
  Partition partition() {
    std::vector<std::size_t> c(parent_.size());
    for (Elem x = 0; x < c.size(); ++x) c[x] = find(x);
    return Partition(std::move(c));
  }

 private:
  std::vector<Elem> parent_;
};

/// Closes the union-find state under compatibility with *, starting from
/// the pairs already queued.
inline void close_under_operation(const SectionTable& t, UnionFind& uf,
                                  std::deque<std::pair<Elem, Elem>> work) {
  const std::size_t n = t.size();
  while (!work.empty()) {
    auto [x, y] = work.front();
    work.pop_front();
    for (Elem z = 0; z < n; ++z) {
      const std::pair<Elem, Elem> next[] = {{t(x, z), t(y, z)}, {t(z, x), t(z, y)}};
      for (auto [u, v] : next) {
        if (uf.unite(u, v)) work.emplace_back(u, v);
      }
    }
  }
}

inline void require_total(const SectionTable& t, const char* who) {
  if (!t.fully_defined()) throw PreconditionError(std::string(who) + " requires a total * table");
}

}  // namespace detail

struct CheckResult {
  bool ok = true;
  std::vector<Elem> witness;
  explicit operator bool() const noexcept { return ok; }
};

/// x = y implies x*z = y*z and z*x = z*y. Witness: (x, y, z).
inline CheckResult is_congruence(const SectionTable& t, const Partition& part) {
  detail::require_total(t, "is_congruence");
  if (part.size() != t.size()) throw InputError("partition size does not match the poset");
  const std::size_t n = t.size();
  for (Elem x = 0; x < n; ++x) {
    for (Elem y = x + 1; y < n; ++y) {
      if (!part.same(x, y)) continue;
      for (Elem z = 0; z < n; ++z) {
        if (!part.same(t(x, z), t(y, z)) || !part.same(t(z, x), t(z, y))) return {false, {x, y, z}};
      }
    }
  }
  return {};
}

/// Least congruence identifying a and b (union-find closure with a work queue).
inline Partition principal_congruence(const SectionTable& t, Elem a, Elem b) {
  detail::require_total(t, "principal_congruence");
  detail::UnionFind uf(t.size());
  std::deque<std::pair<Elem, Elem>> work;
  if (uf.unite(a, b)) work.emplace_back(a, b);
  detail::close_under_operation(t, uf, std::move(work));
  return uf.partition();
}

/// Join of two congruences in Con(P,*).
inline Partition congruence_join(const SectionTable& t, const Partition& x, const Partition& y) {
  detail::UnionFind uf(x);
  std::deque<std::pair<Elem, Elem>> work;
  for (Elem a = 0; a < y.size(); ++a) {
    for (Elem b = a + 1; b < y.size(); ++b) {
      if (y.same(a, b) && uf.unite(a, b)) work.emplace_back(a, b);
    }
  }
  detail::close_under_operation(t, uf, std::move(work));
  return uf.partition();
}

/// Meet (intersection) of two equivalence relations.
inline Partition partition_meet(const Partition& x, const Partition& y) {
  std::vector<std::size_t> c(x.size());
  for (Elem e = 0; e < x.size(); ++e) c[e] = x.class_of(e) * (y.class_count() + 1) + y.class_of(e);
  return Partition(std::move(c));
}

/// Every congruence of (P,*), sorted. Built as the join-closure of the
/// principal congruences together with the identity.
inline std::vector<Partition> all_congruences(const SectionTable& t, std::size_t size_cap = 16) {
  detail::require_total(t, "all_congruences");
  if (t.size() > size_cap) {
    throw SizeCapExceeded("congruence enumeration is capped at " + std::to_string(size_cap) +
                          " elements");
  }
  const std::size_t n = t.size();
  std::set<Partition> found{Partition::identity(n)};
  std::vector<Partition> principals;
  for (Elem a = 0; a < n; ++a) {
    for (Elem b = a + 1; b < n; ++b) {
      auto p = principal_congruence(t, a, b);
      if (found.insert(p).second) principals.push_back(std::move(p));
    }
  }
  std::vector<Partition> work = principals;
  while (!work.empty()) {
    Partition cur = std::move(work.back());
    work.pop_back();
    for (const auto& p : principals) {
      if (p.refines(cur)) continue;
      auto j = congruence_join(t, cur, p);
      if (found.insert(j).second) work.push_back(std::move(j));
    }
  }
  return {found.begin(), found.end()};
}

/// No a < b < c with a = c but a != b. Witness: (a, b, c).
inline CheckResult is_convex(const FinitePoset& p, const Partition& part) {
  const std::size_t n = p.size();
  for (Elem a = 0; a < n; ++a) {
    for (Elem c = 0; c < n; ++c) {
      if (!p.lt(a, c) || !part.same(a, c)) continue;
      for (Elem b = 0; b < n; ++b) {
        if (p.lt(a, b) && p.lt(b, c) && !part.same(a, b)) return {false, {a, b, c}};
      }
    }
  }
  return {};
}

/// Greatest element of each class, or ClassWithoutGreatest.
inline std::vector<Elem> class_maxima(const FinitePoset& p, const Partition& part) {
  std::vector<Elem> out;
  for (const auto& cls : part.classes()) {
    auto g = greatest(p, cls);
    if (!g) throw ClassWithoutGreatest("congruence class has no greatest element", p.labels_of(cls.elements()));
    out.push_back(*g);
  }
  return out;
}

/// Strong: for class-greatest a and b, a*b is the greatest of its class.
/// Witness: (a, b).
inline CheckResult is_strong(const FinitePoset& p, const SectionTable& t, const Partition& part) {
  detail::require_total(t, "is_strong");
  const auto maxima = class_maxima(p, part);
  for (Elem a : maxima) {
    for (Elem b : maxima) {
      const Elem ab = t(a, b);
      if (maxima[part.class_of(ab)] != ab) return {false, {a, b}};
    }
  }
  return {};
}

/// P/Theta with [x] <=' [y] iff x*y = 1 (mod Theta). The induced operation
/// is present only for strong congruences.
struct QuotientStructure {
  FinitePoset poset;
  Partition partition;
  std::optional<std::vector<std::vector<std::size_t>>> star;
  std::size_t one_class = 0;
  /// Compatibility checks: "order-preserving" (a <= b gives [a] <=' [b]) and
  /// "lifting" ([a] <=' [b] gives some d in [b] with a <= d).
  PropertyReport compatibility;
};

/// Display label of a class, e.g. "{a,b}".
inline std::string class_label(const FinitePoset& p, const Subset& cls) {
  std::string s = "{";
  bool first = true;
  cls.for_each([&](Elem x) {
    if (!first) s += ",";
    s += p.label(x);
    first = false;
  });
  return s + "}";
}

inline QuotientStructure quotient(const FinitePoset& p, const SectionTable& t, const Partition& part) {
  if (part.size() != p.size()) throw InputError("partition size does not match the poset");
  const auto cls = classify(p, t);
  if (!cls.is_strongly_sec_pc) {
    throw NotStronglySecPc("quotient requires a strongly sectionally pseudocomplemented poset");
  }
  if (auto c = is_congruence(t, part); !c) {
    throw NotCongruence("partition is not compatible with *", p.labels_of(c.witness));
  }
  if (auto c = is_convex(p, part); !c) {
    throw NotConvex("congruence has a non-convex class", p.labels_of(c.witness));
  }
  const std::size_t k = part.class_count();
  const Elem one = *t.top();
  const std::size_t one_class = part.class_of(one);
  const auto classes = part.classes();
  std::vector<Elem> rep(k);
  for (std::size_t c = 0; c < k; ++c) rep[c] = classes[c].elements().front();

  std::vector<Subset> down(k, Subset(k));
  for (std::size_t x = 0; x < k; ++x) {
    for (std::size_t y = 0; y < k; ++y) {
      if (part.class_of(t(rep[x], rep[y])) == one_class) down[y].insert(x);
    }
  }
  std::vector<std::string> names;
  for (const auto& c : classes) names.push_back(class_label(p, c));
  QuotientStructure q{FinitePoset::from_down_sets(p.name().empty() ? "" : p.name() + "_quotient",
                                                  std::move(names), std::move(down)),
                      part, std::nullopt, one_class, PropertyReport{"quotient compatibility"}};

  q.compatibility.items.reserve(2);
  auto& mono = q.compatibility.add("order-preserving");
  auto& lift = q.compatibility.add("lifting");
  for (Elem a = 0; a < p.size(); ++a) {
    for (Elem b = 0; b < p.size(); ++b) {
      const std::size_t ca = part.class_of(a), cb = part.class_of(b);
      ++mono.checked;
      if (p.leq(a, b) && !q.poset.leq(ca, cb)) mono.fail({a, b});
      if (q.poset.leq(ca, cb)) {
        ++lift.checked;
        if ((p.up(a) & classes[cb]).empty()) lift.fail({a, b});
      }
    }
  }

  if (is_strong(p, t, part)) {
    const auto maxima = class_maxima(p, part);
    std::vector<std::vector<std::size_t>> star(k, std::vector<std::size_t>(k));
    for (std::size_t x = 0; x < k; ++x) {
      for (std::size_t y = 0; y < k; ++y) star[x][y] = part.class_of(t(maxima[x], maxima[y]));
    }
    q.star = std::move(star);
  }
  return q;
}

// ---------------------------------------------------------------------------
// Instance checks over all congruences

/// For a strongly sectionally pseudocomplemented poset with 1: every
/// congruence is convex, every class is up-directed via (b*c)*c and has a
/// greatest element, and Theta(b*a, 1) = Theta(a, b) for a <= b. Also notes,
/// without asserting, which pairs meet the hypothesis of the infinite-case
/// convexity criterion and whether Theta(x, y) is total for them.
inline PropertyReport verify_section3(const FinitePoset& p) {
  const SectionTable t(p);
  const auto cls = classify(p, t);
  if (!cls.is_strongly_sec_pc) {
    throw PreconditionError("verify_section3 requires a strongly sectionally pseudocomplemented poset");
  }
  const Elem one = *t.top();
  const std::size_t n = p.size();
  PropertyReport r{"congruence properties"};
  r.items.reserve(4);
  auto& convex = r.add("convex");
  auto& directed = r.add("up-directed");
  auto& greatest_el = r.add("class-greatest");
  auto& principal = r.add("principal");

  for (const auto& theta : all_congruences(t)) {
    ++convex.checked;
    if (auto c = is_convex(p, theta); !c) convex.fail(c.witness);
    for (const auto& c : theta.classes()) {
      ++greatest_el.checked;
      if (!greatest(p, c)) greatest_el.fail(c.elements());
      c.for_each([&](Elem b) {
        c.for_each([&](Elem d) {
          ++directed.checked;
          const Elem w = t(t(b, d), d);
          if (!c.contains(w) || !p.leq(b, w) || !p.leq(d, w)) directed.fail({b, d});
        });
      });
    }
  }
  for (Elem a = 0; a < n; ++a) {
    for (Elem b = 0; b < n; ++b) {
      if (!p.leq(a, b)) continue;
      ++principal.checked;
      if (principal_congruence(t, t(b, a), one) != principal_congruence(t, a, b)) {
        principal.fail({a, b}, "Theta(b*a,1) != Theta(a,b)");
      }
    }
  }
  for (Elem x = 0; x < n; ++x) {
    for (Elem y = 0; y < n; ++y) {
      if (!p.lt(x, y) || !p.lt(y, one)) continue;
      const bool covered = (p.up(x) & p.down(y)).count() == 2;
      if (covered || !p.lt(x, t(y, x))) continue;
      const bool total = principal_congruence(t, x, y).is_total();
      r.notes.push_back("Theta(" + p.label(x) + "," + p.label(y) + ") " +
                        (total ? "is" : "is not") + " total");
    }
  }
  return r;
}

/// Mal'cev term p(x,y,z) = ((x*y)*z) ^ ((z*y)*x) with p(x,x,y) = y = p(y,x,x);
/// t1 = x*y, t2 = y*x both 1 iff x = y; and congruences with equal 1-classes
/// coincide.
inline PropertyReport verify_maltsev_weakreg(const FinitePoset& p) {
  if (!is_lattice(p)) throw PreconditionError("verify_maltsev_weakreg requires a lattice");
  const SectionTable t(p);
  if (!t.fully_defined() || !t.top()) {
    throw PreconditionError("verify_maltsev_weakreg requires a sectionally pseudocomplemented lattice with 1");
  }
  const std::size_t n = p.size();
  const Elem one = *t.top();
  auto maltsev = [&](Elem x, Elem y, Elem z) { return *meet(p, t(t(x, y), z), t(t(z, y), x)); };
  PropertyReport r{"congruence term identities"};
  r.items.reserve(3);
  auto& perm = r.add("maltsev");
  auto& terms = r.add("t1-t2");
  auto& weak = r.add("weak-regularity");
  for (Elem x = 0; x < n; ++x) {
    for (Elem y = 0; y < n; ++y) {
      ++perm.checked;
      if (maltsev(x, x, y) != y || maltsev(y, x, x) != y) perm.fail({x, y});
      ++terms.checked;
      if ((t(x, y) == one && t(y, x) == one) != (x == y)) terms.fail({x, y});
    }
  }
  const auto cons = all_congruences(t);
  for (std::size_t i = 0; i < cons.size(); ++i) {
    for (std::size_t j = i + 1; j < cons.size(); ++j) {
      ++weak.checked;
      if (cons[i].members(cons[i].class_of(one)) == cons[j].members(cons[j].class_of(one))) {
        weak.fail({}, "distinct congruences share the 1-class");
      }
    }
  }
  return r;
}

}  // namespace ordkit
