#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ordkit/error.hpp"
#include "ordkit/poset.hpp"
#include "ordkit/report.hpp"

namespace ordkit {

/// Why a sectional pseudocomplement may be missing.
enum class Absence { none, no_satisfier, no_greatest };

struct SecPcResult {
  std::optional<Elem> value;
  Subset satisfiers;

  Absence absence() const {
    if (value) return Absence::none;
    return satisfiers.empty() ? Absence::no_satisfier : Absence::no_greatest;
  }
};

/// All c with L(U(a,b), c) = L(b), and their greatest element if it exists.
inline SecPcResult sec_pc_detail(const FinitePoset& p, Elem a, Elem b) {
  const Subset lu = lower_cone(p, upper_cone(p, p.subset({a, b})));
  Subset sat = p.none();
  for (Elem c = 0; c < p.size(); ++c) {
    if ((lu & p.down(c)) == p.down(b)) sat.insert(c);
  }
  return {greatest(p, sat), sat};
}

/// Sectional pseudocomplement a*b: the greatest c with L(U(a,b), c) = L(b).
inline std::optional<Elem> sec_pc(const FinitePoset& p, Elem a, Elem b) {
  return sec_pc_detail(p, a, b).value;
}

/// Relative pseudocomplement: the greatest d with L(a,d) contained in L(b).
inline std::optional<Elem> rel_pc(const FinitePoset& p, Elem a, Elem b) {
  Subset sat = p.none();
  for (Elem d = 0; d < p.size(); ++d) {
    if ((p.down(a) & p.down(d)).is_subset_of(p.down(b))) sat.insert(d);
  }
  return greatest(p, sat);
}

/// The (partial) operation table of * over a poset.
class SectionTable {
 public:
  SectionTable() = default;
  explicit SectionTable(FinitePoset base)
      : base_(std::move(base)),
        star_(base_.size() * base_.size()),
        top_(ordkit::top(base_)) {
    const std::size_t n = base_.size();
    for (Elem a = 0; a < n; ++a) {
      for (Elem b = 0; b < n; ++b) star_[a * n + b] = sec_pc(base_, a, b);
    }
  }

  const FinitePoset& base() const noexcept { return base_; }
  std::size_t size() const noexcept { return base_.size(); }
  std::optional<Elem> top() const noexcept { return top_; }

  bool defined(Elem a, Elem b) const { return star_[a * size() + b].has_value(); }
  std::optional<Elem> value(Elem a, Elem b) const { return star_[a * size() + b]; }
  /// a*b; throws PreconditionError when undefined.
  Elem at(Elem a, Elem b) const {
    const auto& v = star_[a * size() + b];
    if (!v) {
      throw PreconditionError("a*b is undefined", {base_.label(a), base_.label(b)});
    }
    return *v;
  }
  Elem operator()(Elem a, Elem b) const { return at(a, b); }

  bool fully_defined() const {
    for (const auto& v : star_) {
      if (!v) return false;
    }
    return true;
  }

  /// Raises PreconditionError unless the table is total and has a top.
  void require_total_with_top(const std::string& who) const {
    if (!top_) throw PreconditionError(who + " requires a greatest element");
    for (Elem a = 0; a < size(); ++a) {
      for (Elem b = 0; b < size(); ++b) {
        if (!defined(a, b)) {
          throw PreconditionError(who + " requires a total * table",
                                  {base_.label(a), base_.label(b)});
        }
      }
    }
  }

 private:
  FinitePoset base_;
  std::vector<std::optional<Elem>> star_;
  std::optional<Elem> top_;
};

inline SectionTable sec_table(const FinitePoset& p) { return SectionTable(p); }

// ---------------------------------------------------------------------------
// Classification

struct ClassificationReport {
  bool is_sec_pc = false;
  bool is_strongly_sec_pc = false;
  bool is_rel_pc = false;
  bool is_lattice = false;
  bool has_top = false;
  /// First counterexample per failed property. Property names:
  /// "sec_pc:no-satisfier", "sec_pc:no-greatest", "strong", "rel_pc",
  /// "lattice", "top".
  std::vector<Witness> witnesses;

  const Witness* witness(const std::string& property) const {
    for (const auto& w : witnesses) {
      if (w.property == property) return &w;
    }
    return nullptr;
  }
};

inline ClassificationReport classify(const FinitePoset& p, const SectionTable& t) {
  ClassificationReport r;
  const std::size_t n = p.size();
  auto topel = top(p);
  r.has_top = topel.has_value();
  if (!r.has_top) r.witnesses.push_back({"top", {}});

  r.is_sec_pc = true;
  for (Elem a = 0; a < n && r.is_sec_pc; ++a) {
    for (Elem b = 0; b < n && r.is_sec_pc; ++b) {
      if (t.defined(a, b)) continue;
      r.is_sec_pc = false;
      auto why = sec_pc_detail(p, a, b).absence() == Absence::no_satisfier ? "sec_pc:no-satisfier"
                                                                           : "sec_pc:no-greatest";
      r.witnesses.push_back({why, {a, b}});
    }
  }

  if (r.is_sec_pc && r.has_top) {
    r.is_strongly_sec_pc = true;
    for (Elem x = 0; x < n && r.is_strongly_sec_pc; ++x) {
      for (Elem y = 0; y < n && r.is_strongly_sec_pc; ++y) {
        if (!p.leq(x, t.at(t.at(x, y), y))) {
          r.is_strongly_sec_pc = false;
          r.witnesses.push_back({"strong", {x, y}});
        }
      }
    }
  }

  r.is_rel_pc = true;
  for (Elem a = 0; a < n && r.is_rel_pc; ++a) {
    for (Elem b = 0; b < n && r.is_rel_pc; ++b) {
      if (!rel_pc(p, a, b)) {
        r.is_rel_pc = false;
        r.witnesses.push_back({"rel_pc", {a, b}});
      }
    }
  }

  r.is_lattice = true;
  for (Elem a = 0; a < n && r.is_lattice; ++a) {
    for (Elem b = a + 1; b < n && r.is_lattice; ++b) {
      if (!join(p, a, b) || !meet(p, a, b)) {
        r.is_lattice = false;
        r.witnesses.push_back({"lattice", {a, b}});
      }
    }
  }
  return r;
}

inline ClassificationReport classify(const FinitePoset& p) { return classify(p, sec_table(p)); }

/// First (x, y, z) with x <= y but z*x not <= z*y, if any.
inline std::optional<std::vector<Elem>> second_argument_nonmonotone(const SectionTable& t) {
  const auto& p = t.base();
  for (Elem x = 0; x < p.size(); ++x) {
    for (Elem y = 0; y < p.size(); ++y) {
      if (!p.leq(x, y)) continue;
      for (Elem z = 0; z < p.size(); ++z) {
        auto zx = t.value(z, x), zy = t.value(z, y);
        if (zx && zy && !p.leq(*zx, *zy)) return std::vector<Elem>{x, y, z};
      }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Properties of * over a total table with 1

inline PropertyReport verify_theorem2(const SectionTable& t) {
  t.require_total_with_top("verify_theorem2");
  const auto& p = t.base();
  const std::size_t n = p.size();
  const Elem one = *t.top();
  PropertyReport r{"sectional pseudocomplement identities"};
  r.items.reserve(8);

  auto& i1 = r.add("i");
  auto& i2 = r.add("ii");
  auto& i3 = r.add("iii");
  auto& i4 = r.add("iv");
  auto& i5 = r.add("v");
  auto& i6 = r.add("vi");
  auto& i7 = r.add("vii");
  auto& i8 = r.add("viii");

  for (Elem x = 0; x < n; ++x) {
    ++i2.checked;
    if (t(x, x) != one || t(x, one) != one) i2.fail({x}, "x*x = x*1 = 1");
    ++i3.checked;
    if (t(one, x) != x) i3.fail({x}, "1*x = x");
    for (Elem y = 0; y < n; ++y) {
      ++i1.checked;
      if (p.leq(x, y) != (t(x, y) == one)) i1.fail({x, y}, "x <= y iff x*y = 1");
      ++i4.checked;
      if (t(x, t(y, x)) != one) i4.fail({x, y}, "x*(y*x) = 1");
      ++i5.checked;
      if (t(x, t(t(y, x), x)) != one) i5.fail({x, y}, "x*((y*x)*x) = 1");
      if (t(x, y) == one || t(y, x) == one) {
        ++i6.checked;
        if (t(x, t(t(x, y), y)) != one) i6.fail({x, y}, "x*((x*y)*y) = 1 on comparable pairs");
      }
      ++i8.checked;
      const Subset lhs = lower_cone(p, upper_cone(p, p.subset({x, y})).with(t(x, y)));
      if (lhs != p.down(y)) i8.fail({x, y}, "L(U(x,y), x*y) = L(y)");
      if (t(x, y) == one) {
        for (Elem z = 0; z < n; ++z) {
          ++i7.checked;
          if (t(t(y, z), t(x, z)) != one) i7.fail({x, y, z}, "x*y = 1 implies (y*z)*(x*z) = 1");
        }
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Groupoid axiomatisation

/// A total binary table on n named elements with a designated constant.
struct GroupoidTable {
  std::vector<std::string> names;
  std::vector<std::vector<Elem>> star;
  Elem one = 0;
};

/// Reads a poset off a groupoid (A, *, 1) satisfying the five axioms, with
/// x <= y iff x*y = 1. Throws AxiomViolation naming the first failed axiom.
inline FinitePoset recover_from_groupoid(const GroupoidTable& g, std::string name = {}) {
  const std::size_t n = g.names.size();
  if (g.star.size() != n || g.one >= n) throw InputError("groupoid table has the wrong shape");
  for (const auto& row : g.star) {
    if (row.size() != n) throw InputError("groupoid table has the wrong shape");
    for (Elem v : row) {
      if (v >= n) throw InputError("groupoid table value out of range");
    }
  }
  auto op = [&](Elem x, Elem y) { return g.star[x][y]; };
  const Elem one = g.one;
  auto labels = [&](std::initializer_list<Elem> xs) {
    std::vector<std::string> out;
    for (Elem x : xs) out.push_back(g.names[x]);
    return out;
  };
  // Cones expressed through *.
  auto lower = [&](const Subset& b) {
    Subset out(n);
    for (Elem x = 0; x < n; ++x) {
      bool ok = true;
      b.for_each([&](Elem y) { ok = ok && op(x, y) == one; });
      if (ok) out.insert(x);
    }
    return out;
  };
  auto upper = [&](const Subset& b) {
    Subset out(n);
    for (Elem x = 0; x < n; ++x) {
      bool ok = true;
      b.for_each([&](Elem y) { ok = ok && op(y, x) == one; });
      if (ok) out.insert(x);
    }
    return out;
  };

  for (Elem x = 0; x < n; ++x) {
    if (op(x, x) != one) throw AxiomViolation("i", labels({x}));
  }
  for (Elem x = 0; x < n; ++x) {
    for (Elem y = 0; y < n; ++y) {
      if (x != y && op(x, y) == one && op(y, x) == one) throw AxiomViolation("ii", labels({x, y}));
    }
  }
  for (Elem x = 0; x < n; ++x) {
    for (Elem y = 0; y < n; ++y) {
      if (op(x, y) != one) continue;
      for (Elem z = 0; z < n; ++z) {
        if (op(y, z) == one && op(x, z) != one) throw AxiomViolation("iii", labels({x, y, z}));
      }
    }
  }
  for (Elem x = 0; x < n; ++x) {
    for (Elem y = 0; y < n; ++y) {
      const Subset uxy = upper(Subset(n, {x, y}));
      const Subset ly = lower(Subset(n, {y}));
      if (lower(uxy.with(op(x, y))) != ly) throw AxiomViolation("iv", labels({x, y}));
      for (Elem z = 0; z < n; ++z) {
        if (lower(uxy.with(z)) == ly && op(z, op(x, y)) != one) {
          throw AxiomViolation("v", labels({x, y, z}));
        }
      }
    }
  }

  std::vector<Subset> down(n, Subset(n));
  for (Elem x = 0; x < n; ++x) {
    for (Elem y = 0; y < n; ++y) {
      if (op(x, y) == one) down[y].insert(x);
    }
  }
  FinitePoset p = FinitePoset::from_down_sets(std::move(name), g.names, std::move(down));
  const SectionTable t(p);
  for (Elem x = 0; x < n; ++x) {
    for (Elem y = 0; y < n; ++y) {
      if (t.value(x, y) != op(x, y)) {
        throw std::logic_error("recovered poset does not reproduce the groupoid table");
      }
    }
  }
  return p;
}

/// The groupoid (P, *, 1) of a total table with top.
inline GroupoidTable to_groupoid(const SectionTable& t) {
  t.require_total_with_top("to_groupoid");
  GroupoidTable g{t.base().names(), {}, *t.top()};
  g.star.assign(t.size(), std::vector<Elem>(t.size()));
  for (Elem a = 0; a < t.size(); ++a) {
    for (Elem b = 0; b < t.size(); ++b) g.star[a][b] = t(a, b);
  }
  return g;
}

// ---------------------------------------------------------------------------
// Lattice identities

/// In a lattice: (x v y) ^ (x*y) = y and z v y <= x*((x v y) ^ (z v y)), and
/// conversely the lattice-defined pseudocomplement (greatest c with
/// (a v b) ^ c = b) agrees with the table.
inline PropertyReport verify_lattice_identities(const FinitePoset& p) {
  if (!is_lattice(p)) throw PreconditionError("verify_lattice_identities requires a lattice");
  const SectionTable t(p);
  if (!t.fully_defined()) {
    throw PreconditionError("verify_lattice_identities requires a sectionally pseudocomplemented lattice");
  }
  const std::size_t n = p.size();
  auto jn = [&](Elem a, Elem b) { return *join(p, a, b); };
  auto mt = [&](Elem a, Elem b) { return *meet(p, a, b); };
  PropertyReport r{"lattice identities"};
  r.items.reserve(3);
  auto& absorb = r.add("ii");
  auto& bound = r.add("i");
  auto& converse = r.add("converse");
  for (Elem x = 0; x < n; ++x) {
    for (Elem y = 0; y < n; ++y) {
      ++absorb.checked;
      if (mt(jn(x, y), t(x, y)) != y) absorb.fail({x, y}, "(x v y) ^ (x*y) = y");
      for (Elem z = 0; z < n; ++z) {
        ++bound.checked;
        if (!p.leq(jn(z, y), t(x, mt(jn(x, y), jn(z, y))))) {
          bound.fail({x, y, z}, "z v y <= x*((x v y) ^ (z v y))");
        }
      }
      ++converse.checked;
      Subset sat = p.none();
      for (Elem c = 0; c < n; ++c) {
        if (mt(jn(x, y), c) == y) sat.insert(c);
      }
      if (greatest(p, sat) != t.value(x, y)) converse.fail({x, y}, "lattice pseudocomplement differs");
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Complete L-semidistributivity

struct SemidistributivityResult {
  bool holds = true;
  Subset m;  // counterexample set M
  Elem a = 0;
  Elem b = 0;
};

/// Checks: for nonempty M and a, b with L(x,a) = L(b) for all x in M,
/// L(U(M), a) = L(b). Exponential in the size of the poset; refuses posets
/// above `size_cap`.
inline SemidistributivityResult is_completely_L_semidistributive(const FinitePoset& p,
                                                                 std::size_t size_cap = 12) {
  if (p.size() > size_cap) {
    throw SizeCapExceeded("complete L-semidistributivity check is capped at " +
                          std::to_string(size_cap) + " elements");
  }
  const std::size_t n = p.size();
  for (Elem a = 0; a < n; ++a) {
    for (Elem b = 0; b < n; ++b) {
      // Only subsets of G = {x : L(x,a) = L(b)} satisfy the hypothesis.
      Subset g = p.none();
      for (Elem x = 0; x < n; ++x) {
        if ((p.down(x) & p.down(a)) == p.down(b)) g.insert(x);
      }
      const std::uint64_t gb = g.bits();
      for (std::uint64_t m = gb; m != 0; m = (m - 1) & gb) {
        const Subset ms = Subset::from_bits(n, m);
        if ((lower_cone(p, upper_cone(p, ms)) & p.down(a)) != p.down(b)) {
          return {false, ms, a, b};
        }
      }
    }
  }
  return {};
}

}  // namespace ordkit
