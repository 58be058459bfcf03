#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ordkit/completion.hpp"
#include "ordkit/congruence.hpp"
#include "ordkit/error.hpp"
#include "ordkit/poset.hpp"
#include "ordkit/secpsc.hpp"

namespace ordkit {

inline constexpr std::size_t kDefaultEnumerationCap = 7;
inline constexpr int kCensusVersion = 1;

/// Number of unlabeled posets on n = 0..7 elements.
inline constexpr std::array<std::size_t, 8> kKnownPosetCounts{1, 1, 2, 5, 16, 63, 318, 2045};

// ---------------------------------------------------------------------------
// Canonical form

/// `order[k]` is the element placed at position k; `code` lists, for each
/// position k and each earlier position j, the bits leq(j,k) and leq(k,j).
struct CanonicalForm {
  std::string code;
  std::vector<Elem> order;
};

/// Lexicographically least code over all orderings that sort elements by
/// their (height, |down|, |up|) signature. Equal codes iff isomorphic.
inline CanonicalForm canonical_form(const FinitePoset& p) {
  const std::size_t n = p.size();
  const auto sig = element_signatures(p);
  std::vector<Elem> sorted(n);
  for (Elem x = 0; x < n; ++x) sorted[x] = x;
  std::stable_sort(sorted.begin(), sorted.end(), [&](Elem a, Elem b) { return sig[a] < sig[b]; });

  CanonicalForm best;
  std::string cur;
  std::vector<Elem> order;
  std::vector<bool> used(n, false);
  bool have_best = false;

  auto dfs = [&](auto&& self, std::size_t k) -> void {
    if (k == n) {
      if (!have_best || cur < best.code) {
        best = {cur, order};
        have_best = true;
      }
      return;
    }
    for (Elem e : sorted) {
      if (used[e] || sig[e] != sig[sorted[k]]) continue;
      const std::size_t mark = cur.size();
      for (std::size_t j = 0; j < k; ++j) {
        cur += p.leq(order[j], e) ? '1' : '0';
        cur += p.leq(e, order[j]) ? '1' : '0';
      }
      if (!have_best || cur.compare(0, cur.size(), best.code, 0, cur.size()) <= 0) {
        used[e] = true;
        order.push_back(e);
        self(self, k + 1);
        order.pop_back();
        used[e] = false;
      }
      cur.resize(mark);
    }
  };
  dfs(dfs, 0);
  return best;
}

/// Poset with elements x0, x1, ... in canonical position order.
inline FinitePoset canonical_poset(const FinitePoset& p, const CanonicalForm& cf, std::string name = {}) {
  std::vector<std::string> names;
  for (std::size_t k = 0; k < p.size(); ++k) names.push_back("x" + std::to_string(k));
  FinitePoset q = permute(p, cf.order, std::move(names));
  q.set_name(std::move(name));
  return q;
}

/// Rebuilds the canonical poset from its code.
inline FinitePoset poset_from_code(std::size_t n, const std::string& code, std::string name = {}) {
  if (code.size() != n * (n - (n > 0 ? 1 : 0))) throw InputError("canonical code has the wrong length");
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
  std::size_t pos = 0;
  for (std::size_t k = 0; k < n; ++k) {
    leq[k][k] = true;
    for (std::size_t j = 0; j < k; ++j) {
      leq[j][k] = code[pos++] == '1';
      leq[k][j] = code[pos++] == '1';
    }
  }
  std::vector<std::string> names;
  for (std::size_t k = 0; k < n; ++k) names.push_back("x" + std::to_string(k));
  return FinitePoset::from_relation(std::move(name), std::move(names), leq);
}

// ---------------------------------------------------------------------------
// Enumeration

namespace detail {

inline std::vector<Subset> down_sets(const FinitePoset& p) {
  std::vector<Subset> out;
  const std::size_t n = p.size();
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    const Subset s = Subset::from_bits(n, m);
    if (is_down_set(p, s)) out.push_back(s);
  }
  return out;
}

}  // namespace detail

/// One representative per isomorphism class of n-element posets, in
/// canonical-code order. Level n extends each level n-1 representative by a
/// new maximal element above each of its down-sets.
inline std::vector<FinitePoset> enumerate_posets(std::size_t n, std::size_t cap = kDefaultEnumerationCap) {
  if (n > cap) {
    throw SizeCapExceeded("enumeration is capped at " + std::to_string(cap) + " elements");
  }
  std::map<std::string, FinitePoset> level;
  level.emplace("", FinitePoset::from_down_sets({}, {}, {}));
  for (std::size_t m = 1; m <= n; ++m) {
    std::map<std::string, FinitePoset> next;
    for (const auto& [code, q] : level) {
      for (const auto& d : detail::down_sets(q)) {
        std::vector<std::string> names = q.names();
        names.push_back("new");
        std::vector<Subset> down;
        for (Elem x = 0; x < q.size(); ++x) {
          Subset s(m);
          q.down(x).for_each([&](Elem y) { s.insert(y); });
          down.push_back(s);
        }
        Subset top_down(m);
        d.for_each([&](Elem y) { top_down.insert(y); });
        top_down.insert(m - 1);
        down.push_back(top_down);
        const auto p = FinitePoset::from_down_sets({}, std::move(names), std::move(down));
        auto cf = canonical_form(p);
        if (next.count(cf.code)) continue;
        next.emplace(cf.code, canonical_poset(p, cf));
      }
    }
    level = std::move(next);
  }
  std::vector<FinitePoset> out;
  std::size_t i = 0;
  for (auto& [code, p] : level) {
    p.set_name("P" + std::to_string(n) + "_" + std::to_string(i++));
    out.push_back(std::move(p));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Census

/// Census property ids: (a)-(h).
inline const std::vector<std::string>& census_property_ids() {
  static const std::vector<std::string> ids{"a", "b", "c", "d", "e", "f", "g", "h"};
  return ids;
}

struct CensusEntry {
  std::string code;
  FinitePoset poset;
  ClassificationReport classification;
  bool monotone_second_arg = true;
  /// Set for sectionally pseudocomplemented posets only.
  std::optional<bool> dm_preserves_secpc;
  /// Set when the table is total and has a top.
  std::optional<bool> all_congruences_convex;
  /// Properties (a)-(h) that applied to this poset.
  std::vector<std::string> applicable;
  /// Failures of (a)-(h), keyed by property id.
  std::vector<Witness> failures;
};

struct CensusTally {
  std::size_t applicable = 0;
  std::size_t failures = 0;
  /// First failing entry and its witness.
  std::optional<std::pair<std::size_t, Witness>> first;
};

struct Census {
  std::size_t n = 0;
  std::vector<CensusEntry> entries;
  std::map<std::string, CensusTally> tally;
  bool from_cache = false;

  bool all_properties_hold() const {
    for (const auto& [id, t] : tally) {
      if (t.failures) return false;
    }
    return true;
  }
};

namespace detail {

/// (h) is the only property whose hypothesis does not include sec-pc.
inline void check_relpc_lattice(const FinitePoset& p, const SectionTable& t, CensusEntry& e) {
  const auto& c = e.classification;
  if (!c.is_rel_pc || !c.is_lattice) return;
  e.applicable.push_back("h");
  if (!c.is_sec_pc) {
    e.failures.push_back({"h", {}});
    return;
  }
  for (Elem a = 0; a < p.size(); ++a) {
    for (Elem b = 0; b < p.size(); ++b) {
      if (rel_pc(p, *join(p, a, b), b) != t.value(a, b)) {
        e.failures.push_back({"h", {a, b}});
        return;
      }
    }
  }
}

}  // namespace detail

/// Evaluates classification, derived flags and properties (a)-(h) on one poset.
inline CensusEntry census_entry(const FinitePoset& p) {
  CensusEntry e;
  e.poset = p;
  e.code = canonical_form(p).code;
  const SectionTable t(p);
  e.classification = classify(p, t);
  const auto& c = e.classification;
  e.monotone_second_arg = !second_argument_nonmonotone(t).has_value();
  auto fail = [&](const std::string& id, std::vector<Elem> w) { e.failures.push_back({id, std::move(w)}); };
  detail::check_relpc_lattice(p, t, e);

  if (!c.is_sec_pc) return e;
  e.dm_preserves_secpc = dm_preserves_secpc(p).preserved;

  e.applicable.push_back("b");
  if (auto sd = is_completely_L_semidistributive(p); !sd.holds) {
    auto w = sd.m.elements();
    w.push_back(sd.a);
    w.push_back(sd.b);
    fail("b", w);
  }

  if (c.has_top) {
    e.applicable.push_back("a");
    if (auto r = verify_theorem2(t); !r.passed()) fail("a", r.first_failure()->witness);

    const auto cons = all_congruences(t);
    e.applicable.push_back("c");
    e.all_congruences_convex = true;
    for (const auto& theta : cons) {
      if (auto cv = is_convex(p, theta); !cv) {
        e.all_congruences_convex = false;
        fail("c", cv.witness);
        break;
      }
    }

    if (c.is_strongly_sec_pc) {
      e.applicable.insert(e.applicable.end(), {"d", "e", "f"});
      const Elem one = *t.top();
      bool d_ok = true, e_ok = true;
      for (const auto& theta : cons) {
        if (!d_ok) break;
        for (const auto& cls : theta.classes()) {
          if (!greatest(p, cls)) {
            fail("d", cls.elements());
            d_ok = false;
            break;
          }
        }
        if (!d_ok || !e_ok || !is_strong(p, t, theta)) continue;
        bool ok = false;
        try {
          const auto q = quotient(p, t, theta);
          ok = q.compatibility.passed() && classify(q.poset).is_strongly_sec_pc;
        } catch (const MathError&) {
        }
        if (!ok) {
          fail("e", theta.class_ids());
          e_ok = false;
        }
      }
      for (Elem a = 0; a < p.size(); ++a) {
        bool f_ok = true;
        for (Elem b = 0; b < p.size() && f_ok; ++b) {
          if (p.leq(a, b) && principal_congruence(t, t(b, a), one) != principal_congruence(t, a, b)) {
            fail("f", {a, b});
            f_ok = false;
          }
        }
        if (!f_ok) break;
      }
    }

    if (c.is_lattice) {
      e.applicable.push_back("g");
      const auto li = verify_lattice_identities(p);
      const auto mw = verify_maltsev_weakreg(p);
      if (!li.passed()) fail("g", li.first_failure()->witness);
      else if (!mw.passed()) fail("g", mw.first_failure()->witness);
    }
  }
  return e;
}

namespace detail {

inline nlohmann::json entry_to_json(const CensusEntry& e) {
  const auto& c = e.classification;
  nlohmann::json w = nlohmann::json::array();
  for (const auto& x : c.witnesses) w.push_back({{"property", x.property}, {"elements", x.elements}});
  nlohmann::json f = nlohmann::json::array();
  for (const auto& x : e.failures) f.push_back({{"property", x.property}, {"elements", x.elements}});
  nlohmann::json j{{"name", e.poset.name()},
                   {"code", e.code},
                   {"sec_pc", c.is_sec_pc},
                   {"strongly_sec_pc", c.is_strongly_sec_pc},
                   {"rel_pc", c.is_rel_pc},
                   {"lattice", c.is_lattice},
                   {"has_top", c.has_top},
                   {"witnesses", w},
                   {"monotone_second_arg", e.monotone_second_arg},
                   {"dm_preserves_secpc", nullptr},
                   {"all_congruences_convex", nullptr},
                   {"applicable", e.applicable},
                   {"failures", f}};
  if (e.dm_preserves_secpc) j["dm_preserves_secpc"] = *e.dm_preserves_secpc;
  if (e.all_congruences_convex) j["all_congruences_convex"] = *e.all_congruences_convex;
  return j;
}

inline CensusEntry entry_from_json(std::size_t n, const nlohmann::json& j) {
  CensusEntry e;
  e.code = j.at("code").get<std::string>();
  e.poset = poset_from_code(n, e.code, j.at("name").get<std::string>());
  auto& c = e.classification;
  c.is_sec_pc = j.at("sec_pc").get<bool>();
  c.is_strongly_sec_pc = j.at("strongly_sec_pc").get<bool>();
  c.is_rel_pc = j.at("rel_pc").get<bool>();
  c.is_lattice = j.at("lattice").get<bool>();
  c.has_top = j.at("has_top").get<bool>();
  for (const auto& w : j.at("witnesses")) {
    c.witnesses.push_back({w.at("property").get<std::string>(), w.at("elements").get<std::vector<Elem>>()});
  }
  e.monotone_second_arg = j.at("monotone_second_arg").get<bool>();
  if (!j.at("dm_preserves_secpc").is_null()) e.dm_preserves_secpc = j.at("dm_preserves_secpc").get<bool>();
  if (!j.at("all_congruences_convex").is_null()) {
    e.all_congruences_convex = j.at("all_congruences_convex").get<bool>();
  }
  e.applicable = j.at("applicable").get<std::vector<std::string>>();
  for (const auto& w : j.at("failures")) {
    e.failures.push_back({w.at("property").get<std::string>(), w.at("elements").get<std::vector<Elem>>()});
  }
  return e;
}

inline void tally(Census& c) {
  c.tally.clear();
  for (const auto& id : census_property_ids()) c.tally[id];
  for (std::size_t i = 0; i < c.entries.size(); ++i) {
    const auto& e = c.entries[i];
    for (const auto& id : e.applicable) ++c.tally[id].applicable;
    for (const auto& w : e.failures) {
      auto& t = c.tally[w.property];
      ++t.failures;
      if (!t.first) t.first = std::pair{i, w};
    }
  }
}

inline std::optional<std::filesystem::path> cache_path(std::size_t n) {
  const char* dir = std::getenv("ORDKIT_CACHE");
  if (!dir || !*dir) return std::nullopt;
  return std::filesystem::path(dir) /
         ("census-n" + std::to_string(n) + "-v" + std::to_string(kCensusVersion) + ".json");
}

}  // namespace detail

inline nlohmann::json census_to_json(const Census& c) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : c.entries) entries.push_back(detail::entry_to_json(e));
  nlohmann::json props = nlohmann::json::object();
  for (const auto& [id, t] : c.tally) {
    nlohmann::json p{{"applicable", t.applicable}, {"failures", t.failures}};
    if (t.first) {
      p["first_failure"] = {{"entry", t.first->first}, {"elements", t.first->second.elements}};
    }
    props[id] = p;
  }
  return {{"n", c.n}, {"version", kCensusVersion}, {"count", c.entries.size()},
          {"properties", props}, {"entries", entries}};
}

inline Census census_from_json(const nlohmann::json& j) {
  Census c;
  c.n = j.at("n").get<std::size_t>();
  if (j.at("version").get<int>() != kCensusVersion) throw InputError("census version mismatch");
  for (const auto& e : j.at("entries")) c.entries.push_back(detail::entry_from_json(c.n, e));
  detail::tally(c);
  return c;
}

/// Classifies every n-element poset up to isomorphism, `jobs` worker
/// threads (0: hardware concurrency). Results are ordered by canonical code
/// regardless of scheduling. Reads and writes a JSON cache under
/// $ORDKIT_CACHE when that variable is set.
inline Census run_census(std::size_t n, unsigned jobs = 1, std::size_t cap = kDefaultEnumerationCap) {
  if (n > cap) throw SizeCapExceeded("census is capped at " + std::to_string(cap) + " elements");
  const auto path = detail::cache_path(n);
  if (path && std::filesystem::exists(*path)) {
    try {
      std::ifstream in(*path);
      Census c = census_from_json(nlohmann::json::parse(in));
      if (c.n == n && c.entries.size() == kKnownPosetCounts[n]) {
        c.from_cache = true;
        return c;
      }
    } catch (const std::exception&) {
      // Unreadable cache: recompute.
    }
  }

  Census c;
  c.n = n;
  const auto posets = enumerate_posets(n, cap);
  c.entries.resize(posets.size());
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(jobs);
  auto worker = [&](unsigned w) {
    try {
      for (std::size_t i = next++; i < posets.size(); i = next++) {
        c.entries[i] = census_entry(posets[i]);
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (jobs == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < jobs; ++w) pool.emplace_back(worker, w);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  detail::tally(c);

  if (path) {
    std::error_code ec;
    std::filesystem::create_directories(path->parent_path(), ec);
    const auto tmp = path->string() + ".tmp";
    {
      std::ofstream out(tmp);
      out << census_to_json(c).dump();
    }
    std::filesystem::rename(tmp, *path, ec);
  }
  return c;
}

// ---------------------------------------------------------------------------
// Counterexample predicates

struct Predicate {
  std::string id;
  std::string description;
  std::function<bool(const FinitePoset&)> holds;
};

/// The closed predicate registry.
inline const std::vector<Predicate>& predicate_registry() {
  static const std::vector<Predicate> registry{
      {"sec-not-strong", "sectionally pseudocomplemented with 1 but not strongly",
       [](const FinitePoset& p) {
         const auto c = classify(p);
         return c.is_sec_pc && c.has_top && !c.is_strongly_sec_pc;
       }},
      {"secpc-lost-under-DM", "sectionally pseudocomplemented with 1, completion is not",
       [](const FinitePoset& p) {
         const auto c = classify(p);
         return c.is_sec_pc && c.has_top && !dm_preserves_secpc(p).preserved;
       }},
      {"second-arg-nonmonotone", "sectionally pseudocomplemented, * not monotone in its second argument",
       [](const FinitePoset& p) {
         const SectionTable t(p);
         return t.fully_defined() && second_argument_nonmonotone(t).has_value();
       }},
      {"strong-not-relpc", "strongly sectionally pseudocomplemented but not relatively pseudocomplemented",
       [](const FinitePoset& p) {
         const auto c = classify(p);
         return c.is_strongly_sec_pc && !c.is_rel_pc;
       }},
      {"lattice-identity-violation", "sectionally pseudocomplemented lattice violating the lattice identities",
       [](const FinitePoset& p) {
         const auto c = classify(p);
         return c.is_sec_pc && c.is_lattice && !verify_lattice_identities(p).passed();
       }},
  };
  return registry;
}

inline const Predicate& find_predicate(const std::string& id) {
  for (const auto& p : predicate_registry()) {
    if (p.id == id) return p;
  }
  throw UnknownPredicate("unknown predicate '" + id + "'", {id});
}

/// Smallest witness of the predicate with at most n elements, first in
/// canonical order at that size.
inline std::optional<FinitePoset> find_counterexample(std::size_t n, const std::string& predicate,
                                                      std::size_t cap = kDefaultEnumerationCap) {
  const auto& pred = find_predicate(predicate);
  if (n > cap) throw SizeCapExceeded("search is capped at " + std::to_string(cap) + " elements");
  for (std::size_t m = 1; m <= n; ++m) {
    for (const auto& p : enumerate_posets(m, cap)) {
      if (pred.holds(p)) return p;
    }
  }
  return std::nullopt;
}

}  // namespace ordkit
