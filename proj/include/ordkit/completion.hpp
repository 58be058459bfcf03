#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ordkit/error.hpp"
#include "ordkit/poset.hpp"
#include "ordkit/secpsc.hpp"

namespace ordkit {

/// Dedekind-MacNeille completion of a finite poset, realised as its lattice
/// of cuts (subsets A with A = LU(A)) ordered by inclusion.
///
/// Element k < base.size() of `lattice` is the principal cut L(k), so the
/// canonical embedding is the identity on indices; the non-principal cuts
/// follow, ordered by size and then by membership mask.
struct DMResult {
  FinitePoset lattice;
  std::vector<Subset> cuts;
  std::vector<Elem> embed;
  std::vector<bool> principal_mask;
};

/// Cut label: the element name for L(x), otherwise "L(u1,u2,...)" listing
/// the minimal elements of U(A), which generate A as L(U(A)).
inline std::string cut_label(const FinitePoset& p, const Subset& cut) {
  if (auto g = greatest(p, cut); g && p.down(*g) == cut) return p.label(*g);
  std::string s = "L(";
  bool first = true;
  minimal_elements(p, upper_cone(p, cut)).for_each([&](Elem u) {
    if (!first) s += ",";
    s += p.label(u);
    first = false;
  });
  return s + ")";
}

/// All cuts of P. Every cut LU(S) is the intersection of the principal
/// down-sets L(u), u in U(S), so the cut family is the closure of
/// {L(x)} u {P} under pairwise intersection.
inline std::set<Subset> enumerate_cuts(const FinitePoset& p) {
  std::set<Subset> cuts{p.all()};
  std::vector<Subset> work{p.all()};
  for (Elem x = 0; x < p.size(); ++x) {
    if (cuts.insert(p.down(x)).second) work.push_back(p.down(x));
  }
  std::vector<Subset> generators;
  for (Elem x = 0; x < p.size(); ++x) generators.push_back(p.down(x));
  while (!work.empty()) {
    Subset cur = work.back();
    work.pop_back();
    for (const auto& g : generators) {
      Subset next = cur & g;
      if (cuts.insert(next).second) work.push_back(next);
    }
  }
  return cuts;
}

namespace detail {

inline void verify_completion(const FinitePoset& p, const DMResult& dm) {
  const auto& q = dm.lattice;
  if (!is_lattice(q)) throw std::logic_error("cut lattice is not a lattice");
  for (Elem a = 0; a < p.size(); ++a) {
    for (Elem b = 0; b < p.size(); ++b) {
      if (p.leq(a, b) != q.leq(dm.embed[a], dm.embed[b])) {
        throw std::logic_error("canonical embedding is not an order embedding");
      }
    }
  }
  for (Elem c = 0; c < q.size(); ++c) {
    const Subset& cut = dm.cuts[c];
    Subset below(q.size()), above(q.size());
    cut.for_each([&](Elem x) { below.insert(dm.embed[x]); });
    upper_cone(p, cut).for_each([&](Elem u) { above.insert(dm.embed[u]); });
    if (least(q, upper_cone(q, below)) != c || greatest(q, lower_cone(q, above)) != c) {
      throw std::logic_error("cut is not a join and meet of embedded elements");
    }
  }
}

}  // namespace detail

inline DMResult dm_completion(const FinitePoset& p) {
  const std::size_t n = p.size();
  std::vector<Subset> extra;
  for (const auto& c : enumerate_cuts(p)) {
    bool principal = false;
    for (Elem x = 0; x < n && !principal; ++x) principal = p.down(x) == c;
    if (!principal) extra.push_back(c);
  }
  std::sort(extra.begin(), extra.end(), [](const Subset& a, const Subset& b) {
    if (a.count() != b.count()) return a.count() < b.count();
    return a.bits() < b.bits();
  });

  DMResult dm;
  for (Elem x = 0; x < n; ++x) dm.cuts.push_back(p.down(x));
  dm.cuts.insert(dm.cuts.end(), extra.begin(), extra.end());
  const std::size_t m = dm.cuts.size();
  if (m > kMaxElements) {
    throw SizeCapExceeded("completion has more than " + std::to_string(kMaxElements) + " cuts");
  }
  dm.embed.resize(n);
  for (Elem x = 0; x < n; ++x) dm.embed[x] = x;
  dm.principal_mask.assign(m, false);
  std::fill_n(dm.principal_mask.begin(), n, true);

  std::vector<std::string> names;
  std::vector<Subset> down(m, Subset(m));
  for (Elem i = 0; i < m; ++i) {
    names.push_back(cut_label(p, dm.cuts[i]));
    for (Elem j = 0; j < m; ++j) {
      if (dm.cuts[j].is_subset_of(dm.cuts[i])) down[i].insert(j);
    }
  }
  dm.lattice = FinitePoset::from_down_sets(p.name().empty() ? "" : "DM_" + p.name(), std::move(names),
                                           std::move(down));
  detail::verify_completion(p, dm);
  return dm;
}

struct DMSecPcReport {
  DMResult completion;
  ClassificationReport classification;
  bool preserved = false;
  /// First pair (in completion indices) where * is undefined.
  std::optional<std::pair<Elem, Elem>> witness;
};

/// Whether the completion of a sectionally pseudocomplemented poset is
/// again sectionally pseudocomplemented.
inline DMSecPcReport dm_preserves_secpc(const FinitePoset& p) {
  if (!classify(p).is_sec_pc) {
    throw PreconditionError("dm_preserves_secpc requires a sectionally pseudocomplemented poset");
  }
  DMSecPcReport r;
  r.completion = dm_completion(p);
  r.classification = classify(r.completion.lattice);
  r.preserved = r.classification.is_sec_pc;
  for (const auto& w : r.classification.witnesses) {
    if (w.property.rfind("sec_pc", 0) == 0) r.witness = std::pair{w.elements[0], w.elements[1]};
  }
  return r;
}

}  // namespace ordkit
