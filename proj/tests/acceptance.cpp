// One PASS/FAIL line per acceptance criterion; exit status 1 if any fail.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <string>

#include "corpus.hpp"
#include "families.hpp"
#include "oracles.hpp"
#include "ordkit/ordkit.hpp"

using namespace ordkit;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Elem at(const FinitePoset& p, const std::string& s) { return p.index_of(s); }

Outcome golden_tables() {
  Outcome o;
  const auto t0 = Clock::now();
  std::size_t entries = 0;
  for (int k : {1, 2, 3, 4, 5, 7}) {
    const auto got = io::table_data(SectionTable(corpus::fig(k)));
    const auto want = corpus::golden_table(k);
    std::string cells;
    for (std::size_t i = 0; i < want.cells.size() && i < got.cells.size(); ++i) {
      for (std::size_t j = 0; j < want.cells[i].size() && j < got.cells[i].size(); ++j) {
        if (got.cells[i][j] == want.cells[i][j]) continue;
        const std::string undef(io::kUndefined);
        cells += " " + want.elements[i] + "*" + want.elements[j] + "=" + got.cells[i][j].value_or(undef) +
                 " (golden " + want.cells[i][j].value_or(undef) + ")";
      }
    }
    o.require(got == want, "table of figure " + std::to_string(k) + " differs:" + cells);
    for (const auto& row : want.cells) entries += row.size();
  }
  const double s = seconds_since(t0);
  o.require(entries == 64 + 25 + 49 + 49 + 16 + 64, "unexpected entry count");
  o.require(s < 1.0, "slower than 1 s");
  if (o.ok) o.detail = std::to_string(entries) + " entries in " + std::to_string(s) + " s";
  return o;
}

Outcome classification_claims() {
  Outcome o;
  const auto p1 = corpus::fig(1);
  const auto c1 = classify(p1);
  o.require(c1.is_sec_pc && !c1.is_strongly_sec_pc, "figure 1 flags");
  o.require(c1.witness("strong") && p1.labels_of(c1.witness("strong")->elements) ==
                                        std::vector<std::string>{"c", "a"},
            "figure 1 witness is not (c,a)");
  const SectionTable t1(p1);
  o.require(t1(at(p1, "c"), at(p1, "a")) == at(p1, "f") && t1(at(p1, "f"), at(p1, "a")) == at(p1, "a"),
            "figure 1: (c*a)*a is not f*a = a");

  const auto p2 = corpus::fig(2);
  const auto c2 = classify(p2);
  o.require(c2.is_strongly_sec_pc && c2.is_lattice, "figure 2 flags");
  o.require(!rel_pc(p2, at(p2, "c"), at(p2, "a")), "figure 2: rel_pc(c,a) exists");

  const auto p3 = corpus::fig(3);
  const auto c3 = classify(p3);
  o.require(c3.is_strongly_sec_pc && !c3.is_lattice, "figure 3 flags");
  o.require(!rel_pc(p3, at(p3, "c"), at(p3, "a")), "figure 3: rel_pc(c,a) exists");

  const auto p4 = corpus::fig(4);
  const auto c4 = classify(p4);
  const SectionTable t4(p4);
  o.require(c4.is_sec_pc && c4.is_lattice, "figure 4 flags");
  o.require(t4(at(p4, "b"), at(p4, "0")) == at(p4, "d") && t4(at(p4, "b"), at(p4, "a")) == at(p4, "c") &&
                !p4.comparable(at(p4, "d"), at(p4, "c")),
            "figure 4: b*0 = d and b*a = c are not incomparable");

  o.require(classify(corpus::fig(5)).is_strongly_sec_pc, "figure 5 is not strongly sec-pc");
  return o;
}

Outcome completion_counterexample() {
  Outcome o;
  const auto dm5 = dm_completion(corpus::fig(5));
  const auto& q5 = dm5.lattice;
  o.require(is_isomorphic(q5, corpus::fig(6)).has_value(), "completion of figure 5 is not figure 6");
  const Elem bottom5 = *bottom(q5);
  o.require(!sec_pc(q5, at(q5, "a"), bottom5), "a*0 exists in the completion of figure 5");

  const auto p3 = corpus::fig(3);
  const auto dm3 = dm_completion(p3);
  const auto fig7 = corpus::fig(7);
  std::vector<std::pair<Elem, Elem>> pins;
  for (Elem x = 0; x < p3.size(); ++x) pins.emplace_back(dm3.embed[x], fig7.index_of(p3.label(x)));
  const auto w = find_isomorphism(dm3.lattice, fig7, pins);
  o.require(w.has_value(), "completion of figure 3 is not figure 7");
  if (w) {
    bool labelled = false;
    for (Elem c = 0; c < dm3.lattice.size(); ++c) {
      if (!dm3.principal_mask[c]) labelled = dm3.lattice.label(c) == "L(d,e)" && fig7.label(w->mapping[c]) == "f";
    }
    o.require(labelled, "new element is not L(d,e)");
  }
  return o;
}

Outcome sum_theorems() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto f = corpus::yokedexam();
  const auto dm = verify_sum_completion(f);
  o.require(dm.report.passed(), "verify_sum_completion failed");
  const auto sp = verify_sum_secpc(f);
  o.require(sp.report.passed() && sp.completion.report.passed(), "verify_sum_secpc failed");
  const auto n5 = corpus::fig(2);
  const auto b4 = build_poset({"0", "p", "q", "1"}, {{"0", "p"}, {"0", "q"}, {"p", "1"}, {"q", "1"}});
  o.require(is_isomorphic(dm.yoked.summands[0].poset, n5).has_value(), "first yoked summand is not N5");
  o.require(is_isomorphic(dm.yoked.summands[1].poset, b4).has_value(),
            "second yoked summand is not the four-element Boolean lattice");
  o.require(seconds_since(t0) < 1.0, "slower than 1 s");
  return o;
}

Outcome census_suite() {
  Outcome o;
  const auto t0 = Clock::now();
  std::size_t classes = 0;
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto c = run_census(n, 0);
    o.require(c.entries.size() == kKnownPosetCounts[n], "census size at n=" + std::to_string(n));
    classes += c.entries.size();
    for (const auto& [id, t] : c.tally) {
      o.require(t.failures == 0, "property (" + id + ") fails at n=" + std::to_string(n));
    }
  }
  for (const char* pred : {"strong-not-relpc", "second-arg-nonmonotone", "secpc-lost-under-DM"}) {
    o.require(find_counterexample(6, pred).has_value(), std::string("no witness for ") + pred);
  }
  std::string sns = "sec-not-strong at n<=6";
  if (!find_counterexample(6, "sec-not-strong")) {
    const auto fig1 = corpus::fig(1);
    o.require(fig1.size() <= 8 && find_predicate("sec-not-strong").holds(fig1),
              "no sec-not-strong witness at n<=8");
    sns = "sec-not-strong via figure 1 (n=8)";
  }
  const double s = seconds_since(t0);
  o.require(s <= 600.0, "slower than 10 minutes");
  if (o.ok) o.detail = std::to_string(classes) + " classes, " + sns + ", " + std::to_string(s) + " s";
  return o;
}

Outcome oracle_equivalences() {
  Outcome o;
  std::size_t tables = 0, posets = 0;
  for (std::size_t n = 1; n <= 6; ++n) {
    for (const auto& p : enumerate_posets(n)) {
      ++posets;
      const auto dm = dm_completion(p);
      std::set<std::vector<bool>> got;
      for (const auto& c : dm.cuts) {
        std::vector<bool> m(p.size());
        for (Elem x = 0; x < p.size(); ++x) m[x] = c.contains(x);
        got.insert(m);
      }
      o.require(got == oracle::cuts(p), "cut set differs on " + p.name());
      if (n > 5) continue;
      const SectionTable t(p);
      if (!t.fully_defined()) continue;
      ++tables;
      oracle::Table ot(n, std::vector<Elem>(n));
      for (Elem a = 0; a < n; ++a) {
        for (Elem b = 0; b < n; ++b) ot[a][b] = t(a, b);
      }
      std::set<Partition> brute;
      for (const auto& c : oracle::congruences(ot)) brute.insert(Partition(c));
      const auto all = all_congruences(t);
      o.require(std::set<Partition>(all.begin(), all.end()) == brute, "all_congruences differs on " + p.name());
      for (Elem a = 0; a < n; ++a) {
        for (Elem b = a + 1; b < n; ++b) {
          o.require(principal_congruence(t, a, b) == Partition(oracle::principal(ot, a, b)),
                    "principal congruence differs on " + p.name());
        }
      }
    }
  }
  if (o.ok) o.detail = std::to_string(tables) + " tables, " + std::to_string(posets) + " completions";
  return o;
}

Outcome quotient_suite() {
  Outcome o;
  std::size_t instances = 0, quotients = 0;
  for (std::size_t n = 1; n <= 5; ++n) {
    for (const auto& p : enumerate_posets(n)) {
      const SectionTable t(p);
      if (!classify(p, t).is_strongly_sec_pc) continue;
      ++instances;
      for (const auto& theta : all_congruences(t)) {
        if (!is_strong(p, t, theta)) continue;
        ++quotients;
        const auto q = quotient(p, t, theta);
        o.require(classify(q.poset).is_strongly_sec_pc && q.compatibility.passed(),
                  "quotient of " + p.name() + " is not strongly sec-pc");
      }
      const Elem one = *t.top();
      for (Elem a = 0; a < n; ++a) {
        for (Elem b = 0; b < n; ++b) {
          if (!p.leq(a, b)) continue;
          o.require(principal_congruence(t, t(b, a), one) == principal_congruence(t, a, b),
                    "principal identity fails on " + p.name());
        }
      }
    }
  }
  if (o.ok) o.detail = std::to_string(instances) + " instances, " + std::to_string(quotients) + " quotients";
  return o;
}

Outcome randomized_sums() {
  Outcome o;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240601);
  const auto pool = families::secpc_pool();
  std::size_t pairs = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto f = families::random_family(rng, pool);
    const SumOperation op(f);
    const auto& p = op.sum().poset;
    const SectionTable t(p);
    for (Elem a = 0; a < p.size(); ++a) {
      for (Elem b = 0; b < p.size(); ++b) {
        ++pairs;
        o.require(t.value(a, b) == op(a, b), "sum formula differs on family " + std::to_string(trial));
      }
    }
    o.require(verify_sum_completion(f).report.passed(), "verify_sum_completion fails on family " +
                                                             std::to_string(trial));
  }
  const double s = seconds_since(t0);
  o.require(s <= 120.0, "slower than 2 minutes");
  if (o.ok) o.detail = "200 families, " + std::to_string(pairs) + " pairs, " + std::to_string(s) + " s";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"golden operation tables", golden_tables},
      {"classification claims", classification_claims},
      {"completion counterexample", completion_counterexample},
      {"sum theorems on the worked family", sum_theorems},
      {"census theorem suite n<=6", census_suite},
      {"oracle equivalences", oracle_equivalences},
      {"quotient suite n<=5", quotient_suite},
      {"randomized sum cross-check", randomized_sums},
  };
  bool all = true;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.ok;
    std::cout << "criterion " << k + 1 << ": " << (o.ok ? "PASS" : "FAIL") << "  " << criteria[k].first;
    if (!o.detail.empty()) std::cout << " (" << o.detail << ")";
    std::cout << "\n";
  }
  return all ? 0 : 1;
}
