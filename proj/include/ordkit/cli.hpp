#pragma once

#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ordkit/completion.hpp"
#include "ordkit/congruence.hpp"
#include "ordkit/error.hpp"
#include "ordkit/io.hpp"
#include "ordkit/ordinal_sum.hpp"
#include "ordkit/search.hpp"
#include "ordkit/secpsc.hpp"

namespace ordkit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitMath = 3;

namespace detail {

using nlohmann::json;

struct Options {
  std::string format = "text";
  std::string input;
  std::string partition;
  std::string sidecar;
  std::string predicate;
  std::size_t n = 0;
  unsigned jobs = 1;
  bool verify_dm = false;
  bool verify_secpc = false;
};

inline int cmd_check(const Options& o, std::ostream& out) {
  const auto p = io::load_poset(o.input);
  const auto c = classify(p);
  if (o.format == "json") {
    out << io::classification_to_json(p, c).dump(2) << "\n";
  } else {
    out << io::format_classification(p, c);
  }
  return kExitOk;
}

inline int cmd_table(const Options& o, std::ostream& out) {
  const auto p = io::load_poset(o.input);
  const auto d = io::table_data(SectionTable(p));
  if (o.format == "json") {
    out << io::table_to_json(d).dump(2) << "\n";
  } else {
    out << io::format_table(d);
  }
  return kExitOk;
}

inline int cmd_complete(const Options& o, std::ostream& out) {
  const auto p = io::load_poset(o.input);
  const auto dm = dm_completion(p);
  if (!o.sidecar.empty()) {
    std::ofstream side(o.sidecar);
    if (!side) throw InputError("cannot write '" + o.sidecar + "'");
    side << io::dm_sidecar(p, dm).dump(2) << "\n";
  }
  if (o.format == "json") {
    out << json{{"completion", io::poset_to_json(dm.lattice)}, {"sidecar", io::dm_sidecar(p, dm)}}.dump(2)
        << "\n";
  } else if (o.format == "dot") {
    out << io::to_dot(dm.lattice);
  } else {
    out << io::format_poset(dm.lattice);
  }
  return kExitOk;
}

inline int cmd_sum(const Options& o, std::ostream& out) {
  const auto f = io::load_sum_family(o.input);
  const auto sum = build_sum(f);
  json j{{"sum", io::poset_to_json(sum.poset)}};
  std::string text = io::format_poset(sum.poset);
  bool ok = true;
  if (o.verify_dm && !o.verify_secpc) {
    const auto r = verify_sum_completion(f);
    ok = r.report.passed();
    j["verify_dm"] = io::report_to_json(r.completion.lattice, r.report);
    text += io::format_report(r.completion.lattice, r.report);
  }
  if (o.verify_secpc) {
    const auto r = verify_sum_secpc(f);
    const auto& lattice = r.completion.completion.lattice;
    const auto table = io::table_data(r.completion_table);
    ok = r.completion.report.passed() && r.report.passed();
    if (o.verify_dm) {
      j["verify_dm"] = io::report_to_json(lattice, r.completion.report);
      text += io::format_report(lattice, r.completion.report);
    }
    j["verify_secpc"] = io::report_to_json(lattice, r.report);
    j["completion_table"] = io::table_to_json(table);
    text += io::format_report(lattice, r.report);
    text += "table of the completion:\n" + io::format_table(table);
  }
  out << (o.format == "json" ? j.dump(2) + "\n" : text);
  return ok ? kExitOk : kExitMath;
}

inline int cmd_quotient(const Options& o, std::ostream& out) {
  const auto p = io::load_poset(o.input);
  const auto part = io::parse_partition(p, io::read_file(o.partition));
  const SectionTable t(p);
  const auto q = quotient(p, t, part);
  std::optional<io::TableData> table;
  if (q.star) {
    table.emplace();
    table->elements = q.poset.names();
    for (const auto& row : *q.star) {
      auto& r = table->cells.emplace_back();
      for (auto v : row) r.emplace_back(q.poset.label(v));
    }
  }
  if (o.format == "json") {
    json j{{"quotient", io::poset_to_json(q.poset)},
           {"partition", io::partition_to_json(p, part)},
           {"compatibility", io::report_to_json(p, q.compatibility)},
           {"table", table ? io::table_to_json(*table) : json(nullptr)}};
    out << j.dump(2) << "\n";
  } else {
    out << io::format_poset(q.poset) << io::format_report(p, q.compatibility);
    if (table) out << "induced operation:\n" << io::format_table(*table);
  }
  return q.compatibility.passed() ? kExitOk : kExitMath;
}

inline int cmd_congruences(const Options& o, std::ostream& out) {
  const auto p = io::load_poset(o.input);
  const SectionTable t(p);
  json list = json::array();
  std::string text;
  for (const auto& theta : all_congruences(t)) {
    const bool convex = static_cast<bool>(is_convex(p, theta));
    bool strong = false;
    try {
      strong = static_cast<bool>(is_strong(p, t, theta));
    } catch (const ClassWithoutGreatest&) {
    }
    auto j = io::partition_to_json(p, theta);
    j["convex"] = convex;
    j["strong"] = strong;
    list.push_back(j);
    for (const auto& c : theta.classes()) text += class_label(p, c);
    text += std::string(" convex: ") + (convex ? "yes" : "no") + " strong: " + (strong ? "yes" : "no") + "\n";
  }
  if (o.format == "json") {
    out << json{{"poset", p.name()}, {"congruences", list}}.dump(2) << "\n";
  } else {
    out << text;
  }
  return kExitOk;
}

inline int cmd_enumerate(const Options& o, std::ostream& out) {
  if (!o.predicate.empty()) {
    const auto w = find_counterexample(o.n, o.predicate);
    if (o.format == "json") {
      out << json{{"predicate", o.predicate}, {"bound", o.n},
                  {"witness", w ? io::poset_to_json(*w) : json(nullptr)}}
                 .dump(2)
          << "\n";
    } else if (w) {
      out << "# " << o.predicate << ": witness with " << w->size() << " elements\n" << io::format_poset(*w);
    } else {
      out << "# " << o.predicate << ": no witness with at most " << o.n << " elements\n";
    }
    return kExitOk;
  }
  const auto c = run_census(o.n, o.jobs);
  if (o.format == "json") {
    out << census_to_json(c).dump(2) << "\n";
  } else {
    std::size_t sec = 0, strong = 0, lat = 0, rel = 0;
    for (const auto& e : c.entries) {
      sec += e.classification.is_sec_pc;
      strong += e.classification.is_strongly_sec_pc;
      lat += e.classification.is_lattice;
      rel += e.classification.is_rel_pc;
    }
    out << "census n=" << c.n << ": " << c.entries.size() << " posets" << (c.from_cache ? " (cached)" : "")
        << "\n";
    out << "sec-pc " << sec << ", strongly " << strong << ", lattices " << lat << ", rel-pc " << rel << "\n";
    for (const auto& [id, t] : c.tally) {
      out << "property " << id << ": " << t.applicable << " applicable, " << t.failures << " failures";
      if (t.first) out << " (first: " << c.entries[t.first->first].poset.name() << ")";
      out << "\n";
    }
  }
  return c.all_properties_hold() ? kExitOk : kExitMath;
}

inline int cmd_export_dot(const Options& o, std::ostream& out) {
  out << io::to_dot(io::load_poset(o.input));
  return kExitOk;
}

inline void print_math_error(const MathError& e, std::ostream& err) {
  err << "error: " << e.what() << "\n"
      << json{{"error", e.kind()}, {"message", e.what()}, {"witness", e.witness()}}.dump() << "\n";
}

}  // namespace detail

/// Runs one subcommand; `args` excludes the program name. Returns the exit
/// code: 0 success, 2 bad input, 3 precondition or verification failure.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  detail::Options o;
  CLI::App app{"Sectional pseudocomplements on finite posets", "ordkit"};
  app.require_subcommand(1);
  const auto formats = CLI::IsMember({"text", "json"});

  auto* check = app.add_subcommand("check", "classify a poset");
  check->add_option("input", o.input, "poset file")->required();
  check->add_option("--format", o.format)->check(formats);

  auto* table = app.add_subcommand("table", "operation table of *");
  table->add_option("input", o.input, "poset file")->required();
  table->add_option("--format", o.format)->check(formats);

  auto* complete = app.add_subcommand("complete", "Dedekind-MacNeille completion");
  complete->add_option("input", o.input, "poset file")->required();
  complete->add_option("--sidecar", o.sidecar, "write the cut sidecar JSON here");
  complete->add_option("--format", o.format)->check(CLI::IsMember({"text", "json", "dot"}));

  auto* sum = app.add_subcommand("sum", "generalized ordinal sum of a family");
  sum->add_option("input", o.input, "sum-family file")->required();
  sum->add_flag("--verify-dm", o.verify_dm, "check the completion against the yoked family");
  sum->add_flag("--verify-secpc", o.verify_secpc, "check * on the completion against the sum formula");
  sum->add_option("--format", o.format)->check(formats);

  auto* quot = app.add_subcommand("quotient", "quotient by a congruence");
  quot->add_option("input", o.input, "poset file")->required();
  quot->add_option("partition", o.partition, "partition JSON file")->required();
  quot->add_option("--format", o.format)->check(formats);

  auto* cons = app.add_subcommand("congruences", "all congruences of (P,*)");
  cons->add_option("input", o.input, "poset file")->required();
  cons->add_option("--format", o.format)->check(formats);

  auto* en = app.add_subcommand("enumerate", "census of n-element posets");
  en->add_option("n", o.n, "element count")->required();
  en->add_option("--predicate", o.predicate, "search for a witness of a registered predicate");
  en->add_option("--jobs", o.jobs, "worker threads (0: all cores)");
  en->add_option("--format", o.format)->check(formats);

  auto* dot = app.add_subcommand("export-dot", "Hasse diagram in DOT");
  dot->add_option("input", o.input, "poset file")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  try {
    if (check->parsed()) return detail::cmd_check(o, out);
    if (table->parsed()) return detail::cmd_table(o, out);
    if (complete->parsed()) return detail::cmd_complete(o, out);
    if (sum->parsed()) return detail::cmd_sum(o, out);
    if (quot->parsed()) return detail::cmd_quotient(o, out);
    if (cons->parsed()) return detail::cmd_congruences(o, out);
    if (en->parsed()) return detail::cmd_enumerate(o, out);
    if (dot->parsed()) return detail::cmd_export_dot(o, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const MathError& e) {
    detail::print_math_error(e, err);
    return kExitMath;
  }
  return kExitInput;
}

}  // namespace ordkit::cli
