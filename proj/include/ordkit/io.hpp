#pragma once

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ordkit/completion.hpp"
#include "ordkit/congruence.hpp"
#include "ordkit/error.hpp"
#include "ordkit/ordinal_sum.hpp"
#include "ordkit/poset.hpp"
#include "ordkit/secpsc.hpp"

namespace ordkit::io {

using nlohmann::json;

inline constexpr std::string_view kUndefined = "—";

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace detail {

inline std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::string_view strip_comment(std::string_view s) {
  if (auto h = s.find('#'); h != std::string_view::npos) s = s.substr(0, h);
  return trim(s);
}

inline bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

struct Line {
  std::size_t number;
  std::string text;
};

inline std::vector<Line> content_lines(const std::string& text) {
  std::vector<Line> out;
  std::istringstream in(text);
  std::size_t no = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++no;
    auto s = strip_comment(raw);
    if (!s.empty()) out.push_back({no, std::string(s)});
  }
  return out;
}

/// Accumulates one poset block: "elements:" and "covers:" lines.
struct PosetBlock {
  std::string name;
  std::size_t line = 0;
  std::vector<std::string> elements;
  std::vector<std::pair<std::string, std::string>> covers;
  bool saw_elements = false;

  bool consume(const Line& l) {
    std::string_view s = l.text;
    if (starts_with(s, "elements:")) {
      for (auto& w : split_ws(s.substr(9))) elements.push_back(w);
      saw_elements = true;
      return true;
    }
    if (starts_with(s, "covers:")) {
      for (const auto& w : split_ws(s.substr(7))) {
        std::vector<std::string> chain;
        std::size_t start = 0;
        for (std::size_t k = 0; k <= w.size(); ++k) {
          if (k == w.size() || w[k] == '<') {
            chain.push_back(w.substr(start, k - start));
            start = k + 1;
          }
        }
        if (chain.size() < 2 || std::any_of(chain.begin(), chain.end(), [](auto& c) { return c.empty(); })) {
          throw ParseError("malformed cover '" + w + "'", l.number);
        }
        for (std::size_t k = 0; k + 1 < chain.size(); ++k) covers.emplace_back(chain[k], chain[k + 1]);
      }
      return true;
    }
    return false;
  }

  FinitePoset build() const {
    if (!saw_elements) throw ParseError("missing 'elements:' line", line);
    return build_poset(elements, covers, name);
  }
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Poset text format
//
//   poset <name>
//   elements: a b c 1
//   covers: a<1 b<1 c<1
//
// '#' starts a comment. A label is any run of non-blank characters other than
// '<' and '#'. Several elements:/covers: lines accumulate; "a<b<c" is a chain.

inline FinitePoset parse_poset(const std::string& text) {
  detail::PosetBlock block;
  bool header = false;
  for (const auto& l : detail::content_lines(text)) {
    if (detail::starts_with(l.text, "poset")) {
      if (header) throw ParseError("second 'poset' header", l.number);
      auto words = detail::split_ws(l.text);
      if (words[0] != "poset" || words.size() > 2) throw ParseError("malformed 'poset' header", l.number);
      block.name = words.size() == 2 ? words[1] : "";
      block.line = l.number;
      header = true;
      continue;
    }
    if (!block.consume(l)) throw ParseError("unexpected line '" + l.text + "'", l.number);
  }
  if (!header) throw ParseError("missing 'poset' header", 1);
  return block.build();
}

inline FinitePoset load_poset(const std::string& path) { return parse_poset(read_file(path)); }

inline std::string format_poset(const FinitePoset& p) {
  std::string s = "poset " + (p.name().empty() ? std::string("P") : p.name()) + "\nelements:";
  for (const auto& n : p.names()) s += " " + n;
  s += "\ncovers:";
  for (auto [a, b] : hasse_covers(p)) s += " " + p.label(a) + "<" + p.label(b);
  return s + "\n";
}

// ---------------------------------------------------------------------------
// Sum-family text format
//
//   family <name>
//   summand <index>
//   elements: ...
//   covers: ...
//   summand <index>
//   ...
//   glue: <index>.<label> = <index>.<label>

inline SumFamily parse_sum_family(const std::string& text) {
  SumFamily f;
  std::vector<detail::PosetBlock> blocks;
  std::vector<std::pair<std::size_t, std::string>> glue_lines;
  for (const auto& l : detail::content_lines(text)) {
    const auto words = detail::split_ws(l.text);
    if (words[0] == "family") {
      if (words.size() != 2) throw ParseError("malformed 'family' header", l.number);
      f.name = words[1];
    } else if (words[0] == "summand") {
      if (words.size() != 2) throw ParseError("malformed 'summand' header", l.number);
      if (std::find(f.index.begin(), f.index.end(), words[1]) != f.index.end()) {
        throw ParseError("duplicate summand index '" + words[1] + "'", l.number);
      }
      f.index.push_back(words[1]);
      auto& b = blocks.emplace_back();
      b.name = words[1];
      b.line = l.number;
    } else if (detail::starts_with(l.text, "glue:")) {
      glue_lines.emplace_back(l.number, l.text.substr(5));
    } else if (blocks.empty() || !blocks.back().consume(l)) {
      throw ParseError("unexpected line '" + l.text + "'", l.number);
    }
  }
  if (blocks.empty()) throw ParseError("no summands", 1);
  for (const auto& b : blocks) f.summands.push_back(b.build());

  auto ref = [&](std::string_view s, std::size_t line) {
    s = detail::trim(s);
    const auto dot = s.find('.');
    if (dot == std::string_view::npos) throw ParseError("glue reference needs '<index>.<label>'", line);
    const std::string idx(s.substr(0, dot));
    auto it = std::find(f.index.begin(), f.index.end(), idx);
    if (it == f.index.end()) throw ParseError("unknown summand index '" + idx + "'", line);
    const auto k = static_cast<std::size_t>(it - f.index.begin());
    return std::pair{k, f.summands[k].index_of(s.substr(dot + 1))};
  };
  for (const auto& [line, body] : glue_lines) {
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ParseError("glue needs '='", line);
    auto [i, x] = ref(std::string_view(body).substr(0, eq), line);
    auto [j, y] = ref(std::string_view(body).substr(eq + 1), line);
    if (i > j) {
      std::swap(i, j);
      std::swap(x, y);
    }
    f.glue.push_back({i, x, j, y});
  }
  return f;
}

inline SumFamily load_sum_family(const std::string& path) { return parse_sum_family(read_file(path)); }

inline std::string format_sum_family(const SumFamily& f) {
  std::string s = "family " + (f.name.empty() ? std::string("F") : f.name) + "\n";
  for (std::size_t i = 0; i < f.summands.size(); ++i) {
    const auto body = format_poset(f.summands[i]);
    s += "summand " + f.index[i] + "\n" + body.substr(body.find('\n') + 1);
  }
  for (const auto& g : f.glue) {
    s += "glue: " + f.index[g.lower] + "." + f.summands[g.lower].label(g.lower_elem) + " = " +
         f.index[g.upper] + "." + f.summands[g.upper].label(g.upper_elem) + "\n";
  }
  return s;
}

// ---------------------------------------------------------------------------
// Operation tables

/// Label-level view of a (partial) operation table.
struct TableData {
  std::vector<std::string> elements;
  std::vector<std::vector<std::optional<std::string>>> cells;

  friend bool operator==(const TableData&, const TableData&) = default;
};

inline TableData table_data(const SectionTable& t) {
  const auto& p = t.base();
  TableData d{p.names(), {}};
  for (Elem a = 0; a < p.size(); ++a) {
    auto& row = d.cells.emplace_back();
    for (Elem b = 0; b < p.size(); ++b) {
      auto v = t.value(a, b);
      row.push_back(v ? std::optional<std::string>(p.label(*v)) : std::nullopt);
    }
  }
  return d;
}

namespace detail {

inline std::size_t display_width(std::string_view s) {
  std::size_t w = 0;
  for (unsigned char c : s) w += (c & 0xC0) != 0x80;
  return w;
}

inline std::string pad(std::string_view s, std::size_t w) {
  return std::string(s) + std::string(w - std::min(w, display_width(s)), ' ');
}

}  // namespace detail

/// Grid with a "*" corner, the header row, then one row per first argument;
/// undefined entries print as an em dash.
inline std::string format_table(const TableData& d) {
  std::size_t w = 1;
  for (const auto& e : d.elements) w = std::max(w, detail::display_width(e));
  for (const auto& row : d.cells) {
    for (const auto& c : row) w = std::max(w, c ? detail::display_width(*c) : 1);
  }
  std::string s = detail::pad("*", w);
  for (const auto& e : d.elements) s += " " + detail::pad(e, w);
  s += "\n";
  for (std::size_t a = 0; a < d.elements.size(); ++a) {
    std::string line = detail::pad(d.elements[a], w);
    for (const auto& c : d.cells[a]) line += " " + detail::pad(c ? *c : std::string(kUndefined), w);
    while (!line.empty() && line.back() == ' ') line.pop_back();
    s += line + "\n";
  }
  return s;
}

inline TableData parse_table(const std::string& text) {
  TableData d;
  std::vector<std::vector<std::string>> rows;
  for (const auto& l : detail::content_lines(text)) {
    auto words = detail::split_ws(l.text);
    if (d.elements.empty()) {
      if (words.front() != "*") throw ParseError("table header must start with '*'", l.number);
      d.elements.assign(words.begin() + 1, words.end());
      if (d.elements.empty()) throw ParseError("table header has no elements", l.number);
      continue;
    }
    if (rows.size() >= d.elements.size()) throw ParseError("too many table rows", l.number);
    if (words.size() != d.elements.size() + 1) throw ParseError("table row has the wrong width", l.number);
    if (words.front() != d.elements[rows.size()]) throw ParseError("row label out of order", l.number);
    rows.push_back(std::move(words));
  }
  if (d.elements.empty() || rows.size() != d.elements.size()) throw ParseError("incomplete table", 0);
  for (const auto& words : rows) {
    auto& cells = d.cells.emplace_back();
    for (std::size_t k = 1; k < words.size(); ++k) {
      if (words[k] == kUndefined) {
        cells.emplace_back();
      } else if (std::find(d.elements.begin(), d.elements.end(), words[k]) == d.elements.end()) {
        throw UnknownLabel(words[k]);
      } else {
        cells.emplace_back(words[k]);
      }
    }
  }
  return d;
}

inline json table_to_json(const TableData& d) {
  json rows = json::array();
  for (const auto& row : d.cells) {
    json r = json::array();
    for (const auto& c : row) r.push_back(c ? json(*c) : json(nullptr));
    rows.push_back(r);
  }
  return {{"elements", d.elements}, {"table", rows}};
}

inline TableData table_from_json(const json& j) {
  TableData d;
  try {
    d.elements = j.at("elements").get<std::vector<std::string>>();
    for (const auto& r : j.at("table")) {
      auto& row = d.cells.emplace_back();
      for (const auto& c : r) row.push_back(c.is_null() ? std::nullopt : std::optional(c.get<std::string>()));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("table JSON: ") + e.what());
  }
  return d;
}

// ---------------------------------------------------------------------------
// Classification

inline json witness_labels(const FinitePoset& p, const std::vector<Elem>& w) { return p.labels_of(w); }

inline json classification_to_json(const FinitePoset& p, const ClassificationReport& c) {
  json w = json::object();
  for (const auto& x : c.witnesses) w[x.property] = witness_labels(p, x.elements);
  return {{"poset", p.name()},
          {"size", p.size()},
          {"sec_pc", c.is_sec_pc},
          {"strongly_sec_pc", c.is_strongly_sec_pc},
          {"lattice", c.is_lattice},
          {"rel_pc", c.is_rel_pc},
          {"has_top", c.has_top},
          {"witnesses", w}};
}

inline std::string format_classification(const FinitePoset& p, const ClassificationReport& c) {
  auto yn = [](bool b) { return std::string(b ? "yes" : "no"); };
  auto with = [&](const std::string& prop) {
    const auto* w = c.witness(prop);
    if (!w) return std::string();
    std::string s = " (witness ";
    for (std::size_t k = 0; k < w->elements.size(); ++k) s += (k ? "," : "") + p.label(w->elements[k]);
    return s + ")";
  };
  std::string s = "poset " + (p.name().empty() ? std::string("P") : p.name()) + ", " +
                  std::to_string(p.size()) + " elements\n";
  s += "sectionally pseudocomplemented: " + yn(c.is_sec_pc) + with("sec_pc:no-satisfier") +
       with("sec_pc:no-greatest");
  s += "; strongly: " + yn(c.is_strongly_sec_pc) + with("strong");
  s += "; lattice: " + yn(c.is_lattice) + "; relatively pc: " + yn(c.is_rel_pc) + "; top: " + yn(c.has_top) +
       "\n";
  for (const auto& w : c.witnesses) {
    if (w.property == "lattice" || w.property == "rel_pc") {
      s += "witness " + w.property + ":";
      for (Elem x : w.elements) s += " " + p.label(x);
      s += "\n";
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Partitions

inline Partition parse_partition(const FinitePoset& p, const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("partition JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("classes") || !j["classes"].is_array()) {
    throw ParseError("partition JSON needs a \"classes\" array");
  }
  std::vector<std::vector<Elem>> classes;
  for (const auto& c : j["classes"]) {
    if (!c.is_array()) throw ParseError("each partition class must be an array of labels");
    auto& cls = classes.emplace_back();
    for (const auto& x : c) {
      if (!x.is_string()) throw ParseError("partition members must be labels");
      cls.push_back(p.index_of(x.get<std::string>()));
    }
  }
  return Partition::from_classes(p.size(), classes);
}

inline json partition_to_json(const FinitePoset& p, const Partition& part) {
  json classes = json::array();
  for (const auto& c : part.classes()) classes.push_back(p.labels_of(c.elements()));
  return {{"classes", classes}};
}

// ---------------------------------------------------------------------------
// Completion sidecar and DOT

/// Which completion element every cut is, its members, and the embedding.
inline json dm_sidecar(const FinitePoset& p, const DMResult& dm) {
  json cuts = json::array();
  for (Elem c = 0; c < dm.cuts.size(); ++c) {
    cuts.push_back({{"element", dm.lattice.label(c)},
                    {"members", p.labels_of(dm.cuts[c].elements())},
                    {"principal", static_cast<bool>(dm.principal_mask[c])}});
  }
  json embed = json::object();
  for (Elem x = 0; x < p.size(); ++x) embed[p.label(x)] = dm.lattice.label(dm.embed[x]);
  return {{"source", p.name()}, {"completion", dm.lattice.name()}, {"cuts", cuts}, {"embedding", embed}};
}

inline json poset_to_json(const FinitePoset& p) {
  json covers = json::array();
  for (auto [a, b] : hasse_covers(p)) covers.push_back({p.label(a), p.label(b)});
  return {{"name", p.name()}, {"elements", p.names()}, {"covers", covers}};
}

namespace detail {

inline std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

/// Hasse diagram, bottom to top.
inline std::string to_dot(const FinitePoset& p) {
  std::string s = "digraph " + detail::dot_quote(p.name().empty() ? "P" : p.name()) + " {\n  rankdir=BT;\n";
  for (const auto& n : p.names()) s += "  " + detail::dot_quote(n) + ";\n";
  for (auto [a, b] : hasse_covers(p)) {
    s += "  " + detail::dot_quote(p.label(a)) + " -> " + detail::dot_quote(p.label(b)) + ";\n";
  }
  return s + "}\n";
}

inline json report_to_json(const FinitePoset& p, const PropertyReport& r) {
  json items = json::array();
  for (const auto& c : r.items) {
    json w = json::array();
    for (Elem x : c.witness) w.push_back(x < p.size() ? p.label(x) : std::to_string(x));
    items.push_back({{"id", c.id}, {"passed", c.passed}, {"checked", c.checked}, {"witness", w},
                     {"detail", c.detail}});
  }
  return {{"title", r.title}, {"passed", r.passed()}, {"items", items}, {"notes", r.notes}};
}

inline std::string format_report(const FinitePoset& p, const PropertyReport& r) {
  std::string s = r.title + ": " + (r.passed() ? "pass" : "FAIL") + "\n";
  for (const auto& c : r.items) {
    s += "  " + c.id + ": " + (c.passed ? "pass" : "FAIL") + " (" + std::to_string(c.checked) + " checked)";
    if (!c.passed) {
      s += " witness";
      for (Elem x : c.witness) s += " " + (x < p.size() ? p.label(x) : std::to_string(x));
      if (!c.detail.empty()) s += ": " + c.detail;
    } else if (!c.detail.empty()) {
      s += " " + c.detail;
    }
    s += "\n";
  }
  for (const auto& n : r.notes) s += "  note: " + n + "\n";
  return s;
}

}  // namespace ordkit::io
