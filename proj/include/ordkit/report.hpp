#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ordkit/subset.hpp"

namespace ordkit {

/// A named property together with the elements that refute (or illustrate) it.
struct Witness {
  std::string property;
  std::vector<Elem> elements;

  friend bool operator==(const Witness&, const Witness&) = default;
};

/// Outcome of checking one item of a property suite. `witness` holds the
/// first counterexample tuple when `passed` is false.
struct PropertyCheck {
  std::string id;
  bool passed = true;
  std::size_t checked = 0;
  std::vector<Elem> witness;
  std::string detail;

  void fail(std::vector<Elem> w, std::string why = {}) {
    if (!passed) return;
    passed = false;
    witness = std::move(w);
    detail = std::move(why);
  }
};

/// A list of checks plus free-form informational notes.
struct PropertyReport {
  std::string title;
  std::vector<PropertyCheck> items;
  std::vector<std::string> notes;

  PropertyReport() = default;
  PropertyReport(std::string t) : title(std::move(t)) {}  // NOLINT(google-explicit-constructor)

  bool passed() const {
    for (const auto& c : items) {
      if (!c.passed) return false;
    }
    return true;
  }
  PropertyCheck& add(std::string id) {
    items.emplace_back().id = std::move(id);
    return items.back();
  }
  const PropertyCheck* find(const std::string& id) const {
    for (const auto& c : items) {
      if (c.id == id) return &c;
    }
    return nullptr;
  }
  const PropertyCheck* first_failure() const {
    for (const auto& c : items) {
      if (!c.passed) return &c;
    }
    return nullptr;
  }
};

}  // namespace ordkit
