#pragma once

// Family-relative verdicts and their line-oriented text form:
//
//   PASS <clause> * checked=<n>
//   PASS <clause> * vacuous
//   FAIL <clause> <model> <key>=<value> ...
//
// A FAIL line shows the first counterexample in family order.

#include <contlogic/rational.hpp>

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace contlogic {

struct Witness {
  std::string model;
  std::vector<std::pair<std::string, Rational>> values;

  const Rational* value(const std::string& key) const {
    for (const auto& [k, v] : values) {
      if (k == key) return &v;
    }
    return nullptr;
  }
};

/// One checked inequality. `checked` counts the members on which the
/// premise held; zero means the clause passed vacuously.
struct Clause {
  std::string name;
  std::size_t checked = 0;
  std::vector<Witness> counterexamples;

  bool passed() const { return counterexamples.empty(); }
  bool vacuous() const { return checked == 0; }
};

struct Certificate {
  std::string kind;
  std::vector<Clause> clauses;

  bool passed() const {
    return std::all_of(clauses.begin(), clauses.end(), [](const Clause& c) { return c.passed(); });
  }

  /// True when some clause had no member to check.
  bool vacuous() const {
    return std::any_of(clauses.begin(), clauses.end(), [](const Clause& c) { return c.vacuous(); });
  }

  const Clause* clause(const std::string& name) const {
    for (const auto& c : clauses) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }
};

inline std::string format_clause(const Clause& c) {
  if (c.passed()) {
    return "PASS " + c.name + " * " + (c.vacuous() ? std::string("vacuous") : "checked=" + std::to_string(c.checked));
  }
  const Witness& w = c.counterexamples.front();
  std::string line = "FAIL " + c.name + " " + w.model;
  for (const auto& [key, value] : w.values) line += " " + key + "=" + to_string(value);
  return line;
}

inline std::string format_certificate(const Certificate& cert) {
  std::string out;
  for (const auto& c : cert.clauses) out += format_clause(c) + "\n";
  return out;
}

}  // namespace contlogic
