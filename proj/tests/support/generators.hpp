#pragma once

// Seeded random structures and formulas for property tests.

#include <contlogic/contlogic.hpp>

#include "printers.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <vector>

namespace contlogic::testkit {

/// P/1, Q/1, R/2, E/0 predicates; c/0, e/0, f/1, g/2 functions.
inline Vocabulary fuzz_vocabulary() {
  return Vocabulary{predicate("P", 1), predicate("Q", 1), predicate("R", 2), predicate("E", 0),
                    function("c", 0),  function("e", 0),  function("f", 1),  function("g", 2)};
}

class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

  /// Rational in [0,1] with denominator at most `max_den`.
  Rational unit_rational(long long max_den = 8) {
    const long long den = 1 + static_cast<long long>(pick(static_cast<std::size_t>(max_den)));
    const long long num = static_cast<long long>(pick(static_cast<std::size_t>(den + 1)));
    return Rational(num, den);
  }

  /// Random tables; d is the metric of distinct points k/8 on a line, capped
  /// at 1.
  Structure structure(const Vocabulary& vocab, const std::string& name, std::size_t max_universe = 4) {
    const std::size_t n = 1 + pick(max_universe);
    std::vector<std::string> universe;
    for (std::size_t i = 0; i < n; ++i) universe.push_back("u" + std::to_string(i));
    Structure m(name, vocab, universe);
    std::vector<long long> coords;
    while (coords.size() < n) {
      long long c = static_cast<long long>(pick(12));
      if (std::find(coords.begin(), coords.end(), c) == coords.end()) coords.push_back(c);
    }
    for (Element a = 0; a < n; ++a) {
      for (Element b = a + 1; b < n; ++b) {
        Rational dist(std::abs(coords[a] - coords[b]), 8);
        m.set_distance(a, b, dist > 1 ? Rational(1) : dist);
      }
    }
    for (const auto& [sym_name, sym] : vocab) {
      if (sym_name == kDistance) continue;
      const std::size_t cells = m.table_size(sym.arity);
      for (std::size_t cell = 0; cell < cells; ++cell) {
        auto args = m.tuple_at(cell, sym.arity);
        if (sym.kind == SymbolKind::Predicate) {
          m.set_pred(sym_name, args, unit_rational());
        } else {
          m.set_func(sym_name, args, pick(n));
        }
      }
    }
    return m;
  }

  ModelFamily family(const Vocabulary& vocab, std::size_t members, const std::string& name = "fuzz") {
    ModelFamily f(name, vocab);
    for (std::size_t i = 0; i < members; ++i) f.add(structure(vocab, "m" + std::to_string(i)));
    return f;
  }

  Term term(const Vocabulary& vocab, const std::vector<std::string>& vars, int depth) {
    std::vector<const Symbol*> funcs;
    for (const auto& [name, sym] : vocab) {
      if (sym.kind == SymbolKind::Function && (depth > 0 || sym.arity == 0)) funcs.push_back(&sym);
    }
    if (!vars.empty() && (funcs.empty() || coin(0.6))) return Term::variable(vars[pick(vars.size())]);
    const Symbol* f = funcs[pick(funcs.size())];
    std::vector<Term> args;
    for (std::size_t i = 0; i < f->arity; ++i) args.push_back(term(vocab, vars, depth - 1));
    return Term::apply(f->name, std::move(args));
  }

  Formula atom(const Vocabulary& vocab, const std::vector<std::string>& vars) {
    std::vector<const Symbol*> preds;
    for (const auto& [name, sym] : vocab) {
      if (sym.kind == SymbolKind::Predicate) preds.push_back(&sym);
    }
    const Symbol* p = preds[pick(preds.size())];
    std::vector<Term> args;
    for (std::size_t i = 0; i < p->arity; ++i) args.push_back(term(vocab, vars, 1));
    return Formula::atom(p->name, std::move(args));
  }

  /// Random formula whose free variables are among `vars`. Requires a 0-ary
  /// function in `vocab` when `vars` is empty and atoms need arguments.
  Formula formula(const Vocabulary& vocab, int depth, std::vector<std::string> vars = {}) {
    if (depth <= 0 || coin(0.2)) return coin(0.3) ? constant(unit_rational()) : atom(vocab, vars);
    switch (pick(10)) {
      case 0: return Formula::neg(formula(vocab, depth - 1, vars));
      case 1: return Formula::min(formula(vocab, depth - 1, vars), formula(vocab, depth - 1, vars));
      case 2: return Formula::max(formula(vocab, depth - 1, vars), formula(vocab, depth - 1, vars));
      case 3: return dot_minus(formula(vocab, depth - 1, vars), formula(vocab, depth - 1, vars));
      case 4: return dot_plus(formula(vocab, depth - 1, vars), formula(vocab, depth - 1, vars));
      case 5: return Formula::prod(formula(vocab, depth - 1, vars), formula(vocab, depth - 1, vars));
      case 6: {
        Rational q(1 + static_cast<long long>(pick(8)), 1 + static_cast<long long>(pick(4)));
        return scale_div_clamp(formula(vocab, depth - 1, vars), q);
      }
      default: {
        static const char* names[] = {"x", "y", "z"};
        std::string v = names[pick(3)];
        auto inner = vars;
        inner.push_back(v);
        Formula body = formula(vocab, depth - 1, inner);
        return coin() ? Formula::sup(v, body) : Formula::inf(v, body);
      }
    }
  }

  Sentence sentence(const Vocabulary& vocab, int depth) { return Sentence(formula(vocab, depth)); }

  /// Formulas without ~ and with only constants to the right of -., hence
  /// non-decreasing in every predicate entry.
  Formula monotone_formula(const Vocabulary& vocab, int depth, std::vector<std::string> vars = {}) {
    if (depth <= 0 || coin(0.2)) return coin(0.2) ? constant(unit_rational()) : atom(vocab, vars);
    switch (pick(8)) {
      case 0: return Formula::min(monotone_formula(vocab, depth - 1, vars), monotone_formula(vocab, depth - 1, vars));
      case 1: return Formula::max(monotone_formula(vocab, depth - 1, vars), monotone_formula(vocab, depth - 1, vars));
      case 2: return dot_minus(monotone_formula(vocab, depth - 1, vars), constant(unit_rational()));
      case 3: return dot_plus(monotone_formula(vocab, depth - 1, vars), monotone_formula(vocab, depth - 1, vars));
      case 4: return Formula::prod(monotone_formula(vocab, depth - 1, vars), monotone_formula(vocab, depth - 1, vars));
      case 5: return scale_div_clamp(monotone_formula(vocab, depth - 1, vars), unit_rational(4) + Rational(1, 4));
      default: {
        static const char* names[] = {"x", "y"};
        std::string v = names[pick(2)];
        auto inner = vars;
        inner.push_back(v);
        Formula body = monotone_formula(vocab, depth - 1, inner);
        return coin() ? Formula::sup(v, body) : Formula::inf(v, body);
      }
    }
  }

  /// Isomorphic copy: new element i is old element perm[i], renamed.
  Structure permuted(const Structure& m) {
    std::vector<Element> perm(m.size());
    for (Element i = 0; i < perm.size(); ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng_);
    std::vector<Element> inverse(perm.size());
    for (Element i = 0; i < perm.size(); ++i) inverse[perm[i]] = i;
    std::vector<std::string> names;
    for (Element i = 0; i < perm.size(); ++i) names.push_back("v" + std::to_string(perm.size() - i));
    Structure out(m.name() + "_perm", m.vocabulary(), names);
    for (const auto& [name, sym] : m.vocabulary()) {
      for (std::size_t cell = 0; cell < out.table_size(sym.arity); ++cell) {
        auto args = out.tuple_at(cell, sym.arity);
        std::vector<Element> old;
        for (Element a : args) old.push_back(perm[a]);
        if (sym.kind == SymbolKind::Predicate) {
          out.set_pred(name, args, m.pred_value(name, old));
        } else {
          out.set_func(name, args, inverse[m.func_value(name, old)]);
        }
      }
    }
    return out;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace contlogic::testkit
