#pragma once

// Exact evaluation in finite structures, metric and modulus validation,
// reducts, and consequence relative to a finite model family.
//
// Every "T entails X" check here quantifies over the members of an explicit
// ModelFamily, not over all metric structures.

#include <contlogic/certificate.hpp>
#include <contlogic/error.hpp>
#include <contlogic/logic_core.hpp>
#include <contlogic/rational.hpp>
#include <contlogic/structure.hpp>

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace contlogic {

using Assignment = std::map<std::string, Element>;

namespace detail {

// Innermost binding last, so lookup from the back honours shadowing.
using Scope = std::vector<std::pair<const std::string*, Element>>;

inline Element eval_term(const Structure& m, const Term& t, const Scope& scope) {
  if (t.is_variable()) {
    for (auto it = scope.rbegin(); it != scope.rend(); ++it) {
      if (*it->first == t.name()) return it->second;
    }
    throw Error(ErrorKind::UnboundVariable, "'" + t.name() + "' has no value");
  }
  const Symbol* sym = m.vocabulary().find(t.name());
  if (sym == nullptr || sym->kind != SymbolKind::Function) {
    throw Error(ErrorKind::MissingSymbol, "function '" + t.name() + "' is not in the vocabulary of " + m.name());
  }
  if (sym->arity != t.args().size()) {
    throw Error(ErrorKind::ArityMismatch, t.name() + " expects " + std::to_string(sym->arity) + " arguments");
  }
  if (t.args().empty()) return m.func_table(t.name())[0];
  std::vector<Element> args;
  args.reserve(t.args().size());
  for (const auto& a : t.args()) args.push_back(eval_term(m, a, scope));
  return m.func_value(t.name(), args);
}

inline Rational eval(const Structure& m, const Formula& f, Scope& scope) {
  switch (f.op()) {
    case Connective::Const:
      return f.value();
    case Connective::Atom: {
      const Symbol* sym = m.vocabulary().find(f.name());
      if (sym == nullptr || sym->kind != SymbolKind::Predicate) {
        throw Error(ErrorKind::MissingSymbol, "predicate '" + f.name() + "' is not in the vocabulary of " + m.name());
      }
      if (sym->arity != f.terms().size()) {
        throw Error(ErrorKind::ArityMismatch, f.name() + " expects " + std::to_string(sym->arity) + " arguments");
      }
      std::vector<Element> args;
      args.reserve(f.terms().size());
      for (const auto& t : f.terms()) args.push_back(eval_term(m, t, scope));
      return m.pred_value(f.name(), args);
    }
    case Connective::Neg:
      return 1 - eval(m, f.left(), scope);
    case Connective::Min:
      return std::min(eval(m, f.left(), scope), eval(m, f.right(), scope));
    case Connective::Max:
      return std::max(eval(m, f.left(), scope), eval(m, f.right(), scope));
    case Connective::DotMinus: {
      Rational v = eval(m, f.left(), scope) - eval(m, f.right(), scope);
      return v < 0 ? Rational(0) : v;
    }
    case Connective::DotPlus: {
      Rational v = eval(m, f.left(), scope) + eval(m, f.right(), scope);
      return v > 1 ? Rational(1) : v;
    }
    case Connective::Prod:
      return eval(m, f.left(), scope) * eval(m, f.right(), scope);
    case Connective::ScaleDivClamp: {
      Rational v = eval(m, f.left(), scope) / f.value();
      return v > 1 ? Rational(1) : v;
    }
    case Connective::Sup:
    case Connective::Inf: {
      const bool is_sup = f.op() == Connective::Sup;
      const Formula body = f.body();
      scope.emplace_back(&f.name(), 0);
      Rational best = eval(m, body, scope);
      for (Element e = 1; e < m.size(); ++e) {
        scope.back().second = e;
        Rational v = eval(m, body, scope);
        if (is_sup ? v > best : v < best) best = std::move(v);
      }
      scope.pop_back();
      return best;
    }
  }
  return Rational(0);
}

}  // namespace detail

/// Exact value of `f` in `m` under `assignment`. sup/inf range over the
/// finite universe.
inline Rational evaluate(const Structure& m, const Formula& f, const Assignment& assignment = {}) {
  detail::Scope scope;
  scope.reserve(assignment.size() + 4);
  for (const auto& [var, e] : assignment) {
    if (e >= m.size()) throw Error(ErrorKind::UnknownElement, "assignment for '" + var + "' is outside the universe");
    scope.emplace_back(&var, e);
  }
  return detail::eval(m, f, scope);
}

// ---------------------------------------------------------------------------
// Structure validation

enum class MetricMode {
  Strict,
  /// d(x,y)=0 is allowed for x!=y: the structure is a general [0,1]-valued
  /// structure rather than a metric structure.
  Pseudo,
};

enum class ViolationKind { Reflexivity, Separation, Symmetry, Triangle, Lipschitz };

inline const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::Reflexivity: return "reflexivity";
    case ViolationKind::Separation: return "separation";
    case ViolationKind::Symmetry: return "symmetry";
    case ViolationKind::Triangle: return "triangle";
    case ViolationKind::Lipschitz: return "lipschitz";
  }
  return "?";
}

/// `witness` lists element ids. For Lipschitz violations it is the argument
/// tuple followed by the replacement element at `position`, and `values`
/// holds (lhs, rhs) of the failed inequality.
struct Violation {
  ViolationKind kind;
  std::string symbol;
  std::size_t position = 0;
  std::vector<std::string> witness;
  std::vector<Rational> values;
};

struct StructureReport {
  bool metric_ok = true;
  bool lipschitz_ok = true;
  std::vector<Violation> violations;

  bool ok() const { return metric_ok && lipschitz_ok; }

  /// First violation of a kind; within a kind violations are in
  /// lexicographic witness order.
  const Violation* first(ViolationKind kind) const {
    for (const auto& v : violations) {
      if (v.kind == kind) return &v;
    }
    return nullptr;
  }
};

inline std::string format_violation(const Violation& v) {
  std::string line = to_string(v.kind);
  if (!v.symbol.empty()) line += " " + v.symbol + "@" + std::to_string(v.position);
  line += " (";
  for (std::size_t i = 0; i < v.witness.size(); ++i) line += (i ? "," : "") + v.witness[i];
  line += ")";
  for (const auto& r : v.values) line += " " + to_string(r);
  return line;
}

/// Checks the metric axioms on d and the declared Lipschitz bounds. Finite
/// metrics are complete, so completeness is not checked.
inline StructureReport check_structure(const Structure& m, MetricMode mode = MetricMode::Strict) {
  StructureReport report;
  const auto& u = m.universe();
  const std::size_t n = m.size();
  auto add = [&](Violation v) {
    if (v.kind == ViolationKind::Lipschitz) {
      report.lipschitz_ok = false;
    } else {
      report.metric_ok = false;
    }
    report.violations.push_back(std::move(v));
  };

  for (Element x = 0; x < n; ++x) {
    if (m.distance(x, x) != 0) add({ViolationKind::Reflexivity, "", 0, {u[x]}, {m.distance(x, x)}});
  }
  if (mode == MetricMode::Strict) {
    for (Element x = 0; x < n; ++x) {
      for (Element y = 0; y < n; ++y) {
        if (x != y && m.distance(x, y) == 0) add({ViolationKind::Separation, "", 0, {u[x], u[y]}, {Rational(0)}});
      }
    }
  }
  for (Element x = 0; x < n; ++x) {
    for (Element y = x + 1; y < n; ++y) {
      if (m.distance(x, y) != m.distance(y, x)) {
        add({ViolationKind::Symmetry, "", 0, {u[x], u[y]}, {m.distance(x, y), m.distance(y, x)}});
      }
    }
  }
  for (Element x = 0; x < n; ++x) {
    for (Element y = 0; y < n; ++y) {
      for (Element z = 0; z < n; ++z) {
        const Rational rhs = m.distance(x, y) + m.distance(y, z);
        if (m.distance(x, z) > rhs) add({ViolationKind::Triangle, "", 0, {u[x], u[y], u[z]}, {m.distance(x, z), rhs}});
      }
    }
  }

  for (const auto& [name, sym] : m.vocabulary()) {
    if (!sym.modulus || sym.arity == 0) continue;
    const Rational& lip = *sym.modulus;
    const std::size_t cells = m.table_size(sym.arity);
    for (std::size_t cell = 0; cell < cells; ++cell) {
      const std::vector<Element> args = m.tuple_at(cell, sym.arity);
      for (std::size_t pos = 0; pos < sym.arity; ++pos) {
        for (Element y = 0; y < n; ++y) {
          if (y == args[pos]) continue;
          std::vector<Element> moved = args;
          moved[pos] = y;
          const Rational bound = lip * m.distance(args[pos], y);
          Rational gap;
          if (sym.kind == SymbolKind::Predicate) {
            gap = abs(m.pred_value(name, args) - m.pred_value(name, moved));
          } else {
            gap = m.distance(m.func_value(name, args), m.func_value(name, moved));
          }
          if (gap > bound) {
            std::vector<std::string> witness;
            for (Element a : args) witness.push_back(u[a]);
            witness.push_back(u[y]);
            add({ViolationKind::Lipschitz, name, pos, std::move(witness), {gap, bound}});
          }
        }
      }
    }
  }
  return report;
}

/// The V-part of `n`: same universe, tables restricted to `v`, d retained.
inline Structure reduct(const Structure& n, const Vocabulary& v) {
  Vocabulary kept;
  for (const auto& [name, sym] : v) {
    const Symbol* own = n.vocabulary().find(name);
    if (own == nullptr || !own->same_signature(sym)) {
      throw Error(ErrorKind::MissingSymbol, "symbol '" + name + "' is not present in " + n.name());
    }
    kept.add(*own);
  }
  return n.restricted_to(kept);
}

// ---------------------------------------------------------------------------
// Family-relative consequence

inline void require_within(const Vocabulary& inner, const Vocabulary& outer, const std::string& what) {
  if (!inner.subset_of(outer)) {
    for (const auto& [name, sym] : inner) {
      const Symbol* o = outer.find(name);
      if (o == nullptr || !o->same_signature(sym)) {
        throw Error(ErrorKind::VocabularyMismatch, what + " uses '" + name + "' outside the available vocabulary");
      }
    }
  }
}

/// True iff every sentence of `t` has value 0 in `m`.
inline bool satisfies(const Structure& m, const Theory& t) {
  return std::all_of(t.begin(), t.end(), [&](const Sentence& s) { return evaluate(m, s) == 0; });
}

/// Indices of the members that are models of `t`, in family order.
inline std::vector<std::size_t> model_indices(const ModelFamily& f, const Theory& t) {
  require_within(t.vocabulary(), f.vocabulary(), "theory");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (satisfies(f.members()[i], t)) out.push_back(i);
  }
  return out;
}

inline ModelFamily family_models(const ModelFamily& f, const Theory& t) {
  ModelFamily out(f.name(), f.vocabulary());
  for (std::size_t i : model_indices(f, t)) out.add(f.members()[i]);
  return out;
}

inline bool family_consistent(const ModelFamily& f, const Theory& t) { return !model_indices(f, t).empty(); }

/// Whether lhs >= rhs in every model of `t` in `f`. Counterexamples carry
/// lhs and rhs values.
inline Clause family_entails_ge(const ModelFamily& f, const Theory& t, const Sentence& lhs, const Sentence& rhs) {
  require_within(vocabulary_of(lhs), f.vocabulary(), "left-hand side");
  require_within(vocabulary_of(rhs), f.vocabulary(), "right-hand side");
  Clause c{"ge", 0, {}};
  for (std::size_t i : model_indices(f, t)) {
    const Structure& m = f.members()[i];
    ++c.checked;
    Rational l = evaluate(m, lhs);
    Rational r = evaluate(m, rhs);
    if (l < r) c.counterexamples.push_back({m.name(), {{"lhs", l}, {"rhs", r}}});
  }
  return c;
}

// ---------------------------------------------------------------------------
// Interpolant checkers

/// φ over V with side theory T_V, ψ over W with side theory T_W, all
/// interpreted in one family whose vocabulary contains V and W.
struct InterpolationProblem {
  ModelFamily family;
  Vocabulary left_vocabulary;
  Vocabulary right_vocabulary;
  Theory left_theory;
  Theory right_theory;
  Sentence phi;
  Sentence psi;

  Vocabulary common_vocabulary() const { return left_vocabulary.intersect(right_vocabulary); }

  /// Takes V from φ and T_V, W from ψ and T_W.
  static InterpolationProblem infer(ModelFamily family, Theory left_theory, Theory right_theory, Sentence phi,
                                    Sentence psi) {
    Vocabulary v = left_theory.vocabulary().unite(vocabulary_of(phi));
    Vocabulary w = right_theory.vocabulary().unite(vocabulary_of(psi));
    InterpolationProblem p{std::move(family), std::move(v),    std::move(w), std::move(left_theory),
                           std::move(right_theory), std::move(phi), std::move(psi)};
    p.validate();
    return p;
  }

  void validate() const {
    require_within(vocabulary_of(phi), left_vocabulary, "phi");
    require_within(left_theory.vocabulary(), left_vocabulary, "left theory");
    require_within(vocabulary_of(psi), right_vocabulary, "psi");
    require_within(right_theory.vocabulary(), right_vocabulary, "right theory");
    require_within(left_vocabulary.unite(right_vocabulary), family.vocabulary(), "problem");
  }

  void require_common(const Formula& theta, const std::string& what = "theta") const {
    const Vocabulary common = common_vocabulary();
    for (const auto& [name, sym] : vocabulary_of(theta)) {
      const Symbol* c = common.find(name);
      if (c == nullptr || !c->same_signature(sym)) {
        throw Error(ErrorKind::CommonVocabulary, what + " mentions '" + name + "' outside the common vocabulary");
      }
    }
  }
};

inline void require_epsilon(const Rational& eps) {
  if (eps <= 0 || eps > 1) throw Error(ErrorKind::InvalidArgument, "epsilon must be in (0,1], got " + to_string(eps));
}

/// c1: every T_V-model with φ=0 has θ=0.
/// c2: every T_W-model with θ=0 has ψ<=ε.
inline Certificate is_weak_interpolant(const InterpolationProblem& p, const Sentence& theta, const Rational& eps) {
  require_epsilon(eps);
  p.require_common(theta);
  Certificate cert{"weak", {{"c1", 0, {}}, {"c2", 0, {}}}};
  const auto& members = p.family.members();
  for (std::size_t i : model_indices(p.family, p.left_theory)) {
    const Structure& m = members[i];
    const Rational phi = evaluate(m, p.phi);
    if (phi != 0) continue;
    ++cert.clauses[0].checked;
    const Rational th = evaluate(m, theta);
    if (th != 0) cert.clauses[0].counterexamples.push_back({m.name(), {{"phi", phi}, {"theta", th}}});
  }
  for (std::size_t i : model_indices(p.family, p.right_theory)) {
    const Structure& m = members[i];
    const Rational th = evaluate(m, theta);
    if (th != 0) continue;
    ++cert.clauses[1].checked;
    const Rational psi = evaluate(m, p.psi);
    if (psi > eps) cert.clauses[1].counterexamples.push_back({m.name(), {{"theta", th}, {"psi", psi}, {"eps", eps}}});
  }
  return cert;
}

/// i: every T_V-model has φ>=θ.  ii: every T_W-model has θ>=ψ∸ε.
inline Certificate is_strong_interpolant(const InterpolationProblem& p, const Sentence& theta, const Rational& eps) {
  require_epsilon(eps);
  p.require_common(theta);
  Certificate cert{"strong", {{"i", 0, {}}, {"ii", 0, {}}}};
  const auto& members = p.family.members();
  for (std::size_t i : model_indices(p.family, p.left_theory)) {
    const Structure& m = members[i];
    ++cert.clauses[0].checked;
    const Rational phi = evaluate(m, p.phi);
    const Rational th = evaluate(m, theta);
    if (phi < th) cert.clauses[0].counterexamples.push_back({m.name(), {{"phi", phi}, {"theta", th}}});
  }
  for (std::size_t i : model_indices(p.family, p.right_theory)) {
    const Structure& m = members[i];
    ++cert.clauses[1].checked;
    const Rational th = evaluate(m, theta);
    const Rational psi = evaluate(m, p.psi);
    const Rational floor = psi > eps ? Rational(psi - eps) : Rational(0);
    if (th < floor) cert.clauses[1].counterexamples.push_back({m.name(), {{"theta", th}, {"psi", psi}, {"eps", eps}}});
  }
  return cert;
}

/// s1: every model of T_V with φ=0 has θ=1.  s2: every model of T_W with
/// ψ=0 has θ=0.
inline Certificate is_separating(const InterpolationProblem& p, const Sentence& theta) {
  p.require_common(theta);
  Certificate cert{"separation", {{"s1", 0, {}}, {"s2", 0, {}}}};
  const auto& members = p.family.members();
  for (std::size_t i : model_indices(p.family, p.left_theory)) {
    const Structure& m = members[i];
    const Rational phi = evaluate(m, p.phi);
    if (phi != 0) continue;
    ++cert.clauses[0].checked;
    const Rational th = evaluate(m, theta);
    if (th != 1) cert.clauses[0].counterexamples.push_back({m.name(), {{"phi", phi}, {"theta", th}}});
  }
  for (std::size_t i : model_indices(p.family, p.right_theory)) {
    const Structure& m = members[i];
    const Rational psi = evaluate(m, p.psi);
    if (psi != 0) continue;
    ++cert.clauses[1].checked;
    const Rational th = evaluate(m, theta);
    if (th != 0) cert.clauses[1].counterexamples.push_back({m.name(), {{"psi", psi}, {"theta", th}}});
  }
  return cert;
}

}  // namespace contlogic
