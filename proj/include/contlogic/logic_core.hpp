#pragma once

// Vocabularies, terms and formulas of continuous first-order logic with
// truth values in [0,1], where 0 means "true".

#include <contlogic/error.hpp>
#include <contlogic/rational.hpp>

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace contlogic {

inline constexpr const char* kDistance = "d";

enum class SymbolKind { Predicate, Function };

struct Symbol {
  std::string name;
  SymbolKind kind = SymbolKind::Predicate;
  std::size_t arity = 0;
  /// Lipschitz constant per coordinate; absent means unchecked.
  std::optional<Rational> modulus;

  bool same_signature(const Symbol& other) const {
    return name == other.name && kind == other.kind && arity == other.arity;
  }
  friend bool operator==(const Symbol& a, const Symbol& b) {
    return a.same_signature(b) && a.modulus == b.modulus;
  }
};

inline Symbol predicate(std::string name, std::size_t arity, std::optional<Rational> modulus = std::nullopt) {
  return Symbol{std::move(name), SymbolKind::Predicate, arity, std::move(modulus)};
}

inline Symbol function(std::string name, std::size_t arity, std::optional<Rational> modulus = std::nullopt) {
  return Symbol{std::move(name), SymbolKind::Function, arity, std::move(modulus)};
}

/// A set of symbols keyed by name. Always contains the binary distance
/// predicate d.
class Vocabulary {
 public:
  Vocabulary() { symbols_.emplace(kDistance, predicate(kDistance, 2)); }

  Vocabulary(std::initializer_list<Symbol> symbols) : Vocabulary() {
    for (const auto& s : symbols) add(s);
  }

  /// Adds a symbol. Re-adding an identical signature is a no-op (a declared
  /// modulus wins over an absent one); a conflicting one throws.
  void add(const Symbol& symbol) {
    if (symbol.name.empty()) throw Error(ErrorKind::InvalidArgument, "empty symbol name");
    if (symbol.name == kDistance &&
        (symbol.kind != SymbolKind::Predicate || symbol.arity != 2)) {
      throw Error(ErrorKind::ArityMismatch, "d must be a binary predicate");
    }
    auto [it, inserted] = symbols_.emplace(symbol.name, symbol);
    if (inserted) return;
    if (!it->second.same_signature(symbol)) {
      throw Error(ErrorKind::DuplicateName, "symbol '" + symbol.name + "' declared with conflicting signature");
    }
    if (!it->second.modulus) it->second.modulus = symbol.modulus;
  }

  const Symbol* find(const std::string& name) const {
    auto it = symbols_.find(name);
    return it == symbols_.end() ? nullptr : &it->second;
  }

  bool contains(const std::string& name) const { return symbols_.count(name) != 0; }

  /// Signature containment: every symbol here appears in `other` with the
  /// same kind and arity. Moduli are ignored.
  bool subset_of(const Vocabulary& other) const {
    for (const auto& [name, s] : symbols_) {
      const Symbol* o = other.find(name);
      if (o == nullptr || !o->same_signature(s)) return false;
    }
    return true;
  }

  /// Symbols present in both with matching signatures.
  Vocabulary intersect(const Vocabulary& other) const {
    Vocabulary out;
    for (const auto& [name, s] : symbols_) {
      const Symbol* o = other.find(name);
      if (o != nullptr && o->same_signature(s)) out.add(s);
    }
    return out;
  }

  Vocabulary unite(const Vocabulary& other) const {
    Vocabulary out = *this;
    for (const auto& [name, s] : other.symbols_) out.add(s);
    return out;
  }

  std::size_t size() const { return symbols_.size(); }
  auto begin() const { return symbols_.begin(); }
  auto end() const { return symbols_.end(); }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.symbols_ == b.symbols_; }

 private:
  std::map<std::string, Symbol> symbols_;
};

/// Either a variable or a function application; 0-ary applications are
/// constants.
class Term {
 public:
  static Term variable(std::string name) { return Term(true, std::move(name), {}); }
  static Term apply(std::string function, std::vector<Term> args = {}) {
    return Term(false, std::move(function), std::move(args));
  }

  bool is_variable() const { return variable_; }
  const std::string& name() const { return name_; }
  const std::vector<Term>& args() const { return args_; }

  friend bool operator==(const Term& a, const Term& b) {
    return a.variable_ == b.variable_ && a.name_ == b.name_ && a.args_ == b.args_;
  }

 private:
  Term(bool variable, std::string name, std::vector<Term> args)
      : variable_(variable), name_(std::move(name)), args_(std::move(args)) {}

  bool variable_;
  std::string name_;
  std::vector<Term> args_;
};

enum class Connective {
  Const,
  Atom,
  Neg,
  Min,
  Max,
  DotMinus,
  DotPlus,
  Prod,
  ScaleDivClamp,
  Sup,
  Inf,
};

inline bool is_binary(Connective c) {
  return c == Connective::Min || c == Connective::Max || c == Connective::DotMinus ||
         c == Connective::DotPlus || c == Connective::Prod;
}

inline bool is_quantifier(Connective c) { return c == Connective::Sup || c == Connective::Inf; }

/// Immutable formula tree. Copies share structure.
class Formula {
 public:
  static Formula constant(const Rational& r) {
    if (!in_unit_interval(r)) {
      throw Error(ErrorKind::ConstantOutOfRange, to_string(r) + " is not in [0,1]");
    }
    Node n;
    n.op = Connective::Const;
    n.value = r;
    return Formula(std::move(n));
  }

  static Formula atom(std::string predicate, std::vector<Term> terms = {}) {
    Node n;
    n.op = Connective::Atom;
    n.name = std::move(predicate);
    n.terms = std::move(terms);
    return Formula(std::move(n));
  }

  static Formula neg(const Formula& f) { return unary(Connective::Neg, f); }
  static Formula min(const Formula& f, const Formula& g) { return binary(Connective::Min, f, g); }
  static Formula max(const Formula& f, const Formula& g) { return binary(Connective::Max, f, g); }
  static Formula dot_minus(const Formula& f, const Formula& g) { return binary(Connective::DotMinus, f, g); }
  static Formula dot_plus(const Formula& f, const Formula& g) { return binary(Connective::DotPlus, f, g); }
  static Formula prod(const Formula& f, const Formula& g) { return binary(Connective::Prod, f, g); }

  static Formula scale_div_clamp(const Formula& f, const Rational& q) {
    if (q <= 0) throw Error(ErrorKind::InvalidArgument, "scale divisor must be positive, got " + to_string(q));
    Node n;
    n.op = Connective::ScaleDivClamp;
    n.value = q;
    n.left = f.node_;
    return Formula(std::move(n));
  }

  static Formula sup(std::string var, const Formula& body) { return quantifier(Connective::Sup, std::move(var), body); }
  static Formula inf(std::string var, const Formula& body) { return quantifier(Connective::Inf, std::move(var), body); }

  Connective op() const { return node_->op; }
  /// Constant value for Const, divisor for ScaleDivClamp.
  const Rational& value() const { return node_->value; }
  /// Predicate name for Atom, bound variable for Sup/Inf.
  const std::string& name() const { return node_->name; }
  const std::vector<Term>& terms() const { return node_->terms; }
  /// Operand of unary nodes and quantifier bodies; left operand of binaries.
  Formula left() const { return Formula(node_->left); }
  Formula right() const { return Formula(node_->right); }
  Formula body() const { return left(); }

  bool same_node(const Formula& other) const { return node_ == other.node_; }

  friend bool operator==(const Formula& a, const Formula& b) { return equal(a.node_.get(), b.node_.get()); }

 private:
  struct Node {
    Connective op = Connective::Const;
    Rational value;
    std::string name;
    std::vector<Term> terms;
    std::shared_ptr<const Node> left;
    std::shared_ptr<const Node> right;
  };

  explicit Formula(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static Formula unary(Connective op, const Formula& f) {
    Node n;
    n.op = op;
    n.left = f.node_;
    return Formula(std::move(n));
  }

  static Formula binary(Connective op, const Formula& f, const Formula& g) {
    Node n;
    n.op = op;
    n.left = f.node_;
    n.right = g.node_;
    return Formula(std::move(n));
  }

  static Formula quantifier(Connective op, std::string var, const Formula& body) {
    if (var.empty()) throw Error(ErrorKind::InvalidArgument, "empty variable name");
    Node n;
    n.op = op;
    n.name = std::move(var);
    n.left = body.node_;
    return Formula(std::move(n));
  }

  static bool equal(const Node* a, const Node* b) {
    if (a == b) return true;
    if (a == nullptr || b == nullptr) return false;
    if (a->op != b->op || a->value != b->value || a->name != b->name || a->terms != b->terms) return false;
    return equal(a->left.get(), b->left.get()) && equal(a->right.get(), b->right.get());
  }

  std::shared_ptr<const Node> node_;
};

// Builders matching the connective algebra.

inline Formula constant(const Rational& r) { return Formula::constant(r); }

/// max(f - g, 0).
inline Formula dot_minus(const Formula& f, const Formula& g) { return Formula::dot_minus(f, g); }

/// min(f + g, 1).
inline Formula dot_plus(const Formula& f, const Formula& g) { return Formula::dot_plus(f, g); }

/// min(f / q, 1); q must be positive.
inline Formula scale_div_clamp(const Formula& f, const Rational& q) { return Formula::scale_div_clamp(f, q); }

namespace detail {

inline void term_variables(const Term& t, const std::set<std::string>& bound, std::set<std::string>& out) {
  if (t.is_variable()) {
    if (bound.count(t.name()) == 0) out.insert(t.name());
    return;
  }
  for (const auto& a : t.args()) term_variables(a, bound, out);
}

inline void free_variables(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (f.op()) {
    case Connective::Const:
      return;
    case Connective::Atom:
      for (const auto& t : f.terms()) term_variables(t, bound, out);
      return;
    case Connective::Neg:
    case Connective::ScaleDivClamp:
      free_variables(f.left(), bound, out);
      return;
    case Connective::Sup:
    case Connective::Inf: {
      const bool fresh = bound.insert(f.name()).second;
      free_variables(f.body(), bound, out);
      if (fresh) bound.erase(f.name());
      return;
    }
    default:
      free_variables(f.left(), bound, out);
      free_variables(f.right(), bound, out);
      return;
  }
}

inline void add_symbol(Vocabulary& v, const Symbol& s) {
  const Symbol* existing = v.find(s.name);
  if (existing != nullptr && !existing->same_signature(s)) {
    throw Error(ErrorKind::ArityMismatch, "symbol '" + s.name + "' used with conflicting arity or kind");
  }
  v.add(s);
}

inline void term_symbols(const Term& t, Vocabulary& v) {
  if (t.is_variable()) return;
  add_symbol(v, function(t.name(), t.args().size()));
  for (const auto& a : t.args()) term_symbols(a, v);
}

inline void formula_symbols(const Formula& f, Vocabulary& v) {
  switch (f.op()) {
    case Connective::Const:
      return;
    case Connective::Atom:
      add_symbol(v, predicate(f.name(), f.terms().size()));
      for (const auto& t : f.terms()) term_symbols(t, v);
      return;
    case Connective::Neg:
    case Connective::ScaleDivClamp:
    case Connective::Sup:
    case Connective::Inf:
      formula_symbols(f.left(), v);
      return;
    default:
      formula_symbols(f.left(), v);
      formula_symbols(f.right(), v);
      return;
  }
}

}  // namespace detail

/// Variables occurring outside the scope of a binder for them. An inner
/// binder of the same name shadows the outer one.
inline std::set<std::string> free_variables(const Formula& f) {
  std::set<std::string> bound;
  std::set<std::string> out;
  detail::free_variables(f, bound, out);
  return out;
}

/// Symbols occurring in `f`, plus d. Throws ArityMismatch if one name is
/// used with two different signatures.
inline Vocabulary vocabulary_of(const Formula& f) {
  Vocabulary v;
  detail::formula_symbols(f, v);
  return v;
}

/// Number of formula nodes (atoms count once regardless of their terms).
inline std::size_t formula_size(const Formula& f) {
  switch (f.op()) {
    case Connective::Const:
    case Connective::Atom:
      return 1;
    case Connective::Neg:
    case Connective::ScaleDivClamp:
    case Connective::Sup:
    case Connective::Inf:
      return 1 + formula_size(f.left());
    default:
      return 1 + formula_size(f.left()) + formula_size(f.right());
  }
}

/// A formula with no free variables.
class Sentence {
 public:
  /// Throws FreeVariable if `f` has free variables.
  explicit Sentence(Formula f) : formula_(std::move(f)) {
    auto free = free_variables(formula_);
    if (!free.empty()) throw Error(ErrorKind::FreeVariable, "'" + *free.begin() + "' is not bound");
  }

  const Formula& formula() const { return formula_; }
  operator const Formula&() const { return formula_; }

  friend bool operator==(const Sentence& a, const Sentence& b) { return a.formula_ == b.formula_; }

 private:
  Formula formula_;
};

inline Sentence sentence(Formula f) { return Sentence(std::move(f)); }

inline Vocabulary vocabulary_of(const Sentence& s) { return vocabulary_of(s.formula()); }

}  // namespace contlogic
