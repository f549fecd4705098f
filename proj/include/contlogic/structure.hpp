#pragma once

// Finite [0,1]-valued structures, model families and theories.

#include <contlogic/error.hpp>
#include <contlogic/logic_core.hpp>
#include <contlogic/rational.hpp>

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace contlogic {

using Element = std::size_t;

/// Finite structure with total tables. A fresh structure has every predicate
/// at 0, every function mapping to the first element, and the discrete metric.
class Structure {
 public:
  Structure(std::string name, Vocabulary vocabulary, std::vector<std::string> universe)
      : name_(std::move(name)), vocabulary_(std::move(vocabulary)), universe_(std::move(universe)) {
    if (universe_.empty()) throw Error(ErrorKind::InvalidArgument, "universe must be nonempty");
    for (Element i = 0; i < universe_.size(); ++i) {
      if (!index_.emplace(universe_[i], i).second) {
        throw Error(ErrorKind::DuplicateName, "universe element '" + universe_[i] + "' listed twice");
      }
    }
    for (const auto& [sym_name, sym] : vocabulary_) {
      const std::size_t cells = table_size(sym.arity);
      if (sym.kind == SymbolKind::Predicate) {
        preds_.emplace(sym_name, std::vector<Rational>(cells, Rational(0)));
      } else {
        funcs_.emplace(sym_name, std::vector<Element>(cells, 0));
      }
    }
    auto& d = preds_.at(kDistance);
    for (Element i = 0; i < size(); ++i) {
      for (Element j = 0; j < size(); ++j) d[i * size() + j] = (i == j) ? 0 : 1;
    }
  }

  const std::string& name() const { return name_; }
  void rename(std::string name) { name_ = std::move(name); }
  const Vocabulary& vocabulary() const { return vocabulary_; }
  const std::vector<std::string>& universe() const { return universe_; }
  std::size_t size() const { return universe_.size(); }

  std::optional<Element> element(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const Rational& pred_value(const std::string& pred, std::span<const Element> args) const {
    return pred_table(pred)[offset(args)];
  }

  Element func_value(const std::string& func, std::span<const Element> args) const {
    return func_table(func)[offset(args)];
  }

  const Rational& distance(Element a, Element b) const { return preds_.at(kDistance)[a * size() + b]; }

  void set_pred(const std::string& pred, std::span<const Element> args, const Rational& value) {
    if (!in_unit_interval(value)) {
      throw Error(ErrorKind::ValueOutOfRange, pred + " value " + to_string(value) + " is not in [0,1]");
    }
    check_args(pred, args);
    mutable_pred(pred)[offset(args)] = value;
  }

  void set_func(const std::string& func, std::span<const Element> args, Element value) {
    check_args(func, args);
    if (value >= size()) throw Error(ErrorKind::UnknownElement, "function value out of universe");
    auto it = funcs_.find(func);
    if (it == funcs_.end()) throw Error(ErrorKind::MissingSymbol, "no function '" + func + "'");
    it->second[offset(args)] = value;
  }

  /// Sets d(a,b) and d(b,a).
  void set_distance(Element a, Element b, const Rational& value) {
    const Element ab[] = {a, b};
    const Element ba[] = {b, a};
    set_pred(kDistance, ab, value);
    set_pred(kDistance, ba, value);
  }

  /// Number of cells in a table of the given arity.
  std::size_t table_size(std::size_t arity) const {
    std::size_t cells = 1;
    for (std::size_t i = 0; i < arity; ++i) cells *= universe_.size();
    return cells;
  }

  /// The argument tuple stored at `cell`, most significant coordinate first.
  std::vector<Element> tuple_at(std::size_t cell, std::size_t arity) const {
    std::vector<Element> args(arity);
    for (std::size_t i = arity; i-- > 0;) {
      args[i] = cell % size();
      cell /= size();
    }
    return args;
  }

  std::size_t offset(std::span<const Element> args) const {
    std::size_t cell = 0;
    for (Element a : args) cell = cell * size() + a;
    return cell;
  }

  const std::vector<Rational>& pred_table(const std::string& pred) const {
    auto it = preds_.find(pred);
    if (it == preds_.end()) throw Error(ErrorKind::MissingSymbol, "no predicate '" + pred + "' in " + name_);
    return it->second;
  }

  const std::vector<Element>& func_table(const std::string& func) const {
    auto it = funcs_.find(func);
    if (it == funcs_.end()) throw Error(ErrorKind::MissingSymbol, "no function '" + func + "' in " + name_);
    return it->second;
  }

  /// Copy restricted to `v`; callers guarantee v is contained in the
  /// vocabulary.
  Structure restricted_to(const Vocabulary& v) const {
    Structure out = *this;
    out.vocabulary_ = v;
    std::erase_if(out.preds_, [&](const auto& kv) { return !v.contains(kv.first); });
    std::erase_if(out.funcs_, [&](const auto& kv) { return !v.contains(kv.first); });
    return out;
  }

  friend bool operator==(const Structure& a, const Structure& b) {
    return a.name_ == b.name_ && a.vocabulary_ == b.vocabulary_ && a.universe_ == b.universe_ &&
           a.preds_ == b.preds_ && a.funcs_ == b.funcs_;
  }

 private:
  std::vector<Rational>& mutable_pred(const std::string& pred) {
    auto it = preds_.find(pred);
    if (it == preds_.end()) throw Error(ErrorKind::MissingSymbol, "no predicate '" + pred + "' in " + name_);
    return it->second;
  }

  void check_args(const std::string& sym, std::span<const Element> args) const {
    const Symbol* s = vocabulary_.find(sym);
    if (s == nullptr) throw Error(ErrorKind::MissingSymbol, "no symbol '" + sym + "' in " + name_);
    if (s->arity != args.size()) throw Error(ErrorKind::ArityMismatch, sym + " expects " + std::to_string(s->arity));
    for (Element a : args) {
      if (a >= size()) throw Error(ErrorKind::UnknownElement, "element index out of universe");
    }
  }

  std::string name_;
  Vocabulary vocabulary_;
  std::vector<std::string> universe_;
  std::unordered_map<std::string, Element> index_;
  std::map<std::string, std::vector<Rational>> preds_;
  std::map<std::string, std::vector<Element>> funcs_;
};

/// Named, ordered set of structures over one vocabulary. The finite universe
/// of discourse for every consequence check.
class ModelFamily {
 public:
  ModelFamily(std::string name, Vocabulary vocabulary) : name_(std::move(name)), vocabulary_(std::move(vocabulary)) {}

  void add(Structure member) {
    if (!(member.vocabulary() == vocabulary_)) {
      throw Error(ErrorKind::VocabularyMismatch,
                  "structure '" + member.name() + "' does not match the vocabulary of family '" + name_ + "'");
    }
    for (const auto& m : members_) {
      if (m.name() == member.name()) throw Error(ErrorKind::DuplicateName, "structure '" + member.name() + "' listed twice");
    }
    members_.push_back(std::move(member));
  }

  const std::string& name() const { return name_; }
  const Vocabulary& vocabulary() const { return vocabulary_; }
  const std::vector<Structure>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }

 private:
  std::string name_;
  Vocabulary vocabulary_;
  std::vector<Structure> members_;
};

class Theory {
 public:
  Theory() = default;
  Theory(std::initializer_list<Sentence> sentences) : sentences_(sentences) {}
  explicit Theory(std::vector<Sentence> sentences) : sentences_(std::move(sentences)) {}

  void add(Sentence s) { sentences_.push_back(std::move(s)); }

  const std::vector<Sentence>& sentences() const { return sentences_; }
  std::size_t size() const { return sentences_.size(); }
  bool empty() const { return sentences_.empty(); }
  auto begin() const { return sentences_.begin(); }
  auto end() const { return sentences_.end(); }

  Vocabulary vocabulary() const {
    Vocabulary v;
    for (const auto& s : sentences_) v = v.unite(vocabulary_of(s));
    return v;
  }

  /// This theory plus extra sentences.
  Theory with(std::initializer_list<Sentence> extra) const {
    Theory out = *this;
    for (const auto& s : extra) out.add(s);
    return out;
  }

 private:
  std::vector<Sentence> sentences_;
};

inline Theory unite(const Theory& a, const Theory& b) {
  Theory out = a;
  for (const auto& s : b) out.add(s);
  return out;
}

}  // namespace contlogic
