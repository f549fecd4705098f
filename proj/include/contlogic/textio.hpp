#pragma once

// Text formats.
//
// Sentences (.csnt):
//   atoms       P(t1, ..., tn)   0-ary predicates may be written bare: P
//   terms       x | c | f(t1, ..., tn)    (c() forces a constant)
//   constants   INT or INT/INT in [0,1]
//   unary       ~f                       1 - f
//   infix       f * g   f /. q   f -. g   f +. g
//   functions   min(f, g)  max(f, g)
//   quantifiers sup x . f    inf x . f    (body extends as far right as possible)
// Precedence, tightest first: ~, *, /., then left-associative -. and +.,
// then quantifiers. A bare identifier in term position is a variable if a
// quantifier binds it, otherwise a constant when the vocabulary declares a
// 0-ary function of that name, otherwise a free variable.
//
// Theories: one sentence per line; blank lines and '#' comments ignored.
//
// Structures (.cstr):
//   structure NAME
//   universe a b c
//   pred P 1 [lipschitz L]
//   func f 1 [lipschitz L]
//   dist
//   P a = 1/4
//   f a = b
//   d a b = 1/2
//   end
// d(x,x) defaults to 0, `d a b = r` fills both orders, and a pair without
// an entry defaults to 1. Predicate and function tables must be total.
//
// Families (.cfam):
//   family NAME
//   pred/func declarations (the family vocabulary)
//   structure blocks (inheriting the family vocabulary) or `include FILE`

#include <contlogic/error.hpp>
#include <contlogic/logic_core.hpp>
#include <contlogic/rational.hpp>
#include <contlogic/structure.hpp>

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace contlogic {

// ---------------------------------------------------------------------------
// Sentence printer

namespace detail {

inline void print_term(const Term& t, const std::vector<std::string>& bound, std::string& out) {
  out += t.name();
  if (t.is_variable()) return;
  if (t.args().empty()) {
    if (std::find(bound.begin(), bound.end(), t.name()) != bound.end()) out += "()";
    return;
  }
  out += "(";
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    if (i) out += ", ";
    print_term(t.args()[i], bound, out);
  }
  out += ")";
}

// `bare` marks positions where a quantifier may appear unparenthesized.
inline void print_formula(const Formula& f, bool bare, std::vector<std::string>& bound, std::string& out) {
  auto infix = [&](const char* op) {
    out += "(";
    print_formula(f.left(), false, bound, out);
    out += op;
    print_formula(f.right(), false, bound, out);
    out += ")";
  };
  auto call = [&](const char* fn) {
    out += fn;
    out += "(";
    print_formula(f.left(), true, bound, out);
    out += ", ";
    print_formula(f.right(), true, bound, out);
    out += ")";
  };
  switch (f.op()) {
    case Connective::Const:
      out += to_string(f.value());
      return;
    case Connective::Atom:
      out += f.name();
      if (f.terms().empty()) return;
      out += "(";
      for (std::size_t i = 0; i < f.terms().size(); ++i) {
        if (i) out += ", ";
        print_term(f.terms()[i], bound, out);
      }
      out += ")";
      return;
    case Connective::Neg:
      out += "~";
      print_formula(f.left(), false, bound, out);
      return;
    case Connective::Min: call("min"); return;
    case Connective::Max: call("max"); return;
    case Connective::DotMinus: infix(" -. "); return;
    case Connective::DotPlus: infix(" +. "); return;
    case Connective::Prod: infix(" * "); return;
    case Connective::ScaleDivClamp:
      out += "(";
      print_formula(f.left(), false, bound, out);
      out += " /. " + to_string(f.value()) + ")";
      return;
    case Connective::Sup:
    case Connective::Inf:
      if (!bare) out += "(";
      out += f.op() == Connective::Sup ? "sup " : "inf ";
      out += f.name() + " . ";
      bound.push_back(f.name());
      print_formula(f.body(), true, bound, out);
      bound.pop_back();
      if (!bare) out += ")";
      return;
  }
}

}  // namespace detail

/// Canonical text: binary infix nodes are parenthesized, rationals are in
/// lowest terms.
inline std::string print_formula(const Formula& f) {
  std::string out;
  std::vector<std::string> bound;
  detail::print_formula(f, true, bound, out);
  return out;
}

inline std::string print_sentence(const Sentence& s) { return print_formula(s.formula()); }

// ---------------------------------------------------------------------------
// Sentence parser

namespace detail {

enum class Tok { Ident, Rat, LParen, RParen, Comma, Dot, Tilde, Star, DotMinus, DotPlus, SlashDot, End };

struct Token {
  Tok kind;
  std::string text;
  SourcePos pos;
};

inline std::vector<Token> lex(std::string_view src, SourcePos start) {
  std::vector<Token> out;
  std::size_t line = start.line, col = start.column;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  auto is_ident_start = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
  auto is_ident = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; };
  auto is_digit = [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; };
  while (i < src.size()) {
    const char c = src[i];
    const SourcePos pos{line, col};
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    auto next = [&](std::size_t k) { return i + k < src.size() ? src[i + k] : '\0'; };
    if (is_ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && is_ident(src[j])) ++j;
      out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), pos});
      advance(j - i);
      continue;
    }
    if (is_digit(c)) {
      std::size_t j = i;
      while (j < src.size() && is_digit(src[j])) ++j;
      if (j + 1 < src.size() && src[j] == '/' && is_digit(src[j + 1])) {
        ++j;
        while (j < src.size() && is_digit(src[j])) ++j;
      }
      out.push_back({Tok::Rat, std::string(src.substr(i, j - i)), pos});
      advance(j - i);
      continue;
    }
    if (c == '-' && next(1) == '.') {
      out.push_back({Tok::DotMinus, "-.", pos});
      advance(2);
      continue;
    }
    if (c == '+' && next(1) == '.') {
      out.push_back({Tok::DotPlus, "+.", pos});
      advance(2);
      continue;
    }
    if (c == '/' && next(1) == '.') {
      out.push_back({Tok::SlashDot, "/.", pos});
      advance(2);
      continue;
    }
    Tok single;
    switch (c) {
      case '(': single = Tok::LParen; break;
      case ')': single = Tok::RParen; break;
      case ',': single = Tok::Comma; break;
      case '.': single = Tok::Dot; break;
      case '~': single = Tok::Tilde; break;
      case '*': single = Tok::Star; break;
      default:
        throw Error(ErrorKind::Syntax, std::string("unexpected character '") + c + "'", pos);
    }
    out.push_back({single, std::string(1, c), pos});
    advance(1);
  }
  out.push_back({Tok::End, "", SourcePos{line, col}});
  return out;
}

inline bool is_keyword(const std::string& s) { return s == "sup" || s == "inf" || s == "min" || s == "max"; }

class SentenceParser {
 public:
  SentenceParser(std::string_view src, const Vocabulary* vocab, SourcePos start)
      : tokens_(lex(src, start)), vocab_(vocab) {}

  Formula parse_all() {
    Formula f = formula();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
    return f;
  }

  const std::optional<std::pair<std::string, SourcePos>>& first_free() const { return first_free_; }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& take() { return tokens_[pos_++]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::Syntax, peek().kind == Tok::End ? msg + " at end of input" : msg, peek().pos);
  }
  const Token& expect(Tok k, const char* what) {
    if (peek().kind != k) fail(std::string("expected ") + what);
    return take();
  }

  Rational rational(const Token& t) {
    auto r = parse_rational(t.text);
    if (!r) throw Error(ErrorKind::Syntax, "malformed rational '" + t.text + "'", t.pos);
    return *r;
  }

  // Arity bookkeeping for a symbol, against the vocabulary when one is given
  // and against earlier uses otherwise.
  void note_symbol(const std::string& name, SymbolKind kind, std::size_t arity, SourcePos pos) {
    if (vocab_ != nullptr) {
      const Symbol* s = vocab_->find(name);
      if (s == nullptr) throw Error(ErrorKind::UnknownSymbol, "'" + name + "' is not in the vocabulary", pos);
      if (s->kind != kind) {
        throw Error(ErrorKind::ArityMismatch,
                    "'" + name + "' is declared as a " + (s->kind == SymbolKind::Predicate ? "predicate" : "function"),
                    pos);
      }
      if (s->arity != arity) {
        throw Error(ErrorKind::ArityMismatch,
                    "'" + name + "' expects " + std::to_string(s->arity) + " arguments, got " + std::to_string(arity),
                    pos);
      }
      return;
    }
    if (name == kDistance && (kind != SymbolKind::Predicate || arity != 2)) {
      throw Error(ErrorKind::ArityMismatch, "d is a binary predicate", pos);
    }
    auto [it, inserted] = seen_.emplace(name, std::make_pair(kind, arity));
    if (!inserted && it->second != std::make_pair(kind, arity)) {
      throw Error(ErrorKind::ArityMismatch, "'" + name + "' used with conflicting arity or kind", pos);
    }
  }

  Formula formula() {
    Formula f = scaled();
    for (;;) {
      if (accept(Tok::DotMinus)) {
        f = Formula::dot_minus(f, scaled());
      } else if (accept(Tok::DotPlus)) {
        f = Formula::dot_plus(f, scaled());
      } else {
        return f;
      }
    }
  }

  Formula scaled() {
    Formula f = product();
    while (peek().kind == Tok::SlashDot) {
      take();
      const Token& t = expect(Tok::Rat, "a rational divisor after '/.'");
      Rational q = rational(t);
      if (q <= 0) throw Error(ErrorKind::InvalidArgument, "divisor must be positive", t.pos);
      f = Formula::scale_div_clamp(f, q);
    }
    return f;
  }

  Formula product() {
    Formula f = unary();
    while (accept(Tok::Star)) f = Formula::prod(f, unary());
    return f;
  }

  Formula unary() {
    if (accept(Tok::Tilde)) return Formula::neg(unary());
    return primary();
  }

  Formula primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Rat: {
        take();
        Rational r = rational(t);
        if (!in_unit_interval(r)) throw Error(ErrorKind::ConstantOutOfRange, t.text + " is not in [0,1]", t.pos);
        return Formula::constant(r);
      }
      case Tok::LParen: {
        take();
        Formula f = formula();
        expect(Tok::RParen, "')'");
        return f;
      }
      case Tok::Ident:
        break;
      default:
        fail("expected a formula");
    }
    const Token& id = take();
    if (id.text == "sup" || id.text == "inf") {
      const Token& var = expect(Tok::Ident, "a variable after quantifier");
      if (is_keyword(var.text)) throw Error(ErrorKind::Syntax, "'" + var.text + "' is a keyword", var.pos);
      expect(Tok::Dot, "'.' after quantified variable");
      bound_.push_back(var.text);
      Formula body = formula();
      bound_.pop_back();
      return id.text == "sup" ? Formula::sup(var.text, body) : Formula::inf(var.text, body);
    }
    if (id.text == "min" || id.text == "max") {
      expect(Tok::LParen, "'('");
      Formula a = formula();
      expect(Tok::Comma, "','");
      Formula b = formula();
      expect(Tok::RParen, "')'");
      return id.text == "min" ? Formula::min(a, b) : Formula::max(a, b);
    }
    std::vector<Term> args;
    if (accept(Tok::LParen)) args = term_list();
    note_symbol(id.text, SymbolKind::Predicate, args.size(), id.pos);
    return Formula::atom(id.text, std::move(args));
  }

  std::vector<Term> term_list() {
    std::vector<Term> args;
    if (accept(Tok::RParen)) return args;
    do {
      args.push_back(term());
    } while (accept(Tok::Comma));
    expect(Tok::RParen, "')' or ','");
    return args;
  }

  Term term() {
    const Token& id = expect(Tok::Ident, "a term");
    if (is_keyword(id.text)) throw Error(ErrorKind::Syntax, "'" + id.text + "' is a keyword", id.pos);
    if (accept(Tok::LParen)) {
      std::vector<Term> args = term_list();
      note_symbol(id.text, SymbolKind::Function, args.size(), id.pos);
      return Term::apply(id.text, std::move(args));
    }
    if (std::find(bound_.begin(), bound_.end(), id.text) != bound_.end()) return Term::variable(id.text);
    if (vocab_ != nullptr) {
      const Symbol* s = vocab_->find(id.text);
      if (s != nullptr && s->kind == SymbolKind::Function) {
        note_symbol(id.text, SymbolKind::Function, 0, id.pos);
        return Term::apply(id.text);
      }
    }
    if (!first_free_) first_free_ = std::make_pair(id.text, id.pos);
    return Term::variable(id.text);
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const Vocabulary* vocab_;
  std::vector<std::string> bound_;
  std::map<std::string, std::pair<SymbolKind, std::size_t>> seen_;
  std::optional<std::pair<std::string, SourcePos>> first_free_;
};

}  // namespace detail

/// Parses a formula that may have free variables. With a vocabulary, every
/// symbol must be declared there with a matching arity.
inline Formula parse_formula(std::string_view src, const Vocabulary* vocab = nullptr, SourcePos start = {1, 1}) {
  detail::SentenceParser p(src, vocab, start);
  return p.parse_all();
}

inline Sentence parse_sentence(std::string_view src, const Vocabulary* vocab = nullptr, SourcePos start = {1, 1}) {
  detail::SentenceParser p(src, vocab, start);
  Formula f = p.parse_all();
  if (p.first_free()) {
    throw Error(ErrorKind::FreeVariable, "'" + p.first_free()->first + "' is not bound", p.first_free()->second);
  }
  return Sentence(std::move(f));
}

namespace detail {

inline std::vector<std::string_view> split_lines(std::string_view src) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= src.size()) {
    std::size_t end = src.find('\n', start);
    if (end == std::string_view::npos) end = src.size();
    std::string_view line = src.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (end == src.size()) break;
    start = end + 1;
  }
  return lines;
}

inline std::string_view strip_comment(std::string_view line) {
  auto hash = line.find('#');
  if (hash != std::string_view::npos) line = line.substr(0, hash);
  while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.remove_suffix(1);
  while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front()))) line.remove_prefix(1);
  return line;
}

}  // namespace detail

/// One sentence per nonblank line. `first_line` shifts reported positions.
inline Theory parse_theory(std::string_view src, const Vocabulary* vocab = nullptr, std::size_t first_line = 1) {
  Theory t;
  auto lines = detail::split_lines(src);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (detail::strip_comment(lines[i]).empty()) continue;
    t.add(parse_sentence(lines[i], vocab, SourcePos{first_line + i, 1}));
  }
  return t;
}

// ---------------------------------------------------------------------------
// Structures and families

namespace detail {

struct Line {
  std::vector<std::string> words;
  SourcePos pos;
};

inline std::vector<Line> tokenize_lines(std::string_view src) {
  std::vector<Line> out;
  auto lines = split_lines(src);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view body = lines[i];
    auto hash = body.find('#');
    if (hash != std::string_view::npos) body = body.substr(0, hash);
    Line line;
    std::size_t j = 0;
    std::size_t first_col = 0;
    while (j < body.size()) {
      while (j < body.size() && std::isspace(static_cast<unsigned char>(body[j]))) ++j;
      if (j >= body.size()) break;
      std::size_t k = j;
      // '=' is always its own word.
      if (body[k] == '=') {
        ++k;
      } else {
        while (k < body.size() && !std::isspace(static_cast<unsigned char>(body[k])) && body[k] != '=') ++k;
      }
      if (line.words.empty()) first_col = j + 1;
      line.words.emplace_back(body.substr(j, k - j));
      j = k;
    }
    if (line.words.empty()) continue;
    line.pos = SourcePos{i + 1, first_col};
    out.push_back(std::move(line));
  }
  return out;
}

inline Rational parse_value(const std::string& word, SourcePos pos) {
  auto r = parse_rational(word);
  if (!r) throw Error(ErrorKind::Syntax, "expected a rational, got '" + word + "'", pos);
  return *r;
}

/// `pred NAME ARITY [lipschitz L]` or `func ...`.
inline Symbol parse_declaration(const Line& line) {
  const auto& w = line.words;
  if (w.size() != 3 && w.size() != 5) {
    throw Error(ErrorKind::Syntax, "expected '" + w[0] + " NAME ARITY [lipschitz L]'", line.pos);
  }
  auto arity = parse_rational(w[2]);
  if (!arity || boost::multiprecision::denominator(*arity) != 1 || *arity < 0) {
    throw Error(ErrorKind::Syntax, "arity must be a nonnegative integer", line.pos);
  }
  Symbol s;
  s.name = w[1];
  s.kind = w[0] == "pred" ? SymbolKind::Predicate : SymbolKind::Function;
  s.arity = static_cast<std::size_t>(boost::multiprecision::numerator(*arity));
  if (w.size() == 5) {
    if (w[3] != "lipschitz") throw Error(ErrorKind::Syntax, "expected 'lipschitz'", line.pos);
    Rational l = parse_value(w[4], line.pos);
    if (l < 0) throw Error(ErrorKind::ValueOutOfRange, "Lipschitz constant must be nonnegative", line.pos);
    s.modulus = l;
  }
  if (s.name == kDistance) throw Error(ErrorKind::Syntax, "d is declared implicitly", line.pos);
  return s;
}

inline bool is_structure_keyword(const std::string& w) {
  return w == "structure" || w == "universe" || w == "pred" || w == "func" || w == "dist" || w == "end" ||
         w == "family" || w == "include";
}

/// Parses lines[i] == "structure NAME" through the matching "end"; leaves
/// `i` after the end line. With `inherited`, the block starts from that
/// vocabulary and any declaration must repeat one of its symbols exactly.
inline Structure parse_structure_block(const std::vector<Line>& lines, std::size_t& i, const Vocabulary* inherited) {
  const Line& head = lines[i];
  if (head.words[0] != "structure" || head.words.size() != 2) {
    throw Error(ErrorKind::Syntax, "expected 'structure NAME'", head.pos);
  }
  const std::string name = head.words[1];
  ++i;
  Vocabulary vocab = inherited ? *inherited : Vocabulary{};
  std::map<std::string, SourcePos> declared_at;
  std::optional<std::vector<std::string>> universe;
  SourcePos universe_pos;

  struct Entry {
    std::vector<std::string> args;
    std::string value;
    SourcePos pos;
  };
  std::vector<std::pair<std::string, Entry>> entries;

  bool closed = false;
  for (; i < lines.size(); ++i) {
    const Line& line = lines[i];
    const auto& w = line.words;
    if (w[0] == "end" && w.size() == 1) {
      closed = true;
      ++i;
      break;
    }
    if (std::find(w.begin(), w.end(), "=") != w.end()) {
      if (w.size() < 3 || w[w.size() - 2] != "=") throw Error(ErrorKind::Syntax, "expected 'SYMBOL ARGS... = VALUE'", line.pos);
      Entry e{std::vector<std::string>(w.begin() + 1, w.end() - 2), w.back(), line.pos};
      entries.emplace_back(w[0], std::move(e));
      continue;
    }
    if (w[0] == "universe") {
      if (universe) throw Error(ErrorKind::Syntax, "universe declared twice", line.pos);
      if (w.size() < 2) throw Error(ErrorKind::Syntax, "universe must be nonempty", line.pos);
      universe = std::vector<std::string>(w.begin() + 1, w.end());
      universe_pos = line.pos;
      continue;
    }
    if (w[0] == "dist" && w.size() == 1) continue;
    if (w[0] == "pred" || w[0] == "func") {
      Symbol s = parse_declaration(line);
      if (inherited != nullptr) {
        const Symbol* own = inherited->find(s.name);
        if (own == nullptr || !(*own == s)) {
          throw Error(ErrorKind::VocabularyMismatch, "'" + s.name + "' does not match the family vocabulary", line.pos);
        }
        continue;
      }
      if (vocab.contains(s.name)) throw Error(ErrorKind::DuplicateName, "'" + s.name + "' declared twice", line.pos);
      vocab.add(s);
      declared_at[s.name] = line.pos;
      continue;
    }
    throw Error(ErrorKind::Syntax, "unexpected '" + w[0] + "' in structure block", line.pos);
  }
  if (!closed) throw Error(ErrorKind::Syntax, "structure '" + name + "' is missing 'end'", head.pos);
  if (!universe) throw Error(ErrorKind::Syntax, "structure '" + name + "' has no universe", head.pos);

  Structure m = [&] {
    try {
      return Structure(name, vocab, *universe);
    } catch (const Error& e) {
      throw Error(e.kind(), e.detail(), universe_pos);
    }
  }();

  auto element = [&](const std::string& id, SourcePos pos) {
    auto e = m.element(id);
    if (!e) throw Error(ErrorKind::UnknownElement, "'" + id + "' is not in the universe of " + name, pos);
    return *e;
  };

  std::map<std::string, std::vector<bool>> filled;
  for (const auto& [sym, sym_info] : vocab) filled[sym].assign(m.table_size(sym_info.arity), false);

  for (const auto& [sym_name, e] : entries) {
    const Symbol* sym = vocab.find(sym_name);
    if (sym == nullptr) throw Error(ErrorKind::UnknownSymbol, "'" + sym_name + "' is not declared", e.pos);
    if (e.args.size() != sym->arity) {
      throw Error(ErrorKind::ArityMismatch,
                  sym_name + " expects " + std::to_string(sym->arity) + " arguments, got " + std::to_string(e.args.size()),
                  e.pos);
    }
    std::vector<Element> args;
    for (const auto& a : e.args) args.push_back(element(a, e.pos));
    const std::size_t cell = m.offset(args);
    if (filled[sym_name][cell]) throw Error(ErrorKind::DuplicateEntry, "second entry for this tuple of " + sym_name, e.pos);
    filled[sym_name][cell] = true;
    if (sym->kind == SymbolKind::Function) {
      m.set_func(sym_name, args, element(e.value, e.pos));
      continue;
    }
    Rational value = parse_value(e.value, e.pos);
    if (!in_unit_interval(value)) {
      throw Error(ErrorKind::ValueOutOfRange, sym_name + " value " + e.value + " is not in [0,1]", e.pos);
    }
    if (sym_name == kDistance) {
      const std::size_t mirror = args[1] * m.size() + args[0];
      if (filled[sym_name][mirror] && mirror != cell) {
        throw Error(ErrorKind::DuplicateEntry, "distance between these elements already given", e.pos);
      }
      filled[sym_name][mirror] = true;
      m.set_distance(args[0], args[1], value);
    } else {
      m.set_pred(sym_name, args, value);
    }
  }

  for (const auto& [sym_name, sym] : vocab) {
    if (sym_name == kDistance) continue;
    const auto& f = filled[sym_name];
    for (std::size_t cell = 0; cell < f.size(); ++cell) {
      if (f[cell]) continue;
      std::string tuple;
      for (Element a : m.tuple_at(cell, sym.arity)) tuple += " " + m.universe()[a];
      auto at = declared_at.count(sym_name) ? declared_at[sym_name] : head.pos;
      throw Error(ErrorKind::MissingTableEntry, "no entry for " + sym_name + tuple + " in " + name, at);
    }
  }
  return m;
}

}  // namespace detail

/// Parses a single `structure ... end` block.
inline Structure parse_structure(std::string_view src) {
  auto lines = detail::tokenize_lines(src);
  if (lines.empty()) throw Error(ErrorKind::Syntax, "empty structure file", SourcePos{1, 1});
  std::size_t i = 0;
  Structure m = detail::parse_structure_block(lines, i, nullptr);
  if (i != lines.size()) throw Error(ErrorKind::Syntax, "trailing content after 'end'", lines[i].pos);
  return m;
}

/// Returns the text of an included file, or throws.
using IncludeResolver = std::function<std::string(const std::string&)>;

inline ModelFamily parse_family(std::string_view src, const IncludeResolver& resolve = {}) {
  auto lines = detail::tokenize_lines(src);
  if (lines.empty() || lines[0].words[0] != "family" || lines[0].words.size() != 2) {
    throw Error(ErrorKind::Syntax, "expected 'family NAME'", lines.empty() ? SourcePos{1, 1} : lines[0].pos);
  }
  const std::string name = lines[0].words[1];
  Vocabulary vocab;
  std::size_t i = 1;
  for (; i < lines.size(); ++i) {
    const auto& w = lines[i].words;
    if (w[0] != "pred" && w[0] != "func") break;
    Symbol s = detail::parse_declaration(lines[i]);
    if (vocab.contains(s.name)) throw Error(ErrorKind::DuplicateName, "'" + s.name + "' declared twice", lines[i].pos);
    vocab.add(s);
  }
  ModelFamily family(name, vocab);
  auto add = [&](Structure m, SourcePos pos) {
    try {
      family.add(std::move(m));
    } catch (const Error& e) {
      throw Error(e.kind(), e.detail(), pos);
    }
  };
  while (i < lines.size()) {
    const detail::Line& line = lines[i];
    if (line.words[0] == "structure") {
      SourcePos pos = line.pos;
      add(detail::parse_structure_block(lines, i, &vocab), pos);
      continue;
    }
    if (line.words[0] == "include" && line.words.size() == 2) {
      if (!resolve) throw Error(ErrorKind::Io, "no include resolver for '" + line.words[1] + "'", line.pos);
      std::string text = resolve(line.words[1]);
      Structure m = [&] {
        try {
          return parse_structure(text);
        } catch (const Error& e) {
          throw Error(e.kind(), "in " + line.words[1] + " at " + std::to_string(e.position().line) + ":" +
                                    std::to_string(e.position().column) + ": " + e.detail(),
                      line.pos);
        }
      }();
      add(std::move(m), line.pos);
      ++i;
      continue;
    }
    throw Error(ErrorKind::Syntax, "expected 'structure NAME' or 'include FILE'", line.pos);
  }
  return family;
}

/// Canonical structure text; parse_structure(print_structure(m)) == m.
inline std::string print_structure(const Structure& m) {
  std::ostringstream out;
  const auto& u = m.universe();
  out << "structure " << m.name() << "\n";
  out << "universe";
  for (const auto& e : u) out << " " << e;
  out << "\n";
  for (const auto& [name, sym] : m.vocabulary()) {
    if (name == kDistance) continue;
    out << (sym.kind == SymbolKind::Predicate ? "pred " : "func ") << name << " " << sym.arity;
    if (sym.modulus) out << " lipschitz " << to_string(*sym.modulus);
    out << "\n";
    const std::size_t cells = m.table_size(sym.arity);
    for (std::size_t cell = 0; cell < cells; ++cell) {
      out << name;
      for (Element a : m.tuple_at(cell, sym.arity)) out << " " << u[a];
      if (sym.kind == SymbolKind::Predicate) {
        out << " = " << to_string(m.pred_table(name)[cell]) << "\n";
      } else {
        out << " = " << u[m.func_table(name)[cell]] << "\n";
      }
    }
  }
  out << "dist\n";
  for (Element a = 0; a < m.size(); ++a) {
    for (Element b = a; b < m.size(); ++b) {
      const Rational& r = m.distance(a, b);
      if ((a == b && r != 0) || (a != b && r != 1)) out << "d " << u[a] << " " << u[b] << " = " << to_string(r) << "\n";
    }
  }
  out << "end\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Files

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Prefixes the file name onto an error from `fn`.
template <typename Fn>
auto with_file_context(const std::filesystem::path& path, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Io || !e.source().empty()) throw;
    throw Error(e.kind(), e.detail(), e.position(), path.string());
  }
}

inline ModelFamily load_family(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  const auto dir = path.parent_path();
  return with_file_context(path, [&] {
    return parse_family(text, [&](const std::string& include) { return read_file(dir / include); });
  });
}

inline Structure load_structure(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  return with_file_context(path, [&] { return parse_structure(text); });
}

inline Theory load_theory(const std::filesystem::path& path, const Vocabulary* vocab = nullptr) {
  const std::string text = read_file(path);
  return with_file_context(path, [&] { return parse_theory(text, vocab); });
}

/// A sentence file holds exactly one sentence (comments allowed).
inline Sentence load_sentence(const std::filesystem::path& path, const Vocabulary* vocab = nullptr) {
  Theory t = load_theory(path, vocab);
  if (t.size() != 1) {
    throw Error(ErrorKind::Syntax, "expected exactly one sentence, found " + std::to_string(t.size()), {}, path.string());
  }
  return t.sentences().front();
}

}  // namespace contlogic
