#pragma once

// Bounded enumeration of common-vocabulary sentences, used as a
// family-relative stand-in for the existence of weak interpolants.
//
// Candidate grammar at scope depth j (variables x1..xj in scope):
//   constants from the pool
//   P(t1..tk) for predicates P, terms t drawn from x1..xj and 0-ary functions
//   ~f, f -. g, f +. g, min(f,g), max(f,g)
//   sup x{j+1} . f, inf x{j+1} . f     while j < max depth
// Candidates are closed formulas ordered by node count, then by canonical
// text (byte order).

#include <contlogic/error.hpp>
#include <contlogic/interp.hpp>
#include <contlogic/logic_core.hpp>
#include <contlogic/rational.hpp>
#include <contlogic/semantics.hpp>
#include <contlogic/textio.hpp>

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace contlogic {

struct SearchBudget {
  unsigned max_depth = 1;
  std::size_t max_candidates = 10000;
  std::vector<Rational> constant_pool = {Rational(0), Rational(1, 2), Rational(1)};

  void validate() const {
    if (max_candidates == 0) throw Error(ErrorKind::InvalidArgument, "candidate budget must be positive");
    for (const auto& c : constant_pool) {
      if (!in_unit_interval(c)) throw Error(ErrorKind::ConstantOutOfRange, to_string(c) + " is not in [0,1]");
    }
  }
};

/// Variable prefix not colliding with any "<prefix><digits>" symbol name.
inline std::string fresh_variable_prefix(const Vocabulary& vocab) {
  std::string prefix = "x";
  auto clashes = [&](const std::string& p) {
    for (const auto& [name, sym] : vocab) {
      if (name.size() > p.size() && name.compare(0, p.size(), p) == 0 &&
          std::all_of(name.begin() + static_cast<std::ptrdiff_t>(p.size()), name.end(),
                      [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; })) {
        return true;
      }
    }
    return false;
  };
  while (clashes(prefix)) prefix += "_";
  return prefix;
}

/// Bottom-up generator of the candidate grammar, memoized per (scope depth,
/// size).
class SentenceEnumerator {
 public:
  struct Candidate {
    std::string text;
    Sentence sentence;
  };

  SentenceEnumerator(const Vocabulary& vocab, unsigned max_depth, std::vector<Rational> pool)
      : max_depth_(max_depth), pool_(std::move(pool)), prefix_(fresh_variable_prefix(vocab)) {
    std::sort(pool_.begin(), pool_.end());
    pool_.erase(std::unique(pool_.begin(), pool_.end()), pool_.end());
    for (const auto& [name, sym] : vocab) {
      if (sym.kind == SymbolKind::Predicate) {
        predicates_.push_back(sym);
      } else if (sym.arity == 0) {
        constants_.push_back(name);
      }
    }
    banks_.resize(max_depth_ + 1);
  }

  /// True when the grammar has no formulas at all.
  bool barren() {
    for (unsigned j = 0; j <= max_depth_; ++j) {
      if (!bank(j, 1).empty()) return false;
    }
    return true;
  }

  /// Closed candidates of exactly `size` nodes in canonical order.
  std::vector<Candidate> sentences_of_size(std::size_t size) {
    std::vector<Candidate> out;
    for (const auto& f : bank(0, size)) out.push_back({print_formula(f), Sentence(f)});
    std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) { return a.text < b.text; });
    return out;
  }

 private:
  std::string variable(unsigned depth) const { return prefix_ + std::to_string(depth); }

  std::vector<Term> terms_at(unsigned depth) const {
    std::vector<Term> terms;
    for (unsigned v = 1; v <= depth; ++v) terms.push_back(Term::variable(variable(v)));
    for (const auto& c : constants_) terms.push_back(Term::apply(c));
    return terms;
  }

  const std::vector<Formula>& bank(unsigned depth, std::size_t size) {
    auto& by_size = banks_[depth];
    if (auto it = by_size.find(size); it != by_size.end()) return it->second;
    std::vector<Formula> out;
    if (size == 1) {
      for (const auto& c : pool_) out.push_back(constant(c));
      const std::vector<Term> terms = terms_at(depth);
      for (const auto& p : predicates_) {
        std::vector<std::size_t> idx(p.arity, 0);
        if (p.arity > 0 && terms.empty()) continue;
        for (;;) {
          std::vector<Term> args;
          for (std::size_t i : idx) args.push_back(terms[i]);
          out.push_back(Formula::atom(p.name, std::move(args)));
          std::size_t pos = p.arity;
          while (pos > 0 && ++idx[pos - 1] == terms.size()) idx[--pos] = 0;
          if (pos == 0) break;
        }
      }
    } else {
      for (const auto& f : bank(depth, size - 1)) out.push_back(Formula::neg(f));
      for (std::size_t left = 1; left + 1 < size; ++left) {
        const std::size_t right = size - 1 - left;
        const auto& ls = bank(depth, left);
        const auto& rs = bank(depth, right);
        for (const auto& a : ls) {
          for (const auto& b : rs) {
            out.push_back(Formula::dot_minus(a, b));
            out.push_back(Formula::dot_plus(a, b));
            out.push_back(Formula::min(a, b));
            out.push_back(Formula::max(a, b));
          }
        }
      }
      if (depth < max_depth_) {
        const std::string var = variable(depth + 1);
        for (const auto& f : bank(depth + 1, size - 1)) {
          out.push_back(Formula::sup(var, f));
          out.push_back(Formula::inf(var, f));
        }
      }
    }
    return by_size.emplace(size, std::move(out)).first->second;
  }

  unsigned max_depth_;
  std::vector<Rational> pool_;
  std::string prefix_;
  std::vector<Symbol> predicates_;
  std::vector<std::string> constants_;
  std::vector<std::map<std::size_t, std::vector<Formula>>> banks_;
};

struct SearchOutcome {
  std::optional<Sentence> sentence;
  /// Candidates tested, including the returned one.
  std::size_t examined = 0;
};

namespace detail {

// Sizes beyond this are never reached within any realistic candidate budget.
inline constexpr std::size_t kMaxCandidateSize = 64;

}  // namespace detail

/// First candidate over V∩W, in canonical order, that is a weak
/// ε-interpolant relative to the family. Absent once the budget is spent.
inline SearchOutcome search_weak_interpolant_detailed(const InterpolationProblem& p, const Rational& eps,
                                                      const SearchBudget& budget) {
  require_epsilon(eps);
  budget.validate();
  p.validate();
  const auto& members = p.family.members();
  // θ must vanish on `zeros` and must not vanish on `nonzeros`.
  std::vector<const Structure*> zeros, nonzeros;
  for (std::size_t i : model_indices(p.family, p.left_theory)) {
    if (evaluate(members[i], p.phi) == 0) zeros.push_back(&members[i]);
  }
  for (std::size_t i : model_indices(p.family, p.right_theory)) {
    if (evaluate(members[i], p.psi) > eps) nonzeros.push_back(&members[i]);
  }

  SearchOutcome outcome;
  SentenceEnumerator gen(p.common_vocabulary(), budget.max_depth, budget.constant_pool);
  if (gen.barren()) return outcome;
  for (std::size_t size = 1; size <= detail::kMaxCandidateSize; ++size) {
    for (auto& cand : gen.sentences_of_size(size)) {
      if (outcome.examined == budget.max_candidates) return outcome;
      ++outcome.examined;
      const bool ok =
          std::all_of(zeros.begin(), zeros.end(), [&](const Structure* m) { return evaluate(*m, cand.sentence) == 0; }) &&
          std::all_of(nonzeros.begin(), nonzeros.end(),
                      [&](const Structure* m) { return evaluate(*m, cand.sentence) != 0; });
      if (ok) {
        outcome.sentence = std::move(cand.sentence);
        return outcome;
      }
    }
  }
  return outcome;
}

inline std::optional<Sentence> search_weak_interpolant(const InterpolationProblem& p, const Rational& eps,
                                                       const SearchBudget& budget) {
  return search_weak_interpolant_detailed(p, eps, budget).sentence;
}

/// Weak-family provider backed by the search: γ_k is searched as a weak
/// ε/2-interpolant of φ∸kε and ψ∸kε, then normalized into ρ_k. Holds a
/// reference to `p`.
inline WeakProvider search_provider(const InterpolationProblem& p, SearchBudget budget) {
  auto gamma_source = [&p, budget = std::move(budget)](std::size_t k, const DyadicLevel& level) {
    const Formula shift = constant(level.point(k));
    InterpolationProblem shifted{p.family,
                                 p.left_vocabulary,
                                 p.right_vocabulary,
                                 p.left_theory,
                                 p.right_theory,
                                 Sentence(dot_minus(p.phi, shift)),
                                 Sentence(dot_minus(p.psi, shift))};
    auto gamma = search_weak_interpolant(shifted, level.epsilon() / 2, budget);
    if (!gamma) throw ProviderFailure(k, "search", std::nullopt, "budget exhausted");
    return *gamma;
  };
  return normalizing_provider(p, gamma_source);
}

}  // namespace contlogic
