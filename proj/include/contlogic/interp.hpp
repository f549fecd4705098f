#pragma once

// Interpolant constructions: the dyadic combinator turning weak
// interpolants into a strong one, separation sentences, and uniformly
// convergent interpolant sequences.

#include <contlogic/certificate.hpp>
#include <contlogic/error.hpp>
#include <contlogic/logic_core.hpp>
#include <contlogic/rational.hpp>
#include <contlogic/semantics.hpp>
#include <contlogic/structure.hpp>
#include <contlogic/textio.hpp>

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace contlogic {

/// ε = 2^(-n) and the grid of its multiples in [0,1), which has 2^n points.
class DyadicLevel {
 public:
  static constexpr unsigned kMaxLevel = 16;

  explicit DyadicLevel(unsigned n) : n_(n) {
    if (n > kMaxLevel) throw Error(ErrorKind::InvalidArgument, "dyadic level " + std::to_string(n) + " is too large");
  }

  /// The coarsest level whose ε does not exceed `eps`.
  static DyadicLevel at_most(const Rational& eps) {
    require_epsilon(eps);
    unsigned n = 0;
    while (dyadic(n) > eps) ++n;
    return DyadicLevel(n);
  }

  unsigned n() const { return n_; }
  Rational epsilon() const { return dyadic(n_); }
  std::size_t size() const { return std::size_t{1} << n_; }
  Rational point(std::size_t k) const { return Rational(static_cast<long long>(k)) * epsilon(); }
  DyadicLevel finer() const { return DyadicLevel(n_ + 1); }

  friend bool operator==(const DyadicLevel&, const DyadicLevel&) = default;

 private:
  unsigned n_;
};

/// ρ_0 … ρ_{2^n-1}, one common-vocabulary sentence per grid point.
class WeakFamily {
 public:
  WeakFamily(DyadicLevel level, std::vector<Sentence> members) : level_(level), members_(std::move(members)) {
    if (members_.size() != level_.size()) {
      throw Error(ErrorKind::LengthMismatch, "level " + std::to_string(level_.n()) + " needs " +
                                                 std::to_string(level_.size()) + " sentences, got " +
                                                 std::to_string(members_.size()));
    }
  }

  const DyadicLevel& level() const { return level_; }
  const std::vector<Sentence>& members() const { return members_; }
  const Sentence& operator[](std::size_t k) const { return members_.at(k); }
  std::size_t size() const { return members_.size(); }

 private:
  DyadicLevel level_;
  std::vector<Sentence> members_;
};

/// `level n` header, then ρ_k on line k.
inline WeakFamily parse_weak_family(std::string_view src, const Vocabulary* vocab = nullptr) {
  auto lines = detail::split_lines(src);
  std::size_t i = 0;
  while (i < lines.size() && detail::strip_comment(lines[i]).empty()) ++i;
  if (i == lines.size()) throw Error(ErrorKind::Syntax, "expected 'level N'", SourcePos{1, 1});
  std::string_view head = detail::strip_comment(lines[i]);
  std::optional<Rational> n;
  if (head.substr(0, 6) == "level ") n = parse_rational(detail::strip_comment(head.substr(6)));
  if (!n || boost::multiprecision::denominator(*n) != 1 || *n < 0 || *n > DyadicLevel::kMaxLevel) {
    throw Error(ErrorKind::Syntax, "expected 'level N'", SourcePos{i + 1, 1});
  }
  const DyadicLevel level(static_cast<unsigned>(boost::multiprecision::numerator(*n)));
  std::vector<Sentence> members;
  for (++i; i < lines.size(); ++i) {
    if (detail::strip_comment(lines[i]).empty()) continue;
    members.push_back(parse_sentence(lines[i], vocab, SourcePos{i + 1, 1}));
  }
  return WeakFamily(level, std::move(members));
}

inline std::string print_weak_family(const WeakFamily& rho) {
  std::string out = "level " + std::to_string(rho.level().n()) + "\n";
  for (const auto& s : rho.members()) out += print_sentence(s) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// The combinator  f(x) = max_k [ (k+1)ε · x_0 · … · x_k ]

/// Exact value of the combinator. Non-decreasing in each coordinate;
/// x_k = 0 forces f <= kε and x_0 = … = x_k = 1 forces f >= (k+1)ε.
inline Rational combinator_value(const DyadicLevel& level, std::span<const Rational> x) {
  if (x.size() != level.size()) {
    throw Error(ErrorKind::LengthMismatch,
                "expected " + std::to_string(level.size()) + " arguments, got " + std::to_string(x.size()));
  }
  // max_k (k+1)·∏x_j is tracked unscaled; ε is applied once at the end.
  Rational best = 0;
  Rational running = 1;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!in_unit_interval(x[k])) throw Error(ErrorKind::ValueOutOfRange, "argument " + to_string(x[k]) + " not in [0,1]");
    if (running.is_zero()) continue;  // later terms vanish; keep validating the rest
    running *= x[k];
    Rational term = running * static_cast<long long>(k + 1);
    if (term > best) best = std::move(term);
  }
  return best * level.epsilon();
}

/// Combinator applied to ρ as a sentence. Term k is
/// prod(const (k+1)ε, prod(ρ_0, prod(ρ_1, … ρ_k))), and terms are joined by
/// a left-nested max.
inline Sentence combinator_sentence(const DyadicLevel& level, const WeakFamily& rho) {
  if (!(rho.level() == level)) {
    throw Error(ErrorKind::LengthMismatch, "weak family is at level " + std::to_string(rho.level().n()) +
                                                ", expected " + std::to_string(level.n()));
  }
  std::optional<Formula> acc;
  for (std::size_t k = 0; k < level.size(); ++k) {
    Formula chain = rho[k].formula();
    for (std::size_t j = k; j-- > 0;) chain = Formula::prod(rho[j].formula(), chain);
    Formula term = Formula::prod(constant(level.point(k + 1)), chain);
    acc = acc ? Formula::max(*acc, term) : term;
  }
  return Sentence(*acc);
}

/// ρ := min(γ/r, 1).
inline Sentence rho_from_gamma(const Sentence& gamma, const Rational& r) {
  if (r <= 0) throw Error(ErrorKind::InvalidArgument, "r must be positive, got " + to_string(r));
  return Sentence(scale_div_clamp(gamma, r));
}

/// θ ∸ ε/2.
inline Sentence halve_adjust(const Sentence& theta, const Rational& eps) {
  require_epsilon(eps);
  return Sentence(dot_minus(theta, constant(eps / 2)));
}

// ---------------------------------------------------------------------------
// Weak-to-strong pipeline

class HypothesisViolation : public Error {
 public:
  explicit HypothesisViolation(Witness w)
      : Error(ErrorKind::HypothesisViolated, describe(w)), witness_(std::move(w)) {}
  const Witness& witness() const { return witness_; }

 private:
  static std::string describe(const Witness& w) {
    std::string s = "phi < psi in " + w.model;
    for (const auto& [k, v] : w.values) s += " " + k + "=" + to_string(v);
    return s;
  }
  Witness witness_;
};

/// The provider's ρ_k failed `clause` ("eq4", "eq5", "eq7", "vocabulary" or
/// "search"); `witness` is empty when there is no model to show.
class ProviderFailure : public Error {
 public:
  ProviderFailure(std::size_t k, std::string clause, std::optional<Witness> witness, const std::string& detail = "")
      : Error(ErrorKind::ProviderFailure, describe(k, clause, witness, detail)),
        k_(k),
        clause_(std::move(clause)),
        witness_(std::move(witness)) {}

  std::size_t k() const { return k_; }
  const std::string& clause() const { return clause_; }
  const std::optional<Witness>& witness() const { return witness_; }

 private:
  static std::string describe(std::size_t k, const std::string& clause, const std::optional<Witness>& w,
                              const std::string& detail) {
    std::string s = "k=" + std::to_string(k) + " " + clause;
    if (w) {
      s += " " + w->model;
      for (const auto& [key, v] : w->values) s += " " + key + "=" + to_string(v);
    }
    if (!detail.empty()) s += " (" + detail + ")";
    return s;
  }
  std::size_t k_;
  std::string clause_;
  std::optional<Witness> witness_;
};

/// Supplies ρ_k for grid index k at the given level.
using WeakProvider = std::function<Sentence(std::size_t k, const DyadicLevel& level)>;

/// eq4[k]: T_V-models with φ <= kε have ρ_k = 0.
/// eq5[k]: T_W-models with ψ >= (k+1)ε have ρ_k = 1.
inline Certificate check_weak_family(const InterpolationProblem& p, const WeakFamily& rho) {
  Certificate cert{"weak-family", {}};
  const auto& members = p.family.members();
  const auto left = model_indices(p.family, p.left_theory);
  const auto right = model_indices(p.family, p.right_theory);
  std::vector<Rational> phi, psi;
  for (std::size_t i : left) phi.push_back(evaluate(members[i], p.phi));
  for (std::size_t i : right) psi.push_back(evaluate(members[i], p.psi));
  const DyadicLevel& level = rho.level();
  for (std::size_t k = 0; k < rho.size(); ++k) {
    Clause eq4{"eq4[" + std::to_string(k) + "]", 0, {}};
    Clause eq5{"eq5[" + std::to_string(k) + "]", 0, {}};
    for (std::size_t a = 0; a < left.size(); ++a) {
      if (phi[a] > level.point(k)) continue;
      ++eq4.checked;
      const Structure& m = members[left[a]];
      Rational v = evaluate(m, rho[k]);
      if (v != 0) eq4.counterexamples.push_back({m.name(), {{"phi", phi[a]}, {"rho", v}}});
    }
    for (std::size_t b = 0; b < right.size(); ++b) {
      if (psi[b] < level.point(k + 1)) continue;
      ++eq5.checked;
      const Structure& m = members[right[b]];
      Rational v = evaluate(m, rho[k]);
      if (v != 1) eq5.counterexamples.push_back({m.name(), {{"psi", psi[b]}, {"rho", v}}});
    }
    cert.clauses.push_back(std::move(eq4));
    cert.clauses.push_back(std::move(eq5));
  }
  return cert;
}

/// Throws HypothesisViolation unless φ >= ψ in every model of T_V ∪ T_W.
inline void require_strong_hypothesis(const InterpolationProblem& p) {
  Clause c = family_entails_ge(p.family, unite(p.left_theory, p.right_theory), p.phi, p.psi);
  if (!c.passed()) throw HypothesisViolation(c.counterexamples.front());
}

struct StrongResult {
  Sentence theta;
  Certificate certificate;
  Rational epsilon;
  /// The weak family the combinator was applied to; absent at level 0.
  std::optional<WeakFamily> weak;
};

/// Builds a strong 2^(-n)-interpolant: collects ρ_k at level n+1 from the
/// provider, re-checks eqs. (4)/(5) on the family, applies the combinator
/// and subtracts ε/2. The returned certificate is is_strong_interpolant on
/// the family.
inline StrongResult strong_from_weak(const InterpolationProblem& p, unsigned n, const WeakProvider& provider) {
  p.validate();
  require_strong_hypothesis(p);
  const DyadicLevel target(n);
  const Rational eps = target.epsilon();
  if (n == 0) {
    // ψ ∸ 1 vanishes everywhere.
    Sentence theta(constant(0));
    return {theta, is_strong_interpolant(p, theta, eps), eps, std::nullopt};
  }
  const DyadicLevel fine = target.finer();
  std::vector<Sentence> members;
  members.reserve(fine.size());
  for (std::size_t k = 0; k < fine.size(); ++k) {
    Sentence rho = provider(k, fine);
    try {
      p.require_common(rho, "rho");
    } catch (const Error& e) {
      throw ProviderFailure(k, "vocabulary", std::nullopt, e.detail());
    }
    members.push_back(std::move(rho));
  }
  WeakFamily weak(fine, std::move(members));
  Certificate checked = check_weak_family(p, weak);
  for (std::size_t c = 0; c < checked.clauses.size(); ++c) {
    const Clause& clause = checked.clauses[c];
    if (!clause.passed()) throw ProviderFailure(c / 2, c % 2 == 0 ? "eq4" : "eq5", clause.counterexamples.front());
  }
  Sentence theta = halve_adjust(combinator_sentence(fine, weak), eps);
  Certificate cert = is_strong_interpolant(p, theta, eps);
  return {theta, std::move(cert), eps, std::move(weak)};
}

/// Provider reading a prepared weak family.
inline WeakProvider weak_family_provider(WeakFamily rho) {
  return [rho = std::move(rho)](std::size_t k, const DyadicLevel& level) {
    if (!(rho.level() == level)) {
      throw Error(ErrorKind::LengthMismatch, "weak family is at level " + std::to_string(rho.level().n()) +
                                                  ", pipeline needs level " + std::to_string(level.n()));
    }
    return rho[k];
  };
}

/// ρ_k := min((φ ∸ kε)/ε, 1). Valid when φ itself is a common-vocabulary
/// sentence.
inline WeakProvider self_provider(const InterpolationProblem& p) {
  return [phi = p.phi](std::size_t k, const DyadicLevel& level) {
    return Sentence(scale_div_clamp(dot_minus(phi, constant(level.point(k))), level.epsilon()));
  };
}

/// Least value of `gamma` over T_W-models with ψ >= threshold; 1 if there is
/// no such model.
inline Rational gamma_floor(const InterpolationProblem& p, const Sentence& gamma, const Rational& threshold) {
  Rational r = 1;
  for (std::size_t i : model_indices(p.family, p.right_theory)) {
    const Structure& m = p.family.members()[i];
    if (evaluate(m, p.psi) < threshold) continue;
    Rational g = evaluate(m, gamma);
    if (g < r) r = std::move(g);
  }
  return r;
}

/// Turns a source of γ_k (weak ε/2-interpolants of φ∸kε and ψ∸kε) into ρ_k
/// by dividing through by the family-relative lower bound r of γ_k on
/// T_W-models with ψ >= (k+1)ε.
inline WeakProvider normalizing_provider(const InterpolationProblem& p,
                                         std::function<Sentence(std::size_t, const DyadicLevel&)> gamma_source) {
  return [&p, gamma_source = std::move(gamma_source)](std::size_t k, const DyadicLevel& level) {
    Sentence gamma = gamma_source(k, level);
    Rational r = gamma_floor(p, gamma, level.point(k + 1));
    if (r == 0) throw ProviderFailure(k, "eq7", std::nullopt, "gamma is not bounded away from 0");
    return rho_from_gamma(gamma, r);
  };
}

// ---------------------------------------------------------------------------
// Separation

/// θ := 1 ∸ (ρ/s).
inline Sentence separation_sentence(const Sentence& rho, const Rational& s) {
  if (s <= 0) throw Error(ErrorKind::InvalidArgument, "s must be positive, got " + to_string(s));
  return Sentence(dot_minus(constant(1), scale_div_clamp(rho, s)));
}

/// min(1/2, least ρ over models of T_W ∪ {ψ}); absent when that least value
/// is 0, i.e. ρ does not separate.
inline std::optional<Rational> separation_bound(const InterpolationProblem& p, const Sentence& rho) {
  Rational s(1, 2);
  for (std::size_t i : model_indices(p.family, p.right_theory.with({p.psi}))) {
    Rational v = evaluate(p.family.members()[i], rho);
    if (v < s) s = std::move(v);
  }
  if (s == 0) return std::nullopt;
  return s;
}

// ---------------------------------------------------------------------------
// Uniformly convergent sequences

/// θ_n = max_{m<=n} min(ρ_m, 2^(-m)) for n = 0..N.
inline std::vector<Sentence> weak_limit_sequence(std::span<const Sentence> rho, std::size_t count) {
  if (rho.size() < count + 1) {
    throw Error(ErrorKind::LengthMismatch,
                "need " + std::to_string(count + 1) + " sentences, got " + std::to_string(rho.size()));
  }
  std::vector<Sentence> out;
  std::optional<Formula> acc;
  for (std::size_t m = 0; m <= count; ++m) {
    Formula term = Formula::min(rho[m], constant(dyadic(static_cast<unsigned>(m))));
    acc = acc ? Formula::max(*acc, term) : term;
    out.emplace_back(*acc);
  }
  return out;
}

/// θ_0 = 0 and θ_{n+1} = max(θ_n, min(γ_n, θ_n ∔ 2^(-n))) for n < N.
inline std::vector<Sentence> strong_limit_sequence(std::span<const Sentence> gamma, std::size_t count) {
  if (gamma.size() < count) {
    throw Error(ErrorKind::LengthMismatch,
                "need " + std::to_string(count) + " sentences, got " + std::to_string(gamma.size()));
  }
  std::vector<Sentence> out;
  Formula theta = constant(0);
  out.emplace_back(theta);
  for (std::size_t n = 0; n < count; ++n) {
    theta = Formula::max(theta, Formula::min(gamma[n], dot_plus(theta, constant(dyadic(static_cast<unsigned>(n))))));
    out.emplace_back(theta);
  }
  return out;
}

/// 2^(-(i+1)) for i < count: the step bounds of weak_limit_sequence.
inline std::vector<Rational> weak_sequence_bounds(std::size_t count) {
  std::vector<Rational> b;
  for (std::size_t i = 0; i < count; ++i) b.push_back(dyadic(static_cast<unsigned>(i + 1)));
  return b;
}

/// 2^(-i) for i < count: the step bounds of strong_limit_sequence.
inline std::vector<Rational> strong_sequence_bounds(std::size_t count) {
  std::vector<Rational> b;
  for (std::size_t i = 0; i < count; ++i) b.push_back(dyadic(static_cast<unsigned>(i)));
  return b;
}

/// step[i]: |θ_{i+1} - θ_i| <= bounds_i in every member of `f`.
inline Certificate check_uniform_cauchy(const ModelFamily& f, std::span<const Sentence> theta,
                                        std::span<const Rational> bounds) {
  if (theta.empty() || bounds.size() != theta.size() - 1) {
    throw Error(ErrorKind::LengthMismatch, "need one bound per consecutive pair");
  }
  Certificate cert{"cauchy", {}};
  for (std::size_t i = 0; i < bounds.size(); ++i) cert.clauses.push_back({"step[" + std::to_string(i) + "]", 0, {}});
  for (const auto& m : f.members()) {
    Rational prev = evaluate(m, theta[0]);
    for (std::size_t i = 0; i < bounds.size(); ++i) {
      Rational next = evaluate(m, theta[i + 1]);
      Clause& c = cert.clauses[i];
      ++c.checked;
      if (abs(next - prev) > bounds[i]) {
        c.counterexamples.push_back({m.name(), {{"theta_i", prev}, {"theta_next", next}, {"bound", bounds[i]}}});
      }
      prev = std::move(next);
    }
  }
  return cert;
}

/// mono[i]: θ_i <= θ_{i+1} in every member of `f`.
inline Certificate check_monotone(const ModelFamily& f, std::span<const Sentence> theta) {
  Certificate cert{"monotone", {}};
  if (theta.empty()) return cert;
  for (std::size_t i = 0; i + 1 < theta.size(); ++i) cert.clauses.push_back({"mono[" + std::to_string(i) + "]", 0, {}});
  for (const auto& m : f.members()) {
    Rational prev = evaluate(m, theta[0]);
    for (std::size_t i = 0; i + 1 < theta.size(); ++i) {
      Rational next = evaluate(m, theta[i + 1]);
      Clause& c = cert.clauses[i];
      ++c.checked;
      if (next < prev) c.counterexamples.push_back({m.name(), {{"theta_i", prev}, {"theta_next", next}}});
      prev = std::move(next);
    }
  }
  return cert;
}

}  // namespace contlogic
