#include <contlogic/contlogic.hpp>
#include <gtest/gtest.h>

#include "support/brute_force.hpp"
#include "support/data.hpp"

using namespace contlogic;
using testkit::load_data_family;
using testkit::load_problem;
using testkit::parse_in;

namespace {

std::optional<std::string> found_text(const SearchOutcome& o) {
  if (!o.sentence) return std::nullopt;
  return print_sentence(*o.sentence);
}

void expect_matches_oracle(const InterpolationProblem& p, const Rational& eps, const SearchBudget& budget) {
  SearchOutcome got = search_weak_interpolant_detailed(p, eps, budget);
  testkit::BruteForceSearch oracle(p.common_vocabulary(), budget.max_depth, budget.constant_pool);
  testkit::OracleResult want = oracle.run(p, eps, budget.max_candidates);
  EXPECT_EQ(found_text(got), want.text) << "eps=" << to_string(eps);
  EXPECT_EQ(got.examined, want.examined) << "eps=" << to_string(eps);
  if (got.sentence) {
    EXPECT_TRUE(is_weak_interpolant(p, *got.sentence, eps).passed());
  }
}

}  // namespace

TEST(Search, ConstantZeroWhenPsiIsSmall) {
  InterpolationProblem p = load_problem("chain");
  auto theta = search_weak_interpolant(p, 1, SearchBudget{});
  ASSERT_TRUE(theta.has_value());
  EXPECT_EQ(print_sentence(*theta), "0");
}

TEST(Search, NoLeftModelWithPsiSmall) {
  ModelFamily f = load_data_family("chain");
  // φ = 1 never vanishes, so c1 is vacuous; ψ = Q(c)/2 never exceeds 1/2.
  Theory tv{parse_in(f, "(1 -. P(c))")};
  auto p = InterpolationProblem::infer(f, tv, Theory{}, Sentence(constant(1)), parse_in(f, "Q(c) * 1/2"));
  auto theta = search_weak_interpolant(p, Rational(1, 2), SearchBudget{});
  ASSERT_TRUE(theta.has_value());
  EXPECT_EQ(print_sentence(*theta), "0");
}

TEST(Search, NoLeftModelButLargePsi) {
  ModelFamily f = load_data_family("chain");
  // c1 is vacuous, but θ = 0 would meet c2 at `top` (ψ = 1), so the first
  // passing candidate is the constant 1.
  auto p = InterpolationProblem::infer(f, Theory{}, Theory{}, Sentence(constant(1)), parse_in(f, "Q(c)"));
  SearchOutcome o = search_weak_interpolant_detailed(p, Rational(1, 2), SearchBudget{});
  ASSERT_TRUE(o.sentence.has_value());
  EXPECT_EQ(print_sentence(*o.sentence), "1");
  EXPECT_EQ(o.examined, 2u);
}

TEST(Search, AbsentWhenCommonReductsCoincide) {
  InterpolationProblem p = load_problem("twin");
  SearchOutcome o = search_weak_interpolant_detailed(p, Rational(1, 4), SearchBudget{});
  EXPECT_FALSE(o.sentence.has_value());
  EXPECT_EQ(o.examined, 10000u);
}

TEST(Search, BudgetValidation) {
  InterpolationProblem p = load_problem("chain");
  SearchBudget zero;
  zero.max_candidates = 0;
  EXPECT_THROW(search_weak_interpolant(p, Rational(1, 2), zero), Error);
  SearchBudget bad_pool;
  bad_pool.constant_pool = {Rational(3, 2)};
  EXPECT_THROW(search_weak_interpolant(p, Rational(1, 2), bad_pool), Error);
  EXPECT_THROW(search_weak_interpolant(p, 0, SearchBudget{}), Error);
}

TEST(Search, SmallBudgetStopsEarly) {
  InterpolationProblem p = load_problem("chain");
  SearchBudget tiny;
  tiny.max_candidates = 3;
  SearchOutcome o = search_weak_interpolant_detailed(p, Rational(1, 4), tiny);
  EXPECT_FALSE(o.sentence.has_value());
  EXPECT_EQ(o.examined, 3u);
}

TEST(Search, FreshVariablePrefix) {
  EXPECT_EQ(fresh_variable_prefix(Vocabulary{predicate("P", 1)}), "x");
  EXPECT_EQ(fresh_variable_prefix(Vocabulary{function("x1", 0)}), "x_");
  EXPECT_EQ(fresh_variable_prefix(Vocabulary{function("x", 0), predicate("x2", 1)}), "x_");
}

TEST(Search, EnumeratorOrder) {
  SentenceEnumerator gen(Vocabulary{predicate("R", 1), function("c", 0)}, 1, {Rational(0), Rational(1)});
  auto one = gen.sentences_of_size(1);
  std::vector<std::string> texts;
  for (const auto& cand : one) texts.push_back(cand.text);
  EXPECT_EQ(texts, (std::vector<std::string>{"0", "1", "R(c)", "d(c, c)"}));
  auto two = gen.sentences_of_size(2);
  // ~ over the four size-1 sentences, plus sup/inf over the eight size-1
  // formulas in x1 (two constants, R(x1), R(c), four d atoms).
  EXPECT_EQ(two.size(), 4u + 2u * 8u);
  EXPECT_TRUE(std::is_sorted(two.begin(), two.end(), [](const auto& a, const auto& b) { return a.text < b.text; }));
}

TEST(SearchOracle, AgreesOnFixtures) {
  SearchBudget budget;
  for (const char* stem : {"chain", "quant", "sep", "rc", "twin", "metric"}) {
    InterpolationProblem p = load_problem(stem);
    for (Rational eps : {Rational(1, 8), Rational(1, 4), Rational(1, 2)}) {
      SCOPED_TRACE(stem);
      expect_matches_oracle(p, eps, budget);
    }
  }
}

TEST(SearchOracle, AgreesAtDepthZeroAndCustomPool) {
  SearchBudget budget;
  budget.max_depth = 0;
  budget.max_candidates = 2000;
  budget.constant_pool = {Rational(1, 3), Rational(1, 3), Rational(1)};
  for (const char* stem : {"chain", "quant", "rc"}) {
    SCOPED_TRACE(stem);
    expect_matches_oracle(load_problem(stem), Rational(1, 4), budget);
  }
}
