#include <contlogic/contlogic.hpp>
#include <gtest/gtest.h>

#include "support/data.hpp"
#include "support/generators.hpp"

using namespace contlogic;
using testkit::load_data_family;
using testkit::load_problem;
using testkit::parse_in;

namespace {

Structure two_points(const Rational& pa, const Rational& pb) {
  Structure m("m", Vocabulary{predicate("P", 1)}, {"a", "b"});
  m.set_pred("P", std::vector<Element>{0}, pa);
  m.set_pred("P", std::vector<Element>{1}, pb);
  return m;
}

std::vector<std::string> names(const ModelFamily& f) {
  std::vector<std::string> out;
  for (const auto& m : f.members()) out.push_back(m.name());
  return out;
}

}  // namespace

TEST(Evaluate, DistanceIsReflexive) {
  Structure m = two_points(0, 0);
  EXPECT_EQ(evaluate(m, parse_formula("d(x, x)"), {{"x", 0}}), 0);
  EXPECT_EQ(evaluate(m, parse_formula("d(x, y)"), {{"x", 0}, {"y", 1}}), 1);
}

TEST(Evaluate, SupIsMaximum) {
  Structure m = two_points(Rational(1, 4), Rational(2, 3));
  EXPECT_EQ(evaluate(m, parse_formula("sup x . P(x)")), Rational(2, 3));
  EXPECT_EQ(evaluate(m, parse_formula("inf x . P(x)")), Rational(1, 4));
}

TEST(Evaluate, TruncatedSubtraction) {
  Structure m = two_points(0, 0);
  EXPECT_EQ(evaluate(m, parse_formula("(1/2 -. 3/4)")), 0);
}

TEST(Evaluate, ProductAndScale) {
  Structure m = two_points(Rational(1, 3), Rational(3, 4));
  EXPECT_EQ(evaluate(m, parse_formula("sup x . P(x) * 2/3")), Rational(1, 2));
  EXPECT_EQ(evaluate(m, parse_formula("inf x . (P(x) /. 1/2)")), Rational(2, 3));
}

TEST(Evaluate, Errors) {
  Structure m = two_points(0, 0);
  EXPECT_THROW(evaluate(m, parse_formula("P(x)")), Error);
  try {
    evaluate(m, parse_formula("sup x . Q(x)"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MissingSymbol);
  }
  try {
    evaluate(m, parse_formula("P(x)"));
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnboundVariable);
  }
}

TEST(CheckStructure, DiscreteMetricIsAccepted) {
  Vocabulary v{predicate("P", 1, Rational(1)), function("f", 2, Rational(1))};
  Structure m("disc", v, {"a", "b", "c"});
  m.set_pred("P", std::vector<Element>{1}, 1);
  m.set_pred("P", std::vector<Element>{2}, Rational(1, 3));
  m.set_func("f", std::vector<Element>{1, 2}, 2);
  auto r = check_structure(m);
  EXPECT_TRUE(r.metric_ok);
  EXPECT_TRUE(r.lipschitz_ok);
  EXPECT_TRUE(r.violations.empty());
}

TEST(CheckStructure, TriangleWitness) {
  Structure m("t", Vocabulary{}, {"a", "b", "c"});
  m.set_distance(0, 1, Rational(1, 4));
  m.set_distance(1, 2, Rational(1, 4));
  m.set_distance(0, 2, 1);
  auto r = check_structure(m);
  EXPECT_FALSE(r.metric_ok);
  EXPECT_TRUE(r.lipschitz_ok);
  const Violation* v = r.first(ViolationKind::Triangle);
  ASSERT_NE(v, nullptr);
  EXPECT_EQ(v->witness, (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(v->values, (std::vector<Rational>{1, Rational(1, 2)}));
}

TEST(CheckStructure, LipschitzWitness) {
  Vocabulary v{predicate("P", 1, Rational(1))};
  Structure m("l", v, {"a", "b"});
  m.set_pred("P", std::vector<Element>{1}, 1);
  m.set_distance(0, 1, Rational(1, 2));
  auto r = check_structure(m);
  EXPECT_TRUE(r.metric_ok);
  EXPECT_FALSE(r.lipschitz_ok);
  const Violation* w = r.first(ViolationKind::Lipschitz);
  ASSERT_NE(w, nullptr);
  EXPECT_EQ(w->symbol, "P");
  EXPECT_EQ(w->witness, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(format_violation(*w), "lipschitz P@0 (a,b) 1 1/2");
}

TEST(CheckStructure, SeparationDependsOnMode) {
  Structure m("p", Vocabulary{}, {"a", "b"});
  m.set_distance(0, 1, 0);
  EXPECT_FALSE(check_structure(m).metric_ok);
  EXPECT_TRUE(check_structure(m, MetricMode::Pseudo).metric_ok);
}

TEST(CheckStructure, FixtureFamiliesAreMetric) {
  for (const char* stem : {"chain", "quant", "metric", "sep", "rc", "twin"}) {
    const ModelFamily f = load_data_family(stem);
    for (const auto& m : f.members()) EXPECT_TRUE(check_structure(m).ok()) << m.name();
  }
}

TEST(Reduct, Examples) {
  Vocabulary full{predicate("P", 1), predicate("Q", 1)};
  Structure n("n", full, {"a", "b"});
  n.set_pred("P", std::vector<Element>{0}, Rational(1, 5));
  n.set_pred("Q", std::vector<Element>{1}, Rational(2, 5));
  n.set_distance(0, 1, Rational(1, 3));
  EXPECT_EQ(reduct(n, full), n);

  Structure p = reduct(n, Vocabulary{predicate("P", 1)});
  EXPECT_EQ(p.vocabulary(), Vocabulary{predicate("P", 1)});
  EXPECT_EQ(p.pred_table("P"), n.pred_table("P"));
  EXPECT_EQ(p.distance(0, 1), Rational(1, 3));

  Structure bare = reduct(n, Vocabulary{});
  EXPECT_EQ(bare.vocabulary().size(), 1u);
  EXPECT_EQ(bare.pred_table("d"), n.pred_table("d"));

  EXPECT_THROW(reduct(n, Vocabulary{predicate("R", 1)}), Error);
}

TEST(FamilyModels, Examples) {
  ModelFamily f = load_data_family("chain");
  EXPECT_EQ(names(family_models(f, Theory{})), names(f));
  EXPECT_TRUE(family_models(f, Theory{Sentence(constant(1))}).empty());
  // Read off the fixture: only `zero` has P(c) = 0.
  EXPECT_EQ(names(family_models(f, Theory{parse_in(f, "P(c)")})), (std::vector<std::string>{"zero"}));
}

TEST(FamilyEntails, Examples) {
  ModelFamily f = load_data_family("chain");
  Sentence p = parse_in(f, "P(c)"), q = parse_in(f, "Q(c)");
  EXPECT_TRUE(family_entails_ge(f, Theory{}, p, p).passed());
  EXPECT_TRUE(family_entails_ge(f, Theory{}, Sentence(constant(1)), q).passed());
  Clause c = family_entails_ge(f, Theory{}, p, q);
  ASSERT_FALSE(c.passed());
  // right_only: P(c) = 1/8 < Q(c) = 1/2, and it is the first such member.
  EXPECT_EQ(c.counterexamples.front().model, "right_only");
  EXPECT_EQ(*c.counterexamples.front().value("lhs"), Rational(1, 8));
  EXPECT_EQ(*c.counterexamples.front().value("rhs"), Rational(1, 2));
}

TEST(FamilyConsistent, Examples) {
  const std::string src =
      "family k\nfunc c1 0\nfunc c2 0\n"
      "structure far\nuniverse a b\nc1 = a\nc2 = b\nend\n"
      "structure near\nuniverse a b\nc1 = a\nc2 = b\nd a b = 1/2\nend\n";
  ModelFamily f = parse_family(src);
  EXPECT_TRUE(family_consistent(f, Theory{}));
  EXPECT_FALSE(family_consistent(f, Theory{Sentence(constant(1))}));
  Sentence close = parse_in(f, "d(c1, c2) -. 1/2");
  EXPECT_TRUE(family_consistent(f, Theory{close}));
  ModelFamily only_far = parse_family(src.substr(0, src.find("structure near")));
  EXPECT_FALSE(family_consistent(only_far, Theory{close}));
}

TEST(WeakChecker, ConstantZeroWhenPsiSmall) {
  InterpolationProblem p = load_problem("chain");
  // ψ = Q(c) is at most 1 everywhere, so ε = 1 makes c2 trivial.
  Certificate c = is_weak_interpolant(p, Sentence(constant(0)), 1);
  EXPECT_TRUE(c.passed());
}

TEST(WeakChecker, PhiItselfWhenVocabulariesAgree) {
  ModelFamily f = load_data_family("chain");
  Sentence phi = parse_in(f, "R(c)");
  Sentence psi = parse_in(f, "R(c) * 1/2");
  auto p = InterpolationProblem::infer(f, Theory{}, Theory{}, phi, psi);
  EXPECT_TRUE(is_weak_interpolant(p, phi, Rational(1, 8)).passed());
}

TEST(WeakChecker, FailsC2WithWitness) {
  ModelFamily f = load_data_family("chain");
  // left_only: R(c) = 1/4, Q(c) = 3/4; the sentence below is 0 there. The R
  // terms put R into both vocabularies without changing the values.
  auto p = InterpolationProblem::infer(f, Theory{}, Theory{}, parse_in(f, "max(P(c), R(c) * 0)"),
                                       parse_in(f, "min(Q(c), R(c) +. 1)"));
  Sentence theta = parse_in(f, "(R(c) -. 1/4)");
  Certificate c = is_weak_interpolant(p, theta, Rational(1, 2));
  const Clause* c2 = c.clause("c2");
  ASSERT_NE(c2, nullptr);
  ASSERT_FALSE(c2->passed());
  EXPECT_EQ(c2->counterexamples.front().model, "left_only");
  EXPECT_EQ(*c2->counterexamples.front().value("psi"), Rational(3, 4));
}

TEST(WeakChecker, RejectsForeignSymbols) {
  InterpolationProblem p = load_problem("chain");
  try {
    is_weak_interpolant(p, p.phi, Rational(1, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CommonVocabulary);
  }
  EXPECT_THROW(is_weak_interpolant(p, Sentence(constant(0)), 0), Error);
}

TEST(StrongChecker, ConstantZero) {
  InterpolationProblem p = load_problem("chain");
  Sentence zero(constant(0));
  for (Rational eps : {Rational(1, 4), Rational(1, 2), Rational(1)}) {
    Certificate c = is_strong_interpolant(p, zero, eps);
    EXPECT_TRUE(c.clause("i")->passed());
    bool small = true;
    for (std::size_t i : model_indices(p.family, p.right_theory)) {
      small = small && evaluate(p.family.members()[i], p.psi) <= eps;
    }
    EXPECT_EQ(c.clause("ii")->passed(), small);
  }
}

TEST(StrongChecker, PhiItselfUnderHypothesis) {
  ModelFamily f = load_data_family("chain");
  auto p = InterpolationProblem::infer(f, Theory{}, Theory{}, parse_in(f, "max(R(c), 1/2)"), parse_in(f, "R(c)"));
  EXPECT_TRUE(is_strong_interpolant(p, p.phi, Rational(1, 16)).passed());
}

TEST(StrongChecker, FailsIWithWitness) {
  ModelFamily f = load_data_family("chain");
  // zero comes first and has R(c) = 0, so φ = 1/4 there while θ = 1/2.
  auto p = InterpolationProblem::infer(f, Theory{}, Theory{}, parse_in(f, "max(R(c), 1/4)"), parse_in(f, "R(c)"));
  Certificate c = is_strong_interpolant(p, Sentence(constant(Rational(1, 2))), Rational(1, 2));
  const Clause* i = c.clause("i");
  ASSERT_FALSE(i->passed());
  const Witness& w = i->counterexamples.front();
  EXPECT_EQ(w.model, "zero");
  EXPECT_EQ(*w.value("phi"), Rational(1, 4));
  EXPECT_EQ(*w.value("theta"), Rational(1, 2));
  EXPECT_TRUE(c.clause("ii")->passed());
}

TEST(StrongChecker, ChainFixtureInterpolant) {
  InterpolationProblem p = load_problem("chain");
  Sentence theta = load_sentence(testkit::data_path("chain_theta.csnt"), &p.family.vocabulary());
  EXPECT_TRUE(is_strong_interpolant(p, theta, Rational(1, 1024)).passed());
  EXPECT_TRUE(is_weak_interpolant(p, theta, Rational(1, 1024)).passed());
}

// ---------------------------------------------------------------------------
// Properties over generated structures and sentences

TEST(Properties, RangeReductAndIsomorphism) {
  testkit::Generator gen(101);
  const Vocabulary v = testkit::fuzz_vocabulary();
  for (int i = 0; i < 200; ++i) {
    Structure m = gen.structure(v, "m");
    Sentence s = gen.sentence(v, 4);
    const Rational value = evaluate(m, s);
    EXPECT_TRUE(in_unit_interval(value)) << print_sentence(s);
    EXPECT_EQ(evaluate(reduct(m, vocabulary_of(s)), s), value) << print_sentence(s);
    EXPECT_EQ(evaluate(gen.permuted(m), s), value) << print_sentence(s);
  }
}

TEST(Properties, QuantifiersAttainTheirBounds) {
  testkit::Generator gen(103);
  const Vocabulary v = testkit::fuzz_vocabulary();
  for (int i = 0; i < 100; ++i) {
    Structure m = gen.structure(v, "m");
    Formula body = gen.formula(v, 3, {"x"});
    Rational hi = 0, lo = 1;
    for (Element e = 0; e < m.size(); ++e) {
      Rational val = evaluate(m, body, {{"x", e}});
      hi = std::max(hi, val);
      lo = std::min(lo, val);
    }
    EXPECT_EQ(evaluate(m, Formula::sup("x", body)), hi);
    EXPECT_EQ(evaluate(m, Formula::inf("x", body)), lo);
  }
}

TEST(Properties, MonotoneFormulasRespectRaisedEntries) {
  testkit::Generator gen(107);
  const Vocabulary v = testkit::fuzz_vocabulary();
  for (int i = 0; i < 200; ++i) {
    Structure m = gen.structure(v, "m");
    Sentence s(gen.monotone_formula(v, 4));
    Structure raised = m;
    const char* pred = gen.coin() ? "P" : "Q";
    std::vector<Element> arg{gen.pick(m.size())};
    const Rational old = m.pred_value(pred, arg);
    raised.set_pred(pred, arg, old + (1 - old) * gen.unit_rational(4));
    EXPECT_GE(evaluate(raised, s), evaluate(m, s)) << print_sentence(s);
  }
}

TEST(Properties, GeneratedMetricsAreValid) {
  testkit::Generator gen(109);
  const Vocabulary v = testkit::fuzz_vocabulary();
  for (int i = 0; i < 100; ++i) EXPECT_TRUE(check_structure(gen.structure(v, "m")).ok());
}

TEST(Properties, StrongImpliesWeak) {
  testkit::Generator gen(113);
  const Vocabulary v{predicate("P", 1), predicate("Q", 1), predicate("R", 1), function("c", 0)};
  const Vocabulary common{predicate("R", 1), function("c", 0)};
  int strong_seen = 0;
  for (int i = 0; i < 300; ++i) {
    ModelFamily f = gen.family(v, 4);
    auto p = InterpolationProblem::infer(f, Theory{}, Theory{}, parse_in(f, "max(sup x . P(x), R(c))"),
                                         parse_in(f, "min(Q(c), inf x . R(x))"));
    Sentence theta = gen.sentence(common, 3);
    const Rational eps = std::min(Rational(1), gen.unit_rational(4) + Rational(1, 8));
    if (is_strong_interpolant(p, theta, eps).passed()) {
      ++strong_seen;
      EXPECT_TRUE(is_weak_interpolant(p, theta, eps).passed()) << print_sentence(theta);
    }
  }
  EXPECT_GT(strong_seen, 0);
}
