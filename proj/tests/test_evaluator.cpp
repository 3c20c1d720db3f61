#include <gtest/gtest.h>

#include "incr/evaluator.hpp"
#include "incr/lf_parser.hpp"
#include "incr/tms.hpp"
#include "oracles/classical.hpp"
#include "oracles/random_formula.hpp"
#include "support.hpp"

using namespace incr;

namespace {

WorldModel to_world(const oracle::Model& m) {
  WorldModel w;
  for (int i = 0; i < m.size; ++i) w.add_entity("e" + std::to_string(i));
  // Declare both predicates even in models where they are empty.
  w.add_constraint("sig_p", parse_lf("forall(x,p(x),true)"));
  w.add_constraint("sig_r", parse_lf("forall(x,true,forall(y,r(x,y),true))"));
  for (const auto& [pred, tuples] : m.ext)
    for (const auto& t : tuples) {
      Tuple args;
      for (int i : t) args.push_back("e" + std::to_string(i));
      w.add_fact(pred, args);
    }
  return w;
}

WorldModel two_entity_world(const std::vector<std::string>& facts) {
  std::string src = "entity john\nentity c1\n";
  for (const auto& f : facts) src += "fact " + f + "\n";
  src += "constraint sig : forall(x,car(x),forall(y,impresses(x,y),forall(z,buy(y,z),true)))\n";
  return load_world(src);
}

}  // namespace

TEST(Evaluator, TowerInLondon) {
  auto demo = testing_support::world("demo");
  EXPECT_TRUE(evaluate(parse_lf("exists(w,true,and(tower(w),has(london,w)))"), *demo));
  EXPECT_FALSE(evaluate(parse_lf("exists(w,true,and(tower(w),has(mary,w)))"), *demo));
}

TEST(Evaluator, TrueAnywhere) {
  auto demo = testing_support::world("demo");
  EXPECT_TRUE(evaluate(Term::true_(), *demo));
  EXPECT_TRUE(evaluate(parse_lf("forall(x,true,impl(man(x),true))"), *demo));
  EXPECT_TRUE(evaluate(parse_lf("and(true,sleeps(john))"), *demo));
}

TEST(Evaluator, UnknownPredicateAndUnboundVariable) {
  auto demo = testing_support::world("demo");
  EXPECT_THROW(evaluate(parse_lf("exists(x,true,flies(x))"), *demo), UnknownSymbol);
  EXPECT_FALSE(evaluate(parse_lf("exists(x,true,flies(x))"), *demo, {}, EvalOptions{false}));
  EXPECT_THROW(evaluate(parse_lf("sleeps(w)", {"w"}), *demo), UnboundVariable);
  EXPECT_TRUE(evaluate(parse_lf("sleeps(w)", {"w"}), *demo, Assignment{{"w", "john"}}));
}

TEST(Evaluator, QuantifierMeanings) {
  auto demo = testing_support::world("demo");
  EXPECT_TRUE(evaluate(parse_lf("forall(x,child(x),kid(x))"), *demo));
  EXPECT_FALSE(evaluate(parse_lf("forall(x,child(x),tireless(x))"), *demo));
  EXPECT_TRUE(evaluate(parse_lf("no(x,man(x),likes(x,mary))"), *demo));
  EXPECT_FALSE(evaluate(parse_lf("no(x,man(x),sleeps(x))"), *demo));
  EXPECT_TRUE(evaluate(parse_lf("the(x,book(x),book(x))"), *demo));
}

TEST(Evaluator, AgreesWithClassicalOracleOnRandomFormulas) {
  const oracle::Signature sig{{"p", 1}, {"r", 2}};
  std::vector<std::pair<oracle::Model, WorldModel>> models;
  for (int n = 1; n <= 3; ++n)
    oracle::for_each_model(n, sig, {"e0"}, [&](const oracle::Model& m) {
      if (m.consts.at("e0") == 0) models.emplace_back(m, to_world(m));
      return true;
    });
  ASSERT_EQ(models.size(), 4u + 64u + 4096u);

  oracle::FormulaGen gen(20240517);
  int checked = 0;
  for (int i = 0; i < 500; ++i) {
    Term f = gen.closed(4);
    ASSERT_TRUE(free_vars(f).empty());
    ASSERT_LE(oracle::depth_of(f), 4);
    for (const auto& [m, w] : models) {
      bool expect = oracle::eval(f, m);
      ASSERT_EQ(evaluate(f, w), expect) << print_lf(f) << "\n" << save_world(w);
      ++checked;
    }
  }
  EXPECT_EQ(checked, 500 * 4164);
}

// "John will buy it if a car impresses him" and "If a car impresses John,
// he will buy it" share one semantic structure: the antecedent's existential
// binds the pronoun in the consequent.
TEST(Evaluator, DonkeyThreadingIndependentOfClauseOrder) {
  const std::set<std::string> free{"x"};
  Term consequent_first = Term::impl(parse_lf("exists(x,car(x),impresses(x,john))"), parse_lf("buy(john,x)", free));
  Term antecedent_first = parse_lf("impl(exists(x,car(x),impresses(x,john)),buy(john,x))", free);
  ASSERT_EQ(print_lf(consequent_first), print_lf(antecedent_first));

  WorldModel verifying = two_entity_world({"car(c1)", "impresses(c1,john)", "buy(john,c1)"});
  WorldModel falsifying = two_entity_world({"car(c1)", "impresses(c1,john)", "buy(john,john)"});
  WorldModel vacuous = two_entity_world({"car(c1)"});
  for (const Term& f : {consequent_first, antecedent_first}) {
    EXPECT_TRUE(evaluate(f, verifying));
    EXPECT_FALSE(evaluate(f, falsifying));
    EXPECT_TRUE(evaluate(f, vacuous));
  }
  // Classical reading: every impressive car is bought.
  Term classical = parse_lf("forall(x,and(car(x),impresses(x,john)),buy(john,x))");
  for (const WorldModel* w : {&verifying, &falsifying, &vacuous})
    EXPECT_EQ(evaluate(consequent_first, *w), evaluate(classical, *w));
}

TEST(Evaluator, RestrictorThreadsIntoBody) {
  WorldModel w = load_world(
      "entity f1\nentity f2\nentity d1\nentity d2\n"
      "fact farmer(f1)\nfact farmer(f2)\nfact donkey(d1)\nfact donkey(d2)\n"
      "fact owns(f1,d1)\nfact owns(f2,d2)\nfact beats(f1,d1)\n");
  Term f = parse_lf("forall(x,and(farmer(x),exists(y,donkey(y),owns(x,y))),beats(x,y))", {"y"});
  EXPECT_FALSE(evaluate(f, w));
  WorldModel w2 = load_world(save_world(w) + "fact beats(f2,d2)\n");
  EXPECT_TRUE(evaluate(f, w2));
}

TEST(Evaluator, NarrowScope) {
  Term t = parse_lf("show(q(forall,x,parent(x)),w,q(exists,z,true))", {"w"});
  EXPECT_EQ(print_lf(narrow_scope(t)), "forall(x,parent(x),exists(z,true,show(x,w,z)))");
  Term nested = parse_lf("and(sleeps(q(exists,x,man(x))),sleeps(john))");
  EXPECT_EQ(print_lf(narrow_scope(nested)), "and(exists(x,man(x),sleeps(x)),sleeps(john))");
}

TEST(Evaluator, PunchIsImplausible) {
  auto shop = testing_support::world("workshop");
  PlausibilityVerdict v = plausible(parse_lf("exists(z,true,move(punch1,z))"), *shop);
  EXPECT_FALSE(v.plausible);
  EXPECT_EQ(v.constraint, "bolted");
  EXPECT_TRUE(plausible(parse_lf("exists(z,true,move(plate1,z))"), *shop).plausible);
  EXPECT_TRUE(plausible(Term::true_(), *shop).plausible);
}

TEST(Evaluator, PlausibleInUnconstrainedWorld) {
  auto demo = testing_support::world("demo");
  EXPECT_TRUE(plausible(parse_lf("exists(x,true,exists(y,true,intr(mary,x,y)))"), *demo).plausible);
  // Open atoms may be true; only listed facts are fixed.
  EXPECT_TRUE(plausible(parse_lf("sleeps(mary)"), *demo).plausible);
  PlausibilityVerdict v = plausible(parse_lf("no(x,true,sleeps(x))"), *demo);
  EXPECT_FALSE(v.plausible);
  EXPECT_EQ(v.constraint, "");
}

TEST(Evaluator, UpdateContextWorkedExample) {
  ContextLF ctx{{"w"}, parse_lf("and(tower(w),has(london,w))", {"w"})};
  ASSERT_EQ(print_lf(ctx.formula()), "exists(w,true,and(tower(w),has(london,w)))");

  auto out1 = update_context(ctx, parse_lf("forall(x,parent(x),exists(z,true,show(x,w,z)))", {"w"}));
  ASSERT_EQ(out1.size(), 1u);
  EXPECT_EQ(print_lf(out1[0].formula()),
            "exists(w,true,and(and(tower(w),has(london,w)),forall(x,parent(x),exists(z,true,show(x,w,z)))))");

  auto out2 = update_context(ctx, parse_lf("exists(z,true,forall(x,parent(x),show(x,w,z)))", {"w"}));
  ASSERT_EQ(out2.size(), 2u);
  EXPECT_EQ(print_lf(out2[0].formula()),
            "exists(w,true,exists(z,true,and(and(tower(w),has(london,w)),forall(x,parent(x),show(x,w,z)))))");
  EXPECT_EQ(print_lf(out2[1].formula()),
            "exists(w,true,and(and(tower(w),has(london,w)),exists(z,true,forall(x,parent(x),show(x,w,z)))))");
}

TEST(Evaluator, UpdateContextPreservesTruth) {
  ContextLF ctx{{"w"}, parse_lf("and(tower(w),has(london,w))", {"w"})};
  Term s1 = parse_lf("forall(x,parent(x),exists(z,true,show(x,w,z)))", {"w"});
  Term s2 = parse_lf("exists(z,true,forall(x,parent(x),show(x,w,z)))", {"w"});
  Term out1 = update_context(ctx, s1)[0].formula();
  Term out2 = update_context(ctx, s2)[0].formula();
  EXPECT_TRUE(oracle::brute_entails(out1, ctx.formula(), 2));
  EXPECT_TRUE(oracle::brute_entails(out2, ctx.formula(), 2));
  EXPECT_TRUE(oracle::brute_entails(out2, out1, 2));
  EXPECT_FALSE(oracle::brute_entails(out1, out2, 2));
  EXPECT_TRUE(entails(out2, out1, 3).entailed);

  auto london = testing_support::world("london");
  EXPECT_TRUE(evaluate(out1, *london));
  EXPECT_FALSE(evaluate(out2, *london));
}

TEST(Evaluator, UpdateContextEdgeCases) {
  Term closed = parse_lf("sleeps(john)");
  auto out = update_context(ContextLF{}, closed);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(print_lf(out[0].formula()), "sleeps(john)");
  EXPECT_THROW(update_context(ContextLF{}, parse_lf("sleeps(w)", {"w"})), UnboundVariable);

  // A lifted binder that clashes with a context binder is renamed.
  ContextLF ctx{{"w"}, parse_lf("tower(w)", {"w"})};
  auto lifted = update_context(ctx, parse_lf("exists(w,true,has(w,w))"));
  ASSERT_EQ(lifted.size(), 2u);
  EXPECT_EQ(lifted[0].binders.size(), 2u);
  EXPECT_NE(lifted[0].binders[1], "w");
  EXPECT_TRUE(free_vars(lifted[0].formula()).empty());
}

TEST(Evaluator, RenameIntoPool) {
  ContextLF ctx{{"w", "z"}, parse_lf("and(tower(w),book(z))", {"w", "z"})};
  ContextLF r = rename_into_pool(ctx, 1);
  EXPECT_EQ(r.binders, (std::vector<VarName>{"w", "v"}));
  EXPECT_EQ(print_lf(r.formula()), "exists(w,true,exists(v,true,and(tower(w),book(v))))");
  EXPECT_EQ(print_lf(rename_into_pool(r, 0).formula()), print_lf(r.formula()));
}
