#include <random>

#include <gtest/gtest.h>

#include "incr/lf_parser.hpp"
#include "incr/reduce.hpp"
#include "incr/term.hpp"
#include "incr/typing.hpp"

using namespace incr;

TEST(LfText, RoundTripsCanonicalText) {
  for (const char* s : {"lam(P,P(mary))", "lam(x,lam(y,intr(mary,x,y)))", "show(q(forall,x,parent(x)),pro(y),q(exists,z,true))",
                        "forall(x,parent(x),exists(z,true,show(x,w,z)))", "and(tower(w),impl(p(w),true))",
                        "no(x,true,exists(y,true,intr(mary,x,y)))", "the(x,rabbit(x),sleeps(x))"}) {
    std::set<std::string> free = {"w"};
    EXPECT_EQ(print_lf(parse_lf(s, free)), s);
  }
}

TEST(LfText, WhitespaceIsInsignificant) {
  EXPECT_EQ(print_lf(parse_lf(" lam( x , f( x ) ) ")), "lam(x,f(x))");
}

TEST(LfText, RejectsMalformedInput) {
  EXPECT_THROW(parse_lf("lam(x,"), SyntaxError);
  EXPECT_THROW(parse_lf("f(x))"), SyntaxError);
  EXPECT_THROW(parse_lf("q(sometimes,x,true)"), SyntaxError);
}

TEST(LfText, BinderDetermination) {
  Term t = parse_lf("lam(x,f(x,y))");
  EXPECT_EQ(free_vars(t), std::set<VarName>{});
  EXPECT_TRUE(t.body().args()[1].is(Term::Kind::Const));
  Term u = parse_lf("f(x,y)", {"y"});
  EXPECT_TRUE(u.args()[1].is(Term::Kind::Var));
}

TEST(Alpha, RenamingBoundVariablesPreservesEquality) {
  EXPECT_TRUE(alpha_equal(parse_lf("lam(x,lam(y,intr(mary,x,y)))"), parse_lf("lam(a,lam(b,intr(mary,a,b)))")));
  EXPECT_FALSE(alpha_equal(parse_lf("lam(x,lam(y,intr(mary,x,y)))"), parse_lf("lam(a,lam(b,intr(mary,b,a)))")));
  EXPECT_TRUE(alpha_equal(parse_lf("exists(x,true,p(x))"), parse_lf("exists(z,true,p(z))")));
  EXPECT_TRUE(alpha_equal(parse_lf("f(q(exists,x,p(x)))"), parse_lf("f(q(exists,u,p(u)))")));
}

TEST(Substitution, AvoidsCapture) {
  Term t = parse_lf("lam(y,f(x,y))", {"x"});
  Term r = substitute(t, "x", Term::var("y"));
  EXPECT_EQ(free_vars(r), std::set<VarName>{"y"});
  EXPECT_TRUE(alpha_equal(r, parse_lf("lam(z,f(y,z))", {"y"})));
}

TEST(Reduction, BetaReducesApplications) {
  Term det = parse_lf("lam(P,q(forall,x,P(x)))");
  Term noun = parse_lf("lam(x,parent(x))");
  EXPECT_EQ(print_lf(beta_reduce(Term::app(det, {noun}))), "q(forall,x,parent(x))");
  Term subj = parse_lf("lam(P,P(mary))");
  Term verb = parse_lf("lam(x,lam(p,lam(y,intr(y,x,p))))");
  EXPECT_TRUE(alpha_equal(beta_reduce(Term::app(verb, {Term::constant("john")})),
                          parse_lf("lam(p,lam(y,intr(y,john,p)))")));
  EXPECT_TRUE(alpha_equal(beta_reduce(Term::app(subj, {parse_lf("lam(y,sleeps(y))")})), parse_lf("sleeps(mary)")));
}

TEST(Typing, InfersSimpleTypes) {
  EXPECT_TRUE(has_type(parse_lf("lam(P,P(mary))"), SemType::fn(SemType::fn(SemType::e(), SemType::t()), SemType::t())));
  EXPECT_EQ(type_of(parse_lf("lam(x,lam(y,intr(mary,x,y)))")).str(), "e->e->t");
  EXPECT_EQ(type_of(parse_lf("show(q(forall,x,parent(x)),mary,john)")), SemType::t());
  EXPECT_TRUE(has_type(parse_lf("lam(x,man(x))"), SemType::fn(SemType::e(), SemType::t())));
  EXPECT_THROW(type_of(parse_lf("lam(P,and(P,P(mary)))")), TypeError);
}

namespace {

// Random simply typed terms over e and t, with redexes.
class TermGen {
 public:
  explicit TermGen(unsigned seed) : rng_(seed) {}

  SemType random_type(int depth) {
    if (depth <= 0 || coin(0.6)) return coin(0.5) ? SemType::e() : SemType::t();
    return SemType::fn(random_type(depth - 1), random_type(depth - 1));
  }

  Term gen(const SemType& ty, int depth, std::vector<std::pair<VarName, SemType>> env) {
    if (ty.is_fn()) {
      VarName v = "v" + std::to_string(counter_++);
      env.emplace_back(v, ty.arg());
      return Term::lam(v, gen(ty.result(), depth - 1, env));
    }
    if (depth > 0 && coin(0.3)) {
      SemType a = random_type(1);
      VarName v = "v" + std::to_string(counter_++);
      auto inner = env;
      inner.emplace_back(v, a);
      return Term::app(Term::lam(v, gen(ty, depth - 1, inner)), {gen(a, depth - 1, env)});
    }
    std::vector<std::pair<VarName, SemType>> heads;
    for (const auto& [v, vt] : env)
      if (vt.final_result() == ty) heads.emplace_back(v, vt);
    if (!heads.empty() && depth > 0 && coin(0.6)) {
      auto [v, vt] = heads[rng_() % heads.size()];
      std::vector<Term> args;
      const SemType* cur = &vt;
      while (cur->is_fn()) {
        args.push_back(gen(cur->arg(), depth - 1, env));
        cur = &cur->result();
      }
      return args.empty() ? Term::var(v) : Term::app(Term::var(v), args);
    }
    if (ty == SemType::e()) return Term::constant(coin(0.5) ? "mary" : "john");
    if (depth > 0 && coin(0.5)) return Term::app(Term::constant("p"), {gen(SemType::e(), depth - 1, env)});
    return Term::true_();
  }

 private:
  bool coin(double p) { return std::uniform_real_distribution<>(0, 1)(rng_) < p; }
  std::mt19937 rng_;
  int counter_ = 0;
};

}  // namespace

TEST(Reduction, RandomTypedTermsNormalizeAndKeepTheirType) {
  TermGen g(7);
  for (int i = 0; i < 400; ++i) {
    SemType ty = g.random_type(2);
    Term t = g.gen(ty, 6, {});
    ASSERT_TRUE(has_type(t, ty)) << print_lf(t);
    Term n = beta_reduce(t);
    EXPECT_TRUE(has_type(n, ty)) << print_lf(t) << " => " << print_lf(n);
    EXPECT_TRUE(alpha_equal(beta_reduce(n), n)) << print_lf(n);
    bool redex = false;
    visit(n, [&](const Term& x) { redex = redex || (x.is(Term::Kind::App) && x.fun().is(Term::Kind::Lam)); });
    EXPECT_FALSE(redex) << print_lf(n);
  }
}
