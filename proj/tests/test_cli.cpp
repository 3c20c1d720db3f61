#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "incr/cli.hpp"
#include "support.hpp"

using namespace incr;

namespace {

struct BatchResult {
  int code;
  std::string out;
  std::string err;
};

BatchResult batch(const std::string& world, const std::string& text, TraceLevel level = TraceLevel::Min,
                  bool json = false) {
  std::istringstream in(text);
  std::ostringstream out, err;
  int code = run_batch(testing_support::config(world), split_words(in), level, json, out, err);
  return {code, out.str(), err.str()};
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

bool has_line(const std::string& text, const std::string& line) {
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);)
    if (l == line) return true;
  return false;
}

}  // namespace

TEST(Cli, SplitWordsDetachesFullStops) {
  std::istringstream in("london has a tower. every  parent\nshows it .");
  EXPECT_EQ(split_words(in), (std::vector<std::string>{"london", "has", "a", "tower", ".", "every", "parent", "shows",
                                                       "it", "."}));
}

TEST(Cli, WorkedExampleTraceMatchesGolden) {
  BatchResult r = batch("london", read_file(testing_support::data_path("scripts/worked_example.txt")));
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.err, "");
  EXPECT_EQ(r.out, read_file(std::string(INCR_TEST_DIR) + "/golden/worked_example.min.txt"));
  EXPECT_TRUE(has_line(r.out, "  h0 PLAUSIBLE forall(x,parent(x),exists(z,true,show(x,w,z)))"));
  EXPECT_TRUE(has_line(r.out, "  h0 PLAUSIBLE exists(z,true,forall(x,parent(x),show(x,w,z)))"));
  EXPECT_TRUE(has_line(
      r.out, "    => exists(w,true,and(and(tower(w),has(london,w)),forall(x,parent(x),exists(z,true,show(x,w,z)))))"));
  EXPECT_TRUE(has_line(
      r.out, "    => exists(w,true,exists(z,true,and(and(tower(w),has(london,w)),forall(x,parent(x),show(x,w,z)))))"));
}

TEST(Cli, TraceIsByteStable) {
  std::string text = read_file(testing_support::data_path("scripts/worked_example.txt"));
  EXPECT_EQ(batch("london", text, TraceLevel::Full).out, batch("london", text, TraceLevel::Full).out);
}

TEST(Cli, PunchExitsBlocked) {
  BatchResult r = batch("workshop", read_file(testing_support::data_path("scripts/punch.txt")));
  EXPECT_EQ(r.code, kExitBlocked);
  EXPECT_TRUE(has_line(r.out, "  BLOCKED bolted"));
  EXPECT_EQ(r.out, read_file(std::string(INCR_TEST_DIR) + "/golden/punch.min.txt"));
  EXPECT_NE(r.err.find("blocked"), std::string::npos);
}

TEST(Cli, UnknownWordExitsDeadEnd) {
  BatchResult r = batch("demo", "mary zorbled");
  EXPECT_EQ(r.code, kExitDeadEnd);
  EXPECT_NE(r.err.find("unknown word 'zorbled'"), std::string::npos);
}

TEST(Cli, SyntacticDeadEnd) {
  BatchResult r = batch("demo", "mary mary");
  EXPECT_EQ(r.code, kExitDeadEnd);
  EXPECT_EQ(r.err.rfind("error: dead end", 0), 0u);
}

TEST(Cli, IntroducedTable) {
  BatchResult r = batch("demo", read_file(testing_support::data_path("scripts/introduced.txt")));
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_TRUE(has_line(r.out, "== sue"));
  EXPECT_TRUE(has_line(r.out, "  t  intr(mary,john,sue)"));
}

TEST(Cli, JsonSnapshot) {
  BatchResult r = batch("demo", "mary introduced john to sue", TraceLevel::Min, true);
  EXPECT_EQ(r.code, kExitOk);
  Json j = Json::parse(r.out);
  EXPECT_EQ(j["hypotheses"][0]["lf"], "intr(mary,john,sue)");
  EXPECT_EQ(j["words"].size(), 5u);
}

TEST(Cli, FullTraceShowsDerivationAndClosure) {
  BatchResult r = batch("london", "every parent shows it", TraceLevel::Full);
  EXPECT_TRUE(has_line(r.out, "    closure: show(q(forall,x,parent(x)),pro(y),q(exists,z,true))"));
  EXPECT_TRUE(has_line(r.out, "    rule: apply it:np"));
}

TEST(Cli, ReplCommands) {
  std::istringstream in("london has\n:undo\n:context\nhas a tower .\n:context\n:scopings\n:bogus\n:quit\nmary\n");
  std::ostringstream out, err;
  int code = run_repl(testing_support::config("london"), TraceLevel::Min, in, out, err);
  EXPECT_EQ(code, kExitOk);
  std::string o = out.str();
  EXPECT_NE(o.find("== london"), std::string::npos);
  EXPECT_NE(o.find("> true\n"), std::string::npos);
  EXPECT_NE(o.find("> exists(w,true,and(tower(w),has(london,w)))\n"), std::string::npos);
  EXPECT_EQ(o.find("== mary"), std::string::npos);
  EXPECT_EQ(err.str(), "unknown command :bogus\n");
}

TEST(Cli, ReplReportsErrorsAndContinues) {
  std::istringstream in(":undo\nzorbled\nmary\n:state\n");
  std::ostringstream out, err;
  EXPECT_EQ(run_repl(testing_support::config("demo"), TraceLevel::Min, in, out, err), kExitOk);
  EXPECT_NE(err.str().find("nothing to undo"), std::string::npos);
  EXPECT_NE(err.str().find("unknown word 'zorbled'"), std::string::npos);
  EXPECT_NE(out.str().find("\"words\": [\n    \"mary\"\n  ]"), std::string::npos);
}

TEST(Cli, LoadSessionConfigValidatesFiles) {
  CliConfig c;
  c.lexicon_path = testing_support::data_path("lexicon/demo.lex");
  c.world_path = testing_support::data_path("worlds/workshop.world");
  c.domain_k = 2;
  c.s_modifiers = true;
  SessionConfig sc = load_session_config(c);
  EXPECT_EQ(sc.domain_k, 2);
  EXPECT_TRUE(sc.parser.modifier_prediction);
  EXPECT_EQ(sc.world->constraints().size(), 1u);
  c.world_path = "/nonexistent.world";
  EXPECT_THROW(load_session_config(c), Error);
}
