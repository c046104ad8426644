#include <gtest/gtest.h>

#include "bvm/session.hpp"

namespace bvm {
namespace {

TEST(Session, EvalOfStandardName) {
  const ScriptReport r = run_script("algebra B 2\nhf X={{}}\nname x=^X\neval \"x = x\"\n");
  ASSERT_FALSE(r.error) << r.error->what();
  ASSERT_EQ(r.results.size(), 4U);
  EXPECT_EQ(r.results[3].json["truth"], nlohmann::ordered_json({"a1", "a2"}));
  EXPECT_EQ(r.results[3].text, "eval x = x: 1");
}

TEST(Session, LosCheckOnWorkedExample) {
  const ScriptReport r = run_script(
      "algebra B 2\n"
      "name x = ^{}\n"
      "set y = { x : {a1} }\n"
      "check los \"x in y\" x=x y=y\n");
  ASSERT_FALSE(r.error);
  EXPECT_EQ(r.checks, 1U);
  EXPECT_EQ(r.failed, 0U);
  const auto& j = r.results.back().json;
  EXPECT_EQ(j["pass"], true);
  EXPECT_EQ(j["satisfied"], nlohmann::ordered_json({"a1"}));
  EXPECT_EQ(j["per_atom"]["a1"], true);
  EXPECT_EQ(j["per_atom"]["a2"], false);
  EXPECT_TRUE(r.ok());
}

TEST(Session, MalformedStatementReportsLine) {
  const ScriptReport r = run_script("algebra B 2\n\n# comment\nset y = { nothing : 1 }\neval \"x = x\"\n");
  ASSERT_TRUE(r.error);
  EXPECT_EQ(r.error->line(), 4);
  EXPECT_EQ(r.error->code(), Errc::ScriptError);
  EXPECT_EQ(r.results.size(), 1U);
  EXPECT_FALSE(r.ok());

  const ScriptReport f = run_script("eval \"x = = x\" x=^{}\n");
  ASSERT_TRUE(f.error);
  EXPECT_EQ(f.error->line(), 1);
  EXPECT_EQ(f.error->column(), 11);

  for (const char* bad : {"frobnicate", "hf = {}", "set y = {", "bset X discrete", "eval x = x"})
    EXPECT_TRUE(run_script(bad).error) << bad;
}

TEST(Session, FailedChecksSetStatus) {
  const ScriptReport r = run_script(
      "name x = ^{}\n"
      "check eval \"x in x\" --expect 1\n"
      "check eval \"x = x\" --expect 1\n");
  ASSERT_FALSE(r.error);
  EXPECT_EQ(r.checks, 2U);
  EXPECT_EQ(r.failed, 1U);
  EXPECT_FALSE(r.ok());
}

const char* kTour =
    "algebra B 2\n"
    "hf X = {{},{{}}}\n"
    "name xs = ^X\n"
    "name e = ^{}\n"
    "set y = { xs : {a1} , ^{} : 1 }\n"
    "mix m = {a1} : xs, {a2} : e\n"
    "ascend up = xs, e, m\n"
    "maximize \"x in up\" x --rank 2 as w\n"
    "descend up --rank 3\n"
    "check transfer \"forall u in X . u in X\"\n"
    "escher-check --rank 2 --samples 8\n"
    "ordinal xs\n"
    "psi r = perm 1 0\n"
    "two-point\n"
    "bset Y symmdiff\n"
    "bset R random 3\n"
    "bsystem S over Y sig(le/2, fn meet/2) le=imp-table meet=meet-table\n"
    "beval S \"forall x . le(c0,x)\"\n"
    "hom S S [c0,c1,c2,c3]\n"
    "realize R as rr\n"
    "poset C = forcing 1 2\n"
    "poset K = forcing 1 2 4\n"
    "poset P = order 0<x 0<y x<p y<p\n"
    "complete C --dot\n"
    "refined? P\n"
    "check refined C\n"
    "dump w\n"
    "algebra F from C\n"
    "enumerate 2\n";

TEST(Session, DeterministicJson) {
  auto render = [](const ScriptReport& r) {
    std::string out;
    for (const auto& s : r.results) out += s.json.dump() + "\n";
    return out;
  };
  const ScriptReport a = run_script(kTour);
  ASSERT_FALSE(a.error) << a.error->what();
  EXPECT_TRUE(a.ok());
  EXPECT_EQ(render(a), render(run_script(kTour)));
  SessionOptions other;
  other.seed = 99;
  EXPECT_NE(render(a), render(run_script(kTour, other)));
}

TEST(Session, Statements) {
  const ScriptReport r = run_script(kTour);
  ASSERT_FALSE(r.error) << r.error->what();
  auto find = [&](const std::string& verb) -> const nlohmann::ordered_json& {
    for (const auto& s : r.results)
      if (s.verb == verb) return s.json;
    throw std::runtime_error("no " + verb);
  };
  EXPECT_EQ(find("maximize")["truth"], nlohmann::ordered_json({"a1", "a2"}));
  EXPECT_EQ(find("descend")["members"].size(), 4U);
  EXPECT_EQ(find("psi")["membership_is_rho"], true);
  EXPECT_EQ(find("two-point")["bijective"], true);
  EXPECT_EQ(find("beval")["truth"], nlohmann::ordered_json({"a1", "a2"}));
  EXPECT_EQ(find("hom")["iso"], true);
  EXPECT_EQ(find("realize")["metric_matches"], true);
  EXPECT_EQ(find("refined?")["refined"], true);
  EXPECT_EQ(find("complete")["atoms"], nlohmann::ordered_json({"[f0]", "[f1]"}));
  EXPECT_EQ(find("enumerate")["size"], 4U);
  EXPECT_TRUE(find("dump")["dump"]["sets"].is_object());
  bool warned = false;
  for (const auto& s : r.results) warned = warned || s.json.contains("warning");
  EXPECT_TRUE(warned);
}

TEST(Session, SwitchingAlgebraDropsSets) {
  Session s;
  s.execute("name x = ^{}", 1);
  s.execute("algebra C 3", 2);
  EXPECT_THROW(s.execute("dump x", 3), ScriptError);
  EXPECT_EQ(s.universe().algebra().atom_count(), 3);
  EXPECT_FALSE(s.execute("   # nothing", 4));
}

TEST(Session, BSystemTables) {
  const ScriptReport r = run_script(
      "bset D discrete 2\n"
      "bsystem T over D sig(r/1, fn f/1) r=[1,0] f=[c1,c0]\n"
      "beval T \"r(f(c1))\"\n"
      "bset Y symmdiff\n"
      "bsystem U over Y sig(r/1) r=[1,0,0,0]\n");
  ASSERT_TRUE(r.error);
  EXPECT_EQ(r.error->line(), 5);
  EXPECT_EQ(r.results[2].json["truth"], nlohmann::ordered_json({"a1", "a2"}));
}

}  // namespace
}  // namespace bvm
