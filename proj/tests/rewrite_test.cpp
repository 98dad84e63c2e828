#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "smc/rewrite.hpp"

using namespace smc;

namespace {

Diagram P(const char* s) { return Diagram::parse(s); }

int count_rule(const std::vector<Redex>& rs, const std::string& name) {
  return static_cast<int>(std::count_if(rs.begin(), rs.end(),
                                        [&](const Redex& r) { return r.name() == name; }));
}

}  // namespace

TEST_CASE("catalog shapes") {
  CHECK(rules_M().rules.size() == 3);
  CHECK(rules_F().rules.size() == 12);
  CHECK(rules_GM().rules.size() == 11);
  CHECK(rules_structural().rules.size() == 7);
  int structural = 0;
  for (const auto& r : rules_F().rules) {
    CHECK(r->lhs.inputs() == r->rhs.inputs());
    CHECK(r->lhs.outputs() == r->rhs.outputs());
    structural += r->structural;
  }
  CHECK(structural == 7);
  CHECK(rules_GM().index_of("sms") < 0);
  CHECK(rules_GM().at("ms2").lhs == rules_F().at("ssm").rhs);
  CHECK(rules_GM().at("ms2").rhs == rules_F().at("ssm").lhs);
  CHECK_THROWS_AS(builtin_rules("Q"), ParseError);
}

TEST_CASE("rule file parsing") {
  RuleSet rs = parse_rules("% comment\nassoc : (m*id1);m => (id1*m);m\n\nswap structural : s;s => id2\n");
  REQUIRE(rs.rules.size() == 2);
  CHECK(rs.rules[1]->structural);
  CHECK(rs.rules[0]->lhs == rules_F().at("alpha").lhs);
  CHECK_THROWS_AS(parse_rules("bad line"), ParseError);
  CHECK_THROWS_AS(parse_rules("x : m => e"), ArityMismatch);
  CHECK_THROWS_AS(parse_rules("x weird : m => m"), ParseError);
}

TEST_CASE("redex search examples") {
  auto rs = find_redexes(P("(m*id1);m"), rules_F());
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].name() == "alpha");
  CHECK(rs[0].gates == 0b11);
  CHECK(find_redexes(identity(4), rules_F()).empty());
  auto sss = find_redexes(P("s;s;s"), rules_F());
  CHECK(sss.size() == 2);
  CHECK(count_rule(sss, "ss") == 2);
  // the unit sits left of the product only through interchange
  auto ctx = find_redexes(P("(id2*e);(id1*m);(s);(m)"), rules_F());
  CHECK(count_rule(ctx, "r") == 1);
  CHECK(count_rule(ctx, "tau") == 1);
}

TEST_CASE("redex application") {
  Diagram le = P("(e*id1);m");
  auto rs = find_redexes(le, rules_F());
  REQUIRE(rs.size() == 1);
  CHECK(apply_redex(le, rs[0]) == identity(1));
  Diagram sm = P("s;m");
  rs = find_redexes(sm, rules_F());
  REQUIRE(count_rule(rs, "tau") == 1);
  CHECK(apply_redex(sm, rs[0]) == P("m"));
  Diagram wl = P("id2*((e*id1);m)");
  rs = find_redexes(wl, rules_F());
  REQUIRE(rs.size() == 1);
  CHECK(apply_redex(wl, rs[0]) == identity(3));
  Diagram ms = P("(m*id1);s;(m)");
  rs = find_redexes(ms, rules_F());
  for (const auto& r : rs) {
    Applied a = apply_tracked(ms, r);
    CHECK(a.result.size() == ms.size() - r.rule->lhs.size() + r.rule->rhs.size());
    CHECK(a.result.inputs() == ms.inputs());
    CHECK(a.result.outputs() == ms.outputs());
  }
}

TEST_CASE("stale redexes are rejected") {
  Diagram d = P("(m*id1);m");
  auto rs = find_redexes(d, rules_F());
  REQUIRE(!rs.empty());
  CHECK_THROWS_AS(apply_redex(P("(id1*m);m"), rs[0]), StaleRedex);
  Redex moved = rs[0];
  moved.left = 1;
  CHECK_FALSE(redex_valid(d, moved));
  CHECK(redex_valid(d, rs[0]));
}

TEST_CASE("normalization examples") {
  RewritePath p = normalize(P("(m*id1);m"), rules_F());
  CHECK(p.end() == P("(id1*m);m"));
  CHECK(p.size() == 1);
  p = normalize(P("s;s"), rules_F());
  CHECK(p.end() == identity(2));
  CHECK(p.size() == 1);
  CHECK(p.steps[0].redex.rule->structural);
  Diagram d = P("(s*e);(id1*m);m");
  RewritePath left = normalize(d, rules_F());
  oracle::SinkTable sinks(rules_F());
  const auto& sk = sinks.sinks(d);
  REQUIRE(sk.size() == 1);
  CHECK(*sk.begin() == left.end());
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    RewritePath rp = normalize(d, rules_F(), {Strategy::Random, seed, 0});
    CHECK(rp.end() == left.end());
  }
}

TEST_CASE("paths replay") {
  RewritePath p = normalize(P("(s*id1);(id1*s);(m*id1);m"), rules_F());
  Diagram cur = p.start;
  for (const auto& st : p.steps) {
    CHECK(st.source == cur);
    cur = apply_redex(cur, st.redex);
    CHECK(st.target == cur);
  }
}

TEST_CASE("structural normal forms") {
  CHECK(structural_normal_form(P("s;s;m")).end() == P("m"));
  RewritePath a = structural_normal_form(P("(m*id1);m"));
  CHECK(a.size() == 0);
  RewritePath b = structural_normal_form(P("(m*id1);s"));
  CHECK(b.size() == 1);
  CHECK(b.end() == P("(id1*s);(s*id1);(id1*m)"));
  oracle::SinkTable sinks(rules_structural());
  CHECK(sinks.sinks(P("s;s;m")) == std::set<Diagram>{P("m")});
}

TEST_CASE("step budget") {
  NormalizeOptions opt;
  opt.budget = 100;
  RuleSet loop = parse_rules("there : (m*id1);m => (id1*m);m\nback : (id1*m);m => (m*id1);m\n");
  CHECK_THROWS_AS(normalize(P("(m*id1);m"), loop, opt), BudgetExhausted);
  // the alternative orientation strands this diagram as a normal form
  Diagram d = P("(id1*s);(s*id1);(id1*s);(m*id1)");
  CHECK(normalize(d, rules_GM(), opt).size() == 0);
  CHECK(normalize(d, rules_F(), opt).end() == P("(id1*m);s"));
}

TEST_CASE("matching agrees with the factorization oracle on small diagrams") {
  for (int p = 0; p <= 3; ++p) {
    for (const Diagram& d : enumerate_diagrams_upto(p, 3, 5)) {
      for (const RuleSet* rs : {&rules_F(), &rules_GM()}) {
        const auto got = oracle::occurrences(find_redexes(d, *rs));
        const auto want = oracle::factorizations(d, *rs);
        CAPTURE(d.str());
        REQUIRE(oracle::agree(got, want));
      }
    }
  }
}

TEST_CASE("unique normal forms on small diagrams") {
  oracle::SinkTable sinks(rules_F());
  for (int p = 0; p <= 3; ++p) {
    for (const Diagram& d : enumerate_diagrams_upto(p, 3, 4)) {
      const auto& sk = sinks.sinks(d);
      CAPTURE(d.str());
      REQUIRE(sk.size() == 1);
      CHECK(normalize(d, rules_F()).end() == *sk.begin());
      CHECK(normalize(d, rules_F(), {Strategy::Random, 7, 0}).end() == *sk.begin());
    }
  }
}
