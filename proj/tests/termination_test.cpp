#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>

#include "smc/termination.hpp"

using namespace smc;

namespace {

Diagram P(const char* s) { return Diagram::parse(s); }

// rule -> (lhs value, rhs value) as printed in the source table, except: the
// (m*id1);s entry's stray x is read as z, and both unit rules are printed as
// x+1 where the gate table gives x+2 and 2x+1.
const std::map<std::string, std::pair<std::string, std::string>> kTable = {
    {"alpha", {"4x+2y+z", "2x+2y+z"}},
    {"l", {"x+2", "x"}},
    {"r", {"2x+1", "x"}},
    {"tau", {"3x+2y", "2x+y"}},
    {"gamma", {"4x+2y+z", "2x+2y+z"}},
    {"ss", {"(2x+y, x+y)", "(x, y)"}},
    {"yb", {"(2x+y+z, x+y, x)", "(x+y+z, x+y, x)"}},
    {"es", {"(x+1, 1)", "(x, 1)"}},
    {"se", {"(x+1, x)", "(1, x)"}},
    {"ms", {"(2x+y+z, 2x+y)", "(x+y+z, 2x+y)"}},
    {"ssm", {"(3x+2y+z, x)", "(x+2y+z, x)"}},
    {"sms", {"(3x+y+z, x+y)", "(2x+y+z, y)"}},
};

}  // namespace

TEST_CASE("interpretation examples") {
  CHECK(interpret(P("(m*id1);m")).str() == "4x+2y+z");
  CHECK(interpret(identity(2)) == AffineMap::identity(2));
  CHECK(interpret(P("(m*id1);s")).str() == "(2x+y+z, 2x+y)");
  CHECK(interpret(P("e")).str() == "1");
  CHECK(interpret(identity(0)).str() == "()");
}

TEST_CASE("dominance examples") {
  CHECK(strictly_dominates(parse_affine("4x+2y+z", 3), parse_affine("2x+2y+z", 3)));
  AffineMap f = parse_affine("(2x+y, x+y)", 2);
  CHECK_FALSE(strictly_dominates(f, f));
  CHECK(strictly_dominates(f, parse_affine("(x, y)", 2)));
  CHECK_FALSE(strictly_dominates(parse_affine("x+1", 1), parse_affine("2x", 1)));
  CHECK_THROWS_AS(strictly_dominates(f, parse_affine("x", 1)), DimensionMismatch);
}

TEST_CASE("every rule of F matches the printed inequality") {
  TerminationReport rep = verify_termination(rules_F());
  CHECK(rep.all_pass);
  REQUIRE(rep.lines.size() == 12);
  for (const auto& line : rep.lines) {
    CAPTURE(line.rule);
    const auto& [l, r] = kTable.at(line.rule);
    const int p = line.lhs.in_dim();
    CHECK(line.lhs == parse_affine(l, p));
    CHECK(line.rhs == parse_affine(r, p));
    CHECK(line.decreasing);
  }
  TerminationReport m = verify_termination(rules_M());
  CHECK(m.all_pass);
  CHECK(m.lines.size() == 3);
}

TEST_CASE("an identity rule does not decrease") {
  RuleSet rs = parse_rules("same : m => m\n");
  CHECK_FALSE(verify_termination(rs).all_pass);
}

TEST_CASE("the swap value (y, x+y) does not reproduce the table") {
  Interpretation alt = Interpretation::parse("s: (y, x+y)\n");
  CHECK(interpret(P("s;m"), alt).str() == "x+3y");
  CHECK(interpret(P("s;m")).str() == "3x+2y");
  CHECK_THROWS_AS(Interpretation::parse("q: x"), ParseError);
  CHECK_THROWS_AS(Interpretation::parse("m: (x, y)"), DimensionMismatch);
}

TEST_CASE("interpretation is functorial") {
  std::mt19937 rng(5);
  for (const auto& r : rules_F().rules) {
    for (const auto& q : rules_F().rules) {
      if (r->lhs.outputs() != q->lhs.inputs()) continue;
      CHECK(interpret(seq_compose(r->lhs, q->lhs)) ==
            then(interpret(r->lhs), interpret(q->lhs)));
      CHECK(interpret(par_compose(r->lhs, q->rhs)) ==
            direct_sum(interpret(r->lhs), interpret(q->rhs)));
    }
  }
}

TEST_CASE("symbolic dominance implies pointwise decrease") {
  std::mt19937 rng(11);
  auto rnd_map = [&](int p, int q) {
    AffineMap f(p, q);
    for (int r = 0; r < q; ++r) {
      for (int c = 0; c < p; ++c) f.coeff(r, c) = rng() % 4;
      f.constant(r) = rng() % 3;
    }
    return f;
  };
  int dominated = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int p = 1 + rng() % 3, q = 1 + rng() % 2;
    AffineMap f = rnd_map(p, q), g = rnd_map(p, q);
    if (!strictly_dominates(f, g)) continue;
    ++dominated;
    for (int k = 0; k < 20; ++k) {
      std::vector<long> x(p);
      for (long& v : x) v = 1 + rng() % 50;
      auto fx = f(x), gx = g(x);
      bool some = false;
      for (int i = 0; i < q; ++i) {
        REQUIRE(fx[i] >= gx[i]);
        some = some || fx[i] > gx[i];
      }
      REQUIRE(some);
    }
  }
  CHECK(dominated > 0);
}

TEST_CASE("rewriting strictly decreases the interpretation in context") {
  for (const char* s : {"(s*e);(id1*m);m", "(m*id2);(m*id1);m", "s;s;s", "(id1*s);(s*id1);(id1*s);(m*id1)"}) {
    RewritePath p = normalize(P(s), rules_F());
    for (const auto& st : p.steps) {
      CHECK(strictly_dominates(interpret(st.source), interpret(st.target)));
    }
  }
}
