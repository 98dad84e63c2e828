#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "random_paths.hpp"
#include "smc/coherence.hpp"

using namespace smc;

namespace {

Diagram P(const char* s) { return Diagram::parse(s); }

std::set<std::string> names(const Certificate& c) {
  std::set<std::string> out;
  for (const auto& [n, k] : c.vocabulary()) out.insert(n);
  return out;
}

Polygon unit_polygon(int i) {
  const char* files[] = {"unit_left.txt", "unit_right.txt", "unit_unit.txt"};
  return parse_polygon(read_text_file(data_path(files[i])));
}

}  // namespace

TEST_CASE("single generator edges use one rule step") {
  const std::vector<std::string> order{"x", "y", "z"};
  for (const char* g : {"a(x,y,z)", "x(x,y)#1(z)", "g(x,y,z)"}) {
    const MorExpr f = MorExpr::parse(g);
    const Zigzag z = mor_to_zigzag(f, order);
    CHECK(z.start == term_to_diagram(f.source(), order));
    CHECK(z.end() == term_to_diagram(f.target(), order));
    int primary = 0;
    for (const Move& m : z.moves) primary += !m.rule->structural;
    CHECK(primary == 1);
  }
}

TEST_CASE("identity generators give empty edges") {
  const Zigzag z = mor_to_zigzag(MorExpr::parse("1((x#y))"), {"x", "y"});
  CHECK(z.size() == 0);
}

TEST_CASE("hexagon needs one g and one exa2") {
  const Polygon p = parse_polygon(read_text_file(data_path("hexagon.txt")));
  CHECK(p.order() == std::vector<std::string>{"y", "z", "x"});
  const auto pc = certify_polygon(p);
  const auto vocab = pc.cert.vocabulary();
  REQUIRE(vocab.size() == 2);
  CHECK(vocab[0] == std::make_pair(std::string("exa2"), 1));
  CHECK(vocab[1] == std::make_pair(std::string("g"), 1));
  CHECK(validate(pc.cert, rules_F()).ok);
}

TEST_CASE("unit polygons in the monoidal fragment") {
  const CellCatalog& cat = CellCatalog::of(rules_M());
  for (int i = 0; i < 3; ++i) {
    const auto pc = certify_polygon(unit_polygon(i), cat);
    for (const std::string& n : names(pc.cert)) CHECK((n == "penta" || n == "tria"));
    const Validation v = validate(pc.cert, rules_M());
    CHECK_MESSAGE(v.ok, v.reason);
  }
}

TEST_CASE("validator rejects tampered certificates") {
  const auto pc = certify_polygon(unit_polygon(0), CellCatalog::of(rules_M()));
  REQUIRE(validate(pc.cert, rules_M()).ok);
  REQUIRE(!pc.cert.surgeries.empty());

  Certificate moved = pc.cert;
  moved.surgeries[0].pos += 1;
  CHECK_FALSE(validate(moved, rules_M()).ok);

  Certificate flipped = pc.cert;
  flipped.surgeries.back().forward = !flipped.surgeries.back().forward;
  CHECK_FALSE(validate(flipped, rules_M()).ok);

  Certificate short_list = pc.cert;
  short_list.surgeries.pop_back();
  const Validation v = validate(short_list, rules_M());
  CHECK_FALSE(v.ok);
}

TEST_CASE("validator rejects unexpanded Kelly cells") {
  const CellCatalog& cat = CellCatalog::of(rules_M());
  const auto kelly = cat.kelly_cells();
  REQUIRE(!kelly.empty());
  Certificate c{kelly[0]->a, kelly[0]->b, {}};
  Surgery s;
  s.cell = kelly[0];
  c.surgeries.push_back(s);
  const Validation v = validate(c, rules_M());
  CHECK_FALSE(v.ok);
  CHECK(v.failed_at == 0);
}

TEST_CASE("monoidal Kelly expansions use penta and tria") {
  const CellCatalog& cat = CellCatalog::of(rules_M());
  CHECK(cat.kelly_cells().size() == 3);
  for (const CellRef& c : cat.kelly_cells()) {
    const auto [cell, list] = expand_kelly(c->name, cat);
    const Certificate cert = expansion_certificate(*cell, list);
    for (const std::string& n : names(cert)) CHECK((n == "penta" || n == "tria"));
    CHECK_MESSAGE(validate(cert, rules_M()).ok, c->name);
  }
}

TEST_CASE("Kelly peaks can be named by source") {
  const CellCatalog& cat = CellCatalog::of(rules_M());
  const CellRef c = cat.kelly_cells().front();
  CHECK(expand_kelly(c->source().str(), cat).first == c);
  CHECK_THROWS_AS(expand_kelly("no-such-peak", cat), UnknownPeak);
}

TEST_CASE("expansions text round trips") {
  const CellCatalog& cat = CellCatalog::of(rules_M());
  CellCatalog copy = CellCatalog::build(rules_M(), cat.expansions_text());
  for (const CellRef& c : copy.kelly_cells()) {
    const auto* a = cat.expansion(*cat.find(c->name));
    const auto* b = copy.expansion(*c);
    REQUIRE(a);
    REQUIRE(b);
    CHECK(a->size() == b->size());
  }
  CHECK(copy.expansions_text() == cat.expansions_text());
  CHECK_THROWS_AS(copy.load_expansions("EXPAND kelly-1 1\nS 0 sideways\n"), ParseError);
}

TEST_CASE("certify_equal on small zigzags") {
  const Diagram d = P("(s*id1);(id1*s);(s*id1)");
  const Zigzag a = Zigzag::of(normalize(d, rules_F()));
  Zigzag b{d, {}};
  for (const Move& m : forward_moves(d, rules_F())) {
    if (m.rule->name == "yb") {
      b.push(m);
      break;
    }
  }
  REQUIRE(b.size() == 1);
  b.append(Zigzag::of(normalize(b.end(), rules_F())));
  CHECK(a.end() == b.end());
  const Certificate c = certify_equal(a, b);
  CHECK(validate(c, rules_F()).ok);

  const Zigzag other{P("s"), {}};
  CHECK_THROWS_AS(certify_equal(a, other), NotParallel);
}

TEST_CASE("random parallel pairs certify") {
  std::mt19937_64 rng(7);
  const auto ds = enumerate_diagrams_any(2, 4);
  int done = 0;
  for (int tries = 0; done < 10 && tries < 200; ++tries) {
    const auto pair = paths::parallel_pair(ds[rng() % ds.size()], 6, rules_F(), rng);
    if (!pair) continue;
    const Certificate c = certify_equal(pair->first, pair->second);
    const Validation v = validate(c, rules_F());
    CHECK_MESSAGE(v.ok, v.reason);
    ++done;
  }
  CHECK(done == 10);
}

TEST_CASE("polygon input errors") {
  CHECK_THROWS_AS(parse_polygon("OBJECT A: (x#y)\nOBJECT B: (y#x)\n"
                                "EDGE f: A -> B : a(x,y,x)\nTERMINAL B\n"),
                  CompositionMismatch);
  CHECK_THROWS_AS(parse_polygon("OBJECT A (x#y)\n"), ParseError);
  const Polygon line = parse_polygon(
      "OBJECT A: (x#y)\nOBJECT B: (y#x)\nEDGE f: A -> B : x(x,y)\nTERMINAL B\n");
  CHECK_THROWS_AS(polygon_sides(line), ShapeMismatch);
}
