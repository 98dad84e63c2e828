#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <deque>
#include <random>
#include <set>

#include "smc/diagram.hpp"
#include "smc/port_graph.hpp"

using namespace smc;

namespace {

Diagram P(const char* s) { return Diagram::parse(s); }

using Chain = std::vector<Slice>;

// Oracle: closure of a slice chain under the interchange law, computed by
// breadth-first search over adjacent transpositions of independent slices.
std::set<std::vector<std::pair<int, int>>> interchange_closure(const Chain& start) {
  auto key = [](const Chain& c) {
    std::vector<std::pair<int, int>> k;
    for (const Slice& s : c) k.emplace_back(s.left, static_cast<int>(s.gate));
    return k;
  };
  std::set<std::vector<std::pair<int, int>>> seen{key(start)};
  std::deque<Chain> todo{start};
  while (!todo.empty()) {
    Chain c = todo.front();
    todo.pop_front();
    for (std::size_t i = 0; i + 1 < c.size(); ++i) {
      const Slice u = c[i];
      const Slice v = c[i + 1];
      const int iu = gate_in(u.gate), ou = gate_out(u.gate);
      const int iv = gate_in(v.gate), ov = gate_out(v.gate);
      Chain d = c;
      if (v.left + iv <= u.left) {
        // v sits entirely left of u's outputs
        d[i] = Slice{v.left, v.gate};
        d[i + 1] = Slice{u.left + ov - iv, u.gate};
      } else if (v.left >= u.left + ou) {
        d[i] = Slice{v.left - ou + iu, v.gate};
        d[i + 1] = Slice{u.left, u.gate};
      } else {
        continue;
      }
      if (seen.insert(key(d)).second) todo.push_back(d);
    }
  }
  return seen;
}

Chain random_chain(std::mt19937& rng, int p, int gates) {
  Chain c;
  int w = p;
  for (int k = 0; k < gates; ++k) {
    std::vector<Gate> opts{Gate::E};
    if (w >= 2) {
      opts.push_back(Gate::M);
      opts.push_back(Gate::S);
    }
    Gate g = opts[rng() % opts.size()];
    int left = static_cast<int>(rng() % (w - gate_in(g) + 1));
    c.push_back(Slice{left, g});
    w += gate_out(g) - gate_in(g);
  }
  return c;
}

Chain random_shuffle(std::mt19937& rng, Chain c, int moves) {
  for (int k = 0; k < moves && c.size() > 1; ++k) {
    std::size_t i = rng() % (c.size() - 1);
    Slice u = c[i], v = c[i + 1];
    if (exchange(u, v)) {
      c[i] = u;
      c[i + 1] = v;
    }
  }
  return c;
}

// Oracle count: every chain p -> q with at most g gates, deduplicated by
// interchange closure.
std::size_t oracle_count(int p, int q, int g) {
  std::set<std::vector<std::pair<int, int>>> covered;
  std::size_t classes = 0;
  std::vector<std::pair<Chain, int>> stack{{Chain{}, p}};
  while (!stack.empty()) {
    auto [c, w] = stack.back();
    stack.pop_back();
    if (w == q) {
      std::vector<std::pair<int, int>> k;
      for (const Slice& s : c) k.emplace_back(s.left, static_cast<int>(s.gate));
      if (!covered.count(k)) {
        ++classes;
        auto cl = interchange_closure(c);
        covered.insert(cl.begin(), cl.end());
      }
    }
    if (static_cast<int>(c.size()) == g) continue;
    for (Gate gt : {Gate::M, Gate::E, Gate::S}) {
      for (int left = 0; left + gate_in(gt) <= w; ++left) {
        Chain d = c;
        d.push_back(Slice{left, gt});
        stack.push_back({d, w + gate_out(gt) - gate_in(gt)});
      }
    }
  }
  return classes;
}

}  // namespace

TEST_CASE("identity and units") {
  CHECK(identity(0).inputs() == 0);
  CHECK(identity(0).outputs() == 0);
  CHECK(identity(0).empty());
  CHECK(canonical_form(identity(5)) == identity(5));
  Diagram phi = P("(s*id1);(id1*m)");
  CHECK(seq_compose(identity(3), phi) == phi);
  CHECK(seq_compose(phi, identity(2)) == phi);
  CHECK(par_compose(identity(0), phi) == phi);
  CHECK(par_compose(phi, identity(0)) == phi);
}

TEST_CASE("sequential and parallel composition") {
  Diagram a = seq_compose(P("m*id1"), P("m"));
  CHECK(a.inputs() == 3);
  CHECK(a.outputs() == 1);
  CHECK(a == P("(m*id1);m"));
  CHECK_THROWS_AS(seq_compose(P("s"), P("e")), ArityMismatch);
  Diagram ee = par_compose(P("e"), P("e"));
  CHECK(ee.inputs() == 0);
  CHECK(ee.outputs() == 2);
  CHECK(ee == P("e;(e*id1)"));
}

TEST_CASE("interchange presentations agree") {
  Diagram phi = P("(s*id1);(id1*m)");
  Diagram psi = P("(e*id1);m");
  Diagram left = seq_compose(par_compose(phi, identity(psi.inputs())),
                             par_compose(identity(phi.outputs()), psi));
  Diagram right = seq_compose(par_compose(identity(phi.inputs()), psi),
                              par_compose(phi, identity(psi.outputs())));
  CHECK(equals(left, par_compose(phi, psi)));
  CHECK(equals(right, par_compose(phi, psi)));
  CHECK(P("(m*id0);(id1*e)") == P("(id2*e);(m*id1)"));
  CHECK(P("(m*id1);(m)") == P("(m*id1);m"));
}

TEST_CASE("equality is plane equality, not rewriting") {
  CHECK_FALSE(equals(P("s;s"), identity(2)));
  CHECK_FALSE(equals(P("(e*id1);s"), P("id1*e")));
  Diagram d = P("(s*e);(id1*m);m");
  CHECK(equals(d, canonical_form(d)));
}

TEST_CASE("parse and print round trip") {
  for (const char* s : {"id0", "id3", "m", "e", "s", "(m*id1);m", "(id1*s);(s*id1);(id1*m)",
                        "e*id1", "(s*e);(id1*m);m", "(id2*e);(s*id1);(id1*m);m"}) {
    Diagram d = P(s);
    CHECK(P(d.str().c_str()) == d);
  }
  CHECK(P("(id1*s);(s*id1);(id1*m)").str() == "(id1*s);(s*id1);(id1*m)");
  CHECK_THROWS_AS(P("m;;m"), ParseError);
  CHECK_THROWS_AS(P("x"), ParseError);
  CHECK_THROWS_AS(P("(m"), ParseError);
  CHECK_THROWS_AS(P("m;m"), ArityMismatch);
}

TEST_CASE("malformed chains and capacity") {
  CHECK_THROWS_AS(Diagram(1, {Slice{0, Gate::M}}), MalformedDiagram);
  CHECK_THROWS_AS(Diagram(2, {Slice{1, Gate::S}}), MalformedDiagram);
  set_capacity(4);
  CHECK_THROWS_AS(P("e*e*e*e*e"), CapacityExceeded);
  set_capacity(64);
  CHECK_NOTHROW(P("e*e*e*e*e"));
}

TEST_CASE("canonical form is invariant under interchange shuffles") {
  std::mt19937 rng(12345);
  for (int trial = 0; trial < 500; ++trial) {
    int p = static_cast<int>(rng() % 4);
    int gates = static_cast<int>(rng() % 11);
    Chain c = random_chain(rng, p, gates);
    Diagram base(p, c);
    CHECK(canonical_form(base) == base);
    for (int k = 0; k < 20; ++k) {
      Chain shuffled = random_shuffle(rng, c, 30);
      REQUIRE(Diagram(p, shuffled) == base);
    }
  }
}

TEST_CASE("canonical form agrees with exhaustive interchange closure") {
  std::mt19937 rng(777);
  for (int trial = 0; trial < 300; ++trial) {
    int p = static_cast<int>(rng() % 4);
    int gates = 1 + static_cast<int>(rng() % 7);
    Chain c = random_chain(rng, p, gates);
    Diagram base(p, c);
    for (const auto& k : interchange_closure(c)) {
      Chain d;
      for (auto [l, g] : k) d.push_back(Slice{l, static_cast<Gate>(g)});
      REQUIRE(Diagram(p, d) == base);
    }
  }
}

TEST_CASE("enumeration matches the closure oracle") {
  CHECK(enumerate_diagrams(1, 1, 0) == std::vector<Diagram>{identity(1)});
  CHECK(enumerate_diagrams(0, 1, 1) == std::vector<Diagram>{P("e")});
  // frozen from oracle_count(2, 1, 2)
  CHECK(enumerate_diagrams(2, 1, 2).size() == 2);
  CHECK(oracle_count(2, 1, 2) == 2);
  for (auto [p, q, g] : std::vector<std::tuple<int, int, int>>{
           {0, 0, 4}, {0, 1, 4}, {1, 1, 4}, {2, 1, 4}, {2, 2, 4}, {3, 1, 4}, {1, 2, 5}, {2, 2, 5}}) {
    CAPTURE(p);
    CAPTURE(q);
    CAPTURE(g);
    CHECK(enumerate_diagrams(p, q, g).size() == oracle_count(p, q, g));
  }
}

TEST_CASE("equality matches closure equivalence on all diagrams up to 6 gates") {
  // Distinct canonical forms must have disjoint interchange closures.
  for (auto [p, q] : std::vector<std::pair<int, int>>{{0, 1}, {1, 1}, {2, 1}, {2, 2}}) {
    auto all = enumerate_diagrams(p, q, 6);
    std::set<std::vector<std::pair<int, int>>> covered;
    for (const Diagram& d : all) {
      for (const auto& k : interchange_closure(d.slices())) {
        REQUIRE(covered.insert(k).second);
      }
    }
  }
}

TEST_CASE("port graph round trip") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    int p = static_cast<int>(rng() % 4);
    Chain c = random_chain(rng, p, static_cast<int>(rng() % 10));
    Diagram d(p, c);
    REQUIRE(PortGraph::of(d).rebuild() == d);
  }
  Diagram d = P("(s*e);(id1*m);m");
  PortGraph g = PortGraph::of(d);
  CHECK(g.gates.size() == 4);
  CHECK(g.out_src.size() == 1);
}

TEST_CASE("precedence traps an e gate between swap outputs") {
  Diagram d = P("s;(id1*e*id1)");
  Precedence pr = Precedence::of(d);
  CHECK(pr.pred[1] == bit(0));
  Diagram free = P("s;(e*id2)");
  CHECK(Precedence::of(free).pred[1] == 0);
}

TEST_CASE("composition laws on random samples") {
  std::mt19937 rng(4242);
  for (int trial = 0; trial < 200; ++trial) {
    Chain a = random_chain(rng, 2, static_cast<int>(rng() % 4));
    Diagram x(2, a);
    Chain b = random_chain(rng, x.outputs(), static_cast<int>(rng() % 3));
    Diagram y(x.outputs(), b);
    Chain c = random_chain(rng, y.outputs(), static_cast<int>(rng() % 3));
    Diagram z(y.outputs(), c);
    CHECK(seq_compose(seq_compose(x, y), z) == seq_compose(x, seq_compose(y, z)));
    CHECK(par_compose(par_compose(x, y), z) == par_compose(x, par_compose(y, z)));
    CHECK(canonical_form(x).size() == x.size());
  }
}
