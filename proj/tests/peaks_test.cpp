#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "smc/peaks.hpp"

using namespace smc;

namespace {

Diagram P(const char* s) { return Diagram::parse(s); }

std::set<Diagram> sources(const std::vector<CriticalPeak>& ps) {
  std::set<Diagram> out;
  for (const auto& p : ps) out.insert(p.source);
  return out;
}

// Independent peak check: both redexes occur, overlap, cover everything.
bool is_critical(const CriticalPeak& p, const RuleSet& rules) {
  const auto rs = find_redexes(p.source, rules);
  auto occurs = [&](const Redex& r) { return std::find(rs.begin(), rs.end(), r) != rs.end(); };
  const GateSet all = bit(p.source.size()) - 1;
  return occurs(p.left) && occurs(p.right) && (p.left.gates & p.right.gates) &&
         ((p.left.gates | p.right.gates | p.inner) == all);
}

}  // namespace

TEST_CASE("class names round trip") {
  for (PeakClass c : {PeakClass::Coherence, PeakClass::Kelly, PeakClass::WeakKelly,
                      PeakClass::SimplyFoldable, PeakClass::StronglyFoldable}) {
    CHECK(parse_class(class_name(c)) == c);
  }
  CHECK_THROWS_AS(parse_class("foldable"), ParseError);
}

TEST_CASE("monoidal census") {
  const auto peaks = enumerate_peaks(rules_M(), 3);
  const auto fx = parse_peak_fixtures(read_text_file(data_path("m_peaks.txt")));
  REQUIRE(fx.size() == 5);
  std::set<Diagram> want;
  for (const auto& f : fx) want.insert(f.source);
  CHECK(sources(peaks) == want);
  CHECK(peaks.size() == 5);
  for (const auto& p : peaks) {
    CHECK(is_critical(p, rules_M()));
    const JoinResult j = join(p, rules_M());
    CHECK(j.left.end() == j.meet);
  }
}

TEST_CASE("full census and classification") {
  const ConfluenceReport rep = local_confluence_report(rules_F(), 4);
  CHECK(rep.confluent);
  REQUIRE(rep.peaks.size() == 68);
  CHECK(rep.counts[0] == 5);
  CHECK(rep.counts[1] == 5);
  CHECK(rep.counts[2] == 12);
  CHECK(rep.counts[3] == 18);
  CHECK(rep.counts[4] == 28);
  int family = 0;
  for (const auto& o : rep.peaks) {
    CHECK(is_critical(o.peak, rules_F()));
    REQUIRE(o.join);
    CHECK(o.join->left.end() == o.join->right.end());
    family += o.peak.family != 0;
  }
  CHECK(family == 12);

  const auto fx = parse_peak_fixtures(read_text_file(data_path("peaks_F.txt")));
  REQUIRE(fx.size() == 68);
  for (const auto& f : fx) {
    const std::string tag = f.name.substr(0, f.name.rfind('-'));
    int hits = 0;
    for (const auto& o : rep.peaks) {
      if (!fixture_matches(f, o.peak)) continue;
      ++hits;
      CHECK_MESSAGE(class_name(*o.cls) == tag, f.name);
    }
    CHECK_MESSAGE(hits == 1, f.name);
  }
}

TEST_CASE("swap-monoid peak does not join") {
  const ConfluenceReport rep = local_confluence_report(rules_GM(), 4, 1000);
  CHECK_FALSE(rep.confluent);
  bool found = false;
  for (const auto& o : rep.peaks) {
    if (!(o.peak.source == P("(id1*s);(id1*m);s"))) continue;
    found = true;
    CHECK_FALSE(o.cls);
    CHECK_THROWS_AS(join(o.peak, rules_GM(), 1000), NotJoinable);
  }
  CHECK(found);
}

TEST_CASE("family sources") {
  GateSet slot = 0;
  const Diagram d = family_source(1, P("s"), &slot);
  CHECK(d.size() == 6);
  CHECK(std::popcount(slot) == 1);
  CHECK(d.slices()[std::countr_zero(slot)].gate == Gate::S);
  for (int f = 1; f <= 6; ++f) {
    for (const Diagram& inner : inner_representatives()) {
      GateSet g = 0;
      const Diagram src = family_source(f, inner, &g);
      CHECK(std::popcount(g) == inner.size());
      CHECK(src.inputs() == 2 + inner.inputs());
    }
  }
  CHECK_THROWS_AS(family_source(7, identity(1)), ShapeMismatch);
  CHECK_THROWS_AS(family_source(1, P("e")), ShapeMismatch);
}

TEST_CASE("reducing a family instance") {
  // (e*id1);m reduces to id1, so the inner slot empties
  const CriticalPeak a = reduce_global(3, P("(e*id1);m"));
  const CriticalPeak b = reduce_global(3, identity(1));
  CHECK(a.source == b.source);
  CHECK(a.inner == 0);
  CHECK(is_critical(a, rules_F()));
  const CriticalPeak c = reduce_global(5, P("(m*id1);m"));
  CHECK(std::popcount(c.inner) == 2);
  CHECK(is_critical(c, rules_F()));
  CHECK_NOTHROW(join(c, rules_F()));
  CHECK_THROWS_AS(reduce_global(2, P("e")), ShapeMismatch);
  CHECK_THROWS_AS(reduce_global(0, identity(1)), ShapeMismatch);
}

TEST_CASE("fixture parsing") {
  const auto fx = parse_peak_fixtures(
      "% comment\nPEAK x-1: s;s;m | tau@1 | ss@0\nPEAK x-2: (m*id1);m\n");
  REQUIRE(fx.size() == 2);
  CHECK(fx[0].left_rule == "tau");
  CHECK(fx[0].right_gate == 0);
  CHECK(fx[1].left_rule.empty());
  CHECK_THROWS_AS(parse_peak_fixtures("PEAK bad s;m\n"), ParseError);
  CHECK_THROWS_AS(parse_peak_fixtures("PEAK bad: s;m | tau\n"), ParseError);
  CHECK_THROWS_AS(parse_peak_fixtures("NOPE\n"), ParseError);
}

TEST_CASE("direct overlaps bound") {
  CHECK_THROWS_AS(direct_overlaps(rules_F(), 2), ShapeMismatch);
}
