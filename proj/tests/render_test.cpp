#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "smc/render.hpp"

using namespace smc;

namespace {

Diagram P(const char* s) { return Diagram::parse(s); }

}  // namespace

TEST_CASE("identity wires") {
  CHECK(render_diagram(identity(2)) == "| |\n");
  CHECK(render_diagram(identity(0)) == ".\n");
}

TEST_CASE("gate rows") {
  CHECK(render_diagram(P("(m*id1);m")) == "\\|/ |\n\\|/\n");
  CHECK(render_diagram(P("e;(id1*e);s")) == "o\n| o\n><\n");
  RenderOptions wide;
  wide.spacing = 4;
  CHECK(render_diagram(P("id1*s"), wide) == "|   ><\n");
}

TEST_CASE("ascii round trip") {
  for (int p = 0; p <= 2; ++p) {
    for (const Diagram& d : enumerate_diagrams_upto(p, 2, 4)) {
      REQUIRE_MESSAGE(parse_ascii(render_diagram(d)) == d, d.str());
    }
  }
}

TEST_CASE("ascii parse errors") {
  CHECK_THROWS_AS(parse_ascii("| |\n\\|/ | |\n"), ParseError);
  CHECK_THROWS_AS(parse_ascii("| ?\n"), ParseError);
  CHECK_THROWS_AS(parse_ascii(""), ParseError);
}

TEST_CASE("custom glyphs") {
  const GlyphTable g = GlyphTable::parse("m M \\mm\ne E \\ee\ns X \\ss\n");
  RenderOptions o;
  o.glyphs = &g;
  CHECK(render_diagram(P("(e*id1);s;m"), o) == "E |\nX\nM\n");
  CHECK(parse_ascii("E |\nX\nM\n", g) == P("(e*id1);s;m"));
  CHECK_THROWS_AS(GlyphTable::parse("m M \\mm\n"), ParseError);
  CHECK_THROWS_AS(GlyphTable::parse("m A \\a\ne A \\b\ns X \\c\n"), ParseError);
}

TEST_CASE("tikz output") {
  RenderOptions o;
  o.format = RenderFormat::Tikz;
  const std::string t = render_diagram(P("(m*id1);s"), o);
  CHECK(t.find("\\documentclass") == 0);
  CHECK(t.find("\\smcmult{0}{0}") != std::string::npos);
  CHECK(t.find("\\smcswap{0}{1}") != std::string::npos);
  CHECK(t.find("\\end{document}") != std::string::npos);
}

TEST_CASE("paths list every diagram") {
  const Zigzag z = Zigzag::of(normalize(P("s;s"), rules_F()));
  const std::string out = render_path(z);
  CHECK(out.find("ss") != std::string::npos);
  CHECK(out.find("| |") != std::string::npos);
}
