#include "smc/render.hpp"

#include <sstream>

#include "smc/peaks.hpp"

namespace smc {

namespace {

int gate_index(const std::string& name) {
  if (name == "m") return 0;
  if (name == "e") return 1;
  if (name == "s") return 2;
  return -1;
}

std::string ascii(const Diagram& d, const GlyphTable& g, int spacing) {
  const std::string gap(std::max(1, spacing - 1), ' ');
  std::ostringstream os;
  auto bars = [&](int n) {
    for (int i = 0; i < n; ++i) os << (i ? gap : "") << '|';
  };
  if (d.empty()) {
    if (d.inputs() == 0) os << '.';
    bars(d.inputs());
    os << '\n';
    return os.str();
  }
  for (int i = 0; i < d.size(); ++i) {
    const Slice& s = d[i];
    const int right = d.width_before(i) - s.left - gate_in(s.gate);
    bars(s.left);
    if (s.left) os << gap;
    os << g.token(s.gate);
    if (right) os << gap;
    bars(right);
    os << '\n';
  }
  return os.str();
}

const char* kTikzPreamble =
    "\\documentclass[tikz]{standalone}\n"
    "\\newcommand{\\smcmult}[2]{\\draw (#1,#2) -- ++(0.5,0.5) -- ++(0.5,-0.5); "
    "\\draw (#1,#2) ++(0.5,0.5) -- ++(0,0.5); \\fill (#1,#2) ++(0.5,0.5) circle (1.5pt);}\n"
    "\\newcommand{\\smcunit}[2]{\\draw (#1,#2) ++(0,0.5) -- ++(0,0.5); "
    "\\fill (#1,#2) ++(0,0.5) circle (1.5pt);}\n"
    "\\newcommand{\\smcswap}[2]{\\draw (#1,#2) -- ++(1,1); \\draw (#1,#2) ++(1,0) -- ++(-1,1);}\n";

std::string tikz(const Diagram& d, const GlyphTable& g, int spacing) {
  std::ostringstream os;
  os << kTikzPreamble << "\\begin{document}\n\\begin{tikzpicture}[x=" << spacing * 0.5
     << "cm,y=-1cm]\n";
  if (d.empty()) {
    for (int c = 0; c < d.inputs(); ++c) os << "\\draw (" << c << ",0) -- (" << c << ",1);\n";
  }
  for (int i = 0; i < d.size(); ++i) {
    const Slice& s = d[i];
    const int w = d.width_before(i);
    const int in = gate_in(s.gate), out = gate_out(s.gate);
    for (int c = 0; c < w; ++c) {
      if (c >= s.left && c < s.left + in) continue;
      const int below = c < s.left ? c : c - in + out;
      os << "\\draw (" << c << ',' << i << ") -- (" << below << ',' << i + 1 << ");\n";
    }
    os << g.macro(s.gate) << '{' << s.left << "}{" << i << "}\n";
  }
  os << "\\end{tikzpicture}\n\\end{document}\n";
  return os.str();
}

}  // namespace

GlyphTable GlyphTable::parse(std::string_view text) {
  GlyphTable t;
  std::array<bool, 3> seen{};
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string gate, token, macro;
    if (!(ls >> gate) || gate[0] == '%') continue;
    const int k = gate_index(gate);
    if (k < 0 || !(ls >> token >> macro) || token == "|" || token == ".") {
      throw ParseError("glyph line " + std::to_string(lineno) + ": expected <gate> <token> <macro>");
    }
    t.ascii[k] = token;
    t.tikz[k] = macro;
    seen[k] = true;
  }
  for (int k = 0; k < 3; ++k) {
    if (!seen[k]) throw ParseError("glyph table misses a gate");
    for (int j = 0; j < k; ++j) {
      if (t.ascii[j] == t.ascii[k]) throw ParseError("glyph table reuses a token");
    }
  }
  return t;
}

const GlyphTable& GlyphTable::standard() {
  static const GlyphTable t = parse(read_text_file(data_path("glyphs.txt")));
  return t;
}

std::string render_diagram(const Diagram& d, const RenderOptions& o) {
  const GlyphTable& g = o.glyphs ? *o.glyphs : GlyphTable::standard();
  return o.format == RenderFormat::Ascii ? ascii(d, g, o.spacing) : tikz(d, g, o.spacing);
}

Diagram parse_ascii(std::string_view text, const GlyphTable& glyphs) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<Slice> slices;
  int inputs = -1, width = 0;
  bool bare = false;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    int bars = 0, gate = -1, left = 0;
    bool any = false;
    while (ls >> tok) {
      any = true;
      if (tok == "|") {
        ++bars;
        continue;
      }
      if (tok == "." && bars == 0) continue;
      int k = -1;
      for (int j = 0; j < 3; ++j) {
        if (glyphs.ascii[j] == tok) k = j;
      }
      if (k < 0 || gate >= 0) throw ParseError("unexpected token '" + tok + "' in diagram row");
      gate = k;
      left = bars;
    }
    if (!any) continue;
    if (bare) throw ParseError("rows after a bare wire row");
    if (gate < 0) {
      if (!slices.empty() || inputs >= 0) throw ParseError("bare wire row inside a diagram");
      inputs = bars;
      bare = true;
      continue;
    }
    const Gate g = static_cast<Gate>(gate);
    if (inputs < 0) inputs = width = bars + gate_in(g);
    if (bars + gate_in(g) != width) throw ParseError("row does not match the width above it");
    width += gate_out(g) - gate_in(g);
    slices.push_back(Slice{left, g});
  }
  if (inputs < 0) throw ParseError("empty diagram text");
  return Diagram(inputs, std::move(slices));
}

std::string render_path(const Zigzag& z, const RenderOptions& o) {
  std::ostringstream os;
  os << render_diagram(z.start, o);
  for (const Move& m : z.moves) {
    os << (o.format == RenderFormat::Ascii ? "  " : "% ") << (m.backward ? "<- " : "-> ")
       << m.rule->name << '\n';
    os << render_diagram(m.to(), o);
  }
  return os.str();
}

}  // namespace smc
