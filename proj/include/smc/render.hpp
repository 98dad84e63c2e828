#pragma once

#include <array>
#include <string>
#include <string_view>

#include "smc/zigzag.hpp"

namespace smc {

// Per-gate ASCII token and TikZ macro name.
struct GlyphTable {
  std::array<std::string, 3> ascii;
  std::array<std::string, 3> tikz;

  const std::string& token(Gate g) const { return ascii[static_cast<int>(g)]; }
  const std::string& macro(Gate g) const { return tikz[static_cast<int>(g)]; }

  // `<gate> <ascii> <macro>` lines; '%' starts a comment line.
  static GlyphTable parse(std::string_view text);
  // data/glyphs.txt, read once.
  static const GlyphTable& standard();
};

enum class RenderFormat { Ascii, Tikz };

struct RenderOptions {
  RenderFormat format = RenderFormat::Ascii;
  int spacing = 2;  // columns per wire in ASCII, tenths of a centimetre / 5 in TikZ
  const GlyphTable* glyphs = nullptr;  // standard table when null
};

// ASCII: one row per slice, wires drawn as '|' and the gate as its token.
// A diagram without gates is a single row of bars ('.' when it has no wires).
std::string render_diagram(const Diagram& d, const RenderOptions& o = {});
// Reads the ASCII form back. Throws ParseError.
Diagram parse_ascii(std::string_view text, const GlyphTable& glyphs = GlyphTable::standard());

// Each diagram of the path, with the move between consecutive ones.
std::string render_path(const Zigzag& z, const RenderOptions& o = {});

}  // namespace smc
