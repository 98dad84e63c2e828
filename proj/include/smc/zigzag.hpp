#pragma once

#include <memory>
#include <string>
#include <vector>

#include "smc/rewrite.hpp"

namespace smc {

// One rule application in an explicit context, run forward (lhs to rhs) or
// backward.
struct Move {
  std::shared_ptr<const Rule> rule;
  Whisker ctx;
  bool backward = false;
  Diagram upper;       // ctx.plug(lhs)
  Diagram lower;       // ctx.plug(rhs)
  GateSet hole = 0;    // lhs gates inside `upper`

  static Move make(std::shared_ptr<const Rule> rule, Whisker ctx, bool backward = false);
  static Move of(const Diagram& host, const Redex& r);

  const Diagram& from() const { return backward ? lower : upper; }
  const Diagram& to() const { return backward ? upper : lower; }
  Move inverse() const;
  // The same move seen through an outer context.
  Move lifted(const Whisker& outer) const;
  bool same_step(const Move& o) const;
  bool cancels(const Move& o) const { return backward != o.backward && same_step(o); }
  std::string str() const;
};

bool operator==(const Move& a, const Move& b);

// A path of forward and backward moves.
struct Zigzag {
  Diagram start;
  std::vector<Move> moves;

  const Diagram& end() const { return moves.empty() ? start : moves.back().to(); }
  int size() const { return static_cast<int>(moves.size()); }
  Zigzag inverse() const;
  Zigzag lifted(const Whisker& outer) const;
  // Throws CompositionMismatch when the ends do not meet.
  void append(const Zigzag& tail);
  void push(const Move& m);
  static Zigzag of(const RewritePath& p);
};

bool operator==(const Zigzag& a, const Zigzag& b);

enum class CellKind { Base, Foldable, Kelly, WeakKelly, DisjointSquare, StaleCancel };

const char* cell_kind_name(CellKind k);

// A filler between two parallel zigzags.
struct Cell {
  std::string name;
  CellKind kind = CellKind::Base;
  Zigzag a;
  Zigzag b;

  const Diagram& source() const { return a.start; }
  bool plumbing() const { return kind == CellKind::DisjointSquare || kind == CellKind::StaleCancel; }
};

using CellRef = std::shared_ptr<const Cell>;

// Replaces, at `pos`, one side of `cell` seen through `ctx` by the other.
// `forward` goes a -> b. `inverted` works on the formal inverses of both
// sides instead.
struct Surgery {
  std::size_t pos = 0;
  CellRef cell;
  Whisker ctx;
  bool forward = true;
  bool inverted = false;

  Zigzag from_side() const;
  Zigzag to_side() const;
  Surgery reversed() const;
};

struct Certificate {
  Zigzag source;
  Zigzag target;
  std::vector<Surgery> surgeries;

  // Count of surgeries per cell name, plumbing excluded.
  std::vector<std::pair<std::string, int>> vocabulary() const;
  std::string script() const;
};

// Stale pair cell for a rule: [rho, rho~] when `backward_first` is false,
// [rho~, rho] otherwise; the other side is empty.
CellRef stale_cell(const std::shared_ptr<const Rule>& rule, bool backward_first);
// Two independent moves out of one diagram and their residuals.
CellRef disjoint_square(const Move& x, const Move& y);

// Applies surgeries to a working zigzag and records them.
class SurgeryLog {
 public:
  explicit SurgeryLog(Zigzag start);

  const Zigzag& path() const { return path_; }
  const std::vector<Surgery>& done() const { return done_; }
  // Throws std::logic_error when the side does not sit at s.pos.
  void apply(const Surgery& s);
  // Inserts [m, m~] before position pos.
  void insert_stale(std::size_t pos, const Move& m);
  // Removes the cancelling pair at pos, pos + 1.
  void cancel_stale(std::size_t pos);
  // Cancels adjacent inverse pairs until none is left.
  void reduce();
  // Replays `list` (built against a segment that started as `cell.a` at
  // position 0 under the trivial context) at `pos` through `ctx`.
  void replay(const std::vector<Surgery>& list, std::size_t pos, const Whisker& ctx,
              bool reverse, bool inverted, std::size_t segment_len);

 private:
  Zigzag path_;
  std::vector<Surgery> done_;
};

// The five coherence cells, read from
// data/base_cells.txt. Each side is a list of `rule > diagram` steps.
struct BaseCellSpec {
  std::string name;
  Diagram source;
  std::vector<std::pair<std::string, Diagram>> a, b;
};
std::vector<BaseCellSpec> parse_base_cells(std::string_view text);
// Builds the cells of `specs` whose rules all lie in `rules`.
std::vector<CellRef> base_cells(const RuleSet& rules, const std::vector<BaseCellSpec>& specs);

}  // namespace smc
