#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "smc/peaks.hpp"
#include "smc/term.hpp"
#include "smc/zigzag.hpp"

namespace smc {

// Forward moves out of `d`, in find_redexes order.
std::vector<Move> forward_moves(const Diagram& d, const RuleSet& rules);
// Moves running a rule backward out of `d` (rhs occurrences, including
// insertions of empty right-hand sides at every cut and offset).
std::vector<Move> backward_moves(const Diagram& d, const RuleSet& rules);

// Shortens two forward paths from one source so they end at their first
// common diagram (counted after each side's first move).
void trim_to_meet(Zigzag& a, Zigzag& b);

// Critical-peak cells of a rule set: the base cells for the designated
// coherence peaks, and one cell per other peak bounded by its computed join.
// Kelly and weak-Kelly cells carry an expansion into the other cells.
class CellCatalog {
 public:
  // Built-in catalogs for F and M (expansions read from data/), cached.
  static const CellCatalog& of(const RuleSet& rules);
  // Uncached build; expansions are taken from `expansions_text` when given,
  // else left empty.
  static CellCatalog build(const RuleSet& rules, const std::string& expansions_text = "");

  const RuleSet& rules() const { return *rules_; }
  const std::vector<CellRef>& cells() const { return cells_; }
  CellRef find(const std::string& name) const;
  // Cell whose peak is the pair of first moves {x, y} out of its source.
  std::optional<std::pair<CellRef, bool>> peak_cell(const Move& x, const Move& y) const;
  // Surgeries turning cell.a into cell.b (pos 0, trivial context), built
  // only from base, foldable and plumbing cells.
  const std::vector<Surgery>* expansion(const Cell& c) const;
  void set_expansion(const CellRef& c, std::vector<Surgery> list);
  std::vector<CellRef> kelly_cells() const;

  std::string expansions_text() const;
  void load_expansions(std::string_view text);

 private:
  const RuleSet* rules_ = nullptr;
  std::vector<CellRef> cells_;
  std::map<std::string, CellRef> by_name_;
  std::unordered_map<Diagram, std::vector<CellRef>> by_source_;
  std::map<const Cell*, std::vector<Surgery>> expansions_;
};

// Searches a bounded 2-complex around `target`'s source for a filler made
// of `allowed` cells and disjoint squares.
struct SolverOptions {
  int extra_gates = 2;
  std::size_t max_vertices = 50000;
  std::size_t max_word = 64;  // longest relation used for an elimination
};
std::optional<std::vector<Surgery>> solve_filler(const Cell& target, const RuleSet& rules,
                                                 const std::vector<CellRef>& allowed,
                                                 const SolverOptions& opt = {});

// Single-generator edge between primary cells: structural moves, one
// application of the generator's rule (either way) and structural moves.
Zigzag morgen_to_edge(const MorGen& g, const std::vector<std::string>& order,
                      const RuleSet& rules = rules_F());
Zigzag contextual_edge(const ContextualGen& g, const std::vector<std::string>& order,
                       const RuleSet& rules = rules_F());
Zigzag mor_to_zigzag(const MorExpr& f, const std::vector<std::string>& order,
                     const RuleSet& rules = rules_F());

// Fills two parallel zigzags. Throws NotParallel.
Certificate certify_equal(const Zigzag& z1, const Zigzag& z2,
                          const CellCatalog& cat = CellCatalog::of(rules_F()));

// Independent replay checker.
struct Validation {
  bool ok = true;
  long failed_at = -1;  // surgery index, -1 for the endpoints
  std::string reason;
};
Validation validate(const Certificate& c, const RuleSet& rules);

// Expansion of a Kelly or weak-Kelly peak named by fixture id or source.
// Throws UnknownPeak.
std::pair<CellRef, std::vector<Surgery>> expand_kelly(const std::string& peak,
                                                      const CellCatalog& cat = CellCatalog::of(rules_F()));
// The expansion as a certificate from one side of the cell to the other.
Certificate expansion_certificate(const Cell& c, const std::vector<Surgery>& list);

// A commuting-diagram question over terms.
struct Polygon {
  std::map<std::string, Term> objects;
  struct Edge {
    std::string name, from, to;
    MorExpr mor;
  };
  std::vector<Edge> edges;
  std::string terminal;

  // Variable order: left to right in the terminal object.
  std::vector<std::string> order() const;
};
Polygon parse_polygon(std::string_view text);

// The two sides of a polygon: the edge paths from the unique source object
// to the terminal object, chosen deterministically.
struct PolygonSides {
  std::vector<std::string> left, right;
  MorExpr left_mor, right_mor;
};
PolygonSides polygon_sides(const Polygon& p);

struct PolygonCertificate {
  std::vector<std::string> order;
  Zigzag left, right;
  Certificate cert;
};
PolygonCertificate certify_polygon(const Polygon& p, const CellCatalog& cat = CellCatalog::of(rules_F()));

}  // namespace smc
