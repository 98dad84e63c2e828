#include <algorithm>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>

#include "smc/coherence.hpp"

namespace smc {

std::vector<Move> forward_moves(const Diagram& d, const RuleSet& rules) {
  std::vector<Move> out;
  for (const Redex& r : find_redexes(d, rules)) out.push_back(Move::of(d, r));
  return out;
}

namespace {

// Rules turned around, for locating right-hand sides.
std::shared_ptr<const Rule> rule_ptr(const RuleSet& rules, std::string_view name) {
  const int i = rules.index_of(name);
  if (i < 0) throw ParseError("unknown rule " + std::string(name));
  return rules.rules[i];
}

const RuleSet& reversed(const RuleSet& rules) {
  static std::map<std::string, RuleSet> cache;
  std::string key;
  for (const auto& r : rules.rules) key += r->name + ":" + r->lhs.str() + ">" + r->rhs.str() + ";";
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  RuleSet rev;
  rev.name = rules.name + "~";
  for (const auto& r : rules.rules) {
    if (r->rhs.empty()) continue;
    auto flipped = std::make_shared<Rule>(*r);
    std::swap(flipped->lhs, flipped->rhs);
    rev.rules.push_back(flipped);
  }
  return cache[key] = std::move(rev);
}

// Contexts of an identity hole of width p at every cut and offset.
std::vector<Whisker> empty_holes(const Diagram& d, int p) {
  std::vector<Whisker> out;
  const int n = d.size();
  const Precedence pr = Precedence::of(d);
  std::vector<GateSet> ideals;
  if (n <= 16) {
    for (GateSet m = 0; m < bit(n); ++m) {
      if ((pr.ancestors(m) & ~m) == 0) ideals.push_back(m);
    }
  } else {
    for (int k = 0; k <= n; ++k) ideals.push_back(bit(k) - 1);
  }
  for (GateSet ideal : ideals) {
    std::vector<int> order;
    for (int i = 0; i < n; ++i) if (ideal & bit(i)) order.push_back(i);
    const int u = static_cast<int>(order.size());
    for (int i = 0; i < n; ++i) if (!(ideal & bit(i))) order.push_back(i);
    std::vector<Slice> chain = d.slices();
    if (!reorder_chain(chain, order)) continue;
    const Diagram top(d.inputs(), std::vector<Slice>(chain.begin(), chain.begin() + u));
    const int w = top.outputs();
    const Diagram bottom(w, std::vector<Slice>(chain.begin() + u, chain.end()));
    for (int a = 0; a + p <= w; ++a) out.push_back(Whisker{top, a, w - a - p, bottom});
  }
  return out;
}

}  // namespace

std::vector<Move> backward_moves(const Diagram& d, const RuleSet& rules) {
  std::vector<Move> out;
  std::set<std::tuple<std::string, GateSet, Diagram>> seen;
  auto keep = [&](Move m) {
    if (seen.insert({m.rule->name, m.hole, m.upper}).second) out.push_back(std::move(m));
  };
  const RuleSet& rev = reversed(rules);
  for (const Redex& r : find_redexes(d, rev)) {
    const auto real = rule_ptr(rules, r.name());
    keep(Move::make(real, context_of(d, r), true));
  }
  for (const auto& rule : rules.rules) {
    if (!rule->rhs.empty()) continue;
    for (Whisker& w : empty_holes(d, rule->rhs.inputs())) keep(Move::make(rule, std::move(w), true));
  }
  return out;
}

void trim_to_meet(Zigzag& a, Zigzag& b) {
  for (std::size_t i = 0; i < a.moves.size(); ++i) {
    for (std::size_t k = 0; k < b.moves.size(); ++k) {
      if (a.moves[i].to() == b.moves[k].to()) {
        a.moves.resize(i + 1);
        b.moves.resize(k + 1);
        return;
      }
    }
  }
}

namespace {

std::vector<PeakFixture> fixture_names() {
  static const std::vector<PeakFixture> fx =
      parse_peak_fixtures(read_text_file(data_path("peaks_F.txt")));
  return fx;
}

CellKind kind_of(PeakClass c) {
  switch (c) {
    case PeakClass::Kelly: return CellKind::Kelly;
    case PeakClass::WeakKelly: return CellKind::WeakKelly;
    default: return CellKind::Foldable;
  }
}

}  // namespace

CellCatalog CellCatalog::build(const RuleSet& rules, const std::string& expansions_text) {
  CellCatalog cat;
  cat.rules_ = &rules;
  int max_k = 0;
  for (const auto& r : rules.rules) max_k = std::max(max_k, r->lhs.size());
  const auto base = base_cells(rules, parse_base_cells(read_text_file(data_path("base_cells.txt"))));
  const auto report = local_confluence_report(rules, max_k + 1);
  const auto fixtures = fixture_names();
  int unnamed = 0;
  for (const PeakOutcome& o : report.peaks) {
    if (!o.join) continue;
    const Move left = Move::of(o.peak.source, o.peak.left);
    const Move right = Move::of(o.peak.source, o.peak.right);
    CellRef cell;
    if (*o.cls == PeakClass::Coherence) {
      for (const CellRef& b : base) {
        const Move& x = b->a.moves.front();
        const Move& y = b->b.moves.front();
        if ((x.same_step(left) && y.same_step(right)) || (x.same_step(right) && y.same_step(left))) {
          cell = b;
        }
      }
    }
    if (!cell) {
      auto c = std::make_shared<Cell>();
      for (const PeakFixture& f : fixtures) {
        if (fixture_matches(f, o.peak)) c->name = f.name;
      }
      if (c->name.empty()) c->name = "peak-" + std::to_string(++unnamed);
      c->kind = kind_of(*o.cls);
      c->a.start = o.peak.source;
      c->a.push(left);
      c->a.append(Zigzag::of(o.join->left));
      c->b.start = o.peak.source;
      c->b.push(right);
      c->b.append(Zigzag::of(o.join->right));
      trim_to_meet(c->a, c->b);
      cell = c;
    }
    if (cat.by_name_.count(cell->name)) continue;
    cat.cells_.push_back(cell);
    cat.by_name_[cell->name] = cell;
    cat.by_source_[cell->source()].push_back(cell);
  }
  if (!expansions_text.empty()) cat.load_expansions(expansions_text);
  return cat;
}

const CellCatalog& CellCatalog::of(const RuleSet& rules) {
  static std::map<const RuleSet*, std::unique_ptr<CellCatalog>> cache;
  auto& slot = cache[&rules];
  if (!slot) {
    std::string text;
    const std::string file = data_path("kelly_expansions_" + rules.name + ".txt");
    if (std::filesystem::exists(file)) text = read_text_file(file);
    slot = std::make_unique<CellCatalog>(build(rules, text));
  }
  return *slot;
}

CellRef CellCatalog::find(const std::string& name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : it->second;
}

std::optional<std::pair<CellRef, bool>> CellCatalog::peak_cell(const Move& x, const Move& y) const {
  auto it = by_source_.find(x.upper);
  if (it == by_source_.end()) return std::nullopt;
  for (const CellRef& c : it->second) {
    const Move& a = c->a.moves.front();
    const Move& b = c->b.moves.front();
    if (a.same_step(x) && b.same_step(y)) return std::make_pair(c, true);
    if (a.same_step(y) && b.same_step(x)) return std::make_pair(c, false);
  }
  return std::nullopt;
}

const std::vector<Surgery>* CellCatalog::expansion(const Cell& c) const {
  auto it = expansions_.find(&c);
  return it == expansions_.end() ? nullptr : &it->second;
}

void CellCatalog::set_expansion(const CellRef& c, std::vector<Surgery> list) {
  expansions_[c.get()] = std::move(list);
}

std::vector<CellRef> CellCatalog::kelly_cells() const {
  std::vector<CellRef> out;
  for (const CellRef& c : cells_) {
    if (c->kind == CellKind::Kelly || c->kind == CellKind::WeakKelly) out.push_back(c);
  }
  return out;
}

namespace {

void put_ctx(std::ostream& os, const Whisker& w) {
  os << ' ' << w.top.str() << ' ' << w.left << ' ' << w.right << ' ' << w.bottom.str();
}

}  // namespace

std::string CellCatalog::expansions_text() const {
  std::ostringstream os;
  for (const CellRef& c : kelly_cells()) {
    const auto* list = expansion(*c);
    if (!list) continue;
    os << "EXPAND " << c->name << ' ' << list->size() << '\n';
    for (const Surgery& s : *list) {
      os << "S " << s.pos << ' ' << (s.forward ? "fwd" : "bwd") << ' ' << (s.inverted ? "inv" : "-")
         << ' ';
      const Cell& cell = *s.cell;
      if (cell.kind == CellKind::StaleCancel) {
        const Move& m = cell.a.moves.front();
        os << "stale " << m.rule->name << ' ' << (m.backward ? '-' : '+');
      } else if (cell.kind == CellKind::DisjointSquare) {
        os << "square";
        for (const Move* m : {&cell.a.moves.front(), &cell.b.moves.front()}) {
          os << ' ' << m->rule->name;
          put_ctx(os, m->ctx);
        }
      } else {
        os << "cell " << cell.name;
      }
      put_ctx(os, s.ctx);
      os << '\n';
    }
  }
  return os.str();
}

void CellCatalog::load_expansions(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  CellRef current;
  std::vector<Surgery> list;
  auto fail = [&](const std::string& what) {
    throw ParseError("expansion line " + std::to_string(lineno) + ": " + what);
  };
  auto flush = [&] {
    if (current) set_expansion(current, std::move(list));
    list.clear();
    current = nullptr;
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ts(line);
    std::string tag;
    if (!(ts >> tag) || tag[0] == '%') continue;
    auto ctx = [&] {
      Whisker w;
      std::string top, bottom;
      if (!(ts >> top >> w.left >> w.right >> bottom)) fail("expected a context");
      w.top = Diagram::parse(top);
      w.bottom = Diagram::parse(bottom);
      return w;
    };
    auto rule = [&] {
      std::string name;
      ts >> name;
      if (rules_->index_of(name) < 0) fail("unknown rule " + name);
      return rule_ptr(*rules_, name);
    };
    if (tag == "EXPAND") {
      flush();
      std::string name;
      ts >> name;
      current = find(name);
      if (!current) fail("unknown cell " + name);
      continue;
    }
    if (tag != "S" || !current) fail("expected EXPAND or S");
    Surgery s;
    std::string dir, inv, kind;
    ts >> s.pos >> dir >> inv >> kind;
    s.forward = dir == "fwd";
    s.inverted = inv == "inv";
    if (kind == "stale") {
      auto r = rule();
      std::string sign;
      ts >> sign;
      s.cell = stale_cell(r, sign == "-");
    } else if (kind == "square") {
      auto r1 = rule();
      Whisker w1 = ctx();
      auto r2 = rule();
      Whisker w2 = ctx();
      s.cell = disjoint_square(Move::make(r1, w1), Move::make(r2, w2));
    } else if (kind == "cell") {
      std::string name;
      ts >> name;
      s.cell = find(name);
      if (!s.cell) fail("unknown cell " + name);
    } else {
      fail("unknown surgery kind " + kind);
    }
    s.ctx = ctx();
    list.push_back(std::move(s));
  }
  flush();
}

}  // namespace smc
