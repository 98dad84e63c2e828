#include "smc/zigzag.hpp"

#include <map>
#include <sstream>
#include <stdexcept>

namespace smc {

Move Move::make(std::shared_ptr<const Rule> rule, Whisker ctx, bool backward) {
  Move m;
  m.upper = ctx.plug(rule->lhs, m.hole);
  m.lower = ctx.plug(rule->rhs);
  m.rule = std::move(rule);
  m.ctx = std::move(ctx);
  m.backward = backward;
  return m;
}

Move Move::of(const Diagram& host, const Redex& r) { return make(r.rule, context_of(host, r)); }

Move Move::inverse() const {
  Move m = *this;
  m.backward = !backward;
  return m;
}

Move Move::lifted(const Whisker& outer) const { return make(rule, outer.compose(ctx), backward); }

bool Move::same_step(const Move& o) const {
  return hole == o.hole && rule->name == o.rule->name && upper == o.upper;
}

std::string Move::str() const {
  return std::string(backward ? "-" : "+") + rule->name + " in " + ctx.str();
}

bool operator==(const Move& a, const Move& b) {
  return a.backward == b.backward && a.same_step(b);
}

Zigzag Zigzag::inverse() const {
  Zigzag z;
  z.start = end();
  for (auto it = moves.rbegin(); it != moves.rend(); ++it) z.moves.push_back(it->inverse());
  return z;
}

Zigzag Zigzag::lifted(const Whisker& outer) const {
  Zigzag z;
  z.start = outer.plug(start);
  for (const Move& m : moves) z.moves.push_back(m.lifted(outer));
  return z;
}

void Zigzag::push(const Move& m) {
  if (!(m.from() == end())) {
    throw CompositionMismatch("move " + m.str() + " does not start at " + end().str());
  }
  moves.push_back(m);
}

void Zigzag::append(const Zigzag& tail) {
  if (!(tail.start == end())) {
    throw CompositionMismatch("zigzag ending at " + end().str() + " cannot continue from " +
                              tail.start.str());
  }
  moves.insert(moves.end(), tail.moves.begin(), tail.moves.end());
}

Zigzag Zigzag::of(const RewritePath& p) {
  Zigzag z;
  z.start = p.start;
  for (const RewriteStep& s : p.steps) z.moves.push_back(Move::of(s.source, s.redex));
  return z;
}

bool operator==(const Zigzag& a, const Zigzag& b) { return a.start == b.start && a.moves == b.moves; }

const char* cell_kind_name(CellKind k) {
  switch (k) {
    case CellKind::Base: return "base";
    case CellKind::Foldable: return "foldable";
    case CellKind::Kelly: return "kelly";
    case CellKind::WeakKelly: return "weak_kelly";
    case CellKind::DisjointSquare: return "disjoint_square";
    case CellKind::StaleCancel: return "stale_cancel";
  }
  return "?";
}

Zigzag Surgery::from_side() const {
  Zigzag z = (forward ? cell->a : cell->b).lifted(ctx);
  return inverted ? z.inverse() : z;
}

Zigzag Surgery::to_side() const {
  Zigzag z = (forward ? cell->b : cell->a).lifted(ctx);
  return inverted ? z.inverse() : z;
}

Surgery Surgery::reversed() const {
  Surgery s = *this;
  s.forward = !forward;
  return s;
}

std::vector<std::pair<std::string, int>> Certificate::vocabulary() const {
  std::map<std::string, int> count;
  for (const Surgery& s : surgeries) {
    if (!s.cell->plumbing()) ++count[s.cell->name];
  }
  return {count.begin(), count.end()};
}

std::string Certificate::script() const {
  std::ostringstream os;
  auto path = [&](const char* tag, const Zigzag& z) {
    os << tag << ' ' << z.start.str() << '\n';
    for (const Move& m : z.moves) os << "MOVE " << m.str() << '\n';
  };
  path("SOURCE", source);
  path("TARGET", target);
  SurgeryLog log(source);
  for (std::size_t i = 0; i < surgeries.size(); ++i) {
    const Surgery& s = surgeries[i];
    log.apply(s);
    os << "SURGERY " << i << ' ' << s.cell->name << ' ' << (s.forward ? "fwd" : "bwd")
       << (s.inverted ? " inv" : "") << " at " << s.pos << " in " << s.ctx.str() << '\n';
    if (s.cell->kind != CellKind::Base) {
      os << "CELL " << s.cell->a.start.str() << " :";
      for (const Move& m : s.cell->a.moves) os << ' ' << m.str() << ';';
      os << " =";
      for (const Move& m : s.cell->b.moves) os << ' ' << m.str() << ';';
      os << '\n';
    }
    os << "CHECK " << log.path().size() << ' ' << log.path().end().str() << '\n';
  }
  return os.str();
}

CellRef stale_cell(const std::shared_ptr<const Rule>& rule, bool backward_first) {
  static std::map<std::pair<const Rule*, bool>, CellRef> cache;
  auto& slot = cache[{rule.get(), backward_first}];
  if (!slot) {
    auto c = std::make_shared<Cell>();
    c->name = "stale_cancel";
    c->kind = CellKind::StaleCancel;
    const Move m = Move::make(rule, Whisker::around(rule->lhs.inputs(), rule->lhs.outputs()),
                              backward_first);
    c->a.start = m.from();
    c->a.moves = {m, m.inverse()};
    c->b.start = m.from();
    slot = c;
  }
  return slot;
}

namespace {

Redex redex_of(const Move& m) {
  RuleSet one;
  one.name = m.rule->name;
  one.rules.push_back(m.rule);
  for (Redex& r : find_redexes(m.upper, one)) {
    if (r.gates == m.hole && Move::of(m.upper, r).lower == m.lower) return r;
  }
  throw std::logic_error("move " + m.str() + " has no matching redex");
}

Move residual(const Move& x, const Move& y) {
  const Redex rx = redex_of(x);
  const Applied ap = apply_tracked(x.upper, rx);
  GateSet moved = 0;
  for (GateSet h = y.hole; h; h &= h - 1) {
    const int k = ap.kept[std::countr_zero(h)];
    if (k < 0) throw std::logic_error("moves " + x.str() + " and " + y.str() + " overlap");
    moved |= bit(k);
  }
  RuleSet one;
  one.name = y.rule->name;
  one.rules.push_back(y.rule);
  for (Redex& r : find_redexes(ap.result, one)) {
    if (r.gates == moved) return Move::of(ap.result, r);
  }
  throw std::logic_error("no residual of " + y.str() + " after " + x.str());
}

}  // namespace

CellRef disjoint_square(const Move& x, const Move& y) {
  auto c = std::make_shared<Cell>();
  c->name = "disjoint_square";
  c->kind = CellKind::DisjointSquare;
  c->a.start = x.upper;
  c->a.push(x);
  c->a.push(residual(x, y));
  c->b.start = y.upper;
  c->b.push(y);
  c->b.push(residual(y, x));
  if (!(c->a.end() == c->b.end())) {
    throw std::logic_error("moves " + x.str() + " and " + y.str() + " do not commute");
  }
  return c;
}

SurgeryLog::SurgeryLog(Zigzag start) : path_(std::move(start)) {}

void SurgeryLog::apply(const Surgery& s) {
  const Zigzag from = s.from_side();
  const Zigzag to = s.to_side();
  auto& mv = path_.moves;
  const Diagram& at = s.pos == 0 ? path_.start : (s.pos <= mv.size() ? mv[s.pos - 1].to() : path_.start);
  bool ok = s.pos + from.moves.size() <= mv.size() && at == from.start;
  for (std::size_t i = 0; ok && i < from.moves.size(); ++i) ok = mv[s.pos + i] == from.moves[i];
  if (!ok) {
    throw std::logic_error("cell " + s.cell->name + " does not fit the path at " +
                           std::to_string(s.pos));
  }
  mv.erase(mv.begin() + s.pos, mv.begin() + s.pos + from.moves.size());
  mv.insert(mv.begin() + s.pos, to.moves.begin(), to.moves.end());
  done_.push_back(s);
}

void SurgeryLog::insert_stale(std::size_t pos, const Move& m) {
  Surgery s;
  s.pos = pos;
  s.cell = stale_cell(m.rule, m.backward);
  s.ctx = m.ctx;
  s.forward = false;
  apply(s);
}

void SurgeryLog::cancel_stale(std::size_t pos) {
  const Move& m = path_.moves.at(pos);
  Surgery s;
  s.pos = pos;
  s.cell = stale_cell(m.rule, m.backward);
  s.ctx = m.ctx;
  apply(s);
}

void SurgeryLog::reduce() {
  std::size_t i = 0;
  while (i + 1 < path_.moves.size()) {
    if (path_.moves[i + 1].cancels(path_.moves[i])) {
      cancel_stale(i);
      if (i > 0) --i;
    } else {
      ++i;
    }
  }
}

void SurgeryLog::replay(const std::vector<Surgery>& list, std::size_t pos, const Whisker& ctx,
                        bool reverse, bool inverted, std::size_t segment_len) {
  std::vector<Surgery> seq;
  if (reverse) {
    for (auto it = list.rbegin(); it != list.rend(); ++it) seq.push_back(it->reversed());
  } else {
    seq = list;
  }
  std::size_t len = segment_len;
  for (const Surgery& s : seq) {
    const std::size_t from = (s.forward ? s.cell->a : s.cell->b).moves.size();
    const std::size_t to = (s.forward ? s.cell->b : s.cell->a).moves.size();
    Surgery t = s;
    t.ctx = ctx.compose(s.ctx);
    if (inverted) {
      t.pos = pos + (len - s.pos - from);
      t.inverted = !s.inverted;
    } else {
      t.pos = pos + s.pos;
    }
    apply(t);
    len = len + to - from;
  }
}

std::vector<BaseCellSpec> parse_base_cells(std::string_view text) {
  std::vector<BaseCellSpec> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& what) {
    throw ParseError("cell line " + std::to_string(lineno) + ": " + what);
  };
  auto steps = [&](const std::string& body) {
    std::vector<std::pair<std::string, Diagram>> s;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto gt = item.find('>');
      if (gt == std::string::npos) fail("expected 'rule > diagram'");
      std::istringstream rn(item.substr(0, gt));
      std::string rule;
      rn >> rule;
      s.emplace_back(rule, Diagram::parse(item.substr(gt + 1)));
    }
    return s;
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '%') continue;
    const auto colon = line.find(':', first);
    if (colon == std::string::npos) fail("missing ':'");
    std::istringstream head(line.substr(first, colon - first));
    std::string tag, name;
    head >> tag >> name;
    const std::string body = line.substr(colon + 1);
    if (tag == "CELL") {
      BaseCellSpec c;
      c.name = name;
      c.source = Diagram::parse(body);
      out.push_back(std::move(c));
    } else if ((tag == "A" || tag == "B") && !out.empty()) {
      (tag == "A" ? out.back().a : out.back().b) = steps(body);
    } else {
      fail("expected CELL, A or B");
    }
  }
  return out;
}

std::vector<CellRef> base_cells(const RuleSet& rules, const std::vector<BaseCellSpec>& specs) {
  std::vector<CellRef> out;
  for (const BaseCellSpec& spec : specs) {
    bool known = true;
    for (const auto* side : {&spec.a, &spec.b}) {
      for (const auto& [rule, d] : *side) known = known && rules.index_of(rule) >= 0;
    }
    if (!known) continue;
    auto c = std::make_shared<Cell>();
    c->name = spec.name;
    c->kind = CellKind::Base;
    auto build = [&](const std::vector<std::pair<std::string, Diagram>>& side, Zigzag& z) {
      z.start = spec.source;
      for (const auto& [rule, next] : side) {
        std::vector<Move> hits;
        for (const Redex& r : find_redexes(z.end(), rules)) {
          if (r.name() != rule) continue;
          Move m = Move::of(z.end(), r);
          if (m.lower == next) hits.push_back(std::move(m));
        }
        if (hits.size() != 1) {
          throw MalformedDiagram("cell " + spec.name + ": " + std::to_string(hits.size()) +
                                 " ways to step by " + rule + " from " + z.end().str() + " to " +
                                 next.str());
        }
        z.moves.push_back(hits.front());
      }
    };
    build(spec.a, c->a);
    build(spec.b, c->b);
    if (!(c->a.end() == c->b.end())) {
      throw MalformedDiagram("cell " + spec.name + " has sides ending apart");
    }
    out.push_back(c);
  }
  return out;
}

}  // namespace smc
