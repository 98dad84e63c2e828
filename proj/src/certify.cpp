#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "smc/coherence.hpp"

namespace smc {

namespace {

Whisker trivial(const Diagram& d) { return Whisker::around(d.inputs(), d.outputs()); }

std::shared_ptr<const Rule> rule_named(const RuleSet& rules, const std::string& name) {
  const int i = rules.index_of(name);
  if (i < 0) throw ParseError("rule set " + rules.name + " has no rule " + name);
  return rules.rules[i];
}

RuleSet single(const std::shared_ptr<const Rule>& r) {
  RuleSet one;
  one.name = r->name;
  one.rules.push_back(r);
  return one;
}

RuleSet structural_part(const RuleSet& rules) {
  RuleSet s;
  s.name = rules.name + "/structural";
  for (const auto& r : rules.rules) {
    if (r->structural) s.rules.push_back(r);
  }
  return s;
}

bool foldable_sides(const Zigzag& a, const Zigzag& b) {
  auto names = [](const Zigzag& z) {
    std::vector<std::string> n;
    for (const Move& m : z.moves) {
      if (!m.rule->structural) n.push_back(m.rule->name);
    }
    return n;
  };
  const auto na = names(a), nb = names(b);
  return (na.empty() && nb.empty()) || (na.size() == 1 && nb.size() == 1 && na[0] == nb[0]);
}

// Newman-style filling against a fixed catalog. fill(s) turns the segment
// [s] ++ nf(s.to) into nf(s.from); canon(z) turns z into nf(start) ++ nf(end)~.
class Certifier {
 public:
  explicit Certifier(const CellCatalog& cat) : cat_(cat), rules_(cat.rules()) {}

  const Zigzag& nf(const Diagram& d) {
    auto it = nf_.find(d);
    if (it != nf_.end()) return it->second;
    return nf_.emplace(d, Zigzag::of(normalize(d, rules_))).first->second;
  }

  const std::vector<Surgery>& fill(const Move& sigma) {
    const auto key = std::make_tuple(sigma.rule->name, sigma.upper, sigma.hole);
    auto it = fills_.find(key);
    if (it != fills_.end()) return it->second;
    const Diagram& d = sigma.upper;
    const Zigzag& target = nf(d);
    const Move tau = target.moves.front();
    std::vector<Surgery> out;
    if (!tau.same_step(sigma)) {
      Zigzag seg{d, {sigma}};
      seg.append(nf(sigma.lower));
      SurgeryLog log(seg);
      const Local lc = local_cell(sigma, tau);
      const Cell& c = *lc.cell;
      const Zigzag from = (lc.forward ? c.a : c.b).lifted(lc.ctx);
      const Zigzag to = (lc.forward ? c.b : c.a).lifted(lc.ctx);
      log.replay(expand(tail(from)), 1, trivial(d), true, false, 0);
      const std::vector<Surgery>* exp = expansion(c);
      if (exp) {
        log.replay(*exp, 0, lc.ctx, !lc.forward, false, 0);
      } else {
        log.apply(Surgery{0, lc.cell, lc.ctx, lc.forward, false});
      }
      log.replay(expand(tail(to)), 1, trivial(d), false, false, 0);
      if (!(log.path() == target)) {
        throw std::logic_error("filling " + sigma.str() + " did not reach the normal form");
      }
      out = log.done();
    }
    return fills_.emplace(key, std::move(out)).first->second;
  }

  // Surgeries turning p ++ nf(p.end) into nf(p.start); p runs forward.
  std::vector<Surgery> expand(const Zigzag& p) {
    if (p.moves.empty()) return {};
    Zigzag seg = p;
    seg.append(nf(p.end()));
    SurgeryLog log(seg);
    for (std::size_t i = p.moves.size(); i-- > 0;) {
      log.replay(fill(p.moves[i]), i, trivial(p.start), false, false, 0);
    }
    return log.done();
  }

  std::vector<Surgery> canon(const Zigzag& z) {
    SurgeryLog log(z);
    const Zigzag ns = nf(z.start);
    const std::size_t a = ns.moves.size();
    for (std::size_t t = 0; t < a; ++t) log.insert_stale(t, ns.moves[t]);
    std::size_t b = a;
    const Whisker id = trivial(z.start);
    for (const Move& mu : z.moves) {
      const std::size_t c = a + b;
      if (!mu.backward) {
        const Zigzag nd = nf(mu.lower);
        for (std::size_t t = 0; t < nd.moves.size(); ++t) log.insert_stale(c + 1 + t, nd.moves[t]);
        log.replay(fill(mu), c, id, false, false, 0);
        for (std::size_t t = 0; t < b; ++t) log.cancel_stale(a + b - 1 - t);
        b = nd.moves.size();
      } else {
        const Move sigma = mu.inverse();
        log.replay(fill(sigma), a, id, false, true, 1 + b);
        b = nf(sigma.upper).moves.size();
      }
    }
    return log.done();
  }

 private:
  struct Local {
    CellRef cell;
    Whisker ctx;
    bool forward = true;
  };

  static Zigzag tail(const Zigzag& z) {
    Zigzag t;
    t.start = z.moves.front().to();
    t.moves.assign(z.moves.begin() + 1, z.moves.end());
    return t;
  }

  const std::vector<Surgery>* expansion(const Cell& c) {
    if (c.kind != CellKind::Kelly && c.kind != CellKind::WeakKelly) return nullptr;
    if (const auto* e = cat_.expansion(c)) return e;
    auto it = adhoc_exp_.find(&c);
    return it == adhoc_exp_.end() ? nullptr : &it->second;
  }

  // The move of `part` that `m` is, seen through the cut.
  Move local_move(const Cut& c, const Move& m) {
    GateSet mask = 0;
    for (std::size_t i = 0; i < c.image.size(); ++i) {
      if (m.hole & bit(c.image[i])) mask |= bit(static_cast<int>(i));
    }
    for (const Redex& r : find_redexes(c.part, single(m.rule))) {
      if (r.gates != mask) continue;
      Move local = Move::of(c.part, r);
      if (local.lifted(c.ctx).same_step(m)) return local;
    }
    throw std::logic_error("move " + m.str() + " is lost in its cut");
  }

  Local local_cell(const Move& x, const Move& y) {
    const Diagram& d = x.upper;
    if ((x.hole & y.hole) == 0) {
      try {
        return {disjoint_square(x, y), trivial(d), true};
      } catch (const std::logic_error&) {
      }
    }
    const Precedence pr = Precedence::of(d);
    const GateSet u = x.hole | y.hole;
    const GateSet hull = u | (pr.descendants(u) & pr.ancestors(u));
    const auto c = cut(d, hull);
    if (!c) throw std::logic_error("peak of " + x.str() + " and " + y.str() + " has no convex hull");
    const Move lx = local_move(*c, x), ly = local_move(*c, y);
    if (auto pc = cat_.peak_cell(lx, ly)) return {pc->first, c->ctx, pc->second};
    return {adhoc(c->part, lx, ly), c->ctx, true};
  }

  CellRef adhoc(const Diagram& src, const Move& x, const Move& y) {
    const auto key = std::make_tuple(src, x.rule->name, x.hole, y.rule->name, y.hole);
    auto it = adhoc_.find(key);
    if (it != adhoc_.end()) return it->second;
    auto c = std::make_shared<Cell>();
    c->a = Zigzag{src, {x}};
    c->a.append(Zigzag::of(normalize(x.lower, rules_)));
    c->b = Zigzag{src, {y}};
    c->b.append(Zigzag::of(normalize(y.lower, rules_)));
    if (!(c->a.end() == c->b.end())) {
      throw NotJoinable("peak " + x.str() + " / " + y.str() + " at " + src.str() + " does not join");
    }
    trim_to_meet(c->a, c->b);
    if (foldable_sides(c->a, c->b)) {
      c->kind = CellKind::Foldable;
      c->name = "foldable:" + src.str();
    } else {
      c->kind = x.rule->structural || y.rule->structural ? CellKind::WeakKelly : CellKind::Kelly;
      c->name = std::string(cell_kind_name(c->kind)) + ":" + src.str();
      std::vector<CellRef> allowed;
      for (const CellRef& k : cat_.cells()) {
        if (k->kind == CellKind::Base || k->kind == CellKind::Foldable) allowed.push_back(k);
      }
      auto sol = solve_filler(*c, rules_, allowed);
      if (!sol) throw std::logic_error("no filler found for " + c->name);
      adhoc_exp_[c.get()] = std::move(*sol);
    }
    adhoc_.emplace(key, c);
    return c;
  }

  const CellCatalog& cat_;
  const RuleSet& rules_;
  std::unordered_map<Diagram, Zigzag> nf_;
  std::map<std::tuple<std::string, Diagram, GateSet>, std::vector<Surgery>> fills_;
  std::map<std::tuple<Diagram, std::string, GateSet, std::string, GateSet>, CellRef> adhoc_;
  std::map<const Cell*, std::vector<Surgery>> adhoc_exp_;
};

}  // namespace

Certificate certify_equal(const Zigzag& z1, const Zigzag& z2, const CellCatalog& cat) {
  if (!(z1.start == z2.start) || !(z1.end() == z2.end())) {
    throw NotParallel("zigzags " + z1.start.str() + " -> " + z1.end().str() + " and " +
                      z2.start.str() + " -> " + z2.end().str() + " are not parallel");
  }
  Certifier c(cat);
  Certificate cert{z1, z2, c.canon(z1)};
  const auto back = c.canon(z2);
  for (auto it = back.rbegin(); it != back.rend(); ++it) cert.surgeries.push_back(it->reversed());
  return cert;
}

// Edges between primary cells.

namespace {

struct Found {
  Zigzag path;
  bool found = false;
};

struct Node {
  Diagram d;
  int parent = -1;
  Move via;
  int depth = 0;
};

std::vector<Node> structural_ball(const Diagram& root, const RuleSet& s, int depth, int max_gates) {
  std::vector<Node> nodes{{root, -1, {}, 0}};
  std::unordered_set<Diagram> seen{root};
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].depth == depth) continue;
    const Diagram here = nodes[i].d;
    std::vector<Move> out = forward_moves(here, s);
    for (Move& m : backward_moves(here, s)) out.push_back(std::move(m));
    for (Move& m : out) {
      const Diagram& next = m.to();
      if (next.size() > max_gates || !seen.insert(next).second) continue;
      nodes.push_back({next, static_cast<int>(i), std::move(m), nodes[i].depth + 1});
    }
  }
  return nodes;
}

Zigzag path_to(const std::vector<Node>& nodes, int i) {
  std::vector<Move> rev;
  for (; nodes[i].parent >= 0; i = nodes[i].parent) rev.push_back(nodes[i].via);
  Zigzag z{nodes[i].d, {}};
  for (auto it = rev.rbegin(); it != rev.rend(); ++it) z.moves.push_back(*it);
  return z;
}

Zigzag edge_between(const Diagram& src, const Diagram& tgt, const std::shared_ptr<const Rule>& rule,
                    const RuleSet& rules) {
  const RuleSet s = structural_part(rules);
  const RuleSet one = single(rule);
  const int bound = std::max(src.size(), tgt.size()) + 2;
  Zigzag best;
  std::size_t best_len = SIZE_MAX;
  auto offer = [&](Zigzag z) {
    if (z.moves.size() < best_len) {
      best_len = z.moves.size();
      best = std::move(z);
    }
  };
  const auto fwd = structural_ball(src, s, 2, bound);
  for (std::size_t i = 0; i < fwd.size(); ++i) {
    std::vector<Move> steps = forward_moves(fwd[i].d, one);
    for (Move& m : backward_moves(fwd[i].d, one)) steps.push_back(std::move(m));
    for (const Move& m : steps) {
      const RewritePath tail = structural_normal_form(m.to());
      if (!(tail.end() == tgt)) continue;
      Zigzag z = path_to(fwd, static_cast<int>(i));
      z.push(m);
      z.append(Zigzag::of(tail));
      offer(std::move(z));
    }
  }
  const auto bwd = structural_ball(tgt, s, 2, bound);
  for (std::size_t i = 0; i < bwd.size(); ++i) {
    std::vector<Move> steps = forward_moves(bwd[i].d, one);
    for (Move& m : backward_moves(bwd[i].d, one)) steps.push_back(std::move(m));
    for (const Move& m : steps) {
      const RewritePath head = structural_normal_form(m.to());
      if (!(head.end() == src)) continue;
      Zigzag z = Zigzag::of(head).inverse();
      z.push(m.inverse());
      z.append(path_to(bwd, static_cast<int>(i)).inverse());
      offer(std::move(z));
    }
  }
  if (best_len == SIZE_MAX) {
    throw NotJoinable("no " + rule->name + " edge from " + src.str() + " to " + tgt.str());
  }
  return best;
}

}  // namespace

Zigzag contextual_edge(const ContextualGen& g, const std::vector<std::string>& order,
                       const RuleSet& rules) {
  const Diagram src = term_to_diagram(g.source, order);
  if (g.gen.kind == MorKind::Identity) return Zigzag{src, {}};
  if (g.gen.inverted) {
    ContextualGen flipped{g.target, g.source, g.gen};
    flipped.gen.inverted = false;
    return contextual_edge(flipped, order, rules).inverse();
  }
  const Diagram tgt = term_to_diagram(g.target, order);
  return edge_between(src, tgt, rule_named(rules, g.gen.rule()), rules);
}

Zigzag morgen_to_edge(const MorGen& g, const std::vector<std::string>& order, const RuleSet& rules) {
  return contextual_edge(ContextualGen{g.source(), g.target(), g}, order, rules);
}

Zigzag mor_to_zigzag(const MorExpr& f, const std::vector<std::string>& order, const RuleSet& rules) {
  Zigzag z{term_to_diagram(f.source(), order), {}};
  for (const ContextualGen& g : flatten(f)) z.append(contextual_edge(g, order, rules));
  return z;
}

// Polygons.

std::vector<std::string> Polygon::order() const {
  auto it = objects.find(terminal);
  if (it == objects.end()) throw ParseError("unknown terminal object " + terminal);
  return it->second.variables();
}

Polygon parse_polygon(std::string_view text) {
  Polygon p;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& what) {
    throw ParseError("polygon line " + std::to_string(lineno) + ": " + what);
  };
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '%') continue;
    const auto sp = line.find_first_of(" \t");
    const std::string tag = line.substr(0, sp);
    const std::string rest = sp == std::string::npos ? "" : trim(line.substr(sp));
    if (tag == "TERMINAL") {
      p.terminal = rest;
      continue;
    }
    const auto colon = rest.find(':');
    if (colon == std::string::npos) fail("missing ':'");
    const std::string name = trim(rest.substr(0, colon));
    const std::string body = trim(rest.substr(colon + 1));
    if (tag == "OBJECT") {
      p.objects.insert_or_assign(name, Term::parse(body));
    } else if (tag == "EDGE") {
      const auto arrow = body.find("->");
      const auto colon2 = body.find(':', arrow == std::string::npos ? 0 : arrow);
      if (arrow == std::string::npos || colon2 == std::string::npos) fail("expected 'a -> b : f'");
      Polygon::Edge e{name, trim(body.substr(0, arrow)), trim(body.substr(arrow + 2, colon2 - arrow - 2)),
                      MorExpr::parse(trim(body.substr(colon2 + 1)))};
      for (const std::string* o : {&e.from, &e.to}) {
        if (!p.objects.count(*o)) fail("unknown object " + *o);
      }
      if (e.mor.source() != p.objects.at(e.from) || e.mor.target() != p.objects.at(e.to)) {
        throw CompositionMismatch("edge " + name + " runs " + e.mor.source().str() + " -> " +
                                  e.mor.target().str() + ", not " + e.from + " -> " + e.to);
      }
      p.edges.push_back(std::move(e));
    } else {
      fail("expected OBJECT, EDGE or TERMINAL");
    }
  }
  if (p.terminal.empty()) throw ParseError("polygon has no TERMINAL line");
  if (!p.objects.count(p.terminal)) throw ParseError("unknown terminal object " + p.terminal);
  return p;
}

PolygonSides polygon_sides(const Polygon& p) {
  std::set<std::string> has_in;
  for (const auto& e : p.edges) has_in.insert(e.to);
  std::vector<std::string> sources;
  for (const auto& [name, t] : p.objects) {
    if (!has_in.count(name)) sources.push_back(name);
  }
  if (sources.size() != 1) throw ShapeMismatch("polygon needs exactly one source object");
  std::vector<std::vector<std::size_t>> paths;
  std::vector<std::size_t> cur;
  std::set<std::string> on_path{sources[0]};
  auto walk = [&](auto&& self, const std::string& at) -> void {
    if (at == p.terminal) {
      paths.push_back(cur);
      return;
    }
    for (std::size_t i = 0; i < p.edges.size(); ++i) {
      const auto& e = p.edges[i];
      if (e.from != at || on_path.count(e.to)) continue;
      cur.push_back(i);
      on_path.insert(e.to);
      self(self, e.to);
      on_path.erase(e.to);
      cur.pop_back();
    }
  };
  walk(walk, sources[0]);
  if (paths.size() < 2) throw ShapeMismatch("polygon needs two paths to the terminal object");
  PolygonSides s;
  auto side = [&](const std::vector<std::size_t>& path, std::vector<std::string>& names, MorExpr& mor) {
    for (std::size_t k = 0; k < path.size(); ++k) {
      const auto& e = p.edges[path[k]];
      names.push_back(e.name);
      mor = k == 0 ? e.mor : MorExpr::compose(mor, e.mor);
    }
  };
  side(paths[0], s.left, s.left_mor);
  side(paths[1], s.right, s.right_mor);
  return s;
}

PolygonCertificate certify_polygon(const Polygon& p, const CellCatalog& cat) {
  PolygonCertificate pc;
  pc.order = p.order();
  const PolygonSides sides = polygon_sides(p);
  pc.left = mor_to_zigzag(sides.left_mor, pc.order, cat.rules());
  pc.right = mor_to_zigzag(sides.right_mor, pc.order, cat.rules());
  pc.cert = certify_equal(pc.left, pc.right, cat);
  return pc;
}

// Kelly expansions.

std::pair<CellRef, std::vector<Surgery>> expand_kelly(const std::string& peak, const CellCatalog& cat) {
  CellRef c = cat.find(peak);
  if (!c) {
    try {
      const Diagram d = Diagram::parse(peak);
      for (const CellRef& k : cat.kelly_cells()) {
        if (k->source() == d) c = k;
      }
    } catch (const Error&) {
    }
  }
  if (!c || (c->kind != CellKind::Kelly && c->kind != CellKind::WeakKelly)) {
    throw UnknownPeak("no Kelly or weak-Kelly peak named " + peak);
  }
  const auto* list = cat.expansion(*c);
  if (!list) throw UnknownPeak("peak " + c->name + " has no recorded expansion");
  return {c, *list};
}

Certificate expansion_certificate(const Cell& c, const std::vector<Surgery>& list) {
  return Certificate{c.a, c.b, list};
}

}  // namespace smc
