#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <unordered_map>

#include "smc/coherence.hpp"

namespace smc {

namespace {

using EdgeKey = std::tuple<std::string, Diagram, GateSet>;

EdgeKey key_of(const Move& m) { return {m.rule->name, m.upper, m.hole}; }

struct Occurrence {
  int edge;
  bool backward;
};

struct Instance {
  CellRef cell;
  Whisker ctx;
  Zigzag a, b;
  std::vector<Occurrence> boundary;  // a, then b inverted
  int open = 0;                      // occurrences of nontrivial edges
};

class Complex {
 public:
  Complex(const Diagram& root, const RuleSet& rules, const SolverOptions& opt) {
    const int bound = root.size() + opt.extra_gates;
    vertex(root);
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      const Diagram here = vertices_[i];
      std::vector<Move> out = forward_moves(here, rules);
      for (Move& m : backward_moves(here, rules)) out.push_back(std::move(m));
      for (Move& m : out) {
        const Diagram& next = m.to();
        if (next.size() > bound) continue;
        if (!ids_.count(next)) {
          if (vertices_.size() >= opt.max_vertices) continue;
          vertex(next);
        }
        edge(m.backward ? m.inverse() : m);
      }
    }
  }

  int edge_of(const Move& m) const {
    auto it = edge_ids_.find(key_of(m));
    return it == edge_ids_.end() ? -1 : it->second;
  }
  bool has(const Diagram& d) const { return ids_.count(d) > 0; }
  const std::vector<Diagram>& vertices() const { return vertices_; }
  const std::vector<Move>& edges() const { return edges_; }
  int vertex_id(const Diagram& d) const { return ids_.at(d); }

  // Adds the instance when all its moves are edges of the complex.
  void add(CellRef cell, Whisker ctx, Zigzag a, Zigzag b) {
    Instance in{std::move(cell), std::move(ctx), std::move(a), std::move(b), {}, 0};
    for (const Move& m : in.a.moves) {
      const int e = edge_of(m);
      if (e < 0) return;
      in.boundary.push_back({e, m.backward});
    }
    for (auto it = in.b.moves.rbegin(); it != in.b.moves.rend(); ++it) {
      const int e = edge_of(*it);
      if (e < 0) return;
      in.boundary.push_back({e, !it->backward});
    }
    instances_.push_back(std::move(in));
  }

  std::vector<Instance>& instances() { return instances_; }

 private:
  void vertex(const Diagram& d) {
    ids_.emplace(d, static_cast<int>(vertices_.size()));
    vertices_.push_back(d);
  }
  void edge(const Move& m) {
    if (edge_ids_.emplace(key_of(m), static_cast<int>(edges_.size())).second) edges_.push_back(m);
  }

  std::vector<Diagram> vertices_;
  std::unordered_map<Diagram, int> ids_;
  std::vector<Move> edges_;
  std::map<EdgeKey, int> edge_ids_;
  std::vector<Instance> instances_;
};

// Eliminates non-tree edges one at a time through cells in which they occur
// once (after earlier substitutions), until the target loop reduces away.
class Presentation {
 public:
  Presentation(Complex& cx, const Diagram& root) : cx_(cx) {
    const auto& edges = cx.edges();
    tree_.assign(edges.size(), false);
    rank_.assign(edges.size(), -1);
    provenance_.assign(edges.size(), -1);
    std::vector<std::vector<int>> adj(cx.vertices().size());
    for (std::size_t e = 0; e < edges.size(); ++e) {
      adj[cx.vertex_id(edges[e].upper)].push_back(static_cast<int>(e));
      adj[cx.vertex_id(edges[e].lower)].push_back(static_cast<int>(e));
    }
    std::vector<bool> seen(cx.vertices().size(), false);
    std::deque<int> q{cx.vertex_id(root)};
    seen[q.front()] = true;
    while (!q.empty()) {
      const int v = q.front();
      q.pop_front();
      for (int e : adj[v]) {
        const int a = cx.vertex_id(edges[e].upper), b = cx.vertex_id(edges[e].lower);
        const int w = a == v ? b : a;
        if (seen[w]) continue;
        seen[w] = true;
        tree_[e] = true;
        q.push_back(w);
      }
    }
  }

  // Returns false when the loop a ++ b~ could not be shown trivial.
  bool solve(const Zigzag& a, const Zigzag& b, std::size_t max_word) {
    auto& inst = cx_.instances();
    const std::size_t ne = cx_.edges().size();
    std::vector<Word> orig(inst.size()), rel(inst.size());
    std::vector<std::vector<int>> uses(ne);
    for (std::size_t i = 0; i < inst.size(); ++i) {
      for (const Occurrence& o : inst[i].boundary) {
        if (!tree_[o.edge]) orig[i].push_back(o.backward ? -(o.edge + 1) : o.edge + 1);
      }
      rel[i] = orig[i];
      cyclic_reduce(rel[i]);
      for (int g : rel[i]) uses[gen(g)].push_back(static_cast<int>(i));
    }
    Word target;
    for (const Move& m : a.moves) push(target, cx_.edge_of(m), m.backward);
    for (auto it = b.moves.rbegin(); it != b.moves.rend(); ++it) {
      push(target, cx_.edge_of(*it), !it->backward);
    }
    std::vector<Word> value(ne);
    auto subst = [&](const Word& w) {
      Word out;
      for (int g : w) {
        if (rank_[gen(g)] < 0) {
          append(out, g);
        } else {
          for (int h : g > 0 ? value[gen(g)] : inverse(value[gen(g)])) append(out, h);
        }
      }
      return out;
    };
    // The value of g read off relation i, if g occurs once there and the
    // rest does not bring it back.
    auto solve_for = [&](int i, int g) -> std::optional<Word> {
      const Word& w = orig[i];
      int at = -1;
      for (std::size_t k = 0; k < w.size(); ++k) {
        if (gen(w[k]) != g) continue;
        if (at >= 0) return std::nullopt;
        at = static_cast<int>(k);
      }
      if (at < 0) return std::nullopt;
      Word rest(w.begin() + at + 1, w.end());
      rest.insert(rest.end(), w.begin(), w.begin() + at);
      Word x = subst(rest);
      for (int h : x) {
        if (gen(h) == g) return std::nullopt;
      }
      // g rest = 1 gives g = rest~; g~ rest = 1 gives g = rest.
      return w[at] > 0 ? inverse(x) : x;
    };
    int next_rank = 0;
    std::vector<bool> used(inst.size(), false);
    std::vector<int> order(inst.size());
    while (!target.empty()) {
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
      std::stable_sort(order.begin(), order.end(),
                       [&](int x, int y) { return rel[x].size() < rel[y].size(); });
      int best = -1, best_gen = -1;
      Word val;
      for (int i : order) {
        if (used[i] || rel[i].empty()) continue;
        if (rel[i].size() > max_word) break;
        std::map<int, int> count;
        for (int g : rel[i]) ++count[gen(g)];
        for (const auto& [g, n] : count) {
          if (n != 1) continue;
          if (auto v = solve_for(i, g)) {
            best = i;
            best_gen = g;
            val = std::move(*v);
            break;
          }
        }
        if (best >= 0) break;
      }
      if (best < 0) return false;
      used[best] = true;
      rank_[best_gen] = next_rank++;
      provenance_[best_gen] = best;
      for (std::size_t h = 0; h < ne; ++h) {
        if (rank_[h] < 0 || static_cast<int>(h) == best_gen) continue;
        bool has = false;
        for (int x : value[h]) has = has || gen(x) == best_gen;
        if (!has) continue;
        Word out;
        for (int x : value[h]) {
          if (gen(x) != best_gen) {
            append(out, x);
          } else {
            for (int y : x > 0 ? val : inverse(val)) append(out, y);
          }
        }
        value[h] = std::move(out);
      }
      value[best_gen] = val;
      std::vector<int> touched = uses[best_gen];
      std::sort(touched.begin(), touched.end());
      touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
      touched.push_back(-1);
      for (int i : touched) {
        Word& w = i < 0 ? target : rel[i];
        Word out;
        for (int g : w) {
          if (gen(g) != best_gen) {
            append(out, g);
          } else {
            for (int h : g > 0 ? val : inverse(val)) append(out, h);
          }
        }
        w = std::move(out);
        if (i >= 0) {
          cyclic_reduce(w);
          for (int g : w) uses[gen(g)].push_back(i);
        }
      }
      rel[best].clear();
    }
    return true;
  }

  // Expands every eliminated edge in a path, then cancels stale pairs.
  void flatten(SurgeryLog& log) const {
    std::size_t len = log.path().moves.size();
    below(log, 0, len, INT32_MAX);
    log.reduce();
  }

 private:
  using Word = std::vector<int>;

  static int gen(int g) { return std::abs(g) - 1; }
  void push(Word& w, int e, bool backward) const {
    if (!tree_[e]) append(w, backward ? -(e + 1) : e + 1);
  }
  static void append(Word& w, int g) {
    if (!w.empty() && w.back() == -g) {
      w.pop_back();
    } else {
      w.push_back(g);
    }
  }
  static Word inverse(const Word& w) {
    Word out;
    for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(-*it);
    return out;
  }
  static void cyclic_reduce(Word& w) {
    std::size_t i = 0, j = w.size();
    while (j - i >= 2 && w[i] == -w[j - 1]) {
      ++i;
      --j;
    }
    w = Word(w.begin() + i, w.begin() + j);
  }

  int rank_of(const Move& m) const {
    const int e = cx_.edge_of(m);
    return rank_[e];
  }

  // Expands edges ranked below `limit` in [lo, lo + len) until none is left;
  // returns the new length.
  std::size_t below(SurgeryLog& log, std::size_t lo, std::size_t len, int limit) const {
    for (;;) {
      std::size_t pick = SIZE_MAX;
      int low = limit;
      for (std::size_t k = lo; k < lo + len; ++k) {
        const int r = rank_of(log.path().moves[k]);
        if (r >= 0 && r < low) {
          low = r;
          pick = k;
        }
      }
      if (pick == SIZE_MAX) return len;
      len = len - 1 + expand(log, pick);
    }
  }

  // Replaces the move at pos through its eliminating cell; returns the
  // length of the replacement after expanding and cancelling.
  std::size_t expand(SurgeryLog& log, std::size_t pos) const {
    const Move mu = log.path().moves[pos];
    const int e = cx_.edge_of(mu);
    const Instance& in = cx_.instances()[provenance_[e]];
    bool forward = true, inverted = false;
    Zigzag f;
    int j = -1;
    for (int side = 0; side < 2 && j < 0; ++side) {
      const Zigzag& z = side == 0 ? in.a : in.b;
      for (std::size_t k = 0; k < z.moves.size(); ++k) {
        if (!z.moves[k].same_step(mu)) continue;
        forward = side == 0;
        inverted = z.moves[k].backward != mu.backward;
        f = inverted ? z.inverse() : z;
        j = static_cast<int>(inverted ? z.moves.size() - 1 - k : k);
        break;
      }
    }
    const int n = static_cast<int>(f.moves.size());
    for (int t = j - 1; t >= 0; --t) log.insert_stale(pos + (j - 1 - t), f.moves[t].inverse());
    for (int t = j + 1; t < n; ++t) log.insert_stale(pos + 2 * j + 1 + (t - j - 1), f.moves[t]);
    log.apply(Surgery{pos + j, in.cell, in.ctx, forward, inverted});
    const std::size_t g = (forward ? in.b : in.a).moves.size();
    std::size_t len = j + g + (n - j - 1);
    len = below(log, pos, len, rank_[e]);
    // cancel inside the segment only
    std::size_t i = pos;
    while (len >= 2 && i + 1 < pos + len) {
      if (log.path().moves[i + 1].cancels(log.path().moves[i])) {
        log.cancel_stale(i);
        len -= 2;
        if (i > pos) --i;
      } else {
        ++i;
      }
    }
    return len;
  }

  Complex& cx_;
  std::vector<bool> tree_;
  std::vector<int> rank_;
  std::vector<int> provenance_;
};

}  // namespace

std::optional<std::vector<Surgery>> solve_filler(const Cell& target, const RuleSet& rules,
                                                 const std::vector<CellRef>& allowed,
                                                 const SolverOptions& opt) {
  const Diagram& root = target.source();
  Complex cx(root, rules, opt);
  RuleSet shapes;
  shapes.name = "cells";
  for (std::size_t i = 0; i < allowed.size(); ++i) {
    auto r = std::make_shared<Rule>();
    r->name = std::to_string(i);
    r->lhs = r->rhs = allowed[i]->source();
    shapes.rules.push_back(r);
  }
  for (const Diagram& v : std::vector<Diagram>(cx.vertices())) {
    for (const Redex& r : find_redexes(v, shapes)) {
      const CellRef& c = allowed[std::stoi(r.name())];
      const Whisker ctx = context_of(v, r);
      cx.add(c, ctx, c->a.lifted(ctx), c->b.lifted(ctx));
    }
    const std::vector<Move> out = forward_moves(v, rules);
    for (std::size_t i = 0; i < out.size(); ++i) {
      for (std::size_t k = i + 1; k < out.size(); ++k) {
        if (out[i].hole & out[k].hole) continue;
        try {
          const CellRef sq = disjoint_square(out[i], out[k]);
          cx.add(sq, Whisker::around(v.inputs(), v.outputs()), sq->a, sq->b);
        } catch (const std::logic_error&) {
        }
      }
    }
  }
  for (const Zigzag* side : {&target.a, &target.b}) {
    for (const Move& m : side->moves) {
      if (cx.edge_of(m) < 0) return std::nullopt;
    }
  }
  Presentation pres(cx, root);
  if (!pres.solve(target.a, target.b, opt.max_word)) return std::nullopt;
  auto run = [&](const Zigzag& side) {
    SurgeryLog log(side);
    pres.flatten(log);
    return log;
  };
  const SurgeryLog la = run(target.a);
  const SurgeryLog lb = run(target.b);
  if (!(la.path() == lb.path())) return std::nullopt;
  std::vector<Surgery> out = la.done();
  for (auto it = lb.done().rbegin(); it != lb.done().rend(); ++it) out.push_back(it->reversed());
  return out;
}

}  // namespace smc
