#include <map>

#include "smc/coherence.hpp"

namespace smc {

namespace {

// A move as the checker sees it: a rule, a context and a direction. Both
// ends are recomputed from the rule data.
struct Step {
  const Rule* rule = nullptr;
  Whisker ctx;
  bool backward = false;
  Diagram upper, lower;
  std::uint64_t hole = 0;

  const Diagram& from() const { return backward ? lower : upper; }
  const Diagram& to() const { return backward ? upper : lower; }
  bool operator==(const Step& o) const {
    return rule == o.rule && backward == o.backward && hole == o.hole && upper == o.upper &&
           lower == o.lower;
  }
};

struct Path {
  Diagram start;
  std::vector<Step> steps;
  const Diagram& end() const { return steps.empty() ? start : steps.back().to(); }
};

struct Invalid {
  std::string why;
};

class Checker {
 public:
  explicit Checker(const RuleSet& rules) : rules_(rules) {
    for (const BaseCellSpec& b : parse_base_cells(read_text_file(data_path("base_cells.txt")))) {
      base_.emplace(b.name, b);
    }
  }

  Step step(const Move& m, const Whisker* outer = nullptr) const {
    const int i = rules_.index_of(m.rule->name);
    if (i < 0) throw Invalid{"rule " + m.rule->name + " is not in " + rules_.name};
    const Rule& r = *rules_.rules[i];
    if (!(r.lhs == m.rule->lhs) || !(r.rhs == m.rule->rhs)) {
      throw Invalid{"rule " + m.rule->name + " differs from the rule set"};
    }
    Step s;
    s.rule = &r;
    s.ctx = outer ? outer->compose(m.ctx) : m.ctx;
    s.backward = m.backward;
    s.upper = s.ctx.plug(r.lhs, s.hole);
    s.lower = s.ctx.plug(r.rhs);
    if (!outer && (!(s.upper == m.upper) || !(s.lower == m.lower) || s.hole != m.hole)) {
      throw Invalid{"move " + m.str() + " does not match its rule in context"};
    }
    return s;
  }

  Path path(const Zigzag& z, const Whisker* outer = nullptr) const {
    Path p;
    p.start = outer ? outer->plug(z.start) : z.start;
    for (const Move& m : z.moves) {
      Step s = step(m, outer);
      if (!(s.from() == p.end())) throw Invalid{"move " + m.str() + " does not continue the path"};
      p.steps.push_back(std::move(s));
    }
    return p;
  }

  static Path inverse(const Path& p) {
    Path q;
    q.start = p.end();
    for (auto it = p.steps.rbegin(); it != p.steps.rend(); ++it) {
      Step s = *it;
      s.backward = !s.backward;
      q.steps.push_back(std::move(s));
    }
    return q;
  }

  void cell(const Cell& c) const {
    const Path a = path(c.a), b = path(c.b);
    if (!(a.start == b.start) || !(a.end() == b.end())) {
      throw Invalid{"cell " + c.name + " has sides that are not parallel"};
    }
    auto forward = [&](const Path& p) {
      for (const Step& s : p.steps) {
        if (s.backward) throw Invalid{"cell " + c.name + " has a backward step"};
      }
    };
    switch (c.kind) {
      case CellKind::Base: {
        auto it = base_.find(c.name);
        if (it == base_.end()) throw Invalid{"unknown base cell " + c.name};
        const BaseCellSpec& spec = it->second;
        if (!(a.start == spec.source)) throw Invalid{"base cell " + c.name + " has the wrong source"};
        auto same = [&](const Path& p, const std::vector<std::pair<std::string, Diagram>>& want) {
          if (p.steps.size() != want.size()) return false;
          for (std::size_t i = 0; i < want.size(); ++i) {
            if (p.steps[i].rule->name != want[i].first || !(p.steps[i].to() == want[i].second)) return false;
          }
          return true;
        };
        forward(a);
        forward(b);
        if (!same(a, spec.a) || !same(b, spec.b)) throw Invalid{"base cell " + c.name + " differs from its table entry"};
        return;
      }
      case CellKind::Foldable: {
        forward(a);
        forward(b);
        if (a.steps.empty() || b.steps.empty()) throw Invalid{"foldable cell " + c.name + " has an empty side"};
        if ((a.steps[0].hole & b.steps[0].hole) == 0) {
          throw Invalid{"foldable cell " + c.name + " does not start with overlapping steps"};
        }
        auto names = [](const Path& p) {
          std::vector<std::string> n;
          for (const Step& s : p.steps) {
            if (!s.rule->structural) n.push_back(s.rule->name);
          }
          return n;
        };
        const auto na = names(a), nb = names(b);
        const bool ok = (na.empty() && nb.empty()) || (na.size() == 1 && nb.size() == 1 && na[0] == nb[0]);
        if (!ok) throw Invalid{"cell " + c.name + " is not foldable"};
        return;
      }
      case CellKind::StaleCancel: {
        const bool ok = a.steps.size() == 2 && b.steps.empty() && a.steps[0].rule == a.steps[1].rule &&
                        a.steps[0].backward != a.steps[1].backward && a.steps[0].upper == a.steps[1].upper &&
                        a.steps[0].hole == a.steps[1].hole;
        if (!ok) throw Invalid{"stale pair is not a step and its inverse"};
        return;
      }
      case CellKind::DisjointSquare: {
        forward(a);
        forward(b);
        const bool ok = a.steps.size() == 2 && b.steps.size() == 2 &&
                        (a.steps[0].hole & b.steps[0].hole) == 0 && a.steps[0].rule == b.steps[1].rule &&
                        a.steps[1].rule == b.steps[0].rule;
        if (!ok) throw Invalid{"square does not commute two disjoint steps"};
        return;
      }
      case CellKind::Kelly:
      case CellKind::WeakKelly:
        throw Invalid{"cell " + c.name + " is not expanded into base cells"};
    }
  }

 private:
  const RuleSet& rules_;
  std::map<std::string, BaseCellSpec> base_;
};

}  // namespace

Validation validate(const Certificate& c, const RuleSet& rules) {
  Validation v;
  try {
    const Checker chk(rules);
    Path cur = chk.path(c.source);
    const Path target = chk.path(c.target);
    if (!(cur.start == target.start) || !(cur.end() == target.end())) {
      throw Invalid{"source and target are not parallel"};
    }
    std::map<const Cell*, bool> checked;
    for (std::size_t i = 0; i < c.surgeries.size(); ++i) {
      v.failed_at = static_cast<long>(i);
      const Surgery& s = c.surgeries[i];
      if (!checked[s.cell.get()]) {
        chk.cell(*s.cell);
        checked[s.cell.get()] = true;
      }
      Path from = chk.path(s.forward ? s.cell->a : s.cell->b, &s.ctx);
      Path to = chk.path(s.forward ? s.cell->b : s.cell->a, &s.ctx);
      if (s.inverted) {
        from = Checker::inverse(from);
        to = Checker::inverse(to);
      }
      const std::size_t n = from.steps.size();
      if (s.pos + n > cur.steps.size()) throw Invalid{"surgery runs past the end of the path"};
      const Diagram& at = s.pos == 0 ? cur.start : cur.steps[s.pos - 1].to();
      if (!(at == from.start)) throw Invalid{"surgery starts at the wrong diagram"};
      for (std::size_t k = 0; k < n; ++k) {
        if (!(cur.steps[s.pos + k] == from.steps[k])) throw Invalid{"surgery side does not match the path"};
      }
      cur.steps.erase(cur.steps.begin() + s.pos, cur.steps.begin() + s.pos + n);
      cur.steps.insert(cur.steps.begin() + s.pos, to.steps.begin(), to.steps.end());
    }
    v.failed_at = -1;
    if (cur.steps.size() != target.steps.size()) throw Invalid{"replay does not end at the target path"};
    for (std::size_t k = 0; k < cur.steps.size(); ++k) {
      if (!(cur.steps[k] == target.steps[k])) throw Invalid{"replay does not end at the target path"};
    }
  } catch (const Invalid& e) {
    v.ok = false;
    v.reason = e.why;
  } catch (const Error& e) {
    v.ok = false;
    v.reason = e.what();
  }
  return v;
}

}  // namespace smc
