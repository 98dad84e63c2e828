#include "smc/port_graph.hpp"

#include <bit>

namespace smc {

PortGraph PortGraph::of(const Diagram& d) {
  PortGraph g;
  g.inputs = d.inputs();
  std::vector<Port> frontier;
  for (int i = 0; i < d.inputs(); ++i) frontier.push_back(Port{-1, i});
  for (int k = 0; k < d.size(); ++k) {
    const Slice& s = d[k];
    g.gates.push_back(s.gate);
    const int in = gate_in(s.gate);
    g.in_src.emplace_back(frontier.begin() + s.left, frontier.begin() + s.left + in);
    std::vector<Port> outs;
    for (int j = 0; j < gate_out(s.gate); ++j) outs.push_back(Port{k, j});
    frontier.erase(frontier.begin() + s.left, frontier.begin() + s.left + in);
    frontier.insert(frontier.begin() + s.left, outs.begin(), outs.end());
  }
  g.out_src = frontier;
  return g;
}

Diagram PortGraph::rebuild() const {
  const int n = static_cast<int>(gates.size());
  std::vector<Port> frontier = out_src;
  std::vector<bool> placed(n, false);
  std::vector<Slice> rev;
  for (int step = 0; step < n; ++step) {
    int found = -1;
    int at = 0;
    for (int pos = 0; pos < static_cast<int>(frontier.size()) && found < 0; ++pos) {
      const Port& p = frontier[pos];
      if (p.gate < 0 || p.index != 0 || placed[p.gate]) continue;
      const int out = gate_out(gates[p.gate]);
      bool ok = pos + out <= static_cast<int>(frontier.size());
      for (int j = 1; ok && j < out; ++j) ok = frontier[pos + j] == Port{p.gate, j};
      if (ok) {
        found = p.gate;
        at = pos;
      }
    }
    if (found < 0) throw MalformedDiagram("port graph is cyclic or not planar");
    placed[found] = true;
    rev.push_back(Slice{at, gates[found]});
    const int out = gate_out(gates[found]);
    frontier.erase(frontier.begin() + at, frontier.begin() + at + out);
    frontier.insert(frontier.begin() + at, in_src[found].begin(), in_src[found].end());
  }
  if (static_cast<int>(frontier.size()) != inputs) {
    throw MalformedDiagram("port graph inputs do not close");
  }
  for (int i = 0; i < inputs; ++i) {
    if (!(frontier[i] == Port{-1, i})) throw MalformedDiagram("port graph inputs crossed");
  }
  return Diagram(inputs, std::vector<Slice>(rev.rbegin(), rev.rend()));
}

Precedence Precedence::of(const Diagram& d) {
  const int n = d.size();
  PortGraph g = PortGraph::of(d);
  Precedence pr;
  pr.pred.assign(n, 0);
  pr.anc.assign(n, 0);
  pr.desc.assign(n, 0);
  pr.wire_nbr.assign(n, 0);
  for (int k = 0; k < n; ++k) {
    for (const Port& p : g.in_src[k]) {
      if (p.gate >= 0) {
        pr.pred[k] |= bit(p.gate);
        pr.wire_nbr[k] |= bit(p.gate);
        pr.wire_nbr[p.gate] |= bit(k);
      }
    }
    if (d[k].gate == Gate::E) {
      Slice moving = d[k];
      for (int j = k - 1; j >= 0; --j) {
        Slice upper = d[j];
        if (!exchange(upper, moving)) {
          pr.pred[k] |= bit(j);
          break;
        }
        moving = upper;
      }
    }
  }
  // canonical order is a linear extension, so one pass each way suffices
  for (int k = 0; k < n; ++k) {
    GateSet ps = pr.pred[k];
    while (ps) {
      int p = std::countr_zero(ps);
      ps &= ps - 1;
      pr.anc[k] |= pr.anc[p] | bit(p);
    }
  }
  for (int k = n - 1; k >= 0; --k) {
    GateSet ps = pr.pred[k];
    while (ps) {
      int p = std::countr_zero(ps);
      ps &= ps - 1;
      pr.desc[p] |= pr.desc[k] | bit(k);
    }
  }
  return pr;
}

GateSet Precedence::ancestors(GateSet s) const {
  GateSet r = 0;
  while (s) {
    int k = std::countr_zero(s);
    s &= s - 1;
    r |= anc[k];
  }
  return r;
}

GateSet Precedence::descendants(GateSet s) const {
  GateSet r = 0;
  while (s) {
    int k = std::countr_zero(s);
    s &= s - 1;
    r |= desc[k];
  }
  return r;
}

bool Precedence::convex(GateSet s) const {
  return (ancestors(s) & descendants(s) & ~s) == 0;
}

}  // namespace smc
