#include <algorithm>
#include <array>
#include <bit>
#include <optional>
#include <unordered_map>

#include "smc/rewrite.hpp"

namespace smc {

namespace {

struct Located {
  std::vector<Slice> chain;  // host slices reordered as U ; G ; rest
  std::vector<int> order;    // chain position -> host gate
  int upper = 0;             // |U|
  int left = 0;
  std::vector<int> image;
};

std::array<int, 3> kind_counts(const std::vector<Gate>& gates, GateSet mask) {
  std::array<int, 3> c{0, 0, 0};
  while (mask) {
    const int k = std::countr_zero(mask);
    mask &= mask - 1;
    ++c[static_cast<int>(gates[k])];
  }
  return c;
}

std::array<int, 3> kind_counts(const Diagram& d) {
  std::array<int, 3> c{0, 0, 0};
  for (const Slice& s : d.slices()) ++c[static_cast<int>(s.gate)];
  return c;
}

bool fits(int inputs, const std::vector<Slice>& sl) {
  int w = inputs;
  for (const Slice& s : sl) {
    if (s.left < 0 || s.left + gate_in(s.gate) > w) return false;
    w += gate_out(s.gate) - gate_in(s.gate);
  }
  return true;
}

// Every occurrence of `lhs` on exactly the gates `mask`, or only the one at
// offset `want_left` when that is not negative.
std::vector<Located> locate(const Diagram& host, const Precedence& pr, GateSet mask,
                            const Diagram& lhs, int want_left, bool keep_chain = true) {
  std::vector<Located> out;
  const int n = host.size();
  const int k = lhs.size();
  const GateSet up = pr.ancestors(mask) & ~mask;
  std::vector<int> order;
  order.reserve(n);
  for (int i = 0; i < n; ++i) if (up & bit(i)) order.push_back(i);
  const int u = static_cast<int>(order.size());
  for (int i = 0; i < n; ++i) if (mask & bit(i)) order.push_back(i);
  for (int i = 0; i < n; ++i) if (!((up | mask) & bit(i))) order.push_back(i);
  std::vector<Slice> chain = host.slices();
  if (!reorder_chain(chain, order)) return out;
  int w = host.inputs();
  for (int j = 0; j < u; ++j) w += gate_out(chain[j].gate) - gate_in(chain[j].gate);
  const int p = lhs.inputs();
  for (int a = 0; a + p <= w; ++a) {
    if (want_left >= 0 && a != want_left) continue;
    std::vector<Slice> block(chain.begin() + u, chain.begin() + u + k);
    for (Slice& s : block) s.left -= a;
    if (!fits(p, block)) continue;
    std::vector<int> bord;
    Diagram cand = Diagram::scheduled(p, block, bord);
    if (!(cand == lhs)) continue;
    Located loc;
    loc.upper = u;
    loc.left = a;
    for (int i = 0; i < k; ++i) loc.image.push_back(order[u + bord[i]]);
    if (keep_chain) {
      loc.chain = chain;
      loc.order = order;
    }
    out.push_back(std::move(loc));
  }
  return out;
}

bool connected(const Diagram& d) {
  if (d.size() <= 1) return true;
  const Precedence pr = Precedence::of(d);
  GateSet seen = bit(0);
  GateSet frontier = bit(0);
  while (frontier) {
    GateSet next = 0;
    GateSet f = frontier;
    while (f) {
      const int g = std::countr_zero(f);
      f &= f - 1;
      next |= pr.wire_nbr[g];
    }
    frontier = next & ~seen;
    seen |= next;
  }
  return std::popcount(seen) == d.size();
}

// Wire-connected gate sets of each size up to max_k, indexed by size.
std::vector<std::vector<GateSet>> connected_sets(const Precedence& pr, int n, int max_k) {
  std::vector<std::vector<GateSet>> by_size(max_k + 1);
  std::vector<GateSet> layer;
  for (int v = 0; v < n; ++v) layer.push_back(bit(v));
  for (int size = 1; size <= max_k && !layer.empty(); ++size) {
    by_size[size] = layer;
    std::vector<GateSet> next;
    if (size == max_k) break;
    for (GateSet s : layer) {
      GateSet nb = 0;
      GateSet t = s;
      while (t) {
        const int g = std::countr_zero(t);
        t &= t - 1;
        nb |= pr.wire_nbr[g];
      }
      nb &= ~s;
      while (nb) {
        const int g = std::countr_zero(nb);
        nb &= nb - 1;
        next.push_back(s | bit(g));
      }
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    layer = std::move(next);
  }
  return by_size;
}

void all_subsets(int n, int k, int from, GateSet cur, std::vector<GateSet>& out) {
  if (k == 0) {
    out.push_back(cur);
    return;
  }
  for (int i = from; i <= n - k; ++i) all_subsets(n, k - 1, i + 1, cur | bit(i), out);
}

}  // namespace

std::vector<Redex> find_redexes(const Diagram& host, const RuleSet& rules) {
  std::vector<Redex> out;
  const int n = host.size();
  if (n == 0) return out;
  const Precedence pr = Precedence::of(host);
  std::vector<Gate> kinds;
  for (const Slice& s : host.slices()) kinds.push_back(s.gate);
  int max_k = 0;
  for (const auto& r : rules.rules) max_k = std::max(max_k, r->lhs.size());
  max_k = std::min(max_k, n);
  const auto conn = connected_sets(pr, n, max_k);
  for (std::size_t ri = 0; ri < rules.rules.size(); ++ri) {
    const auto& rule = rules.rules[ri];
    const int k = rule->lhs.size();
    if (k > n) continue;
    const auto want = kind_counts(rule->lhs);
    std::vector<GateSet> generic;
    const std::vector<GateSet>* cands = &conn[k];
    thread_local std::unordered_map<Diagram, bool> lhs_connected;
    auto it = lhs_connected.find(rule->lhs);
    if (it == lhs_connected.end()) it = lhs_connected.emplace(rule->lhs, connected(rule->lhs)).first;
    if (!it->second) {
      all_subsets(n, k, 0, 0, generic);
      cands = &generic;
    }
    std::vector<Redex> found;
    for (GateSet mask : *cands) {
      if (kind_counts(kinds, mask) != want || !pr.convex(mask)) continue;
      for (Located& loc : locate(host, pr, mask, rule->lhs, -1, false)) {
        Redex r;
        r.rule = rule;
        r.gates = mask;
        r.left = loc.left;
        r.image = std::move(loc.image);
        found.push_back(std::move(r));
      }
    }
    std::sort(found.begin(), found.end(), [](const Redex& a, const Redex& b) {
      const int fa = std::countr_zero(a.gates), fb = std::countr_zero(b.gates);
      if (fa != fb) return fa < fb;
      if (a.left != b.left) return a.left < b.left;
      return a.gates < b.gates;
    });
    for (Redex& r : found) out.push_back(std::move(r));
  }
  return out;
}

namespace {

std::optional<Located> relocate(const Diagram& host, const Redex& r) {
  const int n = host.size();
  if (!r.rule || r.rule->lhs.size() != std::popcount(r.gates)) return std::nullopt;
  if (n < 64 && (r.gates >> n) != 0) return std::nullopt;
  const Precedence pr = Precedence::of(host);
  if (!pr.convex(r.gates)) return std::nullopt;
  auto locs = locate(host, pr, r.gates, r.rule->lhs, r.left);
  if (locs.empty() || locs.front().image != r.image) return std::nullopt;
  return std::move(locs.front());
}

}  // namespace

bool redex_valid(const Diagram& host, const Redex& r) { return relocate(host, r).has_value(); }

Applied apply_tracked(const Diagram& host, const Redex& r) {
  auto loc = relocate(host, r);
  if (!loc) {
    throw StaleRedex("redex " + (r.rule ? r.rule->name : std::string("?")) +
                     " does not occur in " + host.str());
  }
  const int n = host.size();
  const int k = r.rule->lhs.size();
  const Diagram& rhs = r.rule->rhs;
  std::vector<Slice> chain(loc->chain.begin(), loc->chain.begin() + loc->upper);
  std::vector<int> ids(loc->order.begin(), loc->order.begin() + loc->upper);
  for (int i = 0; i < rhs.size(); ++i) {
    chain.push_back(Slice{rhs[i].left + loc->left, rhs[i].gate});
    ids.push_back(n + i);
  }
  for (int j = loc->upper + k; j < n; ++j) {
    chain.push_back(loc->chain[j]);
    ids.push_back(loc->order[j]);
  }
  std::vector<int> ord;
  Applied out;
  out.result = Diagram::scheduled(host.inputs(), std::move(chain), ord);
  out.kept.assign(n, -1);
  out.created.assign(rhs.size(), -1);
  for (std::size_t pos = 0; pos < ord.size(); ++pos) {
    const int id = ids[ord[pos]];
    if (id < n) {
      out.kept[id] = static_cast<int>(pos);
    } else {
      out.created[id - n] = static_cast<int>(pos);
    }
  }
  return out;
}

Diagram apply_redex(const Diagram& host, const Redex& r) { return apply_tracked(host, r).result; }

Whisker context_of(const Diagram& host, const Redex& r) {
  auto loc = relocate(host, r);
  if (!loc) {
    throw StaleRedex("redex " + (r.rule ? r.rule->name : std::string("?")) +
                     " does not occur in " + host.str());
  }
  const Diagram& lhs = r.rule->lhs;
  const auto split = loc->chain.begin() + loc->upper;
  Whisker w;
  w.top = Diagram(host.inputs(), std::vector<Slice>(loc->chain.begin(), split));
  w.left = loc->left;
  w.right = w.top.outputs() - loc->left - lhs.inputs();
  w.bottom = Diagram(w.top.outputs() - lhs.inputs() + lhs.outputs(),
                     std::vector<Slice>(split + lhs.size(), loc->chain.end()));
  return w;
}

std::optional<Cut> cut(const Diagram& host, GateSet mask) {
  const int n = host.size();
  if (mask == 0 || (n < 64 && (mask >> n) != 0)) return std::nullopt;
  const Precedence pr = Precedence::of(host);
  if (!pr.convex(mask)) return std::nullopt;
  const GateSet up = pr.ancestors(mask) & ~mask;
  std::vector<int> order;
  for (int i = 0; i < n; ++i) if (up & bit(i)) order.push_back(i);
  const int u = static_cast<int>(order.size());
  for (int i = 0; i < n; ++i) if (mask & bit(i)) order.push_back(i);
  const int k = static_cast<int>(order.size()) - u;
  for (int i = 0; i < n; ++i) if (!((up | mask) & bit(i))) order.push_back(i);
  std::vector<Slice> chain = host.slices();
  if (!reorder_chain(chain, order)) return std::nullopt;
  int w = host.inputs();
  for (int j = 0; j < u; ++j) w += gate_out(chain[j].gate) - gate_in(chain[j].gate);
  // untouched wires on either side of the block
  int a = w, b = w, cur = w;
  for (int j = u; j < u + k; ++j) {
    const Slice& s = chain[j];
    a = std::min(a, s.left);
    b = std::min(b, cur - s.left - gate_in(s.gate));
    cur += gate_out(s.gate) - gate_in(s.gate);
  }
  std::vector<Slice> block(chain.begin() + u, chain.begin() + u + k);
  for (Slice& s : block) s.left -= a;
  std::vector<int> bord;
  Cut c;
  c.part = Diagram::scheduled(w - a - b, std::move(block), bord);
  for (int i = 0; i < k; ++i) c.image.push_back(order[u + bord[i]]);
  c.ctx.top = Diagram(host.inputs(), std::vector<Slice>(chain.begin(), chain.begin() + u));
  c.ctx.left = a;
  c.ctx.right = b;
  c.ctx.bottom = Diagram(a + c.part.outputs() + b, std::vector<Slice>(chain.begin() + u + k, chain.end()));
  return c;
}

}  // namespace smc
