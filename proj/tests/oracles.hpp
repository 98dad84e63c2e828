#pragma once

// Brute-force reference implementations shared by the unit tests and the
// acceptance runner. They only rely on slice exchange and canonical equality.

#include <algorithm>
#include <array>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "smc/diagram.hpp"
#include "smc/rewrite.hpp"

namespace oracle {

using smc::Diagram;
using smc::Gate;
using smc::Slice;

// (rule name, gate mask over the canonical host, left offset)
using Occurrence = std::tuple<std::string, std::uint64_t, int>;

// Remaining host slices with their original gate ids. Fixed storage keeps the
// exhaustive walks free of allocation.
struct Tagged {
  static constexpr int kMax = 16;
  std::array<Slice, kMax> slices{};
  std::array<int, kMax> ids{};
  int n = 0;

  void pop_front() {
    for (int j = 1; j < n; ++j) {
      slices[j - 1] = slices[j];
      ids[j - 1] = ids[j];
    }
    --n;
  }
};

// Moves slice i to the front by exchanges; false if something blocks it.
inline bool bring_front(Tagged& t, int i) {
  for (int j = i; j > 0; --j) {
    if (!smc::exchange(t.slices[j - 1], t.slices[j])) return false;
    std::swap(t.ids[j - 1], t.ids[j]);
  }
  return true;
}

struct RuleShape {
  const smc::Rule* rule;
  std::array<int, 3> kinds;
};

inline std::array<int, 3> kinds_of(const std::vector<Slice>& sl) {
  std::array<int, 3> c{0, 0, 0};
  for (const Slice& s : sl) ++c[static_cast<int>(s.gate)];
  return c;
}

inline bool within(const std::array<int, 3>& a, const std::array<int, 3>& b) {
  return a[0] <= b[0] && a[1] <= b[1] && a[2] <= b[2];
}

inline void check_window(const std::vector<Slice>& picked, int width, const smc::Rule& rule,
                         std::uint64_t mask, std::set<Occurrence>& out) {
  const Diagram& lhs = rule.lhs;
  for (int a = 0; a + lhs.inputs() <= width; ++a) {
    std::vector<Slice> sh = picked;
    int w = lhs.inputs();
    bool ok = true;
    for (Slice& s : sh) {
      s.left -= a;
      if (s.left < 0 || s.left + smc::gate_in(s.gate) > w) {
        ok = false;
        break;
      }
      w += smc::gate_out(s.gate) - smc::gate_in(s.gate);
    }
    if (ok && Diagram(lhs.inputs(), sh) == lhs) out.insert({rule.name, mask, a});
  }
}

// Extends the window by every gate that can be scheduled next. Orders of the
// same gate set give the same block, so each set is tried once.
inline void windows(const Tagged& rem, int width, const std::vector<RuleShape>& shapes,
                    std::vector<Slice>& picked, std::uint64_t mask, std::set<Occurrence>& out,
                    std::unordered_set<std::uint64_t>& tried) {
  if (!picked.empty()) {
    if (!tried.insert(mask).second) return;
    const auto have = kinds_of(picked);
    bool extend = false;
    for (const RuleShape& rs : shapes) {
      if (rs.kinds == have) check_window(picked, width, *rs.rule, mask, out);
      if (within(have, rs.kinds) && rs.kinds != have) extend = true;
    }
    if (!extend) return;
  }
  for (int i = 0; i < rem.n; ++i) {
    Tagged t = rem;
    if (!bring_front(t, i)) continue;
    picked.push_back(t.slices[0]);
    const std::uint64_t m = mask | (std::uint64_t{1} << t.ids[0]);
    t.pop_front();
    windows(t, width, shapes, picked, m, out, tried);
    picked.pop_back();
  }
}

// Every factorization host = U ; (id_a * lhs * id_b) ; D found by walking all
// prefixes of all interchange reorderings.
inline std::set<Occurrence> factorizations(const Diagram& host, const smc::RuleSet& rules) {
  std::set<Occurrence> out;
  std::vector<RuleShape> shapes;
  for (const auto& r : rules.rules) shapes.push_back({r.get(), kinds_of(r->lhs.slices())});
  if (host.size() > Tagged::kMax) throw std::length_error("oracle host too large");
  Tagged start;
  start.n = host.size();
  for (int i = 0; i < start.n; ++i) {
    start.slices[i] = host[i];
    start.ids[i] = i;
  }
  std::unordered_set<std::uint64_t> seen{0};
  std::deque<std::tuple<Tagged, std::uint64_t, int>> todo{{start, 0, host.inputs()}};
  while (!todo.empty()) {
    auto [rem, done, width] = todo.front();
    todo.pop_front();
    std::vector<Slice> picked;
    std::unordered_set<std::uint64_t> tried;
    windows(rem, width, shapes, picked, 0, out, tried);
    for (int i = 0; i < rem.n; ++i) {
      Tagged t = rem;
      if (!bring_front(t, i)) continue;
      const std::uint64_t nd = done | (std::uint64_t{1} << t.ids[0]);
      const Slice s = t.slices[0];
      t.pop_front();
      if (seen.insert(nd).second) {
        todo.push_back({t, nd, width + smc::gate_out(s.gate) - smc::gate_in(s.gate)});
      }
    }
  }
  return out;
}

inline std::set<Occurrence> occurrences(const std::vector<smc::Redex>& rs) {
  std::set<Occurrence> out;
  for (const auto& r : rs) out.insert({r.name(), r.gates, r.left});
  return out;
}

// The matcher reports each occurrence once, in the frame where only the
// occurrence's ancestors sit above it; the oracle sees every frame. They agree
// when the occurrence sets coincide and every reported frame is a real one.
inline bool agree(const std::set<Occurrence>& got, const std::set<Occurrence>& want) {
  std::set<std::pair<std::string, std::uint64_t>> g, w;
  for (const auto& [n, m, a] : got) {
    g.insert({n, m});
    if (!want.count({n, m, a})) return false;
  }
  for (const auto& [n, m, a] : want) w.insert({n, m});
  return g == w && g.size() == got.size();
}

// Sinks of the full rewrite closure, memoized across calls.
class SinkTable {
 public:
  explicit SinkTable(const smc::RuleSet& rules) : rules_(rules) {}

  const std::set<Diagram>& sinks(const Diagram& d) {
    if (auto it = memo_.find(d); it != memo_.end()) return it->second;
    std::set<Diagram> acc;
    const auto rs = smc::find_redexes(d, rules_);
    if (rs.empty()) acc.insert(d);
    std::set<Diagram> succ;
    for (const auto& r : rs) succ.insert(smc::apply_redex(d, r));
    for (const Diagram& s : succ) {
      const auto& sub = sinks(s);
      acc.insert(sub.begin(), sub.end());
    }
    return memo_.emplace(d, std::move(acc)).first->second;
  }

  std::size_t size() const { return memo_.size(); }

 private:
  const smc::RuleSet& rules_;
  std::unordered_map<Diagram, std::set<Diagram>> memo_;
};

}  // namespace oracle
