#pragma once

// Random parallel zigzag pairs for the certification checks.

#include <optional>
#include <random>
#include <utility>

#include "smc/coherence.hpp"

namespace paths {

using smc::Diagram;
using smc::Zigzag;

// Random walk of up to `len` moves, either direction, keeping every diagram
// within `max_gates`.
inline Zigzag walk(const Diagram& d, int len, int max_gates, const smc::RuleSet& rules,
                   std::mt19937_64& rng) {
  Zigzag z{d, {}};
  for (int i = 0; i < len; ++i) {
    auto moves = smc::forward_moves(z.end(), rules);
    if (rng() % 2) {
      auto back = smc::backward_moves(z.end(), rules);
      moves.insert(moves.end(), back.begin(), back.end());
    }
    std::erase_if(moves, [&](const smc::Move& m) { return m.to().size() > max_gates; });
    if (moves.empty()) break;
    z.push(moves[rng() % moves.size()]);
  }
  return z;
}

inline Zigzag to_normal(const Diagram& d, const smc::RuleSet& rules) {
  return Zigzag::of(smc::normalize(d, rules));
}

// z1 and z2 both run from `d` to the end of a random walk; each wanders on
// its own and then returns through normal forms.
inline std::optional<std::pair<Zigzag, Zigzag>> parallel_pair(const Diagram& d, int max_gates,
                                                               const smc::RuleSet& rules,
                                                               std::mt19937_64& rng) {
  const Zigzag target_walk = walk(d, 1 + rng() % 4, max_gates, rules, rng);
  const Diagram t = target_walk.end();
  auto side = [&]() {
    Zigzag out = walk(d, rng() % 4, max_gates, rules, rng);
    const Zigzag back = walk(t, rng() % 4, max_gates, rules, rng);
    out.append(to_normal(out.end(), rules));
    out.append(to_normal(back.end(), rules).inverse());
    out.append(back.inverse());
    return out;
  };
  Zigzag z1 = side();
  Zigzag z2 = side();
  for (const Zigzag* z : {&z1, &z2}) {
    for (const auto& m : z->moves) {
      if (m.upper.size() > max_gates || m.lower.size() > max_gates) return std::nullopt;
    }
  }
  return std::make_pair(std::move(z1), std::move(z2));
}

}  // namespace paths
