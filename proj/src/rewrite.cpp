#include <bit>
#include <cstdlib>
#include <random>

#include "smc/rewrite.hpp"

namespace smc {

void RewritePath::push(const Redex& r) {
  RewriteStep st;
  st.source = end();
  st.target = apply_redex(st.source, r);
  st.redex = r;
  steps.push_back(std::move(st));
}

void RewritePath::append(const RewritePath& tail) {
  if (!(tail.start == end())) {
    throw CompositionMismatch("path ending at " + end().str() + " cannot continue from " +
                              tail.start.str());
  }
  steps.insert(steps.end(), tail.steps.begin(), tail.steps.end());
}

long default_step_budget() {
  if (const char* env = std::getenv("SMC_STEP_BUDGET")) {
    char* endp = nullptr;
    const long v = std::strtol(env, &endp, 10);
    if (endp != env && *endp == '\0' && v > 0) return v;
  }
  return 10000;
}

int leftmost(const std::vector<Redex>& rs) {
  int best = -1;
  for (int i = 0; i < static_cast<int>(rs.size()); ++i) {
    if (best < 0) {
      best = i;
      continue;
    }
    const int a = std::countr_zero(rs[i].gates), b = std::countr_zero(rs[best].gates);
    if (a < b || (a == b && rs[i].left < rs[best].left)) best = i;
  }
  return best;
}

RewritePath normalize(const Diagram& d, const RuleSet& rules, const NormalizeOptions& opt) {
  const long budget = opt.budget > 0 ? opt.budget : default_step_budget();
  std::mt19937_64 rng(opt.seed);
  RewritePath path;
  path.start = d;
  while (true) {
    auto rs = find_redexes(path.end(), rules);
    if (rs.empty()) return path;
    if (path.size() >= budget) {
      throw BudgetExhausted("no normal form within " + std::to_string(budget) + " steps from " +
                            d.str());
    }
    const int pick = opt.strategy == Strategy::Leftmost
                         ? leftmost(rs)
                         : static_cast<int>(rng() % rs.size());
    path.push(rs[pick]);
  }
}

RewritePath structural_normal_form(const Diagram& d) { return normalize(d, rules_structural()); }

}  // namespace smc
