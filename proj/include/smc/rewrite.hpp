#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "smc/diagram.hpp"
#include "smc/port_graph.hpp"

namespace smc {

struct Rule {
  std::string name;
  Diagram lhs;
  Diagram rhs;
  bool structural = false;
};

struct RuleSet {
  std::string name;
  std::vector<std::shared_ptr<const Rule>> rules;

  void add(std::string rule_name, std::string_view lhs, std::string_view rhs, bool structural);
  int index_of(std::string_view rule_name) const;  // -1 if absent
  const Rule& at(std::string_view rule_name) const;
};

// Built-in catalogs. The structural set holds the seven swap-management rules
// of F and nothing else.
const RuleSet& rules_M();
const RuleSet& rules_F();
const RuleSet& rules_GM();
const RuleSet& rules_structural();

// M, F, GM or S; throws ParseError for anything else.
const RuleSet& builtin_rules(std::string_view name);

// One rule per line: `NAME [structural] : <lhs> => <rhs>`. Blank lines and
// lines starting with '%' are skipped.
RuleSet parse_rules(std::string_view text, std::string name = "custom");

// An occurrence of a rule lhs inside a host diagram. `gates` indexes the
// host's canonical slices, `image[i]` is the host gate matched by lhs gate i
// and `left` is the number of host wires left of the occurrence.
struct Redex {
  std::shared_ptr<const Rule> rule;
  GateSet gates = 0;
  int left = 0;
  std::vector<int> image;

  const std::string& name() const { return rule->name; }
  friend bool operator==(const Redex& a, const Redex& b) {
    return a.gates == b.gates && a.left == b.left && a.image == b.image &&
           a.rule->name == b.rule->name;
  }
};

// All occurrences, ordered by rule index, then first host gate, then offset.
std::vector<Redex> find_redexes(const Diagram& host, const RuleSet& rules);

struct Applied {
  Diagram result;
  std::vector<int> kept;     // host gate -> result gate, -1 if consumed
  std::vector<int> created;  // rhs gate -> result gate
};

// Throws StaleRedex if `r` is not an occurrence of its rule in `host`.
Applied apply_tracked(const Diagram& host, const Redex& r);
Diagram apply_redex(const Diagram& host, const Redex& r);

// True when `r` still describes an occurrence in `host`.
bool redex_valid(const Diagram& host, const Redex& r);

// The context around an occurrence: host = ctx.plug(rule lhs).
Whisker context_of(const Diagram& host, const Redex& r);

// A convex gate set cut out of its host: host = ctx.plug(part), and
// image[i] is the host gate matched by part gate i.
struct Cut {
  Diagram part;
  Whisker ctx;
  std::vector<int> image;
};
std::optional<Cut> cut(const Diagram& host, GateSet mask);

struct RewriteStep {
  Redex redex;
  Diagram source;
  Diagram target;
};

struct RewritePath {
  Diagram start;
  std::vector<RewriteStep> steps;

  const Diagram& end() const { return steps.empty() ? start : steps.back().target; }
  int size() const { return static_cast<int>(steps.size()); }
  void push(const Redex& r);
  void append(const RewritePath& tail);
};

enum class Strategy { Leftmost, Random };

struct NormalizeOptions {
  Strategy strategy = Strategy::Leftmost;
  std::uint64_t seed = 0;
  // 0 means the default budget (10000, or SMC_STEP_BUDGET when set)
  long budget = 0;
};

long default_step_budget();

// Index into `rs` of the redex the leftmost strategy fires.
int leftmost(const std::vector<Redex>& rs);

// Rewrites until no redex is left. Throws BudgetExhausted when the budget
// runs out first.
RewritePath normalize(const Diagram& d, const RuleSet& rules, const NormalizeOptions& opt = {});

RewritePath structural_normal_form(const Diagram& d);

}  // namespace smc
