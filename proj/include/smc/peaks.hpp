#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "smc/rewrite.hpp"

namespace smc {

enum class PeakClass { Coherence, Kelly, WeakKelly, SimplyFoldable, StronglyFoldable };

const char* class_name(PeakClass c);
PeakClass parse_class(std::string_view name);

struct CriticalPeak {
  Diagram source;
  Redex left;
  Redex right;
  // 1..6 for an instance of a swap-indexed family, 0 for a plain overlap
  int family = 0;
  GateSet inner = 0;  // gates of the family's inner slot

  std::string rules() const { return left.name() + "/" + right.name(); }
};

// Peaks whose sources are two overlapping lhs occurrences and nothing else.
// `bound` caps the identity wires placed around the first lhs while searching.
std::vector<CriticalPeak> direct_overlaps(const RuleSet& rules, int bound);

// Source of a swap-indexed family: two swaps routing the leftmost wire across
// `inner`, a middle gate (swap or product) beside it, and a family-specific
// tail below.
Diagram family_source(int family, const Diagram& inner, GateSet* inner_gates = nullptr);

// Family peak with `inner` replaced by its normal form. Throws ShapeMismatch
// for an unknown family or an inner diagram without a left wire in and out.
CriticalPeak reduce_global(int family, const Diagram& inner, const RuleSet& rules = rules_F());

// Representatives used for the family inner slot.
std::vector<Diagram> inner_representatives();

// Direct overlaps plus every family instance at the representatives,
// without duplicates.
std::vector<CriticalPeak> enumerate_peaks(const RuleSet& rules, int bound);

struct JoinResult {
  RewritePath left;   // from the left branch to the meet
  RewritePath right;  // from the right branch to the meet
  Diagram meet;
};

// Normalizes both branches. Throws NotJoinable when they end apart.
JoinResult join(const CriticalPeak& peak, const RuleSet& rules, long budget = 0);

// The five designated coherence sources.
const std::vector<Diagram>& coherence_sources();

PeakClass classify(const CriticalPeak& peak, const JoinResult& j);

struct PeakOutcome {
  CriticalPeak peak;
  std::optional<JoinResult> join;
  std::optional<PeakClass> cls;
  std::string failure;  // set when the peak does not join
};

struct ConfluenceReport {
  std::string rules;
  std::vector<PeakOutcome> peaks;
  int counts[5] = {0, 0, 0, 0, 0};
  bool confluent = true;

  std::string summary() const;
  std::string listing() const;
};

ConfluenceReport local_confluence_report(const RuleSet& rules, int bound, long budget = 0);

// `PEAK <name>: <source> [| <rule>@<gate> | <rule>@<gate>]` lines.
struct PeakFixture {
  std::string name;
  Diagram source;
  std::string left_rule, right_rule;  // empty when not given
  int left_gate = -1, right_gate = -1;
};

std::vector<PeakFixture> parse_peak_fixtures(std::string_view text);
std::string read_text_file(const std::string& path);
std::string data_path(const std::string& file);

// True when the fixture names `peak` (same source and, if given, same rules
// anchored at the same first gates).
bool fixture_matches(const PeakFixture& f, const CriticalPeak& peak);

}  // namespace smc
