// Runs the acceptance checks and prints one PASS/FAIL line per criterion.
// Exit status is the number of failing criteria. Criterion numbers given as
// arguments restrict the run to those.

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "../tests/oracles.hpp"
#include "../tests/random_paths.hpp"
#include "smc/coherence.hpp"
#include "smc/termination.hpp"

using namespace smc;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

int failures = 0;
std::set<int> selected;  // empty runs everything

void run(int id, const std::string& name, double limit_s, const std::function<Outcome()>& body) {
  if (!selected.empty() && !selected.count(id)) return;
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("threw: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = limit_s <= 0 || s < limit_s;
  const bool pass = o.ok && in_time;
  failures += !pass;
  std::ostringstream os;
  os << (pass ? "PASS" : "FAIL") << "  " << id << " " << name << ": " << o.detail << " ["
     << std::fixed << std::setprecision(2) << s << "s";
  if (limit_s > 0) os << " / " << limit_s << "s";
  os << "]";
  std::cout << os.str() << std::endl;
}

Outcome termination() {
  const auto f = verify_termination(rules_F());
  const auto m = verify_termination(rules_M());
  auto passed = [](const TerminationReport& r) {
    int n = 0;
    for (const auto& l : r.lines) n += l.decreasing;
    return n;
  };
  std::ostringstream os;
  os << "F " << passed(f) << "/" << f.lines.size() << ", M " << passed(m) << "/" << m.lines.size();
  const bool ok = f.all_pass && m.all_pass && f.lines.size() == 12 && m.lines.size() == 3;
  return {ok, os.str()};
}

Outcome census() {
  const ConfluenceReport f = local_confluence_report(rules_F(), 4);
  const auto fx = parse_peak_fixtures(read_text_file(data_path("peaks_F.txt")));
  int contained = 0;
  for (const auto& x : fx) {
    for (const auto& o : f.peaks) {
      if (!fixture_matches(x, o.peak)) continue;
      if (o.cls && x.name.substr(0, x.name.rfind('-')) == class_name(*o.cls)) ++contained;
      break;
    }
  }
  const auto m = enumerate_peaks(rules_M(), 3);
  std::ostringstream os;
  os << "F " << f.peaks.size() << " (";
  for (int i = 0; i < 5; ++i) os << (i ? "/" : "") << f.counts[i];
  os << "), fixtures " << contained << "/" << fx.size() << ", M " << m.size() << " sources";
  const int want[5] = {5, 5, 12, 18, 28};
  bool ok = f.confluent && f.peaks.size() == 68 && contained == static_cast<int>(fx.size()) &&
            fx.size() == 68 && m.size() == 5;
  for (int i = 0; i < 5; ++i) ok = ok && f.counts[i] == want[i];
  return {ok, os.str()};
}

Outcome swap_monoid() {
  const Diagram src = Diagram::parse("(id1*s);(id1*m);s");
  const ConfluenceReport rep = local_confluence_report(rules_GM(), 4, 1000);
  int hits = 0, stuck = 0;
  for (const auto& o : rep.peaks) {
    if (!(o.peak.source == src)) continue;
    ++hits;
    try {
      join(o.peak, rules_GM(), 1000);
    } catch (const NotJoinable&) {
      ++stuck;
    }
  }
  std::ostringstream os;
  os << stuck << "/" << hits << " peaks at " << src.str() << " not joinable";
  return {hits > 0 && stuck > 0, os.str()};
}

Outcome unique_normal_forms(const RuleSet& rules) {
  oracle::SinkTable sinks(rules);
  long n = 0, bad = 0;
  std::string example;
  for (int p = 0; p <= 4; ++p) {
    for (const Diagram& d : enumerate_diagrams_any(p, 6)) {
      ++n;
      const auto& sk = sinks.sinks(d);
      if (sk.size() > 1 && example.empty()) {
        example = d.str() + " has " + std::to_string(sk.size()) + " sinks:";
        for (const Diagram& x : sk) example += " " + x.str();
      }
      bool ok = sk.size() == 1 && normalize(d, rules).end() == *sk.begin();
      for (std::uint64_t seed = 1; ok && seed <= 10; ++seed) {
        ok = normalize(d, rules, {Strategy::Random, seed, 0}).end() == *sk.begin();
      }
      bad += !ok;
    }
  }
  std::ostringstream os;
  os << n << " diagrams, " << bad << " without a unique reachable normal form";
  if (!example.empty()) os << "; e.g. " << example;
  return {bad == 0, os.str()};
}

std::string vocab_str(const Certificate& c) {
  std::ostringstream os;
  for (const auto& [k, v] : c.vocabulary()) os << (os.tellp() ? " " : "") << k << "=" << v;
  return os.str();
}

Outcome hexagon() {
  const auto pc = certify_polygon(parse_polygon(read_text_file(data_path("hexagon.txt"))));
  const auto v = validate(pc.cert, rules_F());
  const auto vocab = pc.cert.vocabulary();
  const bool exact = vocab == std::vector<std::pair<std::string, int>>{{"exa2", 1}, {"g", 1}};
  return {exact && v.ok, vocab_str(pc.cert) + (v.ok ? ", valid" : ", invalid: " + v.reason)};
}

Outcome unit_polygons() {
  const CellCatalog& cat = CellCatalog::of(rules_M());
  bool ok = true;
  std::ostringstream os;
  for (const char* f : {"unit_left.txt", "unit_right.txt", "unit_unit.txt"}) {
    const auto pc = certify_polygon(parse_polygon(read_text_file(data_path(f))), cat);
    const auto v = validate(pc.cert, rules_M());
    for (const auto& [k, n] : pc.cert.vocabulary()) ok = ok && (k == "penta" || k == "tria");
    ok = ok && v.ok;
    os << (os.tellp() ? "; " : "") << f << ": " << vocab_str(pc.cert) << (v.ok ? " valid" : " invalid");
  }
  return {ok, os.str()};
}

bool allowed_cell(const Cell& c) {
  static const std::set<std::string> base{"penta", "tria", "inv", "g", "exa2"};
  return c.plumbing() || c.kind == CellKind::Foldable ||
         (c.kind == CellKind::Base && base.count(c.name));
}

Outcome expansions_and_pairs() {
  const CellCatalog& cat = CellCatalog::of(rules_F());
  int expanded = 0, valid = 0;
  for (const CellRef& c : cat.kelly_cells()) {
    const auto* list = cat.expansion(*c);
    if (!list) continue;
    ++expanded;
    bool ok = validate(expansion_certificate(*c, *list), rules_F()).ok;
    for (const Surgery& s : *list) ok = ok && allowed_cell(*s.cell);
    valid += ok;
  }
  std::mt19937_64 rng(20240601);
  std::vector<Diagram> starts;
  for (int p = 0; p <= 3; ++p) {
    for (const Diagram& d : enumerate_diagrams_any(p, 5)) starts.push_back(d);
  }
  int pairs = 0, certified = 0, bad_vocab = 0, longest = 0;
  std::map<std::string, int> used;
  while (pairs < 200) {
    const auto pr = paths::parallel_pair(starts[rng() % starts.size()], 8, rules_F(), rng);
    if (!pr) continue;
    ++pairs;
    const Certificate c = certify_equal(pr->first, pr->second, cat);
    longest = std::max({longest, pr->first.size(), pr->second.size()});
    for (const auto& [k, n] : c.vocabulary()) used[k.substr(0, k.find_first_of("-:"))] += n;
    bool vocab = true;
    for (const Surgery& s : c.surgeries) vocab = vocab && allowed_cell(*s.cell);
    bad_vocab += !vocab;
    certified += vocab && validate(c, rules_F()).ok;
  }
  std::ostringstream os;
  os << "expansions " << valid << "/" << expanded << " of " << cat.kelly_cells().size()
     << " valid, pairs " << certified << "/" << pairs << " certified (longest side " << longest
     << ", cells";
  for (const auto& [k, n] : used) os << " " << k << "=" << n;
  os << ")";
  if (bad_vocab) os << " (" << bad_vocab << " outside the vocabulary)";
  return {expanded == 17 && valid == 17 && certified == 200, os.str()};
}

Outcome matcher() {
  long n = 0, bad = 0;
  for (int p = 0; p <= 4; ++p) {
    for (const Diagram& d : enumerate_diagrams_upto(p, 4, 8)) {
      ++n;
      const auto got = oracle::occurrences(find_redexes(d, rules_F()));
      bad += !oracle::agree(got, oracle::factorizations(d, rules_F()));
    }
  }
  std::ostringstream os;
  os << n << " diagrams, " << bad << " disagreements";
  return {bad == 0, os.str()};
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  run(1, "termination-check", 1, termination);
  run(2, "peak census", 120, census);
  run(3, "swap-monoid peak", 10, swap_monoid);
  run(4, "unique normal forms (F)", 0, [] { return unique_normal_forms(rules_F()); });
  run(5, "unique normal forms (structural)", 0, [] { return unique_normal_forms(rules_structural()); });
  run(6, "hexagon certificate", 5, hexagon);
  run(7, "unit polygons in M", 0, unit_polygons);
  run(8, "Kelly expansions and random pairs", 300, expansions_and_pairs);
  run(9, "matcher against oracle", 0, matcher);
  std::cout << (failures ? "FAILED: " : "ALL PASSED: ") << failures << " failing" << std::endl;
  return failures;
}
