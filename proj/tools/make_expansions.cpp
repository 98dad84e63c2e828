// Regenerates data/kelly_expansions_<rules>.txt by searching a filler for
// every Kelly and weak-Kelly cell.
#include <chrono>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "smc/coherence.hpp"

using namespace smc;

int main(int argc, char** argv) {
  CLI::App app{"Search fillers for the Kelly and weak-Kelly cells of a rule set"};
  std::string rules_name = "F";
  std::string out;
  int max_extra = 6;
  app.add_option("--rules", rules_name, "M or F");
  app.add_option("--out", out, "output file (default: the data directory)");
  app.add_option("--max-extra", max_extra, "largest number of extra gates explored");
  CLI11_PARSE(app, argc, argv);

  const RuleSet& rules = builtin_rules(rules_name);
  if (out.empty()) out = data_path("kelly_expansions_" + rules.name + ".txt");
  CellCatalog cat = CellCatalog::build(rules);
  std::vector<CellRef> allowed;
  for (const CellRef& c : cat.cells()) {
    if (c->kind == CellKind::Base || c->kind == CellKind::Foldable) allowed.push_back(c);
  }
  int failures = 0;
  for (const CellRef& c : cat.kelly_cells()) {
    std::cout << c->name << ' ' << c->source().str() << ": " << std::flush;
    const auto t0 = std::chrono::steady_clock::now();
    bool done = false;
    for (int extra = 2; extra <= max_extra && !done; extra += 2) {
      SolverOptions opt;
      opt.extra_gates = extra;
      auto list = solve_filler(*c, rules, allowed, opt);
      if (!list) continue;
      const Validation v = validate(expansion_certificate(*c, *list), rules);
      if (!v.ok) {
        std::cout << "invalid (" << v.reason << ") ";
        continue;
      }
      const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      std::cout << list->size() << " surgeries, " << extra << " extra gates, " << dt << "s\n";
      cat.set_expansion(c, std::move(*list));
      done = true;
    }
    if (!done) {
      std::cout << "no filler\n";
      ++failures;
    }
  }
  std::ofstream f(out);
  f << "% fillers for the Kelly and weak-Kelly cells of " << rules.name << "\n" << cat.expansions_text();
  std::cout << "wrote " << out << '\n';
  return failures == 0 ? 0 : 1;
}
