#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "smc/coherence.hpp"
#include "smc/render.hpp"
#include "smc/termination.hpp"

using namespace smc;

namespace {

// Built-in name or a rule file.
const RuleSet& load_rules(const std::string& spec) {
  static std::vector<std::unique_ptr<RuleSet>> owned;
  if (std::filesystem::exists(spec)) {
    owned.push_back(std::make_unique<RuleSet>(parse_rules(read_text_file(spec), spec)));
    return *owned.back();
  }
  return builtin_rules(spec);
}

std::string slurp(std::istream& in) {
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void print_path(const RewritePath& p) {
  for (int i = 0; i < p.size(); ++i) {
    const RewriteStep& s = p.steps[i];
    std::cout << "  " << i + 1 << ". " << s.redex.name() << " at gate " << s.redex.image.front()
              << " -> " << s.target.str() << '\n';
  }
}

int report(const Certificate& cert, const RuleSet& rules, std::ostream& out) {
  const Validation v = validate(cert, rules);
  out << cert.script();
  std::cerr << "cells:";
  for (const auto& [name, n] : cert.vocabulary()) std::cerr << ' ' << name << '=' << n;
  std::cerr << "\nsurgeries: " << cert.surgeries.size() << "\nvalid: " << (v.ok ? "yes" : "no");
  if (!v.ok) std::cerr << " (surgery " << v.failed_at << ": " << v.reason << ')';
  std::cerr << '\n';
  return v.ok ? 0 : 1;
}

bool input_error(const Error& e) {
  return dynamic_cast<const ParseError*>(&e) || dynamic_cast<const ArityMismatch*>(&e) ||
         dynamic_cast<const MalformedDiagram*>(&e) || dynamic_cast<const NonLinearTerm*>(&e) ||
         dynamic_cast<const UnknownVariable*>(&e) || dynamic_cast<const CompositionMismatch*>(&e) ||
         dynamic_cast<const UnknownPeak*>(&e) || dynamic_cast<const ShapeMismatch*>(&e) ||
         dynamic_cast<const NotParallel*>(&e);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rewriting, confluence and coherence certificates for symmetric monoidal categories"};
  app.require_subcommand(1);
  std::string fixtures;
  app.add_option("--fixtures", fixtures, "directory holding the data tables");

  std::string rules_name = "F";
  auto add_rules = [&](CLI::App* c) {
    c->add_option("--rules", rules_name, "M, F, GM, S or a rule file")->capture_default_str();
  };

  auto* normalize_cmd = app.add_subcommand("normalize", "normal form of a diagram and the path to it");
  std::string expr;
  std::string strategy = "leftmost";
  std::uint64_t seed = 0;
  add_rules(normalize_cmd);
  normalize_cmd->add_option("expr", expr, "diagram expression")->required();
  normalize_cmd->add_option("--strategy", strategy, "leftmost or random")->check(CLI::IsMember({"leftmost", "random"}));
  normalize_cmd->add_option("--seed", seed, "seed of the random strategy");

  auto* equal_cmd = app.add_subcommand("equal", "compare two diagrams");
  std::string expr2;
  bool by_rules = false;
  add_rules(equal_cmd);
  equal_cmd->add_option("a", expr, "first diagram")->required();
  equal_cmd->add_option("b", expr2, "second diagram")->required();
  equal_cmd->add_flag("--normal-forms", by_rules, "compare normal forms under --rules instead");

  auto* term_cmd = app.add_subcommand("termination-check", "check the polynomial interpretation on every rule");
  std::string interp_file;
  add_rules(term_cmd);
  term_cmd->add_option("--interpretation", interp_file, "file overriding gate interpretations");

  int bound = 0;
  auto* peaks_cmd = app.add_subcommand("critical-peaks", "list and classify critical peaks");
  add_rules(peaks_cmd);
  peaks_cmd->add_option("--bound", bound, "identity wires tried around the first rule (default: largest lhs)");

  auto* conf_cmd = app.add_subcommand("confluence", "join every critical peak");
  add_rules(conf_cmd);
  conf_cmd->add_option("--bound", bound, "identity wires tried around the first rule (default: largest lhs)");

  auto* certify_cmd = app.add_subcommand("certify", "certificate filling the two sides of a polygon");
  std::string terms_file, out_file, order_list;
  add_rules(certify_cmd);
  certify_cmd->add_option("--terms", terms_file, "polygon file")->required();
  certify_cmd->add_option("--out", out_file, "write the script here instead of stdout");
  certify_cmd->add_option("--order", order_list, "comma-separated variable order (default: terminal object)");

  auto* kelly_cmd = app.add_subcommand("expand-kelly", "replayable expansion of a Kelly or weak-Kelly cell");
  std::string peak;
  add_rules(kelly_cmd);
  kelly_cmd->add_option("peak", peak, "peak id (e.g. kelly-1) or source diagram")->required();

  auto* render_cmd = app.add_subcommand("render", "draw diagrams as ASCII or TikZ");
  std::string format = "ascii", render_file;
  int spacing = 2;
  render_cmd->add_option("--format", format, "ascii or tikz")->check(CLI::IsMember({"ascii", "tikz"}));
  render_cmd->add_option("--spacing", spacing, "wire spacing")->check(CLI::PositiveNumber);
  render_cmd->add_option("--file", render_file, "read expressions from a file (one per line)");
  render_cmd->add_option("expr", expr, "diagram expression (default: read stdin)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (!fixtures.empty()) setenv("SMC_DATA_DIR", fixtures.c_str(), 1);

  try {
    if (*normalize_cmd) {
      NormalizeOptions opt;
      opt.strategy = strategy == "random" ? Strategy::Random : Strategy::Leftmost;
      opt.seed = seed;
      const RewritePath p = normalize(Diagram::parse(expr), load_rules(rules_name), opt);
      std::cout << p.end().str() << '\n';
      print_path(p);
      return 0;
    }
    if (*equal_cmd) {
      Diagram a = Diagram::parse(expr), b = Diagram::parse(expr2);
      if (by_rules) {
        const RuleSet& rules = load_rules(rules_name);
        a = normalize(a, rules).end();
        b = normalize(b, rules).end();
      }
      const bool same = a == b;
      std::cout << (same ? "equal" : "different") << '\n';
      return same ? 0 : 1;
    }
    if (*term_cmd) {
      const Interpretation I =
          interp_file.empty() ? Interpretation::standard() : Interpretation::parse(read_text_file(interp_file));
      const TerminationReport r = verify_termination(load_rules(rules_name), I);
      std::cout << r.str();
      return r.all_pass ? 0 : 1;
    }
    if (*peaks_cmd || *conf_cmd) {
      const RuleSet& rules = load_rules(rules_name);
      int b = bound;
      if (b <= 0) {
        for (const auto& r : rules.rules) b = std::max(b, r->lhs.size());
      }
      const ConfluenceReport r = local_confluence_report(rules, b);
      if (*peaks_cmd) std::cout << r.listing();
      std::cout << r.summary() << '\n';
      if (*conf_cmd && !r.confluent) {
        for (const PeakOutcome& o : r.peaks) {
          if (!o.cls) std::cout << "not joinable: " << o.peak.source.str() << " (" << o.peak.rules() << ")\n";
        }
      }
      return r.confluent ? 0 : 1;
    }
    if (*certify_cmd) {
      const RuleSet& rules = load_rules(rules_name);
      const Polygon p = parse_polygon(read_text_file(terms_file));
      std::vector<std::string> order = p.order();
      if (!order_list.empty()) {
        order.clear();
        std::stringstream ss(order_list);
        for (std::string v; std::getline(ss, v, ',');) order.push_back(v);
      }
      const PolygonSides sides = polygon_sides(p);
      const CellCatalog& cat = CellCatalog::of(rules);
      const Zigzag left = mor_to_zigzag(sides.left_mor, order, rules);
      const Zigzag right = mor_to_zigzag(sides.right_mor, order, rules);
      const Certificate cert = certify_equal(left, right, cat);
      if (out_file.empty()) return report(cert, rules, std::cout);
      std::ofstream f(out_file);
      return report(cert, rules, f);
    }
    if (*kelly_cmd) {
      const RuleSet& rules = load_rules(rules_name);
      const auto [cell, list] = expand_kelly(peak, CellCatalog::of(rules));
      std::cout << "% " << cell->name << ' ' << cell_kind_name(cell->kind) << ' ' << cell->source().str() << '\n';
      return report(expansion_certificate(*cell, list), rules, std::cout);
    }
    if (*render_cmd) {
      RenderOptions o;
      o.format = format == "tikz" ? RenderFormat::Tikz : RenderFormat::Ascii;
      o.spacing = spacing;
      std::vector<std::string> exprs;
      if (!expr.empty()) {
        exprs.push_back(expr);
      } else {
        std::istringstream in(render_file.empty() ? slurp(std::cin) : read_text_file(render_file));
        for (std::string line; std::getline(in, line);) {
          if (line.find_first_not_of(" \t\r") != std::string::npos) exprs.push_back(line);
        }
      }
      for (std::size_t i = 0; i < exprs.size(); ++i) {
        if (i) std::cout << '\n';
        std::cout << render_diagram(Diagram::parse(exprs[i]), o);
      }
      return 0;
    }
  } catch (const Error& e) {
    if (input_error(e)) {
      std::cerr << "input error: " << e.what() << '\n';
      return 2;
    }
    std::cerr << "failed: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "failed: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
