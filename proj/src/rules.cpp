#include <sstream>

#include "smc/rewrite.hpp"

namespace smc {

void RuleSet::add(std::string rule_name, std::string_view lhs, std::string_view rhs,
                  bool structural) {
  auto r = std::make_shared<Rule>();
  r->name = std::move(rule_name);
  r->lhs = Diagram::parse(lhs);
  r->rhs = Diagram::parse(rhs);
  r->structural = structural;
  if (r->lhs.inputs() != r->rhs.inputs() || r->lhs.outputs() != r->rhs.outputs()) {
    throw ArityMismatch("rule " + r->name + " has sides of different arity");
  }
  if (r->lhs.empty()) throw MalformedDiagram("rule " + r->name + " has an empty left side");
  rules.push_back(std::move(r));
}

int RuleSet::index_of(std::string_view rule_name) const {
  for (std::size_t i = 0; i < rules.size(); ++i) {
    if (rules[i]->name == rule_name) return static_cast<int>(i);
  }
  return -1;
}

const Rule& RuleSet::at(std::string_view rule_name) const {
  const int i = index_of(rule_name);
  if (i < 0) throw ParseError("no rule named '" + std::string(rule_name) + "' in " + name);
  return *rules[i];
}

namespace {

void add_monoidal(RuleSet& rs) {
  rs.add("alpha", "(m*id1);m", "(id1*m);m", false);
  rs.add("l", "(e*id1);m", "id1", false);
  rs.add("r", "(id1*e);m", "id1", false);
}

void add_structural(RuleSet& rs, bool lafont) {
  rs.add("ss", "s;s", "id2", true);
  rs.add("yb", "(s*id1);(id1*s);(s*id1)", "(id1*s);(s*id1);(id1*s)", true);
  rs.add("es", "(e*id1);s", "id1*e", true);
  rs.add("se", "(id1*e);s", "e*id1", true);
  rs.add("ms", "(m*id1);s", "(id1*s);(s*id1);(id1*m)", true);
  if (lafont) {
    rs.add("ssm", "(s*id1);(id1*s);(m*id1)", "(id1*m);s", true);
    rs.add("sms", "(s*id1);(id1*m);s", "(id1*s);(m*id1)", true);
  } else {
    rs.add("ms2", "(id1*m);s", "(s*id1);(id1*s);(m*id1)", true);
  }
}

}  // namespace

const RuleSet& rules_M() {
  static const RuleSet rs = [] {
    RuleSet r;
    r.name = "M";
    add_monoidal(r);
    return r;
  }();
  return rs;
}

const RuleSet& rules_F() {
  static const RuleSet rs = [] {
    RuleSet r;
    r.name = "F";
    add_monoidal(r);
    r.add("tau", "s;m", "m", false);
    r.add("gamma", "(s*id1);(id1*m);m", "(id1*m);m", false);
    add_structural(r, true);
    return r;
  }();
  return rs;
}

const RuleSet& rules_GM() {
  static const RuleSet rs = [] {
    RuleSet r;
    r.name = "GM";
    add_monoidal(r);
    r.add("tau", "s;m", "m", false);
    r.add("gamma", "(s*id1);(id1*m);m", "(id1*m);m", false);
    add_structural(r, false);
    return r;
  }();
  return rs;
}

const RuleSet& rules_structural() {
  static const RuleSet rs = [] {
    RuleSet r;
    r.name = "S";
    for (const auto& rule : rules_F().rules) {
      if (rule->structural) r.rules.push_back(rule);
    }
    return r;
  }();
  return rs;
}

const RuleSet& builtin_rules(std::string_view name) {
  if (name == "M") return rules_M();
  if (name == "F") return rules_F();
  if (name == "GM") return rules_GM();
  if (name == "S") return rules_structural();
  throw ParseError("unknown rule set '" + std::string(name) + "' (expected M, F, GM or S)");
}

RuleSet parse_rules(std::string_view text, std::string name) {
  RuleSet rs;
  rs.name = std::move(name);
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '%') continue;
    const auto colon = line.find(':');
    const auto arrow = line.find("=>");
    if (colon == std::string::npos || arrow == std::string::npos || arrow < colon) {
      throw ParseError("rule line " + std::to_string(lineno) + ": expected 'NAME : lhs => rhs'");
    }
    std::istringstream head(line.substr(0, colon));
    std::string rule_name, flag;
    head >> rule_name >> flag;
    if (rule_name.empty() || (!flag.empty() && flag != "structural")) {
      throw ParseError("rule line " + std::to_string(lineno) + ": bad rule header");
    }
    rs.add(rule_name, line.substr(colon + 1, arrow - colon - 1), line.substr(arrow + 2),
           flag == "structural");
  }
  return rs;
}

}  // namespace smc
