#include "smc/peaks.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include "smc/port_graph.hpp"

namespace smc {

const char* class_name(PeakClass c) {
  switch (c) {
    case PeakClass::Coherence: return "coherence";
    case PeakClass::Kelly: return "kelly";
    case PeakClass::WeakKelly: return "weak_kelly";
    case PeakClass::SimplyFoldable: return "simply_foldable";
    case PeakClass::StronglyFoldable: return "strongly_foldable";
  }
  return "?";
}

PeakClass parse_class(std::string_view name) {
  for (PeakClass c : {PeakClass::Coherence, PeakClass::Kelly, PeakClass::WeakKelly,
                      PeakClass::SimplyFoldable, PeakClass::StronglyFoldable}) {
    if (name == class_name(c)) return c;
  }
  throw ParseError("unknown peak class '" + std::string(name) + "'");
}

namespace {

bool has_idle_wire(const Diagram& d) {
  for (const Port& p : PortGraph::of(d).out_src) {
    if (p.gate < 0) return true;
  }
  return false;
}

GateSet all_gates(int n) { return n >= 64 ? ~GateSet{0} : bit(n) - 1; }

using PeakKey = std::tuple<Diagram, std::string, GateSet, std::string, GateSet>;

PeakKey key_of(const CriticalPeak& p) {
  auto a = std::make_pair(p.left.name(), p.left.gates);
  auto b = std::make_pair(p.right.name(), p.right.gates);
  if (b < a) std::swap(a, b);
  return {p.source, a.first, a.second, b.first, b.second};
}

// Gates grown around a seed, above or below, at every position.
void grow(const Diagram& d, int extra, std::unordered_set<Diagram>& out) {
  if (!out.insert(d).second || extra == 0) return;
  for (Gate g : {Gate::M, Gate::E, Gate::S}) {
    const int in = gate_in(g), o = gate_out(g);
    for (int left = 0; left + o <= d.inputs(); ++left) {
      std::vector<Slice> sl{Slice{left, g}};
      for (const Slice& s : d.slices()) sl.push_back(s);
      grow(Diagram(d.inputs() - o + in, std::move(sl)), extra - 1, out);
    }
    for (int left = 0; left + in <= d.outputs(); ++left) {
      std::vector<Slice> sl = d.slices();
      sl.push_back(Slice{left, g});
      grow(Diagram(d.inputs(), std::move(sl)), extra - 1, out);
    }
  }
}

// Overlapping redex pairs covering `cover` and avoiding `avoid`.
std::vector<CriticalPeak> pairs_in(const Diagram& src, const RuleSet& rules, GateSet cover,
                                   GateSet avoid) {
  std::vector<CriticalPeak> out;
  const auto rs = find_redexes(src, rules);
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (rs[i].gates & avoid) continue;
    for (std::size_t j = i + 1; j < rs.size(); ++j) {
      if (rs[j].gates & avoid) continue;
      if (!(rs[i].gates & rs[j].gates)) continue;
      if ((rs[i].gates | rs[j].gates) != cover) continue;
      CriticalPeak p;
      p.source = src;
      p.left = rs[i];
      p.right = rs[j];
      out.push_back(std::move(p));
    }
  }
  return out;
}

}  // namespace

std::vector<CriticalPeak> direct_overlaps(const RuleSet& rules, int bound) {
  int max_k = 0;
  for (const auto& r : rules.rules) max_k = std::max(max_k, r->lhs.size());
  if (bound < max_k) {
    throw ShapeMismatch("peak bound " + std::to_string(bound) + " is below the largest lhs (" +
                        std::to_string(max_k) + " gates)");
  }
  std::unordered_set<Diagram> hosts;
  for (const auto& r : rules.rules) {
    for (int a = 0; a <= bound; ++a) {
      for (int b = 0; a + b <= bound; ++b) grow(whisker(a, r->lhs, b), max_k - 1, hosts);
    }
  }
  std::vector<Diagram> sorted(hosts.begin(), hosts.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<CriticalPeak> out;
  for (const Diagram& h : sorted) {
    if (h.size() < 2 || has_idle_wire(h)) continue;
    for (CriticalPeak& p : pairs_in(h, rules, all_gates(h.size()), 0)) out.push_back(std::move(p));
  }
  return out;
}

Diagram family_source(int family, const Diagram& inner, GateSet* inner_gates) {
  if (family < 1 || family > 6) throw ShapeMismatch("no family " + std::to_string(family));
  if (inner.inputs() < 1 || inner.outputs() < 1) {
    throw ShapeMismatch("inner diagram " + inner.str() + " needs at least one input and output");
  }
  const bool product_middle = family == 3 || family == 6;
  const int mid_out = product_middle ? 1 : 2;
  std::vector<Slice> chain{{0, Gate::S}, {1, Gate::S}, {0, product_middle ? Gate::M : Gate::S}};
  const int first_inner = static_cast<int>(chain.size());
  for (const Slice& s : inner.slices()) chain.push_back(Slice{s.left + mid_out, s.gate});
  const int end_inner = static_cast<int>(chain.size());
  switch (family) {
    case 1: chain.insert(chain.end(), {{1, Gate::S}, {0, Gate::S}}); break;
    case 2: chain.insert(chain.end(), {{1, Gate::M}, {0, Gate::S}}); break;
    case 3: chain.push_back({0, Gate::S}); break;
    case 4: chain.insert(chain.end(), {{1, Gate::S}, {0, Gate::M}}); break;
    case 5: chain.insert(chain.end(), {{1, Gate::M}, {0, Gate::M}}); break;
    case 6: chain.push_back({0, Gate::M}); break;
  }
  std::vector<int> order;
  Diagram d = Diagram::scheduled(2 + inner.inputs(), std::move(chain), order);
  if (inner_gates) {
    *inner_gates = 0;
    for (std::size_t k = 0; k < order.size(); ++k) {
      if (order[k] >= first_inner && order[k] < end_inner) *inner_gates |= bit(static_cast<int>(k));
    }
  }
  return d;
}

CriticalPeak reduce_global(int family, const Diagram& inner, const RuleSet& rules) {
  if (inner.inputs() < 1 || inner.outputs() < 1) {
    throw ShapeMismatch("inner diagram " + inner.str() + " needs at least one input and output");
  }
  const Diagram reduced = normalize(inner, rules).end();
  GateSet slot = 0;
  const Diagram src = family_source(family, reduced, &slot);
  auto ps = pairs_in(src, rules, all_gates(src.size()) & ~slot, slot);
  if (ps.empty()) {
    throw ShapeMismatch("family " + std::to_string(family) + " has no peak in " + src.str());
  }
  ps.front().family = family;
  ps.front().inner = slot;
  return ps.front();
}

std::vector<Diagram> inner_representatives() {
  return {identity(1), Diagram::gate(Gate::S), Diagram::gate(Gate::M)};
}

std::vector<CriticalPeak> enumerate_peaks(const RuleSet& rules, int bound) {
  std::vector<CriticalPeak> out;
  std::set<PeakKey> seen;
  for (CriticalPeak& p : direct_overlaps(rules, bound)) {
    if (seen.insert(key_of(p)).second) out.push_back(std::move(p));
  }
  for (int f = 1; f <= 6; ++f) {
    for (const Diagram& inner : inner_representatives()) {
      GateSet slot = 0;
      const Diagram src = family_source(f, inner, &slot);
      for (CriticalPeak& p : pairs_in(src, rules, all_gates(src.size()) & ~slot, slot)) {
        p.family = f;
        p.inner = slot;
        if (seen.insert(key_of(p)).second) out.push_back(std::move(p));
      }
    }
  }
  return out;
}

JoinResult join(const CriticalPeak& peak, const RuleSet& rules, long budget) {
  NormalizeOptions opt;
  opt.budget = budget;
  JoinResult j;
  j.left = normalize(apply_redex(peak.source, peak.left), rules, opt);
  j.right = normalize(apply_redex(peak.source, peak.right), rules, opt);
  if (!(j.left.end() == j.right.end())) {
    throw NotJoinable("peak " + peak.rules() + " on " + peak.source.str() + " ends at " +
                      j.left.end().str() + " and " + j.right.end().str());
  }
  j.meet = j.left.end();
  return j;
}

const std::vector<Diagram>& coherence_sources() {
  static const std::vector<Diagram> v = {
      Diagram::parse("(m*id2);(m*id1);m"), Diagram::parse("(id1*e*id1);(m*id1);m"),
      Diagram::parse("s;s;m"), Diagram::parse("(s*id1);(m*id1);m"),
      Diagram::parse("(m*id1);s;m")};
  return v;
}

namespace {

// Rule sequence of peak step + join, cut where the two sides first meet.
std::pair<std::vector<const Rule*>, std::vector<const Rule*>> trimmed_sides(
    const CriticalPeak& peak, const JoinResult& j) {
  auto side = [](const Redex& first, const RewritePath& rest) {
    std::vector<std::pair<const Rule*, Diagram>> s;
    s.push_back({first.rule.get(), rest.start});
    for (const auto& st : rest.steps) s.push_back({st.redex.rule.get(), st.target});
    return s;
  };
  auto l = side(peak.left, j.left);
  auto r = side(peak.right, j.right);
  std::size_t cut_l = l.size(), cut_r = r.size();
  for (std::size_t i = 0; i < l.size() && cut_l == l.size(); ++i) {
    for (std::size_t k = 0; k < r.size(); ++k) {
      if (l[i].second == r[k].second) {
        cut_l = i + 1;
        cut_r = k + 1;
        break;
      }
    }
  }
  std::vector<const Rule*> a, b;
  for (std::size_t i = 0; i < cut_l; ++i) a.push_back(l[i].first);
  for (std::size_t i = 0; i < cut_r; ++i) b.push_back(r[i].first);
  return {a, b};
}

}  // namespace

PeakClass classify(const CriticalPeak& peak, const JoinResult& j) {
  for (const Diagram& c : coherence_sources()) {
    if (peak.source == c) return PeakClass::Coherence;
  }
  const auto [a, b] = trimmed_sides(peak, j);
  auto non_structural = [](const std::vector<const Rule*>& side) {
    std::vector<std::string> names;
    for (const Rule* r : side) {
      if (!r->structural) names.push_back(r->name);
    }
    return names;
  };
  const auto na = non_structural(a), nb = non_structural(b);
  if (na.empty() && nb.empty()) return PeakClass::StronglyFoldable;
  if (na.size() == 1 && nb.size() == 1 && na[0] == nb[0]) return PeakClass::SimplyFoldable;
  if (!peak.left.rule->structural && !peak.right.rule->structural) return PeakClass::Kelly;
  return PeakClass::WeakKelly;
}

ConfluenceReport local_confluence_report(const RuleSet& rules, int bound, long budget) {
  ConfluenceReport rep;
  rep.rules = rules.name;
  for (CriticalPeak& p : enumerate_peaks(rules, bound)) {
    PeakOutcome o;
    o.peak = std::move(p);
    try {
      o.join = join(o.peak, rules, budget);
      o.cls = classify(o.peak, *o.join);
      ++rep.counts[static_cast<int>(*o.cls)];
    } catch (const NotJoinable& e) {
      o.failure = e.what();
      rep.confluent = false;
    } catch (const BudgetExhausted& e) {
      o.failure = e.what();
      rep.confluent = false;
    }
    rep.peaks.push_back(std::move(o));
  }
  return rep;
}

std::string ConfluenceReport::summary() const {
  std::ostringstream os;
  os << peaks.size() << " peaks, " << counts[0] << '/' << counts[1] << '/' << counts[2] << '/'
     << counts[3] << '/' << counts[4] << " (coherence/kelly/weak_kelly/simply_foldable/"
     << "strongly_foldable), " << (confluent ? "locally confluent" : "NOT locally confluent");
  return os.str();
}

std::string ConfluenceReport::listing() const {
  std::ostringstream os;
  for (const PeakOutcome& o : peaks) {
    os << o.peak.source.str() << " | " << o.peak.left.name() << '@'
       << std::countr_zero(o.peak.left.gates) << " | " << o.peak.right.name() << '@'
       << std::countr_zero(o.peak.right.gates) << " | ";
    if (o.cls) {
      os << class_name(*o.cls) << " | join " << o.join->left.size() << '+' << o.join->right.size();
    } else {
      os << "NOT JOINABLE | " << o.failure;
    }
    os << '\n';
  }
  return os.str();
}

std::vector<PeakFixture> parse_peak_fixtures(std::string_view text) {
  std::vector<PeakFixture> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '%') continue;
    if (line.compare(first, 5, "JOIN-") == 0) continue;
    if (line.compare(first, 5, "PEAK ") != 0) {
      throw ParseError("fixture line " + std::to_string(lineno) + ": expected PEAK");
    }
    const auto colon = line.find(':', first);
    if (colon == std::string::npos) {
      throw ParseError("fixture line " + std::to_string(lineno) + ": missing ':'");
    }
    PeakFixture f;
    f.name = line.substr(first + 5, colon - first - 5);
    while (!f.name.empty() && f.name.back() == ' ') f.name.pop_back();
    std::vector<std::string> parts;
    std::stringstream rest(line.substr(colon + 1));
    std::string part;
    while (std::getline(rest, part, '|')) parts.push_back(part);
    if (parts.empty()) throw ParseError("fixture line " + std::to_string(lineno) + ": no source");
    f.source = Diagram::parse(parts[0]);
    auto anchor = [&](const std::string& s, std::string& rule, int& gate) {
      const auto at = s.find('@');
      if (at == std::string::npos) {
        throw ParseError("fixture line " + std::to_string(lineno) + ": expected rule@gate");
      }
      std::istringstream rn(s.substr(0, at));
      rn >> rule;
      gate = std::stoi(s.substr(at + 1));
    };
    if (parts.size() == 3) {
      anchor(parts[1], f.left_rule, f.left_gate);
      anchor(parts[2], f.right_rule, f.right_gate);
    } else if (parts.size() != 1) {
      throw ParseError("fixture line " + std::to_string(lineno) + ": expected two redexes");
    }
    out.push_back(std::move(f));
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string data_path(const std::string& file) {
  if (const char* env = std::getenv("SMC_DATA_DIR")) return std::string(env) + "/" + file;
  return std::string(SMC_DATA_DIR) + "/" + file;
}

bool fixture_matches(const PeakFixture& f, const CriticalPeak& peak) {
  if (!(f.source == peak.source)) return false;
  if (f.left_rule.empty()) return true;
  auto at = [](const Redex& r) { return std::countr_zero(r.gates); };
  auto same = [&](const Redex& r, const std::string& rule, int gate) {
    return r.name() == rule && at(r) == gate;
  };
  return (same(peak.left, f.left_rule, f.left_gate) && same(peak.right, f.right_rule, f.right_gate)) ||
         (same(peak.left, f.right_rule, f.right_gate) && same(peak.right, f.left_rule, f.left_gate));
}

}  // namespace smc
