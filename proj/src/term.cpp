#include "smc/term.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "smc/rewrite.hpp"

namespace smc {

Term Term::var(std::string name) {
  Term t;
  t.kind_ = Kind::Var;
  t.name_ = std::move(name);
  return t;
}

Term Term::unit() { return Term{}; }

Term Term::prod(const Term& a, const Term& b) {
  Term t;
  t.kind_ = Kind::Prod;
  t.l_ = std::make_shared<const Term>(a);
  t.r_ = std::make_shared<const Term>(b);
  return t;
}

std::string Term::str() const {
  switch (kind_) {
    case Kind::Var: return name_;
    case Kind::Unit: return "I";
    case Kind::Prod: return "(" + l_->str() + "#" + r_->str() + ")";
  }
  return "";
}

std::vector<std::string> Term::variables() const {
  std::vector<std::string> out;
  std::vector<const Term*> todo{this};
  while (!todo.empty()) {
    const Term* t = todo.back();
    todo.pop_back();
    if (t->kind_ == Kind::Var) out.push_back(t->name_);
    if (t->kind_ == Kind::Prod) {
      todo.push_back(t->r_.get());
      todo.push_back(t->l_.get());
    }
  }
  return out;
}

bool Term::linear() const {
  auto vs = variables();
  std::sort(vs.begin(), vs.end());
  return std::adjacent_find(vs.begin(), vs.end()) == vs.end();
}

bool operator==(const Term& a, const Term& b) {
  if (a.kind_ != b.kind_) return false;
  switch (a.kind_) {
    case Term::Kind::Var: return a.name_ == b.name_;
    case Term::Kind::Unit: return true;
    case Term::Kind::Prod: return *a.l_ == *b.l_ && *a.r_ == *b.r_;
  }
  return false;
}

namespace {

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at column " + std::to_string(pos_ + 1) + " in '" +
                     std::string(text_) + "'");
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }

  bool done() {
    skip();
    return pos_ == text_.size();
  }

  Term term() {
    skip();
    if (eat('(')) {
      Term a = term();
      expect('#');
      Term b = term();
      expect(')');
      return Term::prod(a, b);
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    if (start == pos_) fail("expected a term");
    std::string name(text_.substr(start, pos_ - start));
    if (!std::isalpha(static_cast<unsigned char>(name[0])) && name[0] != '_') {
      pos_ = start;
      fail("a variable must start with a letter");
    }
    if (name == "I") return Term::unit();
    return Term::var(std::move(name));
  }

  MorExpr seq() {
    MorExpr f = ten();
    while (eat('.')) f = MorExpr::compose(f, ten());
    return f;
  }

  MorExpr ten() {
    MorExpr f = post();
    while (eat('#')) f = MorExpr::tensor(f, post());
    return f;
  }

  MorExpr post() {
    MorExpr f = atom();
    while (eat('~')) f = f.inverse();
    return f;
  }

  MorExpr atom() {
    skip();
    if (pos_ >= text_.size()) fail("expected a morphism");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      MorExpr f = seq();
      expect(')');
      return f;
    }
    MorGen g;
    int arity = 0;
    switch (c) {
      case 'a': g.kind = MorKind::Alpha; arity = 3; break;
      case 'l': g.kind = MorKind::Lambda; arity = 1; break;
      case 'r': g.kind = MorKind::Rho; arity = 1; break;
      case 'x': g.kind = MorKind::Tau; arity = 2; break;
      case 'g': g.kind = MorKind::Gamma; arity = 3; break;
      case '1': g.kind = MorKind::Identity; arity = 1; break;
      default: fail(std::string("unknown generator '") + c + "'");
    }
    ++pos_;
    expect('(');
    for (int i = 0; i < arity; ++i) {
      if (i > 0) expect(',');
      g.at.push_back(term());
    }
    expect(')');
    return MorExpr::gen(std::move(g));
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Term Term::parse(std::string_view text) {
  Reader r(text);
  Term t = r.term();
  if (!r.done()) r.fail("unexpected trailing input");
  return t;
}

std::vector<Term> read_diagram(const Diagram& d, const std::vector<Term>& inputs) {
  if (static_cast<int>(inputs.size()) != d.inputs()) {
    throw ArityMismatch("diagram " + d.str() + " takes " + std::to_string(d.inputs()) +
                        " inputs, got " + std::to_string(inputs.size()) + " labels");
  }
  std::vector<Term> w = inputs;
  for (const Slice& s : d.slices()) {
    switch (s.gate) {
      case Gate::M:
        w[s.left] = Term::prod(w[s.left], w[s.left + 1]);
        w.erase(w.begin() + s.left + 1);
        break;
      case Gate::E: w.insert(w.begin() + s.left, Term::unit()); break;
      case Gate::S: std::swap(w[s.left], w[s.left + 1]); break;
    }
  }
  return w;
}

Term read_diagram(const Diagram& d, const std::vector<std::string>& order) {
  if (d.outputs() != 1) {
    throw ArityMismatch("diagram " + d.str() + " has " + std::to_string(d.outputs()) +
                        " outputs, expected 1");
  }
  std::vector<Term> in;
  for (const auto& v : order) in.push_back(Term::var(v));
  return read_diagram(d, in).front();
}

namespace {

// Gates building `t` whose leaves start on wire `at`; leaves sit in order.
void build(const Term& t, int at, std::vector<Slice>& out) {
  switch (t.kind()) {
    case Term::Kind::Var: return;
    case Term::Kind::Unit: out.push_back(Slice{at, Gate::E}); return;
    case Term::Kind::Prod:
      build(t.left(), at, out);
      build(t.right(), at + 1, out);
      out.push_back(Slice{at, Gate::M});
      return;
  }
}

}  // namespace

Diagram term_to_diagram(const Term& t, const std::vector<std::string>& order) {
  if (!t.linear()) throw NonLinearTerm("term " + t.str() + " uses a variable twice");
  const auto leaves = t.variables();
  std::set<std::string> seen;
  for (const auto& v : order) {
    if (!seen.insert(v).second) throw NonLinearTerm("variable order repeats " + v);
  }
  for (const auto& v : leaves) {
    if (!seen.count(v)) throw UnknownVariable("variable " + v + " is not in the input order");
  }
  if (leaves.size() != order.size()) {
    throw UnknownVariable("term " + t.str() + " does not use every variable of the order");
  }
  std::vector<std::string> cur = order;
  std::vector<Slice> chain;
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    std::size_t j = std::find(cur.begin() + i, cur.end(), leaves[i]) - cur.begin();
    while (j > i) {
      chain.push_back(Slice{static_cast<int>(j) - 1, Gate::S});
      std::swap(cur[j - 1], cur[j]);
      --j;
    }
  }
  build(t, 0, chain);
  return structural_normal_form(Diagram(static_cast<int>(order.size()), std::move(chain))).end();
}

Term MorGen::source() const {
  const auto& v = at;
  Term s, t;
  switch (kind) {
    case MorKind::Alpha:
      s = Term::prod(Term::prod(v[0], v[1]), v[2]);
      t = Term::prod(v[0], Term::prod(v[1], v[2]));
      break;
    case MorKind::Lambda: s = Term::prod(Term::unit(), v[0]); t = v[0]; break;
    case MorKind::Rho: s = Term::prod(v[0], Term::unit()); t = v[0]; break;
    case MorKind::Tau: s = Term::prod(v[0], v[1]); t = Term::prod(v[1], v[0]); break;
    case MorKind::Gamma:
      s = Term::prod(v[0], Term::prod(v[1], v[2]));
      t = Term::prod(v[1], Term::prod(v[0], v[2]));
      break;
    case MorKind::Identity: s = t = v[0]; break;
  }
  return inverted ? t : s;
}

Term MorGen::target() const {
  MorGen flipped = *this;
  flipped.inverted = !inverted;
  return flipped.source();
}

std::string MorGen::str() const {
  static const char* names[] = {"a", "l", "r", "x", "g", "1"};
  std::string s = std::string(names[static_cast<int>(kind)]) + "(";
  for (std::size_t i = 0; i < at.size(); ++i) s += (i ? "," : "") + at[i].str();
  return s + ")" + (inverted ? "~" : "");
}

std::string MorGen::rule() const {
  static const char* names[] = {"alpha", "l", "r", "tau", "gamma", ""};
  return names[static_cast<int>(kind)];
}

MorExpr MorExpr::gen(MorGen g) {
  MorExpr f;
  f.op_ = Op::Gen;
  f.src_ = g.source();
  f.tgt_ = g.target();
  f.gen_ = std::move(g);
  return f;
}

MorExpr MorExpr::compose(const MorExpr& f, const MorExpr& g) {
  if (f.target() != g.source()) {
    throw CompositionMismatch("cannot compose " + f.str() + " ending at " + f.target().str() +
                              " with " + g.str() + " starting at " + g.source().str());
  }
  MorExpr h;
  h.op_ = Op::Compose;
  h.a_ = std::make_shared<const MorExpr>(f);
  h.b_ = std::make_shared<const MorExpr>(g);
  h.src_ = f.source();
  h.tgt_ = g.target();
  return h;
}

MorExpr MorExpr::tensor(const MorExpr& f, const MorExpr& g) {
  MorExpr h;
  h.op_ = Op::Tensor;
  h.a_ = std::make_shared<const MorExpr>(f);
  h.b_ = std::make_shared<const MorExpr>(g);
  h.src_ = Term::prod(f.source(), g.source());
  h.tgt_ = Term::prod(f.target(), g.target());
  return h;
}

MorExpr MorExpr::parse(std::string_view text) {
  Reader r(text);
  MorExpr f = r.seq();
  if (!r.done()) r.fail("unexpected trailing input");
  return f;
}

MorExpr MorExpr::inverse() const {
  switch (op_) {
    case Op::Gen: {
      MorGen g = gen_;
      g.inverted = !g.inverted;
      return gen(std::move(g));
    }
    case Op::Compose: return compose(b_->inverse(), a_->inverse());
    case Op::Tensor: return tensor(a_->inverse(), b_->inverse());
  }
  return *this;
}

std::string MorExpr::str() const {
  switch (op_) {
    case Op::Gen: return gen_.str();
    case Op::Compose: return "(" + a_->str() + "." + b_->str() + ")";
    case Op::Tensor: return "(" + a_->str() + "#" + b_->str() + ")";
  }
  return "";
}

namespace {

void flatten_into(const MorExpr& f, std::vector<ContextualGen>& out) {
  switch (f.op()) {
    case MorExpr::Op::Gen:
      if (f.generator().kind != MorKind::Identity) {
        out.push_back({f.source(), f.target(), f.generator()});
      }
      return;
    case MorExpr::Op::Compose:
      flatten_into(f.first(), out);
      flatten_into(f.second(), out);
      return;
    case MorExpr::Op::Tensor: {
      std::vector<ContextualGen> a, b;
      flatten_into(f.first(), a);
      flatten_into(f.second(), b);
      const Term& right_src = f.second().source();
      const Term& left_tgt = f.first().target();
      for (auto& s : a) {
        out.push_back({Term::prod(s.source, right_src), Term::prod(s.target, right_src), s.gen});
      }
      for (auto& s : b) {
        out.push_back({Term::prod(left_tgt, s.source), Term::prod(left_tgt, s.target), s.gen});
      }
      return;
    }
  }
}

}  // namespace

std::vector<ContextualGen> flatten(const MorExpr& f) {
  std::vector<ContextualGen> out;
  flatten_into(f, out);
  return out;
}

}  // namespace smc
