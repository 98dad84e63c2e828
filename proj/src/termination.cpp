#include "smc/termination.hpp"

#include <cctype>
#include <sstream>

namespace smc {

AffineMap::AffineMap(int in_dim, int out_dim)
    : in_(in_dim), out_(out_dim), a_(static_cast<std::size_t>(in_dim) * out_dim, 0), c_(out_dim, 0) {}

AffineMap AffineMap::identity(int n) {
  AffineMap f(n, n);
  for (int i = 0; i < n; ++i) f.coeff(i, i) = 1;
  return f;
}

std::vector<long> AffineMap::operator()(const std::vector<long>& x) const {
  if (static_cast<int>(x.size()) != in_) throw DimensionMismatch("argument has wrong dimension");
  std::vector<long> y(c_);
  for (int r = 0; r < out_; ++r) {
    for (int c = 0; c < in_; ++c) y[r] += coeff(r, c) * x[c];
  }
  return y;
}

AffineMap then(const AffineMap& first, const AffineMap& second) {
  if (first.out_ != second.in_) throw DimensionMismatch("cannot compose affine maps");
  AffineMap h(first.in_, second.out_);
  for (int r = 0; r < second.out_; ++r) {
    long k = second.constant(r);
    for (int j = 0; j < second.in_; ++j) {
      const long w = second.coeff(r, j);
      k += w * first.constant(j);
      for (int c = 0; c < first.in_; ++c) h.coeff(r, c) += w * first.coeff(j, c);
    }
    h.constant(r) = k;
  }
  return h;
}

AffineMap direct_sum(const AffineMap& a, const AffineMap& b) {
  AffineMap h(a.in_ + b.in_, a.out_ + b.out_);
  for (int r = 0; r < a.out_; ++r) {
    for (int c = 0; c < a.in_; ++c) h.coeff(r, c) = a.coeff(r, c);
    h.constant(r) = a.constant(r);
  }
  for (int r = 0; r < b.out_; ++r) {
    for (int c = 0; c < b.in_; ++c) h.coeff(a.out_ + r, a.in_ + c) = b.coeff(r, c);
    h.constant(a.out_ + r) = b.constant(r);
  }
  return h;
}

namespace {

std::string var_name(int i, int n) {
  if (n <= 3) return std::string(1, "xyz"[i]);
  return "x" + std::to_string(i + 1);
}

}  // namespace

std::string AffineMap::str() const {
  std::ostringstream os;
  if (out_ != 1) os << '(';
  for (int r = 0; r < out_; ++r) {
    if (r > 0) os << ", ";
    bool any = false;
    for (int c = 0; c < in_; ++c) {
      const long k = coeff(r, c);
      if (k == 0) continue;
      if (any) os << '+';
      if (k != 1) os << k;
      os << var_name(c, in_);
      any = true;
    }
    if (constant(r) != 0 || !any) {
      if (any) os << '+';
      os << constant(r);
    }
  }
  if (out_ != 1) os << ')';
  return os.str();
}

Interpretation Interpretation::standard() {
  Interpretation I;
  I.m = parse_affine("2x+y", 2);
  I.e = parse_affine("1", 0);
  I.s = parse_affine("(x+y, x)", 2);
  return I;
}

const AffineMap& Interpretation::of(Gate g) const {
  switch (g) {
    case Gate::M: return m;
    case Gate::E: return e;
    case Gate::S: return s;
  }
  return m;
}

namespace {

class AffineParser {
 public:
  AffineParser(std::string_view text, int in_dim) : text_(text), in_(in_dim) {}

  AffineMap run() {
    std::vector<std::vector<long>> rows;
    skip();
    if (peek() == '(') {
      ++pos_;
      rows.push_back(row());
      while (eat(',')) rows.push_back(row());
      if (!eat(')')) fail("expected ')'");
    } else {
      rows.push_back(row());
    }
    skip();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    AffineMap f(in_, static_cast<int>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (int c = 0; c < in_; ++c) f.coeff(static_cast<int>(r), c) = rows[r][c];
      f.constant(static_cast<int>(r)) = rows[r][in_];
    }
    return f;
  }

 private:
  std::string_view text_;
  int in_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) {
    throw ParseError(what + " at column " + std::to_string(pos_ + 1) + " in '" +
                     std::string(text_) + "'");
  }
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  char peek() {
    skip();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  bool eat(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

  int variable() {
    const char c = text_[pos_++];
    int idx = -1;
    if (c == 'x' && pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      int v = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        v = v * 10 + (text_[pos_++] - '0');
      }
      idx = v - 1;
    } else if (c == 'x' || c == 'y' || c == 'z') {
      idx = c == 'x' ? 0 : (c == 'y' ? 1 : 2);
    }
    if (idx < 0 || idx >= in_) fail(std::string("unknown variable '") + c + "'");
    return idx;
  }

  // natural-coefficient monomials joined by '+'
  std::vector<long> row() {
    std::vector<long> r(in_ + 1, 0);
    do {
      skip();
      long k = 1;
      bool number = false;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        k = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          k = k * 10 + (text_[pos_++] - '0');
        }
        number = true;
      }
      eat('*');
      skip();
      if (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
        r[variable()] += k;
      } else if (number) {
        r[in_] += k;
      } else {
        fail("expected a term");
      }
    } while (eat('+'));
    return r;
  }
};

}  // namespace

AffineMap parse_affine(std::string_view text, int in_dim) { return AffineParser(text, in_dim).run(); }

Interpretation Interpretation::parse(std::string_view text) {
  Interpretation I = standard();
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '%') continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw ParseError("expected 'gate: map' in '" + line + "'");
    std::string gate = line.substr(first, colon - first);
    while (!gate.empty() && std::isspace(static_cast<unsigned char>(gate.back()))) gate.pop_back();
    const std::string body = line.substr(colon + 1);
    if (gate == "m" || gate == "s" || gate == "e") {
      const Gate g = gate == "m" ? Gate::M : (gate == "s" ? Gate::S : Gate::E);
      AffineMap f = parse_affine(body, gate_in(g));
      if (f.out_dim() != gate_out(g)) throw DimensionMismatch("gate " + gate + " has wrong arity");
      (g == Gate::M ? I.m : (g == Gate::S ? I.s : I.e)) = f;
    } else {
      throw ParseError("unknown gate '" + gate + "'");
    }
  }
  return I;
}

AffineMap interpret(const Diagram& d, const Interpretation& I) {
  AffineMap f = AffineMap::identity(d.inputs());
  int w = d.inputs();
  for (const Slice& s : d.slices()) {
    const int right = w - s.left - gate_in(s.gate);
    AffineMap layer = direct_sum(direct_sum(AffineMap::identity(s.left), I.of(s.gate)),
                                 AffineMap::identity(right));
    f = then(f, layer);
    w += gate_out(s.gate) - gate_in(s.gate);
  }
  return f;
}

bool strictly_dominates(const AffineMap& f, const AffineMap& g) {
  if (f.in_dim() != g.in_dim() || f.out_dim() != g.out_dim()) {
    throw DimensionMismatch("compared maps have different dimensions");
  }
  // Strict product order: no coordinate may drop anywhere, and with natural
  // coefficient gaps a coordinate that grows at (1,...,1) grows everywhere.
  bool grows = false;
  for (int r = 0; r < f.out_dim(); ++r) {
    long at_ones = f.constant(r) - g.constant(r);
    if (at_ones < 0) return false;
    for (int c = 0; c < f.in_dim(); ++c) {
      const long diff = f.coeff(r, c) - g.coeff(r, c);
      if (diff < 0) return false;
      at_ones += diff;
    }
    grows = grows || at_ones >= 1;
  }
  return grows;
}

TerminationReport verify_termination(const RuleSet& rules, const Interpretation& I) {
  TerminationReport rep;
  for (const auto& r : rules.rules) {
    TerminationLine line;
    line.rule = r->name;
    line.lhs = interpret(r->lhs, I);
    line.rhs = interpret(r->rhs, I);
    line.decreasing = strictly_dominates(line.lhs, line.rhs);
    rep.all_pass = rep.all_pass && line.decreasing;
    rep.lines.push_back(std::move(line));
  }
  return rep;
}

std::string TerminationReport::str() const {
  std::ostringstream os;
  int pass = 0;
  for (const auto& l : lines) {
    os << l.rule << ": " << l.lhs.str() << (l.decreasing ? " > " : " !> ") << l.rhs.str()
       << (l.decreasing ? "  ok" : "  FAIL") << '\n';
    pass += l.decreasing;
  }
  os << pass << '/' << lines.size() << " rules decrease\n";
  return os.str();
}

}  // namespace smc
