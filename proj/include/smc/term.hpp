#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "smc/diagram.hpp"

namespace smc {

// Object expressions of a free monoidal category: variables, the unit I and
// products, written `x`, `I` and `(x#y)`.
class Term {
 public:
  enum class Kind { Var, Unit, Prod };

  static Term var(std::string name);
  static Term unit();
  static Term prod(const Term& a, const Term& b);
  static Term parse(std::string_view text);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const Term& left() const { return *l_; }
  const Term& right() const { return *r_; }

  std::string str() const;
  // Variables in left-to-right leaf order, repeats included.
  std::vector<std::string> variables() const;
  bool linear() const;

  friend bool operator==(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

 private:
  Kind kind_ = Kind::Unit;
  std::string name_;
  std::shared_ptr<const Term> l_, r_;
};

// Labels flowing out of `d` when its inputs carry `inputs`: e emits I, m
// joins its two inputs and s crosses them.
std::vector<Term> read_diagram(const Diagram& d, const std::vector<Term>& inputs);
Term read_diagram(const Diagram& d, const std::vector<std::string>& order);

// The primary cell of a linear term: the structural normal form among the
// diagrams n -> 1 reading as `t` under the input labels `order`.
// Throws NonLinearTerm or UnknownVariable.
Diagram term_to_diagram(const Term& t, const std::vector<std::string>& order);

enum class MorKind { Alpha, Lambda, Rho, Tau, Gamma, Identity };

// A generating isomorphism at given objects, possibly formally inverted.
struct MorGen {
  MorKind kind = MorKind::Identity;
  std::vector<Term> at;
  bool inverted = false;

  Term source() const;
  Term target() const;
  std::string str() const;
  // Name of the rule this generator corresponds to ("" for identities).
  std::string rule() const;
};

// Composites `f.g` (f first), tensors `f#g` and inverses `f~` over the
// generators a(,,) l() r() x(,) g(,,) 1().
class MorExpr {
 public:
  enum class Op { Gen, Compose, Tensor };

  static MorExpr gen(MorGen g);
  // Throws CompositionMismatch when f's target is not g's source.
  static MorExpr compose(const MorExpr& f, const MorExpr& g);
  static MorExpr tensor(const MorExpr& f, const MorExpr& g);
  static MorExpr parse(std::string_view text);

  Op op() const { return op_; }
  const MorGen& generator() const { return gen_; }
  const MorExpr& first() const { return *a_; }
  const MorExpr& second() const { return *b_; }

  const Term& source() const { return src_; }
  const Term& target() const { return tgt_; }
  MorExpr inverse() const;
  std::string str() const;

 private:
  Op op_ = Op::Gen;
  MorGen gen_;
  std::shared_ptr<const MorExpr> a_, b_;
  Term src_, tgt_;
};

// A generator acting inside a larger object: whole source, whole target and
// the generator itself.
struct ContextualGen {
  Term source;
  Term target;
  MorGen gen;
};

// Flattens an expression into generator steps, each seen on whole objects.
// Identities disappear.
std::vector<ContextualGen> flatten(const MorExpr& f);

}  // namespace smc
