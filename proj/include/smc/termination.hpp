#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "smc/diagram.hpp"
#include "smc/rewrite.hpp"

namespace smc {

// x -> A x + c with natural entries, read on positive integers.
class AffineMap {
 public:
  AffineMap() = default;
  AffineMap(int in_dim, int out_dim);
  static AffineMap identity(int n);

  int in_dim() const { return in_; }
  int out_dim() const { return out_; }
  long coeff(int row, int col) const { return a_[row * in_ + col]; }
  long& coeff(int row, int col) { return a_[row * in_ + col]; }
  long constant(int row) const { return c_[row]; }
  long& constant(int row) { return c_[row]; }

  std::vector<long> operator()(const std::vector<long>& x) const;

  // `first` then `second`
  friend AffineMap then(const AffineMap& first, const AffineMap& second);
  friend AffineMap direct_sum(const AffineMap& a, const AffineMap& b);
  friend bool operator==(const AffineMap&, const AffineMap&) = default;

  // "4x+2y+z", or "(2x+y+z, 2x+y)" for several outputs.
  std::string str() const;

 private:
  int in_ = 0;
  int out_ = 0;
  std::vector<long> a_;
  std::vector<long> c_;
};

struct Interpretation {
  AffineMap m, e, s;

  // [m](x,y) = 2x+y, [e] = 1, [s](x,y) = (x+y, x)
  static Interpretation standard();

  // Lines `m: 2x+y`, `s: (y, x+y)`, `e: 1`; unlisted gates keep the standard
  // value.
  static Interpretation parse(std::string_view text);

  const AffineMap& of(Gate g) const;
};

// Linear expressions over x, y, z (or x1, x2, ...) with natural coefficients.
AffineMap parse_affine(std::string_view text, int in_dim);

AffineMap interpret(const Diagram& d, const Interpretation& I = Interpretation::standard());

// f > g in the strict product order at every vector of positive integers.
bool strictly_dominates(const AffineMap& f, const AffineMap& g);

struct TerminationLine {
  std::string rule;
  AffineMap lhs;
  AffineMap rhs;
  bool decreasing = false;
};

struct TerminationReport {
  std::vector<TerminationLine> lines;
  bool all_pass = true;
  std::string str() const;
};

TerminationReport verify_termination(const RuleSet& rules,
                                     const Interpretation& I = Interpretation::standard());

}  // namespace smc
