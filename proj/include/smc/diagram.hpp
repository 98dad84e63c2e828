#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "smc/error.hpp"

namespace smc {

enum class Gate : std::uint8_t { M, E, S };

constexpr int gate_in(Gate g) { return g == Gate::E ? 0 : 2; }
constexpr int gate_out(Gate g) { return g == Gate::S ? 2 : 1; }
char gate_char(Gate g);

// One gate whiskered by `left` identity wires; the right whisker is implied
// by the width of the frame the slice lives in.
struct Slice {
  int left = 0;
  Gate gate = Gate::M;
  friend bool operator==(const Slice&, const Slice&) = default;
};

// Gate and width limit applied to every constructed diagram.
int capacity();
void set_capacity(int cap);

class Diagram {
 public:
  Diagram() = default;

  // Validates chaining and stores the canonical schedule.
  Diagram(int inputs, std::vector<Slice> slices);

  static Diagram identity(int n);
  static Diagram gate(Gate g);
  static Diagram parse(std::string_view text);
  // Like the constructor; also reports which input slice landed where
  // (order[k] = input index of the k-th stored slice).
  static Diagram scheduled(int inputs, std::vector<Slice> slices, std::vector<int>& order);

  int inputs() const { return p_; }
  int outputs() const { return q_; }
  int size() const { return static_cast<int>(slices_.size()); }
  bool empty() const { return slices_.empty(); }
  const std::vector<Slice>& slices() const { return slices_; }
  const Slice& operator[](int i) const { return slices_[i]; }

  // Frame width before slice i (i == size() gives the output width).
  int width_before(int i) const;
  int max_width() const;

  std::string str() const;
  std::size_t hash() const;

  friend bool operator==(const Diagram& a, const Diagram& b) {
    return a.p_ == b.p_ && a.q_ == b.q_ && a.slices_ == b.slices_;
  }
  friend bool operator<(const Diagram& a, const Diagram& b);

 private:
  int p_ = 0;
  int q_ = 0;
  std::vector<Slice> slices_;
};

Diagram identity(int n);
Diagram seq_compose(const Diagram& top, const Diagram& bottom);
Diagram par_compose(const Diagram& left, const Diagram& right);
// id_a * d * id_b
Diagram whisker(int a, const Diagram& d, int b);
bool equals(const Diagram& a, const Diagram& b);

// A one-hole context: plug(x) = top ; (id_left * x * id_right) ; bottom.
struct Whisker {
  Diagram top;
  int left = 0;
  int right = 0;
  Diagram bottom;

  // The trivial context around diagrams p -> q.
  static Whisker around(int p, int q);
  Diagram plug(const Diagram& x) const;
  // Like plug; `hole` receives the canonical gate numbers of x's gates.
  Diagram plug(const Diagram& x, std::uint64_t& hole) const;
  // The context whose hole is `inner`'s hole placed in this one.
  Whisker compose(const Whisker& inner) const;
  std::string str() const;
};

// Raw slice chains: validation and canonical scheduling.

// Returns the output width, throws MalformedDiagram if a slice does not fit.
int check_chain(int inputs, const std::vector<Slice>& slices);

struct Schedule {
  std::vector<Slice> slices;
  // order[k] = index in the input chain of the gate emitted k-th
  std::vector<int> order;
};

// Leftmost-earliest schedule of a valid chain.
Schedule canonical_schedule(int inputs, const std::vector<Slice>& slices);

Diagram canonical_form(const Diagram& d);

// Offset of slice `idx` once moved to the front of the chain by interchange
// moves, or -1 when a predecessor blocks it.
int front_offset(const std::vector<Slice>& slices, int idx);

// Tries to exchange adjacent slices (upper, lower) in place. Returns false if
// they depend on each other.
bool exchange(Slice& upper, Slice& lower);

// Reorders a chain to follow `order` (a permutation of slice indices) using
// adjacent exchanges only. Returns false if the order violates a dependency.
bool reorder_chain(std::vector<Slice>& slices, const std::vector<int>& order);

// All pairwise-unequal canonical diagrams p -> q with at most max_gates gates,
// ordered by gate count then slice sequence.
std::vector<Diagram> enumerate_diagrams(int p, int q, int max_gates);

// Diagrams p -> q for every q, grouped the same way.
std::vector<Diagram> enumerate_diagrams_any(int p, int max_gates);

// Diagrams p -> q for every q <= max_q.
std::vector<Diagram> enumerate_diagrams_upto(int p, int max_q, int max_gates);

}  // namespace smc

template <>
struct std::hash<smc::Diagram> {
  std::size_t operator()(const smc::Diagram& d) const { return d.hash(); }
};
