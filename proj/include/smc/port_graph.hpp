#pragma once

#include <cstdint>
#include <vector>

#include "smc/diagram.hpp"

namespace smc {

using GateSet = std::uint64_t;

inline GateSet bit(int i) { return GateSet{1} << i; }

// A source port: gate == -1 names input pin `index`.
struct Port {
  int gate = -1;
  int index = 0;
  friend bool operator==(const Port&, const Port&) = default;
};

// Wiring view of a diagram. Gate k is the k-th slice of the canonical form.
struct PortGraph {
  int inputs = 0;
  std::vector<Gate> gates;
  std::vector<std::vector<Port>> in_src;  // per gate, per input port
  std::vector<Port> out_src;              // per output pin

  static PortGraph of(const Diagram& d);

  // Schedules the wiring bottom-up and returns the canonical diagram.
  Diagram rebuild() const;
};

// Must-precede relation of a canonical diagram: wire dependencies plus the
// constraint keeping an e gate below a swap gate whose outputs enclose it.
struct Precedence {
  std::vector<GateSet> pred;  // direct
  std::vector<GateSet> anc;   // strict transitive
  std::vector<GateSet> desc;  // strict transitive
  std::vector<GateSet> wire_nbr;  // gates sharing a wire

  static Precedence of(const Diagram& d);

  GateSet ancestors(GateSet s) const;
  GateSet descendants(GateSet s) const;
  bool convex(GateSet s) const;
};

}  // namespace smc
