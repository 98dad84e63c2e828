#include "smc/diagram.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>
#include <unordered_set>

namespace smc {

namespace {

std::atomic<int> g_capacity{64};

}  // namespace

char gate_char(Gate g) {
  switch (g) {
    case Gate::M: return 'm';
    case Gate::E: return 'e';
    case Gate::S: return 's';
  }
  return '?';
}

int capacity() { return g_capacity.load(); }
void set_capacity(int cap) { g_capacity.store(cap); }

int check_chain(int inputs, const std::vector<Slice>& slices) {
  if (inputs < 0) throw MalformedDiagram("negative input count");
  int w = inputs;
  for (std::size_t i = 0; i < slices.size(); ++i) {
    const Slice& s = slices[i];
    if (s.left < 0 || s.left + gate_in(s.gate) > w) {
      std::ostringstream os;
      os << "slice " << i << " (" << gate_char(s.gate) << " at " << s.left
         << ") does not fit width " << w;
      throw MalformedDiagram(os.str());
    }
    w += gate_out(s.gate) - gate_in(s.gate);
  }
  return w;
}

bool exchange(Slice& upper, Slice& lower) {
  const int o = lower.left;
  const int in_g = gate_in(lower.gate);
  const int out_g = gate_out(lower.gate);
  const int in_h = gate_in(upper.gate);
  const int out_h = gate_out(upper.gate);
  if (o + in_g <= upper.left) {
    Slice h = upper;
    h.left += out_g - in_g;
    upper = lower;
    lower = h;
    return true;
  }
  if (o >= upper.left + out_h) {
    Slice g = lower;
    g.left = o - out_h + in_h;
    lower = upper;
    upper = g;
    return true;
  }
  return false;
}

int front_offset(const std::vector<Slice>& slices, int idx) {
  Slice g = slices[idx];
  for (int j = idx - 1; j >= 0; --j) {
    Slice h = slices[j];
    if (!exchange(h, g)) return -1;
    // after the exchange `h` holds the moved gate
    g = h;
  }
  return g.left;
}

namespace {

void move_to_front(std::vector<Slice>& sl, std::vector<int>& ids, int idx) {
  for (int j = idx; j > 0; --j) {
    exchange(sl[j - 1], sl[j]);
    std::swap(ids[j - 1], ids[j]);
  }
}

// True when zero-input gate `y` sits left of zero-input gate `x`, both able
// to reach the front at the same offset.
bool emitted_left_of(const std::vector<Slice>& sl, int y, int x, int offset) {
  std::vector<Slice> copy = sl;
  std::vector<int> ids(sl.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
  move_to_front(copy, ids, x);
  copy.erase(copy.begin());
  ids.erase(ids.begin());
  int pos = static_cast<int>(std::find(ids.begin(), ids.end(), y) - ids.begin());
  // once x is emitted, y keeps the offset only if it lies left of x
  return front_offset(copy, pos) == offset;
}

}  // namespace

Schedule canonical_schedule(int inputs, const std::vector<Slice>& slices) {
  (void)inputs;
  std::vector<Slice> rem = slices;
  std::vector<int> ids(slices.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
  Schedule out;
  out.slices.reserve(slices.size());
  out.order.reserve(slices.size());
  std::vector<int> offs(rem.size());
  while (!rem.empty()) {
    int best = -1;
    int best_off = 0;
    bool best_zero = false;
    const int n = static_cast<int>(rem.size());
    for (int i = 0; i < n; ++i) {
      offs[i] = front_offset(rem, i);
      if (offs[i] < 0) continue;
      const bool zero = gate_in(rem[i].gate) == 0;
      if (best < 0 || offs[i] < best_off || (offs[i] == best_off && zero && !best_zero)) {
        best = i;
        best_off = offs[i];
        best_zero = zero;
      }
    }
    if (best_zero) {
      for (int i = best + 1; i < n; ++i) {
        if (offs[i] == best_off && gate_in(rem[i].gate) == 0 &&
            emitted_left_of(rem, i, best, best_off)) {
          best = i;
        }
      }
    }
    move_to_front(rem, ids, best);
    out.slices.push_back(rem.front());
    out.order.push_back(ids.front());
    rem.erase(rem.begin());
    ids.erase(ids.begin());
  }
  return out;
}

bool reorder_chain(std::vector<Slice>& slices, const std::vector<int>& order) {
  const int n = static_cast<int>(slices.size());
  std::vector<int> rank(n);
  for (int k = 0; k < n; ++k) rank[order[k]] = k;
  std::vector<int> cur(n);
  for (int i = 0; i < n; ++i) cur[i] = rank[i];
  // insertion sort by target rank, using exchanges only
  for (int i = 1; i < n; ++i) {
    for (int j = i; j > 0 && cur[j - 1] > cur[j]; --j) {
      if (!exchange(slices[j - 1], slices[j])) return false;
      std::swap(cur[j - 1], cur[j]);
    }
  }
  return true;
}

namespace {

int checked_width(int inputs, const std::vector<Slice>& slices) {
  const int q = check_chain(inputs, slices);
  const int cap = capacity();
  if (static_cast<int>(slices.size()) > cap) {
    throw CapacityExceeded("gate count " + std::to_string(slices.size()) +
                           " exceeds capacity " + std::to_string(cap));
  }
  int w = inputs;
  int widest = w;
  for (const Slice& s : slices) {
    w += gate_out(s.gate) - gate_in(s.gate);
    widest = std::max(widest, w);
  }
  if (widest > cap) {
    throw CapacityExceeded("width " + std::to_string(widest) +
                           " exceeds capacity " + std::to_string(cap));
  }
  return q;
}

}  // namespace

Diagram::Diagram(int inputs, std::vector<Slice> slices) {
  q_ = checked_width(inputs, slices);
  p_ = inputs;
  slices_ = canonical_schedule(inputs, slices).slices;
}

Diagram Diagram::scheduled(int inputs, std::vector<Slice> slices, std::vector<int>& order) {
  Diagram d;
  d.q_ = checked_width(inputs, slices);
  d.p_ = inputs;
  Schedule sc = canonical_schedule(inputs, slices);
  d.slices_ = std::move(sc.slices);
  order = std::move(sc.order);
  return d;
}

Diagram Diagram::identity(int n) { return Diagram(n, {}); }

Diagram Diagram::gate(Gate g) { return Diagram(gate_in(g), {Slice{0, g}}); }

int Diagram::width_before(int i) const {
  int w = p_;
  for (int k = 0; k < i; ++k) {
    w += gate_out(slices_[k].gate) - gate_in(slices_[k].gate);
  }
  return w;
}

int Diagram::max_width() const {
  int w = p_;
  int widest = w;
  for (const Slice& s : slices_) {
    w += gate_out(s.gate) - gate_in(s.gate);
    widest = std::max(widest, w);
  }
  return widest;
}

std::string Diagram::str() const {
  if (slices_.empty()) return "id" + std::to_string(p_);
  std::ostringstream os;
  int w = p_;
  const bool many = slices_.size() > 1;
  for (std::size_t i = 0; i < slices_.size(); ++i) {
    const Slice& s = slices_[i];
    const int right = w - s.left - gate_in(s.gate);
    const bool whiskered = s.left > 0 || right > 0;
    if (i > 0) os << ';';
    if (many && whiskered) os << '(';
    if (s.left > 0) os << "id" << s.left << '*';
    os << gate_char(s.gate);
    if (right > 0) os << "*id" << right;
    if (many && whiskered) os << ')';
    w += gate_out(s.gate) - gate_in(s.gate);
  }
  return os.str();
}

std::size_t Diagram::hash() const {
  std::size_t h = static_cast<std::size_t>(p_) * 0x9e3779b97f4a7c15ULL;
  h ^= static_cast<std::size_t>(q_) + 0x7f4a7c15 + (h << 6) + (h >> 2);
  for (const Slice& s : slices_) {
    std::size_t v = static_cast<std::size_t>(s.left) * 3 + static_cast<std::size_t>(s.gate);
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

bool operator<(const Diagram& a, const Diagram& b) {
  if (a.p_ != b.p_) return a.p_ < b.p_;
  if (a.q_ != b.q_) return a.q_ < b.q_;
  if (a.slices_.size() != b.slices_.size()) return a.slices_.size() < b.slices_.size();
  for (std::size_t i = 0; i < a.slices_.size(); ++i) {
    const Slice& x = a.slices_[i];
    const Slice& y = b.slices_[i];
    if (x.left != y.left) return x.left < y.left;
    if (x.gate != y.gate) return x.gate < y.gate;
  }
  return false;
}

Diagram identity(int n) { return Diagram::identity(n); }

Diagram seq_compose(const Diagram& top, const Diagram& bottom) {
  if (top.outputs() != bottom.inputs()) {
    throw ArityMismatch("sequential composition of " + std::to_string(top.outputs()) +
                        " outputs with " + std::to_string(bottom.inputs()) + " inputs");
  }
  std::vector<Slice> sl = top.slices();
  sl.insert(sl.end(), bottom.slices().begin(), bottom.slices().end());
  return Diagram(top.inputs(), std::move(sl));
}

Diagram par_compose(const Diagram& left, const Diagram& right) {
  std::vector<Slice> sl = left.slices();
  for (Slice s : right.slices()) {
    s.left += left.outputs();
    sl.push_back(s);
  }
  return Diagram(left.inputs() + right.inputs(), std::move(sl));
}

Diagram whisker(int a, const Diagram& d, int b) {
  std::vector<Slice> sl;
  sl.reserve(d.size());
  for (Slice s : d.slices()) {
    s.left += a;
    sl.push_back(s);
  }
  return Diagram(a + d.inputs() + b, std::move(sl));
}

bool equals(const Diagram& a, const Diagram& b) { return a == b; }

Diagram canonical_form(const Diagram& d) {
  check_chain(d.inputs(), d.slices());
  return Diagram(d.inputs(), d.slices());
}

namespace {

// Keeps only diagrams that can still end with between q_lo and q_hi outputs.
std::vector<std::vector<Diagram>> layers(int p, int q_lo, int q_hi, int max_gates) {
  std::vector<std::vector<Diagram>> out;
  std::unordered_set<Diagram> seen;
  out.push_back({Diagram::identity(p)});
  seen.insert(out.back().front());
  for (int k = 1; k <= max_gates; ++k) {
    std::vector<Diagram> next;
    const int left_after = max_gates - k;
    for (const Diagram& d : out.back()) {
      const int w = d.outputs();
      for (Gate g : {Gate::M, Gate::E, Gate::S}) {
        const int nw = w + gate_out(g) - gate_in(g);
        if (nw + left_after < q_lo || nw - left_after > q_hi) continue;
        for (int left = 0; left + gate_in(g) <= w; ++left) {
          std::vector<Slice> sl = d.slices();
          sl.push_back(Slice{left, g});
          Diagram nd(p, std::move(sl));
          if (seen.insert(nd).second) next.push_back(std::move(nd));
        }
      }
    }
    std::sort(next.begin(), next.end());
    out.push_back(std::move(next));
  }
  return out;
}

}  // namespace

std::vector<Diagram> enumerate_diagrams(int p, int q, int max_gates) {
  std::vector<Diagram> res;
  for (auto& layer : layers(p, q, q, max_gates)) {
    for (auto& d : layer) {
      if (d.outputs() == q) res.push_back(std::move(d));
    }
  }
  return res;
}

std::vector<Diagram> enumerate_diagrams_any(int p, int max_gates) {
  std::vector<Diagram> res;
  for (auto& layer : layers(p, 0, p + max_gates, max_gates)) {
    for (auto& d : layer) res.push_back(std::move(d));
  }
  return res;
}

std::vector<Diagram> enumerate_diagrams_upto(int p, int max_q, int max_gates) {
  std::vector<Diagram> res;
  for (auto& layer : layers(p, 0, max_q, max_gates)) {
    for (auto& d : layer) {
      if (d.outputs() <= max_q) res.push_back(std::move(d));
    }
  }
  return res;
}

}  // namespace smc

namespace smc {

Whisker Whisker::around(int p, int q) {
  Whisker w;
  w.top = identity(p);
  w.bottom = identity(q);
  return w;
}

Diagram Whisker::plug(const Diagram& x) const {
  std::uint64_t hole = 0;
  return plug(x, hole);
}

Diagram Whisker::plug(const Diagram& x, std::uint64_t& hole) const {
  if (top.outputs() != left + x.inputs() + right ||
      bottom.inputs() != left + x.outputs() + right) {
    throw ArityMismatch("context " + str() + " does not fit " + x.str());
  }
  std::vector<Slice> chain = top.slices();
  for (const Slice& s : x.slices()) chain.push_back(Slice{s.left + left, s.gate});
  for (const Slice& s : bottom.slices()) chain.push_back(s);
  std::vector<int> order;
  Diagram d = Diagram::scheduled(top.inputs(), std::move(chain), order);
  const int lo = top.size(), hi = top.size() + x.size();
  hole = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (order[k] >= lo && order[k] < hi) hole |= std::uint64_t{1} << k;
  }
  return d;
}

Whisker Whisker::compose(const Whisker& inner) const {
  Whisker w;
  w.top = seq_compose(top, whisker(left, inner.top, right));
  w.left = left + inner.left;
  w.right = inner.right + right;
  w.bottom = seq_compose(whisker(left, inner.bottom, right), bottom);
  return w;
}

std::string Whisker::str() const {
  std::ostringstream os;
  os << top.str() << " | " << left << " | " << right << " | " << bottom.str();
  return os.str();
}

}  // namespace smc
