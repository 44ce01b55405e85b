#pragma once

// Knot diagrams as planar-diagram (PD) codes.
//
// Each crossing is a 4-tuple of edge labels listed counterclockwise, starting
// from the incoming under-strand: X[a,b,c,d] has the under-strand running
// a -> c and the over-strand joining b and d. The crossing is positive when
// the over-strand runs d -> b, negative when it runs b -> d.

#include <algorithm>
#include <array>
#include <cstdlib>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gleamlab/error.hpp"

namespace gleamlab {

using PdCrossing = std::array<int, 4>;
using PdCode = std::vector<PdCrossing>;

namespace detail {

class UnionFind {
 public:
  int find(int x) {
    auto [it, inserted] = parent_.try_emplace(x, x);
    if (it->second == x) return x;
    int root = find(it->second);
    parent_[x] = root;
    return root;
  }
  void unite(int a, int b) {
    int ra = find(a), rb = find(b);
    if (ra != rb) parent_[std::max(ra, rb)] = std::min(ra, rb);
  }

 private:
  std::map<int, int> parent_;
};

// A crossing viewed as a two-strand braid generator with both strands
// running upward: bottom inputs (left, right), top outputs (left, right).
// The left input always leaves at the top right.
struct BraidView {
  int left_in, right_in, left_out, right_out;
};

inline BraidView braid_view(const PdCrossing& x, int sign) {
  if (sign > 0) return {x[3], x[0], x[2], x[1]};
  return {x[0], x[1], x[3], x[2]};
}

inline PdCrossing braid_crossing(int sign, int left_in, int right_in, int left_out, int right_out) {
  if (sign > 0) return {right_in, right_out, left_out, left_in};
  return {left_in, right_in, right_out, left_out};
}

}  // namespace detail

/// A validated single-component knot diagram. Edge labels are 1..2c in
/// traversal order; crossing order is preserved from construction so that
/// crossing ids (1-based) stay meaningful to callers.
class KnotDiagram {
 public:
  KnotDiagram() = default;

  static KnotDiagram unknot() { return KnotDiagram(); }

  /// Validates and canonicalizes a raw PD code. Throws ParseError on
  /// malformed input: bad label multiplicities, multiple components,
  /// non-planar tuples or inconsistent under-strand orientation.
  static KnotDiagram from_pd(const PdCode& raw);

  const PdCode& crossings() const { return crossings_; }
  const std::vector<int>& signs() const { return signs_; }
  std::size_t crossing_count() const { return crossings_.size(); }
  bool is_trivial_diagram() const { return crossings_.empty(); }

  // 1-based crossing id.
  int sign(std::size_t id) const {
    check_id(id);
    return signs_[id - 1];
  }

  void check_id(std::size_t id) const {
    if (id == 0 || id > crossings_.size()) {
      throw ParseError("crossing id " + std::to_string(id) + " not found (diagram has " +
                       std::to_string(crossings_.size()) + " crossings)");
    }
  }

  int max_label() const { return static_cast<int>(2 * crossings_.size()); }

  // Crossing-order independent key; equal keys mean identical PD codes.
  std::string canonical_key() const {
    PdCode sorted = crossings_;
    std::sort(sorted.begin(), sorted.end());
    std::ostringstream os;
    os << "pd" << sorted.size();
    for (const auto& x : sorted) os << ';' << x[0] << ',' << x[1] << ',' << x[2] << ',' << x[3];
    return os.str();
  }

  friend bool operator==(const KnotDiagram& a, const KnotDiagram& b) {
    return a.canonical_key() == b.canonical_key();
  }

  // "X a b c d" per line, in stored order.
  std::string to_pd_text() const {
    std::ostringstream os;
    for (const auto& x : crossings_) os << "X " << x[0] << ' ' << x[1] << ' ' << x[2] << ' ' << x[3] << '\n';
    return os.str();
  }

 private:
  PdCode crossings_;
  std::vector<int> signs_;
};

inline KnotDiagram KnotDiagram::from_pd(const PdCode& raw) {
  KnotDiagram d;
  const std::size_t n = raw.size();
  if (n == 0) return d;

  // Label multiplicities and dart pairing.
  std::map<int, std::vector<std::pair<std::size_t, int>>> occurrences;
  for (std::size_t i = 0; i < n; ++i) {
    for (int p = 0; p < 4; ++p) {
      int label = raw[i][p];
      if (label <= 0) throw ParseError("edge label " + std::to_string(label) + " is not positive");
      occurrences[label].emplace_back(i, p);
    }
  }
  for (const auto& [label, occ] : occurrences) {
    if (occ.size() != 2) {
      throw ParseError("edge label " + std::to_string(label) + " occurs " + std::to_string(occ.size()) +
                       " times (expected 2)");
    }
  }
  auto other_end = [&](std::size_t x, int p) {
    const auto& occ = occurrences.at(raw[x][p]);
    return (occ[0].first == x && occ[0].second == p) ? occ[1] : occ[0];
  };

  // Components: strands pass straight through each crossing (a-c, b-d).
  detail::UnionFind uf;
  for (const auto& x : raw) {
    uf.unite(x[0], x[2]);
    uf.unite(x[1], x[3]);
  }
  std::set<int> roots;
  for (const auto& [label, occ] : occurrences) roots.insert(uf.find(label));
  if (roots.size() != 1) throw ParseError("component count " + std::to_string(roots.size()));

  // Faces: corner (x,p) lies between positions p and p+1; walking along the
  // edge at p+1 reaches corner other_end(x, p+1) of the same face.
  {
    std::vector<char> seen(4 * n, 0);
    std::size_t faces = 0;
    for (std::size_t start = 0; start < 4 * n; ++start) {
      if (seen[start]) continue;
      ++faces;
      std::size_t cur = start;
      while (!seen[cur]) {
        seen[cur] = 1;
        auto [y, j] = other_end(cur / 4, static_cast<int>((cur % 4 + 1) % 4));
        cur = 4 * y + static_cast<std::size_t>(j);
      }
    }
    if (faces != n + 2) {
      throw ParseError("PD code is not planar: " + std::to_string(faces) + " faces, expected " +
                       std::to_string(n + 2));
    }
  }

  // Orientation: enter crossing 0 along its incoming under-strand and walk.
  std::vector<int> sign(n, 0);
  std::vector<int> edge_order;
  edge_order.reserve(2 * n);
  std::size_t x = 0;
  int p = 0;
  for (std::size_t step = 0; step < 2 * n; ++step) {
    if (p == 2) {
      throw ParseError("crossing " + std::to_string(x + 1) +
                       " is entered along its outgoing under-strand (tuple must start at the incoming under-strand)");
    }
    if (p == 1 || p == 3) {
      int s = (p == 3) ? +1 : -1;
      if (sign[x] != 0) throw ParseError("crossing " + std::to_string(x + 1) + " over-strand traversed twice");
      sign[x] = s;
    }
    const int out = (p + 2) % 4;
    edge_order.push_back(raw[x][out]);
    auto [y, j] = other_end(x, out);
    x = y;
    p = j;
  }
  if (x != 0 || p != 0) throw ParseError("traversal did not close up; PD code is inconsistent");
  for (std::size_t i = 0; i < n; ++i) {
    if (sign[i] == 0) throw ParseError("crossing " + std::to_string(i + 1) + " has no over-strand pass");
  }

  // Relabel 1..2n along the orientation, starting from the lowest label.
  const int lowest = occurrences.begin()->first;
  auto start_it = std::find(edge_order.begin(), edge_order.end(), lowest);
  std::rotate(edge_order.begin(), start_it, edge_order.end());
  std::map<int, int> relabel;
  for (std::size_t i = 0; i < edge_order.size(); ++i) relabel[edge_order[i]] = static_cast<int>(i + 1);

  d.crossings_.reserve(n);
  for (const auto& c : raw) {
    d.crossings_.push_back({relabel.at(c[0]), relabel.at(c[1]), relabel.at(c[2]), relabel.at(c[3])});
  }
  d.signs_ = std::move(sign);
  return d;
}

inline KnotDiagram validate(const PdCode& raw) { return KnotDiagram::from_pd(raw); }

inline int writhe(const KnotDiagram& d) {
  return std::accumulate(d.signs().begin(), d.signs().end(), 0);
}

namespace detail {

// Builds a diagram from raw crossings plus label identifications (edges glued
// end to end). Identification classes with no crossing occurrence are
// crossingless circles and count as extra components.
inline KnotDiagram assemble(const PdCode& raw, const std::vector<std::pair<int, int>>& glue) {
  UnionFind uf;
  for (const auto& [a, b] : glue) uf.unite(a, b);
  PdCode merged = raw;
  std::set<int> used;
  for (auto& x : merged) {
    for (int& label : x) {
      label = uf.find(label);
      used.insert(label);
    }
  }
  std::set<int> free_loops;
  for (const auto& [a, b] : glue) {
    int r = uf.find(a);
    if (!used.count(r)) free_loops.insert(r);
  }
  if (merged.empty()) {
    if (free_loops.size() == 1) return KnotDiagram::unknot();
    throw ParseError("component count " + std::to_string(free_loops.size()));
  }
  if (!free_loops.empty()) {
    // Count the components carrying crossings too, for an accurate message.
    UnionFind comp;
    for (const auto& x : merged) {
      comp.unite(x[0], x[2]);
      comp.unite(x[1], x[3]);
    }
    std::set<int> roots;
    for (int label : used) roots.insert(comp.find(label));
    throw ParseError("component count " + std::to_string(roots.size() + free_loops.size()));
  }
  return KnotDiagram::from_pd(merged);
}

}  // namespace detail

/// Braid word on s strands; letter i > 0 is sigma_i, i < 0 its inverse.
struct BraidWord {
  int strands = 1;
  std::vector<int> letters;

  void check() const {
    if (strands < 1) throw ParseError("braid strand count must be >= 1");
    for (int g : letters) {
      if (g == 0 || std::abs(g) >= strands) {
        throw ParseError("braid letter " + std::to_string(g) + " invalid on " + std::to_string(strands) + " strands");
      }
    }
  }

  friend bool operator==(const BraidWord&, const BraidWord&) = default;
};

/// Closure of a braid. Crossing k of the result comes from letter k.
inline KnotDiagram braid_closure(const BraidWord& w) {
  w.check();
  std::vector<int> current(static_cast<std::size_t>(w.strands));
  std::iota(current.begin(), current.end(), 1);
  int next_label = w.strands + 1;
  PdCode raw;
  raw.reserve(w.letters.size());
  for (int g : w.letters) {
    const auto i = static_cast<std::size_t>(std::abs(g) - 1);
    const int left_out = next_label++;
    const int right_out = next_label++;
    raw.push_back(detail::braid_crossing(g > 0 ? 1 : -1, current[i], current[i + 1], left_out, right_out));
    current[i] = left_out;
    current[i + 1] = right_out;
  }
  std::vector<std::pair<int, int>> glue;
  for (int j = 0; j < w.strands; ++j) glue.emplace_back(current[static_cast<std::size_t>(j)], j + 1);
  return detail::assemble(raw, glue);
}

inline BraidWord torus_braid(int p, int q) {
  BraidWord w{p, {}};
  for (int r = 0; r < q; ++r) {
    for (int i = 1; i < p; ++i) w.letters.push_back(i);
  }
  return w;
}

/// T(p,q) as the closure of (sigma_1 ... sigma_{p-1})^q.
inline KnotDiagram torus_diagram(int p, int q) {
  if (p < 1 || q < 1) throw ParseError("torus knot parameters must be >= 1");
  if (std::gcd(p, q) != 1) {
    throw ParseError("torus parameters (" + std::to_string(p) + "," + std::to_string(q) + ") have gcd " +
                     std::to_string(std::gcd(p, q)) + "; the closure would be a link");
  }
  if (p == 1 || q == 1) return KnotDiagram::unknot();
  return braid_closure(torus_braid(p, q));
}

/// Replaces several crossings at once by twist regions. `twists` maps 1-based
/// crossing id to a signed half-twist count; fresh labels are appended above
/// the current maximum in crossing order.
inline KnotDiagram replace_with_twist_regions(const KnotDiagram& d, const std::map<std::size_t, long>& twists) {
  for (const auto& [id, k] : twists) d.check_id(id);
  int fresh = d.max_label() + 1;
  PdCode raw;
  std::vector<std::pair<int, int>> glue;
  for (std::size_t i = 0; i < d.crossing_count(); ++i) {
    const PdCrossing& x = d.crossings()[i];
    auto it = twists.find(i + 1);
    if (it == twists.end()) {
      raw.push_back(x);
      continue;
    }
    const long k = it->second;
    const auto view = detail::braid_view(x, d.signs()[i]);
    if (k == 0) {
      glue.emplace_back(view.left_in, view.left_out);
      glue.emplace_back(view.right_in, view.right_out);
      continue;
    }
    const int s = k > 0 ? 1 : -1;
    const long count = std::labs(k);
    int left = view.left_in, right = view.right_in;
    for (long j = 0; j < count; ++j) {
      const bool last = (j + 1 == count);
      const int left_out = last ? view.left_out : fresh++;
      const int right_out = last ? view.right_out : fresh++;
      raw.push_back(detail::braid_crossing(s, left, right, left_out, right_out));
      left = left_out;
      right = right_out;
    }
  }
  return detail::assemble(raw, glue);
}

/// Replaces crossing `site` by a two-strand twist region of |halftwists|
/// crossings of sign sign(halftwists). Zero gives the oriented smoothing.
inline KnotDiagram insert_twist_region(const KnotDiagram& d, std::size_t site, long halftwists) {
  return replace_with_twist_regions(d, {{site, halftwists}});
}

/// Same diagram with the given crossings set to the requested signs.
inline KnotDiagram with_signs(const KnotDiagram& d, const std::map<std::size_t, int>& signs) {
  PdCode raw = d.crossings();
  for (const auto& [id, s] : signs) {
    d.check_id(id);
    if (s != 1 && s != -1) throw EvalError("crossing sign must be +1 or -1");
    const int current = d.signs()[id - 1];
    if (current == s) continue;
    const auto v = detail::braid_view(raw[id - 1], current);
    raw[id - 1] = detail::braid_crossing(s, v.left_in, v.right_in, v.left_out, v.right_out);
  }
  return KnotDiagram::from_pd(raw);
}

inline KnotDiagram switch_crossing(const KnotDiagram& d, std::size_t id) {
  return with_signs(d, {{id, -d.sign(id)}});
}

inline KnotDiagram mirror(const KnotDiagram& d) {
  std::map<std::size_t, int> flipped;
  for (std::size_t i = 0; i < d.crossing_count(); ++i) flipped[i + 1] = -d.signs()[i];
  return with_signs(d, flipped);
}

}  // namespace gleamlab
