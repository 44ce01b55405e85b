#pragma once

// Knot families over the lattice Z^e x Z.
//
// A template fixes a base diagram and e twist sites. Site k at coordinate x_k
// becomes a twist region of 2*x_k - 1 half-twists, so x_k = 1 is a positive
// crossing, x_k = 0 a negative one, and unit steps along an axis are crossing
// changes inside the region. The last coordinate x_f is the fiber axis: the
// torus fiber family K(x_f) = T(x_f, x_f + 1), or full twists appended to a
// base braid (an artifact-defined axis, reported as such).

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gleamlab/diagram.hpp"
#include "gleamlab/error.hpp"
#include "gleamlab/invariant.hpp"
#include "gleamlab/parallel.hpp"

namespace gleamlab {

enum class FiberMode { none, torus_fiber, braid_full_twist };

inline std::string to_string(FiberMode m) {
  switch (m) {
    case FiberMode::none: return "none";
    case FiberMode::torus_fiber: return "torus_fiber";
    case FiberMode::braid_full_twist: return "braid_full_twist";
  }
  return "?";
}

inline FiberMode parse_fiber_mode(const std::string& s) {
  if (s == "none") return FiberMode::none;
  if (s == "torus_fiber") return FiberMode::torus_fiber;
  if (s == "braid_full_twist") return FiberMode::braid_full_twist;
  throw ParseError("unknown fiber_mode '" + s + "' (expected none, torus_fiber, braid_full_twist)");
}

using LatticePoint = std::vector<long>;

inline std::string point_to_string(const LatticePoint& p) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? "," : "") << p[i];
  os << ')';
  return os.str();
}

/// (x_1..x_e, x_f); converts to and from a flat lattice point whose last
/// coordinate is the fiber axis.
struct GleamPoint {
  std::vector<long> x;
  long fiber = 0;

  static GleamPoint from_lattice(const LatticePoint& p) {
    if (p.empty()) throw EvalError("lattice point needs at least the fiber coordinate");
    return {LatticePoint(p.begin(), p.end() - 1), p.back()};
  }
  LatticePoint lattice() const {
    LatticePoint p = x;
    p.push_back(fiber);
    return p;
  }
  std::string to_string() const { return point_to_string(lattice()); }
};

/// K(x_f): T(x_f, x_f + 1) for x_f >= 2, the unknot for x_f in {-2,..,1}.
inline KnotSample fiber_knot(long xf) {
  if (xf <= -3) throw EvalError("fiber knot K(" + std::to_string(xf) + ") is undefined for x_f <= -3");
  if (xf <= 1) return {KnotDiagram::unknot(), std::pair{1, 1}};
  const int p = static_cast<int>(xf);
  return {torus_diagram(p, p + 1), std::pair{p, p + 1}};
}

class ShadowTemplate {
 public:
  static ShadowTemplate from_diagram(KnotDiagram base, std::vector<std::size_t> sites, FiberMode mode = FiberMode::none) {
    if (mode == FiberMode::braid_full_twist) throw ParseError("braid_full_twist mode requires a braid base");
    ShadowTemplate t;
    t.base_ = std::move(base);
    t.sites_ = std::move(sites);
    t.mode_ = mode;
    t.check();
    return t;
  }

  static ShadowTemplate from_braid(const BraidWord& braid, std::vector<std::size_t> sites, FiberMode mode = FiberMode::none) {
    ShadowTemplate t;
    t.braid_ = braid;
    t.base_ = braid_closure(braid);
    t.sites_ = std::move(sites);
    t.mode_ = mode;
    t.check();
    return t;
  }

  static ShadowTemplate torus_fiber() { return from_diagram(KnotDiagram::unknot(), {}, FiberMode::torus_fiber); }

  const KnotDiagram& base() const { return base_; }
  const std::optional<BraidWord>& braid() const { return braid_; }
  const std::vector<std::size_t>& sites() const { return sites_; }
  FiberMode mode() const { return mode_; }
  std::size_t twist_axes() const { return sites_.size(); }
  std::size_t dimension() const { return sites_.size() + 1; }

  std::vector<std::string> axis_names() const {
    std::vector<std::string> names;
    for (std::size_t k = 1; k <= sites_.size(); ++k) names.push_back("x" + std::to_string(k));
    names.push_back("xf");
    return names;
  }

  /// Realizes a lattice point as a knot; link realizations and inadmissible
  /// fiber coordinates are EvalErrors naming the point.
  KnotSample realize(const GleamPoint& p) const {
    if (p.x.size() != sites_.size()) {
      throw EvalError("point " + p.to_string() + " has " + std::to_string(p.x.size()) + " twist coordinates, template has " +
                      std::to_string(sites_.size()));
    }
    try {
      switch (mode_) {
        case FiberMode::torus_fiber:
          if (p.fiber < -2) throw EvalError("x_f = " + std::to_string(p.fiber) + " is inadmissible (torus fiber needs x_f >= -2)");
          return fiber_knot(p.fiber);
        case FiberMode::none:
          if (p.fiber != 0) throw EvalError("x_f = " + std::to_string(p.fiber) + " is inadmissible (fiber mode none needs x_f = 0)");
          return {twisted(base_, p.x), std::nullopt};
        case FiberMode::braid_full_twist: {
          BraidWord w = *braid_;
          const long count = p.fiber < 0 ? -p.fiber : p.fiber;
          for (long r = 0; r < count; ++r) {
            for (int s = 0; s < w.strands; ++s) {
              if (p.fiber > 0) {
                for (int i = 1; i < w.strands; ++i) w.letters.push_back(i);
              } else {
                for (int i = w.strands - 1; i >= 1; --i) w.letters.push_back(-i);
              }
            }
          }
          return {twisted(braid_closure(w), p.x), std::nullopt};
        }
      }
    } catch (const ParseError& e) {
      throw EvalError("realization at " + p.to_string() + " failed: " + e.what());
    }
    throw EvalError("unhandled fiber mode");
  }

 private:
  KnotDiagram twisted(const KnotDiagram& d, const std::vector<long>& x) const {
    std::map<std::size_t, long> twists;
    for (std::size_t k = 0; k < sites_.size(); ++k) twists[sites_[k]] = 2 * x[k] - 1;
    if (twists.empty()) return d;
    return replace_with_twist_regions(d, twists);
  }

  void check() const {
    std::set<std::size_t> distinct(sites_.begin(), sites_.end());
    if (distinct.size() != sites_.size()) throw ParseError("template sites must be distinct");
    for (std::size_t s : sites_) base_.check_id(s);
    if (mode_ == FiberMode::torus_fiber) {
      if (!sites_.empty()) throw ParseError("torus_fiber mode requires zero twist sites");
      if (!base_.is_trivial_diagram()) throw ParseError("torus_fiber mode requires the unknot as base");
    }
    if (mode_ == FiberMode::braid_full_twist && !braid_) throw ParseError("braid_full_twist mode requires a braid base");
  }

  KnotDiagram base_;
  std::optional<BraidWord> braid_;
  std::vector<std::size_t> sites_;
  FiberMode mode_ = FiberMode::none;
};

struct Interval {
  long lo = 0;
  long hi = 0;
  long width() const { return hi - lo + 1; }
  bool contains(long v) const { return lo <= v && v <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Closed integer box, one interval per lattice axis.
struct Box {
  std::vector<Interval> axes;

  std::size_t dimension() const { return axes.size(); }

  bool contains(const LatticePoint& p) const {
    if (p.size() != axes.size()) return false;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (!axes[i].contains(p[i])) return false;
    }
    return true;
  }

  // Lexicographic enumeration.
  std::vector<LatticePoint> points() const {
    std::vector<LatticePoint> out;
    for (const auto& a : axes) {
      if (a.hi < a.lo) return out;
    }
    LatticePoint p;
    for (const auto& a : axes) p.push_back(a.lo);
    while (true) {
      out.push_back(p);
      std::size_t i = axes.size();
      while (i > 0) {
        --i;
        if (p[i] < axes[i].hi) {
          ++p[i];
          for (std::size_t j = i + 1; j < axes.size(); ++j) p[j] = axes[j].lo;
          break;
        }
        if (i == 0) return out;
      }
      if (axes.empty()) return out;
    }
  }

  std::string to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < axes.size(); ++i) os << (i ? "x" : "") << '[' << axes[i].lo << ',' << axes[i].hi << ']';
    return os.str();
  }
};

struct PointError {
  LatticePoint point;
  std::string message;
};

/// Values of one invariant over a box, keyed by lattice point.
struct ValueTable {
  std::string invariant;
  Box box;
  std::map<LatticePoint, Value> values;
  std::vector<PointError> errors;

  bool partial() const { return !errors.empty(); }

  const Value& at(const LatticePoint& p) const {
    auto it = values.find(p);
    if (it == values.end()) throw EvalError("missing table entry at " + point_to_string(p));
    return it->second;
  }
};

/// Evaluates `inv` at every box point on up to `jobs` workers. Per-point
/// failures are collected, not thrown; results are merged in lexicographic
/// order independent of scheduling.
inline ValueTable family_eval(const ShadowTemplate& tmpl, const InvariantId& inv, const Box& box, const Evaluator& ev,
                              unsigned jobs = default_jobs()) {
  if (box.dimension() != tmpl.dimension()) {
    throw EvalError("box has " + std::to_string(box.dimension()) + " axes, template lattice has " +
                    std::to_string(tmpl.dimension()));
  }
  const auto points = box.points();
  std::vector<std::optional<Value>> results(points.size());
  std::vector<std::string> failures(points.size());
  parallel_for(points.size(), jobs, [&](std::size_t i) {
    try {
      results[i] = ev.evaluate(inv, tmpl.realize(GleamPoint::from_lattice(points[i])));
    } catch (const std::exception& e) {
      failures[i] = e.what();
    }
  });
  ValueTable table{inv.name(), box, {}, {}};
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (results[i]) {
      table.values.emplace(points[i], std::move(*results[i]));
    } else {
      table.errors.push_back({points[i], failures[i]});
    }
  }
  return table;
}

}  // namespace gleamlab
