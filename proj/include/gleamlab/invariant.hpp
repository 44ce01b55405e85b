#pragma once

// Invariant engines. Conventions: <unknot> = 1, an extra closed loop
// multiplies by delta = -A^2 - A^-2, the A-smoothing of X[a,b,c,d] joins
// (a,b) and (c,d), and V = (-A^3)^(-writhe) <D> with t = A^-4, so the
// positive trefoil has V = t + t^3 - t^4.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gleamlab/diagram.hpp"
#include "gleamlab/error.hpp"
#include "gleamlab/exactalg.hpp"

namespace gleamlab {

inline constexpr std::size_t kDefaultCrossingLimit = 48;
inline constexpr std::size_t kStateSumLimit = 14;

struct BracketOptions {
  std::size_t crossing_limit = kDefaultCrossingLimit;
};

inline LaurentPoly loop_value() {
  return LaurentPoly::from_terms(Var::A, {{2, -1}, {-2, -1}});
}

namespace detail {

// Pairing of half-open edges: each label with exactly one processed end is
// joined, through the smoothed part of the diagram, to exactly one other.
using Pairing = std::map<int, int>;

struct FrontierState {
  std::vector<std::pair<int, int>> pairs;  // sorted, first < second
  bool closed_any = false;

  friend bool operator<(const FrontierState& l, const FrontierState& r) {
    if (l.closed_any != r.closed_any) return l.closed_any < r.closed_any;
    return l.pairs < r.pairs;
  }
};

inline Pairing to_pairing(const FrontierState& s) {
  Pairing p;
  for (const auto& [a, b] : s.pairs) {
    p[a] = b;
    p[b] = a;
  }
  return p;
}

inline std::vector<std::pair<int, int>> to_pairs(const Pairing& p) {
  std::vector<std::pair<int, int>> out;
  for (const auto& [a, b] : p) {
    if (a < b) out.emplace_back(a, b);
  }
  return out;
}

// Glues the arc (u, v) into the pairing; returns the number of loops closed.
inline int add_arc(Pairing& p, int u, int v) {
  if (u == v) return 1;
  auto iu = p.find(u);
  auto iv = p.find(v);
  const bool open_u = iu != p.end();
  const bool open_v = iv != p.end();
  if (!open_u && !open_v) {
    p[u] = v;
    p[v] = u;
    return 0;
  }
  if (open_u && open_v) {
    const int wu = iu->second;
    const int wv = iv->second;
    p.erase(u);
    p.erase(v);
    if (wu == v) return 1;
    p[wu] = wv;
    p[wv] = wu;
    return 0;
  }
  const int open = open_u ? u : v;
  const int fresh = open_u ? v : u;
  const int far = p[open];
  p.erase(open);
  p[far] = fresh;
  p[fresh] = far;
  return 0;
}

// Processing order: greedily take the crossing sharing the most edges with
// the current frontier, which keeps the pairing small on twist regions and
// braid closures.
inline std::vector<std::size_t> crossing_order(const PdCode& pd) {
  const std::size_t n = pd.size();
  std::vector<std::size_t> order;
  std::vector<char> done(n, 0);
  std::map<int, int> seen;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t best = n;
    int best_score = -1;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i]) continue;
      int score = 0;
      for (int label : pd[i]) score += seen.count(label) ? 1 : 0;
      if (score > best_score) {
        best_score = score;
        best = i;
      }
    }
    done[best] = 1;
    order.push_back(best);
    for (int label : pd[best]) {
      if (++seen[label] == 2) seen.erase(label);
    }
  }
  return order;
}

}  // namespace detail

/// Kauffman bracket by dynamic programming over crossings. The memo maps
/// each distinct boundary pairing of the processed sub-tangle to its
/// accumulated polynomial weight.
inline LaurentPoly kauffman_bracket(const KnotDiagram& d, const BracketOptions& opt = {}) {
  if (d.crossing_count() > opt.crossing_limit) {
    throw EvalError("diagram has " + std::to_string(d.crossing_count()) + " crossings, above the bracket limit of " +
                    std::to_string(opt.crossing_limit) + "; use the closed-form Jones polynomial for torus knots");
  }
  if (d.is_trivial_diagram()) return LaurentPoly::constant(Var::A, 1);

  const LaurentPoly delta = loop_value();
  std::map<detail::FrontierState, LaurentPoly> states;
  states.emplace(detail::FrontierState{}, LaurentPoly::constant(Var::A, 1));

  for (std::size_t idx : detail::crossing_order(d.crossings())) {
    const PdCrossing& x = d.crossings()[idx];
    std::map<detail::FrontierState, LaurentPoly> next;
    for (const auto& [state, weight] : states) {
      for (int smoothing = 0; smoothing < 2; ++smoothing) {
        detail::Pairing p = detail::to_pairing(state);
        int loops = 0;
        if (smoothing == 0) {
          loops += detail::add_arc(p, x[0], x[1]);
          loops += detail::add_arc(p, x[2], x[3]);
        } else {
          loops += detail::add_arc(p, x[0], x[3]);
          loops += detail::add_arc(p, x[1], x[2]);
        }
        detail::FrontierState ns{detail::to_pairs(p), state.closed_any || loops > 0};
        unsigned extra = static_cast<unsigned>(loops);
        if (!state.closed_any && loops > 0) --extra;
        LaurentPoly w = weight.shifted(smoothing == 0 ? 1 : -1);
        if (extra > 0) w *= delta.pow(extra);
        auto [it, inserted] = next.try_emplace(std::move(ns), w);
        if (!inserted) it->second += w;
      }
    }
    states = std::move(next);
  }

  LaurentPoly total(Var::A);
  for (const auto& [state, weight] : states) {
    if (!state.pairs.empty() || !state.closed_any) throw EvalError("bracket recursion ended with open strands");
    total += weight;
  }
  return total;
}

/// Independent oracle: explicit sum over all 2^c smoothing states.
inline LaurentPoly state_sum_bracket(const KnotDiagram& d) {
  const std::size_t n = d.crossing_count();
  if (n > kStateSumLimit) {
    throw EvalError("state sum limited to " + std::to_string(kStateSumLimit) + " crossings, diagram has " +
                    std::to_string(n));
  }
  if (n == 0) return LaurentPoly::constant(Var::A, 1);

  const int labels = d.max_label();
  // counts[(#A - #B, loops)]
  std::map<std::pair<int, int>, Integer> counts;
  std::vector<int> parent(static_cast<std::size_t>(labels) + 1);
  auto find = [&](int v) {
    while (parent[static_cast<std::size_t>(v)] != v) {
      parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
      v = parent[static_cast<std::size_t>(v)];
    }
    return v;
  };
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::iota(parent.begin(), parent.end(), 0);
    int components = labels;
    auto unite = [&](int a, int b) {
      a = find(a);
      b = find(b);
      if (a != b) {
        parent[static_cast<std::size_t>(a)] = b;
        --components;
      }
    };
    int a_count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const PdCrossing& x = d.crossings()[i];
      if ((mask >> i & 1u) == 0) {
        ++a_count;
        unite(x[0], x[1]);
        unite(x[2], x[3]);
      } else {
        unite(x[0], x[3]);
        unite(x[1], x[2]);
      }
    }
    counts[{2 * a_count - static_cast<int>(n), components}] += 1;
  }

  const LaurentPoly delta = loop_value();
  LaurentPoly total(Var::A);
  for (const auto& [key, c] : counts) {
    total += (LaurentPoly::monomial(Var::A, key.first, c) * delta.pow(static_cast<unsigned>(key.second - 1)));
  }
  return total;
}

/// Converts a writhe-normalized bracket in A to the Jones polynomial in t.
inline LaurentPoly bracket_to_jones(const LaurentPoly& bracket, int writhe_value) {
  LaurentPoly normalized = bracket.shifted(-3 * writhe_value);
  if (writhe_value % 2 != 0) normalized = -normalized;
  LaurentPoly v(Var::t);
  for (const auto& [e, c] : normalized.terms()) {
    if (e % 4 != 0) {
      throw EvalError("fractional t-exponent A^" + std::to_string(e) + " in Jones polynomial; input is not a knot");
    }
    v.add_term(-e / 4, c);
  }
  return v;
}

inline LaurentPoly jones(const KnotDiagram& d, const BracketOptions& opt = {}) {
  return bracket_to_jones(kauffman_bracket(d, opt), writhe(d));
}

inline std::vector<Rational> vassiliev_from_jones(const LaurentPoly& v, unsigned order) {
  return exp_substitute(v, order).coefficients();
}

/// u_0..u_order from J(e^x) = sum u_n x^n.
inline std::vector<Rational> vassiliev_u(const KnotDiagram& d, unsigned order, const BracketOptions& opt = {}) {
  return vassiliev_from_jones(jones(d, opt), order);
}

inline int span_of(const LaurentPoly& v) {
  if (v.is_zero()) throw EvalError("span of the zero polynomial");
  return v.max_exponent() - v.min_exponent();
}

inline int jones_span(const KnotDiagram& d, const BracketOptions& opt = {}) { return span_of(jones(d, opt)); }

namespace detail {

inline void require_coprime(int p, int q) {
  if (p < 1 || q < 1) throw EvalError("torus parameters must be >= 1");
  if (std::gcd(p, q) != 1) {
    throw EvalError("torus parameters (" + std::to_string(p) + "," + std::to_string(q) + ") are not coprime");
  }
}

}  // namespace detail

/// t^((p-1)(q-1)/2) (1 - t^(p+1) - t^(q+1) + t^(p+q)) / (1 - t^2)
inline LaurentPoly jones_torus_closed_form(int p, int q) {
  detail::require_coprime(p, q);
  LaurentPoly numerator =
      LaurentPoly::from_terms(Var::t, {{0, 1}, {p + 1, -1}, {q + 1, -1}, {p + q, 1}});
  LaurentPoly denominator = LaurentPoly::from_terms(Var::t, {{0, 1}, {2, -1}});
  return numerator.divided_exactly(denominator).shifted((p - 1) * (q - 1) / 2);
}

inline int torus_genus(int p, int q) {
  detail::require_coprime(p, q);
  return (p - 1) * (q - 1) / 2;
}

/// Signature of the positive torus knot T(p,q) by the Gordon-Litherland-
/// Murasugi recursion; negative for nontrivial positive torus knots.
inline int torus_signature(int p, int q) {
  detail::require_coprime(p, q);
  if (p < q) std::swap(p, q);
  if (q == 1) return 0;
  if (q == 2) return -(p - 1);
  const bool odd = (q % 2) != 0;
  if (2 * q < p) return torus_signature(p - 2 * q, q) - (odd ? q * q - 1 : q * q);
  return -torus_signature(2 * q - p, q) - (odd ? q * q - 1 : q * q - 2);
}

// ---------------------------------------------------------------------------
// Invariant identifiers and values

enum class InvariantKind { jones, vassiliev, span, genus, signature, writhe };

struct InvariantId {
  InvariantKind kind = InvariantKind::jones;
  unsigned order = 0;  // vassiliev only

  static InvariantId u(unsigned n) { return {InvariantKind::vassiliev, n}; }

  // "jones", "u2" / "u_2", "span", "genus", "signature", "writhe".
  static InvariantId parse(const std::string& name) {
    if (name == "jones") return {InvariantKind::jones, 0};
    if (name == "span") return {InvariantKind::span, 0};
    if (name == "genus") return {InvariantKind::genus, 0};
    if (name == "signature") return {InvariantKind::signature, 0};
    if (name == "writhe") return {InvariantKind::writhe, 0};
    std::string digits;
    if (name.size() > 1 && name[0] == 'u') digits = name.substr(name[1] == '_' ? 2 : 1);
    if (!digits.empty() && digits.size() < 4 &&
        std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      return u(static_cast<unsigned>(std::stoul(digits)));
    }
    throw ParseError("unknown invariant '" + name + "' (expected jones, u<n>, span, genus, signature, writhe)");
  }

  std::string name() const {
    switch (kind) {
      case InvariantKind::jones: return "jones";
      case InvariantKind::vassiliev: return "u" + std::to_string(order);
      case InvariantKind::span: return "span";
      case InvariantKind::genus: return "genus";
      case InvariantKind::signature: return "signature";
      case InvariantKind::writhe: return "writhe";
    }
    return "?";
  }

  friend bool operator==(const InvariantId&, const InvariantId&) = default;
};

/// An element of the value group: an exact rational (integers included) or
/// a Laurent polynomial.
class Value {
 public:
  Value() : v_(Rational(0)) {}
  Value(Rational q) : v_(std::move(q)) { std::get<Rational>(v_).canonicalize(); }
  Value(long k) : v_(Rational(k)) {}
  Value(LaurentPoly p) : v_(std::move(p)) {}

  bool is_rational() const { return std::holds_alternative<Rational>(v_); }
  const Rational& rational() const { return std::get<Rational>(v_); }
  const LaurentPoly& poly() const { return std::get<LaurentPoly>(v_); }

  bool is_zero() const { return is_rational() ? rational() == 0 : poly().is_zero(); }

  friend Value operator+(const Value& a, const Value& b) { return combine(a, b, 1); }
  friend Value operator-(const Value& a, const Value& b) { return combine(a, b, -1); }

  friend bool operator==(const Value& a, const Value& b) {
    if (a.is_rational() != b.is_rational()) return a.is_zero() && b.is_zero();
    return a.v_ == b.v_;
  }

  std::string to_string() const { return is_rational() ? gleamlab::to_string(rational()) : poly().to_string(); }

 private:
  static Value combine(const Value& a, const Value& b, int sign) {
    if (a.is_rational() && b.is_rational()) {
      return Value(sign > 0 ? Rational(a.rational() + b.rational()) : Rational(a.rational() - b.rational()));
    }
    // A rational zero acts as the neutral element of the polynomial group.
    if (a.is_rational() && a.is_zero()) return sign > 0 ? b : Value(-b.poly());
    if (b.is_rational() && b.is_zero()) return a;
    if (a.is_rational() || b.is_rational()) throw EvalError("cannot combine rational and polynomial values");
    return Value(sign > 0 ? a.poly() + b.poly() : a.poly() - b.poly());
  }

  std::variant<Rational, LaurentPoly> v_;
};

/// A knot to evaluate: a diagram, plus the torus type when it is known to be
/// a torus knot (which unlocks the genus and signature oracles).
struct KnotSample {
  KnotDiagram diagram;
  std::optional<std::pair<int, int>> torus;
};

/// Storage hook for Jones polynomials keyed by canonical diagram key.
class JonesStore {
 public:
  virtual ~JonesStore() = default;
  virtual std::optional<LaurentPoly> lookup(const std::string& key) = 0;
  virtual void store(const std::string& key, const LaurentPoly& value) = 0;
};

/// Evaluates any InvariantId on a KnotSample. Thread-safe when the store is.
class Evaluator {
 public:
  explicit Evaluator(BracketOptions opt = {}, JonesStore* store = nullptr) : opt_(opt), store_(store) {}

  const BracketOptions& options() const { return opt_; }

  LaurentPoly jones_of(const KnotSample& k) const {
    if (k.torus) return jones_torus_closed_form(k.torus->first, k.torus->second);
    if (!store_) return jones(k.diagram, opt_);
    const std::string key = "jones|" + k.diagram.canonical_key();
    if (auto hit = store_->lookup(key)) return *hit;
    LaurentPoly v = jones(k.diagram, opt_);
    store_->store(key, v);
    return v;
  }

  Value evaluate(const InvariantId& id, const KnotSample& k) const {
    switch (id.kind) {
      case InvariantKind::jones: return Value(jones_of(k));
      case InvariantKind::vassiliev: return Value(vassiliev_from_jones(jones_of(k), id.order).back());
      case InvariantKind::span: return Value(static_cast<long>(span_of(jones_of(k))));
      case InvariantKind::writhe: return Value(static_cast<long>(writhe(k.diagram)));
      case InvariantKind::genus:
        if (!k.torus) throw EvalError("genus is only available for knots of known torus type");
        return Value(static_cast<long>(torus_genus(k.torus->first, k.torus->second)));
      case InvariantKind::signature:
        if (!k.torus) throw EvalError("signature is only available for knots of known torus type");
        return Value(static_cast<long>(torus_signature(k.torus->first, k.torus->second)));
    }
    throw EvalError("unhandled invariant");
  }

  Value evaluate(const InvariantId& id, const KnotDiagram& d) const { return evaluate(id, KnotSample{d, std::nullopt}); }

 private:
  BracketOptions opt_;
  JonesStore* store_;
};

}  // namespace gleamlab
