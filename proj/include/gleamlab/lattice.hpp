#pragma once

// Finite differences on Z^k. Forward difference along axis i:
// (D_i f)(x) = f(x + e_i) - f(x). A function on a box agrees with a
// polynomial of total degree <= m iff every mixed difference of order m+1
// that fits in the box vanishes.

#include <algorithm>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gleamlab/error.hpp"
#include "gleamlab/exactalg.hpp"
#include "gleamlab/family.hpp"
#include "gleamlab/invariant.hpp"

namespace gleamlab {

using MultiIndex = std::vector<unsigned>;

inline unsigned order_of(const MultiIndex& alpha) {
  unsigned s = 0;
  for (unsigned a : alpha) s += a;
  return s;
}

inline std::string multi_index_to_string(const MultiIndex& alpha) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < alpha.size(); ++i) os << (i ? "," : "") << alpha[i];
  os << ')';
  return os.str();
}

inline Rational scale(const Rational& v, const Integer& k) { return v * Rational(k); }
inline LaurentPoly scale(const LaurentPoly& v, const Integer& k) { return v.scaled(k); }
inline Value scale(const Value& v, const Integer& k) {
  return v.is_rational() ? Value(Rational(v.rational() * Rational(k))) : Value(v.poly().scaled(k));
}

/// (D^alpha f)(base) = sum_{beta <= alpha} (-1)^{|alpha|-|beta|} prod C(alpha_i, beta_i) f(base + beta).
template <class F>
auto mixed_difference(F&& f, const MultiIndex& alpha, const LatticePoint& base) -> std::decay_t<decltype(f(base))> {
  using G = std::decay_t<decltype(f(base))>;
  if (alpha.size() != base.size()) throw EvalError("multi-index and base point differ in dimension");
  const unsigned total = order_of(alpha);
  MultiIndex beta(alpha.size(), 0);
  G sum{};
  bool first = true;
  while (true) {
    Integer coeff = ((total - order_of(beta)) % 2 == 0) ? 1 : -1;
    LatticePoint p = base;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      coeff *= binomial(alpha[i], beta[i]);
      p[i] += beta[i];
    }
    G term = scale(f(p), coeff);
    if (first) {
      sum = std::move(term);
      first = false;
    } else {
      sum = sum + term;
    }
    std::size_t i = 0;
    while (i < beta.size() && beta[i] == alpha[i]) beta[i++] = 0;
    if (i == beta.size()) break;
    ++beta[i];
  }
  return sum;
}

inline Value mixed_difference(const ValueTable& table, const MultiIndex& alpha, const LatticePoint& base) {
  return mixed_difference([&](const LatticePoint& p) { return table.at(p); }, alpha, base);
}

// All multi-indices of the given order with alpha_i <= bound_i.
inline std::vector<MultiIndex> multi_indices(unsigned order, const std::vector<unsigned>& bound) {
  std::vector<MultiIndex> out;
  MultiIndex cur(bound.size(), 0);
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t axis, unsigned left) {
    if (axis + 1 == bound.size() || bound.empty()) {
      if (bound.empty()) {
        if (left == 0) out.push_back(cur);
        return;
      }
      if (left <= bound[axis]) {
        cur[axis] = left;
        out.push_back(cur);
        cur[axis] = 0;
      }
      return;
    }
    for (unsigned a = 0; a <= std::min(left, bound[axis]); ++a) {
      cur[axis] = a;
      rec(axis + 1, left - a);
    }
    cur[axis] = 0;
  };
  rec(0, order);
  return out;
}

enum class CertificateStatus { certified_on_box, counterexample };

struct DifferenceWitness {
  MultiIndex alpha;
  LatticePoint base;
  Value value;
};

struct DifferenceReport {
  int bound = 0;
  Box box;
  CertificateStatus status = CertificateStatus::certified_on_box;
  std::optional<DifferenceWitness> counterexample;
  std::size_t differences_checked = 0;

  bool certified() const { return status == CertificateStatus::certified_on_box; }
};

namespace detail {

inline std::vector<unsigned> difference_reach(const Box& box, int m) {
  std::vector<unsigned> reach;
  bool any = false;
  for (const auto& a : box.axes) {
    if (a.width() <= 1) {
      reach.push_back(0);
      continue;
    }
    if (a.width() < m + 2) {
      throw EvalError("box axis [" + std::to_string(a.lo) + "," + std::to_string(a.hi) +
                      "] is too narrow for order-" + std::to_string(m + 1) + " differences (need width >= " +
                      std::to_string(m + 2) + ")");
    }
    reach.push_back(static_cast<unsigned>(a.width() - 1));
    any = true;
  }
  if (!any) throw EvalError("box has no axis wide enough to take differences");
  return reach;
}

}  // namespace detail

/// Checks that every order-(m+1) mixed difference fitting inside the box is
/// exactly zero. Axes of width 1 are held fixed. A certificate is a
/// statement about this box only.
inline DifferenceReport certify_degree(const ValueTable& table, int m) {
  if (m < 0) throw EvalError("degree bound must be >= 0");
  if (table.partial()) {
    const auto& e = table.errors.front();
    throw EvalError("cannot certify a partial table; evaluation failed at " + point_to_string(e.point) + ": " + e.message);
  }
  const Box& box = table.box;
  const auto reach = detail::difference_reach(box, m);
  DifferenceReport report{m, box, CertificateStatus::certified_on_box, std::nullopt, 0};
  for (const auto& alpha : multi_indices(static_cast<unsigned>(m + 1), reach)) {
    for (const auto& base : box.points()) {
      bool fits = true;
      for (std::size_t i = 0; i < base.size(); ++i) fits = fits && base[i] + static_cast<long>(alpha[i]) <= box.axes[i].hi;
      if (!fits) continue;
      ++report.differences_checked;
      Value v = mixed_difference(table, alpha, base);
      if (!v.is_zero()) {
        report.status = CertificateStatus::counterexample;
        report.counterexample = DifferenceWitness{alpha, base, v};
        return report;
      }
    }
  }
  return report;
}

inline DifferenceReport certify_degree(const ShadowTemplate& tmpl, const InvariantId& inv, int m, const Box& box,
                                       const Evaluator& ev, unsigned jobs = default_jobs()) {
  return certify_degree(family_eval(tmpl, inv, box, ev, jobs), m);
}

/// Smallest m' <= max_degree certified on the table's box, if any.
inline std::optional<int> minimal_certified_degree(const ValueTable& table, int max_degree) {
  for (int m = 0; m <= max_degree; ++m) {
    if (certify_degree(table, m).certified()) return m;
  }
  return std::nullopt;
}

struct NewtonTerm {
  MultiIndex alpha;
  Rational coefficient;  // (D^alpha f)(0)
};

struct Interpolant {
  std::vector<NewtonTerm> newton;  // nonzero terms, graded order
  MultiPoly expanded;

  Rational evaluate(const LatticePoint& p) const {
    std::vector<Integer> z(p.begin(), p.end());
    return expanded.evaluate(std::span<const Integer>(z));
  }

  // "-3 + 2*x1 + 5*C(x1,2)".
  std::string newton_text(const std::vector<std::string>& names) const {
    if (newton.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : newton) {
      Rational mag = abs(t.coefficient);
      os << (first ? (t.coefficient < 0 ? "-" : "") : (t.coefficient < 0 ? " - " : " + "));
      first = false;
      bool constant = order_of(t.alpha) == 0;
      if (constant || mag != 1) os << gleamlab::to_string(mag);
      bool star = !constant && mag != 1;
      for (std::size_t i = 0; i < t.alpha.size(); ++i) {
        if (t.alpha[i] == 0) continue;
        if (star) os << '*';
        const std::string& n = names.at(i);
        if (t.alpha[i] == 1) {
          os << n;
        } else {
          os << "C(" << n << ',' << t.alpha[i] << ')';
        }
        star = true;
      }
    }
    return os.str();
  }
};

/// Newton forward form at the origin:
/// P(x) = sum_{|alpha| <= m} (D^alpha f)(0) prod_i C(x_i, alpha_i),
/// restricted to axes of width > 1 in `box`. Values must be rational.
template <class F>
Interpolant newton_interpolate(F&& f, int m, const Box& box) {
  if (m < 0) throw EvalError("degree bound must be >= 0");
  const std::size_t k = box.dimension();
  std::vector<unsigned> reach(k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    const auto& a = box.axes[i];
    if (!a.contains(0)) throw EvalError("interpolation box must contain the origin on every axis");
    if (a.width() > 1) {
      if (a.hi < m) throw EvalError("interpolation box axis must reach " + std::to_string(m) + " from the origin");
      reach[i] = static_cast<unsigned>(m);
    }
  }
  auto rational_f = [&](const LatticePoint& p) -> Rational {
    Value v = f(p);
    if (!v.is_rational()) throw EvalError("interpolation requires rational-valued invariants");
    return v.rational();
  };
  Interpolant out{{}, MultiPoly(k)};
  const LatticePoint origin(k, 0);
  for (unsigned order = 0; order <= static_cast<unsigned>(m); ++order) {
    for (const auto& alpha : multi_indices(order, reach)) {
      Rational c = mixed_difference(rational_f, alpha, origin);
      c.canonicalize();
      if (c == 0) continue;
      out.newton.push_back({alpha, c});
      MultiPoly term = MultiPoly::constant(k, c);
      for (std::size_t i = 0; i < k; ++i) {
        if (alpha[i] > 0) term = term * MultiPoly::binomial_basis(k, i, alpha[i]);
      }
      out.expanded += term;
    }
  }
  return out;
}

inline Interpolant newton_interpolate(const ValueTable& table, int m) {
  return newton_interpolate([&](const LatticePoint& p) { return table.at(p); }, m, table.box);
}

/// Certifies on `box`, then interpolates; throws if the certificate fails.
inline Interpolant newton_interpolate(const ShadowTemplate& tmpl, const InvariantId& inv, int m, const Box& box,
                                      const Evaluator& ev, unsigned jobs = default_jobs()) {
  ValueTable table = family_eval(tmpl, inv, box, ev, jobs);
  DifferenceReport report = certify_degree(table, m);
  if (!report.certified()) {
    throw EvalError("degree " + std::to_string(m) + " not certified on " + box.to_string() +
                    "; interpolation precondition violated");
  }
  return newton_interpolate(table, m);
}

// ---------------------------------------------------------------------------
// Evidence that a one-variable sample sequence is not polynomial.

struct Sample {
  long x;
  Rational value;
};

struct DegreeCheck {
  int degree = 0;
  std::optional<Sample> witness;     // first later sample off the interpolant
  std::optional<Rational> predicted;  // interpolant value at the witness
};

struct NonPolyReport {
  int budget = 0;
  std::vector<DegreeCheck> checks;
  bool no_polynomial_fits = false;   // every degree <= budget has a witness
  std::optional<bool> trivial_region_constant;  // samples at {-2,-1,0,1} agree
  std::vector<Sample> trivial_region;
};

// Lagrange form through samples[0..count).
inline Rational interpolate_at(const std::vector<Sample>& samples, std::size_t count, long x) {
  Rational sum = 0;
  for (std::size_t j = 0; j < count; ++j) {
    Rational term = samples[j].value;
    term.canonicalize();
    for (std::size_t k = 0; k < count; ++k) {
      if (k == j) continue;
      term *= make_rational(x - samples[k].x, samples[j].x - samples[k].x);
    }
    sum += term;
  }
  sum.canonicalize();
  return sum;
}

inline NonPolyReport nonpoly_evidence(const std::vector<Sample>& samples, int budget) {
  if (budget < 0) throw EvalError("degree budget must be >= 0");
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (samples[i].x == samples[i - 1].x) throw EvalError("duplicate sample x = " + std::to_string(samples[i].x));
    if (samples[i].x < samples[i - 1].x) throw EvalError("samples must be in increasing order");
  }
  if (samples.size() < static_cast<std::size_t>(budget) + 2) {
    throw EvalError("insufficient samples for budget: " + std::to_string(samples.size()) + " samples, degree budget " +
                    std::to_string(budget) + " needs at least " + std::to_string(budget + 2));
  }
  NonPolyReport r;
  r.budget = budget;
  r.no_polynomial_fits = true;
  for (int d = 0; d <= budget; ++d) {
    DegreeCheck c;
    c.degree = d;
    const auto used = static_cast<std::size_t>(d) + 1;
    for (std::size_t i = used; i < samples.size(); ++i) {
      Rational p = interpolate_at(samples, used, samples[i].x);
      if (p != samples[i].value) {
        c.witness = samples[i];
        c.predicted = p;
        break;
      }
    }
    if (!c.witness) r.no_polynomial_fits = false;
    r.checks.push_back(std::move(c));
  }
  for (const auto& s : samples) {
    if (s.x >= -2 && s.x <= 1) r.trivial_region.push_back(s);
  }
  if (!r.trivial_region.empty()) {
    r.trivial_region_constant = std::all_of(r.trivial_region.begin(), r.trivial_region.end(),
                                            [&](const Sample& s) { return s.value == r.trivial_region.front().value; });
  }
  return r;
}

}  // namespace gleamlab
