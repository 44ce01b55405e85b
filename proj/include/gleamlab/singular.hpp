#pragma once

// Singular knots: a base diagram with some crossings marked as double points.
// An invariant extends by v(K_x) = v(K_+) - v(K_-), so a diagram with j
// double points evaluates to the 2^j-term alternating sum over resolutions.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gleamlab/diagram.hpp"
#include "gleamlab/error.hpp"
#include "gleamlab/family.hpp"
#include "gleamlab/invariant.hpp"
#include "gleamlab/lattice.hpp"
#include "gleamlab/parallel.hpp"

namespace gleamlab {

inline constexpr std::size_t kMaxSingularCrossings = 12;

/// beta = 1 for a positive crossing, 0 for a negative one.
inline int sign_from_beta(int beta) { return beta == 1 ? 1 : -1; }
inline int beta_from_sign(int sign) { return sign > 0 ? 1 : 0; }

class SingularDiagram {
 public:
  static SingularDiagram make(KnotDiagram base, std::vector<std::size_t> singular, std::map<std::size_t, int> beta = {}) {
    SingularDiagram sd;
    sd.base_ = std::move(base);
    sd.singular_ = std::move(singular);
    sd.beta_ = std::move(beta);
    sd.check();
    return sd;
  }

  const KnotDiagram& base() const { return base_; }
  const std::vector<std::size_t>& singular() const { return singular_; }
  const std::map<std::size_t, int>& beta() const { return beta_; }
  std::size_t singular_count() const { return singular_.size(); }

  bool is_singular(std::size_t id) const {
    return std::find(singular_.begin(), singular_.end(), id) != singular_.end();
  }

  // Given beta, or read off the base crossing sign.
  int effective_beta(std::size_t id) const {
    if (is_singular(id)) throw EvalError("crossing " + std::to_string(id) + " is singular and has no beta");
    auto it = beta_.find(id);
    return it != beta_.end() ? it->second : beta_from_sign(base_.sign(id));
  }

 private:
  void check() const {
    if (singular_.size() > kMaxSingularCrossings) {
      throw ParseError("at most " + std::to_string(kMaxSingularCrossings) + " singular crossings are supported");
    }
    std::set<std::size_t> distinct(singular_.begin(), singular_.end());
    if (distinct.size() != singular_.size()) throw ParseError("singular crossings must be distinct");
    for (std::size_t id : singular_) base_.check_id(id);
    for (const auto& [id, b] : beta_) {
      base_.check_id(id);
      if (distinct.count(id)) throw ParseError("crossing " + std::to_string(id) + " is singular and cannot carry beta");
      if (b != 0 && b != 1) throw ParseError("beta values must be 0 or 1");
    }
  }

  KnotDiagram base_;
  std::vector<std::size_t> singular_;
  std::map<std::size_t, int> beta_;
};

struct Resolution {
  KnotDiagram diagram;
  int negatives = 0;
  std::vector<int> signs;  // one per singular crossing, in singular order
};

/// All 2^j resolutions in binary counting order: bit k of the counter set
/// means singular crossing k+1 is resolved negatively.
inline std::vector<Resolution> resolutions(const SingularDiagram& sd) {
  std::map<std::size_t, int> fixed;
  for (const auto& [id, b] : sd.beta()) fixed[id] = sign_from_beta(b);
  const std::size_t j = sd.singular_count();
  std::vector<Resolution> out;
  out.reserve(std::size_t{1} << j);
  for (std::size_t mask = 0; mask < (std::size_t{1} << j); ++mask) {
    std::map<std::size_t, int> signs = fixed;
    Resolution r;
    for (std::size_t k = 0; k < j; ++k) {
      const int s = (mask >> k & 1u) ? -1 : 1;
      signs[sd.singular()[k]] = s;
      r.signs.push_back(s);
      if (s < 0) ++r.negatives;
    }
    try {
      r.diagram = with_signs(sd.base(), signs);
    } catch (const ParseError& e) {
      throw EvalError(std::string("resolution is not a knot: ") + e.what());
    }
    out.push_back(std::move(r));
  }
  return out;
}

inline std::string sign_pattern(const std::vector<int>& signs) {
  std::string s;
  for (int v : signs) s += v > 0 ? '+' : '-';
  return s;
}

/// sum over resolutions of (-1)^negatives * inv(resolution).
inline Value alternating_sum(const SingularDiagram& sd, const InvariantId& inv, const Evaluator& ev,
                             unsigned jobs = default_jobs()) {
  const auto res = resolutions(sd);
  std::vector<Value> values(res.size());
  std::vector<std::string> failures(res.size());
  parallel_for(res.size(), jobs, [&](std::size_t i) {
    try {
      values[i] = ev.evaluate(inv, res[i].diagram);
    } catch (const std::exception& e) {
      failures[i] = e.what();
    }
  });
  Value sum;
  for (std::size_t i = 0; i < res.size(); ++i) {
    if (!failures[i].empty()) {
      throw EvalError("evaluation failed on resolution " + sign_pattern(res[i].signs) + ": " + failures[i]);
    }
    sum = (res[i].negatives % 2 == 0) ? sum + values[i] : sum - values[i];
  }
  return sum;
}

struct IdentityCheck {
  Value lhs;  // alternating sum over resolutions
  Value rhs;  // mixed difference of inv o realize
  bool equal = false;
  MultiIndex alpha;
  LatticePoint base;
  std::vector<int> beta;  // for template sites m+2..e
};

/// Compares the alternating sum over resolutions with
/// D_{x_1} ... D_{x_{m+1}} (inv o realize)(0,...,0, beta_{m+2},...,beta_e, 0).
/// Template sites 1..m+1 must be the singular crossings, in order.
inline IdentityCheck check_diff_identity(const ShadowTemplate& tmpl, const SingularDiagram& sd, const InvariantId& inv,
                                         const Evaluator& ev, unsigned jobs = default_jobs()) {
  if (tmpl.mode() == FiberMode::torus_fiber) throw EvalError("identity check needs a template with twist sites");
  if (!(tmpl.base() == sd.base())) throw EvalError("template base and singular diagram base differ");
  const std::size_t j = sd.singular_count();
  const auto& sites = tmpl.sites();
  if (sites.size() < j) throw EvalError("template has fewer sites than singular crossings");
  for (std::size_t k = 0; k < j; ++k) {
    if (sites[k] != sd.singular()[k]) {
      throw EvalError("template site " + std::to_string(k + 1) + " is crossing " + std::to_string(sites[k]) +
                      " but singular crossing " + std::to_string(k + 1) + " is " + std::to_string(sd.singular()[k]));
    }
  }
  // Crossings outside the template keep their base sign; their beta must agree.
  std::set<std::size_t> site_set(sites.begin(), sites.end());
  for (const auto& [id, b] : sd.beta()) {
    if (!site_set.count(id) && b != beta_from_sign(sd.base().sign(id))) {
      throw EvalError("crossing " + std::to_string(id) + " has beta " + std::to_string(b) +
                      " but is not a template site; add it to the template sites");
    }
  }

  IdentityCheck out;
  out.lhs = alternating_sum(sd, inv, ev, jobs);

  const std::size_t dim = tmpl.dimension();
  out.alpha.assign(dim, 0);
  out.base.assign(dim, 0);
  for (std::size_t k = 0; k < j; ++k) out.alpha[k] = 1;
  for (std::size_t k = j; k < sites.size(); ++k) {
    const int b = sd.effective_beta(sites[k]);
    out.base[k] = b;
    out.beta.push_back(b);
  }

  // Evaluate the 2^j cube corners up front so workers can share the load.
  std::vector<LatticePoint> corners;
  for (std::size_t mask = 0; mask < (std::size_t{1} << j); ++mask) {
    LatticePoint p = out.base;
    for (std::size_t k = 0; k < j; ++k) p[k] += static_cast<long>(mask >> k & 1u);
    corners.push_back(std::move(p));
  }
  std::vector<std::optional<Value>> values(corners.size());
  parallel_for(corners.size(), jobs, [&](std::size_t i) {
    values[i] = ev.evaluate(inv, tmpl.realize(GleamPoint::from_lattice(corners[i])));
  });
  std::map<LatticePoint, Value> table;
  for (std::size_t i = 0; i < corners.size(); ++i) table.emplace(corners[i], *values[i]);
  out.rhs = mixed_difference([&](const LatticePoint& p) { return table.at(p); }, out.alpha, out.base);
  out.equal = out.lhs == out.rhs;
  return out;
}

/// Smallest m such that every k-singular alternating sum in the suite with
/// m+1 <= k <= budget+1 vanishes; nullopt when no m <= budget qualifies.
/// Lower-bound evidence only.
inline std::optional<unsigned> estimate_order(const std::vector<SingularDiagram>& suite, const InvariantId& inv,
                                              unsigned budget, const Evaluator& ev, unsigned jobs = default_jobs()) {
  std::map<std::size_t, bool> all_zero;  // singular count -> every sum zero
  for (std::size_t k = 1; k <= budget + 1; ++k) all_zero[k] = true;
  std::set<std::size_t> present;
  for (const auto& sd : suite) {
    const std::size_t k = sd.singular_count();
    if (k < 1 || k > budget + 1) continue;
    present.insert(k);
    if (all_zero[k] && !alternating_sum(sd, inv, ev, jobs).is_zero()) all_zero[k] = false;
  }
  for (std::size_t k = 1; k <= budget + 1; ++k) {
    if (!present.count(k)) throw EvalError("suite has no diagram with " + std::to_string(k) + " singular crossings");
  }
  for (unsigned m = 0; m <= budget; ++m) {
    bool vanish = true;
    for (std::size_t k = m + 1; k <= budget + 1; ++k) vanish = vanish && all_zero[k];
    if (vanish) return m;
  }
  return std::nullopt;
}

}  // namespace gleamlab
