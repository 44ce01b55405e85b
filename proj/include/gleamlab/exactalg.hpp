#pragma once

// Exact arithmetic kernel: Laurent polynomials over Z, truncated power series
// over Q and sparse multivariate polynomials over Q. Big integers come from
// GMP; nothing here touches floating point.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gleamlab/error.hpp"

namespace gleamlab {

using Integer = mpz_class;
using Rational = mpq_class;

inline std::string to_string(const Integer& z) { return z.get_str(); }

inline std::string to_string(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_str();
}

inline Rational make_rational(const Integer& num, const Integer& den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

// Binomial coefficient C(x, k) for integer x (any sign) and k >= 0, i.e. the
// falling factorial x(x-1)...(x-k+1) / k!.
inline Integer binomial(const Integer& x, unsigned k) {
  Integer num = 1;
  Integer den = 1;
  for (unsigned i = 0; i < k; ++i) {
    num *= x - i;
    den *= i + 1;
  }
  return num / den;
}

enum class Var { A, t };

inline const char* var_name(Var v) { return v == Var::A ? "A" : "t"; }

namespace detail {

inline int checked_exponent(std::int64_t e) {
  constexpr std::int64_t kLimit = std::int64_t{1} << 31;
  if (e <= -kLimit || e >= kLimit) {
    throw EvalError("Laurent exponent out of range: " + std::to_string(e));
  }
  return static_cast<int>(e);
}

}  // namespace detail

/// Laurent polynomial in one variable with arbitrary-precision integer
/// coefficients. Stored sparse; zero coefficients are never kept.
class LaurentPoly {
 public:
  using Terms = std::map<int, Integer>;

  explicit LaurentPoly(Var var = Var::t) : var_(var) {}

  static LaurentPoly constant(Var var, const Integer& c) { return monomial(var, 0, c); }

  static LaurentPoly monomial(Var var, int exponent, const Integer& c = 1) {
    LaurentPoly p(var);
    if (c != 0) p.terms_.emplace(exponent, c);
    return p;
  }

  static LaurentPoly from_terms(Var var, const std::vector<std::pair<int, Integer>>& terms) {
    LaurentPoly p(var);
    for (const auto& [e, c] : terms) p.add_term(e, c);
    return p;
  }

  Var var() const { return var_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  int min_exponent() const {
    if (is_zero()) throw EvalError("min_exponent of the zero polynomial");
    return terms_.begin()->first;
  }
  int max_exponent() const {
    if (is_zero()) throw EvalError("max_exponent of the zero polynomial");
    return terms_.rbegin()->first;
  }

  Integer coefficient(int exponent) const {
    auto it = terms_.find(exponent);
    return it == terms_.end() ? Integer(0) : it->second;
  }

  void add_term(int exponent, const Integer& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(exponent, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  LaurentPoly& operator+=(const LaurentPoly& o) {
    require_same_var(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  LaurentPoly& operator-=(const LaurentPoly& o) {
    require_same_var(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  LaurentPoly operator-() const {
    LaurentPoly r(var_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
  }

  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }

  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    a.require_same_var(b);
    LaurentPoly r(a.var_);
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        r.add_term(detail::checked_exponent(std::int64_t{ea} + eb), ca * cb);
      }
    }
    return r;
  }
  LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }

  LaurentPoly scaled(const Integer& k) const {
    LaurentPoly r(var_);
    if (k == 0) return r;
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, c * k);
    return r;
  }

  // Multiply by var^k.
  LaurentPoly shifted(int k) const {
    LaurentPoly r(var_);
    for (const auto& [e, c] : terms_) {
      r.terms_.emplace(detail::checked_exponent(std::int64_t{e} + k), c);
    }
    return r;
  }

  LaurentPoly pow(unsigned n) const {
    LaurentPoly result = constant(var_, 1);
    LaurentPoly base = *this;
    while (n > 0) {
      if (n & 1u) result *= base;
      n >>= 1;
      if (n > 0) base *= base;
    }
    return result;
  }

  // var -> var^-1
  LaurentPoly inverted() const {
    LaurentPoly r(var_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(-e, c);
    return r;
  }

  Integer value_at_one() const {
    Integer s = 0;
    for (const auto& [e, c] : terms_) s += c;
    return s;
  }

  // Exact division; throws EvalError when the divisor does not divide *this.
  LaurentPoly divided_exactly(const LaurentPoly& divisor) const {
    require_same_var(divisor);
    if (divisor.is_zero()) throw EvalError("division by the zero polynomial");
    LaurentPoly rem = *this;
    LaurentPoly quot(var_);
    const int dlead = divisor.max_exponent();
    const Integer& dcoef = divisor.terms_.rbegin()->second;
    const int dspan = dlead - divisor.min_exponent();
    while (!rem.is_zero() && rem.max_exponent() - rem.min_exponent() >= dspan) {
      const int e = rem.max_exponent();
      const Integer& c = rem.terms_.rbegin()->second;
      if (!mpz_divisible_p(c.get_mpz_t(), dcoef.get_mpz_t())) break;
      Integer q = c / dcoef;
      LaurentPoly step = monomial(var_, e - dlead, q);
      quot += step;
      rem -= step * divisor;
    }
    if (!rem.is_zero()) {
      throw EvalError("polynomial division left remainder " + rem.to_string());
    }
    return quot;
  }

  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
    return a.var_ == b.var_ && a.terms_ == b.terms_;
  }

  // Ascending exponents, e.g. "t + t^3 - t^4", "-A^-3", "0".
  std::string to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      Integer mag = abs(c);
      if (first) {
        if (c < 0) os << '-';
      } else {
        os << (c < 0 ? " - " : " + ");
      }
      first = false;
      if (e == 0) {
        os << mag.get_str();
        continue;
      }
      if (mag != 1) os << mag.get_str() << '*';
      os << var_name(var_);
      if (e != 1) os << '^' << e;
    }
    return os.str();
  }

 private:
  void require_same_var(const LaurentPoly& o) const {
    if (var_ != o.var_) {
      throw EvalError(std::string("variable mismatch: ") + var_name(var_) + " vs " + var_name(o.var_));
    }
  }

  Var var_;
  Terms terms_;
};

/// Truncated power series sum_{n<=N} c_n x^n with exact rational coefficients.
class RationalSeries {
 public:
  explicit RationalSeries(unsigned order = 0) : coeffs_(order + 1, Rational(0)) {}
  explicit RationalSeries(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) coeffs_.emplace_back(0);
  }

  unsigned order() const { return static_cast<unsigned>(coeffs_.size() - 1); }
  const Rational& operator[](unsigned n) const { return coeffs_.at(n); }
  Rational& operator[](unsigned n) { return coeffs_.at(n); }
  const std::vector<Rational>& coefficients() const { return coeffs_; }

  RationalSeries& operator+=(const RationalSeries& o) {
    require_same_order(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  friend RationalSeries operator+(RationalSeries a, const RationalSeries& b) { return a += b; }

  friend RationalSeries operator*(const RationalSeries& a, const RationalSeries& b) {
    a.require_same_order(b);
    RationalSeries r(a.order());
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      if (a.coeffs_[i] == 0) continue;
      for (std::size_t j = 0; i + j < a.coeffs_.size(); ++j) {
        r.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
      }
    }
    return r;
  }

  friend bool operator==(const RationalSeries& a, const RationalSeries& b) {
    return a.coeffs_ == b.coeffs_;
  }

 private:
  void require_same_order(const RationalSeries& o) const {
    if (o.coeffs_.size() != coeffs_.size()) throw EvalError("series truncation order mismatch");
  }

  std::vector<Rational> coeffs_;
};

/// p(e^x) truncated at x^order: t^k contributes sum_n k^n/n! x^n.
inline RationalSeries exp_substitute(const LaurentPoly& p, unsigned order) {
  std::vector<Integer> factorial(order + 1, Integer(1));
  for (unsigned n = 1; n <= order; ++n) factorial[n] = factorial[n - 1] * n;

  std::vector<Integer> sums(order + 1, Integer(0));
  for (const auto& [k, c] : p.terms()) {
    Integer power = 1;
    for (unsigned n = 0; n <= order; ++n) {
      sums[n] += c * power;
      power *= k;
    }
  }
  std::vector<Rational> coeffs;
  coeffs.reserve(order + 1);
  for (unsigned n = 0; n <= order; ++n) coeffs.push_back(make_rational(sums[n], factorial[n]));
  return RationalSeries(std::move(coeffs));
}

/// Sparse polynomial over Q in a fixed number of variables.
class MultiPoly {
 public:
  using Exponent = std::vector<int>;
  using Terms = std::map<Exponent, Rational>;

  explicit MultiPoly(std::size_t nvars = 1) : nvars_(nvars) {}

  static MultiPoly constant(std::size_t nvars, const Rational& c) {
    MultiPoly p(nvars);
    p.add_term(Exponent(nvars, 0), c);
    return p;
  }

  static MultiPoly variable(std::size_t nvars, std::size_t index) {
    Exponent e(nvars, 0);
    e.at(index) = 1;
    MultiPoly p(nvars);
    p.add_term(e, 1);
    return p;
  }

  // C(x_index, k) expanded into monomials.
  static MultiPoly binomial_basis(std::size_t nvars, std::size_t index, unsigned k) {
    MultiPoly p = constant(nvars, 1);
    for (unsigned i = 0; i < k; ++i) {
      p = p * (variable(nvars, index) - constant(nvars, i));
    }
    Integer fact = 1;
    for (unsigned i = 2; i <= k; ++i) fact *= i;
    return p.scaled(make_rational(1, fact));
  }

  std::size_t variable_count() const { return nvars_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Exponent& e, const Rational& c) {
    if (e.size() != nvars_) throw EvalError("exponent arity mismatch");
    Rational v = c;
    v.canonicalize();
    if (v == 0) return;
    auto [it, inserted] = terms_.try_emplace(e, v);
    if (!inserted) {
      it->second += v;
      if (it->second == 0) terms_.erase(it);
    }
  }

  int total_degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) {
      int s = 0;
      for (int k : e) s += k;
      d = std::max(d, s);
    }
    return d;
  }

  MultiPoly& operator+=(const MultiPoly& o) {
    require_same_arity(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  MultiPoly& operator-=(const MultiPoly& o) {
    require_same_arity(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }

  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    a.require_same_arity(b);
    MultiPoly r(a.nvars_);
    Exponent e(a.nvars_);
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
        r.add_term(e, ca * cb);
      }
    }
    return r;
  }

  MultiPoly scaled(const Rational& k) const {
    MultiPoly r(nvars_);
    for (const auto& [e, c] : terms_) r.add_term(e, c * k);
    return r;
  }

  Rational evaluate(std::span<const Integer> point) const {
    if (point.size() != nvars_) {
      throw EvalError("evaluation arity mismatch: expected " + std::to_string(nvars_) +
                      " coordinates, got " + std::to_string(point.size()));
    }
    Rational sum = 0;
    for (const auto& [e, c] : terms_) {
      Integer m = 1;
      for (std::size_t i = 0; i < nvars_; ++i) {
        Integer f;
        mpz_pow_ui(f.get_mpz_t(), point[i].get_mpz_t(), static_cast<unsigned long>(e[i]));
        m *= f;
      }
      sum += c * m;
    }
    sum.canonicalize();
    return sum;
  }

  Rational evaluate(std::span<const long> point) const {
    std::vector<Integer> p(point.begin(), point.end());
    return evaluate(std::span<const Integer>(p));
  }

  friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

  // Graded order (constant term first), e.g. "-3/2*x1 - 3/2*x1^2".
  std::string to_string(const std::vector<std::string>& names = {}) const {
    if (is_zero()) return "0";
    std::vector<std::pair<Exponent, Rational>> sorted(terms_.begin(), terms_.end());
    std::stable_sort(sorted.begin(), sorted.end(), [](const auto& l, const auto& r) {
      int dl = 0, dr = 0;
      for (int k : l.first) dl += k;
      for (int k : r.first) dr += k;
      if (dl != dr) return dl < dr;
      return l.first > r.first;
    });
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : sorted) {
      Rational mag = abs(c);
      if (first) {
        if (c < 0) os << '-';
      } else {
        os << (c < 0 ? " - " : " + ");
      }
      first = false;
      bool constant_term = std::all_of(e.begin(), e.end(), [](int k) { return k == 0; });
      if (constant_term) {
        os << gleamlab::to_string(mag);
        continue;
      }
      bool need_star = false;
      if (mag != 1) {
        os << gleamlab::to_string(mag);
        need_star = true;
      }
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (need_star) os << '*';
        os << (i < names.size() ? names[i] : "x" + std::to_string(i + 1));
        if (e[i] != 1) os << '^' << e[i];
        need_star = true;
      }
    }
    return os.str();
  }

 private:
  void require_same_arity(const MultiPoly& o) const {
    if (o.nvars_ != nvars_) throw EvalError("variable count mismatch");
  }

  std::size_t nvars_;
  Terms terms_;
};

}  // namespace gleamlab
