#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "hamforge/error.hpp"
#include "hamforge/monomial.hpp"

namespace hamforge {

// Sparse multivariate polynomial with terms kept in decreasing graded-lex
// order and no zero coefficients. C is mpq_class or mpz_class.
template <class C>
class PolyT {
 public:
  using Coeff = C;
  using Term = std::pair<Monomial, C>;

  PolyT() = default;
  explicit PolyT(const C& c) {
    if (sgn(c) != 0) terms_.emplace_back(Monomial{}, c);
  }
  explicit PolyT(long c) : PolyT(C(c)) {}

  static PolyT variable(std::uint32_t var, std::uint32_t exp = 1) {
    PolyT p;
    p.terms_.emplace_back(Monomial::variable(var, exp), C(1));
    return p;
  }
  static PolyT monomial(Monomial m, C c) {
    PolyT p;
    if (sgn(c) != 0) p.terms_.emplace_back(std::move(m), std::move(c));
    return p;
  }

  /// Sorts and merges arbitrary terms.
  static PolyT from_terms(std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return a.first.compare(b.first) > 0; });
    PolyT p;
    p.terms_.reserve(terms.size());
    for (auto& t : terms) {
      if (!p.terms_.empty() && p.terms_.back().first == t.first) {
        p.terms_.back().second += t.second;
        if (sgn(p.terms_.back().second) == 0) p.terms_.pop_back();
      } else if (sgn(t.second) != 0) {
        p.terms_.push_back(std::move(t));
      }
    }
    return p;
  }
  /// Takes terms already sorted, merged and nonzero.
  static PolyT from_sorted(std::vector<Term> terms) {
    PolyT p;
    p.terms_ = std::move(terms);
    return p;
  }

  const std::vector<Term>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const noexcept { return terms_.empty() || (terms_.size() == 1 && terms_[0].first.is_one()); }
  bool is_one() const noexcept { return terms_.size() == 1 && terms_[0].first.is_one() && terms_[0].second == 1; }
  bool is_monomial() const noexcept { return terms_.size() == 1; }

  C constant_value() const {
    if (terms_.empty() || !terms_.back().first.is_one()) return C(0);
    return terms_.back().second;
  }
  const Monomial& leading_monomial() const { return terms_.front().first; }
  const C& leading_coeff() const { return terms_.front().second; }
  std::uint32_t total_degree() const { return terms_.empty() ? 0 : terms_.front().first.degree(); }

  std::uint32_t degree_in(std::uint32_t var) const {
    std::uint32_t d = 0;
    for (const auto& t : terms_) d = std::max(d, t.first.exponent(var));
    return d;
  }

  /// Sorted list of variables that occur.
  std::vector<std::uint32_t> variables() const {
    std::vector<std::uint32_t> vs;
    for (const auto& t : terms_)
      for (std::size_t i = 0; i < t.first.size(); ++i) vs.push_back(t.first.var_at(i));
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    return vs;
  }

  bool depends_on(std::uint32_t var) const {
    for (const auto& t : terms_)
      if (t.first.exponent(var) != 0) return true;
    return false;
  }

  /// Largest monomial dividing every term.
  Monomial monomial_content() const {
    if (terms_.empty()) return {};
    Monomial g = terms_.front().first;
    for (const auto& t : terms_) {
      if (g.is_one()) break;
      g = Monomial::gcd(g, t.first);
    }
    return g;
  }

  friend PolyT operator+(const PolyT& a, const PolyT& b) { return merge(a, b, false); }
  friend PolyT operator-(const PolyT& a, const PolyT& b) { return merge(a, b, true); }
  PolyT operator-() const {
    PolyT r = *this;
    for (auto& t : r.terms_) t.second = -t.second;
    return r;
  }
  PolyT& operator+=(const PolyT& b) { return *this = *this + b; }
  PolyT& operator-=(const PolyT& b) { return *this = *this - b; }
  PolyT& operator*=(const PolyT& b) { return *this = *this * b; }

  friend PolyT operator*(const PolyT& a, const PolyT& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (a.size() == 1) return b.mul_term(a.terms_[0].first, a.terms_[0].second);
    if (b.size() == 1) return a.mul_term(b.terms_[0].first, b.terms_[0].second);
    const PolyT& big = a.size() >= b.size() ? a : b;
    const PolyT& small = a.size() >= b.size() ? b : a;
    std::unordered_map<Monomial, C, MonomialHash> acc;
    acc.reserve(big.size() * small.size());
    for (const auto& s : small.terms_)
      for (const auto& t : big.terms_) {
        auto [it, fresh] = acc.try_emplace(s.first * t.first);
        if (fresh)
          it->second = s.second * t.second;
        else
          it->second += s.second * t.second;
      }
    std::vector<Term> terms;
    terms.reserve(acc.size());
    for (auto& [m, c] : acc)
      if (sgn(c) != 0) terms.emplace_back(m, std::move(c));
    std::sort(terms.begin(), terms.end(),
              [](const Term& x, const Term& y) { return x.first.compare(y.first) > 0; });
    return from_sorted(std::move(terms));
  }

  PolyT mul_term(const Monomial& m, const C& c) const {
    if (sgn(c) == 0) return {};
    PolyT r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.emplace_back(t.first * m, t.second * c);
    return r;
  }
  PolyT scaled(const C& c) const { return mul_term(Monomial{}, c); }

  PolyT pow(unsigned e) const {
    PolyT result(C(1)), base = *this;
    while (e) {
      if (e & 1u) result *= base;
      e >>= 1;
      if (e) base *= base;
    }
    return result;
  }

  PolyT derivative(std::uint32_t var) const {
    std::vector<Term> out;
    for (const auto& t : terms_) {
      const auto e = t.first.exponent(var);
      if (e == 0) continue;
      out.emplace_back(t.first.with_exponent(var, e - 1), t.second * C(e));
    }
    return from_terms(std::move(out));
  }

  /// Coefficient of var^k, as a polynomial free of var.
  PolyT coefficient(std::uint32_t var, std::uint32_t k) const {
    std::vector<Term> out;
    for (const auto& t : terms_)
      if (t.first.exponent(var) == k) out.emplace_back(t.first.with_exponent(var, 0), t.second);
    return from_terms(std::move(out));
  }

  /// Dense list of coefficients in powers of var.
  std::vector<PolyT> univariate(std::uint32_t var) const {
    std::vector<std::vector<Term>> buckets(degree_in(var) + 1);
    for (const auto& t : terms_) {
      const auto e = t.first.exponent(var);
      buckets[e].emplace_back(t.first.with_exponent(var, 0), t.second);
    }
    std::vector<PolyT> out;
    out.reserve(buckets.size());
    for (auto& b : buckets) out.push_back(from_terms(std::move(b)));
    return out;
  }

  static PolyT from_univariate(const std::vector<PolyT>& coeffs, std::uint32_t var) {
    std::vector<Term> out;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      const Monomial m = Monomial::variable(var, static_cast<std::uint32_t>(k));
      for (const auto& t : coeffs[k].terms_) out.emplace_back(t.first * m, t.second);
    }
    return from_terms(std::move(out));
  }

  /// Substitutes var := value.
  PolyT evaluate(std::uint32_t var, const C& value) const {
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
      const auto e = t.first.exponent(var);
      if (e == 0) {
        out.push_back(t);
      } else {
        C v = t.second * power(value, e);
        if (sgn(v) != 0) out.emplace_back(t.first.with_exponent(var, 0), std::move(v));
      }
    }
    return from_terms(std::move(out));
  }

  /// Substitutes several variables by constants at once.
  PolyT evaluate(const std::map<std::uint32_t, C>& values) const {
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
      C c = t.second;
      Monomial rest;
      for (std::size_t i = 0; i < t.first.size(); ++i) {
        auto it = values.find(t.first.var_at(i));
        if (it == values.end())
          rest = rest * Monomial::variable(t.first.var_at(i), t.first.exp_at(i));
        else
          c *= power(it->second, t.first.exp_at(i));
      }
      if (sgn(c) != 0) out.emplace_back(std::move(rest), std::move(c));
    }
    return from_terms(std::move(out));
  }

  friend bool operator==(const PolyT& a, const PolyT& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
      if (!(a.terms_[i].first == b.terms_[i].first) || a.terms_[i].second != b.terms_[i].second) return false;
    return true;
  }

  /// Total order used to sort lists of polynomials.
  int compare(const PolyT& b) const {
    const std::size_t n = std::min(size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (int c = terms_[i].first.compare(b.terms_[i].first)) return c;
      if (int c = cmp(terms_[i].second, b.terms_[i].second)) return c > 0 ? 1 : -1;
    }
    if (size() != b.size()) return size() > b.size() ? 1 : -1;
    return 0;
  }

  std::size_t hash() const {
    std::size_t h = terms_.size();
    for (const auto& t : terms_) {
      h = h * 1000003u ^ t.first.hash();
      h = h * 1000003u ^ coeff_hash(t.second);
    }
    return h;
  }

  static C power(const C& base, std::uint32_t e) {
    C r(1), b = base;
    while (e) {
      if (e & 1u) r *= b;
      e >>= 1;
      if (e) b *= b;
    }
    return r;
  }

 private:
  static std::size_t coeff_hash(const mpz_class& z) { return mpz_get_ui(z.get_mpz_t()) ^ (sgn(z) < 0 ? 0x5bd1e995u : 0u); }
  static std::size_t coeff_hash(const mpq_class& q) {
    return coeff_hash(q.get_num()) * 31u + mpz_get_ui(q.get_den_mpz_t());
  }

  static PolyT merge(const PolyT& a, const PolyT& b, bool subtract) {
    PolyT r;
    r.terms_.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
      const int c = a.terms_[i].first.compare(b.terms_[j].first);
      if (c > 0) {
        r.terms_.push_back(a.terms_[i++]);
      } else if (c < 0) {
        r.terms_.emplace_back(b.terms_[j].first, subtract ? C(-b.terms_[j].second) : b.terms_[j].second);
        ++j;
      } else {
        C s = subtract ? C(a.terms_[i].second - b.terms_[j].second) : C(a.terms_[i].second + b.terms_[j].second);
        if (sgn(s) != 0) r.terms_.emplace_back(a.terms_[i].first, std::move(s));
        ++i, ++j;
      }
    }
    while (i < a.size()) r.terms_.push_back(a.terms_[i++]);
    for (; j < b.size(); ++j)
      r.terms_.emplace_back(b.terms_[j].first, subtract ? C(-b.terms_[j].second) : b.terms_[j].second);
    return r;
  }

  std::vector<Term> terms_;
};

using Poly = PolyT<mpq_class>;
using ZPoly = PolyT<mpz_class>;

// Conversions between rational and integer polynomials.
// to_integer returns (primitive integer poly with positive leading coeff, scale) with p = scale * z.
std::pair<ZPoly, mpq_class> to_integer(const Poly& p);
Poly to_rational(const ZPoly& z);

mpz_class content(const ZPoly& p);
ZPoly primitive_part(const ZPoly& p);

/// Exact quotient a / b if b divides a, otherwise nullopt.
std::optional<Poly> divide_exact(const Poly& a, const Poly& b);
std::optional<ZPoly> divide_exact(const ZPoly& a, const ZPoly& b);

/// Division with remainder by a polynomial whose leading coefficient is a unit; multivariate
/// division by the single divisor in graded-lex order.
std::pair<Poly, Poly> divide(const Poly& a, const Poly& b);

/// Greatest common divisor: primitive with positive leading coefficient over Z, monic over Q.
ZPoly gcd(const ZPoly& a, const ZPoly& b);
Poly gcd(const Poly& a, const Poly& b);

/// Monic normalization over Q (zero stays zero).
Poly monic(const Poly& p);

/// Factorization over Q: primitive integer irreducibles with positive leading coefficient,
/// their multiplicities, and the remaining rational constant.
struct Factorization {
  mpq_class unit;
  std::vector<std::pair<Poly, int>> factors;
};
Factorization factor(const Poly& p);

/// Substitutes var := var + c.
Poly shift(const Poly& p, std::uint32_t var, const mpq_class& c);

}  // namespace hamforge
