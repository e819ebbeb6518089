// Factorization over Q.
//
// Univariate: Cantor-Zassenhaus modulo a small prime, linear Hensel lifting
// to a Mignotte-sized modulus, then subset recombination with trial division.
// Multivariate: pick a good integer evaluation point for all but the main
// variable, factor the univariate image, lift the monic factors as power
// series in the shifted variables and recombine.

#include <map>
#include <numeric>
#include <random>
#include <set>

#include "hamforge/poly.hpp"

namespace hamforge {

Poly shift(const Poly& p, std::uint32_t var, const mpq_class& c) {
  if (sgn(c) == 0 || !p.depends_on(var)) return p;
  const auto coeffs = p.univariate(var);
  Poly lin = Poly::variable(var) + Poly(c);
  Poly r;
  for (std::size_t k = coeffs.size(); k-- > 0;) r = r * lin + coeffs[k];
  return r;
}

namespace {

// ---------------------------------------------------------------------------
// Dense univariate arithmetic modulo a small prime (coefficients low to high).

using PVec = std::vector<std::int64_t>;

struct ModP {
  std::int64_t p;

  std::int64_t norm(std::int64_t a) const {
    a %= p;
    return a < 0 ? a + p : a;
  }
  std::int64_t inv(std::int64_t a) const {
    std::int64_t r = 1, b = norm(a), e = p - 2;
    while (e) {
      if (e & 1) r = r * b % p;
      b = b * b % p;
      e >>= 1;
    }
    return r;
  }
  static void trim(PVec& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
  }
  PVec sub(const PVec& a, const PVec& b) const {
    PVec r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = norm(r[i] - b[i]);
    trim(r);
    return r;
  }
  PVec add(const PVec& a, const PVec& b) const {
    PVec r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = (r[i] + b[i]) % p;
    trim(r);
    return r;
  }
  PVec mul(const PVec& a, const PVec& b) const {
    if (a.empty() || b.empty()) return {};
    PVec r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    }
    trim(r);
    return r;
  }
  PVec scale(const PVec& a, std::int64_t c) const {
    PVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * norm(c) % p;
    trim(r);
    return r;
  }
  PVec monic(const PVec& a) const { return a.empty() ? a : scale(a, inv(a.back())); }

  // a = q*b + r
  void divrem(const PVec& a, const PVec& b, PVec& q, PVec& r) const {
    r = a;
    q.clear();
    if (a.size() < b.size()) return;
    q.assign(a.size() - b.size() + 1, 0);
    const std::int64_t li = inv(b.back());
    for (std::size_t k = a.size(); k-- >= b.size();) {
      const std::int64_t c = r[k] * li % p;
      q[k - b.size() + 1] = c;
      if (c != 0)
        for (std::size_t j = 0; j < b.size(); ++j) r[k - b.size() + 1 + j] = norm(r[k - b.size() + 1 + j] - c * b[j]);
      if (k == b.size() - 1) break;
    }
    trim(q);
    trim(r);
  }
  PVec rem(const PVec& a, const PVec& b) const {
    PVec q, r;
    divrem(a, b, q, r);
    return r;
  }
  PVec quo(const PVec& a, const PVec& b) const {
    PVec q, r;
    divrem(a, b, q, r);
    return q;
  }
  PVec gcd(PVec a, PVec b) const {
    while (!b.empty()) {
      PVec r = rem(a, b);
      a = std::move(b);
      b = std::move(r);
    }
    return monic(a);
  }
  // s*a + t*b = g (monic)
  PVec extgcd(const PVec& a, const PVec& b, PVec& s, PVec& t) const {
    PVec r0 = a, r1 = b, s0{1}, s1{}, t0{}, t1{1};
    while (!r1.empty()) {
      PVec q, r;
      divrem(r0, r1, q, r);
      PVec s2 = sub(s0, mul(q, s1)), t2 = sub(t0, mul(q, t1));
      r0 = std::move(r1), r1 = std::move(r);
      s0 = std::move(s1), s1 = std::move(s2);
      t0 = std::move(t1), t1 = std::move(t2);
    }
    const std::int64_t li = inv(r0.back());
    s = scale(s0, li);
    t = scale(t0, li);
    return scale(r0, li);
  }
  PVec powmod(PVec base, mpz_class e, const PVec& m) const {
    PVec r{1};
    base = rem(base, m);
    while (sgn(e) > 0) {
      if (mpz_odd_p(e.get_mpz_t())) r = rem(mul(r, base), m);
      e >>= 1;
      if (sgn(e) > 0) base = rem(mul(base, base), m);
    }
    return r;
  }
  PVec derivative(const PVec& a) const {
    PVec r;
    for (std::size_t i = 1; i < a.size(); ++i) r.push_back(a[i] * static_cast<std::int64_t>(i % p) % p);
    trim(r);
    return r;
  }
};

void equal_degree_split(const ModP& F, const PVec& g, std::size_t d, std::mt19937_64& rng, std::vector<PVec>& out) {
  const std::size_t n = g.size() - 1;
  if (n == d) {
    out.push_back(g);
    return;
  }
  mpz_class e;
  mpz_ui_pow_ui(e.get_mpz_t(), static_cast<unsigned long>(F.p), d);
  e = (e - 1) / 2;
  while (true) {
    PVec a(n);
    for (auto& c : a) c = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(F.p));
    ModP::trim(a);
    if (a.size() < 2) continue;
    PVec b = F.sub(F.powmod(a, e, g), PVec{1});
    PVec h = F.gcd(g, b);
    if (h.size() > 1 && h.size() < g.size()) {
      equal_degree_split(F, h, d, rng, out);
      equal_degree_split(F, F.quo(g, h), d, rng, out);
      return;
    }
  }
}

// Monic irreducible factors of a monic squarefree polynomial mod p.
std::vector<PVec> factor_mod_p(const ModP& F, PVec f) {
  std::vector<PVec> out;
  std::mt19937_64 rng(0x5eed + static_cast<std::uint64_t>(F.p));
  PVec h{0, 1};
  const PVec x{0, 1};
  for (std::size_t d = 1; f.size() - 1 >= 2 * d; ++d) {
    h = F.powmod(h, mpz_class(static_cast<unsigned long>(F.p)), f);
    PVec g = F.gcd(f, F.sub(h, x));
    if (g.size() > 1) {
      equal_degree_split(F, g, d, rng, out);
      f = F.quo(f, g);
      h = F.rem(h, f);
    }
  }
  if (f.size() > 1) out.push_back(F.monic(f));
  return out;
}

// ---------------------------------------------------------------------------
// Dense univariate integer polynomials.

using ZVec = std::vector<mpz_class>;

void trim(ZVec& a) {
  while (!a.empty() && sgn(a.back()) == 0) a.pop_back();
}

ZVec zmul(const ZVec& a, const ZVec& b) {
  if (a.empty() || b.empty()) return {};
  ZVec r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

ZVec zmod(ZVec a, const mpz_class& m) {
  for (auto& c : a) mpz_mod(c.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
  trim(a);
  return a;
}

ZVec zsymmetric(ZVec a, const mpz_class& m) {
  const mpz_class half = m / 2;
  for (auto& c : a) {
    mpz_mod(c.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
    if (c > half) c -= m;
  }
  trim(a);
  return a;
}

PVec to_modp(const ZVec& a, const ModP& F) {
  PVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = static_cast<std::int64_t>(mpz_fdiv_ui(a[i].get_mpz_t(), static_cast<unsigned long>(F.p)));
  ModP::trim(r);
  return r;
}

ZVec from_modp(const PVec& a) {
  ZVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = static_cast<long>(a[i]);
  return r;
}

ZVec zprimitive(ZVec a) {
  mpz_class g = 0;
  for (auto& c : a) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  if (sgn(a.back()) < 0) g = -g;
  for (auto& c : a) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
  return a;
}

// Exact division over Z, nullopt when it does not divide.
std::optional<ZVec> zdivide(const ZVec& a, const ZVec& b) {
  if (a.size() < b.size()) return std::nullopt;
  ZVec r = a, q(a.size() - b.size() + 1);
  for (std::size_t k = a.size(); k-- >= b.size();) {
    if (!mpz_divisible_p(r[k].get_mpz_t(), b.back().get_mpz_t())) return std::nullopt;
    mpz_class c;
    mpz_divexact(c.get_mpz_t(), r[k].get_mpz_t(), b.back().get_mpz_t());
    for (std::size_t j = 0; j < b.size(); ++j) r[k - b.size() + 1 + j] -= c * b[j];
    q[k - b.size() + 1] = std::move(c);
    if (k == b.size() - 1) break;
  }
  for (auto& c : r)
    if (sgn(c) != 0) return std::nullopt;
  trim(q);
  return q;
}

bool is_prime_small(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

template <class F>
void for_each_subset(std::size_t n, std::size_t k, F&& fn) {
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    if (fn(idx)) return;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// Factors a primitive squarefree integer polynomial of degree >= 1.
std::vector<ZVec> zassenhaus(const ZVec& f) {
  const std::size_t n = f.size() - 1;
  if (n <= 1) return {f};

  // Prime selection: fewest modular factors among a few good primes.
  std::int64_t best_p = 0;
  std::vector<PVec> best;
  int good = 0;
  for (std::int64_t p = 3; good < 3 && p < 50000; p += 2) {
    if (!is_prime_small(p)) continue;
    if (mpz_fdiv_ui(f.back().get_mpz_t(), static_cast<unsigned long>(p)) == 0) continue;
    ModP F{p};
    PVec fp = F.monic(to_modp(f, F));
    if (F.gcd(fp, F.derivative(fp)).size() != 1) continue;
    auto facs = factor_mod_p(F, fp);
    ++good;
    if (best_p == 0 || facs.size() < best.size()) {
      best_p = p;
      best = std::move(facs);
    }
    if (best.size() == 1) break;
  }
  if (best.size() <= 1) return {f};

  const ModP F{best_p};
  const mpz_class p(static_cast<long>(best_p));
  mpz_class norm = 0;
  for (const auto& c : f)
    if (mpz_cmpabs(c.get_mpz_t(), norm.get_mpz_t()) > 0) norm = abs(c);
  mpz_class bound = norm * abs(f.back()) * (mpz_class(sqrt(mpz_class(n + 1))) + 1);
  bound <<= static_cast<mp_bitcnt_t>(n + 1);
  mpz_class P = p;
  unsigned K = 1;
  while (P <= 2 * bound) P *= p, ++K;

  // Bezout multipliers: sum_i u_i * prod_{j != i} g_j = 1 mod p.
  const std::size_t r = best.size();
  std::vector<PVec> u(r);
  for (std::size_t i = 0; i < r; ++i) {
    PVec others{1};
    for (std::size_t j = 0; j < r; ++j)
      if (j != i) others = F.mul(others, best[j]);
    PVec s, t;
    F.extgcd(F.rem(others, best[i]), best[i], s, t);
    u[i] = s;
  }

  mpz_class lc_inv;
  mpz_invert(lc_inv.get_mpz_t(), f.back().get_mpz_t(), P.get_mpz_t());
  ZVec target(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) target[i] = f[i] * lc_inv;
  target = zmod(target, P);

  std::vector<ZVec> G(r);
  for (std::size_t i = 0; i < r; ++i) G[i] = from_modp(best[i]);
  mpz_class pk = p;
  for (unsigned k = 1; k < K; ++k) {
    const mpz_class next = pk * p;
    ZVec prod{1};
    for (const auto& g : G) prod = zmod(zmul(prod, g), next);
    ZVec e = zmod(target, next);
    e.resize(std::max(e.size(), prod.size()));
    for (std::size_t i = 0; i < prod.size(); ++i) e[i] -= prod[i];
    e = zmod(e, next);
    for (auto& c : e) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), pk.get_mpz_t());
    const PVec ep = to_modp(e, F);
    for (std::size_t i = 0; i < r; ++i) {
      const PVec d = F.rem(F.mul(u[i], ep), best[i]);
      if (G[i].size() < d.size()) G[i].resize(d.size());
      for (std::size_t j = 0; j < d.size(); ++j) G[i][j] += pk * d[j];
    }
    pk = next;
  }

  std::vector<ZVec> out;
  std::vector<ZVec> live = G;
  ZVec cur = f;
  for (std::size_t s = 1; 2 * s <= live.size();) {
    bool found = false;
    for_each_subset(live.size(), s, [&](const std::vector<std::size_t>& idx) {
      ZVec cand{cur.back()};
      for (auto i : idx) cand = zmod(zmul(cand, live[i]), P);
      cand = zprimitive(zsymmetric(cand, P));
      if (auto q = zdivide(cur, cand)) {
        out.push_back(cand);
        cur = *q;
        std::vector<ZVec> rest;
        for (std::size_t i = 0; i < live.size(); ++i)
          if (std::find(idx.begin(), idx.end(), i) == idx.end()) rest.push_back(live[i]);
        live = std::move(rest);
        found = true;
        return true;
      }
      return false;
    });
    if (!found) ++s;
  }
  if (cur.size() > 1) out.push_back(zprimitive(cur));
  return out;
}

// ---------------------------------------------------------------------------
// Conversions between sparse polynomials and dense univariate vectors.

ZVec dense(const ZPoly& p, std::uint32_t var) {
  ZVec r(p.degree_in(var) + 1);
  for (const auto& t : p.terms()) r[t.first.exponent(var)] = t.second;
  return r;
}

ZPoly sparse(const ZVec& a, std::uint32_t var) {
  std::vector<ZPoly::Term> terms;
  for (std::size_t k = a.size(); k-- > 0;)
    if (sgn(a[k]) != 0) terms.emplace_back(Monomial::variable(var, static_cast<std::uint32_t>(k)), a[k]);
  return ZPoly::from_sorted(std::move(terms));
}

// Dense univariate arithmetic over Q.
using QVec = std::vector<mpq_class>;

void trim(QVec& a) {
  while (!a.empty() && sgn(a.back()) == 0) a.pop_back();
}

QVec qmul(const QVec& a, const QVec& b) {
  if (a.empty() || b.empty()) return {};
  QVec r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

QVec qsub(const QVec& a, const QVec& b) {
  QVec r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  trim(r);
  return r;
}

void qdivrem(const QVec& a, const QVec& b, QVec& q, QVec& r) {
  r = a;
  q.clear();
  if (a.size() < b.size()) return;
  q.assign(a.size() - b.size() + 1, mpq_class(0));
  for (std::size_t k = a.size(); k-- >= b.size();) {
    mpq_class c = r[k] / b.back();
    if (sgn(c) != 0)
      for (std::size_t j = 0; j < b.size(); ++j) r[k - b.size() + 1 + j] -= c * b[j];
    q[k - b.size() + 1] = c;
    if (k == b.size() - 1) break;
  }
  trim(q);
  trim(r);
}

QVec qrem(const QVec& a, const QVec& b) {
  QVec q, r;
  qdivrem(a, b, q, r);
  return r;
}

// s with s*a = 1 mod m (a and m coprime).
QVec qinverse_mod(const QVec& a, const QVec& m) {
  QVec r0 = m, r1 = qrem(a, m), s0{}, s1{mpq_class(1)};
  while (!r1.empty()) {
    QVec q, r;
    qdivrem(r0, r1, q, r);
    QVec s2 = qsub(s0, qmul(q, s1));
    r0 = std::move(r1), r1 = std::move(r);
    s0 = std::move(s1), s1 = std::move(s2);
  }
  if (r0.size() != 1) throw MathError("factor: lifting factors not coprime");
  for (auto& c : s0) c /= r0[0];
  return qrem(s0, m);
}

// ---------------------------------------------------------------------------
// Multivariate lifting. Variables other than x play the role of series
// variables z after the shift y = z + a.

std::uint32_t z_degree(const Monomial& m, std::uint32_t x) { return m.degree() - m.exponent(x); }

Poly truncate(const Poly& p, std::uint32_t x, std::uint32_t D) {
  std::vector<Poly::Term> terms;
  for (const auto& t : p.terms())
    if (z_degree(t.first, x) <= D) terms.push_back(t);
  return Poly::from_sorted(std::move(terms));
}

Poly mul_trunc(const Poly& a, const Poly& b, std::uint32_t x, std::uint32_t D) {
  std::vector<Poly::Term> terms;
  for (const auto& s : a.terms()) {
    const auto ds = z_degree(s.first, x);
    if (ds > D) continue;
    for (const auto& t : b.terms())
      if (ds + z_degree(t.first, x) <= D) terms.emplace_back(s.first * t.first, s.second * t.second);
  }
  return Poly::from_terms(std::move(terms));
}

Poly series_inverse(const Poly& L, std::uint32_t x, std::uint32_t D) {
  const mpq_class l0 = L.constant_value();
  const Poly tail = (L - Poly(l0)).scaled(-1 / l0);
  Poly result(mpq_class(1)), power(mpq_class(1));
  for (std::uint32_t k = 1; k <= D; ++k) {
    power = mul_trunc(power, tail, x, D);
    if (power.is_zero()) break;
    result += power;
  }
  return result.scaled(1 / l0);
}

std::vector<Poly> hensel_lift(const Poly& F, const std::vector<QVec>& g, std::uint32_t x, std::uint32_t D) {
  const std::size_t r = g.size();
  std::vector<QVec> u(r);
  for (std::size_t i = 0; i < r; ++i) {
    QVec others{mpq_class(1)};
    for (std::size_t j = 0; j < r; ++j)
      if (j != i) others = qmul(others, g[j]);
    u[i] = qinverse_mod(others, g[i]);
  }
  std::vector<Poly> G(r);
  for (std::size_t i = 0; i < r; ++i) {
    std::vector<Poly::Term> terms;
    for (std::size_t k = 0; k < g[i].size(); ++k)
      if (sgn(g[i][k]) != 0) terms.emplace_back(Monomial::variable(x, static_cast<std::uint32_t>(k)), g[i][k]);
    G[i] = Poly::from_terms(std::move(terms));
  }
  for (std::uint32_t k = 1; k <= D; ++k) {
    Poly prod(mpq_class(1));
    for (const auto& Gi : G) prod = mul_trunc(prod, Gi, x, k);
    const Poly err = truncate(F, x, k) - prod;
    // Group the degree-k part of the error by z-monomial.
    std::map<std::vector<std::uint32_t>, std::pair<Monomial, QVec>> groups;
    for (const auto& t : err.terms()) {
      if (z_degree(t.first, x) != k) continue;
      const Monomial zm = t.first.with_exponent(x, 0);
      std::vector<std::uint32_t> key;
      for (std::size_t i = 0; i < zm.size(); ++i) key.push_back(zm.var_at(i) << 16 | zm.exp_at(i));
      auto& slot = groups[key];
      slot.first = zm;
      const auto e = t.first.exponent(x);
      if (slot.second.size() <= e) slot.second.resize(e + 1);
      slot.second[e] = t.second;
    }
    for (auto& [key, slot] : groups) {
      trim(slot.second);
      for (std::size_t i = 0; i < r; ++i) {
        const QVec d = qrem(qmul(u[i], slot.second), g[i]);
        std::vector<Poly::Term> terms;
        for (std::size_t j = 0; j < d.size(); ++j)
          if (sgn(d[j]) != 0) terms.emplace_back(slot.first * Monomial::variable(x, static_cast<std::uint32_t>(j)), d[j]);
        G[i] += Poly::from_terms(std::move(terms));
      }
    }
  }
  return G;
}

std::uint32_t y_degree(const ZPoly& p, std::uint32_t x) {
  std::uint32_t d = 0;
  for (const auto& t : p.terms()) d = std::max(d, z_degree(t.first, x));
  return d;
}

ZPoly leading_in(const ZPoly& f, std::uint32_t x) { return f.coefficient(x, f.degree_in(x)); }

// Removes the content with respect to x (a polynomial in the other variables).
ZPoly primitive_in_var(const ZPoly& p, std::uint32_t x) {
  ZPoly cont;
  for (const auto& k : p.univariate(x)) {
    cont = gcd(cont, k);
    if (cont.is_constant()) return primitive_part(p);
  }
  return primitive_part(*divide_exact(p, cont));
}

bool squarefree_univariate(const ZVec& f) {
  ZPoly F = sparse(f, 0), dF = F.derivative(0);
  return gcd(F, dF).is_constant();
}

// f: squarefree, primitive in x, deg_x f >= 2, at least one other variable.
std::vector<ZPoly> factor_multivariate(const ZPoly& f, std::uint32_t x) {
  std::vector<std::uint32_t> ys;
  for (auto v : f.variables())
    if (v != x) ys.push_back(v);
  const ZPoly lc = leading_in(f, x);

  // Evaluation point search: deterministic small integers.
  std::mt19937_64 rng(0xFAC7u + ys.size());
  std::vector<mpz_class> best_point;
  std::vector<ZVec> best_factors;
  int tried = 0, good = 0;
  for (long radius = 1; good < 3 && tried < 200; ++tried) {
    if (tried % 20 == 19) ++radius;
    std::map<std::uint32_t, mpz_class> at;
    std::vector<mpz_class> point;
    for (auto y : ys) {
      const long v = static_cast<long>(rng() % static_cast<std::uint64_t>(2 * radius + 1)) - radius;
      point.emplace_back(v);
      at[y] = v;
    }
    if (lc.evaluate(at).is_zero()) continue;
    ZPoly img = f.evaluate(at);
    ZVec dimg = dense(img, x);
    if (!squarefree_univariate(dimg)) continue;
    ++good;
    ZVec prim = zprimitive(dimg);
    auto facs = zassenhaus(prim);
    if (best_point.empty() || facs.size() < best_factors.size()) {
      best_point = point;
      best_factors = std::move(facs);
    }
    if (best_factors.size() == 1) break;
  }
  if (best_point.empty()) throw MathError("factor: no usable evaluation point");
  if (best_factors.size() == 1) return {f};

  std::vector<QVec> g;
  for (const auto& fac : best_factors) {
    QVec q(fac.size());
    for (std::size_t i = 0; i < fac.size(); ++i) q[i] = mpq_class(fac[i]) / mpq_class(fac.back());
    g.push_back(std::move(q));
  }

  auto shifted = [&](const ZPoly& p) {
    Poly r = to_rational(p);
    for (std::size_t j = 0; j < ys.size(); ++j) r = shift(r, ys[j], mpq_class(best_point[j]));
    return r;
  };
  auto unshifted = [&](Poly r) {
    for (std::size_t j = 0; j < ys.size(); ++j) r = shift(r, ys[j], mpq_class(-best_point[j]));
    return r;
  };

  const std::uint32_t D = y_degree(f, x);
  const Poly Fmonic = mul_trunc(shifted(f), series_inverse(shifted(lc), x, D), x, D);
  std::vector<Poly> live = hensel_lift(Fmonic, g, x, D);

  std::vector<ZPoly> out;
  ZPoly cur = f;
  for (std::size_t s = 1; 2 * s <= live.size();) {
    bool found = false;
    const Poly Lz = shifted(leading_in(cur, x));
    const std::uint32_t Dc = y_degree(cur, x);
    for_each_subset(live.size(), s, [&](const std::vector<std::size_t>& idx) {
      Poly cand = Lz;
      for (auto i : idx) cand = mul_trunc(cand, live[i], x, Dc);
      ZPoly zc = to_integer(unshifted(cand)).first;
      if (zc.degree_in(x) == 0) return false;
      zc = primitive_in_var(zc, x);
      if (auto q = divide_exact(cur, zc)) {
        out.push_back(zc);
        cur = *q;
        std::vector<Poly> rest;
        for (std::size_t i = 0; i < live.size(); ++i)
          if (std::find(idx.begin(), idx.end(), i) == idx.end()) rest.push_back(live[i]);
        live = std::move(rest);
        found = true;
        return true;
      }
      return false;
    });
    if (!found) ++s;
  }
  if (!cur.is_constant()) out.push_back(primitive_part(cur));
  return out;
}

// Yun's squarefree decomposition in x of a polynomial primitive in x.
std::vector<std::pair<ZPoly, int>> yun(const ZPoly& f, std::uint32_t x) {
  std::vector<std::pair<ZPoly, int>> out;
  const ZPoly df = f.derivative(x);
  const ZPoly a0 = gcd(f, df);
  ZPoly b = *divide_exact(f, a0);
  ZPoly c = *divide_exact(df, a0);
  ZPoly d = c - b.derivative(x);
  for (int i = 1; b.degree_in(x) > 0; ++i) {
    const ZPoly a = gcd(b, d);
    if (a.degree_in(x) > 0) out.emplace_back(a, i);
    b = *divide_exact(b, a);
    c = *divide_exact(d, a);
    d = c - b.derivative(x);
  }
  return out;
}

void factor_rec(ZPoly f, int mult, std::vector<std::pair<ZPoly, int>>& out) {
  f = primitive_part(f);
  const Monomial m = f.monomial_content();
  for (std::size_t i = 0; i < m.size(); ++i) out.emplace_back(ZPoly::variable(m.var_at(i)), mult * static_cast<int>(m.exp_at(i)));
  if (!m.is_one()) {
    std::vector<ZPoly::Term> terms;
    for (const auto& t : f.terms()) terms.emplace_back(t.first / m, t.second);
    f = ZPoly::from_terms(std::move(terms));
  }
  if (f.is_constant()) return;

  const auto vars = f.variables();
  std::uint32_t x = vars.front();
  for (auto v : vars)
    if (f.degree_in(v) < f.degree_in(x)) x = v;

  if (vars.size() > 1) {
    const auto coeffs = f.univariate(x);
    ZPoly cont;
    for (const auto& k : coeffs) {
      cont = gcd(cont, k);
      if (cont.is_constant()) break;
    }
    if (!cont.is_constant()) {
      factor_rec(cont, mult, out);
      f = *divide_exact(f, cont);
    }
  }
  if (f.degree_in(x) == 1) {
    out.emplace_back(primitive_part(f), mult);
    return;
  }
  for (auto& [a, e] : yun(f, x)) {
    if (a.degree_in(x) == 1) {
      out.emplace_back(primitive_part(a), mult * e);
    } else if (a.variables().size() == 1) {
      for (auto& z : zassenhaus(zprimitive(dense(a, x)))) out.emplace_back(primitive_part(sparse(z, x)), mult * e);
    } else {
      for (auto& z : factor_multivariate(a, x)) out.emplace_back(primitive_part(z), mult * e);
    }
  }
}

}  // namespace

Factorization factor(const Poly& p) {
  if (p.is_zero()) throw MathError("factor: zero polynomial");
  Factorization result;
  auto [z, scale] = to_integer(p);
  std::vector<std::pair<ZPoly, int>> raw;
  factor_rec(z, 1, raw);
  std::sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) { return a.first.compare(b.first) < 0; });
  Poly product(mpq_class(1));
  for (auto& [fac, e] : raw) {
    Poly q = to_rational(fac);
    if (!result.factors.empty() && result.factors.back().first == q)
      result.factors.back().second += e;
    else
      result.factors.emplace_back(q, e);
    product *= q.pow(static_cast<unsigned>(e));
  }
  result.unit = p.leading_coeff() / product.leading_coeff();
  return result;
}

}  // namespace hamforge
