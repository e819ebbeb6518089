#include "hamforge/poly.hpp"

#include <set>

namespace hamforge {

std::pair<ZPoly, mpq_class> to_integer(const Poly& p) {
  if (p.is_zero()) return {ZPoly{}, mpq_class(0)};
  mpz_class den = 1, num = 0;
  for (const auto& t : p.terms()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.second.get_den_mpz_t());
  std::vector<ZPoly::Term> terms;
  terms.reserve(p.size());
  for (const auto& t : p.terms()) {
    mpz_class c = t.second.get_num() * (den / t.second.get_den());
    mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), c.get_mpz_t());
    terms.emplace_back(t.first, std::move(c));
  }
  if (sgn(terms.front().second) < 0) num = -num;
  for (auto& t : terms) mpz_divexact(t.second.get_mpz_t(), t.second.get_mpz_t(), num.get_mpz_t());
  mpq_class scale(num, den);
  scale.canonicalize();
  return {ZPoly::from_sorted(std::move(terms)), scale};
}

Poly to_rational(const ZPoly& z) {
  std::vector<Poly::Term> terms;
  terms.reserve(z.size());
  for (const auto& t : z.terms()) terms.emplace_back(t.first, mpq_class(t.second));
  return Poly::from_sorted(std::move(terms));
}

mpz_class content(const ZPoly& p) {
  mpz_class g = 0;
  for (const auto& t : p.terms()) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.second.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

ZPoly primitive_part(const ZPoly& p) {
  if (p.is_zero()) return p;
  mpz_class c = content(p);
  if (sgn(p.leading_coeff()) < 0) c = -c;
  if (c == 1) return p;
  std::vector<ZPoly::Term> terms;
  terms.reserve(p.size());
  for (const auto& t : p.terms()) {
    mpz_class q;
    mpz_divexact(q.get_mpz_t(), t.second.get_mpz_t(), c.get_mpz_t());
    terms.emplace_back(t.first, std::move(q));
  }
  return ZPoly::from_sorted(std::move(terms));
}

Poly monic(const Poly& p) {
  if (p.is_zero() || p.leading_coeff() == 1) return p;
  mpq_class inv = 1 / p.leading_coeff();
  return p.scaled(inv);
}

namespace {

template <class C>
bool coeff_divide(const C& a, const C& b, C& q);

template <>
bool coeff_divide(const mpq_class& a, const mpq_class& b, mpq_class& q) {
  q = a / b;
  return true;
}

template <>
bool coeff_divide(const mpz_class& a, const mpz_class& b, mpz_class& q) {
  if (!mpz_divisible_p(a.get_mpz_t(), b.get_mpz_t())) return false;
  mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return true;
}

// Quick necessary conditions: degrees per variable must fit.
template <class C>
bool degrees_fit(const PolyT<C>& a, const PolyT<C>& b) {
  if (b.total_degree() > a.total_degree()) return false;
  for (auto v : b.variables())
    if (b.degree_in(v) > a.degree_in(v)) return false;
  return true;
}

template <class C>
std::optional<PolyT<C>> exact_quotient(const PolyT<C>& a, const PolyT<C>& b) {
  if (b.is_zero()) throw MathError("division by zero polynomial");
  if (a.is_zero()) return PolyT<C>{};
  if (b.is_constant()) {
    std::vector<typename PolyT<C>::Term> terms;
    terms.reserve(a.size());
    const C& d = b.leading_coeff();
    for (const auto& t : a.terms()) {
      C q;
      if (!coeff_divide(t.second, d, q)) return std::nullopt;
      terms.emplace_back(t.first, std::move(q));
    }
    return PolyT<C>::from_sorted(std::move(terms));
  }
  if (!degrees_fit(a, b)) return std::nullopt;
  if (b.is_monomial()) {
    std::vector<typename PolyT<C>::Term> terms;
    terms.reserve(a.size());
    const auto& [bm, bc] = b.terms()[0];
    for (const auto& t : a.terms()) {
      if (!bm.divides(t.first)) return std::nullopt;
      C q;
      if (!coeff_divide(t.second, bc, q)) return std::nullopt;
      terms.emplace_back(t.first / bm, std::move(q));
    }
    return PolyT<C>::from_sorted(std::move(terms));
  }
  const Monomial& lm = b.leading_monomial();
  const C& lc = b.leading_coeff();
  std::vector<typename PolyT<C>::Term> quot;
  PolyT<C> r = a;
  while (!r.is_zero()) {
    const auto& [rm, rc] = r.terms().front();
    if (!lm.divides(rm)) return std::nullopt;
    C q;
    if (!coeff_divide(rc, lc, q)) return std::nullopt;
    Monomial m = rm / lm;
    r -= b.mul_term(m, q);
    quot.emplace_back(std::move(m), std::move(q));
  }
  return PolyT<C>::from_sorted(std::move(quot));
}

}  // namespace

std::optional<Poly> divide_exact(const Poly& a, const Poly& b) { return exact_quotient(a, b); }
std::optional<ZPoly> divide_exact(const ZPoly& a, const ZPoly& b) { return exact_quotient(a, b); }

std::pair<Poly, Poly> divide(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw MathError("division by zero polynomial");
  const Monomial& lm = b.leading_monomial();
  const mpq_class& lc = b.leading_coeff();
  std::vector<Poly::Term> quot, rem;
  Poly r = a;
  while (!r.is_zero()) {
    const auto& [rm, rc] = r.terms().front();
    if (lm.divides(rm)) {
      Monomial m = rm / lm;
      mpq_class q = rc / lc;
      r -= b.mul_term(m, q);
      quot.emplace_back(std::move(m), std::move(q));
    } else {
      rem.push_back(r.terms().front());
      r -= Poly::monomial(rm, rc);
    }
  }
  return {Poly::from_sorted(std::move(quot)), Poly::from_sorted(std::move(rem))};
}

namespace {

mpz_class max_norm(const ZPoly& p) {
  mpz_class m = 0;
  for (const auto& t : p.terms())
    if (mpz_cmpabs(t.second.get_mpz_t(), m.get_mpz_t()) > 0) m = abs(t.second);
  return m;
}

ZPoly divide_by_integer(const ZPoly& p, const mpz_class& d) {
  std::vector<ZPoly::Term> terms;
  terms.reserve(p.size());
  for (const auto& t : p.terms()) {
    mpz_class q;
    mpz_divexact(q.get_mpz_t(), t.second.get_mpz_t(), d.get_mpz_t());
    terms.emplace_back(t.first, std::move(q));
  }
  return ZPoly::from_sorted(std::move(terms));
}

// Rebuilds a polynomial in `var` from its image at var = x (balanced x-adic expansion).
ZPoly interpolate(ZPoly h, std::uint32_t var, const mpz_class& x) {
  const mpz_class half = x / 2;
  std::vector<ZPoly> digits;
  while (!h.is_zero()) {
    std::vector<ZPoly::Term> g;
    g.reserve(h.size());
    for (const auto& t : h.terms()) {
      mpz_class r;
      mpz_mod(r.get_mpz_t(), t.second.get_mpz_t(), x.get_mpz_t());
      if (r > half) r -= x;
      if (sgn(r) != 0) g.emplace_back(t.first, std::move(r));
    }
    ZPoly gp = ZPoly::from_sorted(std::move(g));
    h = divide_by_integer(h - gp, x);
    digits.push_back(std::move(gp));
  }
  ZPoly r = ZPoly::from_univariate(digits, var);
  if (!r.is_zero() && sgn(r.leading_coeff()) < 0) r = -r;
  return r;
}

struct HeuResult {
  ZPoly h, cf, cg;
};

std::optional<HeuResult> heu_gcd(const ZPoly& f, const ZPoly& g) {
  // Common integer content.
  mpz_class cont = gcd(content(f), content(g));
  ZPoly F = divide_by_integer(f, cont), G = divide_by_integer(g, cont);

  std::set<std::uint32_t> vars;
  for (auto v : F.variables()) vars.insert(v);
  for (auto v : G.variables()) vars.insert(v);
  if (vars.empty()) {
    mpz_class a = F.constant_value(), b = G.constant_value();
    mpz_class h = gcd(a, b);
    return HeuResult{ZPoly(h * cont), ZPoly(mpz_class(a / h)), ZPoly(mpz_class(b / h))};
  }
  const std::uint32_t var = *vars.begin();

  const mpz_class fn = max_norm(F), gn = max_norm(G);
  const mpz_class B = 2 * std::min(fn, gn) + 29;
  mpz_class x = std::min(B, mpz_class(99 * sqrt(B)));
  mpz_class alt = 2 * std::min(fn / abs(F.leading_coeff()), gn / abs(G.leading_coeff())) + 2;
  x = std::max(x, alt);

  for (int attempt = 0; attempt < 6; ++attempt) {
    ZPoly ff = F.evaluate(var, x), gg = G.evaluate(var, x);
    if (!ff.is_zero() && !gg.is_zero()) {
      auto sub = heu_gcd(ff, gg);
      if (!sub) return std::nullopt;
      ZPoly h = primitive_part(interpolate(sub->h, var, x));
      if (!h.is_zero()) {
        if (auto cf = divide_exact(F, h))
          if (auto cg = divide_exact(G, h)) return HeuResult{h.scaled(cont), *cf, *cg};
      }
      ZPoly cff = interpolate(sub->cf, var, x);
      if (!cff.is_zero()) {
        if (auto hh = divide_exact(F, cff))
          if (auto cg = divide_exact(G, *hh)) return HeuResult{hh->scaled(cont), cff, *cg};
      }
      ZPoly cfg = interpolate(sub->cg, var, x);
      if (!cfg.is_zero()) {
        if (auto hh = divide_exact(G, cfg))
          if (auto cf = divide_exact(F, *hh)) return HeuResult{hh->scaled(cont), *cf, cfg};
      }
    }
    x = 73794 * x * mpz_class(sqrt(mpz_class(sqrt(x)))) / 27011;
  }
  return std::nullopt;
}

// Pseudo-remainder of f by g with respect to var, both given as coefficient lists.
std::vector<ZPoly> pseudo_remainder(std::vector<ZPoly> r, const std::vector<ZPoly>& g) {
  const ZPoly& lc = g.back();
  while (r.size() >= g.size()) {
    const ZPoly lr = r.back();
    const std::size_t shift = r.size() - g.size();
    for (auto& c : r) c = c * lc;
    for (std::size_t i = 0; i < g.size(); ++i) r[i + shift] -= lr * g[i];
    r.pop_back();
    while (!r.empty() && r.back().is_zero()) r.pop_back();
  }
  return r;
}

ZPoly prs_gcd(const ZPoly& f, const ZPoly& g);

ZPoly content_in(const std::vector<ZPoly>& coeffs) {
  ZPoly c;
  for (const auto& k : coeffs) {
    c = prs_gcd(c, k);
    if (c.is_one()) break;
  }
  return c;
}

std::vector<ZPoly> primitive_in(std::vector<ZPoly> coeffs) {
  ZPoly c = content_in(coeffs);
  if (!c.is_one())
    for (auto& k : coeffs) k = *divide_exact(k, c);
  return coeffs;
}

// Recursive primitive PRS; result primitive with positive leading coefficient.
ZPoly prs_gcd(const ZPoly& f, const ZPoly& g) {
  if (f.is_zero()) return primitive_part(g);
  if (g.is_zero()) return primitive_part(f);
  std::set<std::uint32_t> vars;
  for (auto v : f.variables()) vars.insert(v);
  for (auto v : g.variables()) vars.insert(v);
  if (vars.empty()) return ZPoly(1);
  const std::uint32_t var = *vars.begin();
  auto fc = f.univariate(var), gc = g.univariate(var);
  ZPoly cont = prs_gcd(content_in(fc), content_in(gc));
  if (fc.size() == 1 || gc.size() == 1) return primitive_part(cont);
  auto a = primitive_in(std::move(fc)), b = primitive_in(std::move(gc));
  if (a.size() < b.size()) std::swap(a, b);
  while (true) {
    auto r = pseudo_remainder(a, b);
    if (r.empty()) break;
    if (r.size() == 1) {
      b = {ZPoly(1)};
      break;
    }
    a = std::move(b);
    b = primitive_in(std::move(r));
  }
  return primitive_part(ZPoly::from_univariate(b, var) * cont);
}

bool share_variable(const ZPoly& a, const ZPoly& b) {
  auto va = a.variables(), vb = b.variables();
  std::vector<std::uint32_t> common;
  std::set_intersection(va.begin(), va.end(), vb.begin(), vb.end(), std::back_inserter(common));
  return !common.empty();
}

ZPoly divide_monomial(const ZPoly& p, const Monomial& m) {
  if (m.is_one()) return p;
  std::vector<ZPoly::Term> terms;
  terms.reserve(p.size());
  for (const auto& t : p.terms()) terms.emplace_back(t.first / m, t.second);
  return ZPoly::from_terms(std::move(terms));
}

}  // namespace

ZPoly gcd(const ZPoly& a, const ZPoly& b) {
  if (a.is_zero()) return primitive_part(b);
  if (b.is_zero()) return primitive_part(a);
  const Monomial ma = a.monomial_content(), mb = b.monomial_content();
  const Monomial m = Monomial::gcd(ma, mb);
  const ZPoly mono = ZPoly::monomial(m, mpz_class(1));
  ZPoly f = primitive_part(divide_monomial(a, ma));
  ZPoly g = primitive_part(divide_monomial(b, mb));
  if (f.is_constant() || g.is_constant() || !share_variable(f, g)) return mono;
  if (f == g) return f * mono;
  if (f.size() <= g.size()) {
    if (divide_exact(g, f)) return f * mono;
  } else if (divide_exact(f, g)) {
    return g * mono;
  }
  ZPoly h;
  if (auto r = heu_gcd(f, g))
    h = primitive_part(r->h);
  else
    h = prs_gcd(f, g);
  return h * mono;
}

Poly gcd(const Poly& a, const Poly& b) {
  if (a.is_zero()) return monic(b);
  if (b.is_zero()) return monic(a);
  if (a.is_constant() || b.is_constant()) return Poly(1);
  return monic(to_rational(gcd(to_integer(a).first, to_integer(b).first)));
}

}  // namespace hamforge
