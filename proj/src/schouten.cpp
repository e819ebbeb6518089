#include "hamforge/schouten.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>

namespace hamforge {

Schouten::Schouten(JetSpace& jet) : jet_(&jet), reg_(jet) {
  for (int s = 1; s <= 3; ++s) jet.declare_covector(s);
}

void Schouten::register_operator(const WnlOperator& op) {
  if (op.n() != jet_->n()) throw InvalidInput("operator and jet space differ in size");
  for (int s = 1; s <= 3; ++s) reg_.register_operator(op, s);
  for (const auto& e : reg_.entries()) {
    if (images_.count(e.symbol.index)) continue;
    Expr image;
    for (int i = 0; i < jet_->n(); ++i)
      if (!e.tail[i].is_zero()) image += e.tail[i] * Expr(jet_->psi(e.s, i));
    Dens d = split(image);
    for (const auto& [m, c] : d) {
      // degree one in first derivatives: u^q_x psi_i
      bool ok = m.size() == 2;
      for (std::size_t k = 0; ok && k < m.size(); ++k) {
        const auto& vi = info(m.var_at(k));
        ok = m.exp_at(k) == 1 && ((vi.kind == Kind::jet && vi.order == 1) || (vi.kind == Kind::covector && vi.order == 0));
      }
      if (!ok) throw InvalidInput("tail of operator '" + op.tag + "' is not linear in first derivatives");
    }
    images_.emplace(e.symbol.index, std::move(d));
  }
}

const Schouten::VarInfo& Schouten::info(std::uint32_t var) {
  const Workspace& ws = jet_->workspace();
  while (vars_.size() <= var) {
    const Symbol s{static_cast<std::uint32_t>(vars_.size())};
    const SymbolInfo& si = ws.info(s);
    VarInfo vi;
    switch (si.kind) {
      case SymbolKind::jet:
        vi.kind = Kind::jet;
        vi.field = si.field;
        vi.order = si.order;
        if (si.order < jet_->max_order()) {
          vi.next = jet_->u(si.field, si.order + 1).index;
          vi.has_next = true;
        }
        break;
      case SymbolKind::covector:
        vi.kind = Kind::covector;
        vi.slot = si.arg;
        vi.field = si.field;
        vi.order = si.order;
        if (si.order < jet_->max_order()) {
          vi.next = jet_->psi(si.arg, si.field, si.order + 1).index;
          vi.has_next = true;
        }
        break;
      case SymbolKind::nonlocal:
        vi.kind = Kind::nonlocal;
        vi.slot = si.arg;
        break;
      default:
        break;
    }
    vars_.push_back(vi);
  }
  return vars_[var];
}

void Schouten::add_term(Dens& d, const Monomial& m, const Expr& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = d.try_emplace(m, c);
  if (fresh) return;
  it->second += c;
  if (it->second.is_zero()) d.erase(it);
}

Schouten::Dens Schouten::split(const Expr& e) {
  for (const auto& [m, c] : e.den().terms())
    for (std::size_t k = 0; k < m.size(); ++k)
      if (info(m.var_at(k)).kind != Kind::coefficient)
        throw InvalidInput("density has a jet, covector or nonlocal symbol in a denominator");
  std::unordered_map<Monomial, std::vector<Poly::Term>, MonomialHash> groups;
  for (const auto& [m, c] : e.num().terms()) {
    Monomial mj, mc;
    for (std::size_t k = 0; k < m.size(); ++k) {
      const Monomial v = Monomial::variable(m.var_at(k), m.exp_at(k));
      if (info(m.var_at(k)).kind == Kind::coefficient)
        mc = mc * v;
      else
        mj = mj * v;
    }
    groups[mj].emplace_back(mc, c);
  }
  Dens out;
  for (auto& [m, terms] : groups) {
    Poly p = Poly::from_terms(std::move(terms));
    if (!p.is_zero()) out.emplace(m, e.is_polynomial() ? Expr(std::move(p)) : Expr::fraction(std::move(p), e.den()));
  }
  return out;
}

const std::vector<Expr>& Schouten::field_gradient(const Expr& c) {
  auto it = gradients_.find(c);
  if (it != gradients_.end()) return it->second;
  std::vector<Expr> g;
  for (auto u : jet_->fields()) g.push_back(c.depends_on(u) ? diff(c, u) : Expr());
  return gradients_.emplace(c, std::move(g)).first->second;
}

void Schouten::add_derivative(Dens& out, const Monomial& m, const Expr& c) {
  const auto& grad = field_gradient(c);
  for (int j = 0; j < jet_->n(); ++j)
    if (!grad[j].is_zero()) add_term(out, m * Monomial::variable(jet_->u(j, 1).index), grad[j]);
  for (std::size_t k = 0; k < m.size(); ++k) {
    const auto var = m.var_at(k);
    const auto e = m.exp_at(k);
    const VarInfo& vi = info(var);
    const Monomial rest = m.with_exponent(var, e - 1);
    const Expr ce = e == 1 ? c : c * Expr(static_cast<long>(e));
    if (vi.kind == Kind::nonlocal) {
      auto it = images_.find(var);
      if (it == images_.end()) throw InvalidInput("nonlocal symbol without a registered tail");
      for (const auto& [mm, cc] : it->second) add_term(out, rest * mm, ce * cc);
    } else {
      if (!vi.has_next)
        throw OrderOverflow("total derivative of '" + jet_->workspace().name(Symbol{var}) + "' exceeds max_order");
      add_term(out, rest * Monomial::variable(vi.next), ce);
    }
  }
}

Schouten::Dens Schouten::derivative(const Dens& d) {
  Dens out;
  for (const auto& [m, c] : d) add_derivative(out, m, c);
  return out;
}

Schouten::Dens Schouten::frechet(const Expr& f, const std::vector<std::vector<Dens>>& XD) {
  Dens out;
  for (auto s : f.symbols()) {
    const auto& si = jet_->workspace().info(s);
    int m = -1, l = 0;
    if (si.kind == SymbolKind::field) {
      for (int j = 0; j < jet_->n(); ++j)
        if (jet_->u(j, 0) == s) m = j;
    } else if (si.kind == SymbolKind::jet) {
      m = si.field;
      l = si.order;
    }
    if (m < 0) continue;
    if (l >= static_cast<int>(XD[m].size())) throw InvalidInput("frechet: derivative order not prepared");
    for (const auto& [m1, c1] : split(diff(f, s)))
      for (const auto& [m2, c2] : XD[m][l]) add_term(out, m1 * m2, c1 * c2);
  }
  return out;
}

void Schouten::contribution(Dens& acc, const WnlOperator& P, const WnlOperator& Q, int a, int b, int c) {
  const int n = jet_->n();
  int top = 0;
  for (const auto& row : P.local.coeff)
    for (const auto& cs : row)
      for (const auto& x : cs) top = std::max(top, jet_->order(x));
  for (const auto& w : P.tails)
    for (const auto& x : w) top = std::max(top, jet_->order(x));

  const std::vector<Expr> X = apply(*jet_, Q, b, reg_);
  std::vector<std::vector<Dens>> XD(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) {
    XD[m].push_back(split(X[m]));
    for (int l = 1; l <= top; ++l) XD[m].push_back(derivative(XD[m].back()));
  }
  auto psi = [&](int s, int i, int k = 0) { return Monomial::variable(jet_->psi(s, i, k).index); };

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const auto& cs = P.local.coeff[i][j];
      for (std::size_t k = 0; k < cs.size(); ++k) {
        if (cs[k].is_zero()) continue;
        const Monomial pm = psi(c, i) * psi(a, j, static_cast<int>(k));
        for (const auto& [m, v] : frechet(cs[k], XD)) add_term(acc, m * pm, v);
      }
    }
  if (P.tails.empty()) return;
  std::vector<std::vector<Dens>> dw(P.tails.size());
  for (std::size_t t = 0; t < P.tails.size(); ++t)
    for (int i = 0; i < n; ++i) dw[t].push_back(frechet(P.tails[t][i], XD));
  for (std::size_t al = 0; al < P.tails.size(); ++al)
    for (std::size_t be = 0; be < P.tails.size(); ++be) {
      const Expr& cab = P.coupling(static_cast<Eigen::Index>(al), static_cast<Eigen::Index>(be));
      if (cab.is_zero()) continue;
      const Monomial ra = Monomial::variable(reg_.at(P.tag, static_cast<int>(be), a).index);
      const Monomial rc = Monomial::variable(reg_.at(P.tag, static_cast<int>(al), c).index);
      for (int i = 0; i < n; ++i) {
        for (const auto& [m, v] : dw[al][i]) add_term(acc, m * psi(c, i) * ra, cab * v);
        // <psi^c, w_al D^{-1}(psi^a . dw_be)> integrated by parts against D phi^c_al
        for (const auto& [m, v] : dw[be][i]) add_term(acc, m * psi(a, i) * rc, -(cab * v));
      }
    }
}

TriVector Schouten::bracket(const WnlOperator& A, const WnlOperator& B) {
  register_operator(A);
  if (&A != &B) register_operator(B);
  Dens acc;
  for (auto [a, b, c] : {std::array<int, 3>{1, 2, 3}, std::array<int, 3>{2, 3, 1}, std::array<int, 3>{3, 1, 2}}) {
    contribution(acc, A, B, a, b, c);
    contribution(acc, B, A, a, b, c);
  }
  return finish(reduce(by_parts(std::move(acc))), true);
}

namespace {

struct TermClass {
  int nonlocal = 0;
  int slot = 0;            // designated local argument
  int order = 0;           // its derivative order
  std::uint32_t var = 0;   // its symbol
};

}  // namespace

Schouten::Dens Schouten::by_parts(Dens d) {
  auto classify = [&](const Monomial& m) {
    TermClass t;
    for (std::size_t k = 0; k < m.size(); ++k) {
      const VarInfo& vi = info(m.var_at(k));
      if (vi.kind == Kind::nonlocal) {
        ++t.nonlocal;
      } else if (vi.kind == Kind::covector && vi.slot > t.slot) {
        t.slot = vi.slot;
        t.order = vi.order;
        t.var = m.var_at(k);
      }
    }
    if (t.slot == 0) throw MathError("density term without a local covector");
    return t;
  };
  using Key = std::pair<int, int>;
  std::map<Key, Dens, std::greater<Key>> buckets;
  for (auto& [m, c] : d) {
    const TermClass t = classify(m);
    add_term(buckets[{t.nonlocal, t.order}], m, c);
  }
  Dens out;
  while (!buckets.empty()) {
    auto it = buckets.begin();
    const Key key = it->first;
    Dens cur = std::move(it->second);
    buckets.erase(it);
    for (const auto& [m, c] : cur) {
      if (key.second == 0) {
        add_term(out, m, c);
        continue;
      }
      // a * D(psi_{k-1}) ~ -D(a) * psi_{k-1}
      const TermClass t = classify(m);
      const VarInfo& vi = info(t.var);
      const Monomial lower = Monomial::variable(jet_->psi(vi.slot, vi.field, vi.order - 1).index);
      Dens da;
      add_derivative(da, m.with_exponent(t.var, 0), c);
      for (const auto& [mm, cc] : da) {
        const Monomial nm = mm * lower;
        const TermClass tn = classify(nm);
        add_term(buckets[{tn.nonlocal, tn.order}], nm, -cc);
      }
    }
  }
  return out;
}

namespace {

mpq_class point_coordinate(int t, int j) { return mpq_class(3 + 7 * t + 2 * j + j * j, 1 + (t % 3)); }

// Row-reduces in place; returns pivot column of each independent row (-1 for dependent rows).
std::vector<int> row_pivots(std::vector<std::vector<Expr>> rows) {
  std::vector<int> piv(rows.size(), -1);
  std::vector<std::size_t> done;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t q : done) {
      const int p = piv[q];
      if (rows[r][p].is_zero()) continue;
      const Expr f = rows[r][p] / rows[q][p];
      for (std::size_t c = 0; c < rows[r].size(); ++c) rows[r][c] -= f * rows[q][c];
    }
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      if (!rows[r][c].is_zero()) {
        piv[r] = static_cast<int>(c);
        break;
      }
    if (piv[r] >= 0) done.push_back(r);
  }
  return piv;
}

}  // namespace

Schouten::Dens Schouten::reduce(Dens d) {
  // Ambiguity left after by_parts: D(phi1_a phi2_b phi3_c) with constant
  // coefficients. Fix it by matching the phi2_b phi3_c psi1 part against the
  // tails w_a of argument 1 under evaluation at a point.
  const int n = jet_->n();
  std::vector<std::uint32_t> r1;
  for (const auto& e : reg_.entries())
    if (e.s == 1) r1.push_back(e.symbol.index);
  if (r1.empty()) return d;

  // (b, c) -> column (i, q) -> coefficient
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::map<int, Expr>> groups;
  for (const auto& [m, c] : d) {
    if (m.size() != 4) continue;
    std::uint32_t rb = 0, rc = 0;
    int i = -1, q = -1;
    bool ok = true;
    for (std::size_t k = 0; k < m.size() && ok; ++k) {
      const VarInfo& vi = info(m.var_at(k));
      ok = m.exp_at(k) == 1;
      if (vi.kind == Kind::nonlocal && vi.slot == 2) rb = m.var_at(k);
      else if (vi.kind == Kind::nonlocal && vi.slot == 3) rc = m.var_at(k);
      else if (vi.kind == Kind::covector && vi.slot == 1 && vi.order == 0) i = vi.field;
      else if (vi.kind == Kind::jet && vi.order == 1) q = vi.field;
      else ok = false;
    }
    if (ok && rb && rc && i >= 0 && q >= 0) groups[{rb, rc}][i * n + q] = c;
  }
  if (groups.empty()) return d;

  // W[a][(i, q)]
  std::vector<std::vector<Expr>> W(r1.size(), std::vector<Expr>(static_cast<std::size_t>(n * n)));
  for (std::size_t a = 0; a < r1.size(); ++a)
    for (const auto& [m, c] : images_.at(r1[a])) {
      int i = -1, q = -1;
      for (std::size_t k = 0; k < m.size(); ++k) {
        const VarInfo& vi = info(m.var_at(k));
        (vi.kind == Kind::covector ? i : q) = vi.field;
      }
      W[a][i * n + q] = c;
    }
  std::size_t generic_rank = 0;
  for (int p : row_pivots(W)) generic_rank += p >= 0;

  const auto& u = jet_->fields();
  for (const auto& [bc, E] : groups) {
    std::vector<std::vector<Expr>> Wp;
    std::map<int, Expr> Ep;
    std::vector<int> piv;
    bool found = false;
    for (int t = 0; t < 64 && !found; ++t) {
      std::map<Symbol, mpq_class> pt;
      for (int j = 0; j < n; ++j) pt[u[j]] = point_coordinate(t, j);
      try {
        Wp.assign(W.size(), std::vector<Expr>(W[0].size()));
        for (std::size_t a = 0; a < W.size(); ++a)
          for (std::size_t k = 0; k < W[a].size(); ++k)
            if (!W[a][k].is_zero()) Wp[a][k] = substitute(W[a][k], pt);
        Ep.clear();
        for (const auto& [k, v] : E) Ep[k] = substitute(v, pt);
      } catch (const MathError&) {
        continue;
      }
      piv = row_pivots(Wp);
      std::size_t rank = 0;
      for (int p : piv) rank += p >= 0;
      found = rank == generic_rank;
    }
    if (!found) throw MathError("normalize: no regular evaluation point for the tails");

    std::vector<std::size_t> rows;
    for (std::size_t a = 0; a < piv.size(); ++a)
      if (piv[a] >= 0) rows.push_back(a);
    const auto r = static_cast<Eigen::Index>(rows.size());
    ExprMatrix M(r, r);
    ExprVector rhs(r);
    for (Eigen::Index x = 0; x < r; ++x) {
      const int col = piv[rows[x]];
      for (Eigen::Index y = 0; y < r; ++y) M(x, y) = Wp[rows[y]][col];
      auto it = Ep.find(col);
      rhs(x) = it == Ep.end() ? Expr() : it->second;
    }
    const ExprVector C = inverse(M) * rhs;
    const Monomial mb = Monomial::variable(bc.first), mc = Monomial::variable(bc.second);
    for (Eigen::Index y = 0; y < r; ++y) {
      if (C(y).is_zero()) continue;
      const Monomial ma = Monomial::variable(r1[rows[y]]);
      for (const auto& [m, c] : images_.at(r1[rows[y]])) add_term(d, m * mb * mc, -(C(y) * c));
      for (const auto& [m, c] : images_.at(bc.first)) add_term(d, ma * m * mc, -(C(y) * c));
      for (const auto& [m, c] : images_.at(bc.second)) add_term(d, ma * mb * m, -(C(y) * c));
    }
  }
  return d;
}

TriVector Schouten::finish(const Dens& d, bool normalized) const {
  TriVector t;
  t.normalized = normalized;
  t.terms.assign(d.begin(), d.end());
  std::sort(t.terms.begin(), t.terms.end(), [](const auto& x, const auto& y) { return x.first.compare(y.first) > 0; });
  return t;
}

TriVector Schouten::normalize(const TriVector& t) {
  Dens d;
  for (const auto& [m, c] : t.terms) add_term(d, m, c);
  return finish(reduce(by_parts(std::move(d))), true);
}

ZeroTest Schouten::is_zero(const TriVector& t, const std::vector<ParamCase>& cases) {
  ZeroTest out;
  for (const auto& c : cases.empty() ? std::vector<ParamCase>(1) : cases) {
    Dens d;
    for (const auto& [m, v] : t.terms) add_term(d, m, c.empty() ? v : substitute(v, c));
    const TriVector r = finish(reduce(by_parts(std::move(d))), true);
    if (r.is_zero()) continue;
    out.zero = false;
    out.failing_case = c;
    out.witness_value = r.terms.front().second;
    const Workspace& ws = jet_->workspace();
    out.witness = "coefficient of " + to_string(Poly::monomial(r.terms.front().first, mpq_class(1)), ws) + ": " +
                  to_string(out.witness_value, ws);
    return out;
  }
  return out;
}

TriVector Schouten::density(const Expr& e) { return finish(split(e), false); }

Expr Schouten::to_expr(const TriVector& t) const {
  Expr out;
  for (const auto& [m, c] : t.terms) out += Expr(Poly::monomial(m, mpq_class(1))) * c;
  return out;
}

TriVector Schouten::total_derivative(const TriVector& t) {
  Dens d;
  for (const auto& [m, c] : t.terms) add_derivative(d, m, c);
  return finish(d, false);
}

TriVector schouten_bracket(Schouten& engine, const WnlOperator& A, const WnlOperator& B) { return engine.bracket(A, B); }

WnlOperator specialize(const WnlOperator& op, const ParamCase& c) {
  if (c.empty()) return op;
  WnlOperator out = op;
  for (auto& row : out.local.coeff)
    for (auto& cs : row)
      for (auto& x : cs)
        if (!x.is_zero()) x = substitute(x, c);
  for (auto& w : out.tails)
    for (auto& x : w)
      if (!x.is_zero()) x = substitute(x, c);
  out.coupling = substitute(out.coupling, c);
  return out;
}

ZeroTest bracket_vanishes(JetSpace& jet, const WnlOperator& A, const WnlOperator& B,
                          const std::vector<ParamCase>& cases) {
  for (const auto& c : cases.empty() ? std::vector<ParamCase>(1) : cases) {
    Schouten engine(jet);
    const WnlOperator a = specialize(A, c);
    const TriVector t = &A == &B ? engine.bracket(a, a) : engine.bracket(a, specialize(B, c));
    ZeroTest z = engine.is_zero(t, {});
    if (z.zero) continue;
    z.failing_case = c;
    return z;
  }
  return {};
}

}  // namespace hamforge
