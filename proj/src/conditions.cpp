#include "hamforge/conditions.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <set>

#include "hamforge/operators.hpp"

namespace hamforge {

std::vector<ParamCase> sign_cases(const std::vector<Symbol>& params) {
  std::vector<ParamCase> out(1);
  for (auto p : params) {
    std::vector<ParamCase> next;
    for (const auto& c : out)
      for (int sgn : {1, -1}) {
        ParamCase d = c;
        d[p] = sgn;
        next.push_back(std::move(d));
      }
    out = std::move(next);
  }
  return out;
}

Expr reduce_sign_cases(const Expr& e, const std::vector<Symbol>& params) {
  if (params.empty() || e.is_constant()) return e;
  bool touches = false;
  for (auto p : params) touches = touches || e.depends_on(p);
  if (!touches) return e;
  const auto cases = sign_cases(params);
  std::vector<Expr> values;
  for (const auto& c : cases) values.push_back(substitute(e, c));
  const std::size_t k = params.size();
  Expr out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
    Expr a;
    for (std::size_t ci = 0; ci < cases.size(); ++ci) {
      mpq_class w = 1;
      for (std::size_t b = 0; b < k; ++b)
        if (mask >> b & 1) w *= cases[ci].at(params[b]);
      a += Expr(w) * values[ci];
    }
    if (a.is_zero()) continue;
    Expr mono(mpq_class(1, static_cast<long>(cases.size())));
    for (std::size_t b = 0; b < k; ++b)
      if (mask >> b & 1) mono *= Expr(params[b]);
    out += a * mono;
  }
  return out;
}

ExprMatrix reduce_sign_cases(const ExprMatrix& m, const std::vector<Symbol>& params) {
  ExprMatrix out = m;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = reduce_sign_cases(m(i, j), params);
  return out;
}

Metric specialize(const Metric& g, const ParamCase& c) {
  if (c.empty()) return g;
  return Metric::from_upper(substitute(g.upper, c));
}

ExprMatrix substitute(const ExprMatrix& m, const ParamCase& c) {
  ExprMatrix out = m;
  if (c.empty()) return out;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = substitute(m(i, j), c);
  return out;
}

Report evaluate(const std::vector<Residual>& residuals, const std::vector<ParamCase>& cases, std::size_t limit) {
  Report rep;
  const std::vector<ParamCase> all = cases.empty() ? std::vector<ParamCase>(1) : cases;
  for (const auto& c : all) {
    std::map<std::string, std::size_t> kept;
    for (const auto& r : residuals) {
      ++rep.checked;
      if (r.value.is_zero()) continue;
      Expr v = c.empty() ? r.value : substitute(r.value, c);
      if (v.is_zero()) continue;
      rep.passed = false;
      if (kept[r.condition]++ < limit) rep.failures.push_back(Residual{r.condition, r.indices, v});
    }
    if (!rep.passed) {
      rep.failing_case = c;
      break;
    }
  }
  return rep;
}

std::string describe(const Residual& r, const Workspace& ws) {
  std::string s = r.condition + "[";
  for (std::size_t i = 0; i < r.indices.size(); ++i) s += (i ? "," : "") + std::to_string(r.indices[i]);
  return s + "] = " + to_string(r.value, ws);
}

std::vector<Residual> check_symmetry_gV(const ExprMatrix& H, const ExprMatrix& V) {
  const ExprMatrix HV = H * V;
  std::vector<Residual> out;
  for (int i = 0; i < H.rows(); ++i)
    for (int j = i + 1; j < H.rows(); ++j) out.push_back({"metric-symmetry", {i + 1, j + 1}, HV(i, j) - HV(j, i)});
  return out;
}

std::vector<Residual> check_symmetry_upper(const ExprMatrix& g, const ExprMatrix& V) {
  // g^{ik} V^j_k = (V g^T)^{ji}
  const ExprMatrix Vg = V * g;
  std::vector<Residual> out;
  for (int i = 0; i < g.rows(); ++i)
    for (int j = i + 1; j < g.rows(); ++j) out.push_back({"metric-symmetry", {i + 1, j + 1}, Vg(j, i) - Vg(i, j)});
  return out;
}

namespace {

Expr delta(int a, int b) { return a == b ? Expr(1) : Expr(); }

std::vector<Symbol> unknown_symbols(Workspace& ws, const std::string& stem, int count) {
  std::vector<Symbol> out;
  for (int k = 1; k <= count; ++k) out.push_back(ws.ensure(stem + std::to_string(k), SymbolKind::unknown));
  return out;
}

}  // namespace

ConformalFactor solve_conformal_factor(const JetSpace& jet, const ExprMatrix& H, const ExprMatrix& V) {
  const int n = jet.n();
  const auto& u = jet.fields();
  if (H.rows() != n || V.rows() != n) throw InvalidInput("solve_conformal_factor: dimension mismatch");
  const Metric Hm = Metric::from_lower(H);
  const Tensor3 G = christoffel(Hm, u);
  const ExprMatrix HV = H * V;

  // With g = f H and p = grad log f the Christoffel symbols shift by
  // (delta^i_j p_k + delta^i_k p_j - H_{jk} H^{is} p_s) / 2, so the condition
  // Gamma^i_{ks} V^s_j = Gamma^i_{js} V^s_k is linear in p.
  LinSystem<Expr> sys;
  sys.unknowns = unknown_symbols(jet.workspace(), "dlogf_", n);
  const Expr half = Expr(mpq_class(1, 2));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        LinRow<Expr> row;
        for (int m = 0; m < n; ++m) {
          Expr a = delta(i, k) * V(m, j) + delta(k, m) * V(i, j) - Hm.upper(i, m) * HV(k, j) - delta(i, j) * V(m, k) -
                   delta(j, m) * V(i, k) + Hm.upper(i, m) * HV(j, k);
          if (!a.is_zero()) row.entries.emplace_back(m, half * a);
        }
        Expr rhs = diff(V(i, j), u[k]) - diff(V(i, k), u[j]);
        for (int s = 0; s < n; ++s) rhs += G(i, k, s) * V(s, j) - G(i, j, s) * V(s, k);
        row.rhs = -rhs;
        if (!row.is_trivial()) sys.add_row(std::move(row));
      }
  const SolutionSpace<Expr> sol = solve(sys);
  if (!sol.consistent) throw MathError("conformal factor: gradient system is inconsistent");
  if (sol.dimension() != 0)
    throw MathError("conformal factor: gradient system leaves " + std::to_string(sol.dimension()) + " free components");

  ConformalFactor out;
  for (int m = 0; m < n; ++m) out.log_gradient.push_back(sol.pivots.at(m).rhs);
  for (int k = 0; k < n; ++k)
    for (int l = k + 1; l < n; ++l)
      if (!(diff(out.log_gradient[k], u[l]) == diff(out.log_gradient[l], u[k])))
        throw MathError("conformal factor: gradient is not closed");

  // Candidate factors: irreducible factors of every p_k involving the fields.
  std::vector<Poly> factors;
  for (const auto& p : out.log_gradient) {
    if (p.is_zero()) continue;
    for (auto& [q, e] : factor(p).factors) {
      bool has_field = false;
      for (auto s : u) has_field = has_field || q.depends_on(s.index);
      if (has_field && std::find(factors.begin(), factors.end(), q) == factors.end()) factors.push_back(q);
    }
  }
  const auto expo = unknown_symbols(jet.workspace(), "logf_e", static_cast<int>(factors.size()));
  std::vector<Expr> ids;
  for (int k = 0; k < n; ++k) {
    Expr e = out.log_gradient[k];
    for (std::size_t m = 0; m < factors.size(); ++m)
      e -= Expr(expo[m]) * Expr::fraction(factors[m].derivative(u[k].index), factors[m]);
    ids.push_back(e);
  }
  const auto exps = solve(collect_coefficients<Expr>(ids, expo, u));
  if (!exps.consistent) throw MathError("conformal factor: no power product of polynomial factors matches");
  out.f = Expr(1);
  for (std::size_t m = 0; m < factors.size(); ++m) {
    auto it = exps.pivots.find(static_cast<int>(m));
    if (it == exps.pivots.end()) continue;
    if (it->second.entries.size() != 1) continue;  // free direction set to 0
    auto c = it->second.rhs.constant();
    if (!c) throw MathError("conformal factor: exponent depends on parameters");
    if (sgn(*c) == 0) continue;
    if (c->get_den() != 1) throw MathError("conformal factor: non-integer exponent");
    out.powers.emplace_back(factors[m], *c);
    out.f *= pow(Expr(factors[m]), c->get_num().get_si());
  }
  ExprMatrix g = H;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = out.f * H(i, j);
  out.g = Metric::from_lower(g);
  return out;
}

std::vector<Residual> check_flat_velocity(const Metric& g, const ExprMatrix& V, const std::vector<Symbol>& u) {
  const Tensor3 D = covariant_derivative_11(christoffel(g, u), V, u);
  const int n = g.dim();
  std::vector<Residual> out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k) out.push_back({"velocity-flatness", {i + 1, j + 1, k + 1}, D(k, i, j) - D(j, i, k)});
  return out;
}

namespace {

struct CurvatureBasis {
  Expr A, B, C;
};

CurvatureBasis curvature_basis(const ExprMatrix& V, int i, int j, int k, int l) {
  return {V(i, k) * V(j, l) - V(i, l) * V(j, k),
          V(i, k) * delta(j, l) - V(j, k) * delta(i, l) - V(i, l) * delta(j, k) + V(j, l) * delta(i, k),
          delta(i, k) * delta(j, l) - delta(i, l) * delta(j, k)};
}

}  // namespace

std::vector<Residual> curvature_residuals(const Metric& g, const ExprMatrix& V, const std::vector<Symbol>& u,
                                          const Expr& alpha, const Expr& beta, const Expr& gamma) {
  const Tensor4 R = riemann_curvature(g, christoffel(g, u), u);
  const int n = g.dim();
  std::vector<Residual> out;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = k + 1; l < n; ++l) {
          const auto b = curvature_basis(V, i, j, k, l);
          out.push_back({"curvature", {i + 1, j + 1, k + 1, l + 1}, R(i, j, k, l) - alpha * b.A - beta * b.B - gamma * b.C});
        }
  return out;
}

CurvatureConstants solve_curvature_constants(const JetSpace& jet, const Metric& g, const ExprMatrix& V,
                                             const std::vector<Symbol>& params) {
  const auto& u = jet.fields();
  Workspace& ws = jet.workspace();
  const std::vector<Symbol> abc{ws.ensure("alp", SymbolKind::unknown), ws.ensure("bet", SymbolKind::unknown),
                                ws.ensure("gam", SymbolKind::unknown)};
  auto identities = [&](const Metric& gm, const ExprMatrix& Vm) {
    std::vector<Expr> ids;
    for (const auto& r : curvature_residuals(gm, Vm, u, Expr(abc[0]), Expr(abc[1]), Expr(abc[2])))
      ids.push_back(r.value);
    return ids;
  };
  auto pick = [](const auto& sol, int col) {
    using S = typename std::decay_t<decltype(sol.pivots.at(0).rhs)>;
    auto it = sol.pivots.find(col);
    return it == sol.pivots.end() ? S(0) : it->second.rhs;
  };

  CurvatureConstants out;
  if (params.empty()) {
    const auto sol = solve(collect_coefficients<mpq_class>(identities(g, V), abc, u));
    if (!sol.consistent || sol.dimension() != 0)
      throw MathError("curvature: no unique constants alpha, beta, gamma satisfy the condition");
    out.alpha = Expr(pick(sol, 0));
    out.beta = Expr(pick(sol, 1));
    out.gamma = Expr(pick(sol, 2));
    return out;
  }

  // Case by case, then multilinear interpolation over {+1,-1}^k.
  const auto cases = sign_cases(params);
  std::vector<std::array<mpq_class, 3>> values;
  for (const auto& c : cases) {
    const auto sol = solve(collect_coefficients<mpq_class>(identities(specialize(g, c), substitute(V, c)), abc, u));
    if (!sol.consistent || sol.dimension() != 0)
      throw MathError("curvature: no unique constants for a parameter case");
    values.push_back({pick(sol, 0), pick(sol, 1), pick(sol, 2)});
  }
  std::array<Expr, 3> res;
  const std::size_t k = params.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
    Expr mono(1);
    for (std::size_t b = 0; b < k; ++b)
      if (mask >> b & 1) mono *= Expr(params[b]);
    for (int t = 0; t < 3; ++t) {
      mpq_class a = 0;
      for (std::size_t ci = 0; ci < cases.size(); ++ci) {
        mpq_class w = values[ci][t];
        for (std::size_t b = 0; b < k; ++b)
          if (mask >> b & 1) w *= cases[ci].at(params[b]);
        a += w;
      }
      a /= mpq_class(static_cast<long>(cases.size()));
      if (sgn(a) != 0) res[t] += Expr(a) * mono;
    }
  }
  out.alpha = res[0];
  out.beta = res[1];
  out.gamma = res[2];
  out.per_case = true;
  return out;
}

Report check_first_order_hamiltonian(const FirstOrderCertificate& cert, const ExprMatrix& V,
                                     const std::vector<Symbol>& u, const std::vector<ParamCase>& cases) {
  Report rep;
  for (const auto& c : cases.empty() ? std::vector<ParamCase>(1) : cases) {
    const Metric g = specialize(cert.g, c);
    const ExprMatrix Vc = substitute(V, c);
    std::vector<Residual> all = check_symmetry_upper(g.upper, Vc);
    for (auto& r : check_flat_velocity(g, Vc, u)) all.push_back(std::move(r));
    for (auto& r : curvature_residuals(g, Vc, u, substitute(cert.alpha, c), substitute(cert.beta, c),
                                       substitute(cert.gamma, c)))
      all.push_back(std::move(r));
    Report one = evaluate(all, {c});
    rep.checked += one.checked;
    if (!one.passed) {
      one.checked = rep.checked;
      return one;
    }
  }
  return rep;
}

FirstOrderCertificate find_first_order(const JetSpace& jet, const std::vector<Expr>& fluxes,
                                       const std::vector<Symbol>& params) {
  if (jet.n() != 3) throw InvalidInput("first-order search is only supported for 3 components");
  const auto& u = jet.fields();
  const ExprMatrix V = velocity_matrix(jet, fluxes);
  const ExprMatrix H = haantjes_square_contraction(haantjes_tensor(V, nijenhuis_tensor(V, u)));
  const auto cases = sign_cases(params);
  const Report sym = evaluate(check_symmetry_gV(H, V), cases, 1);
  if (!sym.passed) throw MathError("Haantjes contraction fails the symmetry condition");
  const ConformalFactor cf = solve_conformal_factor(jet, H, V);
  const CurvatureConstants k = solve_curvature_constants(jet, cf.g, V, params);
  const Metric g = params.empty() ? cf.g : Metric::from_upper(reduce_sign_cases(cf.g.upper, params));
  FirstOrderCertificate cert{g, reduce_sign_cases(k.alpha, params), reduce_sign_cases(k.beta, params),
                             reduce_sign_cases(k.gamma, params), cf.f};
  // Scaling g^{ij} by 1/c scales the constants by 1/c.
  for (const Expr* e : {&cert.alpha, &cert.beta, &cert.gamma}) {
    if (e->is_zero()) continue;
    const mpq_class c = e->num().leading_coeff() / e->den().leading_coeff();
    if (c == 1) break;
    const Expr inv(1 / c);
    cert.g = Metric::from_upper(cert.g.upper * inv);
    cert.alpha *= inv;
    cert.beta *= inv;
    cert.gamma *= inv;
    cert.f *= Expr(c);
    break;
  }
  return cert;
}

MongeAnsatz monge_ansatz(const JetSpace& jet) {
  const int n = jet.n();
  const auto& u = jet.fields();
  Workspace& ws = jet.workspace();
  std::vector<Poly> basis{Poly(1)};
  for (int a = 0; a < n; ++a) basis.push_back(Poly::variable(u[a].index));
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) basis.push_back(Poly::variable(u[a].index) * Poly::variable(u[b].index));

  MongeAnsatz out;
  out.n = n;
  std::vector<std::vector<std::vector<int>>> col(n, std::vector<std::vector<int>>(n));
  ExprMatrix h(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Poly e;
      for (std::size_t t = 0; t < basis.size(); ++t) {
        const std::string name =
            "h_" + std::to_string(i + 1) + "_" + std::to_string(j + 1) + "_" + std::to_string(t + 1);
        Symbol s = ws.ensure(name, SymbolKind::unknown);
        col[i][j].push_back(static_cast<int>(out.all_unknowns.size()));
        out.all_unknowns.push_back(s);
        e += basis[t] * Poly::variable(s.index);
      }
      h(i, j) = h(j, i) = Expr(std::move(e));
    }
  std::vector<Expr> ids;
  for (int m = 0; m < n; ++m)
    for (int k = m; k < n; ++k)
      for (int s = k; s < n; ++s) ids.push_back(diff(h(m, k), u[s]) + diff(h(k, s), u[m]) + diff(h(m, s), u[k]));
  const auto sys = collect_coefficients<mpq_class>(ids, out.all_unknowns, u);
  const auto sol = solve(sys);
  out.constraint_rows = sys.rows.size();
  out.constraint_rank = sol.rank();

  const auto par = sol.parametrization();
  std::vector<Poly> value(out.all_unknowns.size());
  for (std::size_t c = 0; c < par.size(); ++c)
    for (const auto& [f, a] : par[c])
      value[c] += f < 0 ? Poly(a) : Poly(a) * Poly::variable(out.all_unknowns[f].index);
  for (int f : sol.free_columns()) out.unknowns.push_back(out.all_unknowns[f]);
  out.h = ExprMatrix(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Poly e;
      for (std::size_t t = 0; t < basis.size(); ++t) e += basis[t] * value[col[i][j][t]];
      out.h(i, j) = out.h(j, i) = Expr(std::move(e));
    }
  return out;
}

PluckerAnsatz plucker_ansatz(const JetSpace& jet) {
  const int n = jet.n();
  const auto& u = jet.fields();
  Workspace& ws = jet.workspace();
  // psi^{(a,b)}_j for 0 <= a < b <= n, coordinate 0 being the constant 1
  std::vector<std::vector<Poly>> psi;
  for (int a = 0; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b) {
      std::vector<Poly> v(static_cast<std::size_t>(n));
      if (a == 0) {
        v[b - 1] = Poly(1);
      } else {
        v[b - 1] = Poly::variable(u[a - 1].index);
        v[a - 1] = -Poly::variable(u[b - 1].index);
      }
      psi.push_back(std::move(v));
    }
  PluckerAnsatz out;
  std::vector<std::vector<Poly>> h(static_cast<std::size_t>(n), std::vector<Poly>(static_cast<std::size_t>(n)));
  for (std::size_t a = 0; a < psi.size(); ++a)
    for (std::size_t b = a; b < psi.size(); ++b) {
      const Symbol s = ws.ensure("pl_" + std::to_string(a + 1) + "_" + std::to_string(b + 1), SymbolKind::unknown);
      out.unknowns.push_back(s);
      const Poly x = Poly::variable(s.index);
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          Poly t = psi[a][i] * psi[b][j];
          if (a != b) t += psi[b][i] * psi[a][j];
          if (!t.is_zero()) h[i][j] += t * x;
        }
    }
  out.h = ExprMatrix(n, n);
  std::vector<Expr> entries;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      out.h(i, j) = out.h(j, i) = Expr(h[i][j]);
      entries.push_back(out.h(i, j));
    }
  out.rank = solve(collect_coefficients<mpq_class>(entries, out.unknowns, u)).rank();
  return out;
}

Tensor3 velocity_hessian(const ExprMatrix& V, const std::vector<Symbol>& u) {
  const int n = static_cast<int>(V.rows());
  Tensor3 T(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) T(k, i, j) = T(k, j, i) = diff(V(k, i), u[j]);
  return T;
}

std::vector<Identity> compatibility_identities(const ExprMatrix& h, const ExprMatrix& V, const std::vector<Symbol>& u) {
  const int n = static_cast<int>(h.rows());
  const Tensor3 c = third_order_c_lower(h, u);
  const Tensor3 T = velocity_hessian(V, u);
  const ExprMatrix hV = h * V;
  std::vector<Identity> out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.push_back({"h-symmetry", {i + 1, j + 1}, hV(i, j) - hV(j, i)});
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        Expr e;
        for (int m = 0; m < n; ++m) e += c(m, k, l) * V(m, i) + c(m, i, k) * V(m, l) + c(m, l, i) * V(m, k);
        out.push_back({"c-cyclic", {i + 1, k + 1, l + 1}, e});
      }
  for (int s = 0; s < n; ++s)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Expr e;
        for (int k = 0; k < n; ++k) e += h(k, s) * T(k, i, j);
        for (int m = 0; m < n; ++m) e -= c(s, m, j) * V(m, i) + c(s, m, i) * V(m, j);
        out.push_back({"hessian", {s + 1, i + 1, j + 1}, e});
      }
  return out;
}

namespace {

LinSystem<Expr> collect_identities(const std::vector<Identity>& ids, const std::vector<Symbol>& unknowns,
                                   const std::vector<Symbol>& u) {
  std::vector<Expr> values;
  for (const auto& id : ids)
    if (!id.value.is_zero()) values.push_back(id.value);
  return deduplicate(collect_coefficients<Expr>(values, unknowns, u));
}

}  // namespace

CompatibilitySystem assemble_compatibility_system(const MongeAnsatz& ansatz, const ExprMatrix& V,
                                                  const std::vector<Symbol>& u) {
  if (V.rows() != ansatz.n) throw InvalidInput("compatibility system: dimension mismatch");
  CompatibilitySystem out;
  out.identities = compatibility_identities(ansatz.h, V, u);
  out.system = collect_identities(out.identities, ansatz.unknowns, u);
  return out;
}

CompatibilitySystem restrict_compatibility_system(const CompatibilitySystem& full, int m,
                                                  const std::vector<Symbol>& unknowns,
                                                  const std::vector<Symbol>& u) {
  CompatibilitySystem out;
  for (const auto& id : full.identities)
    if (id.family == "h-symmetry" && id.indices[0] < id.indices[1] && id.indices[1] <= m) out.identities.push_back(id);
  out.system = collect_identities(out.identities, unknowns, u);
  return out;
}

namespace {

// Coefficient of the highest monomial in the fields, as a function of the parameters.
Expr leading_field_coefficient(const Expr& e, const std::vector<Symbol>& u) {
  std::set<std::uint32_t> fields;
  for (auto s : u) fields.insert(s.index);
  std::map<Monomial, std::vector<Poly::Term>, std::function<bool(const Monomial&, const Monomial&)>> groups(
      [](const Monomial& a, const Monomial& b) { return a.compare(b) > 0; });
  for (const auto& [m, c] : e.num().terms()) {
    Monomial mf, mr;
    for (std::size_t i = 0; i < m.size(); ++i)
      (fields.count(m.var_at(i)) ? mf : mr) = (fields.count(m.var_at(i)) ? mf : mr) * Monomial::variable(m.var_at(i), m.exp_at(i));
    groups[mf].emplace_back(mr, c);
  }
  if (groups.empty()) return Expr();
  return Expr::fraction(Poly::from_terms(groups.begin()->second), e.den());
}

}  // namespace

ThirdOrderSolution find_third_order(const JetSpace& jet, const ExprMatrix& V, const std::vector<Symbol>& params,
                                    std::size_t batch_size, int restrict_to, int norm_i, int norm_j) {
  const int n = jet.n();
  const auto& u = jet.fields();
  const MongeAnsatz ansatz = monge_ansatz(jet);
  const CompatibilitySystem full = assemble_compatibility_system(ansatz, V, u);
  LinSystem<Expr> work;
  work.unknowns = full.system.unknowns;
  if (restrict_to > 0) work.rows = restrict_compatibility_system(full, restrict_to, ansatz.unknowns, u).system.rows;
  work.rows.insert(work.rows.end(), full.system.rows.begin(), full.system.rows.end());

  ThirdOrderSolution out;
  out.identities = full.identities.size();
  out.rows = full.system.rows.size();
  const auto res = solve_batched<Expr>(
      work, batch_size, [&](const SolutionSpace<Expr>& s) { return satisfies(s, full.system); });
  out.space = res.space;
  out.batches = res.batches;
  out.verified = res.verified;
  out.dimension = res.space.consistent ? res.space.dimension() : 0;
  if (out.dimension != 1) return out;

  const auto par = res.space.parametrization();
  const int free = res.space.free_columns().front();
  std::map<int, Expr> one{{free, Expr(1)}};
  out.h = ExprMatrix(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) out.h(i, j) = out.h(j, i) = substitute_solution(ansatz.h(i, j), ansatz.unknowns, par, one);
  if (norm_i < 0) norm_i = n - 1;
  if (norm_j < 0) norm_j = norm_i;
  Expr lead = leading_field_coefficient(out.h(norm_i, norm_j), u);
  if (lead.is_zero()) {
    for (int i = 0; i < n && lead.is_zero(); ++i)
      for (int j = i; j < n && lead.is_zero(); ++j) lead = leading_field_coefficient(out.h(i, j), u);
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.h(i, j) = out.h(i, j) / lead;
  out.h = reduce_sign_cases(out.h, params);
  return out;
}

Report check_third_order_hamiltonian(const Metric& h_in, const std::vector<Symbol>& u,
                                     const std::vector<ParamCase>& cases) {
  if (cases.size() > 1 || (cases.size() == 1 && !cases[0].empty())) {
    Report rep;
    for (const auto& c : cases) {
      Report one = check_third_order_hamiltonian(Metric::from_lower(substitute(h_in.lower, c)), u, {});
      rep.checked += one.checked;
      if (!one.passed) {
        one.failing_case = c;
        one.checked = rep.checked;
        return one;
      }
    }
    return rep;
  }
  const Metric& h = h_in;
  const int n = h.dim();
  std::vector<Residual> all;
  for (int m = 0; m < n; ++m)
    for (int k = m; k < n; ++k)
      for (int s = k; s < n; ++s)
        all.push_back({"monge",
                       {m + 1, k + 1, s + 1},
                       diff(h.lower(m, k), u[s]) + diff(h.lower(k, s), u[m]) + diff(h.lower(m, s), u[k])});
  const Tensor3 c = third_order_c_lower(h.lower, u);
  for (int m = 0; m < n; ++m)
    for (int s = 0; s < n; ++s)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          Expr e = diff(c(m, s, k), u[l]);
          for (int p = 0; p < n; ++p) {
            if (c(p, m, l).is_zero()) continue;
            for (int q = 0; q < n; ++q)
              if (!h.upper(p, q).is_zero() && !c(q, s, k).is_zero()) e += h.upper(p, q) * c(p, m, l) * c(q, s, k);
          }
          all.push_back({"cubic-closure", {m + 1, s + 1, k + 1, l + 1}, e});
        }
  return evaluate(all, cases);
}

Report check_third_order_compatibility(const ExprMatrix& h, const ExprMatrix& V, const std::vector<Symbol>& u,
                                       const std::vector<ParamCase>& cases) {
  std::vector<Residual> all;
  for (auto& id : compatibility_identities(h, V, u)) all.push_back({id.family, id.indices, id.value});
  return evaluate(all, cases);
}

}  // namespace hamforge
