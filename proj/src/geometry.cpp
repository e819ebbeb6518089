#include "hamforge/geometry.hpp"

namespace hamforge {

Metric Metric::from_lower(ExprMatrix g) {
  if (g.rows() != g.cols()) throw InvalidInput("metric must be square");
  for (int i = 0; i < g.rows(); ++i)
    for (int j = 0; j < i; ++j)
      if (!(g(i, j) == g(j, i))) throw InvalidInput("metric must be symmetric");
  Metric m;
  m.upper = inverse(g);
  m.lower = std::move(g);
  return m;
}

Metric Metric::from_upper(ExprMatrix g) {
  Metric m = from_lower(std::move(g));
  std::swap(m.lower, m.upper);
  return m;
}

ExprMatrix velocity_matrix(const JetSpace& jet, const std::vector<Expr>& fluxes) {
  const int n = jet.n();
  if (static_cast<int>(fluxes.size()) != n) throw InvalidInput("velocity_matrix: expected n fluxes");
  ExprMatrix V(n, n);
  for (int i = 0; i < n; ++i) {
    if (jet.has_jets(fluxes[i])) throw InvalidInput("flux " + std::to_string(i + 1) + " depends on jet variables");
    for (int j = 0; j < n; ++j) V(i, j) = diff(fluxes[i], jet.u(j));
  }
  return V;
}

Tensor3 nijenhuis_tensor(const ExprMatrix& V, const std::vector<Symbol>& u) {
  const int n = static_cast<int>(V.rows());
  // dV(p, i, k) = d_p V^i_k
  Tensor3 dV(n);
  for (int p = 0; p < n; ++p)
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) dV(p, i, k) = diff(V(i, k), u[p]);
  Tensor3 N(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        Expr s;
        for (int p = 0; p < n; ++p) {
          s += V(p, j) * dV(p, i, k) - V(p, k) * dV(p, i, j);
          s -= V(i, p) * (dV(j, p, k) - dV(k, p, j));
        }
        N(i, j, k) = s;
        N(i, k, j) = -s;
      }
  return N;
}

Tensor3 haantjes_tensor(const ExprMatrix& V, const Tensor3& N) {
  const int n = static_cast<int>(V.rows());
  const ExprMatrix V2 = V * V;
  // NV(i, p, k) = N^i_{pq} V^q_k ; VN(i, j, q) = V^i_p N^p_{jq}
  Tensor3 NV(n), VN(n);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        Expr s, t;
        for (int q = 0; q < n; ++q) {
          s += N(i, a, q) * V(q, b);
          t += V(i, q) * N(q, a, b);
        }
        NV(i, a, b) = s;
        VN(i, a, b) = t;
      }
  Tensor3 H(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        Expr s;
        for (int p = 0; p < n; ++p) {
          s += V(p, j) * NV(i, p, k);   // N^i_{pq} V^p_j V^q_k
          s -= VN(i, j, p) * V(p, k);   // N^p_{jq} V^i_p V^q_k
          s -= VN(i, p, k) * V(p, j);   // N^p_{qk} V^i_p V^q_j
          s += V2(i, p) * N(p, j, k);   // N^p_{jk} V^i_q V^q_p
        }
        H(i, j, k) = s;
        H(i, k, j) = -s;
      }
  return H;
}

ExprMatrix haantjes_square_contraction(const Tensor3& H) {
  const int n = H.dim();
  ExprMatrix M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Expr s;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          if (!H(a, i, b).is_zero() && !H(b, j, a).is_zero()) s += H(a, i, b) * H(b, j, a);
      M(i, j) = s;
      M(j, i) = s;
    }
  return M;
}

Tensor3 christoffel(const Metric& g, const std::vector<Symbol>& u) {
  const int n = g.dim();
  Tensor3 dg(n);  // dg(s, j, k) = d_s g_{jk}
  for (int s = 0; s < n; ++s)
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) dg(s, j, k) = dg(s, k, j) = diff(g.lower(j, k), u[s]);
  Tensor3 first(n);  // Gamma_{s,jk}
  for (int s = 0; s < n; ++s)
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) first(s, j, k) = first(s, k, j) = (dg(j, s, k) + dg(k, s, j) - dg(s, j, k)) / Expr(2);
  Tensor3 G(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) {
        Expr v;
        for (int s = 0; s < n; ++s)
          if (!g.upper(i, s).is_zero() && !first(s, j, k).is_zero()) v += g.upper(i, s) * first(s, j, k);
        G(i, j, k) = G(i, k, j) = v;
      }
  return G;
}

Tensor3 christoffel_contravariant(const Metric& g, const Tensor3& gamma) {
  const int n = g.dim();
  Tensor3 C(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Expr v;
        for (int s = 0; s < n; ++s)
          if (!g.upper(i, s).is_zero() && !gamma(j, s, k).is_zero()) v -= g.upper(i, s) * gamma(j, s, k);
        C(i, j, k) = v;
      }
  return C;
}

Tensor4 riemann_mixed(const Tensor3& gamma, const std::vector<Symbol>& u) {
  const int n = gamma.dim();
  Tensor4 dG(n);  // dG(k, i, l, j) = d_k Gamma^i_{lj}
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l)
        for (int j = 0; j < n; ++j) dG(k, i, l, j) = diff(gamma(i, l, j), u[k]);
  Tensor4 R(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = k + 1; l < n; ++l) {
          Expr v = dG(k, i, l, j) - dG(l, i, k, j);
          for (int s = 0; s < n; ++s) v += gamma(i, k, s) * gamma(s, l, j) - gamma(i, l, s) * gamma(s, k, j);
          R(i, j, k, l) = v;
          R(i, j, l, k) = -v;
        }
  return R;
}

Tensor4 riemann_curvature(const Metric& g, const Tensor3& gamma, const std::vector<Symbol>& u) {
  const int n = g.dim();
  const Tensor4 Rm = riemann_mixed(gamma, u);
  Tensor4 R(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = k + 1; l < n; ++l) {
          Expr v;
          for (int s = 0; s < n; ++s)
            if (!g.upper(i, s).is_zero() && !Rm(j, s, l, k).is_zero()) v += g.upper(i, s) * Rm(j, s, l, k);
          R(i, j, k, l) = v;
          R(i, j, l, k) = -v;
        }
  return R;
}

Tensor3 covariant_derivative_11(const Tensor3& gamma, const ExprMatrix& V, const std::vector<Symbol>& u) {
  const int n = gamma.dim();
  Tensor3 D(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Expr v = diff(V(i, j), u[k]);
        for (int s = 0; s < n; ++s) v += gamma(i, k, s) * V(s, j) - gamma(s, k, j) * V(i, s);
        D(k, i, j) = v;
      }
  return D;
}

}  // namespace hamforge
