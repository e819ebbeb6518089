#include "hamforge/operators.hpp"

namespace hamforge {

WnlOperator make_ferapontov(const JetSpace& jet, const Metric& g, const ExprMatrix& V, const Expr& alpha,
                            const Expr& beta, const Expr& gamma, std::string tag) {
  const int n = jet.n();
  if (g.dim() != n || V.rows() != n) throw InvalidInput("make_ferapontov: dimension mismatch");
  const auto& u = jet.fields();
  const Tensor3 G = christoffel(g, u);
  const Tensor3 Gc = christoffel_contravariant(g, G);
  WnlOperator op;
  op.tag = std::move(tag);
  op.local = DiffOperator(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Expr order0;
      for (int k = 0; k < n; ++k)
        if (!Gc(i, j, k).is_zero()) order0 += Gc(i, j, k) * Expr(jet.u(k, 1));
      op.local.coeff[i][j] = {order0, g.upper(i, j)};
      auto& c = op.local.coeff[i][j];
      while (!c.empty() && c.back().is_zero()) c.pop_back();
    }
  std::vector<Expr> w1(n), w2(n);
  for (int i = 0; i < n; ++i) {
    for (int q = 0; q < n; ++q)
      if (!V(i, q).is_zero()) w1[i] += V(i, q) * Expr(jet.u(q, 1));
    w2[i] = Expr(jet.u(i, 1));
  }
  op.tails = {w1, w2};
  op.coupling = ExprMatrix(2, 2);
  op.coupling << alpha, beta, beta, gamma;
  return op;
}

Tensor3 third_order_c_lower(const ExprMatrix& h, const std::vector<Symbol>& u) {
  const int n = static_cast<int>(h.rows());
  Tensor3 c(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) c(i, j, k) = (diff(h(i, k), u[j]) - diff(h(i, j), u[k])) / Expr(3);
  return c;
}

Tensor3 third_order_c_upper(const Metric& h, const Tensor3& c) {
  const int n = h.dim();
  // t(i, p, k) = h^{iq} c_{pqk}
  Tensor3 t(n), C(n);
  for (int i = 0; i < n; ++i)
    for (int p = 0; p < n; ++p)
      for (int k = 0; k < n; ++k) {
        Expr s;
        for (int q = 0; q < n; ++q)
          if (!h.upper(i, q).is_zero() && !c(p, q, k).is_zero()) s += h.upper(i, q) * c(p, q, k);
        t(i, p, k) = s;
      }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Expr s;
        for (int p = 0; p < n; ++p)
          if (!h.upper(j, p).is_zero() && !t(i, p, k).is_zero()) s += h.upper(j, p) * t(i, p, k);
        C(i, j, k) = s;
      }
  return C;
}

WnlOperator make_third_order(const JetSpace& jet, const Metric& h, std::string tag) {
  const int n = jet.n();
  if (h.dim() != n) throw InvalidInput("make_third_order: dimension mismatch");
  const auto& u = jet.fields();
  const Tensor3 C = third_order_c_upper(h, third_order_c_lower(h.lower, u));
  WnlOperator op;
  op.tag = std::move(tag);
  op.local = DiffOperator(n);
  op.coupling = ExprMatrix(0, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Expr cu;
      for (int k = 0; k < n; ++k)
        if (!C(i, j, k).is_zero()) cu += C(i, j, k) * Expr(jet.u(k, 1));
      const Expr b3 = h.upper(i, j);
      const Expr b2 = jet.total_derivative(b3) + cu;
      const Expr b1 = jet.total_derivative(cu);
      op.local.coeff[i][j] = {Expr(), b1, b2, b3};
      auto& c = op.local.coeff[i][j];
      while (!c.empty() && c.back().is_zero()) c.pop_back();
    }
  return op;
}

void NonlocalRegistry::register_operator(const WnlOperator& op, int s) {
  jet_->declare_covector(s);
  for (std::size_t a = 0; a < op.tails.size(); ++a) {
    const auto key = std::make_tuple(op.tag, static_cast<int>(a), s);
    if (index_.count(key)) continue;
    std::optional<std::size_t> same;
    for (std::size_t e = 0; e < entries_.size(); ++e)
      if (entries_[e].s == s && entries_[e].tail == op.tails[a]) same = e;
    if (!same) {
      const std::string name = "phi_" + op.tag + "_" + std::to_string(a + 1) + "_" + std::to_string(s);
      Workspace& ws = jet_->workspace();
      Symbol sym = ws.find(name) ? ws.ensure(name, SymbolKind::nonlocal)
                                 : ws.declare(SymbolInfo{name, SymbolKind::nonlocal, -1, 0, s, static_cast<int>(a), op.tag});
      Expr image;
      for (int i = 0; i < jet_->n(); ++i)
        if (!op.tails[a][i].is_zero()) image += op.tails[a][i] * Expr(jet_->psi(s, i));
      jet_->set_derivative(sym, image);
      same = entries_.size();
      entries_.push_back(Entry{sym, s, op.tails[a]});
    }
    index_.emplace(key, *same);
  }
}

std::optional<Symbol> NonlocalRegistry::find(const std::string& tag, int tail, int s) const {
  auto it = index_.find(std::make_tuple(tag, tail, s));
  if (it == index_.end()) return std::nullopt;
  return entries_[it->second].symbol;
}

Symbol NonlocalRegistry::at(const std::string& tag, int tail, int s) const {
  if (auto f = find(tag, tail, s)) return *f;
  throw InvalidInput("no nonlocal symbol for operator '" + tag + "' tail " + std::to_string(tail + 1) + " argument " +
                     std::to_string(s));
}

std::vector<Expr> apply(const JetSpace& jet, const WnlOperator& op, int s, const NonlocalRegistry& reg) {
  const int n = op.n();
  std::vector<Expr> psi(n);
  for (int j = 0; j < n; ++j) psi[j] = Expr(jet.psi(s, j));
  std::vector<Expr> out = apply(jet, op.local, psi);
  for (std::size_t a = 0; a < op.tails.size(); ++a)
    for (std::size_t b = 0; b < op.tails.size(); ++b) {
      const Expr& c = op.coupling(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      if (c.is_zero()) continue;
      const Expr phi(reg.at(op.tag, static_cast<int>(b), s));
      for (int i = 0; i < n; ++i)
        if (!op.tails[a][i].is_zero()) out[i] += c * op.tails[a][i] * phi;
    }
  return out;
}

DiffOperator skew_defect(const JetSpace& jet, const DiffOperator& op) {
  // (sum_k B_k D^k)^* = sum_k (-D)^k B_k^T; expand (-D)^k (b .) with Leibniz.
  const int n = op.n;
  DiffOperator out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.coeff[i][j] = op.coeff[i][j];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const auto& b = op.coeff[j][i];  // transpose
      for (std::size_t k = 0; k < b.size(); ++k) {
        if (b[k].is_zero()) continue;
        // (-1)^k D^k (b f) = (-1)^k sum_m C(k,m) D^{k-m}(b) D^m f
        Expr dk = b[k];
        std::vector<Expr> ders{dk};
        for (std::size_t m = 1; m <= k; ++m) ders.push_back(jet.total_derivative(ders.back()));
        long binom = 1;
        for (std::size_t m = 0; m <= k; ++m) {
          Expr term = ders[k - m] * Expr(binom);
          if (k % 2 == 1) term = -term;
          auto& slot = out.coeff[i][j];
          if (slot.size() <= m) slot.resize(m + 1);
          slot[m] += term;
          binom = binom * static_cast<long>(k - m) / static_cast<long>(m + 1);
        }
      }
    }
  for (auto& row : out.coeff)
    for (auto& c : row)
      while (!c.empty() && c.back().is_zero()) c.pop_back();
  return out;
}

}  // namespace hamforge
