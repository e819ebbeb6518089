#include "hamforge/jet.hpp"

namespace hamforge {

namespace {

std::string jet_name(const std::string& base, int k) {
  if (k == 0) return base;
  if (k == 1) return base + "_x";
  return base + "_x" + std::to_string(k);
}

}  // namespace

JetSpace::JetSpace(Workspace& ws, std::vector<std::string> fields, int max_order) : ws_(&ws), max_order_(max_order) {
  if (max_order < 1) throw InvalidInput("max_order must be at least 1");
  declare_jets(std::move(fields));
}

JetSpace::JetSpace(Workspace& ws, int n, int max_order) : ws_(&ws), max_order_(max_order) {
  if (max_order < 1) throw InvalidInput("max_order must be at least 1");
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i) names.push_back("u" + std::to_string(i));
  declare_jets(std::move(names));
}

void JetSpace::declare_jets(std::vector<std::string> names) {
  if (names.empty()) throw InvalidInput("jet space needs at least one field");
  u_.resize(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) {
    SymbolInfo info{names[i], SymbolKind::field, static_cast<int>(i), 0, -1, -1, {}};
    Symbol s = ws_->find(names[i]) ? ws_->ensure(names[i], SymbolKind::field) : ws_->declare(info);
    fields_.push_back(s);
    u_[i].push_back(s);
  }
  for (int k = 1; k <= max_order_; ++k)
    for (std::size_t i = 0; i < names.size(); ++i) {
      const std::string name = jet_name(names[i], k);
      Symbol s = ws_->find(name) ? ws_->ensure(name, SymbolKind::jet)
                                 : ws_->declare(SymbolInfo{name, SymbolKind::jet, static_cast<int>(i), k, -1, -1, {}});
      u_[i].push_back(s);
    }
  for (std::size_t i = 0; i < names.size(); ++i)
    for (int k = 0; k <= max_order_; ++k) {
      u_order_[u_[i][k].index] = k;
      if (k < max_order_) dx_.emplace(u_[i][k].index, Expr(u_[i][k + 1]));
    }
}

Symbol JetSpace::u(int i, int k) const {
  if (i < 0 || i >= n()) throw InvalidInput("field index out of range");
  if (k < 0 || k > max_order_) throw OrderOverflow("jet order " + std::to_string(k) + " exceeds max_order");
  return u_[i][k];
}

void JetSpace::declare_covector(int s) {
  if (psi_.count(s)) return;
  std::vector<std::vector<Symbol>> table(static_cast<std::size_t>(n()));
  for (int k = 0; k <= max_order_; ++k)
    for (int i = 0; i < n(); ++i) {
      const std::string name = jet_name("psi" + std::to_string(s) + "_" + std::to_string(i + 1), k);
      table[i].push_back(ws_->find(name) ? ws_->ensure(name, SymbolKind::covector)
                                         : ws_->declare(SymbolInfo{name, SymbolKind::covector, i, k, s, -1, {}}));
    }
  for (int i = 0; i < n(); ++i)
    for (int k = 0; k < max_order_; ++k) dx_.emplace(table[i][k].index, Expr(table[i][k + 1]));
  psi_.emplace(s, std::move(table));
}

Symbol JetSpace::psi(int s, int i, int k) const {
  auto it = psi_.find(s);
  if (it == psi_.end()) throw InvalidInput("covector argument not declared");
  if (k > max_order_) throw OrderOverflow("covector jet order exceeds max_order");
  return it->second.at(i).at(k);
}

void JetSpace::set_derivative(Symbol s, Expr image) { dx_[s.index] = std::move(image); }

int JetSpace::order(const Expr& e) const {
  int k = 0;
  for (auto s : e.symbols()) {
    auto it = u_order_.find(s.index);
    if (it != u_order_.end()) k = std::max(k, it->second);
  }
  return k;
}

bool JetSpace::has_jets(const Expr& e) const { return order(e) > 0; }

Expr JetSpace::dx_of(std::uint32_t var) const {
  auto it = dx_.find(var);
  if (it != dx_.end()) return it->second;
  const auto kind = ws_->info(Symbol{var}).kind;
  if (kind == SymbolKind::parameter || kind == SymbolKind::unknown) return Expr();
  throw OrderOverflow("total derivative of '" + ws_->name(Symbol{var}) + "' exceeds max_order");
}

namespace {

// D_x of a polynomial as an expression; polynomial images keep everything polynomial.
Expr dx_poly(const Poly& p, const std::vector<std::uint32_t>& vars, const std::vector<Expr>& images) {
  Poly acc;
  Expr rational;
  for (std::size_t v = 0; v < vars.size(); ++v) {
    if (images[v].is_zero()) continue;
    Poly d = p.derivative(vars[v]);
    if (d.is_zero()) continue;
    if (images[v].is_polynomial())
      acc += d * images[v].num();
    else
      rational += Expr(std::move(d)) * images[v];
  }
  return Expr(std::move(acc)) + rational;
}

}  // namespace

Expr JetSpace::total_derivative(const Expr& e) const {
  std::vector<std::uint32_t> vars;
  std::vector<Expr> images;
  for (auto s : e.symbols()) {
    const auto kind = ws_->info(s).kind;
    if (kind == SymbolKind::parameter || kind == SymbolKind::unknown) continue;
    vars.push_back(s.index);
    images.push_back(dx_of(s.index));
  }
  if (vars.empty()) return Expr();
  Expr dn = dx_poly(e.num(), vars, images);
  if (e.is_polynomial()) return dn;
  Expr dd = dx_poly(e.den(), vars, images);
  return (dn * Expr(e.den()) - Expr(e.num()) * dd) / Expr(e.den() * e.den());
}

Expr JetSpace::total_derivative(const Expr& e, int times) const {
  Expr r = e;
  for (int t = 0; t < times; ++t) r = total_derivative(r);
  return r;
}

bool DiffOperator::is_zero() const {
  for (const auto& row : coeff)
    for (const auto& c : row)
      for (const auto& x : c)
        if (!x.is_zero()) return false;
  return true;
}

Expr variational_derivative(const JetSpace& jet, const Expr& density, int i) {
  const int top = jet.order(density);
  Expr acc;
  for (int k = top; k >= 0; --k) {
    // acc <- d/du_k - D_x(acc)
    acc = diff(density, jet.u(i, k)) - jet.total_derivative(acc);
  }
  return acc;
}

DiffOperator linearize(const JetSpace& jet, const std::vector<Expr>& F) {
  const int n = jet.n();
  if (static_cast<int>(F.size()) != n) throw InvalidInput("linearize: expected n components");
  DiffOperator op(n);
  for (int i = 0; i < n; ++i) {
    const int top = jet.order(F[i]);
    for (int j = 0; j < n; ++j) {
      auto& c = op.coeff[i][j];
      for (int k = 0; k <= top; ++k) c.push_back(diff(F[i], jet.u(j, k)));
      while (!c.empty() && c.back().is_zero()) c.pop_back();
    }
  }
  return op;
}

std::vector<Expr> apply(const JetSpace& jet, const DiffOperator& op, const std::vector<Expr>& v) {
  if (static_cast<int>(v.size()) != op.n) throw InvalidInput("apply: size mismatch");
  std::vector<std::vector<Expr>> derivs(v.size());
  std::vector<Expr> out(v.size());
  for (int i = 0; i < op.n; ++i)
    for (int j = 0; j < op.n; ++j) {
      const auto& c = op.coeff[i][j];
      for (std::size_t k = 0; k < c.size(); ++k) {
        if (c[k].is_zero()) continue;
        auto& dj = derivs[j];
        if (dj.empty()) dj.push_back(v[j]);
        while (dj.size() <= k) dj.push_back(jet.total_derivative(dj.back()));
        out[i] += c[k] * dj[k];
      }
    }
  return out;
}

}  // namespace hamforge
