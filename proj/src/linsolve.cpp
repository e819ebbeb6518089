#include "hamforge/linsolve.hpp"

#include <unordered_map>

namespace hamforge {

namespace {

template <class Scalar>
Scalar to_scalar(const Poly& p);

template <>
mpq_class to_scalar<mpq_class>(const Poly& p) {
  if (!p.is_constant()) throw InvalidInput("collect_coefficients: coefficient depends on uncollected symbols");
  return p.constant_value();
}

template <>
Expr to_scalar<Expr>(const Poly& p) {
  return Expr(p);
}

}  // namespace

template <class Scalar>
LinSystem<Scalar> collect_coefficients(const std::vector<Expr>& identities, const std::vector<Symbol>& unknowns,
                                       const std::vector<Symbol>& collect) {
  LinSystem<Scalar> sys;
  sys.unknowns = unknowns;
  std::unordered_map<std::uint32_t, int> column;
  for (std::size_t j = 0; j < unknowns.size(); ++j) column.emplace(unknowns[j].index, static_cast<int>(j));
  std::set<std::uint32_t> collected;
  for (auto s : collect) collected.insert(s.index);

  for (const Expr& e : identities) {
    for (auto s : unknowns)
      if (e.den().depends_on(s.index)) throw InvalidInput("collect_coefficients: unknown in a denominator");
    std::unordered_map<Monomial, std::map<int, std::vector<Poly::Term>>, MonomialHash> groups;
    std::vector<Monomial> order;
    for (const auto& [m, c] : e.num().terms()) {
      Monomial mc, mr;
      int col = -1;
      for (std::size_t i = 0; i < m.size(); ++i) {
        const auto v = m.var_at(i), x = m.exp_at(i);
        if (collected.count(v)) {
          mc = mc * Monomial::variable(v, x);
        } else if (auto it = column.find(v); it != column.end()) {
          if (col != -1 || x != 1) throw InvalidInput("collect_coefficients: identity is not linear in the unknowns");
          col = it->second;
        } else {
          mr = mr * Monomial::variable(v, x);
        }
      }
      auto [it, fresh] = groups.try_emplace(mc);
      if (fresh) order.push_back(mc);
      it->second[col].emplace_back(mr, c);
    }
    std::sort(order.begin(), order.end(), [](const Monomial& a, const Monomial& b) { return a.compare(b) > 0; });
    for (const auto& mc : order) {
      LinRow<Scalar> row;
      for (auto& [col, terms] : groups[mc]) {
        Poly p = Poly::from_terms(std::move(terms));
        if (p.is_zero()) continue;
        if (col < 0)
          row.rhs = to_scalar<Scalar>(-p);
        else
          row.entries.emplace_back(col, to_scalar<Scalar>(p));
      }
      if (!row.is_trivial()) sys.rows.push_back(std::move(row));
    }
  }
  return sys;
}

template LinSystem<mpq_class> collect_coefficients(const std::vector<Expr>&, const std::vector<Symbol>&,
                                                   const std::vector<Symbol>&);
template LinSystem<Expr> collect_coefficients(const std::vector<Expr>&, const std::vector<Symbol>&,
                                              const std::vector<Symbol>&);

namespace {

template <class Scalar>
Expr substitute_affine(const Expr& e, const std::vector<Symbol>& unknowns,
                       const std::vector<std::map<int, Scalar>>& values, const std::map<int, Expr>& free_values) {
  std::map<Symbol, Expr> zero;
  for (auto s : unknowns)
    if (e.depends_on(s)) zero.emplace(s, Expr());
  if (zero.empty()) return e;
  Expr out = substitute(e, zero);
  for (std::size_t j = 0; j < unknowns.size(); ++j) {
    if (!e.depends_on(unknowns[j])) continue;
    const Expr coeff = diff(e, unknowns[j]);
    Expr value;
    for (const auto& [f, a] : values[j]) {
      if (f < 0) {
        value += Expr(a);
      } else {
        auto it = free_values.find(f);
        if (it != free_values.end()) value += Expr(a) * it->second;
      }
    }
    out += coeff * value;
  }
  return out;
}

}  // namespace

Expr substitute_solution(const Expr& e, const std::vector<Symbol>& unknowns,
                         const std::vector<std::map<int, mpq_class>>& values, const std::map<int, Expr>& free_values) {
  return substitute_affine(e, unknowns, values, free_values);
}

Expr substitute_solution(const Expr& e, const std::vector<Symbol>& unknowns,
                         const std::vector<std::map<int, Expr>>& values, const std::map<int, Expr>& free_values) {
  return substitute_affine(e, unknowns, values, free_values);
}

}  // namespace hamforge
