#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "hamforge/geometry.hpp"
#include "hamforge/jet.hpp"

namespace hamforge {

/// Weakly nonlocal operator
///   A^{ij} = sum_k local^{ij}_k D_x^k + sum_{ab} coupling^{ab} w_a^i D_x^{-1} w_b^j.
struct WnlOperator {
  std::string tag;
  DiffOperator local;
  std::vector<std::vector<Expr>> tails;  // tails[a][i] = w_a^i
  ExprMatrix coupling;                   // symmetric, constant in the fields

  int n() const { return local.n; }
  bool is_local() const { return tails.empty(); }
};

/// g^{ij} D_x + Gamma^{ij}_k u^k_x + alpha w1 D^{-1} w1 + beta (w1 D^{-1} w2 + w2 D^{-1} w1) + gamma w2 D^{-1} w2
/// with w1 = V^i_q u^q_x and w2 = u^i_x.
WnlOperator make_ferapontov(const JetSpace& jet, const Metric& g, const ExprMatrix& V, const Expr& alpha,
                            const Expr& beta, const Expr& gamma, std::string tag = "A");

/// c_{ijk} = (h_{ik,j} - h_{ij,k}) / 3, indexed c(i, j, k).
Tensor3 third_order_c_lower(const ExprMatrix& h_lower, const std::vector<Symbol>& u);
/// c^{ij}_k = h^{iq} h^{jp} c_{pqk}, indexed C(i, j, k).
Tensor3 third_order_c_upper(const Metric& h, const Tensor3& c_lower);

/// D_x (h^{ij} D_x + c^{ij}_k u^k_x) D_x expanded into orders 1..3.
WnlOperator make_third_order(const JetSpace& jet, const Metric& h, std::string tag = "B");

/// Nonlocal symbols phi_<tag>_<a>_<s> with D_x phi = w_a . psi<s>.
/// Operators whose tails coincide share one symbol.
class NonlocalRegistry {
 public:
  explicit NonlocalRegistry(JetSpace& jet) : jet_(&jet) {}

  /// Declares symbols for every tail of `op` and argument s.
  void register_operator(const WnlOperator& op, int s);
  std::optional<Symbol> find(const std::string& tag, int tail, int s) const;
  Symbol at(const std::string& tag, int tail, int s) const;

  struct Entry {
    Symbol symbol;
    int s;
    std::vector<Expr> tail;
  };
  const std::vector<Entry>& entries() const { return entries_; }

 private:
  JetSpace* jet_;
  std::map<std::tuple<std::string, int, int>, std::size_t> index_;
  std::vector<Entry> entries_;
};

/// (A psi<s>)^i including the nonlocal terms coupling^{ab} w_a^i phi_b.
std::vector<Expr> apply(const JetSpace& jet, const WnlOperator& op, int s, const NonlocalRegistry& reg);

/// Local part written through its formal adjoint: returns local + local^*, which vanishes
/// for a formally skew-adjoint local part.
DiffOperator skew_defect(const JetSpace& jet, const DiffOperator& op);

}  // namespace hamforge
