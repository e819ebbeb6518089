#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "hamforge/expr.hpp"
#include "hamforge/tensor.hpp"

namespace hamforge {

/// Jet coordinates u^i_{kx}, 0 <= k <= max_order, for one independent variable x.
///
/// Also carries covector symbols psi<s>_<i> with their x-derivatives and any
/// nonlocal symbols registered with their defining D_x image.
class JetSpace {
 public:
  JetSpace(Workspace& ws, std::vector<std::string> fields, int max_order = 8);
  /// Fields named u1..un.
  JetSpace(Workspace& ws, int n, int max_order = 8);

  int n() const noexcept { return static_cast<int>(u_.size()); }
  int max_order() const noexcept { return max_order_; }
  Workspace& workspace() const noexcept { return *ws_; }

  /// Jet variable of field i (0-based) at order k.
  Symbol u(int i, int k = 0) const;
  const std::vector<Symbol>& fields() const noexcept { return fields_; }

  /// Declares psi<s>_<i> and its derivatives for argument s (1-based).
  void declare_covector(int s);
  Symbol psi(int s, int i, int k = 0) const;

  /// Registers a symbol with D_x(symbol) = image.
  void set_derivative(Symbol s, Expr image);

  /// Highest jet order of u appearing in e (0 when none).
  int order(const Expr& e) const;
  bool has_jets(const Expr& e) const;

  Expr total_derivative(const Expr& e) const;
  Expr total_derivative(const Expr& e, int times) const;

 private:
  void declare_jets(std::vector<std::string> names);
  Expr dx_of(std::uint32_t var) const;

  Workspace* ws_;
  int max_order_;
  std::vector<Symbol> fields_;
  std::vector<std::vector<Symbol>> u_;                 // [i][k]
  std::unordered_map<int, std::vector<std::vector<Symbol>>> psi_;  // s -> [i][k]
  std::unordered_map<std::uint32_t, Expr> dx_;         // symbol -> D_x image
  std::unordered_map<std::uint32_t, int> u_order_;     // symbol -> jet order of u
};

/// Matrix differential operator sum_k coeff[i][j][k] D_x^k.
struct DiffOperator {
  int n = 0;
  std::vector<std::vector<std::vector<Expr>>> coeff;

  explicit DiffOperator(int size = 0)
      : n(size), coeff(static_cast<std::size_t>(size), std::vector<std::vector<Expr>>(static_cast<std::size_t>(size))) {}
  const std::vector<Expr>& at(int i, int j) const { return coeff[i][j]; }
  Expr coefficient(int i, int j, int k) const {
    const auto& c = coeff[i][j];
    return k < static_cast<int>(c.size()) ? c[k] : Expr();
  }
  bool is_zero() const;
};

/// Euler operator: sum_k (-D_x)^k d density / d u^i_{kx}.
Expr variational_derivative(const JetSpace& jet, const Expr& density, int i);

/// Frechet derivative of a vector of differential functions.
DiffOperator linearize(const JetSpace& jet, const std::vector<Expr>& F);

/// Applies a matrix differential operator to a vector.
std::vector<Expr> apply(const JetSpace& jet, const DiffOperator& op, const std::vector<Expr>& v);

}  // namespace hamforge
