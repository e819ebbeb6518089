#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "hamforge/conditions.hpp"
#include "hamforge/operators.hpp"

namespace hamforge {

/// Trilinear density in psi1, psi2, psi3, at most quadratic in nonlocal symbols.
///
/// Terms are (monomial in jets of order >= 1, covector and nonlocal symbols;
/// coefficient rational in the fields and parameters), sorted by monomial.
struct TriVector {
  std::vector<std::pair<Monomial, Expr>> terms;
  bool normalized = false;

  bool is_zero() const { return terms.empty(); }
  friend bool operator==(const TriVector& a, const TriVector& b) { return a.terms == b.terms; }
};

struct ZeroTest {
  bool zero = true;
  std::optional<ParamCase> failing_case;
  std::string witness;  // "coefficient of <monomial>: <value>"
  Expr witness_value;
};

/// Schouten bracket engine over one jet space.
///
/// Owns the registry of nonlocal symbols for the arguments 1, 2, 3. Every
/// operator must be registered before its bracket is taken.
class Schouten {
 public:
  explicit Schouten(JetSpace& jet);

  void register_operator(const WnlOperator& op);
  const NonlocalRegistry& registry() const { return reg_; }
  JetSpace& jet() const { return *jet_; }

  /// [A, B], normalized.
  TriVector bracket(const WnlOperator& A, const WnlOperator& B);

  /// Canonical form modulo total derivatives.
  TriVector normalize(const TriVector& t);

  ZeroTest is_zero(const TriVector& t, const std::vector<ParamCase>& cases);

  /// Conversions for densities written as expressions.
  TriVector density(const Expr& e);
  Expr to_expr(const TriVector& t) const;
  TriVector total_derivative(const TriVector& t);

  using Dens = std::unordered_map<Monomial, Expr, MonomialHash>;

 private:
  enum class Kind { coefficient, jet, covector, nonlocal };
  struct VarInfo {
    Kind kind = Kind::coefficient;
    int slot = 0;   // covector / nonlocal argument
    int field = 0;  // component for jet and covector
    int order = 0;
    std::uint32_t next = 0;  // symbol of the next derivative
    bool has_next = false;
  };

  const VarInfo& info(std::uint32_t var);
  Dens split(const Expr& e);
  void add_derivative(Dens& out, const Monomial& m, const Expr& c);
  Dens derivative(const Dens& d);
  const std::vector<Expr>& field_gradient(const Expr& c);
  Dens frechet(const Expr& f, const std::vector<std::vector<Dens>>& XD);
  void add_term(Dens& d, const Monomial& m, const Expr& c);
  void contribution(Dens& acc, const WnlOperator& P, const WnlOperator& Q, int a, int b, int c);
  Dens by_parts(Dens d);
  Dens reduce(Dens d);
  TriVector finish(const Dens& d, bool normalized) const;

  JetSpace* jet_;
  NonlocalRegistry reg_;
  std::vector<VarInfo> vars_;
  std::unordered_map<std::uint32_t, Dens> images_;  // nonlocal symbol -> D_x image
  std::unordered_map<Expr, std::vector<Expr>, ExprHash> gradients_;
};

/// Operator with every parameter of `c` substituted.
WnlOperator specialize(const WnlOperator& op, const ParamCase& c);

/// [A, B] = 0 decided case by case: the operators are specialized first and a
/// fresh engine is used for each case, which keeps the coefficients rational in u.
ZeroTest bracket_vanishes(JetSpace& jet, const WnlOperator& A, const WnlOperator& B,
                          const std::vector<ParamCase>& cases);

/// Convenience wrapper: registers both operators and returns [A, B].
TriVector schouten_bracket(Schouten& engine, const WnlOperator& A, const WnlOperator& B);

}  // namespace hamforge
