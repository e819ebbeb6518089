#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hamforge/poly.hpp"
#include "hamforge/workspace.hpp"

namespace hamforge {

/// Exact rational function over Q in the symbols of a workspace.
///
/// Always canonical: numerator and denominator coprime, denominator monic in
/// graded-lex order, zero stored as 0/1. Copies share one immutable body.
class Expr {
 public:
  Expr();
  Expr(long value);  // NOLINT: implicit so that literals mix with expressions
  Expr(int value) : Expr(static_cast<long>(value)) {}  // NOLINT
  Expr(const mpq_class& value);  // NOLINT
  explicit Expr(Poly numerator);
  Expr(Symbol s);  // NOLINT

  /// Builds num/den and canonicalizes. Throws MathError when den is zero.
  static Expr fraction(Poly num, Poly den);

  const Poly& num() const { return body_->num; }
  const Poly& den() const { return body_->den; }

  bool is_zero() const { return num().is_zero(); }
  bool is_polynomial() const { return den().is_one(); }
  bool is_constant() const { return num().is_constant() && den().is_one(); }
  std::optional<mpq_class> constant() const;
  bool depends_on(Symbol s) const { return num().depends_on(s.index) || den().depends_on(s.index); }
  std::vector<Symbol> symbols() const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  Expr operator-() const;
  Expr& operator+=(const Expr& b) { return *this = *this + b; }
  Expr& operator-=(const Expr& b) { return *this = *this - b; }
  Expr& operator*=(const Expr& b) { return *this = *this * b; }
  Expr& operator/=(const Expr& b) { return *this = *this / b; }

  friend bool operator==(const Expr& a, const Expr& b) {
    return a.body_ == b.body_ || (a.num() == b.num() && a.den() == b.den());
  }

  std::size_t hash() const { return num().hash() * 31u + den().hash(); }

 private:
  struct Body {
    Poly num, den;
  };
  explicit Expr(std::shared_ptr<const Body> b) : body_(std::move(b)) {}
  static Expr make(Poly num, Poly den);  // assumes canonical
  std::shared_ptr<const Body> body_;
};

Expr pow(const Expr& base, long exponent);
Expr diff(const Expr& e, Symbol s);
/// Simultaneous substitution.
Expr substitute(const Expr& e, const std::map<Symbol, Expr>& bindings);
/// Substitution of rational constants (faster path).
Expr substitute(const Expr& e, const std::map<Symbol, mpq_class>& values);

/// Irreducible factors of numerator (positive exponents) and denominator (negative).
struct ExprFactorization {
  mpq_class unit;
  std::vector<std::pair<Poly, int>> factors;
};
ExprFactorization factor(const Expr& e);

std::string to_string(const Expr& e, const Workspace& ws);
std::string to_string(const Poly& p, const Workspace& ws);
Expr parse(std::string_view text, Workspace& ws);

struct ExprHash {
  std::size_t operator()(const Expr& e) const { return e.hash(); }
};

}  // namespace hamforge
