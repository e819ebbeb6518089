#include "doctest.h"

#include "hamforge/conditions.hpp"
#include "hamforge/schouten.hpp"

using namespace hamforge;

namespace {

ExprMatrix diagonal(std::vector<Expr> d) {
  const auto n = static_cast<Eigen::Index>(d.size());
  ExprMatrix m = ExprMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = d[i];
  return m;
}

WnlOperator local_part(WnlOperator op, std::string tag) {
  op.tails.clear();
  op.coupling = ExprMatrix(0, 0);
  op.tag = std::move(tag);
  return op;
}

WnlOperator sum(const WnlOperator& a, const WnlOperator& b, std::string tag) {
  WnlOperator out = a;
  out.tag = std::move(tag);
  for (int i = 0; i < a.n(); ++i)
    for (int j = 0; j < a.n(); ++j) {
      auto& c = out.local.coeff[i][j];
      const auto& d = b.local.coeff[i][j];
      if (c.size() < d.size()) c.resize(d.size());
      for (std::size_t k = 0; k < d.size(); ++k) c[k] += d[k];
    }
  return out;
}

}  // namespace

TEST_CASE("first order brackets") {
  Workspace ws;
  JetSpace jet(ws, 3);
  const ExprMatrix zero = ExprMatrix::Zero(3, 3);
  const auto flat = make_ferapontov(jet, Metric::from_lower(ExprMatrix::Identity(3, 3)), zero, Expr(0), Expr(0), Expr(0));
  CHECK(bracket_vanishes(jet, flat, flat, {}).zero);

  const Expr u1(jet.u(0));
  const auto curved = make_ferapontov(jet, Metric::from_lower(diagonal({u1, u1, Expr(1)})), zero, Expr(0), Expr(0), Expr(0));
  const ZeroTest t = bracket_vanishes(jet, curved, curved, {});
  CHECK_FALSE(t.zero);
  CHECK_FALSE(t.witness.empty());
}

TEST_CASE("sphere with constant curvature tail") {
  Workspace ws;
  JetSpace jet(ws, 2);
  const Expr conf = parse("4/(1+u1^2+u2^2)^2", ws);
  const Metric g = Metric::from_lower(diagonal({conf, conf}));
  const ExprMatrix I = ExprMatrix::Identity(2, 2);
  const auto plus = make_ferapontov(jet, g, I, Expr(0), Expr(0), Expr(1));
  CHECK(bracket_vanishes(jet, plus, plus, {}).zero);
  const auto minus = make_ferapontov(jet, g, I, Expr(0), Expr(0), Expr(-1), "M");
  CHECK_FALSE(bracket_vanishes(jet, minus, minus, {}).zero);
}

TEST_CASE("normal form") {
  Workspace ws;
  JetSpace jet(ws, 1);
  Schouten engine(jet);
  const Expr p1(jet.psi(1, 0)), p2x(jet.psi(2, 0, 1)), p3x(jet.psi(3, 0, 1));
  const TriVector t = engine.normalize(engine.density(p1 * p2x * p3x));
  for (const auto& [m, c] : t.terms) CHECK(m.exponent(jet.psi(3, 0, 1).index) == 0);
  // psi1 psi2_x psi3_x = -D(psi1 psi2_x) psi3 modulo D
  const Expr expected = -(Expr(jet.psi(1, 0, 1)) * p2x + p1 * Expr(jet.psi(2, 0, 2))) * Expr(jet.psi(3, 0));
  CHECK(engine.to_expr(t) == engine.to_expr(engine.normalize(engine.density(expected))));
  CHECK(engine.normalize(t) == t);

  const Expr u(jet.u(0)), ux(jet.u(0, 1));
  const Expr any = u * ux * p1 * p2x * Expr(jet.psi(3, 0)) + pow(ux, 3) * p1 * Expr(jet.psi(2, 0)) * p3x;
  CHECK(engine.normalize(engine.total_derivative(engine.density(any))).is_zero());
}

TEST_CASE("zero test witness") {
  Workspace ws;
  const Symbol lam = ws.declare("lam", SymbolKind::parameter);
  JetSpace jet(ws, 1);
  Schouten engine(jet);
  const Expr psi = Expr(jet.psi(1, 0)) * Expr(jet.psi(2, 0)) * Expr(jet.psi(3, 0));
  const TriVector t = engine.normalize(engine.density((Expr(lam) - Expr(2)) * psi));
  CHECK(engine.is_zero(TriVector{}, {ParamCase{{lam, 1}}}).zero);
  const ZeroTest z = engine.is_zero(t, {ParamCase{{lam, 2}}, ParamCase{{lam, 1}}});
  CHECK_FALSE(z.zero);
  REQUIRE(z.failing_case.has_value());
  CHECK(z.failing_case->at(lam) == 1);
  CHECK(z.witness_value == Expr(-1));
}

TEST_CASE("bracket is symmetric and bilinear") {
  Workspace ws;
  JetSpace jet(ws, 2);
  const ExprMatrix zero = ExprMatrix::Zero(2, 2);
  const Expr u1(jet.u(0)), u2(jet.u(1));
  const auto A = local_part(make_ferapontov(jet, Metric::from_lower(diagonal({u1, Expr(1)})), zero, Expr(0), Expr(0), Expr(0)), "A");
  const auto B = local_part(make_ferapontov(jet, Metric::from_lower(diagonal({Expr(1), u1 * u2})), zero, Expr(0), Expr(0), Expr(0)), "B");
  const auto C = local_part(make_ferapontov(jet, Metric::from_lower(diagonal({u2 + Expr(2), u1})), zero, Expr(0), Expr(0), Expr(0)), "C");
  const auto BC = sum(B, C, "BC");
  Schouten engine(jet);
  for (const auto* op : {&A, &B, &C, &BC}) engine.register_operator(*op);
  const TriVector ab = engine.bracket(A, B);
  CHECK(ab == engine.bracket(B, A));
  CHECK_FALSE(ab.is_zero());
  const Expr lhs = engine.to_expr(engine.bracket(A, BC));
  const Expr rhs = engine.to_expr(ab) + engine.to_expr(engine.bracket(A, C));
  CHECK(engine.to_expr(engine.normalize(engine.density(lhs - rhs))) == Expr(0));
}

TEST_CASE("third order brackets agree with the Hamiltonian conditions") {
  Workspace ws;
  JetSpace jet(ws, 2);
  const auto& u = jet.fields();
  auto metric = [&](const char* a, const char* b, const char* c) {
    ExprMatrix h(2, 2);
    h << parse(a, ws), parse(b, ws), parse(b, ws), parse(c, ws);
    return Metric::from_lower(h);
  };
  const Metric good = metric("u2^2 + 1", "u2 - u1*u2", "(u1 - 1)^2");
  REQUIRE(check_third_order_hamiltonian(good, u, {ParamCase{}}).passed);
  CHECK(bracket_vanishes(jet, make_third_order(jet, good), make_third_order(jet, good), {}).zero);

  // Monge, but the cubic closure fails
  const Metric monge = metric("1 + u2^2", "-u1*u2", "1 + u1^2");
  const Report r = check_third_order_hamiltonian(monge, u, {ParamCase{}});
  REQUIRE_FALSE(r.passed);
  CHECK(r.failures[0].condition == "cubic-closure");
  const auto T = make_third_order(jet, monge, "T");
  CHECK_FALSE(bracket_vanishes(jet, T, T, {}).zero);
}
