#include "doctest.h"

#include "hamforge/conditions.hpp"

using namespace hamforge;

namespace {

ExprMatrix diagonal(std::initializer_list<Expr> d) {
  ExprMatrix m = ExprMatrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (const auto& x : d) m(i, i) = x, ++i;
  return m;
}

bool holds(const std::vector<Residual>& r) { return evaluate(r, {ParamCase{}}).passed; }

}  // namespace

TEST_CASE("sign cases") {
  Workspace ws;
  const Symbol lam = ws.declare("lam", SymbolKind::parameter);
  const Symbol mu = ws.declare("mu", SymbolKind::parameter);
  CHECK(sign_cases({}).size() == 1);
  CHECK(sign_cases({lam, mu}).size() == 4);
  // lam^2 agrees with 1 on every case
  CHECK(reduce_sign_cases(parse("lam^2*mu + mu^3", ws), {lam, mu}) == parse("2*mu", ws));
  CHECK(reduce_sign_cases(parse("1/lam", ws), {lam, mu}) == parse("lam", ws));
}

TEST_CASE("metric symmetry") {
  Workspace ws;
  JetSpace jet(ws, 2);
  ExprMatrix V(2, 2);
  V << parse("u2", ws), parse("u1", ws), parse("u1", ws), Expr(0);
  CHECK(holds(check_symmetry_upper(ExprMatrix::Identity(2, 2), V)));
  CHECK(holds(check_symmetry_gV(ExprMatrix::Identity(2, 2), V)));
  ExprMatrix W(2, 2);
  W << Expr(0), Expr(1), Expr(0), Expr(0);
  const auto bad = check_symmetry_upper(ExprMatrix::Identity(2, 2), W);
  const Report r = evaluate(bad, {ParamCase{}});
  CHECK_FALSE(r.passed);
  REQUIRE(r.failures.size() == 1);
  CHECK(r.failures[0].condition == "metric-symmetry");
  CHECK(r.failures[0].indices == std::vector<int>{1, 2});
}

TEST_CASE("conformal factor for a diagonal system") {
  Workspace ws;
  JetSpace jet(ws, 2);
  const auto& u = jet.fields();
  // V = diag(u2, u1) is diagonalizable with flat g = diag(1, 1) only up to a
  // factor; the flatness equations then fix f = const
  const ExprMatrix V = diagonal({Expr(2) * Expr(u[0]), Expr(3) * Expr(u[1])});
  const ConformalFactor cf = solve_conformal_factor(jet, ExprMatrix::Identity(2, 2), V);
  CHECK(cf.f.symbols().empty());
  for (const auto& p : cf.log_gradient) CHECK(p.is_zero());
  CHECK(holds(check_flat_velocity(cf.g, V, u)));
}

TEST_CASE("curvature constants") {
  Workspace ws;
  JetSpace jet(ws, 2);
  const auto& u = jet.fields();
  const ExprMatrix V = diagonal({Expr(u[0]), Expr(u[1])});
  const auto flat = solve_curvature_constants(jet, Metric::from_lower(ExprMatrix::Identity(2, 2)), V, {});
  CHECK(flat.alpha.is_zero());
  CHECK(flat.beta.is_zero());
  CHECK(flat.gamma.is_zero());

  // unit sphere with V = id: gamma = 1, and kappa g has gamma = 1/kappa
  const Expr conf = parse("4/(1+u1^2+u2^2)^2", ws);
  const Metric sphere = Metric::from_lower(diagonal({conf, conf}));
  const ExprMatrix I = ExprMatrix::Identity(2, 2);
  CHECK(holds(curvature_residuals(sphere, I, u, Expr(0), Expr(0), Expr(1))));
  const Metric scaled = Metric::from_lower(diagonal({Expr(3) * conf, Expr(3) * conf}));
  CHECK(holds(curvature_residuals(scaled, I, u, Expr(0), Expr(0), parse("1/3", ws))));
  CHECK_FALSE(holds(curvature_residuals(scaled, I, u, Expr(0), Expr(0), Expr(1))));
}

TEST_CASE("Monge ansatz") {
  Workspace ws;
  JetSpace jet(ws, 2);
  CHECK(monge_ansatz(jet).dimension() == 6);
  Workspace ws1;
  JetSpace jet1(ws1, 1);
  CHECK(monge_ansatz(jet1).dimension() == 1);
}

TEST_CASE("third order Hamiltonian check") {
  Workspace ws;
  JetSpace jet(ws, 3);
  const auto& u = jet.fields();
  ExprMatrix h(3, 3);
  h << Expr(1), Expr(2), Expr(0), Expr(2), Expr(1), Expr(0), Expr(0), Expr(0), Expr(7);
  CHECK(check_third_order_hamiltonian(Metric::from_lower(h), u, {ParamCase{}}).passed);

  const Report bad = check_third_order_hamiltonian(
      Metric::from_lower(diagonal({Expr(1), Expr(1), pow(Expr(u[0]), 4)})), u, {ParamCase{}});
  CHECK_FALSE(bad.passed);
  REQUIRE_FALSE(bad.failures.empty());
  CHECK(bad.failures[0].condition == "monge");
}

TEST_CASE("compatibility identities") {
  Workspace ws;
  JetSpace jet(ws, 10, 2);
  const auto ids = compatibility_identities(ExprMatrix::Zero(10, 10), ExprMatrix::Zero(10, 10), jet.fields());
  CHECK(ids.size() == 2100);

  Workspace ws3;
  JetSpace jet3(ws3, 3);
  const auto& u = jet3.fields();
  ExprMatrix V = ExprMatrix::Zero(3, 3);
  V(0, 1) = Expr(1);
  V(1, 2) = Expr(1);
  V(2, 0) = -Expr(u[2]);
  V(2, 1) = Expr(2) * Expr(u[1]);
  V(2, 2) = -Expr(u[0]);
  const MongeAnsatz ansatz = monge_ansatz(jet3);
  const CompatibilitySystem full = assemble_compatibility_system(ansatz, V, u);
  CHECK(restrict_compatibility_system(full, 1, ansatz.unknowns, u).system.rows.empty());
  CHECK_FALSE(restrict_compatibility_system(full, 2, ansatz.unknowns, u).system.rows.empty());
}
