#include "doctest.h"

#include "hamforge/jet.hpp"

using namespace hamforge;

namespace {

struct Fixture {
  Workspace ws;
  JetSpace jet{ws, 3};
  Symbol lam = ws.declare("lam", SymbolKind::parameter);
  Symbol mu = ws.declare("mu", SymbolKind::parameter);
  Expr e(const char* s) { return parse(s, ws); }
};

}  // namespace

TEST_CASE("jet variables") {
  Fixture f;
  CHECK(f.jet.u(0, 0) == f.jet.fields()[0]);
  CHECK(f.ws.name(f.jet.u(1, 1)) == "u2_x");
  CHECK(f.ws.name(f.jet.u(2, 3)) == "u3_x3");
  CHECK(f.jet.order(f.e("u1*u2_x2 + u3_x")) == 2);
  CHECK_THROWS_AS(f.jet.u(3, 0), InvalidInput);
}

TEST_CASE("total derivative") {
  Fixture f;
  CHECK(f.jet.total_derivative(f.e("u2^2")) == f.e("2*u2*u2_x"));
  CHECK(f.jet.total_derivative(f.e("lam*mu + 3")).is_zero());
  const Expr flux = f.e("(mu*(u2^2 - u1*u3) + lam*u3^2 - 1)/(lam*u2)");
  Expr expected;
  for (int i = 0; i < 3; ++i) expected += diff(flux, f.jet.u(i)) * Expr(f.jet.u(i, 1));
  CHECK(f.jet.total_derivative(flux) == expected);
  // D_x commutes with parameter derivatives
  CHECK(diff(f.jet.total_derivative(flux), f.lam) == f.jet.total_derivative(diff(flux, f.lam)));
  CHECK(f.jet.total_derivative(f.e("u1_x"), 3) == f.e("u1_x4"));
}

TEST_CASE("order overflow") {
  Workspace ws;
  JetSpace jet(ws, 1, 2);
  CHECK_THROWS_AS(jet.total_derivative(parse("u1_x2", ws)), OrderOverflow);
}

TEST_CASE("variational derivative") {
  Workspace ws;
  JetSpace jet(ws, 1);
  CHECK(variational_derivative(jet, parse("u1_x^2/2", ws), 0) == parse("-u1_x2", ws));
  CHECK(variational_derivative(jet, parse("u1^3", ws), 0) == parse("3*u1^2", ws));
  CHECK(variational_derivative(jet, jet.total_derivative(parse("u1*u1_x^2 + u1^5", ws)), 0).is_zero());
}

TEST_CASE("linearization") {
  Fixture f;
  const std::vector<Expr> F{f.e("u2_x"), f.e("u3_x"), f.jet.total_derivative(f.e("u2^2 - u1*u3"))};
  const DiffOperator l = linearize(f.jet, F);
  CHECK(l.coefficient(2, 0, 1) == f.e("-u3"));
  CHECK(l.coefficient(2, 0, 0) == f.e("-u3_x"));
  CHECK(l.coefficient(0, 1, 1) == Expr(1));
  CHECK(linearize(f.jet, {Expr(1), f.e("lam"), Expr(0)}).is_zero());

  // l_F(u_x) = D_x F for fluxes without explicit x
  const std::vector<Expr> G{f.e("u2"), f.e("u3"), f.e("(mu*(u2^2 - u1*u3) + lam*u3^2 - 1)/(lam*u2)")};
  const std::vector<Expr> ux{Expr(f.jet.u(0, 1)), Expr(f.jet.u(1, 1)), Expr(f.jet.u(2, 1))};
  const auto lhs = apply(f.jet, linearize(f.jet, G), ux);
  for (int i = 0; i < 3; ++i) CHECK(lhs[i] == f.jet.total_derivative(G[i]));
}
