#include "doctest.h"

#include "hamforge/operators.hpp"

using namespace hamforge;

TEST_CASE("first order operator from a flat metric") {
  Workspace ws;
  JetSpace jet(ws, 3);
  ExprMatrix V = ExprMatrix::Zero(3, 3);
  for (int i = 0; i < 3; ++i) V(i, i) = Expr(jet.u(i));
  const auto A = make_ferapontov(jet, Metric::from_upper(ExprMatrix::Identity(3, 3)), V, Expr(0), Expr(2), Expr(1));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      CHECK(A.local.coefficient(i, j, 1) == Expr(i == j ? 1 : 0));
      CHECK(A.local.coefficient(i, j, 0).is_zero());
    }
  REQUIRE(A.tails.size() == 2);
  CHECK(A.tails[0][1] == Expr(jet.u(1)) * Expr(jet.u(1, 1)));
  CHECK(A.tails[1][2] == Expr(jet.u(2, 1)));
  // coupling rows and columns follow the tails: (w1, w2)
  CHECK(A.coupling(0, 0).is_zero());
  CHECK(A.coupling(0, 1) == Expr(2));
  CHECK(A.coupling(1, 0) == Expr(2));
  CHECK(A.coupling(1, 1) == Expr(1));
}

TEST_CASE("first order local part is skew-adjoint") {
  Workspace ws;
  JetSpace jet(ws, 2);
  ExprMatrix g(2, 2);
  g << parse("u1^2 + 1", ws), parse("u2", ws), parse("u2", ws), parse("3", ws);
  const auto A = make_ferapontov(jet, Metric::from_lower(g), ExprMatrix::Zero(2, 2), Expr(0), Expr(0), Expr(0));
  CHECK(skew_defect(jet, A.local).is_zero());

  DiffOperator mult(1);
  Workspace ws1;
  JetSpace jet1(ws1, 1);
  mult.coeff[0][0] = {Expr(jet1.u(0))};
  const DiffOperator d = skew_defect(jet1, mult);
  CHECK(d.coefficient(0, 0, 0) == Expr(2) * Expr(jet1.u(0)));
}

TEST_CASE("third order operator") {
  Workspace ws;
  JetSpace jet(ws, 2);
  ExprMatrix h(2, 2);
  h << Expr(1), Expr(2), Expr(2), Expr(5);
  const Metric hm = Metric::from_lower(h);
  const auto B = make_third_order(jet, hm);
  CHECK(B.is_local());
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      CHECK(B.local.coefficient(i, j, 3) == hm.upper(i, j));
      for (int k = 0; k < 3; ++k) CHECK(B.local.coefficient(i, j, k).is_zero());
    }

  // a Monge metric: leading term h^{ij} and no order zero part
  ExprMatrix hp(2, 2);
  hp << parse("1 + u2^2", ws), parse("-u1*u2", ws), parse("-u1*u2", ws), parse("1 + u1^2", ws);
  const Metric hpm = Metric::from_lower(hp);
  const auto Bp = make_third_order(jet, hpm);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      CHECK(Bp.local.coefficient(i, j, 3) == hpm.upper(i, j));
      CHECK(Bp.local.coefficient(i, j, 0).is_zero());
    }
  CHECK(skew_defect(jet, Bp.local).is_zero());

  // diag(1, u1^2) is not Monge and the resulting operator is not skew
  ExprMatrix hq(2, 2);
  hq << Expr(1), Expr(0), Expr(0), parse("u1^2", ws);
  CHECK_FALSE(skew_defect(jet, make_third_order(jet, Metric::from_lower(hq)).local).is_zero());
}

TEST_CASE("c tensors") {
  Workspace ws;
  JetSpace jet(ws, 2);
  const auto& u = jet.fields();
  ExprMatrix h(2, 2);
  h << parse("u2^2", ws), parse("-u1*u2", ws), parse("-u1*u2", ws), parse("u1^2", ws);
  const Tensor3 c = third_order_c_lower(h, u);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      CHECK(c(i, j, j).is_zero());
      CHECK(c(i, 0, 1) == -c(i, 1, 0));
    }
  CHECK(c(0, 0, 1) == parse("(-u2 - 2*u2)/3", ws));
}

TEST_CASE("operator applied to a covector") {
  Workspace ws;
  JetSpace jet(ws, 2);
  jet.declare_covector(1);
  ExprMatrix V = ExprMatrix::Zero(2, 2);
  const auto A = make_ferapontov(jet, Metric::from_upper(ExprMatrix::Identity(2, 2)), V, Expr(0), Expr(0), Expr(1));
  NonlocalRegistry reg(jet);
  reg.register_operator(A, 1);
  const Symbol phi = reg.at("A", 1, 1);
  CHECK(jet.total_derivative(Expr(phi)) == Expr(jet.u(0, 1)) * Expr(jet.psi(1, 0)) + Expr(jet.u(1, 1)) * Expr(jet.psi(1, 1)));
  const auto out = apply(jet, A, 1, reg);
  for (int i = 0; i < 2; ++i) CHECK(out[i] == Expr(jet.psi(1, i, 1)) + Expr(jet.u(i, 1)) * Expr(phi));
}
