#include "doctest.h"

#include "hamforge/geometry.hpp"

using namespace hamforge;

namespace {

ExprMatrix matrix(Workspace& ws, std::initializer_list<std::initializer_list<const char*>> rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  ExprMatrix m(n, n);
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (const char* s : r) m(i, j++) = parse(s, ws);
    ++i;
  }
  return m;
}

}  // namespace

TEST_CASE("velocity matrix") {
  Workspace ws;
  JetSpace jet(ws, 3);
  const ExprMatrix V = velocity_matrix(jet, {parse("u2", ws), parse("u3", ws), parse("u2^2 - u1*u3", ws)});
  CHECK((V == matrix(ws, {{"0", "1", "0"}, {"0", "0", "1"}, {"-u3", "2*u2", "-u1"}})));
  CHECK((velocity_matrix(jet, {parse("u1", ws), parse("u2", ws), parse("u3", ws)}) == ExprMatrix::Identity(3, 3)));
  CHECK_THROWS_AS(velocity_matrix(jet, {parse("u1_x", ws), parse("u2", ws), parse("u3", ws)}), InvalidInput);
}

TEST_CASE("Nijenhuis and Haantjes tensors") {
  Workspace ws;
  JetSpace jet(ws, 3);
  const auto& u = jet.fields();
  const ExprMatrix C = matrix(ws, {{"1", "2", "0"}, {"0", "3", "1"}, {"5", "0", "0"}});
  CHECK(nijenhuis_tensor(C, u).is_zero());
  CHECK(haantjes_tensor(C, nijenhuis_tensor(C, u)).is_zero());
  CHECK(nijenhuis_tensor(matrix(ws, {{"u1", "0", "0"}, {"0", "u2", "0"}, {"0", "0", "u3"}}), u).is_zero());

  ws.declare("lam", SymbolKind::parameter);
  ws.declare("mu", SymbolKind::parameter);
  const ExprMatrix V = velocity_matrix(jet, {parse("u2", ws), parse("u3", ws), parse("(mu*(u2^2-u1*u3)+lam*u3^2-1)/(lam*u2)", ws)});
  const Tensor3 H = haantjes_tensor(V, nijenhuis_tensor(V, u));
  CHECK_FALSE(H.is_zero());
  const ExprMatrix Hc = haantjes_square_contraction(H);
  CHECK((Hc == Hc.transpose()));
  const ExprMatrix HV = Hc * V;
  CHECK((HV == HV.transpose()));
}

TEST_CASE("Christoffel symbols") {
  Workspace ws;
  JetSpace jet(ws, 3);
  const auto& u = jet.fields();
  const Tensor3 flat = christoffel(Metric::from_lower(ExprMatrix::Identity(3, 3)), u);
  CHECK(flat.is_zero());
  const Metric g = Metric::from_lower(matrix(ws, {{"u1", "0", "0"}, {"0", "1", "0"}, {"0", "0", "1"}}));
  const Tensor3 G = christoffel(g, u);
  CHECK(G(0, 0, 0) == parse("1/(2*u1)", ws));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        if (i || j || k) CHECK(G(i, j, k).is_zero());
  const Metric back = Metric::from_upper(g.upper);
  CHECK((back.lower == g.lower));
}

TEST_CASE("curvature") {
  Workspace ws;
  JetSpace jet(ws, 2);
  const auto& u = jet.fields();
  // polar coordinates: flat
  const Metric polar = Metric::from_lower(matrix(ws, {{"1", "0"}, {"0", "u1^2"}}));
  CHECK(riemann_curvature(polar, christoffel(polar, u), u).is_zero());
  // stereographic unit sphere: R^{ij}_{kl} = delta^i_k delta^j_l - delta^i_l delta^j_k
  const Metric sphere = Metric::from_lower(matrix(ws, {{"4/(1+u1^2+u2^2)^2", "0"}, {"0", "4/(1+u1^2+u2^2)^2"}}));
  const Tensor4 R = riemann_curvature(sphere, christoffel(sphere, u), u);
  CHECK(R(0, 1, 0, 1) == Expr(1));
  CHECK(R(0, 1, 1, 0) == Expr(-1));
  CHECK(R(0, 0, 0, 1).is_zero());
}

TEST_CASE("covariant derivative of a (1,1) tensor") {
  Workspace ws;
  JetSpace jet(ws, 2);
  const auto& u = jet.fields();
  const Tensor3 G = christoffel(Metric::from_lower(ExprMatrix::Identity(2, 2)), u);
  const ExprMatrix V = matrix(ws, {{"u1", "u2"}, {"0", "u1*u2"}});
  const Tensor3 D = covariant_derivative_11(G, V, u);
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) CHECK(D(k, i, j) == diff(V(i, j), u[k]));
}
