#include "doctest.h"

#include <random>

#include "hamforge/expr.hpp"

using namespace hamforge;

namespace {

Workspace make_ws() {
  Workspace ws;
  for (auto n : {"u1", "u2", "u3"}) ws.declare(n, SymbolKind::field);
  for (auto n : {"lam", "mu"}) ws.declare(n, SymbolKind::parameter);
  return ws;
}

}  // namespace

TEST_CASE("parse canonicalizes") {
  Workspace ws = make_ws();
  CHECK(parse("mu*u2^2 - mu*u1*u3 + lam*u3^2 - 1", ws).num().size() == 4);
  CHECK(parse("0/(u1+1)", ws).is_zero());
  CHECK(parse("(u1^2-1)/(u1-1)", ws) == parse("u1+1", ws));
  CHECK(parse("2^3^2", ws) == Expr(512));
  CHECK(parse("-u1^2", ws) == -parse("u1*u1", ws));
}

TEST_CASE("parse errors carry positions") {
  Workspace ws = make_ws();
  try {
    parse("u1 + * u2", ws);
    FAIL("no throw");
  } catch (const ParseError& e) {
    CHECK(e.position() == 5);
  }
  CHECK_THROWS_AS(parse("u1/(u2-u2)", ws), ParseError);
  CHECK_THROWS_AS(parse("zz + 1", ws), ParseError);
  CHECK_THROWS_AS(parse("u1^u2", ws), ParseError);
  ws.auto_declare = true;
  CHECK_NOTHROW(parse("zz + 1", ws));
}

TEST_CASE("arithmetic") {
  Workspace ws = make_ws();
  Expr x = parse("u1/u2", ws);
  CHECK((x + (-x)).is_zero());
  CHECK(parse("(u1+u2)*(u1-u2)", ws) == parse("u1^2-u2^2", ws));
  CHECK(pow(parse("u2", ws), -2) * pow(parse("u2", ws), 3) == parse("u2", ws));
  CHECK_THROWS_AS(x / Expr(0), MathError);
}

TEST_CASE("differentiate and substitute") {
  Workspace ws = make_ws();
  const Symbol u1 = ws.at("u1"), u2 = ws.at("u2"), lam = ws.at("lam"), mu = ws.at("mu");
  CHECK(diff(parse("u1^2*u3", ws), u1) == parse("2*u1*u3", ws));
  CHECK(diff(parse("1/u2", ws), u2) == parse("-1/u2^2", ws));
  CHECK(diff(parse("u2^2+mu", ws), u1).is_zero());
  CHECK(substitute(parse("lam*mu-1", ws), std::map<Symbol, mpq_class>{{lam, 1}, {mu, 1}}).is_zero());
  CHECK(substitute(parse("u1/u2", ws), std::map<Symbol, Expr>{{u1, Expr(u2)}}) == Expr(1));
  Expr e = parse("u1/u2+lam", ws);
  CHECK(substitute(e, std::map<Symbol, Expr>{}) == e);
  // simultaneous, not sequential
  CHECK(substitute(parse("u1-u2", ws), std::map<Symbol, Expr>{{u1, Expr(u2)}, {u2, Expr(u1)}}) == parse("u2-u1", ws));
}

TEST_CASE("factor") {
  Workspace ws = make_ws();
  auto f = factor(parse("u1^2-u2^2", ws));
  REQUIRE(f.factors.size() == 2);
  CHECK(f.factors[0].second == 1);
  auto g = factor(parse("u2^4", ws));
  REQUIRE(g.factors.size() == 1);
  CHECK(g.factors[0].second == 4);

  Expr a = parse("u1^2 + 3*u2*u3 - lam", ws), b = parse("u2^2 - 2*u1*u3 + mu*u1 + 1", ws);
  auto h = factor(a * b * b);
  REQUIRE(h.factors.size() == 2);
  Expr back(h.unit);
  for (auto& [p, k] : h.factors) back *= pow(Expr(p), k);
  CHECK(back == a * b * b);

  auto u = factor(parse("(x^4 - 10*x^2 + 1)", (ws.auto_declare = true, ws)));
  CHECK(u.factors.size() == 1);
  auto v = factor(parse("(x^2-2)*(x^2-3)*(x+7)^2", ws));
  CHECK(v.factors.size() == 3);
}

TEST_CASE("print round trip") {
  Workspace ws = make_ws();
  for (const char* s : {"u1/u2", "(u1+1)/(u1*u2)", "-3/4*u1^2/u3", "(mu*u2^2 - 1)/(lam*u2)", "7/3", "-u1"}) {
    Expr e = parse(s, ws);
    CHECK(parse(to_string(e, ws), ws) == e);
  }
}
