#include "doctest.h"

#include "hamforge/session.hpp"

using namespace hamforge;

namespace {

ParseError parse_error(std::string_view text, const JetSpace& jet) {
  try {
    parse_system(text, jet);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("no ParseError");
  return ParseError("", 0);
}

}  // namespace

TEST_CASE("eta parsing") {
  Workspace ws;
  const EtaSpec e = parse_eta("eta4", ws);
  CHECK(e.N() == 3);
  CHECK(e.params.size() == 2);
  CHECK(e.text == "1,0,0;0,lam,0;0,0,mu");
  CHECK((e.inverse * e.eta == ExprMatrix::Identity(3, 3)));
  CHECK(parse_eta(" 0, 0 ,1; 0,1,0;1,0,0 ", ws).text == parse_eta("antidiagonal", ws).text);
  CHECK_THROWS_AS(parse_eta("1,2;3,4", ws), InvalidInput);
  CHECK_THROWS_AS(parse_eta("1,0;0,0", ws), MathError);
  CHECK_THROWS_AS(parse_eta("1,0;0", ws), ParseError);
  // degenerate for lam = -1 only
  CHECK_THROWS_AS(parse_eta("1,1;1,lam", ws), MathError);
}

TEST_CASE("associativity system for the antidiagonal metric") {
  Workspace ws;
  JetSpace jet(ws, 3);
  const WdvvN3 w = generate_wdvv_n3(jet, parse_eta("antidiagonal", ws));
  CHECK(w.system.fluxes[0] == parse("u2", ws));
  CHECK(w.system.fluxes[1] == parse("u3", ws));
  CHECK(w.system.fluxes[2] == parse("u2^2 - u1*u3", ws));
  const Expr expected = parse("fttt - u2^2 + u1*u3", ws);
  CHECK((w.equation == expected || w.equation == -expected));
}

TEST_CASE("associativity system with sign parameters") {
  Workspace ws;
  const EtaSpec eta = parse_eta("eta4", ws);
  JetSpace jet(ws, 3);
  const WdvvN3 w = generate_wdvv_n3(jet, eta);
  // f_ttt solves lam u2 f_ttt = lam u3^2 - mu u1 u3 + mu u2^2 - 1
  const Expr eq = parse("lam*u2*fttt - lam*u3^2 + mu*u1*u3 - mu*u2^2 + 1", ws);
  CHECK(substitute(eq, std::map<Symbol, Expr>{{w.fttt, w.system.fluxes[2]}}).is_zero());
  CHECK(w.system.provenance == "generated-n3 " + eta.text);

  const std::string file =
      "# same system, written by hand\n"
      "fields 3\n"
      "flux 1 = u2\n"
      "flux 3 = (mu*(u2^2 - u1*u3) + lam*u3^2 - 1)/(lam*u2)\n"
      "flux 2 = u3\n";
  CHECK(system_file_parameters(file) == std::vector<std::string>{"mu", "lam"});
  const HydroSystem read = parse_system(file, jet);
  CHECK(same_system(read, w.system, eta.params));
  CHECK(same_system(parse_system(format_system(read, ws), jet), read, {}));

  HydroSystem other = read;
  other.fluxes[2] = other.fluxes[2] + parse("lam - 1", ws);
  CHECK_FALSE(same_system(other, w.system, eta.params));
}

TEST_CASE("system file errors") {
  Workspace ws;
  JetSpace jet(ws, 2);
  CHECK_THROWS_AS(parse_system("", jet), ParseError);
  CHECK_THROWS_AS(parse_system("# nothing\n", jet), ParseError);
  CHECK_THROWS_AS(parse_system("fields 3\n", jet), InvalidInput);
  CHECK_THROWS_AS(parse_system("fields 2\nflux 1 = u2\nflux 2 = u1_x\n", jet), InvalidInput);
  CHECK(parse_error("fields 2\nflux 1 = u2\n", jet).position() == 0);
  CHECK(parse_error("fields 2\nflux 3 = u2\n", jet).position() == 9);
  CHECK(parse_error("fields 2\nflux 1 = u2\nflux 1 = u1\n", jet).position() == 21);
  const std::string bad = "fields 2\nflux 1 = u2\nflux 2 = u1 +* 3\n";
  const auto pos = parse_error(bad, jet).position();
  CHECK(pos > bad.find("u1 +"));
  CHECK(pos < bad.size());
}

TEST_CASE("session round trip") {
  Session s;
  s.init(3, {"lam", "mu"});
  const EtaSpec eta = parse_eta("eta4", s.workspace());
  s.system = generate_wdvv_n3(s.jet(), eta).system;
  ExprMatrix h(3, 3);
  h << parse("u2^2 + mu", s.workspace()), parse("-u1*u2", s.workspace()), parse("lam", s.workspace()),
      parse("-u1*u2", s.workspace()), parse("u1^2", s.workspace()), Expr(0), parse("lam", s.workspace()), Expr(0),
      Expr(1);
  s.third_order = h;
  s.third_order_dimension = 1;
  s.operators.emplace("B", make_third_order(s.jet(), Metric::from_lower(substitute(h, ParamCase{}))));
  s.verdicts["schouten [B,B]"] = "zero";
  const std::string text = s.save();
  const Session back = Session::load(text);
  CHECK(back.save() == text);
  CHECK(back.params().size() == 2);
  CHECK(back.cases().size() == 4);
  REQUIRE(back.third_order.has_value());
  CHECK((*back.third_order == h));

  s.fix_case("lam=1, mu=-1");
  CHECK(s.cases().size() == 1);
  CHECK(s.free_params().empty());
  CHECK(Session::load(s.save()).cases().size() == 1);
  CHECK_THROWS(s.fix_case("nu=1"));
  CHECK_THROWS(Session::load("not a session"));
}
