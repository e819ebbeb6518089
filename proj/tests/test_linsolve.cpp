#include "doctest.h"

#include <random>

#include "hamforge/linsolve.hpp"

using namespace hamforge;

namespace {

struct Fixture {
  Workspace ws;
  Symbol u1 = ws.declare("u1", SymbolKind::field);
  Symbol u2 = ws.declare("u2", SymbolKind::field);
  Symbol c1 = ws.declare("c1", SymbolKind::unknown);
  Symbol c2 = ws.declare("c2", SymbolKind::unknown);
  Symbol c3 = ws.declare("c3", SymbolKind::unknown);
  Expr e(const char* s) { return parse(s, ws); }
};

LinRow<mpq_class> row(std::vector<std::pair<int, mpq_class>> entries, mpq_class rhs) {
  return {std::move(entries), std::move(rhs)};
}

}  // namespace

TEST_CASE("coefficient collection") {
  Fixture f;
  const auto sys = collect_coefficients<mpq_class>({f.e("(c1 - 2) + (c1 + c2)*u1")}, {f.c1, f.c2}, {f.u1, f.u2});
  REQUIRE(sys.rows.size() == 2);
  const auto s = solve(sys);
  CHECK(s.consistent);
  CHECK(s.dimension() == 0);
  CHECK(s.pivots.at(0).rhs == 2);
  CHECK(s.pivots.at(1).rhs == -2);
  // denominators free of the unknowns are cleared
  const auto sys2 = collect_coefficients<mpq_class>({f.e("(c1*u1 + c3)/(u1 + u2^2)")}, {f.c1, f.c2, f.c3}, {f.u1, f.u2});
  CHECK(solve(sys2).dimension() == 1);
  CHECK_THROWS_AS(collect_coefficients<mpq_class>({f.e("c1*c2")}, {f.c1, f.c2}, {f.u1}), InvalidInput);
}

TEST_CASE("coefficients over the parameter field") {
  Fixture f;
  const Symbol lam = f.ws.declare("lam", SymbolKind::parameter);
  const auto sys = collect_coefficients<Expr>({f.e("lam*c1 - 1 + (c2 - c1)*u2")}, {f.c1, f.c2}, {f.u1, f.u2});
  const auto s = solve(sys);
  CHECK(s.dimension() == 0);
  CHECK(s.pivots.at(1).rhs == Expr(1) / Expr(lam));
}

TEST_CASE("inconsistent systems carry a witness row") {
  LinSystem<mpq_class> sys;
  sys.unknowns = {Symbol{0}, Symbol{1}};
  sys.add_row(row({{0, 1}, {1, 1}}, 1));
  sys.add_row(row({{0, 2}}, 4));
  sys.add_row(row({{0, 1}, {1, 1}}, 3));
  const auto s = solve(sys);
  CHECK_FALSE(s.consistent);
  REQUIRE(s.witness_row.has_value());
  CHECK(*s.witness_row == 2);
  const auto b = solve_batched<mpq_class>(sys, 2, {});
  CHECK_FALSE(b.verified);
  CHECK(b.failed_batch == std::optional<std::size_t>(1));
}

TEST_CASE("deduplication keeps the solution space") {
  LinSystem<mpq_class> sys;
  sys.unknowns = {Symbol{0}, Symbol{1}, Symbol{2}};
  sys.add_row(row({{0, 1}, {2, -1}}, 0));
  sys.add_row(row({{0, 3}, {2, -3}}, 0));
  sys.add_row(row({}, 0));
  sys.add_row(row({{1, 2}}, 6));
  const auto d = deduplicate(sys);
  CHECK(d.rows.size() == 2);
  CHECK(solve(d) == solve(sys));
}

TEST_CASE("batched solve matches the direct solve") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> coef(-4, 4), col(0, 11);
  for (int trial = 0; trial < 20; ++trial) {
    LinSystem<mpq_class> sys;
    for (int c = 0; c < 12; ++c) sys.unknowns.push_back(Symbol{static_cast<std::uint32_t>(c)});
    for (int r = 0; r < 30; ++r) {
      std::map<int, mpq_class> entries;
      for (int k = 0; k < 3; ++k)
        if (int v = coef(rng)) entries[col(rng)] = v;
      sys.add_row(row({entries.begin(), entries.end()}, 0));
    }
    const auto direct = solve(sys);
    std::size_t checkpoints = 0;
    const auto batched = solve_batched<mpq_class>(
        sys, 5, [&](const SolutionSpace<mpq_class>& s) { return satisfies(s, sys); },
        [&](const Checkpoint<mpq_class>&) { ++checkpoints; });
    CHECK(batched.verified);
    CHECK(batched.space == direct);
    CHECK(checkpoints == 6);
  }
}
