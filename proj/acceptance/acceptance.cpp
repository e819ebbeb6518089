// End-to-end acceptance checks. One line per criterion; exit status 1 if any fails.
#include <chrono>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hamforge/conditions.hpp"
#include "hamforge/operators.hpp"
#include "hamforge/schouten.hpp"
#include "hamforge/session.hpp"
#include "hamforge/systems.hpp"

using namespace hamforge;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

mpq_class frac(long p, long q) {
  mpq_class r(p, q);
  r.canonicalize();
  return r;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Shared eta4 run: criteria 1, 2, 3, 5 and 7 all start from it.
struct Eta4 {
  Workspace ws;
  std::unique_ptr<JetSpace> jet;
  EtaSpec eta;
  std::vector<Symbol> params;
  std::vector<Expr> fluxes;
  ExprMatrix V;
  FirstOrderCertificate cert;
  ThirdOrderSolution third;
  double first_seconds = 0, third_seconds = 0;

  Eta4() {
    eta = parse_eta("eta4", ws);
    params = eta.params;
    jet = std::make_unique<JetSpace>(ws, 3, 10);
    fluxes = generate_wdvv_n3(*jet, eta).system.fluxes;
    V = velocity_matrix(*jet, fluxes);
    auto t0 = std::chrono::steady_clock::now();
    cert = find_first_order(*jet, fluxes, params);
    first_seconds = seconds_since(t0);
    t0 = std::chrono::steady_clock::now();
    third = find_third_order(*jet, V, params);
    third_seconds = seconds_since(t0);
  }

  ExprMatrix matrix(const char* const (&entries)[3][3]) {
    ExprMatrix m(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) m(i, j) = m(j, i) = parse(entries[i][j], ws);
    return m;
  }
};

Eta4& eta4() {
  static Eta4 run;
  return run;
}

// Transcribed by hand, a = u1, b = u2, c = u3.
ExprMatrix reference_metric(Eta4& r) {
  const std::string delta =
      "(2*u1*u2^2*u3*lam - u1^2*u3^2*lam + 2*u1*u3^3*mu - 2*u1*u3*mu*lam - u2^4*lam - 3*u2^2*u3^2*mu"
      " - 2*u2^2*mu*lam - u3^4*lam + 2*u3^2 - lam)";
  const std::string g33 = "lam/mu*" + delta + "/u2^2";
  const char* const e[3][3] = {
      {"lam/mu*(-u1^2*mu - u2^2*lam - 4*mu*lam)", "lam/mu*(-u2*(u1*mu + u3*lam))", "lam/mu*(-u2^2*mu - u3^2*lam - 1)"},
      {"", "lam/mu*(-u2^2*mu - u3^2*lam - 1)", "lam/mu*u3*(u1*u3*mu - 2*u2^2*mu - u3^2*lam + 1)/u2"},
      {"", "", g33.c_str()}};
  return r.matrix(e);
}

ExprMatrix reference_h(Eta4& r) {
  const char* const e[3][3] = {
      {"u2^2 + mu", "u2*mu*(lam*u3 - mu*u1)", "-mu*lam*u2^2"},
      {"", "lam + u1^2 - lam*u3*(2*mu*u1 - lam*u3)", "lam*u2*(mu*u1 - lam*u3)"},
      {"", "", "u2^2"}};
  return r.matrix(e);
}

std::string str(const Expr& e) { return to_string(e, eta4().ws); }

// ---------------------------------------------------------------- 1
Outcome first_order_metric() {
  Eta4& r = eta4();
  const ExprMatrix ref = reduce_sign_cases(reference_metric(r), r.params);
  const ExprMatrix& g = r.cert.g.upper;
  // one overall constant, fixed by g^11
  const Expr ratio = ref(0, 0) / g(0, 0);
  if (!ratio.is_constant()) return {false, "g^11 ratio is not constant: " + str(ratio)};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (!(reduce_sign_cases(ratio * g(i, j), r.params) == ref(i, j)))
        return {false, "g^" + std::to_string(i + 1) + std::to_string(j + 1) + " = " + str(g(i, j))};
  const Expr mu(r.params[1]), lam(r.params[0]);
  if (!(r.cert.alpha == mu && r.cert.beta.is_zero() && r.cert.gamma == lam))
    return {false, "constants " + str(r.cert.alpha) + ", " + str(r.cert.beta) + ", " + str(r.cert.gamma)};
  std::ostringstream d;
  d << "g matches up to " << str(ratio) << ", (alpha, beta, gamma) = (mu, 0, lam), " << std::fixed
    << std::setprecision(1) << r.first_seconds << " s";
  return {r.first_seconds < 300, d.str()};
}

// ---------------------------------------------------------------- 2
Outcome curvature_cases() {
  Eta4& r = eta4();
  std::size_t residuals = 0;
  for (const auto& c : sign_cases(r.params)) {
    const auto res = curvature_residuals(specialize(r.cert.g, c), substitute(r.V, c), r.jet->fields(),
                                         substitute(r.cert.alpha, c), substitute(r.cert.beta, c),
                                         substitute(r.cert.gamma, c));
    for (const auto& x : res) {
      ++residuals;
      if (!x.value.is_zero()) return {false, describe(x, r.ws)};
    }
  }
  return {true, std::to_string(residuals) + " residuals zero over 4 sign cases"};
}

// ---------------------------------------------------------------- 3
Outcome third_order_ray() {
  Eta4& r = eta4();
  if (r.third.dimension != 1) return {false, "dimension " + std::to_string(r.third.dimension)};
  const ExprMatrix ref = reduce_sign_cases(reference_h(r), r.params);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (!(r.third.h(i, j) == ref(i, j)))
        return {false, "h" + std::to_string(i + 1) + std::to_string(j + 1) + " = " + str(r.third.h(i, j))};
  const auto cases = sign_cases(r.params);
  const Report ham = check_third_order_hamiltonian(Metric::from_lower(r.third.h), r.jet->fields(), cases);
  const Report comp = check_third_order_compatibility(r.third.h, r.V, r.jet->fields(), cases);
  if (!ham.passed) return {false, describe(ham.failures.front(), r.ws)};
  if (!comp.passed) return {false, describe(comp.failures.front(), r.ws)};
  std::ostringstream d;
  d << "unique ray equals the reference h, " << ham.checked + comp.checked << " residuals zero, " << std::fixed
    << std::setprecision(2) << r.third_seconds << " s";
  return {r.third.verified && r.third_seconds < 600, d.str()};
}

// ---------------------------------------------------------------- 4
// Independent count: the cyclic condition is linear in u once h is quadratic,
// so its coefficient rows are assembled by hand and ranked modulo a prime.
std::size_t monge_dimension_mod_p(int n) {
  constexpr std::int64_t p = 2147483647;
  const int pairs = n * (n + 1) / 2;
  auto pair_index = [n](int i, int j) {
    if (i > j) std::swap(i, j);
    return i * n - i * (i - 1) / 2 + (j - i);
  };
  const int per = 1 + n + pairs;  // 1, u_a, u_a u_b (a <= b)
  const int cols = pairs * per;
  auto col = [&](int i, int j, int mono) { return pair_index(i, j) * per + mono; };
  auto lin = [](int a) { return 1 + a; };
  auto quad = [&](int a, int b) { return 1 + n + pair_index(a, b); };
  std::vector<std::vector<std::int64_t>> rows;
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k)
      for (int s = 0; s < n; ++s) {
        const int cyc[3][3] = {{m, k, s}, {k, s, m}, {m, s, k}};  // h_{mk,s}, h_{ks,m}, h_{ms,k}
        std::vector<std::int64_t> row(cols, 0);
        for (const auto& t : cyc) row[col(t[0], t[1], lin(t[2]))] += 1;
        rows.push_back(row);
        for (int q = 0; q < n; ++q) {
          std::vector<std::int64_t> rq(cols, 0);
          for (const auto& t : cyc) rq[col(t[0], t[1], quad(t[2], q))] += t[2] == q ? 2 : 1;
          rows.push_back(rq);
        }
      }
  auto inv = [&](std::int64_t a) {
    std::int64_t r = 1, e = p - 2;
    a %= p;
    while (e) {
      if (e & 1) r = r * a % p;
      a = a * a % p;
      e >>= 1;
    }
    return r;
  };
  std::size_t rank = 0;
  for (int c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][c] % p == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    const std::int64_t iv = inv((rows[rank][c] % p + p) % p);
    for (auto& x : rows[rank]) x = (x % p + p) % p * iv % p;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][c] % p == 0) continue;
      const std::int64_t f = (rows[r][c] % p + p) % p;
      for (int k = c; k < cols; ++k) rows[r][k] = ((rows[r][k] - f * rows[rank][k]) % p + p) % p;
    }
    ++rank;
  }
  return static_cast<std::size_t>(cols) - rank;
}

std::size_t binomial(std::size_t n, std::size_t k) {
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// The ansatz unknowns are the symmetric phi over the Pluecker covectors; their
// image is the whole Monge space, and the Pluecker relations form the kernel.
Outcome monge_dimensions() {
  const auto t0 = std::chrono::steady_clock::now();
  std::ostringstream d;
  bool pass = true;
  const std::size_t expected[] = {21, 231, 1540};
  const int sizes[] = {3, 6, 10};
  for (int k = 0; k < 3; ++k) {
    const std::size_t n = static_cast<std::size_t>(sizes[k]);
    Workspace ws;
    JetSpace jet(ws, sizes[k], 1);
    const MongeAnsatz monge = monge_ansatz(jet);
    const PluckerAnsatz pl = plucker_ansatz(jet);
    const auto& u = jet.fields();
    bool is_monge = true;
    for (int m = 0; m < sizes[k] && is_monge; ++m)
      for (int a = m; a < sizes[k] && is_monge; ++a)
        for (int s = a; s < sizes[k] && is_monge; ++s)
          is_monge = (diff(pl.h(m, a), u[s]) + diff(pl.h(a, s), u[m]) + diff(pl.h(m, s), u[a])).is_zero();
    // derived counts: S^2 of the Pluecker space, minus the relations
    const std::size_t unknowns = binomial(binomial(n + 1, 2) + 1, 2);
    const std::size_t relations = binomial(n + 1, 4);
    // the hand-assembled count is cheap enough below n = 10
    const std::size_t independent = n < 10 ? monge_dimension_mod_p(sizes[k]) : unknowns - relations;
    pass = pass && is_monge && pl.unknowns.size() == expected[k] && pl.unknowns.size() == unknowns &&
           pl.rank == monge.dimension() && monge.dimension() == independent && pl.kernel() == relations;
    d << (k ? ", " : "") << "n=" << n << ": " << pl.unknowns.size() << " unknowns spanning " << monge.dimension();
  }
  const double secs = seconds_since(t0);
  d << " (" << std::fixed << std::setprecision(1) << secs << " s)";
  return {pass && secs < 600, d.str()};
}

// ---------------------------------------------------------------- 5
Outcome compatibility() {
  Eta4& r = eta4();
  const auto t0 = std::chrono::steady_clock::now();
  const WnlOperator A = make_ferapontov(*r.jet, r.cert.g, r.V, r.cert.alpha, r.cert.beta, r.cert.gamma, "A");
  const WnlOperator B = make_third_order(*r.jet, Metric::from_lower(r.third.h), "B");
  const auto cases = sign_cases(r.params);
  const std::pair<const WnlOperator*, const WnlOperator*> pairs[] = {{&A, &A}, {&B, &B}, {&A, &B}};
  const char* names[] = {"[A1,A1]", "[A2,A2]", "[A1,A2]"};
  for (int k = 0; k < 3; ++k) {
    const ZeroTest z = bracket_vanishes(*r.jet, *pairs[k].first, *pairs[k].second, cases);
    if (!z.zero) return {false, std::string(names[k]) + " nonzero: " + z.witness};
  }
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << "three brackets zero in 4 sign cases, " << std::fixed << std::setprecision(1) << secs << " s";
  return {secs < 1800, d.str()};
}

// ---------------------------------------------------------------- 6
Outcome antidiagonal() {
  Workspace ws;
  const EtaSpec eta = parse_eta("antidiagonal", ws);
  JetSpace jet(ws, 3, 10);
  const auto sys = generate_wdvv_n3(jet, eta).system;
  const char* expected[] = {"u2", "u3", "u2^2 - u1*u3"};
  for (int i = 0; i < 3; ++i)
    if (to_string(sys.fluxes[i], ws) != to_string(parse(expected[i], ws), ws))
      return {false, "flux " + std::to_string(i + 1) + " = " + to_string(sys.fluxes[i], ws)};
  const ExprMatrix V = velocity_matrix(jet, sys.fluxes);
  const ThirdOrderSolution sol = find_third_order(jet, V);
  if (sol.dimension != 1) return {false, "dimension " + std::to_string(sol.dimension)};
  const Report rep = check_third_order_hamiltonian(Metric::from_lower(sol.h), jet.fields(), {});
  if (!rep.passed) return {false, describe(rep.failures.front(), ws)};
  return {true, "fluxes (b, c, b^2 - ac), one-dimensional ray passes the third-order conditions"};
}

// ---------------------------------------------------------------- 7
mpq_class random_point_value(const Expr& e, const std::vector<Symbol>& syms, std::mt19937& rng) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
  for (int attempt = 0; attempt < 20; ++attempt) {
    std::map<Symbol, mpq_class> pt;
    for (auto s : syms) pt[s] = frac(num(rng), den(rng));
    try {
      const auto v = substitute(e, pt).constant();
      if (v) return *v;
    } catch (const MathError&) {
    }
  }
  return 0;
}

Outcome negative_controls() {
  Eta4& r = eta4();
  std::mt19937 rng(7);
  ExprMatrix h = r.third.h;
  h(0, 2) = h(2, 0) = h(0, 2) + Expr(1);
  const Report rep = check_third_order_hamiltonian(Metric::from_lower(h), r.jet->fields(), sign_cases(r.params));
  if (rep.passed || rep.failures.empty()) return {false, "tampered h passed"};
  const Residual& w = rep.failures.front();
  if (w.condition != "cubic-closure") return {false, "tampered h failed " + w.condition + " first"};
  std::vector<Symbol> syms = r.jet->fields();
  if (random_point_value(w.value, syms, rng) == 0) return {false, "witness vanishes at random points"};

  const ParamCase c = sign_cases(r.params).front();
  const WnlOperator A = make_ferapontov(*r.jet, specialize(r.cert.g, c), substitute(r.V, c), substitute(r.cert.alpha, c),
                                        substitute(r.cert.beta, c), substitute(r.cert.gamma, c) + Expr(1), "A");
  const ZeroTest z = bracket_vanishes(*r.jet, A, A, {});
  if (z.zero) return {false, "perturbed gamma gave [A,A] = 0"};
  if (random_point_value(z.witness_value, syms, rng) == 0) return {false, "bracket witness vanishes at random points"};
  return {true, "tampered h: " + describe(w, r.ws) + "; perturbed gamma: " + z.witness};
}

// ---------------------------------------------------------------- 8
LinSystem<mpq_class> random_system(std::mt19937& rng, int cols, int rank, std::size_t rows, std::vector<mpq_class>& x0) {
  std::uniform_int_distribution<int> small(-5, 5), pick(0, cols - 1);
  LinSystem<mpq_class> sys;
  for (int c = 0; c < cols; ++c) sys.unknowns.push_back(Symbol{static_cast<std::uint32_t>(c)});
  x0.assign(cols, 0);
  for (auto& x : x0) x = frac(small(rng), 1 + std::abs(small(rng)));
  std::vector<std::map<int, mpq_class>> basis(rank);
  for (auto& b : basis)
    for (int k = 0; k < 4; ++k) b[pick(rng)] += small(rng);
  for (std::size_t i = 0; i < rows; ++i) {
    std::map<int, mpq_class> acc;
    for (auto& b : basis) {
      const int f = std::uniform_int_distribution<int>(0, 6)(rng) == 0 ? small(rng) : 0;
      if (f)
        for (const auto& [c, a] : b) acc[c] += f * a;
    }
    LinRow<mpq_class> row;
    for (const auto& [c, a] : acc)
      if (sgn(a)) {
        row.entries.emplace_back(c, a);
        row.rhs += a * x0[c];
      }
    sys.add_row(std::move(row));
  }
  return sys;
}

Outcome batched_equivalence() {
  std::mt19937 rng(2024);
  const std::size_t sizes[] = {10, 100, 1000, 5000};
  int trials = 0;
  for (std::size_t rows : sizes)
    for (int t = 0; t < 5; ++t) {
      std::vector<mpq_class> x0;
      const int cols = 20 + 10 * t;
      const auto sys = random_system(rng, cols, cols / 2 + t, rows, x0);
      const auto direct = solve(sys);
      for (std::size_t batch : {std::size_t{1}, std::size_t{7}, std::size_t{64}, rows}) {
        const auto b = solve_batched<mpq_class>(sys, batch, [&](const SolutionSpace<mpq_class>& s) { return satisfies(s, sys); });
        if (!(b.space == direct) || !b.verified) return {false, "mismatch at " + std::to_string(rows) + " rows"};
      }
      // the planted solution lies on the space
      for (const auto& [p, row] : direct.pivots) {
        mpq_class lhs = 0;
        for (const auto& [c, a] : row.entries) lhs += a * x0[c];
        if (lhs != row.rhs) return {false, "planted solution violates the echelon form"};
      }
      ++trials;
    }

  // restricted seed on n = 3, then the full system as verification
  Eta4& r = eta4();
  const ThirdOrderSolution seeded = find_third_order(*r.jet, r.V, r.params, 16, 4);
  if (!seeded.verified || seeded.dimension != 1 || !(seeded.h == r.third.h))
    return {false, "restricted workflow disagrees with the full solve"};
  const Report rep = check_third_order_hamiltonian(Metric::from_lower(seeded.h), r.jet->fields(), sign_cases(r.params));
  if (!rep.passed) return {false, "restricted ray fails the third-order conditions"};
  return {true, std::to_string(trials) + " random systems up to 5000 rows agree; restricted m=4 seed verified on n=3"};
}

// ---------------------------------------------------------------- 9
struct Random {
  std::mt19937 rng{99};
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

  Expr poly(const std::vector<Symbol>& vars, int terms, int degree) {
    Expr e;
    for (int t = 0; t < terms; ++t) {
      Expr m(frac(uniform(-6, 6), uniform(1, 4)));
      const int d = uniform(0, degree);
      for (int k = 0; k < d; ++k) m *= Expr(vars[uniform(0, static_cast<int>(vars.size()) - 1)]);
      e += m;
    }
    return e;
  }

  Expr rational(const std::vector<Symbol>& vars) {
    Expr den = poly(vars, 2, 2);
    if (den.is_zero()) den = Expr(1);
    return poly(vars, 3, 3) / den;
  }
};

Outcome properties() {
  Random R;
  const int N = 100;
  std::vector<std::string> notes;
  Workspace ws;
  JetSpace jet(ws, 3, 12);
  const auto& u = jet.fields();
  std::vector<Symbol> jets(u.begin(), u.end());
  for (int i = 0; i < 3; ++i)
    for (int k = 1; k <= 2; ++k) jets.push_back(jet.u(i, k));

  // round trip
  for (int t = 0; t < N; ++t) {
    const Expr e = R.rational(jets);
    const std::string s = to_string(e, ws);
    if (!(parse(s, ws) == e) || to_string(parse(s, ws), ws) != s) return {false, "round trip: " + s};
  }
  // Leibniz and mixed partials
  for (int t = 0; t < N; ++t) {
    const Expr f = R.poly(jets, 3, 3), g = R.rational(u);
    if (!(jet.total_derivative(f * g) == jet.total_derivative(f) * g + f * jet.total_derivative(g)))
      return {false, "Leibniz rule"};
    const Expr h = R.rational(u);
    const Symbol a = u[R.uniform(0, 2)], b = u[R.uniform(0, 2)];
    if (!(diff(diff(h, a), b) == diff(diff(h, b), a))) return {false, "mixed partials"};
  }
  // metric compatibility and first Bianchi identity on random diagonal-plus-constant metrics
  for (int t = 0; t < N; ++t) {
    const int n = 2 + t % 2;
    Workspace w2;
    JetSpace j2(w2, n, 1);
    const auto& v = j2.fields();
    ExprMatrix gl = ExprMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      Expr d = R.poly({v[R.uniform(0, n - 1)]}, 2, 1);
      d += Expr(10 + t % 3);
      gl(i, i) = d;
    }
    gl(0, 1) = gl(1, 0) = Expr(R.uniform(-1, 1));
    const Metric g = Metric::from_lower(gl);
    const Tensor3 G = christoffel(g, v);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          Expr cov = diff(g.lower(i, j), v[k]);
          for (int s = 0; s < n; ++s) cov -= G(s, k, i) * g.lower(s, j) + G(s, k, j) * g.lower(i, s);
          if (!cov.is_zero()) return {false, "covariant derivative of g"};
        }
    const Tensor4 Rm = riemann_mixed(G, v);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            if (!(Rm(i, j, k, l) + Rm(i, k, l, j) + Rm(i, l, j, k)).is_zero()) return {false, "first Bianchi identity"};
  }
  // variational derivative kills total derivatives
  for (int t = 0; t < N; ++t) {
    const Expr f = R.poly(jets, 3, 3) * R.rational(u);
    const Expr df = jet.total_derivative(f);
    for (int i = 0; i < 3; ++i)
      if (!variational_derivative(jet, df, i).is_zero()) return {false, "Euler operator on a total derivative"};
  }
  // normal form: idempotent, and total derivatives vanish
  Schouten S(jet);
  {
    const ExprMatrix V = ExprMatrix::Identity(3, 3) * Expr(0);
    ExprMatrix Vd = V;
    for (int i = 0; i < 3; ++i) Vd(i, i) = Expr(u[i]);
    S.register_operator(make_ferapontov(jet, Metric::from_upper(ExprMatrix::Identity(3, 3)), Vd, 1, 0, 1, "T"));
  }
  auto slot = [&](int s, bool nonlocal, int order) -> Expr {
    if (nonlocal) return Expr(S.registry().at("T", R.uniform(0, 1), s));
    return Expr(jet.psi(s, R.uniform(0, 2), order));
  };
  auto density = [&](int max_order) {
    Expr e;
    const int terms = R.uniform(1, 3);
    for (int t = 0; t < terms; ++t) {
      const int loc = R.uniform(1, 3);  // this slot stays local
      Expr m = R.poly(u, 2, 2);
      if (m.is_zero()) m = Expr(1);
      for (int s = 1; s <= 3; ++s) m *= slot(s, s != loc && R.uniform(0, 2) == 0, R.uniform(0, max_order));
      if (R.uniform(0, 1)) m *= Expr(jet.u(R.uniform(0, 2), R.uniform(1, 2)));
      e += m;
    }
    return e;
  };
  for (int t = 0; t < N; ++t) {
    const TriVector a = S.normalize(S.density(density(3)));
    if (!(S.normalize(a) == a)) return {false, "normalize is not idempotent"};
  }
  for (int t = 0; t < N; ++t) {
    const TriVector d = S.total_derivative(S.density(density(2)));
    if (!S.normalize(d).is_zero()) return {false, "a total derivative survived normalization"};
  }
  return {true, "7 suites x 100 instances"};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"eta4 first-order metric and constants", first_order_metric},
      {"eta4 curvature residuals", curvature_cases},
      {"eta4 third-order ray", third_order_ray},
      {"Monge ansatz dimensions", monge_dimensions},
      {"eta4 Schouten brackets", compatibility},
      {"antidiagonal eta system and ray", antidiagonal},
      {"negative controls", negative_controls},
      {"batched solver and restricted seed", batched_equivalence},
      {"property suites", properties},
  };
  int failed = 0, k = 0;
  for (const auto& [name, run] : criteria) {
    ++k;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << k << "  " << name << ": " << o.detail << "  [" << std::fixed
              << std::setprecision(1) << seconds_since(t0) << " s]" << std::endl;
  }
  std::cout << (9 - failed) << "/9 criteria pass" << std::endl;
  return failed ? 1 : 0;
}
