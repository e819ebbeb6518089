// hamforge: batch pipeline over a session file.
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "hamforge/conditions.hpp"
#include "hamforge/operators.hpp"
#include "hamforge/schouten.hpp"
#include "hamforge/session.hpp"
#include "hamforge/systems.hpp"

using namespace hamforge;

namespace {

enum Exit { ok = 0, failed = 1, usage = 2 };

struct Options {
  std::string session;
  std::string eta;
  std::string system;
  std::string params;
  std::size_t batch = 64;
  std::string out;
  int restrict_to = 0;
  std::string pair;
};

/// Error tagged with the stage that raised it.
struct StageError : std::runtime_error {
  StageError(const std::string& stage, const std::string& what, Exit code)
      : std::runtime_error(stage + ": " + what), code(code) {}
  Exit code;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write '" + path + "'");
  out << text;
}

std::string case_label(const ParamCase& c, const Workspace& ws) {
  if (c.empty()) return "(no parameters)";
  std::string s;
  for (const auto& [p, v] : c) s += (s.empty() ? "" : ", ") + ws.name(p) + "=" + v.get_str();
  return s;
}

Session open_session(const Options& o) {
  Session s;
  if (!o.eta.empty() && !o.system.empty()) throw InvalidInput("--eta and --system are exclusive");
  if (!o.eta.empty()) {
    // eta parameters must be declared before the jet space; parse once to learn them
    Workspace probe;
    const EtaSpec spec0 = parse_eta(o.eta, probe);
    std::vector<std::string> names;
    for (auto p : spec0.params) names.push_back(probe.name(p));
    s.init(spec0.N(), names);
    const EtaSpec spec = parse_eta(o.eta, s.workspace());
    s.system = generate_wdvv_n3(s.jet(), spec).system;
  } else if (!o.system.empty()) {
    const std::string text = read_file(o.system);
    s.init(system_file_fields(text), system_file_parameters(text));
    s.system = parse_system(text, s.jet());
  } else if (std::filesystem::exists(o.session)) {
    s = Session::load(read_file(o.session));
  } else {
    throw InvalidInput("no session '" + o.session + "'; start one with --eta or --system");
  }
  if (!o.params.empty()) s.fix_case(o.params);
  return s;
}

const HydroSystem& need_system(const Session& s, const char* stage) {
  if (!s.system) throw StageError(stage, "session has no system", usage);
  return *s.system;
}

std::vector<Expr> specialized_fluxes(const Session& s) {
  std::vector<Expr> F = s.system->fluxes;
  if (s.fixed)
    for (auto& f : F) f = substitute(f, *s.fixed);
  return F;
}

bool print_report(const char* what, const Report& r, const Session& s) {
  std::cout << what << ": " << (r.passed ? "pass" : "FAIL") << " (" << r.checked << " residuals)\n";
  if (!r.passed) {
    std::cout << "  case " << case_label(*r.failing_case, s.workspace()) << '\n';
    for (const auto& f : r.failures) std::cout << "  " << describe(f, s.workspace()) << '\n';
  }
  return r.passed;
}

Exit find_first(Session& s, const Options&) {
  const char* stage = "find-first-order";
  need_system(s, stage);
  const std::vector<Expr> F = specialized_fluxes(s);
  FirstOrderCertificate cert;
  try {
    cert = find_first_order(s.jet(), F, s.free_params());
  } catch (const MathError& e) {
    s.verdicts[stage] = std::string("fail: ") + e.what();
    std::cout << stage << ": FAIL " << e.what() << '\n';
    return failed;
  }
  const ExprMatrix V = velocity_matrix(s.jet(), F);
  const Workspace& ws = s.workspace();
  for (int i = 0; i < cert.g.dim(); ++i)
    for (int j = i; j < cert.g.dim(); ++j)
      std::cout << "g^" << i + 1 << j + 1 << " = " << to_string(cert.g.upper(i, j), ws) << '\n';
  std::cout << "alpha = " << to_string(cert.alpha, ws) << ", beta = " << to_string(cert.beta, ws)
            << ", gamma = " << to_string(cert.gamma, ws) << '\n';
  const bool pass = print_report("first-order conditions", check_first_order_hamiltonian(cert, V, s.jet().fields(), s.cases()), s);
  s.operators["A"] = make_ferapontov(s.jet(), cert.g, V, cert.alpha, cert.beta, cert.gamma, "A");
  s.first_order = std::move(cert);
  s.verdicts[stage] = pass ? "pass" : "fail";
  return pass ? ok : failed;
}

Exit find_third(Session& s, const Options& o) {
  const char* stage = "find-third-order";
  need_system(s, stage);
  const std::vector<Expr> F = specialized_fluxes(s);
  const ExprMatrix V = velocity_matrix(s.jet(), F);
  const auto t0 = std::chrono::steady_clock::now();
  ThirdOrderSolution sol = find_third_order(s.jet(), V, s.free_params(), o.batch, o.restrict_to);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << "compatibility system: " << sol.identities << " identities, " << sol.rows << " rows, " << sol.batches
            << " batches, " << secs << " s\n";
  std::cout << "solution space dimension " << sol.dimension << (sol.verified ? " (verified)" : "") << '\n';
  s.third_order_dimension = sol.dimension;
  if (sol.dimension != 1) {
    s.third_order.reset();
    s.operators.erase("B");
    s.verdicts[stage] = "fail: dimension " + std::to_string(sol.dimension);
    std::cout << stage << ": FAIL no unique solution ray\n";
    return failed;
  }
  const Workspace& ws = s.workspace();
  for (int i = 0; i < sol.h.rows(); ++i)
    for (int j = i; j < sol.h.cols(); ++j) std::cout << "h" << i + 1 << j + 1 << " = " << to_string(sol.h(i, j), ws) << '\n';
  const Metric h = Metric::from_lower(sol.h);
  bool pass = print_report("third-order conditions", check_third_order_hamiltonian(h, s.jet().fields(), s.cases()), s);
  pass = print_report("compatibility with the system", check_third_order_compatibility(sol.h, V, s.jet().fields(), s.cases()), s) && pass;
  s.operators["B"] = make_third_order(s.jet(), h, "B");
  s.third_order = sol.h;
  s.verdicts[stage] = pass ? "pass" : "fail";
  return pass ? ok : failed;
}

Exit check_hamiltonian(Session& s, const Options&) {
  const char* stage = "check-hamiltonian";
  if (!s.first_order && !s.third_order) throw StageError(stage, "session has neither a first-order nor a third-order metric", usage);
  need_system(s, stage);
  const ExprMatrix V = velocity_matrix(s.jet(), specialized_fluxes(s));
  bool pass = true;
  if (s.first_order) pass = print_report("first-order conditions", check_first_order_hamiltonian(*s.first_order, V, s.jet().fields(), s.cases()), s) && pass;
  if (s.third_order) {
    Metric h;
    try {
      h = Metric::from_lower(*s.third_order);
    } catch (const MathError& e) {
      throw StageError(stage, std::string("degenerate h: ") + e.what(), failed);
    }
    pass = print_report("third-order conditions", check_third_order_hamiltonian(h, s.jet().fields(), s.cases()), s) && pass;
    pass = print_report("compatibility with the system", check_third_order_compatibility(*s.third_order, V, s.jet().fields(), s.cases()), s) && pass;
  }
  s.verdicts[stage] = pass ? "pass" : "fail";
  return pass ? ok : failed;
}

bool run_bracket(Session& s, const std::string& a, const std::string& b) {
  const auto ia = s.operators.find(a), ib = s.operators.find(b);
  if (ia == s.operators.end() || ib == s.operators.end())
    throw StageError("schouten", "operator " + (ia == s.operators.end() ? a : b) + " missing from the session", usage);
  bool all = true;
  for (const auto& c : s.cases()) {
    const auto t0 = std::chrono::steady_clock::now();
    const ZeroTest z = a == b ? bracket_vanishes(s.jet(), ia->second, ia->second, {c})
                              : bracket_vanishes(s.jet(), ia->second, ib->second, {c});
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "[" << a << "," << b << "] " << case_label(c, s.workspace()) << ": "
              << (z.zero ? "zero" : "NONZERO, " + z.witness) << " (" << secs << " s)\n";
    all = all && z.zero;
  }
  return all;
}

Exit schouten(Session& s, const Options& o) {
  std::vector<std::pair<std::string, std::string>> pairs;
  if (!o.pair.empty()) {
    if (o.pair.size() != 2) throw StageError("schouten", "--pair takes two operator names such as AA or AB", usage);
    pairs.emplace_back(o.pair.substr(0, 1), o.pair.substr(1, 1));
  } else {
    for (const auto& [name, op] : s.operators) pairs.emplace_back(name, name);
  }
  if (pairs.empty()) throw StageError("schouten", "session has no operators", usage);
  bool pass = true;
  for (const auto& [a, b] : pairs) pass = run_bracket(s, a, b) && pass;
  s.verdicts["schouten"] = pass ? "pass" : "fail";
  return pass ? ok : failed;
}

Exit compat(Session& s, const Options&) {
  if (!s.operators.count("A") || !s.operators.count("B"))
    throw StageError("compat", "needs operators A and B (run find-first-order and find-third-order)", usage);
  bool pass = true;
  for (const auto& [a, b] : {std::pair{"A", "A"}, {"B", "B"}, {"A", "B"}}) pass = run_bracket(s, a, b) && pass;
  std::cout << "compat: " << (pass ? "pass" : "FAIL") << '\n';
  s.verdicts["compat"] = pass ? "pass" : "fail";
  return pass ? ok : failed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hamiltonian operators for WDVV hydrodynamic-type systems"};
  app.require_subcommand(1);
  Options o;
  using Command = Exit (*)(Session&, const Options&);
  std::vector<std::pair<CLI::App*, Command>> commands;
  auto add = [&](const char* name, const char* help, Command fn) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--session", o.session, "session file (read, then updated)")->required();
    sub->add_option("--eta", o.eta, "eta for N = 3: antidiagonal, eta4 or rows like 0,0,1;0,1,0;1,0,0");
    sub->add_option("--system", o.system, "system file: 'fields n' then 'flux <i> = <expr>'");
    sub->add_option("--params", o.params, "fix the sign parameters, e.g. lam=1,mu=-1");
    sub->add_option("--batch-size", o.batch, "rows per batch of the exact solver")->check(CLI::PositiveNumber);
    sub->add_option("--out", o.out, "write the updated session here instead of --session");
    commands.emplace_back(sub, fn);
    return sub;
  };
  add("find-first-order", "nonlocal first-order operator of Ferapontov type", find_first);
  add("find-third-order", "third-order local operator from the Monge ansatz", find_third)
      ->add_option("--restrict", o.restrict_to, "seed with the h-symmetry identities for indices <= m");
  add("check-hamiltonian", "re-check the stored metrics", check_hamiltonian);
  add("schouten", "Schouten self-brackets of the stored operators", schouten)
      ->add_option("--pair", o.pair, "two operator names, e.g. AB");
  add("compat", "[A,A], [B,B] and [A,B] for every parameter case", compat);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? ok : usage;
  }

  try {
    Session s = open_session(o);
    Exit code = ok;
    for (const auto& [sub, fn] : commands)
      if (sub->parsed()) {
        try {
          code = fn(s, o);
        } catch (const StageError&) {
          throw;
        } catch (const ParseError& e) {
          throw StageError(sub->get_name(), e.what(), usage);
        } catch (const InvalidInput& e) {
          throw StageError(sub->get_name(), e.what(), usage);
        } catch (const Error& e) {
          throw StageError(sub->get_name(), e.what(), failed);
        }
      }
    write_file(o.out.empty() ? o.session : o.out, s.save());
    return code;
  } catch (const StageError& e) {
    std::cerr << "hamforge: " << e.what() << '\n';
    return e.code;
  } catch (const ParseError& e) {
    std::cerr << "hamforge: " << e.what() << '\n';
    return usage;
  } catch (const InvalidInput& e) {
    std::cerr << "hamforge: " << e.what() << '\n';
    return usage;
  } catch (const Error& e) {
    std::cerr << "hamforge: " << e.what() << '\n';
    return failed;
  }
}
