#include "hamforge/systems.hpp"

#include <charconv>
#include <regex>
#include <sstream>

#include <boost/algorithm/string.hpp>

namespace hamforge {

namespace {

std::vector<std::string> split_trim(std::string_view text, const char* sep) {
  std::vector<std::string> parts;
  std::string t(text);
  boost::trim(t);
  boost::split(parts, t, boost::is_any_of(sep), boost::token_compress_on);
  for (auto& p : parts) boost::trim(p);
  return parts;
}

int parse_int(const std::string& s, std::size_t pos) {
  int v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) throw ParseError("expected an integer, got '" + s + "'", pos);
  return v;
}

struct Line {
  std::string text;
  std::size_t offset;
};

std::vector<Line> content_lines(std::string_view text) {
  std::vector<Line> out;
  std::size_t off = 0;
  while (off <= text.size()) {
    std::size_t end = text.find('\n', off);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(off, end - off));
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    boost::trim(line);
    if (!line.empty()) out.push_back({line, off});
    off = end + 1;
  }
  return out;
}

// p^2 = 1 for every sign parameter p.
Poly reduce_sign_powers(const Poly& p, const std::vector<Symbol>& params) {
  std::vector<Poly::Term> terms;
  for (const auto& [m, c] : p.terms()) {
    Monomial r;
    for (std::size_t k = 0; k < m.size(); ++k) {
      const bool sign = std::find(params.begin(), params.end(), Symbol{m.var_at(k)}) != params.end();
      const auto e = sign ? m.exp_at(k) % 2 : m.exp_at(k);
      if (e) r = r * Monomial::variable(m.var_at(k), e);
    }
    terms.emplace_back(r, c);
  }
  return Poly::from_terms(std::move(terms));
}

Expr reduce_sign_powers(const Expr& e, const std::vector<Symbol>& params) {
  if (params.empty()) return e;
  return Expr::fraction(reduce_sign_powers(e.num(), params), reduce_sign_powers(e.den(), params));
}

}  // namespace

EtaSpec parse_eta(std::string_view text, Workspace& ws) {
  std::string spelled(text);
  boost::trim(spelled);
  if (spelled == "antidiagonal") spelled = "0,0,1;0,1,0;1,0,0";
  if (spelled == "eta4") spelled = "1,0,0;0,lam,0;0,0,mu";
  const auto rows = split_trim(spelled, ";");
  const auto n = static_cast<Eigen::Index>(rows.size());
  EtaSpec spec;
  spec.eta = ExprMatrix(n, n);
  const bool was = ws.auto_declare;
  ws.auto_declare = true;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto cells = split_trim(rows[i], ",");
    if (static_cast<Eigen::Index>(cells.size()) != n) {
      ws.auto_declare = was;
      throw ParseError("eta row " + std::to_string(i + 1) + " has " + std::to_string(cells.size()) + " entries", 0);
    }
    for (Eigen::Index j = 0; j < n; ++j) spec.eta(i, j) = parse(cells[j], ws);
  }
  ws.auto_declare = was;
  std::vector<std::string> canon;
  for (Eigen::Index i = 0; i < n; ++i) {
    std::vector<std::string> cells;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!(spec.eta(i, j) == spec.eta(j, i))) throw InvalidInput("eta is not symmetric");
      for (auto s : spec.eta(i, j).symbols()) {
        if (ws.info(s).kind != SymbolKind::parameter) throw InvalidInput("eta entries must be constants or parameters");
        if (std::find(spec.params.begin(), spec.params.end(), s) == spec.params.end()) spec.params.push_back(s);
      }
      cells.push_back(to_string(spec.eta(i, j), ws));
    }
    canon.push_back(boost::join(cells, ","));
  }
  std::sort(spec.params.begin(), spec.params.end());
  spec.text = boost::join(canon, ";");
  // nondegenerate in every sign case
  for (const auto& c : sign_cases(spec.params)) inverse(substitute(spec.eta, c));
  spec.inverse = inverse(spec.eta);
  return spec;
}

WdvvN3 generate_wdvv_n3(const JetSpace& jet, const EtaSpec& eta) {
  if (eta.N() != 3) throw InvalidInput("generate_wdvv_n3 needs N = 3, got N = " + std::to_string(eta.N()));
  if (jet.n() != 3) throw InvalidInput("generate_wdvv_n3 needs a jet space with three fields");
  Workspace& ws = jet.workspace();
  const Symbol fttt = ws.ensure("fttt", SymbolKind::unknown);
  // third derivatives of F = eta part + f(x, t), with t^1 the distinguished variable
  const Expr f3[4] = {Expr(jet.u(0)), Expr(jet.u(1)), Expr(jet.u(2)), Expr(fttt)};
  auto F = [&](int a, int b, int c) -> Expr {
    if (a == 0) return eta.eta(b, c);
    if (b == 0) return eta.eta(a, c);
    if (c == 0) return eta.eta(a, b);
    return f3[(a == 2) + (b == 2) + (c == 2)];
  };
  const ExprMatrix& inv = eta.inverse;
  std::vector<Expr> eqs;
  for (int al = 0; al < 3; ++al)
    for (int be = 0; be < 3; ++be)
      for (int nu = 0; nu < 3; ++nu)
        for (int ga = 0; ga < 3; ++ga) {
          Expr e;
          for (int m = 0; m < 3; ++m)
            for (int l = 0; l < 3; ++l) {
              if (inv(m, l).is_zero()) continue;
              e += inv(m, l) * (F(l, al, be) * F(nu, m, ga) - F(nu, al, m) * F(l, be, ga));
            }
          if (!e.is_zero()) eqs.push_back(e);
        }
  const Expr* chosen = nullptr;
  for (const auto& e : eqs)
    if (e.depends_on(fttt) && !diff(e, fttt).depends_on(fttt)) {
      chosen = &e;
      break;
    }
  if (!chosen) throw MathError("the associativity equation cannot be solved rationally for f_ttt");
  const Expr c1 = diff(*chosen, fttt);
  const Expr c0 = substitute(*chosen, std::map<Symbol, mpq_class>{{fttt, 0}});
  const Expr raw = -c0 / c1;
  for (const auto& e : eqs)
    if (!substitute(e, std::map<Symbol, Expr>{{fttt, raw}}).is_zero())
      throw MathError("the associativity equations are not equivalent to a single equation");
  const Expr sol = reduce_sign_powers(raw, eta.params);

  WdvvN3 out;
  out.fttt = fttt;
  out.equation = reduce_sign_powers(Expr(chosen->num()), eta.params);
  out.system.n = 3;
  out.system.fluxes = {Expr(jet.u(1)), Expr(jet.u(2)), sol};
  out.system.provenance = "generated-n3 " + eta.text;
  return out;
}

std::vector<std::string> system_file_parameters(std::string_view text) {
  static const std::regex ident("[A-Za-z_][A-Za-z0-9_]*");
  static const std::regex jetname("u[0-9]+(_x[0-9]*)?");
  std::vector<std::string> out;
  for (const auto& line : content_lines(text)) {
    const auto eq = line.text.find('=');
    if (eq == std::string::npos) continue;
    const std::string rhs = line.text.substr(eq + 1);
    for (std::sregex_iterator it(rhs.begin(), rhs.end(), ident), end; it != end; ++it) {
      const std::string name = it->str();
      if (std::regex_match(name, jetname)) continue;
      if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
    }
  }
  return out;
}

int system_file_fields(std::string_view text) {
  const auto lines = content_lines(text);
  if (lines.empty()) throw ParseError("empty system file", 0);
  const auto words = split_trim(lines[0].text, " \t");
  if (words.size() != 2 || words[0] != "fields") throw ParseError("system file must start with 'fields <n>'", lines[0].offset);
  const int n = parse_int(words[1], lines[0].offset);
  if (n < 1) throw ParseError("field count must be positive", lines[0].offset);
  return n;
}

HydroSystem parse_system(std::string_view text, const JetSpace& jet) {
  const int n = system_file_fields(text);
  if (n != jet.n()) throw InvalidInput("system declares " + std::to_string(n) + " fields, jet space has " + std::to_string(jet.n()));
  const auto lines = content_lines(text);
  HydroSystem sys;
  sys.n = n;
  sys.fluxes.assign(static_cast<std::size_t>(n), Expr());
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  Workspace& ws = jet.workspace();
  for (std::size_t l = 1; l < lines.size(); ++l) {
    const auto& [line, off] = lines[l];
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'flux <i> = <expr>'", off);
    const auto head = split_trim(line.substr(0, eq), " \t");
    if (head.size() != 2 || head[0] != "flux") throw ParseError("expected 'flux <i> = <expr>'", off);
    const int i = parse_int(head[1], off);
    if (i < 1 || i > n) throw ParseError("flux index " + head[1] + " out of range", off);
    if (seen[i - 1]) throw ParseError("flux " + head[1] + " given twice", off);
    Expr e;
    try {
      e = parse(line.substr(eq + 1), ws);
    } catch (const ParseError& pe) {
      throw ParseError(std::string("flux ") + head[1] + ": " + pe.what(), off + eq + 1 + pe.position());
    }
    for (auto s : e.symbols()) {
      const auto kind = ws.info(s).kind;
      if (kind == SymbolKind::jet) throw InvalidInput("flux " + head[1] + " contains the jet variable " + ws.name(s));
      if (kind != SymbolKind::field && kind != SymbolKind::parameter)
        throw InvalidInput("flux " + head[1] + " contains the symbol " + ws.name(s));
    }
    sys.fluxes[i - 1] = e;
    seen[i - 1] = true;
  }
  for (int i = 0; i < n; ++i)
    if (!seen[i]) throw ParseError("flux " + std::to_string(i + 1) + " missing", 0);
  sys.provenance = "user-file";
  return sys;
}

std::string format_system(const HydroSystem& sys, const Workspace& ws) {
  std::ostringstream out;
  out << "fields " << sys.n << '\n';
  for (int i = 0; i < sys.n; ++i) out << "flux " << i + 1 << " = " << to_string(sys.fluxes[i], ws) << '\n';
  return out.str();
}

bool same_system(const HydroSystem& a, const HydroSystem& b, const std::vector<Symbol>& params) {
  if (a.n != b.n) return false;
  for (const auto& c : sign_cases(params))
    for (int i = 0; i < a.n; ++i) {
      const Expr d = a.fluxes[i] - b.fluxes[i];
      if (!(c.empty() ? d : substitute(d, c)).is_zero()) return false;
    }
  return true;
}

}  // namespace hamforge
