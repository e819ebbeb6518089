#include "hamforge/session.hpp"

#include <charconv>
#include <sstream>

#include <boost/algorithm/string.hpp>

namespace hamforge {

namespace {

constexpr const char* header = "hamforge-session";

std::vector<int> indices_of(const std::vector<std::string>& words, std::size_t from, std::size_t pos) {
  std::vector<int> out;
  for (std::size_t k = from; k < words.size(); ++k) {
    int v = 0;
    const auto& w = words[k];
    auto [end, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
    if (ec != std::errc() || end != w.data() + w.size() || v < 0) throw ParseError("bad index '" + w + "'", pos);
    out.push_back(v);
  }
  return out;
}

void check_range(const std::vector<int>& idx, std::size_t count, int lo, int hi, std::size_t pos) {
  if (idx.size() != count) throw ParseError("wrong number of indices", pos);
  for (int i : idx)
    if (i < lo || i > hi) throw ParseError("index " + std::to_string(i) + " out of range", pos);
}

std::string indexed(std::string_view key, std::initializer_list<long> idx) {
  std::string s(key);
  for (long i : idx) s += " " + std::to_string(i);
  return s;
}

}  // namespace

Session::Session() : ws_(std::make_unique<Workspace>()) {}
Session::Session(Session&&) noexcept = default;
Session& Session::operator=(Session&&) noexcept = default;
Session::~Session() = default;

void Session::init(int n, const std::vector<std::string>& params, int max_order) {
  if (jet_) throw InvalidInput("session already initialized");
  for (const auto& p : params) {
    if (!is_identifier(p)) throw InvalidInput("bad parameter name '" + p + "'");
    params_.push_back(ws_->ensure(p, SymbolKind::parameter));
  }
  jet_ = std::make_unique<JetSpace>(*ws_, n, max_order);
}

JetSpace& Session::jet() {
  if (!jet_) throw InvalidInput("session has no system");
  return *jet_;
}

const JetSpace& Session::jet() const {
  if (!jet_) throw InvalidInput("session has no system");
  return *jet_;
}

std::vector<ParamCase> Session::cases() const { return fixed ? std::vector<ParamCase>{*fixed} : sign_cases(params_); }

void Session::fix_case(std::string_view assignments) {
  ParamCase c;
  std::vector<std::string> parts;
  boost::split(parts, assignments, boost::is_any_of(","));
  for (auto& part : parts) {
    boost::trim(part);
    if (part.empty()) continue;
    const auto eq = part.find('=');
    if (eq == std::string::npos) throw ParseError("expected name=value in '" + part + "'", 0);
    const std::string name = boost::trim_copy(part.substr(0, eq));
    const auto s = ws_->find(name);
    if (!s || std::find(params_.begin(), params_.end(), *s) == params_.end())
      throw InvalidInput("'" + name + "' is not a parameter of this session");
    mpq_class v;
    if (v.set_str(boost::trim_copy(part.substr(eq + 1)), 10) != 0) throw ParseError("bad value in '" + part + "'", 0);
    v.canonicalize();
    c[*s] = v;
  }
  if (c.size() != params_.size()) throw InvalidInput("--params must assign every session parameter");
  fixed = std::move(c);
}

std::string Session::save() const {
  const Workspace& ws = *ws_;
  auto str = [&](const Expr& e) { return to_string(e, ws); };
  std::ostringstream out;
  out << header << ' ' << format_version << '\n';
  if (!jet_) return out.str();

  out << "[workspace]\n";
  out << "parameters";
  for (auto p : params_) out << ' ' << ws.name(p);
  out << "\nfields " << jet_->n() << "\norder " << jet_->max_order() << '\n';
  if (fixed) {
    out << "case";
    for (const auto& [s, v] : *fixed) out << ' ' << ws.name(s) << '=' << v.get_str();
    out << '\n';
  }
  if (system) {
    out << "[system]\nprovenance " << system->provenance << '\n';
    for (int i = 0; i < system->n; ++i) out << "flux " << i + 1 << " = " << str(system->fluxes[i]) << '\n';
  }
  if (first_order) {
    const auto& c = *first_order;
    out << "[first-order]\nalpha = " << str(c.alpha) << "\nbeta = " << str(c.beta) << "\ngamma = " << str(c.gamma)
        << "\nf = " << str(c.f) << '\n';
    for (int i = 0; i < c.g.dim(); ++i)
      for (int j = i; j < c.g.dim(); ++j) out << indexed("g", {i + 1, j + 1}) << " = " << str(c.g.upper(i, j)) << '\n';
  }
  if (third_order) {
    out << "[third-order]\ndimension " << third_order_dimension << '\n';
    const auto& h = *third_order;
    for (Eigen::Index i = 0; i < h.rows(); ++i)
      for (Eigen::Index j = i; j < h.cols(); ++j) out << indexed("h", {i + 1, j + 1}) << " = " << str(h(i, j)) << '\n';
  }
  for (const auto& [name, op] : operators) {
    out << "[operator " << name << "]\n";
    for (int i = 0; i < op.n(); ++i)
      for (int j = 0; j < op.n(); ++j)
        for (std::size_t k = 0; k < op.local.coeff[i][j].size(); ++k)
          if (!op.local.coeff[i][j][k].is_zero())
            out << indexed("local", {i + 1, j + 1, static_cast<long>(k)}) << " = " << str(op.local.coeff[i][j][k]) << '\n';
    for (std::size_t a = 0; a < op.tails.size(); ++a)
      for (int i = 0; i < op.n(); ++i)
        out << indexed("tail", {static_cast<long>(a + 1), i + 1}) << " = " << str(op.tails[a][i]) << '\n';
    for (Eigen::Index a = 0; a < op.coupling.rows(); ++a)
      for (Eigen::Index b = 0; b < op.coupling.cols(); ++b)
        out << indexed("coupling", {a + 1, b + 1}) << " = " << str(op.coupling(a, b)) << '\n';
  }
  if (!verdicts.empty()) {
    out << "[verdicts]\n";
    for (const auto& [k, v] : verdicts) out << k << " = " << v << '\n';
  }
  return out.str();
}

Session Session::load(std::string_view text) {
  Session s;
  std::vector<std::pair<std::string, std::size_t>> lines;
  {
    std::size_t off = 0;
    while (off < text.size()) {
      std::size_t end = text.find('\n', off);
      if (end == std::string_view::npos) end = text.size();
      std::string line(text.substr(off, end - off));
      boost::trim_right(line);
      if (!line.empty()) lines.emplace_back(line, off);
      off = end + 1;
    }
  }
  if (lines.empty() || lines[0].first != std::string(header) + " " + std::to_string(format_version))
    throw ParseError("not a hamforge session (expected header '" + std::string(header) + " " +
                         std::to_string(format_version) + "')",
                     0);

  std::string section;
  std::vector<std::string> params;
  int n = 0, order = 10;
  std::string fixed_text;
  std::string op_name;
  std::map<std::string, std::string> g_entries;
  auto ensure_init = [&](std::size_t pos) {
    if (s.initialized()) return;
    if (n < 1) throw ParseError("[workspace] must declare 'fields <n>' first", pos);
    s.init(n, params, order);
    if (!fixed_text.empty()) s.fix_case(fixed_text);
  };
  ExprMatrix gup, h;
  bool have_g = false;

  for (std::size_t l = 1; l < lines.size(); ++l) {
    const auto& [line, pos] = lines[l];
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError("unterminated section header", pos);
      section = line.substr(1, line.size() - 2);
      if (section != "workspace") ensure_init(pos);
      if (section == "system") {
        s.system = HydroSystem{n, std::vector<Expr>(static_cast<std::size_t>(n)), ""};
      } else if (section == "first-order") {
        s.first_order = FirstOrderCertificate{};
        gup = ExprMatrix(n, n);
        have_g = true;
      } else if (section == "third-order") {
        h = ExprMatrix(n, n);
        s.third_order = h;
      } else if (boost::starts_with(section, "operator ")) {
        op_name = section.substr(9);
        WnlOperator op;
        op.tag = op_name;
        op.local = DiffOperator(n);
        op.coupling = ExprMatrix(0, 0);
        s.operators[op_name] = std::move(op);
        section = "operator";
      } else if (section != "workspace" && section != "verdicts") {
        throw ParseError("unknown section [" + section + "]", pos);
      }
      continue;
    }
    const auto eq = line.find(" = ");
    const std::string key = eq == std::string::npos ? line : line.substr(0, eq);
    const std::string value = eq == std::string::npos ? std::string() : line.substr(eq + 3);
    std::vector<std::string> words;
    boost::split(words, key, boost::is_any_of(" "), boost::token_compress_on);
    auto expr = [&]() {
      try {
        return parse(value, s.workspace());
      } catch (const ParseError& e) {
        throw ParseError(std::string(e.what()), pos + eq + 3 + e.position());
      }
    };

    if (section == "workspace") {
      if (words[0] == "parameters") {
        params.assign(words.begin() + 1, words.end());
      } else if (words[0] == "fields" && words.size() == 2) {
        n = indices_of(words, 1, pos)[0];
      } else if (words[0] == "order" && words.size() == 2) {
        order = indices_of(words, 1, pos)[0];
      } else if (words[0] == "case") {
        std::vector<std::string> rest(words.begin() + 1, words.end());
        fixed_text = boost::join(rest, ",");
      } else {
        throw ParseError("unknown workspace entry '" + line + "'", pos);
      }
    } else if (section == "system") {
      if (words[0] == "provenance") {
        s.system->provenance = boost::trim_copy(line.substr(10));
      } else if (words[0] == "flux") {
        const auto idx = indices_of(words, 1, pos);
        check_range(idx, 1, 1, n, pos);
        s.system->fluxes[idx[0] - 1] = expr();
      } else {
        throw ParseError("unknown system entry", pos);
      }
    } else if (section == "first-order") {
      auto& c = *s.first_order;
      if (key == "alpha") c.alpha = expr();
      else if (key == "beta") c.beta = expr();
      else if (key == "gamma") c.gamma = expr();
      else if (key == "f") c.f = expr();
      else if (words[0] == "g") {
        const auto idx = indices_of(words, 1, pos);
        check_range(idx, 2, 1, n, pos);
        gup(idx[0] - 1, idx[1] - 1) = gup(idx[1] - 1, idx[0] - 1) = expr();
      } else {
        throw ParseError("unknown first-order entry", pos);
      }
    } else if (section == "third-order") {
      if (words[0] == "dimension") {
        s.third_order_dimension = static_cast<std::size_t>(indices_of(words, 1, pos).at(0));
      } else if (words[0] == "h") {
        const auto idx = indices_of(words, 1, pos);
        check_range(idx, 2, 1, n, pos);
        h(idx[0] - 1, idx[1] - 1) = h(idx[1] - 1, idx[0] - 1) = expr();
        s.third_order = h;
      } else {
        throw ParseError("unknown third-order entry", pos);
      }
    } else if (section == "operator") {
      auto& op = s.operators[op_name];
      const auto idx = indices_of(words, 1, pos);
      if (words[0] == "local") {
        check_range(idx, 3, 0, std::max(n, 16), pos);
        if (idx[0] < 1 || idx[0] > n || idx[1] < 1 || idx[1] > n) throw ParseError("index out of range", pos);
        auto& cs = op.local.coeff[idx[0] - 1][idx[1] - 1];
        if (cs.size() <= static_cast<std::size_t>(idx[2])) cs.resize(static_cast<std::size_t>(idx[2]) + 1);
        cs[idx[2]] = expr();
      } else if (words[0] == "tail") {
        check_range(idx, 2, 1, 64, pos);
        if (idx[1] > n) throw ParseError("index out of range", pos);
        if (op.tails.size() < static_cast<std::size_t>(idx[0])) op.tails.resize(idx[0], std::vector<Expr>(n));
        op.tails[idx[0] - 1][idx[1] - 1] = expr();
      } else if (words[0] == "coupling") {
        check_range(idx, 2, 1, 64, pos);
        const Eigen::Index m = std::max<Eigen::Index>({op.coupling.rows(), idx[0], idx[1]});
        if (m > op.coupling.rows()) {
          ExprMatrix grown(m, m);
          grown.topLeftCorner(op.coupling.rows(), op.coupling.cols()) = op.coupling;
          op.coupling = grown;
        }
        op.coupling(idx[0] - 1, idx[1] - 1) = expr();
      } else {
        throw ParseError("unknown operator entry", pos);
      }
    } else if (section == "verdicts") {
      if (eq == std::string::npos) throw ParseError("expected '<command> = <verdict>'", pos);
      s.verdicts[key] = value;
    } else {
      throw ParseError("entry outside of a section", pos);
    }
  }
  if (!s.initialized() && n > 0) ensure_init(0);
  if (have_g) s.first_order->g = Metric::from_upper(gup);
  for (const auto& [name, op] : s.operators)
    if (op.coupling.rows() != static_cast<Eigen::Index>(op.tails.size()))
      throw ParseError("operator " + name + ": coupling size does not match the tails", 0);
  return s;
}

}  // namespace hamforge
