#include "hamforge/expr.hpp"

#include <cctype>
#include <set>
#include <sstream>

namespace hamforge {

Expr::Expr() : Expr(Poly{}) {}
Expr::Expr(long value) : Expr(Poly(mpq_class(value))) {}
Expr::Expr(const mpq_class& value) : Expr(Poly(value)) {}
Expr::Expr(Poly numerator) : body_(std::make_shared<const Body>(Body{std::move(numerator), Poly(1)})) {}
Expr::Expr(Symbol s) : Expr(Poly::variable(s.index)) {}

Expr Expr::make(Poly num, Poly den) { return Expr(std::make_shared<const Body>(Body{std::move(num), std::move(den)})); }

Expr Expr::fraction(Poly num, Poly den) {
  if (den.is_zero()) throw MathError("division by zero");
  if (num.is_zero()) return Expr();
  if (den.is_constant()) return Expr(num.scaled(1 / den.leading_coeff()));
  Poly g = gcd(num, den);
  if (!g.is_one()) {
    num = *divide_exact(num, g);
    den = *divide_exact(den, g);
  }
  if (den.leading_coeff() != 1) {
    const mpq_class inv = 1 / den.leading_coeff();
    num = num.scaled(inv);
    den = den.scaled(inv);
  }
  return make(std::move(num), std::move(den));
}

std::optional<mpq_class> Expr::constant() const {
  if (!is_constant()) return std::nullopt;
  return num().constant_value();
}

std::vector<Symbol> Expr::symbols() const {
  std::set<std::uint32_t> vs;
  for (auto v : num().variables()) vs.insert(v);
  for (auto v : den().variables()) vs.insert(v);
  std::vector<Symbol> out;
  for (auto v : vs) out.push_back(Symbol{v});
  return out;
}

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.den() == b.den()) {
    Poly n = a.num() + b.num();
    if (a.is_polynomial()) return Expr(std::move(n));
    if (n.is_zero()) return Expr();
    Poly g = gcd(n, a.den());
    if (g.is_one()) return Expr::make(std::move(n), a.den());
    return Expr::fraction(*divide_exact(n, g), *divide_exact(a.den(), g));
  }
  if (a.is_polynomial()) return Expr::make(a.num() * b.den() + b.num(), b.den());
  if (b.is_polynomial()) return Expr::make(a.num() + b.num() * a.den(), a.den());
  Poly g = gcd(a.den(), b.den());
  Poly bd = *divide_exact(b.den(), g);
  Poly ad = *divide_exact(a.den(), g);
  Poly n = a.num() * bd + b.num() * ad;
  Poly d = a.den() * bd;
  if (g.is_one()) return Expr::make(std::move(n), std::move(d));
  return Expr::fraction(std::move(n), std::move(d));
}

Expr Expr::operator-() const {
  if (is_zero()) return *this;
  return make(-num(), den());
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_zero() || b.is_zero()) return Expr();
  if (a.is_polynomial() && b.is_polynomial()) return Expr(a.num() * b.num());
  Poly an = a.num(), ad = a.den(), bn = b.num(), bd = b.den();
  if (!bd.is_one()) {
    Poly g = gcd(an, bd);
    if (!g.is_one()) an = *divide_exact(an, g), bd = *divide_exact(bd, g);
  }
  if (!ad.is_one()) {
    Poly g = gcd(bn, ad);
    if (!g.is_one()) bn = *divide_exact(bn, g), ad = *divide_exact(ad, g);
  }
  Poly n = an * bn, d = ad * bd;
  if (d.leading_coeff() != 1) {
    const mpq_class inv = 1 / d.leading_coeff();
    n = n.scaled(inv);
    d = d.scaled(inv);
  }
  return Expr::make(std::move(n), std::move(d));
}

Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_zero()) throw MathError("division by zero");
  if (a.is_zero()) return Expr();
  // 1/b has numerator b.den and denominator b.num, normalized below by operator*.
  const mpq_class lc = b.num().leading_coeff();
  Expr inv = Expr::make(b.den().scaled(1 / lc), b.num().scaled(1 / lc));
  return a * inv;
}

Expr pow(const Expr& base, long exponent) {
  if (exponent == 0) return Expr(1);
  if (exponent < 0) {
    if (base.is_zero()) throw MathError("zero raised to a negative power");
    return Expr(1) / pow(base, -exponent);
  }
  if (exponent > 0xFFFF) throw MathError("exponent too large");
  const auto e = static_cast<unsigned>(exponent);
  if (base.is_polynomial()) return Expr(base.num().pow(e));
  return Expr::fraction(base.num().pow(e), base.den().pow(e));
}

Expr diff(const Expr& e, Symbol s) {
  const bool in_num = e.num().depends_on(s.index), in_den = e.den().depends_on(s.index);
  if (!in_den) {
    if (!in_num) return Expr();
    Poly dn = e.num().derivative(s.index);
    if (e.is_polynomial()) return Expr(std::move(dn));
    return Expr::fraction(std::move(dn), e.den());
  }
  const Poly& b = e.den();
  const Poly db = b.derivative(s.index);
  Poly h = gcd(b, db);
  Poly bh = *divide_exact(b, h), dbh = *divide_exact(db, h);
  Poly n = e.num().derivative(s.index) * bh - e.num() * dbh;
  return Expr::fraction(std::move(n), b * bh);
}

namespace {

Expr eval_poly(const Poly& p, const std::map<Symbol, Expr>& bindings) {
  // Group terms by their bound part so each distinct bound monomial is evaluated once.
  std::map<std::vector<std::uint32_t>, std::pair<Monomial, std::vector<Poly::Term>>> groups;
  for (const auto& t : p.terms()) {
    Monomial bound, free;
    std::vector<std::uint32_t> key;
    for (std::size_t i = 0; i < t.first.size(); ++i) {
      const auto v = t.first.var_at(i), e = t.first.exp_at(i);
      if (bindings.count(Symbol{v})) {
        bound = bound * Monomial::variable(v, e);
        key.push_back(v << 16 | e);
      } else {
        free = free * Monomial::variable(v, e);
      }
    }
    auto& g = groups[key];
    g.first = bound;
    g.second.emplace_back(free, t.second);
  }
  std::map<std::pair<std::uint32_t, std::uint32_t>, Expr> powers;
  Expr result;
  for (auto& [key, g] : groups) {
    Expr value(Poly::from_terms(std::move(g.second)));
    for (std::size_t i = 0; i < g.first.size(); ++i) {
      const auto v = g.first.var_at(i), e = g.first.exp_at(i);
      auto it = powers.find({v, e});
      if (it == powers.end()) it = powers.emplace(std::make_pair(v, e), pow(bindings.at(Symbol{v}), e)).first;
      value *= it->second;
    }
    result += value;
  }
  return result;
}

}  // namespace

Expr substitute(const Expr& e, const std::map<Symbol, Expr>& bindings) {
  bool touched = false;
  for (const auto& [s, v] : bindings)
    if (e.depends_on(s)) {
      touched = true;
      break;
    }
  if (!touched) return e;
  Expr n = eval_poly(e.num(), bindings);
  if (e.is_polynomial()) return n;
  Expr d = eval_poly(e.den(), bindings);
  if (d.is_zero()) throw MathError("substitution makes a denominator vanish");
  return n / d;
}

Expr substitute(const Expr& e, const std::map<Symbol, mpq_class>& values) {
  std::map<std::uint32_t, mpq_class> by_index;
  for (const auto& [s, v] : values)
    if (e.depends_on(s)) by_index.emplace(s.index, v);
  if (by_index.empty()) return e;
  Poly n = e.num().evaluate(by_index);
  Poly d = e.den().evaluate(by_index);
  if (d.is_zero()) throw MathError("substitution makes a denominator vanish");
  return Expr::fraction(std::move(n), std::move(d));
}

ExprFactorization factor(const Expr& e) {
  if (e.is_zero()) throw MathError("factor: zero expression");
  ExprFactorization out;
  Factorization fn = factor(e.num());
  out.unit = fn.unit;
  out.factors = std::move(fn.factors);
  if (!e.is_polynomial()) {
    Factorization fd = factor(e.den());
    out.unit /= fd.unit;
    for (auto& [p, k] : fd.factors) out.factors.emplace_back(std::move(p), -k);
  }
  std::sort(out.factors.begin(), out.factors.end(), [](const auto& a, const auto& b) {
    if ((a.second > 0) != (b.second > 0)) return a.second > 0;
    return a.first.compare(b.first) < 0;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

bool needs_parens(const Poly& p) {
  if (p.size() > 1) return true;
  if (p.is_zero()) return false;
  const mpq_class& c = p.leading_coeff();
  return sgn(c) < 0 || c.get_den() != 1;
}

}  // namespace

std::string to_string(const Poly& p, const Workspace& ws) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    mpq_class a = abs(c);
    if (first) {
      if (sgn(c) < 0) os << '-';
    } else {
      os << (sgn(c) < 0 ? " - " : " + ");
    }
    first = false;
    bool wrote = false;
    if (a != 1 || m.is_one()) {
      os << a.get_str();
      wrote = true;
    }
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (wrote) os << '*';
      os << ws.name(Symbol{m.var_at(i)});
      if (m.exp_at(i) != 1) os << '^' << m.exp_at(i);
      wrote = true;
    }
  }
  return os.str();
}

std::string to_string(const Expr& e, const Workspace& ws) {
  if (e.is_polynomial()) return to_string(e.num(), ws);
  std::string n = to_string(e.num(), ws), d = to_string(e.den(), ws);
  if (needs_parens(e.num())) n = "(" + n + ")";
  if (!e.den().is_monomial() || e.den().leading_monomial().size() > 1) d = "(" + d + ")";
  return n + "/" + d;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
 public:
  Parser(std::string_view text, Workspace& ws) : text_(text), ws_(ws) {}

  Expr run() {
    Expr e = expression();
    skip();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr expression() {
    Expr e = term();
    while (true) {
      if (accept('+'))
        e += term();
      else if (accept('-'))
        e -= term();
      else
        return e;
    }
  }

  Expr term() {
    Expr e = unary();
    while (true) {
      if (accept('*')) {
        e *= unary();
      } else if (accept('/')) {
        skip();
        const std::size_t at = pos_;
        Expr d = unary();
        if (d.is_zero()) throw ParseError("division by zero", at);
        e /= d;
      } else {
        return e;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = atom();
    if (!accept('^')) return base;
    skip();
    const std::size_t at = pos_;
    Expr ex = unary();
    auto c = ex.constant();
    if (!c || c->get_den() != 1) throw ParseError("exponent must be an integer", at);
    const mpz_class& z = c->get_num();
    if (!z.fits_slong_p() || abs(z) > 0xFFFF) throw ParseError("exponent out of range", at);
    const long k = z.get_si();
    if (k < 0 && base.is_zero()) throw ParseError("division by zero", at);
    return pow(base, k);
  }

  Expr atom() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expression();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return Expr(mpq_class(mpz_class(std::string(text_.substr(start, pos_ - start)))));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      const std::string name(text_.substr(start, pos_ - start));
      if (auto s = ws_.find(name)) return Expr(*s);
      if (!ws_.auto_declare) throw ParseError("unknown identifier '" + name + "'", start);
      return Expr(ws_.declare(name, SymbolKind::parameter));
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  Workspace& ws_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text, Workspace& ws) { return Parser(text, ws).run(); }

}  // namespace hamforge
