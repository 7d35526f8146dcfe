#include "oscint/parse.hpp"

#include <cctype>
#include <map>
#include <string>
#include <vector>

#include "oscint/error.hpp"

namespace oscint {

namespace {

enum class Tok { kNum, kVar, kPlus, kMinus, kStar, kSlash, kCaret, kLParen, kRParen, kEnd };

struct Token {
  Tok kind;
  std::size_t pos;
  std::string text;  // number literal
  bool is_x = false;
  int index = 0;  // 0-based variable index
};

// Dense-exponent polynomial used while parsing; need not be homogeneous.
using Exps = std::vector<int>;
using Poly = std::map<Exps, Rational>;

class Parser {
 public:
  Parser(std::string_view src) : src_(src) { tokenize(); }

  const std::vector<Token>& tokens() const { return toks_; }

  Poly parse(int nvars, int nx) {
    nvars_ = nvars;
    nx_ = nx;
    pos_ = 0;
    Poly p = expr();
    if (peek().kind != Tok::kEnd) fail("unexpected token", peek().pos);
    return p;
  }

  [[noreturn]] void fail(const std::string& msg, std::size_t at) const {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < at && i < src_.size(); ++i) {
      if (src_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(msg, line, col);
  }

 private:
  void tokenize() {
    std::size_t i = 0;
    while (i < src_.size()) {
      char c = src_[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
        continue;
      }
      Token t{Tok::kEnd, i, {}};
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        std::size_t j = i;
        while (j < src_.size() &&
               (std::isdigit(static_cast<unsigned char>(src_[j])) || src_[j] == '.'))
          ++j;
        t.kind = Tok::kNum;
        t.text = std::string(src_.substr(i, j - i));
        i = j;
      } else if (c == 'x' || c == 'z') {
        std::size_t j = i + 1;
        while (j < src_.size() && std::isdigit(static_cast<unsigned char>(src_[j]))) ++j;
        t.kind = Tok::kVar;
        t.is_x = c == 'x';
        if (j == i + 1) {
          t.index = 0;
        } else {
          int idx = std::stoi(std::string(src_.substr(i + 1, j - i - 1)));
          if (idx < 1) fail("variable indices start at 1", i);
          t.index = idx - 1;
        }
        if (j < src_.size() && std::isalpha(static_cast<unsigned char>(src_[j])))
          fail("unknown identifier", i);
        i = j;
      } else {
        switch (c) {
          case '+': t.kind = Tok::kPlus; break;
          case '-': t.kind = Tok::kMinus; break;
          case '*': t.kind = Tok::kStar; break;
          case '/': t.kind = Tok::kSlash; break;
          case '^': t.kind = Tok::kCaret; break;
          case '(': t.kind = Tok::kLParen; break;
          case ')': t.kind = Tok::kRParen; break;
          default:
            fail(std::string("unexpected character '") + c + "'", i);
        }
        ++i;
      }
      toks_.push_back(std::move(t));
    }
    toks_.push_back({Tok::kEnd, src_.size(), {}});
  }

  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }

  Poly constant(const Rational& c) const {
    Poly p;
    if (c != 0) p[Exps(nvars_, 0)] = c;
    return p;
  }

  static void add_into(Poly& a, const Poly& b, int sgn) {
    for (const auto& [e, c] : b) {
      Rational& slot = a[e];
      slot += sgn > 0 ? c : Rational(-c);
      if (slot == 0) a.erase(e);
    }
  }

  static Poly mul(const Poly& a, const Poly& b) {
    Poly out;
    for (const auto& [ea, ca] : a)
      for (const auto& [eb, cb] : b) {
        Exps e = ea;
        for (std::size_t k = 0; k < e.size(); ++k) e[k] += eb[k];
        Rational& slot = out[e];
        slot += ca * cb;
        if (slot == 0) out.erase(e);
      }
    return out;
  }

  static bool is_constant(const Poly& p) {
    for (const auto& [e, c] : p)
      for (int v : e)
        if (v) return false;
    return true;
  }

  Poly expr() {
    Poly acc = term();
    while (peek().kind == Tok::kPlus || peek().kind == Tok::kMinus) {
      int sgn = next().kind == Tok::kPlus ? 1 : -1;
      add_into(acc, term(), sgn);
    }
    return acc;
  }

  Poly term() {
    Poly acc = unary();
    while (peek().kind == Tok::kStar || peek().kind == Tok::kSlash) {
      const Token& op = next();
      std::size_t at = peek().pos;
      Poly rhs = unary();
      if (op.kind == Tok::kStar) {
        acc = mul(acc, rhs);
      } else {
        if (!is_constant(rhs)) fail("division by a non-constant", at);
        if (rhs.empty()) fail("division by zero", at);
        Rational inv = 1 / rhs.begin()->second;
        for (auto& [e, c] : acc) c *= inv;
      }
    }
    return acc;
  }

  Poly unary() {
    if (peek().kind == Tok::kMinus) {
      next();
      Poly p = unary();
      for (auto& [e, c] : p) c = -c;
      return p;
    }
    if (peek().kind == Tok::kPlus) {
      next();
      return unary();
    }
    return power();
  }

  Poly power() {
    Poly base = primary();
    if (peek().kind != Tok::kCaret) return base;
    next();
    const Token& t = next();
    if (t.kind != Tok::kNum || t.text.find('.') != std::string::npos)
      fail("exponent must be a nonnegative integer", t.pos);
    if (t.text.size() > 3) fail("exponent too large", t.pos);
    int e = std::stoi(t.text);
    Poly out = constant(1);
    for (int k = 0; k < e; ++k) out = mul(out, base);
    return out;
  }

  Poly primary() {
    const Token& t = next();
    switch (t.kind) {
      case Tok::kNum: {
        Rational v;
        try {
          v = parse_rational(t.text);
        } catch (const ParseError&) {
          fail("malformed number '" + t.text + "'", t.pos);
        }
        return constant(v);
      }
      case Tok::kVar: {
        Exps e(nvars_, 0);
        e[t.is_x ? t.index : nx_ + t.index] = 1;
        return Poly{{e, Rational(1)}};
      }
      case Tok::kLParen: {
        Poly p = expr();
        if (peek().kind != Tok::kRParen) fail("expected ')'", peek().pos);
        next();
        return p;
      }
      case Tok::kEnd:
        fail("unexpected end of input", t.pos);
      default:
        fail("unexpected token", t.pos);
    }
  }

  std::string_view src_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int nvars_ = 0;
  int nx_ = 0;
};

}  // namespace

HomPoly parse_hom_poly(std::string_view text, int nx, int nz, int degree) {
  Parser parser(text);
  int max_x = 0, max_z = 0;
  for (const auto& t : parser.tokens()) {
    if (t.kind != Tok::kVar) continue;
    int& mx = t.is_x ? max_x : max_z;
    mx = std::max(mx, t.index + 1);
    int limit = t.is_x ? nx : nz;
    if (limit >= 0 && t.index >= limit)
      parser.fail(std::string("variable ") + (t.is_x ? "x" : "z") +
                      std::to_string(t.index + 1) + " exceeds the declared dimension",
                  t.pos);
  }
  if (nx < 0) nx = max_x;
  if (nz < 0) nz = max_z;

  Poly p = parser.parse(nx + nz, nx);
  int deg = degree;
  for (const auto& [e, c] : p) {
    int d = 0;
    for (int v : e) d += v;
    if (deg < 0) deg = d;
    if (d != deg)
      parser.fail("expression is not homogeneous (found degrees " +
                      std::to_string(deg) + " and " + std::to_string(d) + ")",
                  0);
  }
  if (deg < 0) deg = 0;

  HomPoly out(nx, nz, deg);
  for (const auto& [e, c] : p) {
    MultiIndex mi{Exps(e.begin(), e.begin() + nx), Exps(e.begin() + nx, e.end())};
    out.add_term(mi, c);
  }
  return out;
}

PhasePoly parse_phase(std::string_view text, int nx, int nz) {
  return PhasePoly(parse_hom_poly(text, nx, nz));
}

}  // namespace oscint
