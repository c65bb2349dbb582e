// Recursive-descent parser for the operator mini-language.
//
//   input  := matrix | expr
//   matrix := '[' '[' expr ',' expr ']' ',' '[' expr ',' expr ']' ']'
//   expr   := term (('+' | '-') term)*
//   term   := ('+' | '-')? factor (('*' | '/') factor)*
//   factor := number | 'i' | ('x' | 'y' | 'dx' | 'dy') ('^' integer)? | '(' expr ')'

#include <cctype>

#include "hypolab/error.hpp"
#include "hypolab/opalg.hpp"

namespace hypolab::opalg {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  DiffOpMatrix parse() {
    skip_ws();
    DiffOpMatrix out;
    if (peek() == '[') {
      expect('[');
      for (int row = 0; row < 2; ++row) {
        if (row == 1) expect(',');
        expect('[');
        out(row, 0) = expr();
        expect(',');
        out(row, 1) = expr();
        expect(']');
      }
      expect(']');
    } else {
      out = DiffOpMatrix::from_scalar(expr());
    }
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }
  [[noreturn]] void fail_at(const std::string& msg, std::size_t p) const { throw ParseError(msg, p); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  void expect(char c) {
    if (peek() != c) {
      if (pos_ >= text_.size()) fail(std::string("expected '") + c + "' but input ended");
      fail(std::string("expected '") + c + "'");
    }
    ++pos_;
  }

  DiffOp expr() {
    DiffOp acc = term();
    for (;;) {
      char c = peek();
      if (c == '+') {
        ++pos_;
        acc += term();
      } else if (c == '-') {
        ++pos_;
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  DiffOp term() {
    bool negate = false;
    char c = peek();
    if (c == '+' || c == '-') {
      negate = c == '-';
      ++pos_;
    }
    DiffOp acc = factor();
    for (;;) {
      c = peek();
      if (c == '*') {
        ++pos_;
        std::size_t at = pos_;
        DiffOp rhs = factor();
        bool lhs_has_derivs = acc.order() > 0;
        if (lhs_has_derivs && !rhs.has_constant_coefficients())
          fail_at("coefficients must appear left of derivatives", at);
        acc = compose(acc, rhs);
      } else if (c == '/') {
        ++pos_;
        std::size_t at = pos_;
        DiffOp rhs = factor();
        if (rhs.order() > 0 || !rhs.coeff(0, 0).is_constant()) fail_at("non-polynomial coefficient", at);
        CRational d = rhs.coeff(0, 0).coeff(0, 0);
        if (d.is_zero()) fail_at("division by zero", at);
        acc = PolyCoeff(CRational(1) / d) * acc;
      } else {
        break;
      }
    }
    return negate ? -acc : acc;
  }

  int exponent() {
    if (peek() != '^') return 1;
    ++pos_;
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("'^' expects a non-negative integer exponent");
    if (pos_ - start > 3) fail_at("exponent too large", start);
    return std::stoi(std::string(text_.substr(start, pos_ - start)));
  }

  void reject_exponent() {
    if (peek() == '^') fail("'^' is only allowed on dx, dy, x, y");
  }

  DiffOp factor() {
    char c = peek();
    std::size_t start = pos_;
    if (c == '(') {
      ++pos_;
      DiffOp inner = expr();
      expect(')');
      reject_exponent();
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      DiffOp n = DiffOp::term(PolyCoeff(number()), 0, 0);
      reject_exponent();
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
      std::string id(text_.substr(start, pos_ - start));
      if (id == "i") {
        reject_exponent();
        return DiffOp::term(PolyCoeff(CRational::i()), 0, 0);
      }
      if (id == "x") return DiffOp::term(PolyCoeff::monomial(1, exponent(), 0), 0, 0);
      if (id == "y") return DiffOp::term(PolyCoeff::monomial(1, 0, exponent()), 0, 0);
      if (id == "dx") return DiffOp::term(PolyCoeff(1), exponent(), 0);
      if (id == "dy") return DiffOp::term(PolyCoeff(1), 0, exponent());
      fail_at("unknown identifier '" + id + "'", start);
    }
    if (c == '\0') fail("unexpected end of input");
    fail(std::string("unexpected character '") + c + "'");
  }

  CRational number() {
    std::size_t start = pos_;
    std::int64_t num = 0;
    std::int64_t den = 1;
    int digits = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      num = num * 10 + (text_[pos_++] - '0');
      if (++digits > 17) fail_at("numeric literal too long", start);
    }
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        num = num * 10 + (text_[pos_++] - '0');
        den *= 10;
        if (++digits > 17) fail_at("numeric literal too long", start);
      }
    }
    if (digits == 0) fail_at("malformed number", start);
    return CRational(Rational(num, den));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

DiffOpMatrix parse_operator(std::string_view text) { return Parser(text).parse(); }

DiffOp parse_scalar(std::string_view text) {
  DiffOpMatrix m = parse_operator(text);
  if (!m.scalar) throw ParseError("expected a scalar operator, got a matrix", 0);
  return m(0, 0);
}

}  // namespace hypolab::opalg
