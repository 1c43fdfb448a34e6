#include <cctype>
#include <cstdlib>

#include "soi/errors.hpp"
#include "soi/symbolic_net.hpp"

namespace soi {
namespace {

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  NetExpr parse() {
    skip();
    if (pos_ >= s_.size()) throw ParseError("empty expression", pos_);
    NetExpr e = expr();
    skip();
    if (pos_ < s_.size())
      throw ParseError(std::string("unexpected '") + s_[pos_] + "'", pos_);
    return e;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= s_.size())
        throw ParseError(std::string("expected '") + c + "' but input ended", pos_);
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
  }

  bool peek_word(const char* w) {
    skip();
    const std::string word(w);
    return s_.compare(pos_, word.size(), word) == 0;
  }

  NetExpr expr() {
    NetExpr e = term();
    for (;;) {
      if (accept('+'))
        e = NetExpr::add(std::move(e), term());
      else if (accept('-'))
        e = NetExpr::add(std::move(e), NetExpr::neg(term()));
      else
        return e;
    }
  }

  NetExpr term() {
    NetExpr e = factor();
    while (accept('*')) e = NetExpr::mul(std::move(e), factor());
    return e;
  }

  NetExpr factor() {
    skip();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = s_[pos_];
    if (c == '-') {
      ++pos_;
      return NetExpr::neg(factor());
    }
    if (c == '(') {
      ++pos_;
      NetExpr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
      return NetExpr::leaf(SymbolicNet::constant(number()));
    if (peek_word("abs")) {
      pos_ += 3;
      expect('(');
      NetExpr e = expr();
      expect(')');
      return NetExpr::abs(std::move(e));
    }
    if (peek_word("max")) {
      pos_ += 3;
      expect('(');
      NetExpr a = expr();
      expect(',');
      NetExpr b = expr();
      expect(')');
      return NetExpr::max(std::move(a), std::move(b));
    }
    if (c == 'u') {
      ++pos_;
      Rational p = 1;
      if (accept('^')) p = rational();
      return NetExpr::leaf(SymbolicNet::monomial(1.0, p, 0));
    }
    if (c == 'L') {
      ++pos_;
      int k = 1;
      if (accept('^')) {
        const Rational r = rational();
        if (r.denominator() != 1)
          throw UnsupportedError("log power must be an integer, got " + to_string(r));
        k = static_cast<int>(r.numerator());
      }
      return NetExpr::leaf(SymbolicNet::monomial(1.0, 0, k));
    }
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  double number() {
    skip();
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) throw ParseError("expected a number", pos_);
    pos_ += static_cast<std::size_t>(end - begin);
    return v;
  }

  std::int64_t integer() {
    skip();
    const std::size_t start = pos_;
    bool negative = false;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) {
      negative = s_[pos_] == '-';
      ++pos_;
    }
    skip();
    const std::size_t digits = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == digits) throw ParseError("expected an integer", start);
    if (pos_ < s_.size() && (s_[pos_] == '.' || s_[pos_] == 'e' || s_[pos_] == 'E'))
      throw UnsupportedError("non-rational exponent at position " + std::to_string(start));
    const std::int64_t v = std::stoll(s_.substr(digits, pos_ - digits));
    return negative ? -v : v;
  }

  // integer ['/' integer], optionally parenthesized.
  Rational rational() {
    const bool paren = accept('(');
    const std::size_t start = pos_;
    const std::int64_t num = integer();
    std::int64_t den = 1;
    if (accept('/')) den = integer();
    if (den == 0) throw ParseError("zero denominator in exponent", start);
    if (paren) expect(')');
    return Rational(num, den);
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

NetExpr parse_net_expr(const std::string& text) { return Parser(text).parse(); }

SymbolicNet parse_net(const std::string& text) { return parse_net_expr(text).normalize(); }

}  // namespace soi
