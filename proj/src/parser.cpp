#include "cbf/parser.hpp"

#include <cctype>
#include <cstdlib>

namespace cbf {

namespace {

class Parser {
 public:
  Parser(std::string_view src, const SymbolTable& table)
      : src_(src), table_(table) {}

  Expr run() {
    Expr e = parse_sum();
    skip_ws();
    if (pos_ != src_.size())
      throw ParseError("unexpected trailing input", pos_);
    return e;
  }

 private:
  std::string_view src_;
  const SymbolTable& table_;
  size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < src_.size()) {
      unsigned char c = src_[pos_];
      if (c >= 0x80) throw ParseError("non-ASCII byte in expression", pos_);
      if (!std::isspace(c)) break;
      ++pos_;
    }
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  Expr parse_sum() {
    Expr e = parse_term();
    while (true) {
      if (eat('+')) {
        e = e + parse_term();
      } else if (eat('-')) {
        e = e - parse_term();
      } else {
        return e;
      }
    }
  }

  Expr parse_term() {
    Expr e = parse_unary();
    while (true) {
      char c = peek();
      if (c == '*') {
        ++pos_;
        e = e * parse_unary();
      } else if (c == '/') {
        throw ParseError("division is not part of the grammar", pos_);
      } else {
        return e;
      }
    }
  }

  Expr parse_unary() {
    if (eat('-')) return -parse_unary();
    return parse_postfix();
  }

  Expr parse_postfix() {
    Expr e = parse_atom();
    if (eat('^')) {
      e = e.pow(parse_exponent());
    }
    return e;
  }

  int parse_exponent() {
    skip_ws();
    size_t start = pos_;
    if (pos_ >= src_.size() || !std::isdigit((unsigned char)src_[pos_]))
      throw ParseError("exponent must be a non-negative integer", start);
    long v = 0;
    while (pos_ < src_.size() && std::isdigit((unsigned char)src_[pos_])) {
      v = v * 10 + (src_[pos_] - '0');
      if (v > 1000) throw ParseError("exponent too large", start);
      ++pos_;
    }
    if (pos_ < src_.size() &&
        (src_[pos_] == '.' || src_[pos_] == 'e' || src_[pos_] == 'E'))
      throw ParseError("exponent must be a non-negative integer", start);
    return static_cast<int>(v);
  }

  Expr parse_atom() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError("unexpected end of input", pos_);
    char c = src_[pos_];
    if (std::isdigit((unsigned char)c) || c == '.') return parse_number();
    if (std::isalpha((unsigned char)c) || c == '_') return parse_ident();
    if (c == '(') {
      ++pos_;
      Expr e = parse_sum();
      if (!eat(')')) throw ParseError("expected ')'", pos_);
      return e;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  Expr parse_number() {
    size_t start = pos_;
    const char* begin = src_.data() + pos_;
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin) throw ParseError("malformed number", start);
    // strtod accepts an optional sign and hex; restrict to plain literals
    size_t len = static_cast<size_t>(end - begin);
    for (size_t i = 0; i < len; ++i) {
      char ch = begin[i];
      if (!(std::isdigit((unsigned char)ch) || ch == '.' || ch == 'e' ||
            ch == 'E' || ch == '+' || ch == '-'))
        throw ParseError("malformed number", start + i);
    }
    pos_ += len;
    return Expr::constant(v);
  }

  Expr parse_ident() {
    size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum((unsigned char)src_[pos_]) || src_[pos_] == '_'))
      ++pos_;
    std::string name(src_.substr(start, pos_ - start));
    if (peek() == '(') {
      ++pos_;
      Builtin fn;
      if (name == "sin") fn = Builtin::Sin;
      else if (name == "cos") fn = Builtin::Cos;
      else if (name == "exp") fn = Builtin::Exp;
      else throw ParseError("unknown function '" + name + "'", start);
      Expr arg = parse_sum();
      if (!eat(')')) throw ParseError("expected ')'", pos_);
      return Expr::call(fn, arg);
    }
    int idx = table_.find(name);
    if (idx < 0) throw ParseError("unknown identifier '" + name + "'", start);
    return Expr::var(idx);
  }
};

}  // namespace

Expr parse_expression(std::string_view src, const SymbolTable& table) {
  return Parser(src, table).run();
}

}  // namespace cbf
