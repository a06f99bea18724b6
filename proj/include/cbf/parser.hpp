#pragma once

#include <string_view>

#include "cbf/expr.hpp"

namespace cbf {

struct ParseError : Error {
  ParseError(const std::string& msg, size_t offset)
      : Error(msg + " (at byte " + std::to_string(offset) + ")"),
        offset(offset) {}
  size_t offset;
};

/// Parse an infix expression over the table's variables.
/// Operators: + - * ^ with parentheses and calls sin(..), cos(..), exp(..).
/// `^` takes a non-negative integer literal exponent. No implicit
/// multiplication, no division, ASCII only.
Expr parse_expression(std::string_view src, const SymbolTable& table);

}  // namespace cbf
