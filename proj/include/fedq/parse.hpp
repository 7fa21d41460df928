#pragma once

#include <stdexcept>
#include <string>

#include "fedq/hpoly.hpp"

namespace fedq {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t pos, const std::string& what);
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

// Infix rational expression over z1..zn, zb1..zbn, h and i with + - * / ^ and
// parentheses. Literals are integers or decimals. h may only divide through a
// single power of h.
HPoly parse_expression(const std::string& text, int n);

}  // namespace fedq
