#include "gfodd/rational.hpp"

#include <cctype>

#include "gfodd/error.hpp"

namespace gfodd {

const char* to_string(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::Parse: return "parse";
    case ErrorCategory::Model: return "model";
    case ErrorCategory::Form: return "form";
    case ErrorCategory::Resource: return "resource";
    case ErrorCategory::Argument: return "argument";
    case ErrorCategory::Internal: return "internal";
  }
  return "internal";
}

Rational parse_rational(std::string_view text) {
  auto bad = [&] { return ArgumentError("not a rational number: '" + std::string(text) + "'"); };
  if (text.empty()) throw bad();
  std::string s(text);
  std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (start == s.size()) throw bad();
  if (auto dot = s.find('.'); dot != std::string::npos) {
    std::string digits;
    for (std::size_t i = start; i < s.size(); ++i) {
      if (i == dot) continue;
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) throw bad();
      digits.push_back(s[i]);
    }
    if (digits.empty()) throw bad();
    mpz_class num(digits, 10);
    mpz_class den = 1;
    for (std::size_t i = dot + 1; i < s.size(); ++i) den *= 10;
    Rational r(num, den);
    r.canonicalize();
    if (s[0] == '-') r = -r;
    return r;
  }
  auto slash = s.find('/');
  for (std::size_t i = start; i < s.size(); ++i) {
    if (i == slash) continue;
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) throw bad();
  }
  if (slash == start || slash + 1 == s.size()) throw bad();
  Rational r;
  if (r.set_str(s[0] == '+' ? s.substr(1) : s, 10) != 0) throw bad();
  if (r.get_den() == 0) throw bad();
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) { return r.get_str(10); }

}  // namespace gfodd
