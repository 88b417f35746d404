#include "idealcalc/ordinal.hpp"

#include <cctype>

#include "idealcalc/error.hpp"

namespace idealcalc {

Ordinal::Ordinal(std::vector<Term> terms) : terms_(std::move(terms)) {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const Term& t = terms_[i];
    if (t.coefficient == 0) fail(ErrorKind::ValidationError, "zero coefficient in ordinal");
    if (i > 0 && t.exponent >= terms_[i - 1].exponent)
      fail(ErrorKind::ValidationError, "ordinal terms must have strictly decreasing exponents");
    if (t.exponent > kMaxExponent) fail(ErrorKind::OrdinalOutOfRange, "exponent above w^16");
    if (t.coefficient > kMaxCoefficient) fail(ErrorKind::OrdinalOutOfRange, "coefficient too large");
  }
}

Ordinal Ordinal::finite(std::uint64_t n) {
  if (n == 0) return {};
  return Ordinal({Term{0, n}});
}

Ordinal Ordinal::omega_power(std::uint32_t exponent, std::uint64_t coefficient) {
  return Ordinal({Term{exponent, coefficient}});
}

Ordinal Ordinal::predecessor() const {
  if (!is_successor()) fail(ErrorKind::ValidationError, "predecessor of a non-successor ordinal");
  std::vector<Term> t = terms_;
  if (--t.back().coefficient == 0) t.pop_back();
  return Ordinal(std::move(t));
}

Ordinal Ordinal::successor() const { return *this + finite(1); }

Ordinal Ordinal::operator+(const Ordinal& other) const {
  if (other.is_zero()) return *this;
  const std::uint32_t lead = other.terms_.front().exponent;
  std::vector<Term> out;
  for (const Term& t : terms_) {
    if (t.exponent > lead) out.push_back(t);
    else if (t.exponent == lead) out.push_back({lead, t.coefficient + other.terms_.front().coefficient});
  }
  if (out.empty() || out.back().exponent != lead) out.push_back(other.terms_.front());
  for (std::size_t i = 1; i < other.terms_.size(); ++i) out.push_back(other.terms_[i]);
  return Ordinal(std::move(out));
}

Ordinal Ordinal::fundamental(std::uint64_t n) const {
  if (!is_limit()) fail(ErrorKind::ValidationError, "fundamental sequence of a non-limit ordinal");
  std::vector<Term> base = terms_;
  const std::uint32_t k = base.back().exponent - 1;
  if (--base.back().coefficient == 0) base.pop_back();
  return Ordinal(std::move(base)) + Ordinal({Term{k, n + 1}});
}

std::string to_string(const Ordinal& alpha) {
  if (alpha.is_zero()) return "0";
  std::string out;
  for (const auto& t : alpha.terms()) {
    if (!out.empty()) out += "+";
    if (t.exponent == 0) {
      out += std::to_string(t.coefficient);
      continue;
    }
    out += "w";
    if (t.exponent > 1) out += "^" + std::to_string(t.exponent);
    if (t.coefficient > 1) out += "*" + std::to_string(t.coefficient);
  }
  return out;
}

namespace {

struct OrdinalScanner {
  std::string_view s;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  std::uint64_t number() {
    skip_ws();
    std::size_t start = pos;
    std::uint64_t v = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      if (v > (std::uint64_t{1} << 40)) fail(ErrorKind::OrdinalOutOfRange, "ordinal literal too large");
      v = v * 10 + static_cast<std::uint64_t>(s[pos++] - '0');
    }
    if (start == pos)
      fail(ErrorKind::ParseError, "expected a number in ordinal at column " + std::to_string(pos + 1));
    return v;
  }
};

}  // namespace

Ordinal parse_ordinal(std::string_view text) {
  OrdinalScanner sc{text};
  std::vector<Ordinal::Term> terms;
  do {
    Ordinal::Term t;
    if (sc.eat('w')) {
      t.exponent = 1;
      if (sc.eat('^')) {
        std::uint64_t e = sc.number();
        if (e > Ordinal::kMaxExponent) fail(ErrorKind::OrdinalOutOfRange, "exponent above w^16");
        t.exponent = static_cast<std::uint32_t>(e);
      }
      if (sc.eat('*')) t.coefficient = sc.number();
    } else {
      t.exponent = 0;
      t.coefficient = sc.number();
      if (t.coefficient == 0) {
        if (terms.empty()) {
          sc.skip_ws();
          if (sc.pos == text.size()) return {};
        }
        fail(ErrorKind::ParseError, "zero term in ordinal literal");
      }
    }
    if (t.exponent == 0 && t.coefficient == 0) fail(ErrorKind::ParseError, "zero term in ordinal literal");
    if (!terms.empty() && t.exponent >= terms.back().exponent)
      fail(ErrorKind::ParseError, "ordinal literal not in Cantor normal form: '" + std::string(text) + "'");
    terms.push_back(t);
  } while (sc.eat('+'));
  sc.skip_ws();
  if (sc.pos != text.size())
    fail(ErrorKind::ParseError, "unexpected text in ordinal at column " + std::to_string(sc.pos + 1));
  if (terms.back().exponent == 0 && terms.back().coefficient > Ordinal::kMaxFiniteTail)
    fail(ErrorKind::OrdinalOutOfRange, "finite part above 64 is not supported by the catalog");
  return Ordinal(std::move(terms));
}

}  // namespace idealcalc
