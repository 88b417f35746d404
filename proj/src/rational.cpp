#include "idealcalc/rational.hpp"

#include <cctype>

#include "idealcalc/error.hpp"

namespace idealcalc {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DomainMismatch: return "DomainMismatch";
    case ErrorKind::NotClosed: return "NotClosed";
    case ErrorKind::Undecidable: return "Undecidable";
    case ErrorKind::OrdinalOutOfRange: return "OrdinalOutOfRange";
    case ErrorKind::NonpositiveEpsilon: return "NonpositiveEpsilon";
    case ErrorKind::RefinementNotClosed: return "RefinementNotClosed";
    case ErrorKind::WitnessUnavailable: return "WitnessUnavailable";
    case ErrorKind::MembershipRequired: return "MembershipRequired";
    case ErrorKind::NoMetadata: return "NoMetadata";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string to_string(const ExtRational& q) { return q.minus_infinity ? "-inf" : to_string(q.value); }

Rational parse_rational(std::string_view text) {
  auto digits = [](std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
  };
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && body.front() == '-') {
    negative = true;
    body.remove_prefix(1);
  }
  auto slash = body.find('/');
  std::string_view num = body.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
  if (!digits(num) || !digits(den)) fail(ErrorKind::ParseError, "malformed rational '" + std::string(text) + "'");
  mpz_class n{std::string(num)}, d{std::string(den)};
  if (d == 0) fail(ErrorKind::ParseError, "zero denominator in '" + std::string(text) + "'");
  Rational q(n, d);
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

Rational make_rational(std::int64_t num, std::int64_t den) {
  Rational q(static_cast<long>(num), static_cast<long>(den));
  q.canonicalize();
  return q;
}

std::optional<std::uint64_t> as_u64(const Rational& q) {
  if (q.get_den() != 1 || q < 0) return std::nullopt;
  if (!q.get_num().fits_ulong_p()) return std::nullopt;
  return static_cast<std::uint64_t>(q.get_num().get_ui());
}

}  // namespace idealcalc
