#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace idealcalc {

using Rational = mpq_class;

/// Canonical text: `p` for integers, `p/q` otherwise, with a leading `-`.
std::string to_string(const Rational& q);

/// Accepts `p`, `-p`, `p/q`; throws ParseError on anything else or q == 0.
Rational parse_rational(std::string_view text);

Rational make_rational(std::int64_t num, std::int64_t den = 1);

inline Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

/// Integer value of q when q is a nonnegative integer that fits in 64 bits.
std::optional<std::uint64_t> as_u64(const Rational& q);

/// Extended value used for I-limsup: either a rational or minus infinity.
struct ExtRational {
  bool minus_infinity = true;
  Rational value;

  static ExtRational neg_inf() { return {}; }
  static ExtRational of(Rational v) { return {false, std::move(v)}; }

  friend bool operator==(const ExtRational& a, const ExtRational& b) {
    if (a.minus_infinity || b.minus_infinity) return a.minus_infinity == b.minus_infinity;
    return a.value == b.value;
  }
  friend bool operator<=(const ExtRational& a, const ExtRational& b) {
    if (a.minus_infinity) return true;
    if (b.minus_infinity) return false;
    return a.value <= b.value;
  }
};

std::string to_string(const ExtRational& q);

}  // namespace idealcalc
