#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace idealcalc {

/// An ordinal below w^w in Cantor normal form: a sum of terms w^exponent * coefficient
/// with strictly decreasing exponents and nonzero coefficients. The empty sum is 0.
class Ordinal {
 public:
  struct Term {
    std::uint32_t exponent = 0;
    std::uint64_t coefficient = 1;
    friend auto operator<=>(const Term&, const Term&) = default;
  };

  // Limits keep catalog domains and expansions finite and shallow. The finite
  // tail is capped only for parsed literals: block n of B[w] needs n + 1.
  static constexpr std::uint32_t kMaxExponent = 16;
  static constexpr std::uint64_t kMaxFiniteTail = 64;
  static constexpr std::uint64_t kMaxCoefficient = 1u << 20;

  Ordinal() = default;
  /// Validates CNF order and the exponent/coefficient ranges; throws OrdinalOutOfRange / ValidationError.
  explicit Ordinal(std::vector<Term> terms);
  static Ordinal finite(std::uint64_t n);
  static Ordinal omega_power(std::uint32_t exponent, std::uint64_t coefficient = 1);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_successor() const { return !terms_.empty() && terms_.back().exponent == 0; }
  bool is_limit() const { return !terms_.empty() && terms_.back().exponent > 0; }

  /// alpha - 1 for a successor ordinal.
  Ordinal predecessor() const;
  Ordinal successor() const;
  Ordinal operator+(const Ordinal& other) const;

  /// Frozen fundamental sequence for a limit alpha = beta + w^(k+1):
  /// the n-th element is beta + w^k * (n + 1).
  Ordinal fundamental(std::uint64_t n) const;

  friend auto operator<=>(const Ordinal& a, const Ordinal& b) { return a.terms_ <=> b.terms_; }
  friend bool operator==(const Ordinal&, const Ordinal&) = default;

 private:
  std::vector<Term> terms_;
};

/// `w^2*3+w+1` style; `0` for zero.
std::string to_string(const Ordinal& alpha);
/// Rejects non-CNF spellings (increasing exponents, zero coefficients).
Ordinal parse_ordinal(std::string_view text);

}  // namespace idealcalc
