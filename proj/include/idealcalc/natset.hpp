#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace idealcalc {

/// An eventually periodic subset of N, stored as a periodic pattern
/// (`cycle[n mod period]`) toggled on a finite sorted exception list.
///
/// Every set built from finite sets, cofinite sets and arithmetic progressions
/// by union, intersection and difference has this form, so the class is closed
/// under all Boolean operations and affine preimages. The period is kept
/// minimal, which makes the representation canonical: structural equality is
/// extensional equality.
class NatSet {
 public:
  NatSet() = default;  // empty

  static NatSet empty() { return {}; }
  static NatSet all() { return cofinite({}); }
  static NatSet finite(std::vector<std::uint64_t> members);
  static NatSet cofinite(std::vector<std::uint64_t> excluded);
  /// {offset + stride*n : n in N}, stride >= 1.
  static NatSet progression(std::uint64_t offset, std::uint64_t stride);
  static NatSet singleton(std::uint64_t n) { return finite({n}); }
  /// [lo, hi) as a finite set.
  static NatSet range(std::uint64_t lo, std::uint64_t hi);

  bool contains(std::uint64_t n) const;
  bool is_empty() const { return is_finite() && exceptions_.empty(); }
  bool is_finite() const;
  bool is_cofinite() const;
  /// Members of a finite set (ascending). Precondition: is_finite().
  const std::vector<std::uint64_t>& finite_members() const;
  /// Excluded points of a cofinite set. Precondition: is_cofinite().
  const std::vector<std::uint64_t>& excluded() const { return exceptions_; }
  std::optional<std::uint64_t> min() const;
  /// Past this bound membership is purely periodic.
  std::uint64_t threshold() const { return exceptions_.empty() ? 0 : exceptions_.back() + 1; }
  std::uint64_t period() const { return period_; }

  NatSet unite(const NatSet& other) const;
  NatSet intersect(const NatSet& other) const;
  NatSet minus(const NatSet& other) const;
  NatSet complement() const;
  bool subset_of(const NatSet& other) const { return minus(other).is_empty(); }
  bool disjoint_from(const NatSet& other) const { return intersect(other).is_empty(); }
  /// {n : slope*n + offset in *this}.
  NatSet affine_preimage(std::uint64_t slope, std::uint64_t offset) const;

  /// Grammar decomposition: a finite part plus arithmetic progressions, or a
  /// single cofinite set.
  struct Parts {
    std::vector<std::uint64_t> finite;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> progressions;  // (offset, stride)
    std::optional<std::vector<std::uint64_t>> cofinite;                 // excluded points
  };
  Parts parts() const;

  friend bool operator==(const NatSet&, const NatSet&) = default;
  friend std::strong_ordering operator<=>(const NatSet& a, const NatSet& b);

 private:
  bool pattern(std::uint64_t n) const { return cycle_[n % period_] != 0; }
  void canonicalize();
  template <class Op>
  NatSet combine(const NatSet& other, Op op) const;

  std::uint64_t period_ = 1;
  std::vector<char> cycle_ = {0};
  std::vector<std::uint64_t> exceptions_;
};

/// `fin{1,2}`, `cofin{}`, `ap(0,2)` or `U[...]`.
std::string to_string(const NatSet& s);

}  // namespace idealcalc
