#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "idealcalc/ordinal.hpp"
#include "idealcalc/rational.hpp"

namespace idealcalc {

/// Countable index domains. `Prod(D)` is N x D with the column partition
/// K_n = {n} x D; `Blocks(lambda)` is the disjoint sum over n of the catalog
/// domains of the frozen fundamental sequence of the limit lambda.
class Domain {
 public:
  enum class Kind { Nat, Rat, Prod, Blocks };

  static Domain nat();
  static Domain rat();
  static Domain prod(const Domain& inner);
  static Domain blocks(const Ordinal& limit);

  Kind kind() const;
  bool is_nat() const { return kind() == Kind::Nat; }
  bool is_rat() const { return kind() == Kind::Rat; }
  bool is_prod() const { return kind() == Kind::Prod; }
  bool is_blocks() const { return kind() == Kind::Blocks; }

  /// Inner domain D of Prod(D).
  const Domain& inner() const;
  /// Limit ordinal of a Blocks domain.
  const Ordinal& limit() const;
  /// Domain of block n in a Blocks domain; also accepts Prod (returns inner()).
  Domain block(std::uint64_t n) const;

  std::size_t depth() const;

  friend bool operator==(const Domain& a, const Domain& b);
  friend bool operator!=(const Domain& a, const Domain& b) { return !(a == b); }

 private:
  struct Node;
  explicit Domain(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// `N`, `Q`, `N*D`, `B[w]`.
std::string to_string(const Domain& d);

/// Domain carrying the catalog ideals P_alpha / Q_alpha:
/// D(0) = N, D(beta+1) = N x D(beta), D(lambda) = Blocks(lambda).
Domain catalog_domain(const Ordinal& alpha);

/// A point of some domain. Nat: `index`; Rat: `value`; Prod/Blocks: `index`
/// is the column/block and `inner` holds exactly one point of the inner domain.
struct Point {
  std::uint64_t index = 0;
  Rational value;
  std::vector<Point> inner;

  static Point nat(std::uint64_t n) { return Point{n, {}, {}}; }
  static Point rat(Rational q) { return Point{0, std::move(q), {}}; }
  static Point pair(std::uint64_t n, Point p) {
    Point out{n, {}, {}};
    out.inner.push_back(std::move(p));  // an initializer list would deep-copy p
    return out;
  }

  const Point& second() const { return inner.front(); }

  friend bool operator==(const Point& a, const Point& b) {
    return a.index == b.index && a.value == b.value && a.inner == b.inner;
  }
};

std::string to_string(const Point& p, const Domain& d);
/// Throws DomainMismatch when the point's shape does not fit the domain.
void check_point(const Point& p, const Domain& d);

/// Cantor pairing pi(n, m) = (n+m)(n+m+1)/2 + m; nullopt on 64-bit overflow.
std::optional<std::uint64_t> cantor_pair(std::uint64_t n, std::uint64_t m);
std::pair<std::uint64_t, std::uint64_t> cantor_unpair(std::uint64_t z);

/// The fixed total enumeration of a domain: identity on N, Cantor-pairing
/// order on Prod and Blocks, and 0, cw(1), -cw(1), cw(2), -cw(2), ... on Q where
/// cw is the Calkin-Wilf sequence.
Point point_at(const Domain& d, std::uint64_t index);
/// Inverse of point_at; nullopt when the index does not fit in 64 bits.
std::optional<std::uint64_t> index_of(const Domain& d, const Point& p);

}  // namespace idealcalc
