#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "idealcalc/domain.hpp"
#include "idealcalc/natset.hpp"
#include "idealcalc/rational.hpp"

namespace idealcalc {

struct Cell;
struct Graph;
struct MonoSeq;
struct OrdPart;

/// A subset of a countable domain in normal form.
///
/// Nat: an eventually periodic set. Prod(D): disjoint cells (column region x
/// trace) plus graphs {(n, a*n+b) : n in S} (only when D = N). Rat: finite
/// points plus monotone sequences. Blocks: finitely many nonempty block
/// patches. Values are immutable and share structure.
class SetExpr {
 public:
  /// The empty set over N.
  SetExpr();

  static SetExpr empty(const Domain& d);
  static SetExpr nat(NatSet s);
  /// Whole domain when expressible (N and products of expressible domains).
  static std::optional<SetExpr> universe(const Domain& d);
  /// {(n, t) : n in s, t in t}; the domain is Prod(t.domain()).
  static SetExpr cols(const NatSet& s, const SetExpr& t);
  static SetExpr cols(const Domain& prod, const NatSet& s, const SetExpr& t);
  /// {(n, a*n+b) : n in s} over N x N.
  static SetExpr graph(std::uint64_t slope, std::uint64_t offset, const NatSet& s);
  /// Finitely many columns/blocks with given traces (Prod or Blocks domain).
  static SetExpr patch(const Domain& d, const std::vector<std::pair<std::uint64_t, SetExpr>>& parts);
  static SetExpr from_points(const Domain& d, const std::vector<Point>& points);
  static SetExpr rat_points(std::vector<Rational> points);
  static SetExpr mono(const MonoSeq& seq);
  /// Ordered sum of sets in pairwise disjoint open intervals (lo, hi).
  static SetExpr ordsum(const std::vector<OrdPart>& parts);
  static SetExpr union_of(const Domain& d, const std::vector<SetExpr>& parts);

  const Domain& domain() const;

  const NatSet& nat_set() const;
  const std::vector<Cell>& cells() const;
  const std::vector<Graph>& graphs() const;
  const std::vector<Rational>& points() const;
  const std::vector<MonoSeq>& sequences() const;
  const std::vector<std::pair<std::uint64_t, SetExpr>>& patches() const;

  struct Body;

 private:
  explicit SetExpr(std::shared_ptr<const Body> body) : body_(std::move(body)) {}
  std::shared_ptr<const Body> body_;

  friend struct SetBuilder;
};

struct Cell {
  NatSet region;
  SetExpr trace;
};

struct OrdPart {
  Rational lo, hi;
  SetExpr part;
};

struct Graph {
  std::uint64_t slope = 1;
  std::uint64_t offset = 0;
  NatSet support;
};

/// q - dir * r / (n + 1) for n >= start; dir = +1 ascends to q, -1 descends.
struct MonoSeq {
  int dir = 1;
  Rational q;
  Rational r = 1;
  std::uint64_t start = 0;

  Rational at(std::uint64_t n) const;
  /// Index n with at(n) == p, if any.
  std::optional<std::uint64_t> index_of(const Rational& p) const;
};

bool contains(const SetExpr& a, const Point& p);
SetExpr unite(const SetExpr& a, const SetExpr& b);
SetExpr intersect(const SetExpr& a, const SetExpr& b);
/// a \ b; NotClosed when the result leaves the grammar.
SetExpr difference(const SetExpr& a, const SetExpr& b);
bool is_empty(const SetExpr& a);
bool is_finite(const SetExpr& a);
bool is_subset(const SetExpr& a, const SetExpr& b);
bool equals(const SetExpr& a, const SetExpr& b);
bool is_universe(const SetExpr& a);

/// Trace of column/block n inside the inner domain.
SetExpr column_trace(const SetExpr& a, std::uint64_t n);
SetExpr reverse_rationals(const SetExpr& a);
/// Every member of a finite set. Precondition: is_finite(a).
std::vector<Point> finite_points(const SetExpr& a);
/// Members of a among the first n points of the domain enumeration.
std::vector<Point> enumerate_prefix(const SetExpr& a, std::uint64_t n);

std::strong_ordering compare(const SetExpr& a, const SetExpr& b);
inline bool operator==(const SetExpr& a, const SetExpr& b) { return compare(a, b) == 0; }
inline bool operator<(const SetExpr& a, const SetExpr& b) { return compare(a, b) < 0; }

std::string to_string(const SetExpr& a);

}  // namespace idealcalc
