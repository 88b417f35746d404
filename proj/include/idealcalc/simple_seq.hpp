#pragma once

#include <string>
#include <utility>
#include <vector>

#include "idealcalc/ideal.hpp"
#include "idealcalc/rational.hpp"
#include "idealcalc/set_expr.hpp"

namespace idealcalc {

struct Term {
  Rational coeff;
  SetExpr region;
};

/// Simple function sum c_i * chi(A_i) with pairwise disjoint regions. Terms
/// with equal coefficients are merged, so each coefficient appears once;
/// terms are ordered by coefficient.
class SimpleSeq {
 public:
  explicit SimpleSeq(Domain d = Domain::nat()) : domain_(std::move(d)) {}
  /// ValidationError when two regions overlap or a region has the wrong domain.
  static SimpleSeq make(const Domain& d, std::vector<Term> terms);

  const Domain& domain() const { return domain_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Rational at(const Point& p) const;
  SetExpr support() const;

 private:
  Domain domain_;
  std::vector<Term> terms_;
};

/// Extensional equality (regions compared as sets).
bool equals(const SimpleSeq& x, const SimpleSeq& y);
std::string to_string(const SimpleSeq& x);

SimpleSeq char_fn(const SetExpr& a);
/// {n : |x_n| >= eps}.
SetExpr level_set(const SimpleSeq& x, const Rational& eps);
Rational sup_norm(const SimpleSeq& x);
/// Each of the finitely many level sets of |x| lies in the ideal.
Verdict in_c0I(const IdealExpr& i, const SimpleSeq& x);
ExtRational ideal_limsup(const IdealExpr& i, const SimpleSeq& x);
/// Distance from x to c_{0,I}: I-limsup of |x|, read as 0 when the ideal is
/// improper (every sequence then lies in c_{0,I}).
Rational quotient_norm(const IdealExpr& i, const SimpleSeq& x);

enum class CombineOp { Add, Meet, JoinLat };
SimpleSeq combine(CombineOp op, const SimpleSeq& x, const SimpleSeq& y);
SimpleSeq scale(const SimpleSeq& x, const Rational& c);
SimpleSeq abs(const SimpleSeq& x);
SimpleSeq subtract(const SimpleSeq& x, const SimpleSeq& y);
/// x * chi(a).
SimpleSeq restrict_to(const SimpleSeq& x, const SetExpr& a);

/// Common refinement of two partitions: cells carrying the value of x and of
/// y (zero off the support). RefinementNotClosed when a cell leaves the grammar.
struct RefinedCell {
  SetExpr region;
  Rational x, y;
};
std::vector<RefinedCell> refine(const SimpleSeq& x, const SimpleSeq& y);

/// y + z = x with y in c_{0,I} and z in c_{0,J}; MembershipRequired when x is
/// not in c_{0,JOIN(I,J)}.
std::pair<SimpleSeq, SimpleSeq> decompose_join(const IdealExpr& i, const IdealExpr& j, const SimpleSeq& x);

/// |x| meet |y| is in c_0.
bool c0_disjoint(const SimpleSeq& x, const SimpleSeq& y);

/// Vector-valued simple function with the max-norm on Q^d.
struct VecTerm {
  std::vector<Rational> coeff;
  SetExpr region;
};
class VecSimpleSeq {
 public:
  VecSimpleSeq(Domain d, std::size_t dim) : domain_(std::move(d)), dim_(dim) {}
  static VecSimpleSeq make(const Domain& d, std::size_t dim, std::vector<VecTerm> terms);

  const Domain& domain() const { return domain_; }
  std::size_t dim() const { return dim_; }
  const std::vector<VecTerm>& terms() const { return terms_; }
  std::vector<Rational> at(const Point& p) const;

 private:
  Domain domain_;
  std::size_t dim_;
  std::vector<VecTerm> terms_;
};

Rational sup_norm(const VecSimpleSeq& x);
std::string to_string(const VecSimpleSeq& x);

}  // namespace idealcalc
