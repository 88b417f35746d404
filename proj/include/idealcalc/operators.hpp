#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "idealcalc/ideal.hpp"
#include "idealcalc/index_map.hpp"
#include "idealcalc/simple_seq.hpp"

namespace idealcalc {

/// (T x)(p) = sign(p) * x(h(p)), with sign -1 on `negative` and +1 elsewhere.
/// Inputs live on h.target(), outputs on h.source(). An optional mask zeroes
/// the output off the mask (extension by zero).
class IndexOp {
 public:
  explicit IndexOp(IndexMap h);
  IndexOp(IndexMap h, SetExpr negative);

  const IndexMap& map() const { return h_; }
  const SetExpr& negative() const { return negative_; }
  const std::optional<SetExpr>& mask() const { return mask_; }
  const Domain& input_domain() const { return h_.target(); }
  const Domain& output_domain() const { return h_.source(); }
  Rational sign(const Point& p) const;

  friend IndexOp restriction_embed(const IdealExpr& i, const SetExpr& a);

 private:
  IndexMap h_;
  SetExpr negative_;
  std::optional<SetExpr> mask_;
};

/// x -> chi(a) * x on the domain of i.
IndexOp restriction_embed(const IdealExpr& i, const SetExpr& a);
std::string to_string(const IndexOp& t);

SimpleSeq apply(const IndexOp& t, const SimpleSeq& x);

struct Report {
  bool pass = true;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> laws;          // laws checked
  std::vector<std::string> failed_laws;   // subset of laws that failed at least once
  std::optional<std::string> counterexample;
  std::size_t skipped = 0;                // inputs with no symbolic image
  std::optional<bool> bijective, image_is_ideal;
  std::vector<std::string> notes;
};

/// Norm preservation (when h is bijective), additivity, meet preservation and
/// c_{0,I} -> c_{0,J} transport over seeded random pairs. Failures are shrunk
/// by deleting terms, then by cutting regions to finite prefixes.
Report check_isometry_lattice(const IndexOp& t, const IdealExpr& i, const IdealExpr& j, std::size_t trials,
                              std::uint64_t seed);

/// h maps the domain of j into the domain of i; every corpus member of i must
/// pull back into j.
Report check_katetov(const IndexMap& h, const IdealExpr& i, const IdealExpr& j, const std::vector<SetExpr>& corpus);
Report check_katetov(const IndexMap& h, const IdealExpr& i, const IdealExpr& j);

/// Condition (1): for each sampled output point n some A in i has T chi(A)(n) = 1.
/// Condition (2): families of members of i with empty intersection have zero
/// meet of their images, checked structurally and on a prefix.
Report check_ht_conditions(const IndexOp& t, const IdealExpr& i, const std::vector<Point>& sample,
                           const std::vector<std::vector<SetExpr>>& families, std::uint64_t prefix = 1000);

/// Columns sharing one block pattern: on column n in `columns` the block is
/// `cells` plus the single points (slope*n + offset, coeff) of each graph.
struct GraphTerm {
  Rational coeff;
  std::uint64_t slope, offset;
};
struct ColumnGroup {
  NatSet columns;
  SimpleSeq cells;
  std::vector<GraphTerm> graphs;
  Rational norm;
};
struct BlockDecomposition {
  std::vector<ColumnGroup> groups;  // nonzero column groups; other columns are zero
  Rational norm;                    // sup of block norms
  bool in_space = false;            // x lies in c_{0,I} for the given ideal
  std::optional<std::uint64_t> bound;  // omega-perp: all groups lie in columns <= bound
};

/// Per-column decomposition of x over N x D (or a block domain).
BlockDecomposition directsum_iso(const SimpleSeq& x, const IdealExpr& sum);
/// Same decomposition for x in c_{0,PERP(sum)} with the vanishing bound.
/// MembershipRequired when x is not in that space.
BlockDecomposition omegaperp_iso(const SimpleSeq& x, const IdealExpr& sum);
SimpleSeq reassemble(const Domain& d, const BlockDecomposition& b);

struct FubiniQuotient {
  SimpleSeq q;          // over N: column n -> quotient norm of column n modulo c_{0,J}
  bool kernel = false;  // q is zero
  bool q_in_c0 = false; // q lies in c_{0,I}
};
FubiniQuotient fubini_quotient(const SimpleSeq& x, const IdealExpr& i, const IdealExpr& j);

/// u = sum_j x^j (x) y_j with y_j in Q^d under the max-norm.
using TensorInput = std::vector<std::pair<SimpleSeq, std::vector<Rational>>>;
/// Sup over the coordinate functionals +-e_i of sup_norm(sum_j y*(y_j) x^j).
Rational tensor_injective_norm(const TensorInput& u);
/// The vector-valued sequence n -> sum_j x^j_n y_j, built by joint refinement.
VecSimpleSeq tensor_embed(const TensorInput& u);

}  // namespace idealcalc
