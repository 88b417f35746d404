#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "idealcalc/domain.hpp"
#include "idealcalc/ordinal.hpp"
#include "idealcalc/set_expr.hpp"

namespace idealcalc {

/// Expression tree over ideal constructors. Every ideal contains all finite
/// subsets of its domain.
class IdealExpr {
 public:
  enum class Kind {
    Fin,
    Pow,
    Restrict,   // children {I}, carrier A: subsets of A that lie in I
    Join,       // children {I, J}
    OmegaSum,   // children {I}: I^w over N x D
    DirectSum,  // children {I_0, ..., I_{N-1}, tail}
    Fubini,     // children {I over N, J over D}
    Perp,       // children {I}
    WO,
    WORev,
    CatalogP,
    CatalogQ,
    BlockSum,   // sum over n of Q at the n-th fundamental-sequence term of a limit
  };

  static IdealExpr fin(const Domain& d = Domain::nat());
  static IdealExpr pow(const Domain& d = Domain::nat());
  static IdealExpr restrict(const IdealExpr& i, const SetExpr& carrier);
  static IdealExpr join(const IdealExpr& i, const IdealExpr& j);
  static IdealExpr omega_sum(const IdealExpr& i);
  static IdealExpr direct_sum(std::vector<IdealExpr> list, const IdealExpr& tail);
  static IdealExpr fubini(const IdealExpr& i, const IdealExpr& j);
  static IdealExpr perp(const IdealExpr& i);
  static IdealExpr wo();
  static IdealExpr worev();
  static IdealExpr catalog_p(const Ordinal& alpha);
  static IdealExpr catalog_q(const Ordinal& alpha);
  static IdealExpr block_sum(const Ordinal& limit);

  Kind kind() const;
  const Domain& domain() const;
  const std::vector<IdealExpr>& children() const;
  const IdealExpr& child(std::size_t i = 0) const { return children().at(i); }
  const SetExpr& carrier() const;
  const Ordinal& ordinal() const;

  struct Node;

 private:
  explicit IdealExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// DSL spelling, e.g. `JOIN(SUM(FIN), PERP(SUM(FIN)))`; domains that cannot
/// be inferred are annotated as `FIN[N*N]`.
std::string to_string(const IdealExpr& i);
bool operator==(const IdealExpr& a, const IdealExpr& b);

/// Evidence attached to a positive membership verdict.
struct Witness {
  enum class Kind { Join, Exceptional, PerpBound };
  Kind kind = Kind::Join;
  std::optional<SetExpr> first, second;  // Join: first in I, second in J, union covers the set
  std::optional<SetExpr> exceptional;    // Fubini: columns whose trace is not in J
  std::uint64_t bound = 0;               // Perp of a sum: support inside columns <= bound
  std::vector<std::pair<std::uint64_t, SetExpr>> blocks;  // per-column traces, each in the column orthogonal
};

struct Verdict {
  bool holds = false;
  std::optional<Witness> witness;
  std::string reason;
};

Verdict member(const IdealExpr& i, const SetExpr& a);
/// Re-checks a witness by independent membership calls on its parts.
bool verify_witness(const IdealExpr& i, const SetExpr& a, const Verdict& v);

/// Rewrites orthogonals with known closed forms; leaves the rest in place.
IdealExpr perp_normalize(const IdealExpr& i);

/// One-level expansions of P_alpha and Q_alpha.
struct CatalogEntry {
  IdealExpr p, q;
};
CatalogEntry catalog(const Ordinal& alpha);
/// Expansion of a CatalogP/CatalogQ node; other nodes are returned unchanged.
IdealExpr expand(const IdealExpr& i);

/// Normal form used as an equivalence certificate: folds sums of catalog
/// ideals back into the catalog, resolves orthogonals, and applies the
/// shipped identity FUBINI(FIN, J) = JOIN(SUM(J), PERP(SUM(FIN))).
IdealExpr canonical(const IdealExpr& i);
/// True when the canonical form is one of FIN, POW, WO, WOREV, P[a], Q[a].
bool in_frechet_catalog(const IdealExpr& i);

/// Whether the whole domain lies outside the ideal.
bool is_proper(const IdealExpr& i);

/// Decomposition a = first ∪ second with first in i and second in j, first
/// and second disjoint when expressible. nullopt when a is not in the join;
/// Undecidable when the split cannot be decided.
struct JoinSplit {
  SetExpr first, second;
};
std::optional<JoinSplit> split_join(const IdealExpr& i, const IdealExpr& j, const SetExpr& a);

/// Ideal Y on block n with {n} x T in i iff T in Y, when such a rule exists.
std::optional<IdealExpr> column_ideal(const IdealExpr& i, std::uint64_t n);

}  // namespace idealcalc
