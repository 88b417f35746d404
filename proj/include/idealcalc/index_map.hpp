#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "idealcalc/domain.hpp"
#include "idealcalc/set_expr.hpp"

namespace idealcalc {

/// A total map h : source -> target between domains. Preimages of sets in the
/// target grammar are computed symbolically.
class IndexMap {
 public:
  enum class Kind { Identity, FinPerm, PairEncode, PairDecode, BlockEmbed, NegateRat, Compose };

  static IndexMap identity(const Domain& d);
  /// Finite permutation of N given as (n, h(n)) pairs; identity elsewhere.
  static IndexMap fin_perm(std::vector<std::pair<std::uint64_t, std::uint64_t>> table);
  /// N x N -> N, (n, m) -> Cantor code.
  static IndexMap pair_encode();
  /// N -> N x N, inverse of pair_encode.
  static IndexMap pair_decode();
  /// target.block(n0) -> target, t -> (n0, t).
  static IndexMap block_embed(std::uint64_t n0, const Domain& target);
  static IndexMap negate_rat();
  /// maps[0] o maps[1] o ... ; the last map is applied first.
  static IndexMap compose(std::vector<IndexMap> maps);

  Kind kind() const { return kind_; }
  const Domain& source() const { return source_; }
  const Domain& target() const { return target_; }
  const std::vector<std::pair<std::uint64_t, std::uint64_t>>& table() const { return table_; }
  std::uint64_t block() const { return block_; }
  const std::vector<IndexMap>& parts() const { return parts_; }

  bool bijective() const;
  Point apply(const Point& p) const;

 private:
  IndexMap(Kind kind, Domain source, Domain target) : kind_(kind), source_(std::move(source)), target_(std::move(target)) {}

  Kind kind_;
  Domain source_;
  Domain target_;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> table_;
  std::uint64_t block_ = 0;
  std::vector<IndexMap> parts_;
};

/// {p in source : h(p) in a}; NotClosed when the pair (map, set) has no rule.
SetExpr preimage(const IndexMap& h, const SetExpr& a);

/// `id`, `perm{0:1,1:0}`, `pair`, `unpair`, `embed(3)`, `neg`, `compose(f, g)`.
std::string to_string(const IndexMap& h);

}  // namespace idealcalc
