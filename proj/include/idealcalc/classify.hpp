#pragma once

#include <optional>
#include <string>
#include <vector>

#include "idealcalc/ideal.hpp"
#include "idealcalc/set_expr.hpp"

namespace idealcalc {

struct Equivalence {
  enum class Kind { Equal, Distinguished, Unknown };
  Kind kind = Kind::Unknown;
  std::optional<SetExpr> witness;  // Distinguished: first corpus set with differing membership
  std::string reason;
};

/// Distinguished on the first corpus set where membership differs; Equal only
/// when the corpus agrees and the canonical forms coincide; Unknown otherwise.
Equivalence equivalent(const IdealExpr& i, const IdealExpr& j, const std::vector<SetExpr>& corpus);
Equivalence equivalent(const IdealExpr& i, const IdealExpr& j);
std::string to_string(Equivalence::Kind k);

/// PERP(i) is extensionally FIN. Undecidable when equivalence is Unknown.
Verdict is_tall(const IdealExpr& i);
/// PERP(PERP(i)) is extensionally i.
Verdict is_frechet(const IdealExpr& i);

struct Flag {
  bool value = false;
  std::string note;
};

/// Recorded facts about catalog ideals. Not computed; NoMetadata for
/// expressions whose canonical form is outside the catalog.
struct Metadata {
  std::string entry;
  Flag meager, borel, frechet, tall, contains_fin;
};
Metadata metadata(const IdealExpr& i);

}  // namespace idealcalc
