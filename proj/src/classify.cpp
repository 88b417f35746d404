#include "idealcalc/classify.hpp"

#include "idealcalc/corpus.hpp"
#include "idealcalc/error.hpp"

namespace idealcalc {

std::string to_string(Equivalence::Kind k) {
  switch (k) {
    case Equivalence::Kind::Equal: return "Equal";
    case Equivalence::Kind::Distinguished: return "Distinguished";
    case Equivalence::Kind::Unknown: return "Unknown";
  }
  return "?";
}

Equivalence equivalent(const IdealExpr& i, const IdealExpr& j, const std::vector<SetExpr>& corpus) {
  if (i.domain() != j.domain())
    fail(ErrorKind::DomainMismatch, "equivalence of ideals over " + to_string(i.domain()) + " and " + to_string(j.domain()));
  for (const SetExpr& a : corpus) {
    const bool in_i = member(i, a).holds, in_j = member(j, a).holds;
    if (in_i != in_j)
      return {Equivalence::Kind::Distinguished, a,
              to_string(a) + (in_i ? " is in " : " is not in ") + to_string(i) + (in_j ? " but in " : " but not in ") +
                  to_string(j)};
  }
  const IdealExpr ci = canonical(i), cj = canonical(j);
  if (to_string(ci) == to_string(cj))
    return {Equivalence::Kind::Equal, std::nullopt, "canonical form " + to_string(ci)};
  return {Equivalence::Kind::Unknown, std::nullopt,
          "corpus agrees; canonical forms " + to_string(ci) + " and " + to_string(cj) + " differ"};
}

Equivalence equivalent(const IdealExpr& i, const IdealExpr& j) { return equivalent(i, j, standard_corpus(i.domain())); }

namespace {

Verdict from_equivalence(const Equivalence& e, const std::string& what) {
  switch (e.kind) {
    case Equivalence::Kind::Equal: return Verdict{true, std::nullopt, e.reason};
    case Equivalence::Kind::Distinguished: return Verdict{false, std::nullopt, e.reason};
    case Equivalence::Kind::Unknown: break;
  }
  fail(ErrorKind::Undecidable, what + ": " + e.reason);
}

}  // namespace

Verdict is_tall(const IdealExpr& i) {
  return from_equivalence(equivalent(perp_normalize(IdealExpr::perp(i)), IdealExpr::fin(i.domain())),
                          "tallness of " + to_string(i));
}

Verdict is_frechet(const IdealExpr& i) {
  return from_equivalence(equivalent(perp_normalize(IdealExpr::perp(IdealExpr::perp(i))), i),
                          "Frechet property of " + to_string(i));
}

Metadata metadata(const IdealExpr& i) {
  const IdealExpr c = canonical(i);
  const Flag has_fin{true, "every shipped ideal contains the finite sets"};
  switch (c.kind()) {
    case IdealExpr::Kind::CatalogP:
    case IdealExpr::Kind::CatalogQ:
    case IdealExpr::Kind::Fin:
    case IdealExpr::Kind::Pow: break;
    case IdealExpr::Kind::WO:
    case IdealExpr::Kind::WORev:
      return Metadata{to_string(c),
                      {true, "coanalytic, so it has the Baire property; a proper ideal with it is meager"},
                      {false, "complete coanalytic, hence not Borel"},
                      {true, "equals its double orthogonal; the orthogonal is the reversed ideal"},
                      {false, "a descending sequence is an infinite set with no infinite member"},
                      has_fin};
    default: fail(ErrorKind::NoMetadata, to_string(i) + " is not a catalog ideal");
  }
  const bool pow = c.kind() == IdealExpr::Kind::Pow ||
                   (c.kind() == IdealExpr::Kind::CatalogP && c.ordinal().is_zero());
  const bool fin = c.kind() == IdealExpr::Kind::Fin ||
                   (c.kind() == IdealExpr::Kind::CatalogQ && c.ordinal().is_zero());
  if (pow)
    return Metadata{to_string(c),
                    {false, "the improper ideal is the whole power set, which is not meager"},
                    {true, "the whole power set is clopen"},
                    {true, "its orthogonal is FIN, whose orthogonal is the power set again"},
                    {true, "every infinite set is a member"},
                    has_fin};
  if (fin)
    return Metadata{to_string(c),
                    {true, "FIN is a countable union of closed nowhere dense families"},
                    {true, "FIN is F_sigma"},
                    {true, "its orthogonal is the power set"},
                    {false, "an infinite set has no infinite finite subset"},
                    has_fin};
  return Metadata{to_string(c),
                  {true, "catalog ideals P and Q of positive rank are Borel and proper, hence meager"},
                  {true, "built from the power set and FIN by countable sums and orthogonals"},
                  {true, "P and Q of the same rank are mutual orthogonals"},
                  {false, "the orthogonal is again a catalog ideal of positive rank, not FIN"},
                  has_fin};
}

}  // namespace idealcalc
