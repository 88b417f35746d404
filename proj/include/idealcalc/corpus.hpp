#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "idealcalc/domain.hpp"
#include "idealcalc/ideal.hpp"
#include "idealcalc/set_expr.hpp"
#include "idealcalc/simple_seq.hpp"

namespace idealcalc {

inline constexpr std::uint64_t kDefaultSeed = 20240917;

/// kDefaultSeed unless IDEALCALC_SEED holds a decimal override.
std::uint64_t default_seed();

/// Deterministic test sets over d: every basic constructor with small
/// parameters, then seeded unions. Over N the list starts fin{}, cofin{}.
const std::vector<SetExpr>& standard_corpus(const Domain& d, std::uint64_t seed = default_seed());

/// Pairwise disjoint sets over d. Regions built from one pool refine against
/// each other without leaving the grammar.
const std::vector<SetExpr>& atom_pool(const Domain& d, std::uint64_t seed = default_seed());

/// Random simple function whose regions are unions of pool atoms.
SimpleSeq random_seq(const Domain& d, const std::vector<SetExpr>& pool, std::mt19937_64& rng,
                     bool allow_negative = true);
std::vector<SimpleSeq> seq_corpus(const Domain& d, std::size_t count, std::uint64_t seed = default_seed(),
                                  bool allow_negative = true);

/// Shipped ideal expressions over d covering every constructor that lives there.
std::vector<IdealExpr> ideal_corpus(const Domain& d);

/// Domains exercised by the test corpora.
std::vector<Domain> corpus_domains();

}  // namespace idealcalc
