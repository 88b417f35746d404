#pragma once

#include <optional>
#include <string_view>

#include "idealcalc/domain.hpp"
#include "idealcalc/ideal.hpp"
#include "idealcalc/index_map.hpp"
#include "idealcalc/operators.hpp"
#include "idealcalc/set_expr.hpp"
#include "idealcalc/simple_seq.hpp"

namespace idealcalc {

// Parsers for the textual forms printed by the to_string overloads. Forms
// whose domain is not fixed by the text (fin{}, FIN, id, embed(n)) take it
// from `expected` and otherwise default to N. Syntax errors throw ParseError
// with line:column and the expected tokens.

/// `N`, `Q`, `N*D`, `B[w^2]`.
Domain parse_domain(std::string_view text);
SetExpr parse_set(std::string_view text, const std::optional<Domain>& expected = std::nullopt);
IdealExpr parse_ideal(std::string_view text, const std::optional<Domain>& expected = std::nullopt);
/// `seq[1*chi(ap(0,2)) + -1/2*chi(fin{1})]`.
SimpleSeq parse_seq(std::string_view text, const std::optional<Domain>& expected = std::nullopt);
/// `id`, `perm{0:1,1:0}`, `pair`, `unpair`, `embed(n)`, `neg`, `compose(f, g)`.
IndexMap parse_map(std::string_view text, const std::optional<Domain>& source = std::nullopt,
                   const std::optional<Domain>& target = std::nullopt);
/// A map, `T(map, negative-set)`, or `ext(set)`. Inputs live on `input`,
/// outputs on `output`.
IndexOp parse_op(std::string_view text, const std::optional<Domain>& input = std::nullopt,
                 const std::optional<Domain>& output = std::nullopt);
/// `3`, `-1/2`, `(2,(0,5))`.
Point parse_point(std::string_view text, const Domain& d);
/// `seq[...] @ (1,0); seq[...] @ (0,1)`.
TensorInput parse_tensor(std::string_view text, const std::optional<Domain>& expected = std::nullopt);

}  // namespace idealcalc
