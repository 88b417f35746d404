"""Ideals on countable sets and their c0 sequence spaces."""

from ._core import (
    Domain,
    Ideal,
    IdealcalcError,
    Seq,
    Set,
    catalog,
    char_fn,
    equivalent,
    in_c0,
    is_frechet,
    is_tall,
    limsup,
    member,
    perp,
    perp_normalize,
    quotient_norm,
    run,
    sup_norm,
)

__all__ = [
    "Domain",
    "Ideal",
    "IdealcalcError",
    "Seq",
    "Set",
    "catalog",
    "char_fn",
    "equivalent",
    "in_c0",
    "is_frechet",
    "is_tall",
    "limsup",
    "member",
    "perp",
    "perp_normalize",
    "quotient_norm",
    "run",
    "sup_norm",
]
