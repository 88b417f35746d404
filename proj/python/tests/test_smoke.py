from fractions import Fraction
import math

import pytest

import idealcalc as ic


def test_member():
    fin = ic.Ideal("FIN")
    assert ic.member(fin, ic.Set("fin{1,2,3}"))
    assert not ic.member(fin, ic.Set("ap(0,2)"))
    assert ic.member(ic.Ideal("SUM(FIN)"), ic.Set("graph(n, cofin{})", ic.Domain("N*N")))


def test_chi_bridge():
    fin = ic.Ideal("FIN")
    for text in ["fin{0,5}", "ap(1,3)", "cofin{2}"]:
        a = ic.Set(text)
        assert ic.member(fin, a) == ic.in_c0(fin, ic.char_fn(a))


def test_norms_are_exact():
    fin = ic.Ideal("FIN")
    x = ic.Seq("seq[1/2*chi(ap(0,2)) + 3*chi(fin{1})]")
    assert ic.sup_norm(x) == 3
    assert ic.quotient_norm(fin, x) == Fraction(1, 2)
    assert ic.limsup(fin, x) == Fraction(1, 2)
    assert ic.limsup(ic.Ideal("POW"), x) == -math.inf


def test_perp_and_catalog():
    assert str(ic.perp(ic.Ideal("FIN"))) == "POW"
    p, q = ic.catalog("w+1")
    assert str(p) == "SUM(Q[w])"
    assert ic.is_frechet(ic.Ideal("P[2]"))
    assert not ic.is_tall(ic.Ideal("WO"))
    assert ic.equivalent(ic.Ideal("FUBINI(FIN, FIN)"), ic.Ideal("JOIN(SUM(FIN), PERP(SUM(FIN)))")) == "Equal"


def test_errors_carry_their_kind():
    with pytest.raises(ic.IdealcalcError) as e:
        ic.Ideal("SUM(FIN")
    assert e.value.kind == "ParseError"
    with pytest.raises(ic.IdealcalcError) as e:
        ic.member(ic.Ideal("FIN"), ic.Set("fin{1}", ic.Domain("Q")))
    assert e.value.kind == "DomainMismatch"


def test_run_matches_cli_exit_codes():
    code, out, _ = ic.run(["member", "FIN", "fin{1,2,3}"])
    assert code == 0 and "holds: true" in out
    assert ic.run(["member", "FIN", "ap(0,2)"])[0] == 1
    assert ic.run(["frobnicate"])[0] == 3
