from __future__ import annotations

from fractions import Fraction

import pytest

from logtrop.cohft import (
    CohFTError,
    Envelope,
    EnvelopeExceeded,
    NoUnitDeclared,
    check_loop_axiom,
    check_minimality,
    check_separating_gluing,
    check_sn_equivariance,
    check_unit_axioms,
    constant_spec,
    dr_spec,
    run_checks,
    separating_gluings,
    spec_from_json,
    table_spec,
)
from logtrop.moduli import build_moduli
from logtrop.polynomial import Polynomial
from logtrop.pp import PPClass, boundary_class, edge_type_graph, length_class


def uniform(g, n, poly):
    return PPClass.from_function(build_moduli(g, n), lambda s: poly)


def var(x):
    return Polynomial.var(x)


def test_envelope_parsing():
    env = Envelope.parse("g<=1, n<=4")
    assert (env.max_g, env.max_n) == (1, 4)
    assert str(env) == "g<=1,n<=4"
    assert (0, 2) not in env.signatures() and (1, 1) in env.signatures()
    with pytest.raises(CohFTError):
        Envelope.parse("g<=1")


def test_trivial_spec_passes_everything():
    reports = run_checks(constant_spec(), ["sn", "sep", "loop", "unit"], Envelope(1, 4))
    assert reports
    assert all(r.passed for r in reports), [r.to_json() for r in reports if not r.passed]
    assert {r.axiom for r in reports} == {"sn", "sep", "loop", "unit"}


def test_dr_is_symmetric():
    spec = dr_spec(window=2)
    assert check_sn_equivariance(spec, 1, 3, inputs=[(1, -1, 0), (2, 0, -2)]).passed
    assert check_sn_equivariance(spec, 0, 3, inputs=[(1, -1, 0)]).passed


def test_asymmetric_table_fails_sn():
    spec = table_spec({(0, 3, (0, 0, 0)): uniform(0, 3, var("l1"))})
    report = check_sn_equivariance(spec, 0, 3)
    assert report.verdict == "fail"
    assert report.witnesses and report.witnesses[0]["inputs"] == [0, 0, 0]


def test_engineered_table_satisfies_separating_gluing():
    w03 = Polynomial.constant(1) + var("l1") + var("l2")
    w04 = w03 * (Polynomial.constant(1) + var("l3") + var("l4"))
    spec = table_spec({(0, 3, (0, 0, 0)): uniform(0, 3, w03), (0, 4, (0, 0, 0, 0)): uniform(0, 4, w04)})
    report = check_separating_gluing(spec, 0, 2, 0, 2)
    assert report.passed, report.witnesses
    assert report.summands == 1
    # the same table breaks if the four-point class loses its cross term
    broken = table_spec({(0, 3, (0, 0, 0)): uniform(0, 3, w03), (0, 4, (0, 0, 0, 0)): uniform(0, 4, w03)})
    assert not check_separating_gluing(broken, 0, 2, 0, 2).passed


def test_dr_genus_zero_gluing_holds():
    report = check_separating_gluing(dr_spec(window=2), 0, 2, 0, 2, inputs=[(1, 1, -1, -1)])
    assert report.passed
    assert report.summands == 1


def test_dr_genus_one_gluing_fails_with_one_summand():
    report = check_separating_gluing(dr_spec(window=2), 1, 0, 0, 2, inputs=[(1, -1)])
    assert report.verdict == "fail"
    assert report.summands == 1
    (w,) = report.witnesses
    assert w["inputs"] == [1, -1]
    diff = Polynomial.from_json(w["difference"])
    assert diff == Polynomial.linear({"2.l1": Fraction(-1, 2), "2.l2": Fraction(-1, 2)})


def test_dr_loop_sum_is_infinite():
    report = check_loop_axiom(dr_spec(window=3), 1, 2, inputs=[(1, -1)])
    assert report.verdict == "infinite-sum"
    assert report.summands == 7
    assert report.witnesses
    assert report.note


def test_constant_spec_loop_passes():
    assert check_loop_axiom(constant_spec(), 1, 1).passed
    with pytest.raises(CohFTError):
        check_loop_axiom(constant_spec(), 0, 3)


def test_unit_axioms():
    assert check_unit_axioms(constant_spec(), Envelope(1, 4)).passed
    bad = table_spec(
        {(0, 3, (0, 0, 0)): uniform(0, 3, Polynomial.constant(2))},
        unit=0,
    )
    report = check_unit_axioms(bad, Envelope(0, 3))
    assert report.verdict == "fail"
    with pytest.raises(NoUnitDeclared):
        check_unit_axioms(table_spec({}), Envelope(0, 3))


def test_minimality():
    s3 = build_moduli(0, 3)
    for c in (length_class(s3, 1), length_class(s3, 1) * length_class(s3, 2), PPClass.constant(s3, 1)):
        assert check_minimality(c).passed
    assert check_minimality(PPClass.zero(build_moduli(0, 4))).passed
    boundary = boundary_class(build_moduli(0, 4), edge_type_graph(0, 4, [1, 2]))
    report = check_minimality(boundary)
    assert not report.passed and report.witnesses


def test_separating_gluings_list():
    assert len(separating_gluings(0, 4)) == 6
    assert all(n1 + n2 == 2 for _, n1, _, n2, _ in separating_gluings(1, 2))


def test_pairing_problems():
    spec = constant_spec(basis=(0, 1))
    assert spec.pairing_problems() == []
    spec = table_spec({}, basis=(0, 1), eta={(0, 1): Fraction(1), (1, 0): Fraction(2)})
    assert spec.pairing_problems()


def test_envelope_is_enforced():
    with pytest.raises(EnvelopeExceeded):
        check_sn_equivariance(constant_spec(), 2, 3, envelope=Envelope(1, 4))
    with pytest.raises(EnvelopeExceeded):
        check_separating_gluing(constant_spec(), 0, 3, 0, 3, envelope=Envelope(1, 4))
    spec = table_spec({})
    with pytest.raises(EnvelopeExceeded):
        spec.omega(0, 3, (0, 0, 0))


def test_spec_from_json():
    poly = (Polynomial.constant(1) + var("l1")).to_json()
    table = spec_from_json({"kind": "table", "entries": [{"g": 0, "n": 3, "inputs": [0, 0, 0], "poly": poly}]})
    assert table.omega(0, 3, (0, 0, 0)).poly(next(iter(build_moduli(0, 3).strata))) == Polynomial.constant(1) + var("l1")
    assert spec_from_json({"kind": "constant"}).omega(1, 1, (0,)) == PPClass.constant(build_moduli(1, 1), 1)
    dr = spec_from_json({"kind": "dr", "window": 2})
    assert dr.basis == tuple(range(-2, 3))
    with pytest.raises(CohFTError):
        spec_from_json({"kind": "mystery"})


def test_report_json_shape():
    report = check_separating_gluing(dr_spec(window=2), 1, 0, 0, 2, inputs=[(1, -1)])
    data = report.to_json()
    assert data["passed"] is False and data["verdict"] == "fail" and data["summands"] == 1
