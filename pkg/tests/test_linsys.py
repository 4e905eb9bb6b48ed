import random
from fractions import Fraction as Rat

import pytest

from cubiclct.linsys import (DimensionMismatch, Feasible, Infeasible,
                             InfeasibilityCertificate, LinearSystem, Row,
                             UnknownVariable, check_feasibility,
                             fourier_motzkin_eliminate, parse_row,
                             replay_certificate)
from oracles import feasible_by_vertex_enumeration


def sys_of(variables, *exprs):
    variables = tuple(variables)
    return LinearSystem(variables, tuple(parse_row(e, variables) for e in exprs))


def test_parse_row_normalization():
    row = parse_row("2*a1 - a2 > tau - a4", ("a1", "a2", "a4", "tau"))
    assert row.coeffs == (Rat(2), Rat(-1), Rat(1), Rat(-1))
    assert row.constant == 0 and row.relation == ">"
    row = parse_row("3 >= a1 + a5", ("a1", "a5"))
    assert row.coeffs == (Rat(-1), Rat(-1))
    assert row.constant == -3 and row.relation == ">="
    row = parse_row("m/2 + b <= 1", ("b", "m"))
    assert row.coeffs == (Rat(-1), Rat(-1, 2)) and row.constant == -1
    row = parse_row("1 - 3/2*a >= 0", ("a",))
    assert row.coeffs == (Rat(-3, 2),) and row.constant == -1


def test_parse_row_rejects_unknown_variable():
    with pytest.raises(UnknownVariable):
        parse_row("2*a1 > zz", ("a1",))


def test_eliminate_simple_contradiction():
    system = sys_of(("x",), "x >= 1", "-x >= 0")
    out = fourier_motzkin_eliminate(system, "x")
    assert out.variables == ()
    assert [(r.coeffs, r.constant, r.relation) for r in out.rows] == [((), Rat(1), ">=")]


def test_eliminate_strict_branch_row():
    # the A5-type branch after substituting tau >= 4 reduces to 0 > 1
    system = sys_of(("a4",), "a4 > 2", "1 - a4 >= 0")
    out = fourier_motzkin_eliminate(system, "a4")
    assert len(out.rows) == 1
    row = out.rows[0]
    assert row.coeffs == () and row.constant == Rat(1) and row.relation == ">"
    assert "row0" in row.provenance and "row1" in row.provenance


def test_eliminate_vacuous():
    system = sys_of(("x",), "x >= 0")
    out = fourier_motzkin_eliminate(system, "x")
    assert out.rows == ()


def test_eliminate_unknown_variable():
    with pytest.raises(UnknownVariable):
        fourier_motzkin_eliminate(sys_of(("x",), "x >= 0"), "y")


def test_check_feasibility_a2_branch():
    system = sys_of(("a1", "a2"), "2*a1 - a2 > 3", "a1 <= 1", "a2 >= 0")
    outcome = check_feasibility(system)
    assert isinstance(outcome, Infeasible)
    assert replay_certificate(system, outcome.certificate)


def test_check_feasibility_trivial_witness():
    outcome = check_feasibility(sys_of(("a1",), "a1 >= 0"))
    assert isinstance(outcome, Feasible)
    assert outcome.witness["a1"] == 0


def test_check_feasibility_full_a5_node_branch():
    variables = ("a1", "a2", "a3", "a4", "a5", "tau")
    rows = [
        "3 >= a1 + a5",
        "2*a1 - a2 >= 0", "2*a2 - a1 - a3 >= 0", "2*a3 - a2 - a4 >= 0",
        "2*a4 - a3 - a5 >= 0", "2*a5 - a4 >= 0",
        "a1 >= 0", "a2 >= 0", "a3 >= 0", "a4 >= 0", "a5 >= 0",
        "2*a3 - a2 - a4 > tau - a4", "2*a4 - a3 - a5 > tau - a3",
        "tau >= 4", "a4 <= 1", "a5 <= 2",
    ]
    system = sys_of(variables, *rows)
    outcome = check_feasibility(system)
    assert isinstance(outcome, Infeasible)
    assert replay_certificate(system, outcome.certificate)


def test_witness_respects_strictness():
    system = sys_of(("x", "y"), "x > 0", "y >= x", "1 - y > 0", "x + y <= 10")
    outcome = check_feasibility(system)
    assert isinstance(outcome, Feasible)
    point = [outcome.witness["x"], outcome.witness["y"]]
    for row in system.rows:
        assert row.evaluate(point)


def test_replay_simple_certificates():
    system = sys_of(("x",), "x >= 1", "-x >= 0")
    good = InfeasibilityCertificate((Rat(1), Rat(1)), Row((Rat(0),), Rat(1), ">="))
    bad = InfeasibilityCertificate((Rat(1), Rat(0)), Row((Rat(0),), Rat(1), ">="))
    assert replay_certificate(system, good)
    assert not replay_certificate(system, bad)
    with pytest.raises(DimensionMismatch):
        replay_certificate(system, InfeasibilityCertificate((Rat(1),), Row((Rat(0),), Rat(1), ">=")))


def test_replay_rejects_negative_multipliers():
    system = sys_of(("x",), "x >= 1", "x >= 0")
    cert = InfeasibilityCertificate((Rat(1), Rat(-1)), Row((Rat(0),), Rat(1), ">="))
    assert not replay_certificate(system, cert)


def test_strict_contradiction_needs_strict_row():
    # 0 > 0 only arises when a strict row carries positive weight
    system = sys_of(("x",), "x > 0", "-x >= 0")
    outcome = check_feasibility(system)
    assert isinstance(outcome, Infeasible)
    cert = outcome.certificate
    assert cert.derived.relation == ">"
    assert cert.multipliers[0] > 0   # the strict row is weighted
    assert replay_certificate(system, cert)
    # dropping the strict weight must invalidate the certificate
    tweaked = InfeasibilityCertificate((Rat(0), cert.multipliers[1]), cert.derived)
    assert not replay_certificate(system, tweaked)


def _random_system(rng, planted=None):
    n = rng.randint(1, 4)
    variables = tuple(f"x{i}" for i in range(n))
    nrows = rng.randint(1, 10)
    rows = []
    point = [Rat(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(n)] \
        if planted else None
    for _ in range(nrows):
        coeffs = tuple(Rat(rng.randint(-4, 4)) for _ in range(n))
        relation = ">" if rng.random() < 0.4 else ">="
        if planted:
            value = sum((c * x for c, x in zip(coeffs, point)), Rat(0))
            slack = Rat(rng.randint(0, 4), rng.randint(1, 2))
            if relation == ">":
                slack += Rat(1, rng.randint(1, 3))
            constant = value - slack
        else:
            constant = Rat(rng.randint(-5, 5))
        rows.append(Row(coeffs, constant, relation))
    return LinearSystem(variables, tuple(rows)), point


def test_soundness_planted_feasible_never_infeasible():
    rng = random.Random(1234)
    for _ in range(200):
        system, point = _random_system(rng, planted=True)
        outcome = check_feasibility(system)
        assert isinstance(outcome, Feasible), system.pretty()
        witness = [outcome.witness[v] for v in system.variables]
        assert all(row.evaluate(witness) for row in system.rows)


def test_oracle_agreement_on_random_systems():
    rng = random.Random(555)
    feasible_count = 0
    for _ in range(100):
        system, _ = _random_system(rng)
        fm = isinstance(check_feasibility(system), Feasible)
        oracle = feasible_by_vertex_enumeration(system)
        assert fm == oracle, system.pretty()
        feasible_count += fm
    assert 0 < feasible_count < 100   # the sample exercises both verdicts


def test_verdict_independent_of_elimination_order():
    rng = random.Random(77)
    import itertools
    for _ in range(40):
        system, _ = _random_system(rng)
        verdicts = set()
        names = list(system.variables)
        for order in itertools.islice(itertools.permutations(names), 6):
            outcome = check_feasibility(system, order=list(order))
            verdicts.add(isinstance(outcome, Feasible))
        assert len(verdicts) == 1


def test_pruning_does_not_change_verdict():
    rng = random.Random(4242)
    for _ in range(60):
        system, _ = _random_system(rng)
        with_prune = isinstance(check_feasibility(system, prune=True), Feasible)
        without = isinstance(check_feasibility(system, prune=False), Feasible)
        assert with_prune == without


def test_certificates_replay_on_random_infeasible():
    rng = random.Random(31337)
    hits = 0
    while hits < 40:
        system, _ = _random_system(rng)
        outcome = check_feasibility(system)
        if isinstance(outcome, Infeasible):
            assert replay_certificate(system, outcome.certificate)
            hits += 1


def test_json_roundtrip():
    system = sys_of(("a1", "tau"), "2*a1 > tau", "tau >= 3", "a1 <= 1")
    assert LinearSystem.from_json(system.to_json()) == system
    outcome = check_feasibility(system)
    cert = outcome.certificate
    assert InfeasibilityCertificate.from_json(cert.to_json()) == cert
