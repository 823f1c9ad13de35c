"""Structural hypothesis checks and the truncation sweep."""

import random
from fractions import Fraction

import pytest

from robustnp import (
    Case,
    Charge,
    SampleSpace,
    SublinearExpectation,
    TestFunction,
    TestProblem,
    canonical_tail_sequence,
    check_continuity_from_above,
    check_h1,
    check_h2_at,
    check_h3,
    expectation,
    hypothesis_report,
    nonexistence_problem,
    solve_minimax,
    truncation_sweep,
)

F = Fraction


def tailed_space(n):
    return SampleSpace(tuple(str(k) for k in range(1, n + 1)), True)


def geometric(space):
    n = space.n_atoms
    return Charge(space, tuple(F(1, 2**k) for k in range(1, n + 1)), F(1, 2**n))


def fam(role, *charges):
    return SublinearExpectation(charges, role)


def test_canonical_sequence_limits_are_tail_masses():
    space = tailed_space(3)
    seq = canonical_tail_sequence(space)
    assert len(seq) == 4
    c = Charge(space, (F(1, 4), F(1, 4), F(1, 4)), F(1, 4))
    values = [expectation(c, e.indicator()) for e in seq]
    assert values == [F(1), F(3, 4), F(1, 2), F(1, 4)]
    assert values[-1] == c.tail_mass
    with pytest.raises(ValueError, match="tail"):
        canonical_tail_sequence(SampleSpace(("a",), False))


def test_h1_examples():
    space = tailed_space(3)
    pure = Charge(space, (F(0),) * 3, F(1))
    geo = geometric(space)
    ca = Charge(space, (F(1, 2), F(1, 4), F(1, 4)), F(0))
    assert check_h1(fam("null", ca), fam("alternative", ca))
    # Alternative limits vanish, so the implication holds with room to spare.
    assert check_h1(fam("null", pure), fam("alternative", ca))
    half_p = Charge(space, (F(1, 4), F(1, 4), F(0)), F(1, 2))
    half_q = Charge(space, (F(0), F(1, 4), F(1, 4)), F(1, 2))
    assert not check_h1(fam("null", half_p), fam("alternative", half_q))
    # Geometric keeps tail mass, but the tail-free null side still vanishes.
    assert check_h1(fam("null", ca), fam("alternative", geo))


def test_h2_examples():
    space = SampleSpace(("a", "b", "c"), False)
    full = Charge(space, (F(1, 2), F(1, 4), F(1, 4)), F(0))
    x = TestFunction(space, (F(1, 2), F(1), F(0)), F(0))
    assert check_h2_at(fam("null", full), x, 10)

    tspace = tailed_space(2)
    pure = Charge(tspace, (F(0), F(0)), F(1))
    finite_ind = TestFunction(tspace, (F(1), F(1)), F(0))
    assert check_h2_at(fam("null", pure), finite_ind, 10)

    dirac = Charge(space, (F(1), F(0), F(0)), F(0))
    off_support = TestFunction(space, (F(0), F(1), F(1)), F(0))
    assert check_h2_at(fam("null", dirac), off_support, 10)

    with pytest.raises(ValueError, match="k_max"):
        check_h2_at(fam("null", full), x, 0)


def test_h3_examples():
    space = tailed_space(2)
    ca = Charge(space, (F(1, 2), F(1, 2)), F(0))
    pure = Charge(space, (F(0), F(0)), F(1))
    t_half = Charge(space, (F(1, 4), F(1, 4)), F(1, 2))
    t_third = Charge(space, (F(1, 3), F(1, 3)), F(1, 3))
    assert check_h3(fam("null", ca), fam("alternative", ca))
    assert not check_h3(fam("null", pure), fam("alternative", ca))
    assert check_h3(fam("null", t_half), fam("alternative", t_third))


def test_continuity_examples():
    space = tailed_space(2)
    ca = Charge(space, (F(1, 2), F(1, 2)), F(0))
    pure = Charge(space, (F(0), F(0)), F(1))
    quarter = Charge(space, (F(1, 2), F(1, 4)), F(1, 4))
    assert check_continuity_from_above(fam("null", ca))
    assert not check_continuity_from_above(fam("null", ca, pure))
    assert not check_continuity_from_above(fam("null", quarter))


def test_single_countably_additive_family_passes_everything():
    rng = random.Random(9090)
    for _ in range(20):
        n = rng.randint(2, 4)
        space = SampleSpace(tuple(f"a{i}" for i in range(n)), False)
        raw = [rng.randint(1, 5) for _ in range(n)]
        c = Charge(space, tuple(F(v, sum(raw)) for v in raw), F(0))
        prob = TestProblem(
            space, fam("null", c), fam("alternative", c), F(1, 2)
        )
        probes = [
            TestFunction(space, tuple(F(rng.randint(0, 4), 4) for _ in range(n)), F(0))
            for _ in range(3)
        ]
        rep = hypothesis_report(prob, probes)
        assert rep.h1 and rep.h3 and rep.continuity_p and rep.continuity_q
        assert all(rep.h2_at.values())
        assert rep.witnesses == {}


def test_report_witnesses_on_failures():
    space = tailed_space(2)
    pure = Charge(space, (F(0), F(0)), F(1))
    half = Charge(space, (F(1, 4), F(1, 4)), F(1, 2))
    prob = TestProblem(
        space, fam("null", pure), fam("alternative", half), F(1, 2)
    )
    rep = hypothesis_report(prob)
    assert not rep.h1
    assert "mass 1/2" in rep.witnesses["h1"] and "mass 1" in rep.witnesses["h1"]
    assert not rep.h3
    assert "null member 0" in rep.witnesses["h3"]
    assert not rep.continuity_p and not rep.continuity_q
    assert "continuity_p" in rep.witnesses and "continuity_q" in rep.witnesses


def test_nonexistence_problem_shape():
    prob = nonexistence_problem(3)
    assert prob.space.atoms == ("1", "2", "3")
    assert prob.space.has_tail
    null = prob.p_family.family[0]
    alt = prob.q_family.family[0]
    assert null.tail_mass == 1
    assert alt.atom_mass == (F(1, 2), F(1, 4), F(1, 8))
    assert alt.tail_mass == F(1, 8)
    with pytest.raises(ValueError, match="at least 1"):
        nonexistence_problem(0)


def test_sweep_closed_form():
    rows = truncation_sweep(nonexistence_problem, range(1, 5))
    assert rows == [(1, F(3, 4)), (2, F(7, 8)), (3, F(15, 16)), (4, F(31, 32))]
    quarter = truncation_sweep(
        lambda n: nonexistence_problem(n, F(1, 4)), [1, 2, 3]
    )
    assert quarter == [(1, F(5, 8)), (2, F(13, 16)), (3, F(29, 32))]
    values = [v for _, v in rows]
    assert all(a < b for a, b in zip(values, values[1:]))
    assert all(v < 1 for v in values)
    with pytest.raises(ValueError, match="positive"):
        truncation_sweep(nonexistence_problem, [0])


def test_continuity_implies_attainment():
    # Whenever both families are continuous from above, the optimum is a
    # real test: its worst-case power equals the solved value exactly.
    rng = random.Random(1331)
    for _ in range(15):
        n = rng.randint(2, 4)
        space = SampleSpace(tuple(f"a{i}" for i in range(n)), False)

        def member():
            raw = [rng.randint(0, 5) for _ in range(n)]
            if sum(raw) == 0:
                raw[0] = 1
            return Charge(space, tuple(F(v, sum(raw)) for v in raw), F(0))

        prob = TestProblem(
            space,
            fam("null", *(member() for _ in range(rng.randint(1, 2)))),
            fam("alternative", *(member() for _ in range(rng.randint(1, 2)))),
            rng.choice([F(1, 4), F(1, 2), F(3, 4)]),
        )
        assert check_continuity_from_above(prob.p_family)
        assert check_continuity_from_above(prob.q_family)
        sol = solve_minimax(prob)
        worst = min(expectation(q, sol.x_alpha) for q in prob.q_family.family)
        assert worst == sol.gamma_alpha


def test_full_nonexistence_instance_fails_h3():
    prob = nonexistence_problem(5)
    rep = hypothesis_report(prob)
    assert not rep.h3
    # The truncation parks the geometric residual on the tail marker, so
    # both sides keep mass along the canonical sequence and h1 fails too.
    assert not rep.h1
    assert "mass 1/32" in rep.witnesses["h1"]
    sol = solve_minimax(prob)
    assert sol.gamma_alpha == F(63, 64)
    assert sol.case is Case.LEVEL_ATTAINED
