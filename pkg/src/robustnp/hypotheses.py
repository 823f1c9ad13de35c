"""Executable forms of the structural hypotheses, plus truncation sweeps.

In the tail model, a sequence of events decreasing to the empty set can
only retain expectation through the tail marker: the canonical sequence
drops explicit atoms one by one while keeping the tail, and its limiting
mass under any charge is exactly the charge's tail mass. Every other
decreasing sequence is squeezed below that. Quantifiers over all
sequences therefore collapse to statements about tail masses, which is
what makes the checks below exact rather than sampled.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .charge_model import (
    ONE,
    ZERO,
    Charge,
    Event,
    SampleSpace,
    SublinearExpectation,
    TestFunction,
    expectation,
    frac,
    upper_expectation,
)
from .minimax import TestProblem, solve_minimax


@dataclass(frozen=True)
class HypothesisReport:
    """Joint outcome of the structural checks for one problem.

    ``h2_at`` maps each probed test function to its check result. Every
    False entry has an explanation under the matching key in
    ``witnesses``.
    """

    h1: bool
    h2_at: dict[TestFunction, bool]
    h3: bool
    continuity_p: bool
    continuity_q: bool
    witnesses: dict[str, str]


def canonical_tail_sequence(space: SampleSpace) -> list[Event]:
    """Events shrinking to the tail marker: drop explicit atoms left to right.

    On the unmodeled countable remainder these stand for a sequence
    decreasing to the empty set whose expectations converge to the tail
    mass.
    """
    if not space.has_tail:
        raise ValueError("the canonical sequence needs a tail marker")
    return [
        Event(space, frozenset(space.atoms[i:]), True)
        for i in range(space.n_atoms + 1)
    ]


def _max_tail(family: SublinearExpectation) -> tuple[Fraction, int]:
    masses = [c.tail_mass for c in family.family]
    best = max(masses)
    return best, masses.index(best)


def check_h1(p_family: SublinearExpectation, q_family: SublinearExpectation) -> bool:
    """Null limits vanish whenever alternative limits do not.

    Along the canonical sequence the limits are the maximal tail masses,
    so the condition holds iff one of the two families is tail-free:
    either no alternative limit is nonzero (vacuous) or every null limit
    is zero.
    """
    if p_family.space != q_family.space:
        raise ValueError("families live on different sample spaces")
    q_tail, _ = _max_tail(q_family)
    p_tail, _ = _max_tail(p_family)
    return q_tail == 0 or p_tail == 0


def check_h2_at(
    p_family: SublinearExpectation, x: TestFunction, k_max: int
) -> bool:
    """Shaving x strictly lowers its upper null expectation, at every depth.

    Checks the finitely many depths 1/K for K up to ``k_max`` directly,
    then settles all larger K at once: for large K the shaved expectation
    of a member c is its plain expectation minus c{x > 0}/K, so strictness
    beyond the grid is equivalent to every maximizing member putting
    positive mass where x is positive. Vacuously true when the upper
    expectation is 0.
    """
    if k_max < 1:
        raise ValueError(f"k_max must be at least 1, got {k_max}")
    if x.space != p_family.space:
        raise ValueError("test and family live on different sample spaces")
    base = upper_expectation(p_family, x)
    if base == 0:
        return True
    for k in range(1, k_max + 1):
        if upper_expectation(p_family, x.shaved(Fraction(1, k))) >= base:
            return False
    for c in p_family.family:
        if expectation(c, x) == base:
            charges_support = any(
                m > 0 and v > 0 for m, v in zip(c.atom_mass, x.atom_value)
            ) or (c.tail_mass > 0 and x.tail_value > 0)
            if not charges_support:
                return False
    return True


def check_h3(p_family: SublinearExpectation, q_family: SublinearExpectation) -> bool:
    """Neither family keeps full mass along events shrinking to nothing."""
    if p_family.space != q_family.space:
        raise ValueError("families live on different sample spaces")
    return _max_tail(p_family)[0] < ONE and _max_tail(q_family)[0] < ONE


def check_continuity_from_above(family: SublinearExpectation) -> bool:
    """True iff every member is countably additive (no tail mass at all)."""
    return _max_tail(family)[0] == 0


def hypothesis_report(
    prob: TestProblem,
    tests: Sequence[TestFunction] = (),
    k_max: int = 10,
) -> HypothesisReport:
    """Run all checks for one problem and collect witnesses for failures."""
    p_family, q_family = prob.p_family, prob.q_family
    witnesses: dict[str, str] = {}

    h1 = check_h1(p_family, q_family)
    if not h1:
        q_tail, qi = _max_tail(q_family)
        p_tail, pi = _max_tail(p_family)
        witnesses["h1"] = (
            f"along the canonical shrinking events, alternative member {qi} keeps "
            f"mass {q_tail} while null member {pi} keeps mass {p_tail}"
        )

    h3 = check_h3(p_family, q_family)
    if not h3:
        p_tail, pi = _max_tail(p_family)
        q_tail, qi = _max_tail(q_family)
        side = (
            f"null member {pi} keeps mass {p_tail}"
            if p_tail == ONE
            else f"alternative member {qi} keeps mass {q_tail}"
        )
        witnesses["h3"] = f"along the canonical shrinking events, {side}"

    continuity_p = check_continuity_from_above(p_family)
    if not continuity_p:
        tail, i = _max_tail(p_family)
        witnesses["continuity_p"] = (
            f"null member {i} keeps mass {tail} along events shrinking to the empty set"
        )
    continuity_q = check_continuity_from_above(q_family)
    if not continuity_q:
        tail, i = _max_tail(q_family)
        witnesses["continuity_q"] = (
            f"alternative member {i} keeps mass {tail} along events shrinking to the empty set"
        )

    h2_at: dict[TestFunction, bool] = {}
    for idx, x in enumerate(tests):
        ok = check_h2_at(p_family, x, k_max)
        h2_at[x] = ok
        if not ok:
            maximizers = [
                i
                for i, c in enumerate(p_family.family)
                if expectation(c, x) == upper_expectation(p_family, x)
            ]
            witnesses[f"h2_at[{idx}]"] = (
                f"shaving this test does not strictly lower the upper null "
                f"expectation (maximizing members: {maximizers})"
            )

    return HypothesisReport(
        h1=h1,
        h2_at=h2_at,
        h3=h3,
        continuity_p=continuity_p,
        continuity_q=continuity_q,
        witnesses=witnesses,
    )


def nonexistence_problem(n: int, alpha: Fraction = Fraction(1, 2)) -> TestProblem:
    """Truncation at n atoms of the classic pair without an optimal test.

    The null charge is purely finitely additive (all mass on the tail
    marker); the alternative is geometric on the explicit atoms with its
    remainder 1/2^n also on the tail. The exact optimal value of the
    truncation is 1 - (1 - alpha) / 2^n: increasing in n, supremum 1,
    never 1, which is the finite shadow of the non-existence phenomenon.
    """
    if n < 1:
        raise ValueError(f"truncation size must be at least 1, got {n}")
    alpha = frac(alpha)
    space = SampleSpace(tuple(str(k) for k in range(1, n + 1)), has_tail=True)
    pure = Charge(space, (ZERO,) * n, ONE)
    geo_masses = tuple(Fraction(1, 2**k) for k in range(1, n + 1))
    geo = Charge(space, geo_masses, Fraction(1, 2**n))
    return TestProblem(
        space,
        SublinearExpectation((pure,), "null"),
        SublinearExpectation((geo,), "alternative"),
        alpha,
    )


GENERATORS: dict[str, Callable[[int], TestProblem]] = {
    "nonexistence": nonexistence_problem,
}


def truncation_sweep(
    generator: Callable[[int], TestProblem], sizes: Iterable[int]
) -> list[tuple[int, Fraction]]:
    """Exact optimal value of generator(n) for each requested size.

    Values are returned as computed; callers that expect monotone growth
    should check it themselves, a dip is data and not an error here.
    """
    out: list[tuple[int, Fraction]] = []
    for n in sizes:
        n = int(n)
        if n < 1:
            raise ValueError(f"sizes must be positive, got {n}")
        sol = solve_minimax(generator(n))
        out.append((n, sol.gamma_alpha))
    return out
