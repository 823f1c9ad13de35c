"""Most powerful randomized tests between two single charges.

This is the classical two-measure construction, done with exact densities
against the average of the pair: sort atoms by the density ratio of the
alternative to the null, accept greedily from the top until the level
budget alpha runs out, and randomize with one constant on the class where
it runs out. Atoms where the null density vanishes but the alternative's
does not have ratio +infinity: they cost no level and are always accepted
first.

When the alternative's support is too small to spend the whole budget the
test simply accepts that support and stops short of alpha; that situation
is flagged on the result rather than papered over by randomizing on atoms
that add level but no power.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .charge_model import (
    ONE,
    ZERO,
    Charge,
    TestFunction,
    expectation,
    frac,
    radon_nikodym,
)


@dataclass(frozen=True)
class NpResult:
    """A most powerful level-alpha test for one pair of charges.

    ``test`` equals 1 above the ratio cut ``kappa``, ``b`` on the cut, and
    0 below it, relative to the average of the pair; ``b`` is a single
    constant and is used on one ratio class only. ``attained_level`` is
    below ``alpha`` exactly when ``level_slack`` is set.
    """

    kappa: Fraction
    b: Fraction
    test: TestFunction
    attained_level: Fraction
    power: Fraction
    level_slack: bool


def np_test(p: Charge, q: Charge, alpha: Fraction) -> NpResult:
    """Most powerful test of ``p`` against ``q`` at level ``alpha``.

    Both charges must be countably additive probability charges on one
    space. The returned test is exactly optimal: its power equals the
    maximum of the alternative expectation over all [0, 1]-valued tests
    with null expectation at most alpha.
    """
    alpha = frac(alpha)
    if not (ZERO < alpha < ONE):
        raise ValueError(f"alpha must lie strictly between 0 and 1, got {alpha}")
    if p.space != q.space:
        raise ValueError("both charges must live on one sample space")
    if not p.is_countably_additive or not q.is_countably_additive:
        raise ValueError("tail mass present; this construction needs countably additive charges")
    if not p.is_probability or not q.is_probability:
        raise ValueError("both charges must be probability charges")

    dens = radon_nikodym(p, q)
    space = p.space
    # Group atoms into ratio classes h/g; g == 0 means ratio +infinity.
    infinite: list[int] = []
    finite: dict[Fraction, list[int]] = {}
    for i in range(space.n_atoms):
        if i in dens.base_null:
            continue
        g, h = dens.g[i], dens.h[i]
        if g == 0:
            infinite.append(i)
        else:
            finite.setdefault(h / g, []).append(i)

    values = [ZERO] * space.n_atoms
    remaining = alpha
    kappa = ZERO
    b = ZERO
    filled_out = True
    ordered: list[tuple["Fraction | None", list[int]]] = [(None, infinite)]
    for ratio in sorted(finite, reverse=True):
        if ratio > 0:
            ordered.append((ratio, finite[ratio]))
    for ratio, idxs in ordered:
        pmass = sum((p.atom_mass[i] for i in idxs), ZERO)
        if pmass <= remaining:
            for i in idxs:
                values[i] = ONE
            remaining -= pmass
            continue
        b = remaining / pmass
        for i in idxs:
            values[i] = b
        kappa = ratio
        remaining = ZERO
        filled_out = False
        break
    if filled_out and remaining > 0:
        # The whole support of q is accepted and the budget is not spent;
        # this is the slack situation and no randomization can buy power.
        kappa = ZERO
        b = ZERO

    test = TestFunction(space, tuple(values), ZERO)
    attained = expectation(p, test)
    power = expectation(q, test)
    return NpResult(
        kappa=kappa,
        b=b,
        test=test,
        attained_level=attained,
        power=power,
        level_slack=attained < alpha,
    )
