"""Command line front end: load problems, run the pipeline, emit reports.

Problem files are JSON with exact rationals as "num/den" strings:

    {
      "description": "optional free text",
      "atoms": ["w1", "w2"],
      "has_tail": false,
      "p_family": [{"w1": "1/2", "w2": "1/2"}],
      "q_family": [{"w2": "1"}],
      "alpha": "1/3"
    }

The key "tail" inside a charge holds its tail mass and is therefore
reserved as an atom label. Floats are rejected: exactness is the point.

Exit codes: 0 success, 2 input problem, 3 certificate failure, 4 oracle
mismatch under --oracle.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from functools import partial
from pathlib import Path

from .charge_model import (
    Charge,
    SampleSpace,
    SublinearExpectation,
    TestFunction,
    frac,
    yosida_hewitt,
)
from .hypotheses import GENERATORS, hypothesis_report, truncation_sweep
from .minimax import (
    Case,
    CertificateError,
    PureLeastFavorableError,
    TestProblem,
    beta_criterion_check,
    compute_beta,
    default_reference_charges,
    detect_case,
    kkt_certificate,
    solve_minimax,
    verify_degenerate_form,
    verify_threshold_form,
)
from .neyman_pearson import np_test
from .oracle import np_oracle, vertex_enumerate

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CERTIFICATE = 3
EXIT_MISMATCH = 4


class SpecError(ValueError):
    """A problem file failed to parse or validate; message names the spot."""


def _parse_rational(value, where: str) -> Fraction:
    if isinstance(value, float):
        raise SpecError(
            f"{where}: floats are not exact, write the rational as a 'num/den' string"
        )
    try:
        return frac(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise SpecError(f"{where}: {exc}") from None


def _parse_charge(space: SampleSpace, data, where: str) -> Charge:
    if not isinstance(data, dict):
        raise SpecError(f"{where}: expected an object mapping atom labels to masses")
    entries = dict(data)
    tail_raw = entries.pop("tail", 0)
    unknown = set(entries) - set(space.atoms)
    if unknown:
        raise SpecError(f"{where}: unknown atom labels {sorted(unknown)}")
    masses = {a: _parse_rational(v, f"{where}[{a!r}]") for a, v in entries.items()}
    tail = _parse_rational(tail_raw, f"{where}['tail']")
    try:
        charge = Charge.from_mapping(space, masses, tail)
    except (TypeError, ValueError) as exc:
        raise SpecError(f"{where}: {exc}") from None
    if not charge.is_probability:
        raise SpecError(f"{where}: masses sum to {charge.total}, expected 1")
    return charge


def parse_problem(data, alpha_override: "Fraction | None" = None) -> TestProblem:
    if not isinstance(data, dict):
        raise SpecError("top level: expected a JSON object")
    for key in ("atoms", "p_family", "q_family", "alpha"):
        if key not in data:
            raise SpecError(f"top level: missing required key {key!r}")
    atoms = data["atoms"]
    if not isinstance(atoms, list) or not all(isinstance(a, str) for a in atoms):
        raise SpecError("atoms: expected a list of strings")
    has_tail = data.get("has_tail", False)
    if not isinstance(has_tail, bool):
        raise SpecError("has_tail: expected true or false")
    try:
        space = SampleSpace(tuple(atoms), has_tail)
    except ValueError as exc:
        raise SpecError(f"atoms: {exc}") from None
    for side in ("p_family", "q_family"):
        if not isinstance(data[side], list) or not data[side]:
            raise SpecError(f"{side}: expected a non-empty list of charges")
    p_members = tuple(
        _parse_charge(space, c, f"p_family[{i}]") for i, c in enumerate(data["p_family"])
    )
    q_members = tuple(
        _parse_charge(space, c, f"q_family[{i}]") for i, c in enumerate(data["q_family"])
    )
    alpha = (
        alpha_override
        if alpha_override is not None
        else _parse_rational(data["alpha"], "alpha")
    )
    try:
        return TestProblem(
            space,
            SublinearExpectation(p_members, "null"),
            SublinearExpectation(q_members, "alternative"),
            alpha,
        )
    except ValueError as exc:
        raise SpecError(str(exc)) from None


def serialize_problem(prob: TestProblem) -> dict:
    def charge_obj(c: Charge) -> dict:
        obj = {
            a: str(m) for a, m in zip(prob.space.atoms, c.atom_mass) if m != 0
        }
        if c.tail_mass != 0:
            obj["tail"] = str(c.tail_mass)
        return obj

    return {
        "atoms": list(prob.space.atoms),
        "has_tail": prob.space.has_tail,
        "p_family": [charge_obj(c) for c in prob.p_family.family],
        "q_family": [charge_obj(c) for c in prob.q_family.family],
        "alpha": str(prob.alpha),
    }


def load_problem(path: str, alpha_override: "Fraction | None" = None) -> TestProblem:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise SpecError(f"{path}: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None
    return parse_problem(data, alpha_override)


def _rat(v: Fraction) -> dict:
    return {"exact": str(v), "decimal": str(float(v))}


def _test_obj(x: TestFunction) -> dict:
    obj = {a: _rat(v) for a, v in zip(x.space.atoms, x.atom_value)}
    if x.space.has_tail:
        obj["tail"] = _rat(x.tail_value)
    return obj


def _charge_obj(c: Charge) -> dict:
    obj = {a: _rat(m) for a, m in zip(c.space.atoms, c.atom_mass)}
    if c.space.has_tail:
        obj["tail"] = _rat(c.tail_mass)
    return obj


def _representation_obj(prob: TestProblem, sol) -> dict:
    if sol.lam == 0:
        return {
            "form": "none",
            "reason": "the least favorable alternative mixture is purely finitely additive",
        }
    if sol.case is Case.LEVEL_ATTAINED:
        try:
            rep = verify_threshold_form(prob, sol)
        except PureLeastFavorableError as exc:
            return {"form": "none", "reason": str(exc)}
        return {
            "form": "threshold",
            "verdict": rep.verdict,
            "kappa": _rat(rep.kappa),
            "kappa_formula": _rat(rep.kappa_formula),
            "tau": _rat(rep.tau),
            "lambda": _rat(rep.lam),
            "classification": rep.classification,
            "b_values": {a: _rat(v) for a, v in rep.b_values.items()},
            "violations": list(rep.violations),
            "precondition_support": rep.precondition_support,
            "precondition_grid": rep.precondition_grid,
        }
    references = default_reference_charges(prob.space, count=3)
    labels = ["uniform"] + [f"random_{i}" for i in range(1, len(references))]
    checks = []
    for label, ref in zip(labels, references):
        rep = verify_degenerate_form(prob, sol, ref)
        checks.append(
            {
                "reference": label,
                "verdict": rep.verdict,
                "gamma_consistent": rep.gamma_consistent,
                "violations": list(rep.violations),
            }
        )
    return {
        "form": "degenerate",
        "verdict": all(c["verdict"] for c in checks),
        "lambda": _rat(sol.lam),
        "checks": checks,
    }


def _hypotheses_obj(prob: TestProblem, sol) -> dict:
    rep = hypothesis_report(prob, tests=[sol.x_alpha], k_max=10)
    return {
        "h1": rep.h1,
        "h2_at_solution": next(iter(rep.h2_at.values())),
        "h3": rep.h3,
        "continuity_p": rep.continuity_p,
        "continuity_q": rep.continuity_q,
        "witnesses": dict(rep.witnesses),
    }


def _emit(report: dict, json_out: "str | None") -> None:
    if json_out:
        text = json.dumps(report, indent=2, sort_keys=True) + "\n"
        Path(json_out).write_text(text)


def _parse_alpha_flag(raw: "str | None") -> "Fraction | None":
    if raw is None:
        return None
    alpha = _parse_rational(raw, "--alpha")
    if not (0 < alpha < 1):
        raise SpecError(f"--alpha: must lie strictly between 0 and 1, got {alpha}")
    return alpha


def cmd_solve(args) -> int:
    prob = load_problem(args.spec, _parse_alpha_flag(args.alpha))
    sol = solve_minimax(prob)
    case = detect_case(prob, sol)
    kkt = kkt_certificate(prob, sol)
    beta = None
    criterion = None
    if sol.lam > 0:
        beta = compute_beta(prob.p_family, yosida_hewitt(sol.q_alpha).countable)
        criterion = beta_criterion_check(prob, sol)
    report = {
        "problem": {
            "atoms": list(prob.space.atoms),
            "has_tail": prob.space.has_tail,
            "alpha": _rat(prob.alpha),
            "p_members": len(prob.p_family),
            "q_members": len(prob.q_family),
        },
        "value": _rat(sol.gamma_alpha),
        "attained_level": _rat(sol.attained_level),
        "case": case.value,
        "test": _test_obj(sol.x_alpha),
        "q_weights": [_rat(wt) for wt in sol.q_weights],
        "q_alpha": _charge_obj(sol.q_alpha),
        "lambda": _rat(sol.lam),
        "gamma_c": _rat(sol.gamma_c),
        "p_weights": None if sol.p_weights is None else [_rat(wt) for wt in sol.p_weights],
        "beta": None if beta is None else _rat(beta),
        "beta_criterion_matches_case": criterion,
        "representation": _representation_obj(prob, sol),
        "hypotheses": _hypotheses_obj(prob, sol),
        "certificate": {
            "status": "verified",
            "duality_gap": _rat(kkt.duality_gap),
        },
    }
    exit_code = EXIT_OK
    if args.oracle:
        result = vertex_enumerate(prob)
        matches = result.value == sol.gamma_alpha
        report["oracle"] = {
            "value": _rat(result.value),
            "matches": matches,
            "optima": len(result.argmax_tests),
            "enumeration_size": result.enumeration_size,
        }
        if not matches:
            print(
                f"oracle mismatch: solver value {sol.gamma_alpha}, "
                f"oracle value {result.value}",
                file=sys.stderr,
            )
            exit_code = EXIT_MISMATCH

    print(
        f"problem: {len(prob.space.atoms)} atoms"
        + (" + tail" if prob.space.has_tail else "")
        + f", |P|={len(prob.p_family)}, |Q|={len(prob.q_family)}, alpha={prob.alpha}"
    )
    print(f"value: {sol.gamma_alpha} ({float(sol.gamma_alpha)})")
    print(f"case: {case.value}   attained level: {sol.attained_level}")
    print("test:")
    for a, v in zip(prob.space.atoms, sol.x_alpha.atom_value):
        print(f"  {a} = {v}")
    if prob.space.has_tail:
        print(f"  tail = {sol.x_alpha.tail_value}")
    print(f"q_weights: {', '.join(str(wt) for wt in sol.q_weights)}")
    print(f"lambda: {sol.lam}   gamma_c: {sol.gamma_c}")
    if beta is not None:
        print(f"beta: {beta}   criterion matches case: {criterion}")
    rep = report["representation"]
    if rep["form"] == "none":
        print(f"representation: none ({rep['reason']})")
    else:
        extra = f" kappa={rep['kappa']['exact']}" if rep["form"] == "threshold" else ""
        print(f"representation: {rep['form']} verdict={rep['verdict']}{extra}")
    hyp = report["hypotheses"]
    print(
        f"hypotheses: h1={hyp['h1']} h2(x_alpha)={hyp['h2_at_solution']} "
        f"h3={hyp['h3']} continuity=({hyp['continuity_p']}, {hyp['continuity_q']})"
    )
    print("certificate: verified (duality gap 0)")
    if args.oracle:
        print(
            f"oracle: value {report['oracle']['value']['exact']}, "
            f"matches={report['oracle']['matches']}, "
            f"optima={report['oracle']['optima']}"
        )
    _emit(report, args.json_out)
    return exit_code


def cmd_np(args) -> int:
    prob = load_problem(args.spec, _parse_alpha_flag(args.alpha))
    if len(prob.p_family) != 1 or len(prob.q_family) != 1:
        raise SpecError(
            "the np command needs exactly one charge per family, got "
            f"{len(prob.p_family)} and {len(prob.q_family)}"
        )
    p = prob.p_family.family[0]
    q = prob.q_family.family[0]
    res = np_test(p, q, prob.alpha)
    report = {
        "kappa": _rat(res.kappa),
        "b": _rat(res.b),
        "test": _test_obj(res.test),
        "attained_level": _rat(res.attained_level),
        "power": _rat(res.power),
        "level_slack": res.level_slack,
    }
    exit_code = EXIT_OK
    if args.oracle:
        result = np_oracle(p, q, prob.alpha)
        matches = result.value == res.power
        report["oracle"] = {
            "value": _rat(result.value),
            "matches": matches,
            "enumeration_size": result.enumeration_size,
        }
        if not matches:
            print(
                f"oracle mismatch: np power {res.power}, oracle value {result.value}",
                file=sys.stderr,
            )
            exit_code = EXIT_MISMATCH
    print(f"kappa: {res.kappa}   b: {res.b}")
    print("test:")
    for a, v in zip(prob.space.atoms, res.test.atom_value):
        print(f"  {a} = {v}")
    print(f"attained level: {res.attained_level} (slack: {res.level_slack})")
    print(f"power: {res.power} ({float(res.power)})")
    if args.oracle:
        print(
            f"oracle: value {report['oracle']['value']['exact']}, "
            f"matches={report['oracle']['matches']}"
        )
    _emit(report, args.json_out)
    return exit_code


def _parse_sizes(raw: str) -> list[int]:
    raw = raw.strip()
    try:
        if ":" in raw:
            lo_s, hi_s = raw.split(":", 1)
            lo, hi = int(lo_s), int(hi_s)
            if lo > hi:
                raise SpecError(f"--sizes: empty range {raw!r}")
            sizes = list(range(lo, hi + 1))
        else:
            sizes = [int(s) for s in raw.split(",") if s.strip()]
    except ValueError:
        raise SpecError(
            f"--sizes: expected 'lo:hi' or comma separated integers, got {raw!r}"
        ) from None
    if not sizes:
        raise SpecError("--sizes: no sizes given")
    if any(n < 1 for n in sizes):
        raise SpecError(f"--sizes: sizes must be at least 1, got {sizes}")
    return sizes


def cmd_sweep(args) -> int:
    if args.generator not in GENERATORS:
        raise SpecError(
            f"unknown generator {args.generator!r}; available: {sorted(GENERATORS)}"
        )
    alpha = _parse_alpha_flag(args.alpha) or Fraction(1, 2)
    sizes = _parse_sizes(args.sizes)
    generator = partial(GENERATORS[args.generator], alpha=alpha)
    rows = truncation_sweep(generator, sizes)
    monotone = all(b > a for (_, a), (_, b) in zip(rows, rows[1:]))
    if not monotone:
        print("warning: sweep values are not strictly increasing", file=sys.stderr)
    report = {
        "generator": args.generator,
        "alpha": _rat(alpha),
        "rows": [{"size": n, "value": _rat(v)} for n, v in rows],
        "strictly_increasing": monotone,
    }
    print(f"generator: {args.generator}   alpha: {alpha}")
    for n, v in rows:
        print(f"  N={n}: {v} ({float(v)})")
    _emit(report, args.json_out)
    return EXIT_OK


def cmd_check(args) -> int:
    prob = load_problem(args.spec, _parse_alpha_flag(args.alpha))
    probes = [
        ("constant_1/2", TestFunction.constant(prob.space, Fraction(1, 2))),
        ("ones", TestFunction.constant(prob.space, 1)),
    ]
    rep = hypothesis_report(prob, tests=[x for _, x in probes], k_max=10)
    h2 = {label: rep.h2_at[x] for label, x in probes}
    report = {
        "h1": rep.h1,
        "h2_at": h2,
        "h3": rep.h3,
        "continuity_p": rep.continuity_p,
        "continuity_q": rep.continuity_q,
        "witnesses": dict(rep.witnesses),
    }
    print(f"h1: {rep.h1}")
    for label, value in h2.items():
        print(f"h2 at {label}: {value}")
    print(f"h3: {rep.h3}")
    print(f"continuity: P={rep.continuity_p} Q={rep.continuity_q}")
    for key, text in rep.witnesses.items():
        print(f"witness[{key}]: {text}")
    _emit(report, args.json_out)
    return EXIT_OK


def main(argv: "list[str] | None" = None) -> int:
    parser = argparse.ArgumentParser(
        prog="robustnp",
        description="Exact worst-case tests between families of charges.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_oracle=True):
        p.add_argument("spec", help="path to a problem JSON file")
        p.add_argument("--json", dest="json_out", metavar="OUT", help="write a JSON report")
        p.add_argument("--alpha", help="override the level, e.g. 1/3")
        if with_oracle:
            p.add_argument(
                "--oracle",
                action="store_true",
                help="cross-check against brute force, exit 4 on mismatch",
            )

    common(sub.add_parser("solve", help="solve the worst-case testing problem"))
    common(sub.add_parser("np", help="classical single-pair test"))
    p_sweep = sub.add_parser("sweep", help="solve a generated family over sizes")
    p_sweep.add_argument("generator", help=f"one of {sorted(GENERATORS)}")
    p_sweep.add_argument("--sizes", required=True, help="'lo:hi' or comma separated")
    p_sweep.add_argument("--alpha", help="level for the generated problems")
    p_sweep.add_argument("--json", dest="json_out", metavar="OUT")
    common(sub.add_parser("check", help="run hypothesis checks only"), with_oracle=False)

    args = parser.parse_args(argv)
    handlers = {"solve": cmd_solve, "np": cmd_np, "sweep": cmd_sweep, "check": cmd_check}
    try:
        return handlers[args.command](args)
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CertificateError as exc:
        print(f"certificate error: {exc}", file=sys.stderr)
        return EXIT_CERTIFICATE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
