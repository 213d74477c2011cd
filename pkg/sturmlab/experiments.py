import enum
import json
import logging
import time
import warnings
from fractions import Fraction
from typing import Sequence

import numpy as np
import pandas as pd

from sturmlab.approximation import (
    DEFAULT_CUTOFF_Q,
    alpha_gaps,
    certificates_along_branching,
    classify_good_convergents,
    estimate_M,
    exponent_five_halves_witnesses,
    near_reduced_bound,
)
from sturmlab.arithmetic import certified_cf, format_fraction, real_from_digits
from sturmlab.complexity import DEFAULT_ENGINE, compute_profile, fit_quasi_sturmian
from sturmlab.exceptions import PrecisionError, SpecError
from sturmlab.specs import DEFAULT_REBASE_GUARD, MorphicSpec, NumberSpec, certified_digits
from sturmlab.sunits import SUnitEquation, multiplicative_independence, nondegenerate_counts, sunit_enumerate


DEFAULT_N_MAX = 200
DEFAULT_PREFIX_LENGTH = 10**4
DEFAULT_N_TAIL = 20
DEFAULT_FIT_DIVISOR = 8
DEFAULT_ZMAX = 25
DEFAULT_STABILITY_WINDOW = 5

logger = logging.getLogger("sturmlab.experiments")


def jsonable(value):
    """Convert exact rationals, numpy scalars, enums and missing values for JSON output."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, Fraction):
        return format_fraction(value)
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if value is None or value is pd.NA:
        return None
    return value


class ExperimentReport:
    """
    Result of one CLI command: the configuration it ran with, a per-row table, structured
    results and the certified ranges. Wall-clock time is kept on the object and in the logs
    but never serialized, so identical configurations give byte-identical output.
    """

    def __init__(
        self,
        command: str,
        config: dict,
        table: pd.DataFrame = None,
        results: dict = None,
        certification: dict = None,
    ):
        self.command = command
        self.config = config
        self.table = table if table is not None else pd.DataFrame()
        self.results = results or {}
        self.certification = certification or {}
        self.wall_clock = None

    def to_dict(self) -> dict:
        return jsonable({
            "command": self.command,
            "config": self.config,
            "certification": self.certification,
            "results": self.results,
            "table": self.table.astype(object).to_dict(orient="records"),
        })

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        return self.table.to_csv(index=False)

    def render(self, fmt: str = "json") -> str:
        if fmt == "json":
            return self.to_json()
        if fmt == "csv":
            return self.to_csv()
        raise ValueError(f"unknown output format {fmt!r} (choose json or csv)")

    def write(self, file: str, fmt: str = "json"):
        with open(file, "w") as f:
            f.write(self.render(fmt))
        logger.info(f"wrote {self.command} report to {file}")

    def __repr__(self):
        return f"ExperimentReport(command = {self.command}, rows = {len(self.table)})"


def _timed(report: ExperimentReport, start: float) -> ExperimentReport:
    report.wall_clock = time.perf_counter() - start
    logger.info(f"{report.command} finished in {report.wall_clock:.2f}s")
    return report


def cmd_complexity(
    spec: NumberSpec,
    bases: Sequence[int],
    n_max: int = DEFAULT_N_MAX,
    L: int = DEFAULT_PREFIX_LENGTH,
    include_uncertified: bool = False,
    guard: int = DEFAULT_REBASE_GUARD,
    engine: str = DEFAULT_ENGINE,
) -> ExperimentReport:
    """
    Table of p(n, xi, b) and r(n, xi, b) for every base together with
    D(n) = sum_b (p(n, xi, b) - n), which is p(n, xi, r) + p(n, xi, s) - 2n for two bases.

    Digits in each base are certified from the first L native digits. A row is certified when
    n does not exceed the number of certified digits in any base; only certified rows are kept
    unless include_uncertified is set.

    :param spec: the number
    :param bases: one or more bases
    :param n_max: largest n
    :param L: number of native digits
    :param include_uncertified: keep rows beyond the certified range (flagged certified = False)
    :param guard: digits given up per rebase
    :param engine: factor engine
    :return: the report
    """
    start = time.perf_counter()
    bases = [int(b) for b in bases]
    if not bases:
        raise ValueError("at least one base is required")
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1 (received {n_max})")

    digit_counts, profiles = {}, {}
    for b in bases:
        word = certified_digits(spec, b, L, guard=guard)
        digit_counts[b] = len(word)
        if len(word) >= 1:
            profiles[b] = compute_profile(word, min(n_max, len(word)), len(word), engine=engine)

    certified_n_max = min(min(digit_counts.values()), n_max)
    last_row = n_max if include_uncertified else certified_n_max
    rows = []
    for n in range(1, last_row + 1):
        row = {"n": n}
        for b in bases:
            profile = profiles.get(b)
            row[f"p_{b}"] = profile.p.get(n) if profile else None
            row[f"r_{b}"] = profile.r.get(n) if profile else None
        known = [row[f"p_{b}"] for b in bases]
        row["D"] = None if None in known else sum(p - n for p in known)
        row["certified"] = n <= certified_n_max
        rows.append(row)

    columns = ["n"] + [f"{x}_{b}" for b in bases for x in ("p", "r")] + ["D", "certified"]
    table = pd.DataFrame(rows, columns=columns)
    for column in columns[1:-1]:
        table[column] = pd.array(table[column].tolist(), dtype="Int64")

    if certified_n_max < n_max:
        logger.warning(f"complexity table of {spec.name} is certified only up to n={certified_n_max}")
    D = [row["D"] for row in rows if row["certified"]]
    results = {
        "D_last": D[-1] if D else None,
        "D_min": min(D) if D else None,
        "p_equals_n_plus_1": {
            str(b): all(profiles[b].p[n] == n + 1 for n in range(1, certified_n_max + 1)) if b in profiles else None
            for b in bases
        },
    }
    config = {"spec": spec.to_dict(), "bases": bases, "n_max": n_max, "L": L, "guard": guard,
              "include_uncertified": include_uncertified}
    certification = {"digits": {str(b): digit_counts[b] for b in bases}, "certified_n_max": certified_n_max}
    return _timed(ExperimentReport("complexity", config, table, results, certification), start)


def cmd_dependent_bases(
    spec: NumberSpec,
    r: int,
    s: int,
    n_max: int = DEFAULT_N_MAX,
    L: int = DEFAULT_PREFIX_LENGTH,
    n_tail: int = DEFAULT_N_TAIL,
    include_uncertified: bool = False,
    guard: int = DEFAULT_REBASE_GUARD,
) -> ExperimentReport:
    """
    D(n) for two multiplicatively dependent bases r^m = s^l, compared with the lower bound
    m + l on the certified tail [n_tail, n_max].

    :raises SpecError: for a rational number
    :raises ValueError: for independent bases (use cmd_complexity)
    """
    if spec.is_rational:
        raise SpecError("the dependent-bases bound concerns irrational numbers; rational specs are refused")
    witness = multiplicative_independence(r, s)
    if witness.independent:
        raise ValueError(f"{r} and {s} are multiplicatively independent; use the complexity command instead")
    bound = witness.m + witness.l

    report = cmd_complexity(spec, [r, s], n_max=n_max, L=L, include_uncertified=include_uncertified,
                            guard=guard)
    report.command = "dependent"
    report.table["bound"] = bound
    tail = report.table[(report.table["n"] >= n_tail) & report.table["certified"]]
    violations = [int(n) for n, d in zip(tail["n"], tail["D"]) if d < bound]
    if violations:
        logger.warning(f"D(n) < {bound} at n = {violations[:10]}")
    report.config.update({"r": r, "s": s, "n_tail": n_tail})
    report.results.update({
        "m": witness.m,
        "l": witness.l,
        "bound": bound,
        "tail": [n_tail, report.certification["certified_n_max"]],
        "violations": violations,
        "holds": not violations,
    })
    return report


def cmd_cf_analysis(
    spec: NumberSpec,
    b: int,
    L: int = DEFAULT_PREFIX_LENGTH,
    report_path: str = None,
    cutoff_q: int = DEFAULT_CUTOFF_Q,
    s_max: int = None,
    guard: int = DEFAULT_REBASE_GUARD,
) -> ExperimentReport:
    """
    The approximation pipeline on the base-b digits of a number: quasi-Sturmian fit, the
    constant M, certified continued fraction, q^(-5/2) witnesses, shape classification of
    the convergents with |xi - p/q| < 1/(M q^2), and repetition certificates.

    :param spec: the number
    :param b: base to analyse
    :param L: number of native digits
    :param report_path: where to write the JSON report (optional)
    :param cutoff_q: smallest q for which a missing decomposition counts as a violation
    :param s_max: largest s in shape decompositions (default 4 log(1/width))
    :param guard: digits given up when rebasing
    :raises PrecisionError: when fewer than two partial quotients are certified
    """
    start = time.perf_counter()
    word = certified_digits(spec, b, L, guard=guard)
    L_b = len(word)
    x = spec.interval(L) if spec.is_rational else real_from_digits(word.prefix(L_b), b)

    cf = certified_cf(x)
    if len(cf) < 2:
        raise PrecisionError(f"only {len(cf)} partial quotients of {spec.name} are certified from {L_b} "
                             f"base-{b} digits; increase --prefix")

    n_fit = max(1, L_b // DEFAULT_FIT_DIVISOR)
    profile = compute_profile(word, n_fit, L_b) if L_b >= 1 else None
    fit = fit_quasi_sturmian(profile) if profile else None
    if fit is None:
        fallback = profile.p[n_fit] - n_fit if profile else 1
        rho = max(1, fallback)
        warnings.warn(f"no quasi-Sturmian fit for {spec.name} in base {b} up to n={n_fit}; "
                      f"proceeding descriptively with rho={rho}")
    else:
        rho = fit.k
    constant = estimate_M(rho, b)

    witnesses = exponent_five_halves_witnesses(x, cf)
    classification = classify_good_convergents(x, b, constant.M, cf, s_max=s_max, cutoff_q=cutoff_q)
    records = certificates_along_branching(word, n_fit, L_b, b, source=x, cf=cf) if profile else []
    gcd_bound = near_reduced_bound(rho, b)

    results = {
        "base": b,
        "rho": rho,
        "M": constant.M,
        "fit": {"k": fit.k, "n0": fit.n0, "verified_up_to": fit.verified_up_to} if fit else None,
        "cf": cf.to_dict(),
        "max_partial_quotient": cf.max_partial_quotient,
        "witnesses_5_2": [format_fraction(c) for c in witnesses],
        "convergents": [c.to_dict() for c in classification.convergents],
        "summary": classification.summary(),
        "certificates": [record.to_dict() for record in records],
        "certificates_near_reduced": all(record.gcd <= gcd_bound for record in records),
        "alpha_gaps": alpha_gaps(profile) if profile else [],
    }
    if isinstance(spec, MorphicSpec):
        results["prefix_word_length"] = len(spec.prefix_word)
    config = {"spec": spec.to_dict(), "b": b, "L": L, "cutoff_q": cutoff_q, "s_max": classification.s_max,
              "guard": guard}
    certification = {"digits": L_b, "partial_quotients": len(cf), "fit_range": n_fit}
    report = ExperimentReport("cf", config, classification.to_frame(), results, certification)
    logger.info(f"{spec.name} base {b}: {len(witnesses)} witnesses, {len(classification.passing)} convergents "
                f"pass 1/(Mq^2), max m = {classification.max_m}")
    if report_path:
        report.write(report_path, "json")
    return _timed(report, start)


def cmd_sunit(m1: int, m2: int, r: int, s: int, zmax: int = DEFAULT_ZMAX) -> ExperimentReport:
    """Solutions of the S-unit equation in the box [0, zmax]^4, with non-degenerate counts for the last few box sizes."""
    start = time.perf_counter()
    equation = SUnitEquation(m1, m2, r, s)
    solutions = sunit_enumerate(m1, m2, r, s, zmax)
    window = list(range(max(0, zmax - DEFAULT_STABILITY_WINDOW), zmax + 1))
    counts = nondegenerate_counts(m1, m2, r, s, window)
    table = pd.DataFrame(
        [list(sol.z) + [sol.degenerate, sol.special_family] for sol in solutions],
        columns=["z1", "z2", "z3", "z4", "degenerate", "special_family"],
    )
    results = {
        "equation": equation.to_dict(),
        "zmax": zmax,
        "solutions": [sol.to_dict() for sol in solutions],
        "nondegenerate_counts": {str(z): c for z, c in counts.items()},
        "stable": len(set(counts.values())) <= 1,
    }
    config = {"m1": m1, "m2": m2, "r": r, "s": s, "zmax": zmax}
    return _timed(ExperimentReport("sunit", config, table, results, {"box": [0, zmax]}), start)

