"""Characteristic-dependence experiments across powers, primes and
homological indices: dependence scans, empirical Kodiyalam-polynomial
fits, regularity profiles, and the proved lower-bound checks.

Everything reported here is finite-window evidence.  The scanner never
extrapolates: a verdict is one of ``evidence-dependent`` /
``evidence-independent`` / ``inconclusive``, judged purely from the
sampled powers, and guard-aborted cells are flagged rather than dropped.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import comb
from pathlib import Path

from .betti import (
    BettiTable,
    betti_at,
    betti_tables,
    betti_tables_auto,
    betti_tables_bounded,
)
from .errors import ArgumentError, BoundViolationError, DisjointnessError
from .fields import FieldSpec, QQ
from .guards import DEFAULT_GUARDS, GuardConfig, ResourceLimitError
from .ideals import Monomial, MonomialIdeal, parse_monomial

SCHEMA_VERSION = "report-v1"


# ---------------------------------------------------------------------------
# Kodiyalam fits: exact finite-difference interpolation, never least squares
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KodiyalamFit:
    """Empirical fit of h -> beta_index(I^h) over one field.

    ``coefficients`` (ascending degree, exact rationals) are present only
    when the finite differences of some order stabilize over the last
    max(3, order+1) entries; the fitted polynomial then reproduces every
    sample in the stabilization window exactly.
    """

    index: int
    field: str
    samples: tuple[tuple[int, int], ...]
    stable: bool
    degree: int | None = None
    coefficients: tuple[Fraction, ...] | None = None

    def evaluate(self, h: int) -> Fraction:
        if self.coefficients is None:
            raise ArgumentError("no stable fit to evaluate")
        acc = Fraction(0)
        for k, c in enumerate(self.coefficients):
            acc += c * h ** k
        return acc

    def to_json(self) -> dict:
        return {
            "i": self.index,
            "field": self.field,
            "samples": [[h, v] for h, v in self.samples],
            "stable": self.stable,
            "degree": self.degree,
            "coefficients": [str(c) for c in self.coefficients]
            if self.coefficients is not None
            else None,
        }


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _newton_coefficients(h0: int, values: list[int]) -> list[Fraction]:
    """Standard-basis coefficients of the unique polynomial of degree
    len(values)-1 through (h0, values[0]), (h0+1, values[1]), ..."""
    diffs = [list(map(Fraction, values))]
    while len(diffs[-1]) > 1:
        prev = diffs[-1]
        diffs.append([b - a for a, b in zip(prev, prev[1:])])
    coeffs = [Fraction(0)] * len(values)
    basis = [Fraction(1)]  # product (x-h0)(x-h0-1).../j!
    for j in range(len(values)):
        lead = diffs[j][0] / Fraction(_factorial(j))
        for k, c in enumerate(basis):
            coeffs[k] += lead * c
        basis = _poly_mul(basis, [Fraction(-(h0 + j)), Fraction(1)])
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _factorial(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def fit_kodiyalam(
    samples: list[tuple[int, int]], index: int, field_tag: str = "Q"
) -> KodiyalamFit:
    """Detect finite-difference stabilization in beta-number samples at
    consecutive powers and return the exact interpolating polynomial.

    Requires at least three samples at consecutive h.  The fit is flagged
    stable for the smallest order r whose difference row is constant over
    its last max(3, r+1) entries; no silent extrapolation happens either
    way.
    """
    if len(samples) < 3:
        raise ArgumentError("need at least three samples")
    hs = [h for h, _ in samples]
    if any(b - a != 1 for a, b in zip(hs, hs[1:])):
        raise ArgumentError("samples must be at consecutive powers")
    values = [v for _, v in samples]

    row = values[:]
    for order in range(len(values)):
        window = max(3, order + 1)
        if len(row) >= window and len(set(row[-window:])) == 1:
            interp = values[-(order + 1):]
            h0 = hs[len(hs) - (order + 1)]
            coeffs = _newton_coefficients(h0, interp)
            fit = KodiyalamFit(
                index=index,
                field=field_tag,
                samples=tuple(samples),
                stable=True,
                degree=len(coeffs) - 1,
                coefficients=tuple(coeffs),
            )
            span = min(len(values), window + order)
            for h, v in samples[-span:]:
                if fit.evaluate(h) != v:  # pragma: no cover - sanity net
                    raise AssertionError("stabilized fit failed to interpolate")
            return fit
        if len(row) < 2:
            break
        row = [b - a for a, b in zip(row, row[1:])]
    return KodiyalamFit(
        index=index, field=field_tag, samples=tuple(samples), stable=False
    )


# ---------------------------------------------------------------------------
# dependence scans
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProbeSpec:
    """Fallback multidegrees for powers whose full table exceeds guards:
    exponent templates may use the symbol h (evaluated per power)."""

    indices: tuple[int, ...]
    exponents: tuple[str, ...]

    def multidegree(self, ideal: MonomialIdeal, h: int) -> Monomial:
        vector = tuple(
            h if tok == "h" else int(tok) for tok in self.exponents
        )
        return Monomial.from_vector(ideal.context, vector)


@dataclass
class ScanCell:
    h: int
    field: str
    total_betti: list[list[int]] | None = None
    probes: list[dict] | None = None
    pd: int | None = None
    reg: int | None = None
    aborted: bool = False

    def to_json(self) -> dict:
        return {
            "h": self.h,
            "field": self.field,
            "total_betti": self.total_betti,
            "probes": self.probes,
            "pd": self.pd,
            "reg": self.reg,
            "aborted": self.aborted,
        }


@dataclass
class DependenceReport:
    request: dict
    cells: list[ScanCell]
    diffs: list[dict]
    kodiyalam: list[KodiyalamFit]
    regularity: dict | None
    verdict: str

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "request": self.request,
            "cells": [c.to_json() for c in self.cells],
            "diffs": self.diffs,
            "kodiyalam": [k.to_json() for k in self.kodiyalam],
            "regularity": self.regularity,
            "verdict": self.verdict,
        }


def _totals_map(table: BettiTable) -> dict[int, int]:
    return table.total()


def _verdict(streams: dict[tuple[int, int], list[int]], complete: bool) -> str:
    """Window-only classification.

    A stream is the difference sequence of one (prime, index) pair over
    the sampled powers.  Mixed streams force ``inconclusive``; otherwise
    any everywhere-positive stream yields ``evidence-dependent``, else
    ``evidence-independent`` (nothing is claimed beyond the window).
    """
    if not streams:
        return "inconclusive"
    saw_dependent = False
    saw_independent = False
    for diffs in streams.values():
        if all(d > 0 for d in diffs):
            saw_dependent = True
        elif all(d == 0 for d in diffs):
            saw_independent = True
        else:
            return "inconclusive"
    if saw_dependent:
        return "evidence-dependent"
    if saw_independent:
        return "evidence-independent"
    return "inconclusive"


def scan_dependence(
    ideal: MonomialIdeal,
    primes: list[int],
    max_power: int,
    i_max: int | None = None,
    guards: GuardConfig = DEFAULT_GUARDS,
    probes: ProbeSpec | None = None,
    jobs: int = 1,
    corpus_name: str | None = None,
) -> DependenceReport:
    """Compare total Betti vectors of I^h over Q and each F_p for
    h = 1..max_power.

    Cells whose full table trips a guard degrade to targeted multidegree
    probes when a probe spec is available, and are flagged ``aborted``
    otherwise; a partial report is a result, not a failure.
    """
    if max_power < 1:
        raise ArgumentError("max_power must be at least 1")
    field_specs = [QQ] + [FieldSpec(p) for p in primes]
    request = {
        "ideal_sha": ideal.sha(),
        "primes": sorted(primes),
        "max_power": max_power,
        "guards": guards.as_dict(),
    }
    if i_max is not None:
        request["i_max"] = i_max
    if corpus_name is not None:
        request["corpus"] = corpus_name

    cells: list[ScanCell] = []
    diffs: list[dict] = []
    totals_by_field: dict[str, dict[int, dict[int, int]]] = {
        f.tag: {} for f in field_specs
    }
    streams: dict[tuple[int, int], list[int]] = {}
    power_failed = False

    for h in range(1, max_power + 1):
        if not power_failed:
            try:
                ideal_h = ideal.power(h, guards)
            except ResourceLimitError:
                power_failed = True
        if power_failed:
            cells.extend(ScanCell(h=h, field=f.tag, aborted=True) for f in field_specs)
            continue

        try:
            if i_max is not None:
                tables = betti_tables_bounded(ideal_h, field_specs, i_max, guards, jobs)
                partial = True
            else:
                tables = betti_tables_auto(ideal_h, field_specs, guards, jobs)
                partial = False
        except ResourceLimitError:
            tables = None
            partial = False

        if tables is not None:
            for f in field_specs:
                table = tables[f.tag]
                totals = _totals_map(table)
                totals_by_field[f.tag][h] = totals
                cells.append(
                    ScanCell(
                        h=h,
                        field=f.tag,
                        total_betti=[[i, v] for i, v in sorted(totals.items())],
                        pd=None if partial else table.projective_dimension(),
                        reg=None if partial else table.regularity(),
                    )
                )
            q_totals = totals_by_field["Q"][h]
            for f in field_specs[1:]:
                p_totals = totals_by_field[f.tag][h]
                top = max([0, *q_totals, *p_totals])
                for i in range(top + 1):
                    qv, pv = q_totals.get(i, 0), p_totals.get(i, 0)
                    streams.setdefault((f.p, i), []).append(pv - qv)
                    if pv != qv:
                        diffs.append(
                            {"h": h, "p": f.p, "i": i, "q_value": qv, "p_value": pv}
                        )
        elif probes is not None:
            m = probes.multidegree(ideal, h)
            probe_values: dict[str, dict[int, int]] = {}
            for f in field_specs:
                values = {
                    i: betti_at(ideal_h, m, i, f, guards) for i in probes.indices
                }
                probe_values[f.tag] = values
                cells.append(
                    ScanCell(
                        h=h,
                        field=f.tag,
                        probes=[
                            {"multidegree": str(m), "i": i, "value": v}
                            for i, v in sorted(values.items())
                        ],
                    )
                )
            for f in field_specs[1:]:
                for i in probes.indices:
                    qv = probe_values["Q"][i]
                    pv = probe_values[f.tag][i]
                    streams.setdefault((f.p, i), []).append(pv - qv)
                    if pv != qv:
                        diffs.append(
                            {"h": h, "p": f.p, "i": i, "q_value": qv, "p_value": pv}
                        )
        else:
            cells.extend(ScanCell(h=h, field=f.tag, aborted=True) for f in field_specs)

    # fits over consecutive full samples starting at h=1
    fits: list[KodiyalamFit] = []
    for f in field_specs:
        per_power = totals_by_field[f.tag]
        run = 0
        while run + 1 in per_power:
            run += 1
        if run >= 3:
            top_index = max((max(t) for t in per_power.values() if t), default=0)
            for i in range(top_index + 1):
                samples = [(h, per_power[h].get(i, 0)) for h in range(1, run + 1)]
                fits.append(fit_kodiyalam(samples, i, f.tag))

    # regularity values straight from the scanned cells
    reg_summary: dict | None = None
    reg_values: dict[str, dict[int, int]] = {}
    for cell in cells:
        if cell.reg is not None:
            reg_values.setdefault(cell.field, {})[cell.h] = cell.reg
    if reg_values:
        reg_summary = {
            tag: [[h, r] for h, r in sorted(vals.items())]
            for tag, vals in reg_values.items()
        }

    complete = not any(c.aborted for c in cells)
    report = DependenceReport(
        request=request,
        cells=cells,
        diffs=sorted(diffs, key=lambda d: (d["h"], d["p"], d["i"])),
        kodiyalam=fits,
        regularity=reg_summary,
        verdict=_verdict(streams, complete),
    )
    return report


# ---------------------------------------------------------------------------
# regularity profiles
# ---------------------------------------------------------------------------


@dataclass
class FieldRegularityProfile:
    field: str
    reg_values: dict[int, int]
    slope: int | None = None
    intercept: int | None = None
    stability_index: int | None = None
    aborted_powers: tuple[int, ...] = ()

    def to_json(self) -> dict:
        return {
            "field": self.field,
            "reg": [[h, r] for h, r in sorted(self.reg_values.items())],
            "slope": self.slope,
            "intercept": self.intercept,
            "stability_index": self.stability_index,
            "aborted_powers": list(self.aborted_powers),
        }


@dataclass
class RegularityProfile:
    fields: dict[str, FieldRegularityProfile]
    c: int | None
    predicted_lines: dict[str, dict] | None
    status: str  # always EMPIRICAL or unavailable; never an asymptotic claim

    def to_json(self) -> dict:
        return {
            "fields": {tag: p.to_json() for tag, p in self.fields.items()},
            "c": self.c,
            "predicted_lines": self.predicted_lines,
            "status": self.status,
        }


def regularity_profile(
    ideal: MonomialIdeal,
    field_specs: list[FieldSpec],
    max_power: int,
    guards: GuardConfig = DEFAULT_GUARDS,
    jobs: int = 1,
) -> RegularityProfile:
    """Regularity of I^h per field for h = 1..max_power, with trailing
    linear estimates.

    The slope is declared only when the last three consecutive differences
    agree exactly (regularity of powers is eventually exactly linear, so
    approximate fits would be meaningless); with a shorter or non-linear
    window the estimates are marked unavailable.  From the estimates the
    profile also derives the exponent c and the predicted lines
    reg((I + (y^c))^h) = c*h + reg(I) - 1, all labeled EMPIRICAL.
    """
    if max_power < 1:
        raise ArgumentError("max_power must be at least 1")
    profiles: dict[str, FieldRegularityProfile] = {}
    for f in field_specs:
        reg_values: dict[int, int] = {}
        aborted: list[int] = []
        for h in range(1, max_power + 1):
            try:
                tables = betti_tables_auto(ideal.power(h, guards), [f], guards, jobs)
                reg_values[h] = tables[f.tag].regularity()
            except ResourceLimitError:
                aborted.append(h)
        profile = FieldRegularityProfile(
            field=f.tag, reg_values=reg_values, aborted_powers=tuple(aborted)
        )
        hs = sorted(reg_values)
        run = [h for h in hs if all(k in reg_values for k in range(1, h + 1))]
        if len(run) >= 4:
            tail = run[-4:]
            d = [reg_values[b] - reg_values[a] for a, b in zip(tail, tail[1:])]
            if len(set(d)) == 1:
                a_k = d[0]
                b_k = reg_values[tail[-1]] - a_k * tail[-1]
                s_k = 1
                for h in reversed(run):
                    if reg_values[h] != a_k * h + b_k:
                        s_k = h + 1
                        break
                profile.slope = a_k
                profile.intercept = b_k
                profile.stability_index = s_k
        profiles[f.tag] = profile

    estimable = [p for p in profiles.values() if p.slope is not None]
    if len(estimable) == len(profiles) and estimable:
        c = max(
            max(
                p.slope + 1,
                max(p.reg_values[i] for i in p.reg_values if i <= p.stability_index),
            )
            for p in profiles.values()
        )
        predicted = {
            tag: {
                "slope": c,
                "intercept": p.reg_values[1] - 1,
                "line": f"reg((I+(y^{c}))^h) = {c}*h + {p.reg_values[1] - 1}",
                "status": "EMPIRICAL",
            }
            for tag, p in profiles.items()
        }
        return RegularityProfile(profiles, c, predicted, "EMPIRICAL")
    return RegularityProfile(profiles, None, None, "unavailable")


# ---------------------------------------------------------------------------
# proved lower bounds, checked numerically (violations are engine bugs)
# ---------------------------------------------------------------------------


def _diff_vector(tables: dict[str, BettiTable], p: int, top: int) -> list[int]:
    q = tables["Q"].total()
    fp = tables[f"F{p}"].total()
    return [fp.get(i, 0) - q.get(i, 0) for i in range(top + 1)]


def _added_variable_totals(
    totals_by_power: dict[int, dict[int, int]], q: int
) -> dict[int, int]:
    """Total Betti numbers of (I + (y))^q, y a fresh variable, from the
    totals of I, ..., I^q via the additive splitting formula."""
    out: dict[int, int] = {}
    out[0] = sum(totals_by_power[l].get(0, 0) for l in range(1, q + 1)) + 1
    top = max(max(t) for t in totals_by_power.values() if t)
    for i in range(1, top + 2):
        v = sum(
            totals_by_power[l].get(i, 0) + totals_by_power[l].get(i - 1, 0)
            for l in range(1, q + 1)
        )
        if v:
            out[i] = v
    return out


def bound_check_added_monomial(
    ideal: MonomialIdeal,
    w: Monomial,
    primes: list[int],
    max_power: int,
    guards: GuardConfig = DEFAULT_GUARDS,
    jobs: int = 1,
) -> dict:
    """For each prime p and index i, the difference of total Betti numbers
    of (I + (w))^q at q = max_power is at least the number of powers
    s <= max_power where beta_i(I^s) depends on the field.  Violations
    raise: the inequality is a theorem."""
    field_specs = [QQ] + [FieldSpec(p) for p in primes]
    extended = ideal.add_disjoint_monomial(w)
    power_tables = {
        s: betti_tables_auto(ideal.power(s, guards), field_specs, guards, jobs)
        for s in range(1, max_power + 1)
    }
    big = betti_tables_auto(
        extended.power(max_power, guards), field_specs, guards, jobs
    )
    instances = []
    for p in primes:
        tops = [max(t[f"F{p}"].total(), default=0) for t in power_tables.values()]
        top = max([0, *tops, max(big[f"F{p}"].total(), default=0)])
        big_diff = _diff_vector(big, p, top)
        for i in range(1, top + 1):
            b_size = sum(
                1
                for s in range(1, max_power + 1)
                if _diff_vector(power_tables[s], p, top)[i] != 0
            )
            lhs = big_diff[i]
            margin = lhs - b_size
            instances.append(
                {"p": p, "i": i, "h": max_power, "lhs": lhs, "rhs": b_size,
                 "margin": margin}
            )
            if margin < 0:
                raise BoundViolationError(
                    f"added-monomial bound failed at p={p}, i={i}: "
                    f"{lhs} < {b_size} (engine bug)"
                )
    return {"lemma": "added-monomial", "holds": True, "instances": instances}


def bound_check_added_variables(
    ideal: MonomialIdeal,
    num_new_variables: int,
    primes: list[int],
    max_power: int,
    base_index: int,
    guards: GuardConfig = DEFAULT_GUARDS,
    jobs: int = 1,
    i_cap: int | None = None,
) -> dict:
    """With r+1 fresh variables adjoined, and an index i whose Betti
    number differs over F_p and Q for every power up to h = max_power,
    the difference at index i+a of the h-th power is at least C(h+r, r+1)
    for 0 <= a <= r.

    The totals of (I + (y_1..y_{r+1}))^h are derived by iterating the
    additive one-variable formula, with the base totals of I^s computed
    directly (index-bounded when the full tables exceed the guards).
    """
    if num_new_variables < 1:
        raise ArgumentError("need at least one new variable")
    r = num_new_variables - 1
    field_specs = [QQ] + [FieldSpec(p) for p in primes]
    needed_top = base_index + r + 1 if i_cap is None else i_cap
    base: dict[int, dict[str, BettiTable]] = {}
    for s in range(1, max_power + 1):
        ideal_s = ideal.power(s, guards)
        try:
            base[s] = betti_tables_auto(ideal_s, field_specs, guards, jobs)
        except ResourceLimitError:
            base[s] = betti_tables_bounded(
                ideal_s, field_specs, needed_top, guards, jobs
            )
    instances = []
    for p in primes:
        # hypothesis check: dependence at base_index for every power
        for s in range(1, max_power + 1):
            qv = base[s]["Q"].total().get(base_index, 0)
            pv = base[s][f"F{p}"].total().get(base_index, 0)
            if qv == pv:
                raise ArgumentError(
                    f"hypothesis fails: beta_{base_index}(I^{s}) does not "
                    f"depend on the field at p={p}"
                )
        totals: dict[str, dict[int, dict[int, int]]] = {}
        for tag in ("Q", f"F{p}"):
            per_power = {s: base[s][tag].total() for s in range(1, max_power + 1)}
            for _ in range(num_new_variables):
                per_power = {
                    q: _added_variable_totals(per_power, q)
                    for q in range(1, max_power + 1)
                }
            totals[tag] = per_power
        for a in range(r + 1):
            i = base_index + a
            lhs = totals[f"F{p}"][max_power].get(i, 0) - totals["Q"][max_power].get(
                i, 0
            )
            rhs = comb(max_power + r, r + 1)
            margin = lhs - rhs
            instances.append(
                {"p": p, "i": i, "a": a, "h": max_power, "lhs": lhs, "rhs": rhs,
                 "margin": margin}
            )
            if margin < 0:
                raise BoundViolationError(
                    f"added-variables bound failed at p={p}, i={i}: "
                    f"{lhs} < {rhs} (engine bug)"
                )
    return {"lemma": "added-variables", "holds": True, "instances": instances}


# ---------------------------------------------------------------------------
# persistence: content-addressed reports
# ---------------------------------------------------------------------------


def report_request_sha(request: dict) -> str:
    canon = json.dumps(request, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()


def render_report(report: DependenceReport) -> str:
    return json.dumps(report.to_json(), sort_keys=True, indent=2) + "\n"


def save_report(report: DependenceReport, results_dir: str | Path) -> Path:
    directory = Path(results_dir)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"{report_request_sha(report.request)}.json"
    path.write_text(render_report(report), encoding="utf-8")
    return path
