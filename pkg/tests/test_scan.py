from __future__ import annotations

import json
from fractions import Fraction
from importlib.resources import files
from pathlib import Path

import jsonschema
import pytest

from charbetti.constructions import PROBE_TEMPLATES
from charbetti.errors import ArgumentError
from charbetti.fields import FieldSpec, QQ
from charbetti.guards import GuardConfig
from charbetti.scan import (
    ProbeSpec,
    bound_check_added_monomial,
    bound_check_added_variables,
    fit_kodiyalam,
    regularity_profile,
    render_report,
    report_request_sha,
    save_report,
    scan_dependence,
)
from charbetti.ideals import parse_monomial
from conftest import ideal_from


def load_schema() -> dict:
    text = (files("charbetti") / "schemas" / "report-v1.schema.json").read_text()
    return json.loads(text)


class TestKodiyalamFits:
    def test_linear(self):
        fit = fit_kodiyalam([(h, h + 1) for h in range(1, 6)], 0)
        assert fit.stable and fit.degree == 1
        assert fit.coefficients == (Fraction(1), Fraction(1))

    def test_constant(self):
        fit = fit_kodiyalam([(1, 7), (2, 7), (3, 7)], 0)
        assert fit.stable and fit.degree == 0
        assert fit.coefficients == (Fraction(7),)

    def test_quadratic_generator_counts(self):
        ideal = ideal_from("x y", "y z", "x z")
        samples = [(h, ideal.power(h).num_gens()) for h in range(1, 6)]
        fit = fit_kodiyalam(samples, 0)
        assert fit.stable and fit.degree == 2
        assert fit.coefficients == (Fraction(1), Fraction(3, 2), Fraction(1, 2))
        for h, value in samples:
            assert fit.evaluate(h) == value

    def test_unstable_sequence(self):
        fit = fit_kodiyalam([(1, 1), (2, 2), (3, 4), (4, 8), (5, 16)], 0)
        assert not fit.stable and fit.coefficients is None

    def test_too_few_samples(self):
        with pytest.raises(ArgumentError):
            fit_kodiyalam([(1, 1), (2, 2)], 0)

    def test_non_consecutive_rejected(self):
        with pytest.raises(ArgumentError):
            fit_kodiyalam([(1, 1), (3, 2), (4, 3)], 0)


class TestScanDependence:
    def test_rp2_window(self, rp2):
        report = scan_dependence(rp2, [2], 2)
        assert report.verdict == "inconclusive"
        assert [(d["h"], d["i"]) for d in report.diffs] == [(1, 2), (1, 3)]
        assert all(not c.aborted for c in report.cells)

    def test_maximal_ideal_is_field_free(self):
        ideal = ideal_from("x", "y")
        report = scan_dependence(ideal, [2, 3, 5], 4)
        assert report.verdict == "evidence-independent"
        assert report.diffs == []
        linear = [f for f in report.kodiyalam if f.index == 0 and f.field == "Q"]
        assert linear and linear[0].stable and linear[0].degree == 1

    def test_klein_degrades_to_probes(self, klein):
        guards = GuardConfig(max_faces=100_000)
        template = PROBE_TEMPLATES["klein_bottle"]
        probes = ProbeSpec(tuple(template["indices"]), tuple(template["exponents"]))
        report = scan_dependence(klein, [2], 2, guards=guards, probes=probes)
        assert report.verdict == "evidence-dependent"
        probe_cells = [c for c in report.cells if c.probes is not None]
        assert probe_cells and all(c.h == 2 for c in probe_cells)
        h2 = {(d["i"], d["q_value"], d["p_value"]) for d in report.diffs if d["h"] == 2}
        assert h2 == {(4, 0, 1), (5, 1, 2)}

    def test_aborted_cells_are_flagged(self, klein):
        guards = GuardConfig(max_faces=100_000)
        report = scan_dependence(klein, [2], 2, guards=guards)
        aborted = [c for c in report.cells if c.aborted]
        assert aborted and all(c.h == 2 for c in aborted)
        assert report.verdict == "inconclusive"

    def test_schema_validation(self, rp2):
        report = scan_dependence(rp2, [2], 1)
        jsonschema.validate(report.to_json(), load_schema())

    def test_probe_report_schema(self, klein):
        guards = GuardConfig(max_faces=100_000)
        template = PROBE_TEMPLATES["klein_bottle"]
        probes = ProbeSpec(tuple(template["indices"]), tuple(template["exponents"]))
        report = scan_dependence(klein, [2], 2, guards=guards, probes=probes)
        jsonschema.validate(report.to_json(), load_schema())


class TestPersistence:
    def test_reports_are_byte_identical_across_runs(self, rp2, tmp_path):
        a = scan_dependence(rp2, [2], 1)
        b = scan_dependence(rp2, [2], 1)
        assert render_report(a) == render_report(b)
        path_a = save_report(a, tmp_path / "one")
        path_b = save_report(b, tmp_path / "two")
        assert path_a.read_bytes() == path_b.read_bytes()
        assert path_a.name == f"{report_request_sha(a.request)}.json"

    def test_golden_rp2_report(self, rp2):
        report = scan_dependence(rp2, [2], 2)
        golden_path = Path(__file__).parent / "golden" / "rp2_scan_h2.json"
        assert render_report(report) == golden_path.read_text(encoding="utf-8")


class TestRegularityProfile:
    def test_two_variable_maximal_ideal(self):
        ideal = ideal_from("x", "y")
        profile = regularity_profile(ideal, [QQ], 4)
        q = profile.fields["Q"]
        assert q.reg_values == {1: 1, 2: 2, 3: 3, 4: 4}
        assert (q.slope, q.intercept, q.stability_index) == (1, 0, 1)
        assert profile.status == "EMPIRICAL"
        assert profile.c == 2
        assert profile.predicted_lines["Q"]["intercept"] == 0

    def test_short_window_is_unavailable(self, rp2):
        profile = regularity_profile(rp2, [QQ], 1)
        assert profile.status == "unavailable"
        assert profile.c is None
        assert profile.fields["Q"].reg_values[1] == 3

    def test_katzman_regularity_differs(self, katzman, F2):
        profile = regularity_profile(katzman, [QQ, F2], 1)
        assert profile.fields["Q"].reg_values[1] == 3
        assert profile.fields["F2"].reg_values[1] == 4


class TestBoundChecks:
    def test_added_monomial_on_rp2(self, rp2):
        report = bound_check_added_monomial(rp2, parse_monomial("y1 y2"), [2], 1)
        assert report["holds"]
        by_index = {inst["i"]: inst for inst in report["instances"]}
        assert by_index[2]["rhs"] == 1 and by_index[2]["margin"] >= 0
        assert by_index[3]["rhs"] == 1 and by_index[3]["margin"] >= 0

    def test_added_monomial_no_dependence(self):
        ideal = ideal_from("x", "y")
        report = bound_check_added_monomial(ideal, parse_monomial("w"), [2], 2)
        assert report["holds"]
        assert all(inst["rhs"] == 0 for inst in report["instances"])

    def test_added_variables_hypothesis_enforced(self):
        ideal = ideal_from("x", "y")
        with pytest.raises(ArgumentError):
            bound_check_added_variables(ideal, 2, [2], 1, base_index=0)

    def test_added_variables_kty_instance(self, kty):
        report = bound_check_added_variables(
            kty, 2, [2], 2, base_index=2, i_cap=4
        )
        assert report["holds"]
        margins = {inst["i"]: inst for inst in report["instances"]}
        assert margins[2]["rhs"] == 3 and margins[2]["lhs"] >= 3
        assert margins[3]["rhs"] == 3 and margins[3]["lhs"] >= 3
