"""Exact weak values and the per-post-selection result tables."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Sequence

from .core import ZERO, AlgebraicScalar, Spectrum, StateVector, inner
from .observables import (
    KINDS,
    SELECTORS,
    Discrepancy,
    Observable,
    check_convention,
    convention_discrepancy_report,
    observable,
    operator_spectrum,
)
from .states import NamedState, make_postselected, make_preselected

KIND_LABELS = {"pi": "Pi", "zz": "sigma_zz", "zx": "sigma_zx"}


class UndefinedWeakValue(ZeroDivisionError):
    """Raised when the pre- and post-selected states are orthogonal."""


def _vec(state: NamedState | StateVector) -> StateVector:
    return state.vector if isinstance(state, NamedState) else state


def weak_value(
    op: Observable, pre: NamedState | StateVector, post: NamedState | StateVector
) -> AlgebraicScalar:
    """``<post|op|pre> / <post|pre>``, exactly."""
    pre_v, post_v = _vec(pre), _vec(post)
    overlap = inner(post_v, pre_v)
    if not overlap:
        raise UndefinedWeakValue("pre- and post-selected states are orthogonal")
    return inner(post_v, op.apply(pre_v)) / overlap


def combine(terms: Sequence[tuple[object, Observable]]) -> Observable:
    """Linear combination ``sum c_k O_k`` of same-type observables."""
    total = None
    for c, op in terms:
        piece = op.scale(c)
        total = piece if total is None else total + piece
    if total is None:
        raise ValueError("empty linear combination")
    return total


@dataclass(frozen=True)
class SumRuleResult:
    rule_id: str
    description: str
    lhs: AlgebraicScalar
    rhs: AlgebraicScalar
    passed: bool


@dataclass(frozen=True)
class Anomaly:
    kind: str
    selector: str
    value: AlgebraicScalar
    spectrum_min: AlgebraicScalar | float
    spectrum_max: AlgebraicScalar | float


@dataclass
class WeakValueReport:
    preselection: str
    postselection: str
    convention: str
    entries: dict[tuple[str, str], AlgebraicScalar]
    sum_rule_results: list[SumRuleResult] = field(default_factory=list)
    anomalies: list[Anomaly] | None = None
    discrepancies: list[Discrepancy] = field(default_factory=list)

    def value(self, kind: str, sel: str) -> AlgebraicScalar:
        return self.entries[(kind, sel.replace("·", "."))]

    def float_value(self, kind: str, sel: str) -> float:
        return float(self.value(kind, sel))

    @property
    def all_sum_rules_pass(self) -> bool:
        return all(r.passed for r in self.sum_rule_results)

    def to_dict(self) -> dict:
        return {
            "preselection": self.preselection,
            "postselection": self.postselection,
            "convention": self.convention,
            "entries": [
                {
                    "kind": kind,
                    "arms": sel,
                    "value": v.to_string(),
                    "display": str(v),
                    "float": float(v),
                }
                for (kind, sel), v in self.entries.items()
            ],
            "sum_rules": [
                {
                    "id": r.rule_id,
                    "description": r.description,
                    "lhs": r.lhs.to_string(),
                    "rhs": r.rhs.to_string(),
                    "pass": r.passed,
                }
                for r in self.sum_rule_results
            ],
            "anomalies": None
            if self.anomalies is None
            else [
                {
                    "kind": a.kind,
                    "arms": a.selector,
                    "value": a.value.to_string(),
                    "spectrum": [str(a.spectrum_min), str(a.spectrum_max)],
                }
                for a in self.anomalies
            ],
            "discrepancies": [
                {
                    "kind": d.kind,
                    "arms": d.selector,
                    "conventions": [d.conv_a, d.conv_b],
                    "difference": d.difference.to_json(),
                }
                for d in self.discrepancies
            ],
        }


def _sum_rules_for(post: str) -> list[tuple[str, str, list[tuple[int, str, str]], int]]:
    rules = [
        ("pi_pair", "Pi_13 + Pi_24 = 1", [(1, "pi", "13"), (1, "pi", "24")], 1),
        ("pi_left", "Pi_1. + Pi_2. = 1", [(1, "pi", "1."), (1, "pi", "2.")], 1),
        ("pi_right", "Pi_.3 + Pi_.4 = 1", [(1, "pi", ".3"), (1, "pi", ".4")], 1),
        (
            "pi_complete",
            "Pi_13 + Pi_14 + Pi_23 + Pi_24 = 1",
            [(1, "pi", p) for p in ("13", "14", "23", "24")],
            1,
        ),
        ("zz_pair", "sigma_zz^13 + sigma_zz^24 = 1", [(1, "zz", "13"), (1, "zz", "24")], 1),
        ("zz_left", "sigma_zz^1. + sigma_zz^2. = 1", [(1, "zz", "1."), (1, "zz", "2.")], 1),
        ("zz_right", "sigma_zz^.3 + sigma_zz^.4 = 1", [(1, "zz", ".3"), (1, "zz", ".4")], 1),
        (
            "zx_balance",
            "sigma_zx^1. + sigma_zx^2. = sigma_zx^.3 + sigma_zx^.4",
            [(1, "zx", "1."), (1, "zx", "2."), (-1, "zx", ".3"), (-1, "zx", ".4")],
            0,
        ),
    ]
    if post == "phi2":
        rules += [
            ("zx_left", "sigma_zx^1. + sigma_zx^2. = 1", [(1, "zx", "1."), (1, "zx", "2.")], 1),
            ("zx_right", "sigma_zx^.3 + sigma_zx^.4 = 1", [(1, "zx", ".3"), (1, "zx", ".4")], 1),
        ]
    return rules


def sum_rule_check(report: WeakValueReport) -> WeakValueReport:
    """Evaluate the sum rules from the report entries; failures are recorded, never raised."""
    results = []
    for rule_id, desc, terms, rhs in _sum_rules_for(report.postselection):
        lhs = ZERO
        for c, kind, sel in terms:
            lhs = lhs + report.entries[(kind, sel)] * c
        rhs_s = AlgebraicScalar(rhs)
        results.append(SumRuleResult(rule_id, desc, lhs, rhs_s, lhs == rhs_s))
    report.sum_rule_results = results
    return report


def anomaly_scan(report: WeakValueReport) -> list[Anomaly]:
    """Entries whose weak value lies outside the operator's eigenvalue range."""
    if report.convention == "appendix_oracle":
        raise ValueError("anomaly scan needs matrix-form observables with a spectrum")
    found = []
    for (kind, sel), value in report.entries.items():
        spec: Spectrum = operator_spectrum(kind, sel, report.convention)
        if not spec.contains(value):
            found.append(Anomaly(kind, sel, value, spec.minimum, spec.maximum))
    return found


def build_report(post: str, conv: str = "effective_hermitian") -> WeakValueReport:
    check_convention(conv)
    pre_state = make_preselected()
    post_state = make_postselected(post)
    entries = {}
    for kind in KINDS:
        for sel in SELECTORS:
            entries[(kind, sel)] = weak_value(observable(kind, sel, conv), pre_state, post_state)
    discrepancies = [
        d for d in convention_discrepancy_report().entries if conv in (d.conv_a, d.conv_b)
    ]
    report = WeakValueReport(
        preselection=pre_state.name,
        postselection=post_state.name,
        convention=conv,
        entries=entries,
        discrepancies=discrepancies,
    )
    sum_rule_check(report)
    if conv != "appendix_oracle":
        report.anomalies = anomaly_scan(report)
    return report


def all_reports(conv: str = "effective_hermitian") -> dict[str, WeakValueReport]:
    return {post: build_report(post, conv) for post in ("phi1", "phi2")}


# rendering


def _notes(report: WeakValueReport, kind: str, sel: str) -> str:
    value = report.entries[(kind, sel)]
    notes = []
    if report.anomalies:
        for a in report.anomalies:
            if (a.kind, a.selector) == (kind, sel):
                notes.append(f"ANOMALOUS: outside spectrum [{a.spectrum_min}, {a.spectrum_max}]")
    if value < 0 and len(sel.strip(".")) == 2:
        notes.append(f"negative occupation: {value} pair")
    return "; ".join(notes)


def render_markdown(report: WeakValueReport) -> str:
    lines = [
        f"### Weak values: pre = {report.preselection}, post = {report.postselection}, "
        f"convention = {report.convention}",
        "",
        "| observable | arms | weak value | float | note |",
        "|---|---|---|---|---|",
    ]
    for (kind, sel), v in report.entries.items():
        note = _notes(report, kind, sel)
        shown = f"**{v}**" if note else str(v)
        lines.append(f"| {KIND_LABELS[kind]} | {sel} | {shown} | {float(v):.6g} | {note} |")
    lines += ["", "| sum rule | lhs | rhs | result |", "|---|---|---|---|"]
    for r in report.sum_rule_results:
        lines.append(f"| {r.description} | {r.lhs} | {r.rhs} | {'pass' if r.passed else 'FAIL'} |")
    if report.discrepancies:
        lines += ["", f"Convention discrepancies involving {report.convention}: "
                  f"{len(report.discrepancies)} (actions on psi differ for "
                  + ", ".join(sorted({f'{d.kind}^{d.selector}' for d in report.discrepancies}))
                  + ")"]
    return "\n".join(lines) + "\n"


def render_csv(report: WeakValueReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["post", "convention", "kind", "arms", "value", "float", "note"])
    for (kind, sel), v in report.entries.items():
        w.writerow([
            report.postselection, report.convention, kind, sel,
            v.to_string(), repr(float(v)), _notes(report, kind, sel),
        ])
    return buf.getvalue()


def render_json(report: WeakValueReport) -> str:
    return json.dumps(report.to_dict(), indent=2) + "\n"


def render(report: WeakValueReport, fmt: str) -> str:
    if fmt == "markdown":
        return render_markdown(report)
    if fmt == "csv":
        return render_csv(report)
    if fmt == "json":
        return render_json(report)
    raise ValueError(f"unknown format {fmt!r}")

