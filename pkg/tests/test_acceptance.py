"""Acceptance criteria, one test per criterion.

Each criterion prints one PASS/FAIL line; the lines are collected and shown
again in the pytest terminal summary. Run this file directly with
``python tests/test_acceptance.py`` for the bare report.
"""

from __future__ import annotations

import logging
from fractions import Fraction

import pytest

from cheshire.core import ONE, ZERO, inner
from cheshire.interferometer import (
    bare_circuit,
    click_statistics,
    detector_click_probability,
    hwp_search_phi1,
    propagate,
)
from cheshire.observables import (
    CONVENTIONS,
    SELECTORS,
    convention_discrepancy_report,
    observable,
)
from cheshire.pointer import (
    CouplingSpec,
    convergence_sweep,
    evolve_and_postselect,
    make_pointer,
)
from cheshire.states import BELL_A, BELL_B, make_postselected, make_preselected
from cheshire.verify import ERRATUM, PASS, REQUIRED_IDS, cmd_verify
from cheshire.weak import anomaly_scan, build_report

F = Fraction
MARGINALS = ("1.", "2.", ".3", ".4")

#: criterion number -> (passed, summary line); read by the terminal summary hook
RESULTS: dict[int, tuple[bool, str]] = {}


def record(number: int, title: str, check) -> None:
    try:
        detail = check()
    except Exception as exc:
        line = f"[FAIL] criterion {number:>2}: {title}: {type(exc).__name__}: {exc}"
        RESULTS[number] = (False, line)
        print(line)
        raise
    line = f"[PASS] criterion {number:>2}: {title}" + (f" ({detail})" if detail else "")
    RESULTS[number] = (True, line)
    print(line)


def _values(post, kind, sels, conv="effective_hermitian"):
    rep = build_report(post, conv)
    return [rep.value(kind, s) for s in sels]


def _rule(post, rule_id, conv="effective_hermitian"):
    r = next(r for r in build_report(post, conv).sum_rule_results if r.rule_id == rule_id)
    return r.passed and r.lhs == ONE


def test_criterion_01_state_facts():
    def check():
        psi, phi1, phi2 = make_preselected(), make_postselected("phi1"), make_postselected("phi2")
        for s in (psi, phi1, phi2):
            assert s.vector.norm2() == ONE, f"norm of {s.name}"
        assert inner(phi1.vector, psi.vector) == F(1, 2)
        assert inner(phi2.vector, psi.vector) == F(1, 4)
        assert inner(BELL_A, BELL_B) == ZERO
        return "norms 1, overlaps 1/2 and 1/4, <A|B> = 0, exact"

    record(1, "exact state facts", check)


def test_criterion_02_phi1_position_table():
    def check():
        got = _values("phi1", "pi", ("13", "24", "14", "23") + MARGINALS)
        assert got == [F(1, 2), F(1, 2), 0, 0] + [F(1, 2)] * 4, got
        assert _rule("phi1", "pi_pair") and _rule("phi1", "pi_left") and _rule("phi1", "pi_right")
        return "Pi values and both sum rules exact"

    record(2, "phi1 position table", check)


def test_criterion_03_phi1_zz_table():
    def check():
        expected = [F(1, 2), F(1, 2), 0, 0] + [F(1, 2)] * 4
        for conv in CONVENTIONS:
            got = _values("phi1", "zz", ("13", "24", "14", "23") + MARGINALS, conv)
            assert got == expected, (conv, got)
            assert _rule("phi1", "zz_left", conv) and _rule("phi1", "zz_right", conv), conv
        return "identical under all three conventions"

    record(3, "phi1 sigma_zz table", check)


def test_criterion_04_cheshire_signature():
    def check():
        for conv in ("effective_hermitian", "appendix_oracle"):
            zx13, zx24, zx14, zx23 = _values("phi1", "zx", ("13", "24", "14", "23"), conv)
            pi14, pi23 = _values("phi1", "pi", ("14", "23"), conv)
            assert zx13 == zx24 == 0 and pi14 == pi23 == 0, conv
            assert abs(zx14) == abs(zx23) == F(1, 2), conv
            assert zx14 == -zx23, conv
        manifest = cmd_verify()
        for cid in ("eq25", "eq26"):
            assert manifest.by_id(cid).status == ERRATUM, cid
        for cid in ("eq24", "eq27", "eq28"):
            assert manifest.by_id(cid).status == PASS, cid
        return "zeros exact; |zx14| = |zx23| = 1/2 with opposite signs; eq25/eq26 erratum-documented"

    record(4, "phi1 Cheshire signature", check)


def test_criterion_05_phi2_table():
    def check():
        pis = _values("phi2", "pi", ("13", "14", "23", "24") + MARGINALS)
        assert pis == [1, 0, 0, 0, 1, 0, 1, 0], pis
        zzs = _values("phi2", "zz", ("13", "14", "23", "24") + MARGINALS)
        assert zzs == [1, 0, 0, 0, 1, 0, 1, 0], zzs
        zx = dict(zip(SELECTORS, _values("phi2", "zx", SELECTORS)))
        expected = {"13": 0, "24": 1, "14": -1, "23": 1, "1.": -1, ".3": 1, "2.": 2, ".4": 0}
        assert zx == expected, zx
        assert _rule("phi2", "zx_left") and _rule("phi2", "zx_right")
        return "Pi, sigma_zz, sigma_zx exact; both sigma_zx marginal sums equal 1"

    record(5, "phi2 full table", check)


def test_criterion_06_anomaly_detection():
    def check():
        found = [(p, a.kind, a.selector, a.value) for p in ("phi1", "phi2")
                 for a in anomaly_scan(build_report(p))]
        assert len(found) == 1 and found[0][:3] == ("phi2", "zx", "2.") and found[0][3] == 2, found
        a = anomaly_scan(build_report("phi2"))[0]
        assert a.spectrum_min == -1 and a.spectrum_max == 1
        return "single anomaly: phi2 sigma_zx^2. = 2 outside [-1, 1]"

    record(6, "anomaly detection", check)


def test_criterion_07_discrepancy_report():
    def check():
        rep = convention_discrepancy_report()
        assert not rep.for_kind("pi") and not rep.for_kind("zz")
        zx = rep.for_kind("zx")
        pairs = {frozenset((d.conv_a, d.conv_b)) for d in zx}
        assert pairs == {
            frozenset(("matrix_literal", "effective_hermitian")),
            frozenset(("matrix_literal", "appendix_oracle")),
        }, pairs
        assert {d.selector for d in zx} == set(SELECTORS)
        assert all(d.along_bell_b and not d.difference.is_zero() for d in zx)
        return f"{len(zx)} sigma_zx differences, all along |ij>|B>, all against matrix_literal"

    record(7, "convention discrepancy report", check)


POINTER_CASES = [
    ("Pi_13 / phi1", "pi", "13", "phi1", 0.5, 1 / 4),
    ("sigma_zx^13 / phi1", "zx", "13", "phi1", 0.0, 1 / 4),
    ("sigma_zx^2. / phi2", "zx", "2.", "phi2", 2.0, 1 / 16),
]
#: below this the deviation is floating-point round-off, not a g-dependent correction
NOISE_FLOOR = 1e-10


def test_criterion_08_pointer_dynamics():
    def check():
        pointer = make_pointer(1.0, 12.0, 4096)
        pre = make_preselected()
        notes = []
        for label, kind, sel, post, target, p_target in POINTER_CASES:
            op = observable(kind, sel)
            fin = make_postselected(post)
            rows = {r.g: r for r in convergence_sweep(op, pre, fin, [0.03, 0.01, 0.003], pointer).rows}
            assert rows[0.01].error <= 0.05 * abs(target) + 0.01, (label, rows[0.01].ratio)
            e_hi, e_lo = rows[0.03].error, rows[0.003].error
            if e_hi > NOISE_FLOOR:
                assert e_lo < e_hi, (label, e_hi, e_lo)
                notes.append(f"{label}: {e_hi:.2e} -> {e_lo:.2e}")
            else:
                # equal-magnitude eigencomponents: the deviation vanishes identically in g
                assert e_lo <= NOISE_FLOOR, (label, e_lo)
                notes.append(f"{label}: deviation identically 0 (round-off {max(e_hi, e_lo):.0e})")
            prob = evolve_and_postselect(CouplingSpec(1e-3, op, pre, fin), pointer).probability
            assert abs(prob - p_target) <= 1e-4, (label, prob)
        return "; ".join(notes)

    record(8, "pointer dynamics", check)


def test_criterion_09_interferometer(caplog):
    def check():
        psi = make_preselected().vector
        c = bare_circuit()
        assert propagate(c) == psi
        stats = click_statistics(c, psi)
        assert detector_click_probability(stats, "D13") == ZERO
        assert detector_click_probability(stats, "D23") == ZERO
        assert stats[("D11", "D22")] + stats[("D12", "D21")] == ONE
        with caplog.at_level(logging.WARNING):
            first = hwp_search_phi1()
        second = hwp_search_phi1()
        assert first.to_dict() == second.to_dict(), "search is not deterministic"
        assert len(first.configurations) == 32
        if first.found:
            assert all(s.fidelity == 1 for s in first.solutions)
            return f"{len(first.solutions)} exact configurations found"
        assert first.warning and "NEGATIVE RESULT" in caplog.text
        assert first.best_fidelity <= first.product_bound < 1
        return (
            f"certified negative over 32 configurations: best fidelity {first.best_fidelity}, "
            f"product bound {first.product_bound}, phi1 Schmidt rank {first.target_schmidt_rank}; "
            f"flagged loudly"
        )

    record(9, "interferometer", check)


def test_criterion_10_completeness_gate():
    def check():
        manifest = cmd_verify()
        ids = [c.id for c in manifest.checks if c.id in REQUIRED_IDS]
        assert sorted(ids) == sorted(REQUIRED_IDS) and len(ids) == len(set(ids))
        assert all(manifest.by_id(i).status in (PASS, ERRATUM) for i in REQUIRED_IDS)
        assert manifest.exit_code() == 0
        n_err = sum(manifest.by_id(i).status == ERRATUM for i in REQUIRED_IDS)
        return f"{len(ids)} result equations covered, {len(ids) - n_err} pass, {n_err} erratum-documented, exit 0"

    record(10, "completeness gate", check)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s", "-p", "no:cacheprovider"]))
