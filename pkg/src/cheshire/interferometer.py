"""Two Mach-Zehnder interferometers fed by a polarization-entangled pair.

Layout per side: an input 50/50 beamsplitter (BS11 left, BS21 right) opens
two arms (1, 2 left; 3, 4 right), arm elements act on the photon in their
arm, and an output recombiner merges the arms into a bright and a dark
port. The bright port feeds a polarizing splitter with detectors D11 (H)
and D12 (V) on the left, D21 (H) and D22 (V) on the right. The dark port
feeds the polarization-blind D13 / D23.

Everything here is exact over Q(sqrt2). Mirrors are pass-through, and the
phase element only takes the values +1 and -1 (phase 0 or pi).

Single-photon modes are indexed ``2 * arm_rank + pol`` per side; the
two-photon 16-vector is the tensor ``[left_arm, right_arm, left_pol,
right_pol]``, which is the normative basis order.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from itertools import product
from pathlib import Path
from typing import Iterable

from .core import (
    HALF,
    INV_SQRT2,
    ONE,
    ZERO,
    AlgebraicScalar,
    LinearOperator,
    StateVector,
    exact_rank,
    inner,
)
from .states import BELL_A, embed, make_postselected

log = logging.getLogger(__name__)

KINDS = ("beamsplitter", "mirror", "hwp", "phase")
SIDES = ("left", "right")
STAGES = ("input", "arm", "output")
ARMS = {"left": (1, 2), "right": (3, 4)}
DETECTORS = {"left": ("D11", "D12", "D13"), "right": ("D21", "D22", "D23")}
DETECTOR_PAIRS = tuple((a, b) for a in DETECTORS["left"] for b in DETECTORS["right"])
#: coincidences that project onto a single two-photon bra
PURE_PAIRS = tuple((a, b) for a, b in DETECTOR_PAIRS if a[-1] != "3" and b[-1] != "3")

#: recombiner transfer matrices; row 0 is the bright port, row 1 the dark port
RECOMBINERS = {
    "+": ((INV_SQRT2, INV_SQRT2), (INV_SQRT2, -INV_SQRT2)),
    "-": ((INV_SQRT2, -INV_SQRT2), (INV_SQRT2, INV_SQRT2)),
    "I": ((ONE, ZERO), (ZERO, ONE)),
}
_POL_MATRIX = {
    "hwp": ((ONE, ZERO), (ZERO, -ONE)),
    "mirror": ((ONE, ZERO), (ZERO, ONE)),
}


class CircuitError(ValueError):
    """Malformed optical circuit."""


@dataclass(frozen=True)
class OpticalElement:
    kind: str
    side: str
    stage: str
    arm: int | None = None
    param: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise CircuitError(f"unknown element kind {self.kind!r}")
        if self.side not in SIDES:
            raise CircuitError(f"unknown side {self.side!r}")
        if self.stage not in STAGES:
            raise CircuitError(f"unknown stage {self.stage!r}")
        if self.stage == "arm":
            if self.arm not in ARMS[self.side]:
                raise CircuitError(f"arm {self.arm!r} is not on the {self.side} side")
            if self.kind == "beamsplitter":
                raise CircuitError("beamsplitters sit at the input or output stage")
            if self.kind == "phase" and self.phase_factor() is None:
                raise CircuitError(f"phase parameter must be 0 or pi, got {self.param!r}")
        else:
            if self.kind != "beamsplitter":
                raise CircuitError(f"{self.kind} cannot sit at the {self.stage} stage")
            if self.arm is not None:
                raise CircuitError("input/output beamsplitters take no arm")
            sign = self.param or "+"
            if self.stage == "input" and sign != "+":
                raise CircuitError("input beamsplitters use the fixed '+' convention")
            if sign not in RECOMBINERS:
                raise CircuitError(f"unknown recombiner convention {self.param!r}")

    def phase_factor(self) -> AlgebraicScalar | None:
        p = "0" if self.param is None else str(self.param).strip().lower()
        if p in ("0", "1", "+1"):
            return ONE
        if p in ("pi", "-1"):
            return -ONE
        return None

    def pol_matrix(self) -> tuple[tuple[AlgebraicScalar, ...], ...]:
        if self.kind == "phase":
            f = self.phase_factor()
            return ((f, ZERO), (ZERO, f))
        return _POL_MATRIX[self.kind]

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "side": self.side, "stage": self.stage}
        if self.arm is not None:
            d["arm"] = self.arm
        if self.param is not None:
            d["param"] = self.param
        return d


@dataclass(frozen=True)
class OpticalCircuit:
    elements: tuple[OpticalElement, ...]

    def __post_init__(self) -> None:
        for side in SIDES:
            for stage in ("input", "output"):
                n = sum(1 for e in self.elements if e.side == side and e.stage == stage)
                if n != 1:
                    raise CircuitError(f"{side} side needs exactly one {stage} beamsplitter, has {n}")

    def recombiner(self, side: str) -> str:
        e = next(e for e in self.elements if e.side == side and e.stage == "output")
        return e.param or "+"

    def arm_elements(self) -> list[OpticalElement]:
        return [e for e in self.elements if e.stage == "arm"]

    def to_json(self) -> str:
        return json.dumps([e.to_dict() for e in self.elements], indent=2)

    @classmethod
    def from_json(cls, data: str | list | dict) -> OpticalCircuit:
        items = json.loads(data) if isinstance(data, str) else data
        if isinstance(items, dict):
            items = items.get("elements", [])
        if not isinstance(items, list):
            raise CircuitError("circuit description must be a list of elements")
        try:
            elements = tuple(
                OpticalElement(
                    kind=it["kind"],
                    side=it["side"],
                    stage=it.get("stage", "arm"),
                    arm=it.get("arm"),
                    param=None if it.get("param") is None else str(it["param"]),
                )
                for it in items
            )
        except (KeyError, TypeError) as exc:
            raise CircuitError(f"malformed element: {exc}") from None
        return cls(elements)

    @classmethod
    def load(cls, path: str | Path) -> OpticalCircuit:
        return cls.from_json(Path(path).read_text())


def bare_circuit(
    recombiners: tuple[str, str] = ("+", "+"),
    arm_elements: Iterable[OpticalElement] = (),
    mirrors: bool = True,
) -> OpticalCircuit:
    """The tuned layout: input splitters, a mirror in every arm, output recombiners."""
    elems = [
        OpticalElement("beamsplitter", "left", "input"),
        OpticalElement("beamsplitter", "right", "input"),
    ]
    if mirrors:
        elems += [OpticalElement("mirror", s, "arm", a) for s in SIDES for a in ARMS[s]]
    elems += list(arm_elements)
    elems += [
        OpticalElement("beamsplitter", "left", "output", param=recombiners[0]),
        OpticalElement("beamsplitter", "right", "output", param=recombiners[1]),
    ]
    return OpticalCircuit(tuple(elems))


# two-photon index helpers


def _index(a: int, b: int, pl: int, pr: int) -> int:
    return (2 * a + b) * 4 + 2 * pl + pr


def product_bra(left: list[AlgebraicScalar], right: list[AlgebraicScalar]) -> StateVector:
    """16-vector of ``left (x) right`` for single-photon vectors indexed ``2*arm + pol``."""
    amps = [ZERO] * 16
    for a, b, pl, pr in product(range(2), repeat=4):
        amps[_index(a, b, pl, pr)] = left[2 * a + pl] * right[2 * b + pr]
    return StateVector(amps)


def coefficient_matrix(v: StateVector) -> list[list[AlgebraicScalar]]:
    """Reshape to ``C[left mode][right mode]`` for Schmidt analysis."""
    c = [[ZERO] * 4 for _ in range(4)]
    for a, b, pl, pr in product(range(2), repeat=4):
        c[2 * a + pl][2 * b + pr] = v[_index(a, b, pl, pr)]
    return c


def schmidt_rank(v: StateVector) -> int:
    """Exact Schmidt rank across the left/right interferometer split."""
    return exact_rank(coefficient_matrix(v))


def _arm_operator(elements: Iterable[OpticalElement]) -> LinearOperator:
    """Product of the arm elements as a 16x16 operator, later elements applied last."""
    total = LinearOperator.identity()
    for e in elements:
        side_rank = ARMS[e.side].index(e.arm)
        m = e.pol_matrix()
        rows = []
        for a, b, pl, pr in product(range(2), repeat=4):
            row = [ZERO] * 16
            for ql in range(2):
                for qr in range(2):
                    if e.side == "left":
                        if a != side_rank:
                            val = ONE if (ql == pl and qr == pr) else ZERO
                        else:
                            val = m[pl][ql] if qr == pr else ZERO
                    else:
                        if b != side_rank:
                            val = ONE if (ql == pl and qr == pr) else ZERO
                        else:
                            val = m[pr][qr] if ql == pl else ZERO
                    if val:
                        row[_index(a, b, ql, qr)] = val
            rows.append(row)
        total = LinearOperator(rows) @ total
    return total


def preselection_plane(source_polarization: StateVector = BELL_A) -> StateVector:
    """State just after both input beamsplitters, before any arm element."""
    if source_polarization.dim != 4:
        raise CircuitError("source polarization must be a 4-component vector")
    # input port 0 of a '+' splitter feeds both arms with amplitude 1/sqrt2
    paths = StateVector([HALF] * 4)
    return embed(paths, source_polarization)


def propagate(circuit: OpticalCircuit, source_polarization: StateVector = BELL_A) -> StateVector:
    """Exact state after the input beamsplitters and all arm elements."""
    return _arm_operator(circuit.arm_elements()).apply(preselection_plane(source_polarization))


def _detector_bras(side: str, recombiner: str) -> dict[str, list[list[AlgebraicScalar]]]:
    """Single-photon bras for each detector on one side (several for blind detectors)."""
    bright, dark = RECOMBINERS[recombiner]

    def mode(port, pol):
        v = [ZERO] * 4
        for a in range(2):
            v[2 * a + pol] = port[a]
        return v

    d1, d2, d3 = DETECTORS[side]
    return {d1: [mode(bright, 0)], d2: [mode(bright, 1)], d3: [mode(dark, 0), mode(dark, 1)]}


def click_statistics(
    circuit: OpticalCircuit, state: StateVector
) -> dict[tuple[str, str], AlgebraicScalar]:
    """Exact coincidence probabilities for every (left, right) detector pair."""
    left = _detector_bras("left", circuit.recombiner("left"))
    right = _detector_bras("right", circuit.recombiner("right"))
    out = {}
    for dl, dr in DETECTOR_PAIRS:
        p = ZERO
        for u in left[dl]:
            for v in right[dr]:
                amp = inner(product_bra(u, v), state)
                p = p + amp * amp
        out[(dl, dr)] = p
    return out


def detector_click_probability(
    stats: dict[tuple[str, str], AlgebraicScalar], detector: str
) -> AlgebraicScalar:
    total = ZERO
    for pair, p in stats.items():
        if detector in pair:
            total = total + p
    return total


@dataclass(frozen=True)
class ConditionedState:
    vector: StateVector
    probability: AlgebraicScalar
    pair: tuple[str, str]


def conditioned_state(
    circuit: OpticalCircuit,
    pair: tuple[str, str],
    source_polarization: StateVector = BELL_A,
    *,
    allow_zero: bool = False,
) -> ConditionedState:
    """Post-selected bra of a coincidence, pulled back to the pre-selection plane.

    The probability is that of the coincidence for the circuit's own input;
    a zero-probability coincidence raises unless ``allow_zero`` is set.
    """
    pair = (pair[0], pair[1])
    if pair not in DETECTOR_PAIRS:
        raise CircuitError(f"unknown detector pair {pair}")
    if pair not in PURE_PAIRS:
        raise CircuitError(
            f"{pair} includes a polarization-blind dark-port detector and does not "
            "define a single post-selected state"
        )
    u = _detector_bras("left", circuit.recombiner("left"))[pair[0]][0]
    v = _detector_bras("right", circuit.recombiner("right"))[pair[1]][0]
    bra = product_bra(u, v)
    pulled = _arm_operator(circuit.arm_elements()).transpose().apply(bra)
    amp = inner(pulled, preselection_plane(source_polarization))
    if not amp and not allow_zero:
        raise CircuitError(f"coincidence {pair} has zero probability")
    return ConditionedState(pulled, amp * amp, pair)


# HWP post-selection search


@dataclass(frozen=True)
class HwpConfiguration:
    hwp_arms: tuple[int, int] | None
    pair: tuple[str, str]
    recombiners: tuple[str, str]
    conditioned: StateVector
    fidelity: AlgebraicScalar

    def circuit(self) -> OpticalCircuit:
        return _search_circuit(self.hwp_arms, self.recombiners)

    def describe(self) -> str:
        hw = "none" if self.hwp_arms is None else f"arms {self.hwp_arms[0]},{self.hwp_arms[1]}"
        return (
            f"HWP {hw}; coincidence {self.pair[0]}+{self.pair[1]}; "
            f"recombiners {self.recombiners[0]}/{self.recombiners[1]}; "
            f"fidelity {self.fidelity}"
        )


@dataclass
class HwpSearchResult:
    target: str
    configurations: list[HwpConfiguration]
    without_hwp: list[HwpConfiguration]
    target_schmidt_rank: int
    #: largest |<target|product>|^2 over all product bras
    product_bound: AlgebraicScalar | float
    warning: str | None = None

    @property
    def solutions(self) -> list[HwpConfiguration]:
        return [c for c in self.configurations if c.fidelity == 1]

    @property
    def found(self) -> bool:
        return bool(self.solutions)

    @property
    def best_fidelity(self) -> AlgebraicScalar:
        return max(c.fidelity for c in self.configurations)

    def to_dict(self) -> dict:
        def cfg(c: HwpConfiguration) -> dict:
            return {
                "hwp_arms": list(c.hwp_arms) if c.hwp_arms else None,
                "pair": list(c.pair),
                "recombiners": list(c.recombiners),
                "fidelity": c.fidelity.to_string(),
                "conditioned_schmidt_rank": schmidt_rank(c.conditioned),
            }

        return {
            "target": self.target,
            "enumerated": len(self.configurations),
            "found": self.found,
            "best_fidelity": self.best_fidelity.to_string(),
            "target_schmidt_rank": self.target_schmidt_rank,
            "product_bound": str(self.product_bound),
            "warning": self.warning,
            "configurations": [cfg(c) for c in self.configurations],
            "without_hwp": [cfg(c) for c in self.without_hwp],
        }


def _search_circuit(hwp_arms, recombiners) -> OpticalCircuit:
    extra = []
    if hwp_arms is not None:
        extra = [
            OpticalElement("hwp", "left", "arm", hwp_arms[0]),
            OpticalElement("hwp", "right", "arm", hwp_arms[1]),
        ]
    return bare_circuit(recombiners, extra)


def exact_product_bound(v: StateVector) -> AlgebraicScalar | None:
    """Largest squared Schmidt coefficient when ``C C^T`` is a multiple of the identity."""
    c = coefficient_matrix(v)
    gram = [[sum((c[i][k] * c[j][k] for k in range(4)), ZERO) for j in range(4)] for i in range(4)]
    d = gram[0][0]
    if all(gram[i][j] == (d if i == j else ZERO) for i in range(4) for j in range(4)):
        return d
    return None


def float_product_bound(v: StateVector) -> float:
    import numpy as np

    c = np.array([[float(x) for x in row] for row in coefficient_matrix(v)])
    return float(np.linalg.svd(c, compute_uv=False)[0] ** 2)


def hwp_search_phi1(target: str = "phi1") -> HwpSearchResult:
    """Enumerate HWP placements x coincidence pairs x recombiner conventions.

    A configuration succeeds when its conditioned state equals the target
    up to sign, i.e. the exact squared overlap is 1.
    """
    goal = make_postselected(target).vector
    pairs = (("D11", "D22"), ("D12", "D21"))
    signs = tuple(product("+-", repeat=2))

    def run(hwp_choices):
        out = []
        for hwp in hwp_choices:
            for pair in pairs:
                for rec in signs:
                    cond = conditioned_state(_search_circuit(hwp, rec), pair, allow_zero=True)
                    ov = inner(goal, cond.vector)
                    fid = ov * ov / cond.vector.norm2()
                    out.append(HwpConfiguration(hwp, pair, rec, cond.vector, fid))
        return out

    configs = run(tuple(product((1, 2), (3, 4))))
    plain = run((None,))
    bound = exact_product_bound(goal)
    result = HwpSearchResult(
        target=target,
        configurations=configs,
        without_hwp=plain,
        target_schmidt_rank=schmidt_rank(goal),
        product_bound=bound if bound is not None else float_product_bound(goal),
    )
    if not result.found:
        result.warning = (
            f"NEGATIVE RESULT: none of the {len(configs)} HWP configurations post-selects "
            f"{target}. Every coincidence bra is a product state (Schmidt rank 1) while "
            f"{target} has Schmidt rank {result.target_schmidt_rank}; the best achievable "
            f"squared overlap for any product bra is {result.product_bound}, and the best "
            f"found is {result.best_fidelity}."
        )
        log.warning(result.warning)
    return result
