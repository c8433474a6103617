"""Pre- and post-selected two-photon states and the polarization Bell pair."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import (
    HALF,
    INV_SQRT2,
    ONE,
    PATHS,
    ZERO,
    AlgebraicScalar,
    LinearOperator,
    StateVector,
    inner,
    kron,
    kron_vectors,
)

QUARTER = AlgebraicScalar(Fraction(1, 4), 0)

# single-photon polarization, H = 0, V = 1
_H = StateVector([ONE, ZERO])
_V = StateVector([ZERO, ONE])
_PLUS = StateVector([INV_SQRT2, INV_SQRT2])
_MINUS = StateVector([INV_SQRT2, -INV_SQRT2])

HADAMARD = LinearOperator([[INV_SQRT2, INV_SQRT2], [INV_SQRT2, -INV_SQRT2]])
#: Change of polarization-pair coordinates between HV and the diagonal
#: basis (++, +-, -+, --); symmetric and its own inverse.
PM_CHANGE = kron(HADAMARD, HADAMARD)

STATE_NAMES = ("psi", "phi1", "phi2", "bellA", "bellB", "++", "+-", "-+", "--")


@dataclass(frozen=True)
class NamedState:
    name: str
    vector: StateVector
    normalized: bool

    @property
    def dim(self) -> int:
        return self.vector.dim


def _pol_pair(left: StateVector, right: StateVector) -> StateVector:
    return kron_vectors(left, right)


BELL_A = (_pol_pair(_H, _V) + _pol_pair(_V, _H)).scale(INV_SQRT2)
BELL_B = (_pol_pair(_H, _V) - _pol_pair(_V, _H)).scale(INV_SQRT2)


def path_ket(*paths: str | int, coeffs: Sequence | None = None) -> StateVector:
    """Unnormalized 4-vector over the path pairs, e.g. ``path_ket("14", "23", coeffs=[1, -1])``."""
    coeffs = list(coeffs) if coeffs is not None else [1] * len(paths)
    amps = [ZERO] * 4
    for p, c in zip(paths, coeffs):
        k = PATHS.index(str(p))
        amps[k] = amps[k] + AlgebraicScalar.coerce(c)
    return StateVector(amps)


def embed(path_vec: StateVector, pol_vec: StateVector) -> StateVector:
    """``|path> (x) |pol>`` in the 16-dimensional basis."""
    if path_vec.dim != 4 or pol_vec.dim != 4:
        raise ValueError("embed expects 4-component path and polarization vectors")
    return kron_vectors(path_vec, pol_vec)


def bell_state(which: str) -> NamedState:
    if which in ("A", "bellA"):
        return NamedState("bellA", BELL_A, True)
    if which in ("B", "bellB"):
        return NamedState("bellB", BELL_B, True)
    raise ValueError(f"unknown Bell state {which!r}")


def pm_state(label: str) -> NamedState:
    """Diagonal-basis product ``|++>``, ``|+->``, ``|-+>`` or ``|-->`` in HV coordinates."""
    single = {"+": _PLUS, "-": _MINUS}
    if len(label) != 2 or any(ch not in single for ch in label):
        raise ValueError(f"expected a label like '+-', got {label!r}")
    return NamedState(label, _pol_pair(single[label[0]], single[label[1]]), True)


def make_preselected() -> NamedState:
    vec = embed(path_ket(*PATHS).scale(HALF), BELL_A)
    return NamedState("psi", vec, True)


def make_postselected(which: str) -> NamedState:
    if which == "phi1":
        vec = embed(path_ket("13", "24"), BELL_A) + embed(
            path_ket("14", "23", coeffs=[1, -1]), BELL_B
        )
    elif which == "phi2":
        vec = embed(path_ket("13"), BELL_A) + embed(
            path_ket("14", "23", "24", coeffs=[1, -1, -1]), BELL_B
        )
    else:
        raise ValueError(f"unknown post-selection {which!r}; expected phi1 or phi2")
    return NamedState(which, vec.scale(HALF), True)


def get_state(name: str) -> NamedState:
    if name == "psi":
        return make_preselected()
    if name in ("phi1", "phi2"):
        return make_postselected(name)
    if name in ("bellA", "bellB", "A", "B"):
        return bell_state(name)
    if name in ("++", "+-", "-+", "--"):
        return pm_state(name)
    raise ValueError(f"unknown state {name!r}; choose from {', '.join(STATE_NAMES)}")


def basis_change_pm(v: StateVector, direction: str = "hv_to_pm") -> StateVector:
    """Rewrite a polarization-pair 4-vector in the other basis.

    Both directions use the same matrix because the change of basis is an
    involution.
    """
    if direction not in ("hv_to_pm", "pm_to_hv"):
        raise ValueError(f"unknown direction {direction!r}")
    if v.dim != 4:
        raise ValueError("basis_change_pm expects a 4-component polarization vector")
    return PM_CHANGE.apply(v)


@dataclass(frozen=True)
class ContradictionReport:
    pre_projection: StateVector
    post_projection: StateVector
    overlap: AlgebraicScalar
    orthogonal: bool
    pre_self_overlap: AlgebraicScalar
    #: same overlap with |A> substituted for |B> in the post projection
    overlap_with_a_substituted: AlgebraicScalar


def postselection_contradiction_check() -> ContradictionReport:
    """Overlap of the "photons on different sides" branches of psi and phi1."""
    pre = embed(path_ket("14", "23").scale(INV_SQRT2), BELL_A)
    post = embed(path_ket("14", "23", coeffs=[1, -1]).scale(INV_SQRT2), BELL_B)
    post_a = embed(path_ket("14", "23", coeffs=[1, -1]).scale(INV_SQRT2), BELL_A)
    overlap = inner(pre, post)
    return ContradictionReport(
        pre_projection=pre,
        post_projection=post,
        overlap=overlap,
        orthogonal=not overlap,
        pre_self_overlap=inner(pre, pre),
        overlap_with_a_substituted=inner(pre, post_a),
    )
