"""Von Neumann pointer model of a weak measurement.

The system-pointer coupling ``g * O (x) p`` translates the pointer component
attached to each eigenvector of ``O`` by ``g`` times its eigenvalue. After
projecting the system onto the post-selected state, the pointer's mean
position divided by ``g`` tends to the real part of the weak value.

Translations by arbitrary (sub-grid) distances are band-limited: the grid
function is shifted by a phase ramp in the discrete Fourier domain. The
grid is cell-centred on [-L, L] so that its period equals 2L.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import LinearOperator, jacobi_eigh
from .states import NamedState
from .weak import weak_value

log = logging.getLogger(__name__)

DEFAULT_WIDTH = 1.0
DEFAULT_HALF_RANGE = 12.0
DEFAULT_POINTS = 4096


@dataclass(frozen=True)
class PointerState:
    x: np.ndarray
    amplitudes: np.ndarray
    width: float

    @property
    def dx(self) -> float:
        return float(self.x[1] - self.x[0])

    @property
    def count(self) -> int:
        return len(self.x)

    @property
    def half_range(self) -> float:
        return self.count * self.dx / 2

    @property
    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2) * self.dx)

    def normalized(self) -> PointerState:
        n = self.norm
        if n == 0.0:
            raise ValueError("cannot normalize a zero pointer state")
        return PointerState(self.x, self.amplitudes / np.sqrt(n), self.width)


def make_pointer(
    width: float = DEFAULT_WIDTH,
    half_range: float | None = None,
    count: int = DEFAULT_POINTS,
) -> PointerState:
    """Gaussian ``exp(-x**2 / (4 s**2))`` normalized on the grid."""
    if half_range is None:
        half_range = DEFAULT_HALF_RANGE * width
    dx = 2 * half_range / count
    x = (np.arange(count) - (count - 1) / 2) * dx
    amp = np.exp(-(x**2) / (4 * width**2)).astype(complex)
    return PointerState(x, amp, width).normalized()


def translate(pointer: PointerState, shift: float) -> PointerState:
    """``psi(x) -> psi(x - shift)`` by band-limited interpolation."""
    if shift == 0.0:
        return pointer
    k = 2 * np.pi * np.fft.fftfreq(pointer.count, d=pointer.dx)
    spectrum = np.fft.fft(pointer.amplitudes)
    moved = np.fft.ifft(spectrum * np.exp(-1j * k * shift))
    return PointerState(pointer.x, moved, pointer.width)


def mean_position(pointer: PointerState) -> float:
    prob = np.abs(pointer.amplitudes) ** 2
    return float(np.sum(pointer.x * prob) * pointer.dx)


def variance(pointer: PointerState) -> float:
    prob = np.abs(pointer.amplitudes) ** 2
    mu = np.sum(pointer.x * prob) * pointer.dx
    return float(np.sum((pointer.x - mu) ** 2 * prob) * pointer.dx)


@dataclass(frozen=True)
class CouplingSpec:
    g: float
    observable: LinearOperator
    pre: NamedState
    post: NamedState

    def __post_init__(self) -> None:
        if not isinstance(self.observable, LinearOperator):
            raise TypeError("pointer coupling needs a matrix-form observable")
        if not self.observable.hermitian_flag:
            raise ValueError("pointer coupling needs a Hermitian observable")


@dataclass
class PostSelection:
    pointer: PointerState
    probability: float
    joint_norm: float
    warnings: list[str] = field(default_factory=list)


def evolve_and_postselect(spec: CouplingSpec, pointer: PointerState) -> PostSelection:
    pre = spec.pre.vector.to_numpy()
    post = spec.post.vector.to_numpy()
    if abs(post @ pre) < 1e-15:
        raise ValueError("pre- and post-selected states are orthogonal")
    warnings = []
    eigvals, eigvecs = jacobi_eigh(spec.observable.to_numpy())
    if spec.g * np.max(np.abs(eigvals)) < pointer.dx / 10:
        msg = (
            f"coupling shift g*max|lambda| = {spec.g * np.max(np.abs(eigvals)):.3g} "
            f"is below dx/10 = {pointer.dx / 10:.3g}"
        )
        warnings.append(msg)
        log.warning(msg)

    weights = eigvecs.T @ pre  # <v_m|pre>
    shifted = {}
    joint = np.zeros((len(pre), pointer.count), dtype=complex)
    for m, lam in enumerate(eigvals):
        if weights[m] == 0.0:
            continue
        key = round(float(lam), 12)
        if key not in shifted:
            shifted[key] = translate(pointer, spec.g * float(lam)).amplitudes
        joint += np.outer(eigvecs[:, m] * weights[m], shifted[key])

    joint_norm = float(np.sum(np.abs(joint) ** 2) * pointer.dx)
    final = post @ joint
    prob = float(np.sum(np.abs(final) ** 2) * pointer.dx)
    out = PointerState(pointer.x, final, pointer.width)
    return PostSelection(out.normalized(), prob, joint_norm, warnings)


@dataclass(frozen=True)
class SweepRow:
    g: float
    mean_shift: float
    ratio: float
    error: float
    probability: float
    variance: float


@dataclass
class SweepResult:
    exact_weak_value: float
    rows: list[SweepRow]
    warnings: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "exact_weak_value": self.exact_weak_value,
            "rows": [
                {
                    "g": r.g,
                    "mean_shift": r.mean_shift,
                    "shift_over_g": r.ratio,
                    "abs_error": r.error,
                    "success_probability": r.probability,
                    "variance": r.variance,
                }
                for r in self.rows
            ],
            "warnings": self.warnings,
        }


def convergence_sweep(
    observable: LinearOperator,
    pre: NamedState,
    post: NamedState,
    g_list: Sequence[float],
    pointer: PointerState | None = None,
) -> SweepResult:
    """Pointer shift per unit coupling for each ``g``, against the exact weak value.

    For a real weak value and a Gaussian pointer the deviation of
    ``shift / g`` from the weak value is of order ``g**2 / s**2``.
    """
    g_list = [float(g) for g in g_list]
    if any(g <= 0 for g in g_list):
        raise ValueError("coupling strengths must be positive")
    if any(a <= b for a, b in zip(g_list, g_list[1:])):
        raise ValueError("coupling strengths must be strictly descending")
    pointer = pointer or make_pointer()
    exact = float(weak_value(observable, pre, post))
    rows = []
    warnings = []
    for g in g_list:
        res = evolve_and_postselect(CouplingSpec(g, observable, pre, post), pointer)
        warnings += res.warnings
        shift = mean_position(res.pointer)
        ratio = shift / g
        rows.append(
            SweepRow(g, shift, ratio, abs(ratio - exact), res.probability, variance(res.pointer))
        )
    return SweepResult(exact, rows, warnings)
