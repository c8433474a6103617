"""Numerical search for arm polarization unitaries realizing a post-selection.

Each arm carries an arbitrary U(2) acting on polarization, parametrized by
four angles. With '+' recombiners, a bright-port coincidence with
polarizations ``(e_L, e_R)`` projects onto the product bra
``u (x) v`` with ``u[arm, p] = (U_arm^T e_L)[p] / sqrt2`` (similarly ``v``),
so the fidelity with a real target is ``|u^T C v|**2`` for the target's
left/right coefficient matrix ``C``. All results are floating point.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .core import StateVector
from .interferometer import PURE_PAIRS, coefficient_matrix
from .states import make_postselected

_POL_OF = {"D11": 0, "D12": 1, "D21": 0, "D22": 1}
_INV_SQRT2 = 1 / math.sqrt(2)


def su2_param(theta: float, alpha: float, beta: float, gamma: float) -> np.ndarray:
    """General U(2): ``e^{i alpha} [[e^{i beta} c, e^{i gamma} s], [-e^{-i gamma} s, e^{-i beta} c]]``."""
    c, s = np.cos(theta), np.sin(theta)
    return np.exp(1j * alpha) * np.array(
        [
            [np.exp(1j * beta) * c, np.exp(1j * gamma) * s],
            [-np.exp(-1j * gamma) * s, np.exp(-1j * beta) * c],
        ]
    )


def _side_bra(params: np.ndarray, pol: int) -> np.ndarray:
    # column ``U^T e_pol`` of su2_param, written out to keep the objective cheap
    u = np.empty(4, dtype=complex)
    for arm in range(2):
        theta, alpha, beta, gamma = params[4 * arm : 4 * arm + 4]
        c, s = cmath.cos(theta), cmath.sin(theta)
        ph = cmath.exp(1j * alpha) * _INV_SQRT2
        if pol == 0:
            u[2 * arm] = ph * cmath.exp(1j * beta) * c
            u[2 * arm + 1] = ph * cmath.exp(1j * gamma) * s
        else:
            u[2 * arm] = -ph * cmath.exp(-1j * gamma) * s
            u[2 * arm + 1] = ph * cmath.exp(-1j * beta) * c
    return u


def fidelity(params: np.ndarray, pair: tuple[str, str], coeff: np.ndarray) -> float:
    u = _side_bra(params[:8], _POL_OF[pair[0]])
    v = _side_bra(params[8:], _POL_OF[pair[1]])
    return float(abs(u @ coeff @ v) ** 2)


def conditioned_vector(params: np.ndarray, pair: tuple[str, str]) -> np.ndarray:
    """Complex 16-vector ``conj(u (x) v)`` in the normative basis order."""
    u = _side_bra(params[:8], _POL_OF[pair[0]])
    v = _side_bra(params[8:], _POL_OF[pair[1]])
    out = np.zeros(16, dtype=complex)
    for a in range(2):
        for b in range(2):
            for pl in range(2):
                for pr in range(2):
                    out[(2 * a + b) * 4 + 2 * pl + pr] = u[2 * a + pl] * v[2 * b + pr]
    return np.conj(out)


@dataclass
class SynthesisResult:
    target: str
    best_fidelity: float
    best_pair: tuple[str, str]
    best_params: np.ndarray
    success: bool
    tolerance: float
    restarts: int
    #: largest squared Schmidt coefficient of the target, an upper bound for any product bra
    product_bound: float
    per_pair: dict[tuple[str, str], float] = field(default_factory=dict)
    exact: bool = False

    @property
    def finding(self) -> str:
        if self.success:
            return f"realized {self.target} with fidelity {self.best_fidelity:.12f}"
        return (
            f"no local realization of {self.target}: best fidelity {self.best_fidelity:.12f} "
            f"(product-state bound {self.product_bound:.12f}) after {self.restarts} restarts "
            f"per detector pair"
        )

    def to_dict(self) -> dict:
        return {
            "target": self.target,
            "exact": self.exact,
            "best_fidelity": self.best_fidelity,
            "best_pair": list(self.best_pair),
            "best_params": [float(x) for x in self.best_params],
            "success": self.success,
            "tolerance": self.tolerance,
            "restarts": self.restarts,
            "product_bound": self.product_bound,
            "per_pair": {f"{a}+{b}": f for (a, b), f in self.per_pair.items()},
            "finding": self.finding,
        }


def synthesize(
    target: StateVector | np.ndarray,
    *,
    tolerance: float = 1e-6,
    restarts: int = 100,
    seed: int = 0,
    name: str = "target",
) -> SynthesisResult:
    """Maximize the coincidence fidelity with ``target`` over all arm unitaries."""
    if not 0 < tolerance < 1:
        raise ValueError("tolerance must lie in (0, 1)")
    if restarts < 1:
        raise ValueError("need at least one restart")
    if isinstance(target, StateVector):
        coeff = np.array([[float(x) for x in row] for row in coefficient_matrix(target)])
    else:
        t = np.asarray(target)
        coeff = np.zeros((4, 4), dtype=t.dtype)
        for a in range(2):
            for b in range(2):
                for pl in range(2):
                    for pr in range(2):
                        coeff[2 * a + pl, 2 * b + pr] = t[(2 * a + b) * 4 + 2 * pl + pr]
    coeff = coeff / np.linalg.norm(coeff)
    bound = float(np.linalg.svd(coeff, compute_uv=False)[0] ** 2)

    seeds = np.random.SeedSequence(seed).spawn(len(PURE_PAIRS))
    candidates = []
    per_pair = {}
    for pair, ss in zip(PURE_PAIRS, seeds):
        rng = np.random.default_rng(ss)
        best_here = 0.0
        for _ in range(restarts):
            x0 = rng.uniform(-np.pi, np.pi, size=16)
            res = minimize(lambda x: -fidelity(x, pair, coeff), x0, method="BFGS")
            f = fidelity(res.x, pair, coeff)
            best_here = max(best_here, f)
            candidates.append((f, pair, tuple(np.round(res.x, 12))))
        per_pair[pair] = best_here

    top = max(f for f, _, _ in candidates)
    # deterministic tie-break among near-equal optima
    tied = sorted((p, x) for f, p, x in candidates if f >= top - 1e-12)
    pair, params = tied[0]
    best = max(f for f, p, x in candidates if (p, x) == (pair, params))
    return SynthesisResult(
        target=name,
        best_fidelity=best,
        best_pair=pair,
        best_params=np.array(params),
        success=best >= 1 - tolerance,
        tolerance=tolerance,
        restarts=restarts,
        product_bound=bound,
        per_pair=per_pair,
    )


def unitary_synthesis_phi2(
    tolerance: float = 1e-6, restarts: int = 100, seed: int = 0, target: str = "phi2"
) -> SynthesisResult:
    return synthesize(
        make_postselected(target).vector,
        tolerance=tolerance,
        restarts=restarts,
        seed=seed,
        name=target,
    )
