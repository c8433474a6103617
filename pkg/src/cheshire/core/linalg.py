"""Exact dense vectors and operators over Q(sqrt2)."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .basis import DIM
from .jacobi import jacobi_eigh
from .scalar import ONE, ZERO, AlgebraicScalar, scalar


def _as_scalars(values: Iterable) -> tuple[AlgebraicScalar, ...]:
    return tuple(scalar(x) for x in values)


@dataclass(frozen=True)
class StateVector:
    """Real vector with exact components, usually of dimension 16."""

    amplitudes: tuple[AlgebraicScalar, ...]

    def __init__(self, amplitudes: Iterable) -> None:
        object.__setattr__(self, "amplitudes", _as_scalars(amplitudes))

    @classmethod
    def zeros(cls, dim: int = DIM) -> StateVector:
        return cls([ZERO] * dim)

    @classmethod
    def unit(cls, index: int, dim: int = DIM) -> StateVector:
        amps = [ZERO] * dim
        amps[index] = ONE
        return cls(amps)

    @property
    def dim(self) -> int:
        return len(self.amplitudes)

    def __len__(self) -> int:
        return len(self.amplitudes)

    def __getitem__(self, k: int) -> AlgebraicScalar:
        return self.amplitudes[k]

    def __iter__(self):
        return iter(self.amplitudes)

    def _check(self, other: StateVector) -> None:
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: StateVector) -> StateVector:
        self._check(other)
        return StateVector(a + b for a, b in zip(self.amplitudes, other.amplitudes))

    def __sub__(self, other: StateVector) -> StateVector:
        self._check(other)
        return StateVector(a - b for a, b in zip(self.amplitudes, other.amplitudes))

    def __neg__(self) -> StateVector:
        return StateVector(-a for a in self.amplitudes)

    def scale(self, c) -> StateVector:
        c = scalar(c)
        return StateVector(c * a for a in self.amplitudes)

    def __rmul__(self, c) -> StateVector:
        return self.scale(c)

    def inner(self, other: StateVector) -> AlgebraicScalar:
        return inner(self, other)

    def norm2(self) -> AlgebraicScalar:
        return inner(self, self)

    def is_zero(self) -> bool:
        return not any(self.amplitudes)

    def support(self) -> list[int]:
        return [k for k, a in enumerate(self.amplitudes) if a]

    def to_numpy(self) -> np.ndarray:
        return np.array([float(a) for a in self.amplitudes])

    def to_json(self) -> list[str]:
        return [a.to_string() for a in self.amplitudes]

    def __str__(self) -> str:
        return "[" + ", ".join(str(a) for a in self.amplitudes) + "]"


def inner(u: StateVector, v: StateVector) -> AlgebraicScalar:
    """Bilinear form ``sum_k u_k v_k``; no conjugation since amplitudes are real."""
    if u.dim != v.dim:
        raise ValueError(f"dimension mismatch: {u.dim} vs {v.dim}")
    total = ZERO
    for a, b in zip(u.amplitudes, v.amplitudes):
        if a and b:
            total = total + a * b
    return total


def kron_vectors(u: StateVector, v: StateVector) -> StateVector:
    return StateVector(a * b for a in u.amplitudes for b in v.amplitudes)


def proportionality(u: StateVector, v: StateVector) -> AlgebraicScalar | None:
    """Return ``c`` with ``u == c * v`` exactly, or None if no such ``c`` exists."""
    u._check(v)
    c = None
    for a, b in zip(u.amplitudes, v.amplitudes):
        if not b:
            if a:
                return None
            continue
        ratio = a / b
        if c is None:
            c = ratio
        elif ratio != c:
            return None
    if c is None:
        return ZERO if u.is_zero() else None
    return c


@dataclass(frozen=True)
class LinearOperator:
    """Square matrix with exact entries; ``entries[r][c]``."""

    entries: tuple[tuple[AlgebraicScalar, ...], ...]

    def __init__(self, entries: Iterable[Iterable]) -> None:
        rows = tuple(_as_scalars(row) for row in entries)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("operator matrix must be square")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def identity(cls, dim: int = DIM) -> LinearOperator:
        return cls([[ONE if r == c else ZERO for c in range(dim)] for r in range(dim)])

    @classmethod
    def zeros(cls, dim: int = DIM) -> LinearOperator:
        return cls([[ZERO] * dim for _ in range(dim)])

    @classmethod
    def diag(cls, values: Sequence) -> LinearOperator:
        vals = _as_scalars(values)
        n = len(vals)
        return cls([[vals[r] if r == c else ZERO for c in range(n)] for r in range(n)])

    @classmethod
    def outer(cls, u: StateVector, v: StateVector) -> LinearOperator:
        """Dyad ``|u><v|``."""
        return cls([[a * b for b in v.amplitudes] for a in u.amplitudes])

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __getitem__(self, rc: tuple[int, int]) -> AlgebraicScalar:
        r, c = rc
        return self.entries[r][c]

    @property
    def hermitian_flag(self) -> bool:
        """Exact symmetry check (Hermitian, since all entries are real)."""
        n = self.dim
        e = self.entries
        return all(e[r][c] == e[c][r] for r in range(n) for c in range(r + 1, n))

    def transpose(self) -> LinearOperator:
        return LinearOperator(zip(*self.entries))

    def apply(self, v: StateVector) -> StateVector:
        return apply(self, v)

    def __matmul__(self, other):
        if isinstance(other, StateVector):
            return apply(self, other)
        if not isinstance(other, LinearOperator):
            return NotImplemented
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        cols = list(zip(*other.entries))
        out = []
        for row in self.entries:
            nz = [(k, a) for k, a in enumerate(row) if a]
            out_row = []
            for col in cols:
                acc = ZERO
                for k, a in nz:
                    b = col[k]
                    if b:
                        acc = acc + a * b
                out_row.append(acc)
            out.append(out_row)
        return LinearOperator(out)

    def __add__(self, other: LinearOperator) -> LinearOperator:
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        return LinearOperator(
            [a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)
        )

    def __sub__(self, other: LinearOperator) -> LinearOperator:
        return self + other.scale(-1)

    def __neg__(self) -> LinearOperator:
        return self.scale(-1)

    def scale(self, c) -> LinearOperator:
        c = scalar(c)
        return LinearOperator([c * a for a in row] for row in self.entries)

    def __rmul__(self, c) -> LinearOperator:
        return self.scale(c)

    def commutator(self, other: LinearOperator) -> LinearOperator:
        return (self @ other) - (other @ self)

    def is_zero(self) -> bool:
        return not any(a for row in self.entries for a in row)

    def rank(self) -> int:
        return exact_rank([list(r) for r in self.entries])

    def trace(self) -> AlgebraicScalar:
        total = ZERO
        for k in range(self.dim):
            total = total + self.entries[k][k]
        return total

    def to_numpy(self) -> np.ndarray:
        return np.array([[float(a) for a in row] for row in self.entries])

    def to_json(self) -> list[list[str]]:
        return [[a.to_string() for a in row] for row in self.entries]

    def spectrum(self) -> Spectrum:
        return exact_spectrum(self)


def apply(m: LinearOperator, v: StateVector) -> StateVector:
    if m.dim != v.dim:
        raise ValueError(f"dimension mismatch: operator {m.dim}, vector {v.dim}")
    nz = [(k, b) for k, b in enumerate(v.amplitudes) if b]
    out = []
    for row in m.entries:
        acc = ZERO
        for k, b in nz:
            a = row[k]
            if a:
                acc = acc + a * b
        out.append(acc)
    return StateVector(out)


def tensor_embed(path_matrix: LinearOperator, pol_matrix: LinearOperator) -> LinearOperator:
    """Kronecker product ``path (x) pol`` in the normative index order."""
    pa, po = path_matrix.entries, pol_matrix.entries
    n, m = len(pa), len(po)
    rows = []
    for r1 in range(n):
        for r2 in range(m):
            rows.append([pa[r1][c1] * po[r2][c2] for c1 in range(n) for c2 in range(m)])
    return LinearOperator(rows)


def kron(a: LinearOperator, b: LinearOperator) -> LinearOperator:
    return tensor_embed(a, b)


def exact_rank(rows: list[list[AlgebraicScalar]]) -> int:
    """Rank by fraction-exact Gaussian elimination (input is copied)."""
    m = [list(r) for r in rows]
    if not m:
        return 0
    n_rows, n_cols = len(m), len(m[0])
    rank = 0
    for col in range(n_cols):
        pivot = next((r for r in range(rank, n_rows) if m[r][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = m[rank][col].inverse()
        prow = m[rank]
        for r in range(rank + 1, n_rows):
            f = m[r][col]
            if not f:
                continue
            f = f * inv
            row = m[r]
            for c in range(col, n_cols):
                if prow[c]:
                    row[c] = row[c] - f * prow[c]
        rank += 1
        if rank == n_rows:
            break
    return rank


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues with multiplicities.

    ``exact`` is True when every eigenvalue was certified in Q(sqrt2): the
    candidate values are recovered from a floating-point decomposition and
    accepted only if the exact nullities of ``M - lambda I`` sum to the
    dimension.
    """

    eigenvalues: tuple[tuple[AlgebraicScalar | float, int], ...]
    exact: bool

    @property
    def values(self) -> list:
        return [lam for lam, _ in self.eigenvalues]

    @property
    def minimum(self):
        return min(self.values)

    @property
    def maximum(self):
        return max(self.values)

    def contains(self, x: AlgebraicScalar) -> bool:
        """Whether ``x`` lies in the closed interval [min, max]."""
        if self.exact:
            return self.minimum <= x <= self.maximum
        xf = float(x)
        return self.minimum - 1e-9 <= xf <= self.maximum + 1e-9


def _candidate(x: float) -> AlgebraicScalar | None:
    # rationals with small denominators, then q*sqrt2 with rational q
    f = Fraction(x).limit_denominator(64)
    if abs(float(f) - x) < 1e-9:
        return AlgebraicScalar(f, 0)
    g = Fraction(x / np.sqrt(2.0)).limit_denominator(64)
    if abs(float(g) * np.sqrt(2.0) - x) < 1e-9:
        return AlgebraicScalar(0, g)
    return None


def exact_spectrum(m: LinearOperator) -> Spectrum:
    a = m.to_numpy()
    n = m.dim
    if not m.hermitian_flag:
        w = np.linalg.eigvals(a)
        vals = sorted(float(np.real(x)) for x in w)
        return Spectrum(tuple(_group_floats(vals)), exact=False)
    w, _ = jacobi_eigh(a)
    cands: list[AlgebraicScalar] = []
    for x in w:
        c = _candidate(float(x))
        if c is None:
            return Spectrum(tuple(_group_floats(list(w))), exact=False)
        if c not in cands:
            cands.append(c)
    found = []
    total = 0
    for lam in sorted(cands):
        shifted = [
            [e - lam if r == c else e for c, e in enumerate(row)]
            for r, row in enumerate(m.entries)
        ]
        nullity = n - exact_rank(shifted)
        if nullity:
            found.append((lam, nullity))
            total += nullity
    if total != n:
        return Spectrum(tuple(_group_floats(list(w))), exact=False)
    return Spectrum(tuple(found), exact=True)


def _group_floats(vals: list[float], tol: float = 1e-9) -> list[tuple[float, int]]:
    out: list[tuple[float, int]] = []
    for x in sorted(float(v) for v in vals):
        if out and abs(out[-1][0] - x) < tol:
            out[-1] = (out[-1][0], out[-1][1] + 1)
        else:
            out.append((x, 1))
    return out


def vector_to_json(v: StateVector) -> str:
    return json.dumps(v.to_json())


def vector_from_json(data: str | list) -> StateVector:
    items = json.loads(data) if isinstance(data, str) else data
    return StateVector(AlgebraicScalar.parse(s) for s in items)


def operator_from_json(data: str | list) -> LinearOperator:
    rows = json.loads(data) if isinstance(data, str) else data
    return LinearOperator([AlgebraicScalar.parse(s) for s in row] for row in rows)
