"""Normative labelling of the 16-dimensional two-photon basis.

``index = path_rank * 4 + pol_rank`` with paths ordered 13, 14, 23, 24 and
polarization pairs ordered HH, HV, VH, VV (left photon first). This equals
the Kronecker order ``left_arm x right_arm x left_pol x right_pol`` with
arm 1/3 and H as the 0 state on each factor.
"""

from __future__ import annotations

from dataclasses import dataclass

PATHS: tuple[str, ...] = ("13", "14", "23", "24")
POLS: tuple[str, ...] = ("HH", "HV", "VH", "VV")
DIM = 16


@dataclass(frozen=True, order=True)
class BasisLabel:
    path: str
    pol: str

    def __post_init__(self) -> None:
        if self.path not in PATHS:
            raise ValueError(f"path must be one of {PATHS}, got {self.path!r}")
        if self.pol not in POLS:
            raise ValueError(f"pol must be one of {POLS}, got {self.pol!r}")

    @property
    def index(self) -> int:
        return PATHS.index(self.path) * 4 + POLS.index(self.pol)

    @classmethod
    def from_index(cls, index: int) -> BasisLabel:
        if not 0 <= index < DIM:
            raise IndexError(f"basis index out of range: {index}")
        return cls(PATHS[index // 4], POLS[index % 4])

    def __str__(self) -> str:
        return f"|{self.path},{self.pol}>"


def basis_index(path: str | int, pol: str) -> int:
    return BasisLabel(str(path), pol).index


def all_labels() -> list[BasisLabel]:
    return [BasisLabel.from_index(k) for k in range(DIM)]
