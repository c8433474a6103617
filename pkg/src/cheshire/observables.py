"""Arm-resolved position and polarization observables.

Three readings of the operator definitions are supported:

``matrix_literal``
    Position projectors ``|ij><ij| (x) (|HV><HV| + |VH><VH|)``; the
    polarization factors are the printed diagonal-basis matrices for
    sigma_z (x) sigma_z and sigma_z (x) sigma_x, rotated into HV
    coordinates, where they become sigma_x (x) sigma_x and
    sigma_x (x) sigma_z.
``effective_hermitian``
    As above, except that the zx factor is ``1 (x) sigma_z`` in HV
    coordinates, the Pauli form that sends |A> to -|B>.
``appendix_oracle``
    No matrices at all: each operator is a table giving its action on the
    pre-selected state only.

Under ``matrix_literal`` the zx factor does not commute with the
position projector, so ``Pi_ij * sigma_zx`` is not symmetric and it
annihilates |psi>. The other two readings agree on every action.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .core import (
    HALF,
    ONE,
    PATHS,
    ZERO,
    AlgebraicScalar,
    LinearOperator,
    Spectrum,
    StateVector,
    proportionality,
    tensor_embed,
)
from .states import BELL_A, BELL_B, PM_CHANGE, embed, make_preselected, path_ket

CONVENTIONS = ("matrix_literal", "effective_hermitian", "appendix_oracle")
DEFAULT_CONVENTION = "effective_hermitian"
KINDS = ("pi", "zz", "zx")
SELECTORS = ("13", "14", "23", "24", "1.", "2.", ".3", ".4")

#: sigma_z (x) sigma_z written in the (++, +-, -+, --) basis
SIGMA_ZZ_PM = LinearOperator.diag([1, -1, -1, 1])
#: sigma_z (x) sigma_x written in the (++, +-, -+, --) basis
SIGMA_ZX_PM = LinearOperator(
    [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, -1, 0]]
)

#: projector onto span{|HV>, |VH>}
HV_VH_PROJECTOR = LinearOperator.diag([0, 1, 1, 0])

_PAULI_X = LinearOperator([[0, 1], [1, 0]])
_PAULI_Z = LinearOperator.diag([1, -1])
_ID2 = LinearOperator.identity(2)

POL_FACTORS = {
    ("zz", "matrix_literal"): PM_CHANGE @ SIGMA_ZZ_PM @ PM_CHANGE,
    ("zx", "matrix_literal"): PM_CHANGE @ SIGMA_ZX_PM @ PM_CHANGE,
    ("zz", "effective_hermitian"): PM_CHANGE @ SIGMA_ZZ_PM @ PM_CHANGE,
    ("zx", "effective_hermitian"): tensor_embed(_ID2, _PAULI_Z),
}


def check_convention(conv: str) -> str:
    if conv not in CONVENTIONS:
        raise ValueError(f"unknown convention {conv!r}; choose from {', '.join(CONVENTIONS)}")
    return conv


@dataclass(frozen=True)
class ArmSelector:
    """Arms probed on each side; ``None`` means both arms of that interferometer."""

    left: int | None
    right: int | None

    def __post_init__(self) -> None:
        if self.left not in (1, 2, None) or self.right not in (3, 4, None):
            raise ValueError(f"invalid arms ({self.left}, {self.right})")
        if self.left is None and self.right is None:
            raise ValueError("at most one side may be traced out")

    @classmethod
    def parse(cls, text: str | int) -> ArmSelector:
        """Parse ``"13"``, ``"2."``, ``".4"`` (``·`` is accepted for the dot)."""
        s = str(text).strip().replace("·", ".")
        if len(s) != 2:
            raise ValueError(f"invalid arm selector {text!r}")
        try:
            left = None if s[0] == "." else int(s[0])
            right = None if s[1] == "." else int(s[1])
        except ValueError:
            raise ValueError(f"invalid arm selector {text!r}") from None
        return cls(left, right)

    @property
    def is_marginal(self) -> bool:
        return self.left is None or self.right is None

    def paths(self) -> list[str]:
        lefts = (1, 2) if self.left is None else (self.left,)
        rights = (3, 4) if self.right is None else (self.right,)
        return [f"{i}{j}" for i in lefts for j in rights]

    def __str__(self) -> str:
        return f"{'.' if self.left is None else self.left}{'.' if self.right is None else self.right}"


def _selector(sel: ArmSelector | str | int) -> ArmSelector:
    return sel if isinstance(sel, ArmSelector) else ArmSelector.parse(sel)


def _path_projector(path: str) -> LinearOperator:
    k = PATHS.index(path)
    return LinearOperator.diag([1 if i == k else 0 for i in range(4)])


@dataclass(frozen=True)
class ActionTable:
    """An operator known only through its action on one reference state."""

    label: str
    domain: StateVector
    image: StateVector

    def apply(self, v: StateVector) -> StateVector:
        c = proportionality(v, self.domain)
        if c is None:
            raise ValueError(
                f"action table {self.label} is defined only on multiples of the pre-selected state"
            )
        return self.image.scale(c)

    def __add__(self, other: ActionTable) -> ActionTable:
        if other.domain != self.domain:
            raise ValueError("action tables have different domains")
        return ActionTable(f"{self.label}+{other.label}", self.domain, self.image + other.image)

    def scale(self, c) -> ActionTable:
        return ActionTable(f"{c}*{self.label}", self.domain, self.image.scale(c))

    def to_json(self) -> dict:
        return {"label": self.label, "domain": "psi", "image": self.image.to_json()}


Observable = LinearOperator | ActionTable


def _single_arm_pi(path: str) -> LinearOperator:
    return tensor_embed(_path_projector(path), HV_VH_PROJECTOR)


def _appendix_action(kind: str, path: str) -> ActionTable:
    ket = path_ket(path)
    if kind in ("pi", "zz"):
        image = embed(ket, BELL_A).scale(HALF)
    else:
        image = embed(ket, BELL_B).scale(-HALF)
    return ActionTable(f"{kind}^{path}", make_preselected().vector, image)


@lru_cache(maxsize=None)
def _build(kind: str, sel: ArmSelector, conv: str) -> Observable:
    parts = []
    for path in sel.paths():
        if conv == "appendix_oracle":
            parts.append(_appendix_action(kind, path))
        elif kind == "pi":
            parts.append(_single_arm_pi(path))
        else:
            pol = POL_FACTORS[(kind, conv)]
            full = tensor_embed(LinearOperator.identity(4), pol)
            parts.append(_single_arm_pi(path) @ full)
    op = parts[0]
    for extra in parts[1:]:
        op = op + extra
    if isinstance(op, ActionTable):
        op = ActionTable(f"{kind}^{sel}", op.domain, op.image)
    elif not (kind == "zx" and conv == "matrix_literal") and not op.hermitian_flag:
        raise RuntimeError(f"{kind}^{sel} under {conv} came out non-Hermitian")
    return op


def position_op(sel: ArmSelector | str, conv: str = DEFAULT_CONVENTION) -> Observable:
    """Pi_ij, or a marginal Pi_i. / Pi_.j summed over the traced-out side."""
    return _build("pi", _selector(sel), check_convention(conv))


def sigma_op(kind: str, sel: ArmSelector | str, conv: str = DEFAULT_CONVENTION) -> Observable:
    """Arm-resolved polarization observable ``Pi_sel * sigma_kind``."""
    if kind not in ("zz", "zx"):
        raise ValueError(f"sigma kind must be 'zz' or 'zx', got {kind!r}")
    return _build(kind, _selector(sel), check_convention(conv))


def observable(kind: str, sel: ArmSelector | str, conv: str = DEFAULT_CONVENTION) -> Observable:
    if kind == "pi":
        return position_op(sel, conv)
    return sigma_op(kind, sel, conv)


def pol_factor(kind: str, conv: str) -> LinearOperator:
    """4x4 polarization factor of a sigma observable in HV coordinates."""
    check_convention(conv)
    if conv == "appendix_oracle":
        raise ValueError("appendix_oracle has no matrix form")
    return POL_FACTORS[(kind, conv)]


@lru_cache(maxsize=None)
def operator_spectrum(kind: str, sel: str, conv: str) -> Spectrum | None:
    """Spectrum of a matrix-form observable; None for action tables."""
    op = observable(kind, sel, conv)
    if isinstance(op, ActionTable):
        return None
    return op.spectrum()


def act_on_psi(op: Observable) -> StateVector:
    return op.apply(make_preselected().vector)


# written-dyad reading

_POL_KETS = {
    "H": (ONE, ZERO),
    "V": (ZERO, ONE),
    "+": (AlgebraicScalar(0, Fraction(1, 2)), AlgebraicScalar(0, Fraction(1, 2))),
    "-": (AlgebraicScalar(0, Fraction(1, 2)), AlgebraicScalar(0, Fraction(-1, 2))),
}


def _pol_pair_vector(label: str) -> StateVector:
    a, b = _POL_KETS[label[0]], _POL_KETS[label[1]]
    return StateVector([x * y for x in a for y in b])


def written_dyad(ket: str, bra_as_written: str, coeff=1) -> LinearOperator:
    """Polarization dyad ``coeff |ket><bra|`` with the bra labels read in reverse.

    ``written_dyad("+-", "-+")`` is ``|+-><+-|``: a bra printed as ``<ab|``
    is taken to be the adjoint of ``|ba>``.
    """
    bra = bra_as_written[::-1]
    return LinearOperator.outer(_pol_pair_vector(ket), _pol_pair_vector(bra)).scale(coeff)


# convention comparison


@dataclass(frozen=True)
class Discrepancy:
    kind: str
    selector: str
    conv_a: str
    conv_b: str
    difference: StateVector
    #: the difference lies in span{|path> (x) |B>}
    along_bell_b: bool


@dataclass(frozen=True)
class DiscrepancyReport:
    entries: tuple[Discrepancy, ...]
    compared: int

    def for_kind(self, kind: str) -> list[Discrepancy]:
        return [d for d in self.entries if d.kind == kind]

    @property
    def kinds_with_discrepancies(self) -> set[str]:
        return {d.kind for d in self.entries}


def _along_bell_b(v: StateVector) -> bool:
    for block in range(4):
        pol = StateVector(v.amplitudes[4 * block : 4 * block + 4])
        if proportionality(pol, BELL_B) is None:
            return False
    return True


@lru_cache(maxsize=None)
def convention_discrepancy_report() -> DiscrepancyReport:
    """Exact differences of actions on |psi> for every observable and convention pair."""
    entries = []
    compared = 0
    for kind in KINDS:
        for sel in SELECTORS:
            actions = {conv: act_on_psi(observable(kind, sel, conv)) for conv in CONVENTIONS}
            for a, b in combinations(CONVENTIONS, 2):
                compared += 1
                diff = actions[a] - actions[b]
                if not diff.is_zero():
                    entries.append(Discrepancy(kind, sel, a, b, diff, _along_bell_b(diff)))
    return DiscrepancyReport(tuple(entries), compared)
