import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cheshire.core import LinearOperator
from cheshire.observables import observable
from cheshire.pointer import (
    CouplingSpec,
    convergence_sweep,
    evolve_and_postselect,
    make_pointer,
    mean_position,
    translate,
    variance,
)

CASES = [("pi", "13", "phi1"), ("zx", "13", "phi1"), ("zx", "2.", "phi2")]


def closed_form(op: LinearOperator, pre, post, g, s=1.0):
    """Mean, variance and success probability of sum_l c_l G(x - g l), analytically."""
    w, v = np.linalg.eigh(op.to_numpy())
    pre, post = pre.vector.to_numpy(), post.vector.to_numpy()
    lam, c = [], []
    for val in np.unique(np.round(w, 9)):
        cols = v[:, np.isclose(w, val, atol=1e-9)]
        lam.append(val)
        c.append(post @ cols @ cols.T @ pre)
    lam, c = np.array(lam) * g, np.array(c)
    a, b = np.meshgrid(lam, lam, indexing="ij")
    kern = np.outer(c, c) * np.exp(-((a - b) ** 2) / (8 * s**2))
    norm = kern.sum()
    mean = (kern * (a + b) / 2).sum() / norm
    second = (kern * ((a + b) ** 2 / 4 + s**2)).sum() / norm
    return mean, second - mean**2, norm


@pytest.fixture(scope="module")
def pointer():
    return make_pointer()


def test_pointer_normalized_and_centred(pointer):
    assert abs(pointer.norm - 1) < 1e-10
    assert abs(mean_position(pointer)) < 1e-10
    assert abs(variance(pointer) - 1.0) < 1e-10
    assert pointer.count == 4096 and pointer.half_range == pytest.approx(12.0)


@pytest.mark.parametrize("shift", [0.02, 0.0137, -0.5, 1.234567])
def test_translation_accuracy(pointer, shift):
    moved = translate(pointer, shift)
    exact = np.exp(-((pointer.x - shift) ** 2) / 4) / (2 * np.pi) ** 0.25
    assert np.max(np.abs(moved.amplitudes - exact)) < 1e-8
    assert abs(mean_position(moved) - shift) < 1e-6


def test_zero_coupling(pointer, psi, phi1):
    res = evolve_and_postselect(CouplingSpec(0.0, observable("pi", "13"), psi, phi1), pointer)
    assert np.allclose(res.pointer.amplitudes, pointer.amplitudes, atol=1e-12)
    assert res.probability == pytest.approx(0.25, abs=1e-12)


def test_identity_translates_rigidly(pointer, psi, phi2):
    res = evolve_and_postselect(CouplingSpec(0.3, LinearOperator.identity(), psi, phi2), pointer)
    assert np.allclose(res.pointer.amplitudes, translate(pointer, 0.3).amplitudes, atol=1e-10)
    assert mean_position(res.pointer) == pytest.approx(0.3, abs=1e-8)


@pytest.mark.parametrize("kind,sel,post", CASES)
@pytest.mark.parametrize("g", [0.3, 0.03, 0.01])
def test_against_closed_form(pointer, kind, sel, post, g, psi, request):
    op = observable(kind, sel)
    fin = request.getfixturevalue(post)
    res = evolve_and_postselect(CouplingSpec(g, op, psi, fin), pointer)
    mean, var, prob = closed_form(op, psi, fin, g)
    assert mean_position(res.pointer) == pytest.approx(mean, abs=1e-10)
    assert variance(res.pointer) == pytest.approx(var, abs=1e-8)
    assert res.probability == pytest.approx(prob, abs=1e-10)
    assert abs(res.joint_norm - 1) < 1e-8
    if g <= 0.03:
        # weak regime: no back-action on the width at first order
        assert abs(variance(res.pointer) - 1) < 0.01


@settings(max_examples=15, deadline=None)
@given(st.floats(0.001, 0.5))
def test_joint_norm_conserved(g):
    from cheshire.states import make_postselected, make_preselected

    res = evolve_and_postselect(
        CouplingSpec(g, observable("zx", "2."), make_preselected(), make_postselected("phi2")),
        make_pointer(count=1024),
    )
    assert abs(res.joint_norm - 1) < 1e-8


def test_success_probability(pointer, psi, phi1, phi2):
    for post, target in ((phi1, 1 / 4), (phi2, 1 / 16)):
        res = evolve_and_postselect(CouplingSpec(1e-3, observable("zx", "2."), psi, post), pointer)
        assert abs(res.probability - target) < 1e-4


def test_example_shift(pointer, psi, phi2):
    res = evolve_and_postselect(CouplingSpec(0.01, observable("zx", "2."), psi, phi2), pointer)
    assert mean_position(res.pointer) == pytest.approx(0.02, abs=1e-3)


def test_coarse_grid_warns(psi, phi1):
    res = evolve_and_postselect(
        CouplingSpec(1e-4, observable("pi", "13"), psi, phi1), make_pointer(count=256)
    )
    assert res.warnings and "dx/10" in res.warnings[0]


def test_rejects_bad_inputs(psi, phi1):
    with pytest.raises(ValueError):
        CouplingSpec(0.1, observable("zx", "13", "matrix_literal"), psi, phi1)
    with pytest.raises(TypeError):
        CouplingSpec(0.1, observable("pi", "13", "appendix_oracle"), psi, phi1)
    from cheshire.states import BELL_B, NamedState, embed, path_ket

    ortho = NamedState("ortho", embed(path_ket("13"), BELL_B), True)
    with pytest.raises(ValueError):
        evolve_and_postselect(CouplingSpec(0.1, observable("pi", "13"), psi, ortho), make_pointer())
    with pytest.raises(ValueError):
        convergence_sweep(observable("pi", "13"), psi, phi1, [0.01, 0.03])
    with pytest.raises(ValueError):
        convergence_sweep(observable("pi", "13"), psi, phi1, [0.0])


def test_sweep_error_is_second_order(psi, phi2):
    sweep = convergence_sweep(observable("zx", "2."), psi, phi2, [0.1, 0.05, 0.025])
    e = [r.error for r in sweep.rows]
    # halving g quarters the deviation
    assert e[0] / e[1] == pytest.approx(4, rel=0.05)
    assert e[1] / e[2] == pytest.approx(4, rel=0.05)
    assert sweep.exact_weak_value == 2.0
    assert sweep.to_dict()["rows"][0]["g"] == 0.1
