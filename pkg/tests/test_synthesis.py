import numpy as np
import pytest

from cheshire.interferometer import bare_circuit, conditioned_state
from cheshire.states import make_postselected
from cheshire.synthesis import (
    conditioned_vector,
    su2_param,
    synthesize,
    unitary_synthesis_phi2,
)


def test_su2_param_is_unitary():
    rng = np.random.default_rng(3)
    for _ in range(10):
        u = su2_param(*rng.uniform(-np.pi, np.pi, 4))
        assert np.allclose(u.conj().T @ u, np.eye(2))


def test_side_bra_matches_matrix_form():
    from cheshire.synthesis import _side_bra

    rng = np.random.default_rng(5)
    params = rng.uniform(-np.pi, np.pi, 8)
    for pol in (0, 1):
        e = np.eye(2)[pol]
        ref = np.concatenate([su2_param(*params[4 * a : 4 * a + 4]).T @ e for a in range(2)])
        assert np.allclose(_side_bra(params, pol), ref / np.sqrt(2))


def test_identity_parameters_reproduce_exact_pullback():
    # all-zero angles give identity arm optics behind '+' recombiners
    exact = conditioned_state(bare_circuit(), ("D11", "D22")).vector.to_numpy()
    got = conditioned_vector(np.zeros(16), ("D11", "D22"))
    assert np.allclose(got, exact)


def test_reachable_target_is_found():
    target = conditioned_state(bare_circuit(), ("D12", "D21")).vector.to_numpy()
    res = synthesize(target, restarts=5, name="bare")
    assert res.success and res.best_fidelity > 1 - 1e-9
    assert not res.exact


def test_fidelity_invariant_under_global_sign():
    target = make_postselected("phi2").vector.to_numpy()
    a = synthesize(target, restarts=3, seed=1)
    b = synthesize(-target, restarts=3, seed=1)
    assert a.best_fidelity == pytest.approx(b.best_fidelity, abs=1e-12)


def test_phi1_is_capped_by_product_bound():
    res = unitary_synthesis_phi2(restarts=10, target="phi1")
    assert res.best_fidelity == pytest.approx(0.25, abs=1e-6)
    assert res.product_bound == pytest.approx(0.25)
    assert not res.success


def test_reported_fidelity_matches_parameters():
    res = unitary_synthesis_phi2(restarts=5, seed=7)
    vec = conditioned_vector(res.best_params, res.best_pair)
    target = make_postselected("phi2").vector.to_numpy()
    assert abs(vec.conj() @ target) ** 2 == pytest.approx(res.best_fidelity, abs=1e-10)


def test_deterministic():
    a = unitary_synthesis_phi2(restarts=4, seed=11)
    b = unitary_synthesis_phi2(restarts=4, seed=11)
    assert a.to_dict() == b.to_dict()


def test_bad_arguments():
    with pytest.raises(ValueError):
        unitary_synthesis_phi2(tolerance=0)
    with pytest.raises(ValueError):
        unitary_synthesis_phi2(restarts=0)


@pytest.mark.slow
def test_phi2_locality_obstruction():
    res = unitary_synthesis_phi2(restarts=100)
    assert res.restarts == 100
    assert not res.success
    assert res.best_fidelity == pytest.approx(res.product_bound, abs=1e-6)
    assert res.product_bound == pytest.approx(0.5)
    assert "no local realization" in res.finding
