import numpy as np
import pytest
from conftest import dense_operator

from duccvqe import simulator
from duccvqe.ansatz import (AnsatzError, Circuit, ExcitationList, Gate,
                            enumerate_excitations, resource_report,
                            screen_excitations, trotter_circuit,
                            ucc_generator, _pauli_exponentials)
from duccvqe.fermion import ActiveSpace

# published resource rows: (spatial orbitals, electrons, excitations)
RESOURCE_ROWS = [
    (4, 2, 15), (5, 2, 24), (6, 2, 35), (7, 2, 48), (8, 2, 63),
    (9, 2, 80), (10, 2, 99),
    (7, 6, 204), (8, 6, 315), (9, 6, 450), (10, 6, 609), (11, 6, 792),
    (12, 6, 999), (13, 6, 1230), (14, 6, 1485),
]


def _space(n_orbitals, n_electrons):
    return ActiveSpace.build(n_orbitals,
                             tuple(range(1, n_electrons // 2 + 1)))


@pytest.mark.parametrize("n_orb,nelec,count", RESOURCE_ROWS)
def test_excitation_counts(n_orb, nelec, count):
    exc = enumerate_excitations(_space(n_orb, nelec), nelec)
    assert len(exc) == count
    o, v = nelec // 2, n_orb - nelec // 2
    assert len(exc.singles) == 2 * o * v


def test_excitations_sz_conserving_and_canonical():
    exc = enumerate_excitations(_space(4, 2), 2)
    for i, a in exc.singles:
        assert i % 2 == a % 2
    for i, j, a, b in exc.doubles:
        assert i < j and a < b
        assert i % 2 + j % 2 == a % 2 + b % 2
    assert len(set(exc.entries)) == len(exc.entries)
    assert exc.entries[:len(exc.singles)] == exc.singles


def test_no_virtuals_no_excitations():
    exc = enumerate_excitations(_space(1, 2), 2)
    assert len(exc) == 0
    rep = resource_report(exc, _space(1, 2))
    assert (rep.n_qubits, rep.gate_count, rep.depth) == (2, 0, 0)


def test_odd_electrons_rejected():
    with pytest.raises(AnsatzError, match="even"):
        enumerate_excitations(_space(4, 2), 3)


def test_generator_shapes():
    exc = enumerate_excitations(_space(3, 2), 2)
    zero = ucc_generator(exc, np.zeros(len(exc)))
    assert len(zero) == 0
    theta = 0.3
    one = ExcitationList(6, ((0, 2),), ())
    g = ucc_generator(one, [theta])
    assert g.terms == {((2, 1), (0, 0)): theta, ((0, 1), (2, 0)): -theta}
    with pytest.raises(AnsatzError, match="parameters"):
        ucc_generator(exc, [0.0])


def test_generator_antihermitian_dense(rng):
    exc = enumerate_excitations(_space(3, 2), 2)
    g = ucc_generator(exc, rng.normal(size=len(exc)))
    dense = dense_operator(g)
    np.testing.assert_allclose(dense, -dense.conj().T, atol=1e-12)


def test_string_counts_per_excitation():
    assert len(_pauli_exponentials((0, 2), 6)) == 2
    assert len(_pauli_exponentials((0, 1, 2, 3), 6)) == 8


def test_zero_parameters_identity(rng):
    exc = enumerate_excitations(_space(3, 2), 2)
    circ = trotter_circuit(exc)
    psi = rng.normal(size=64) + 1j * rng.normal(size=64)
    psi /= np.linalg.norm(psi)
    state = simulator.StateVector(6, psi.copy())
    out = simulator.apply(circ, np.zeros(len(exc)), state)
    fidelity = abs(np.vdot(psi, out.amplitudes)) ** 2
    assert 1.0 - fidelity < 1e-12


def test_circuit_matches_generator_exponential(rng):
    # single-excitation circuit equals expm of its generator exactly
    # (the two JW strings of one excitation commute)
    from scipy.linalg import expm
    one = ExcitationList(4, ((0, 2),), ())
    circ = trotter_circuit(one)
    theta = float(rng.normal())
    g_dense = dense_operator(ucc_generator(one, [theta]))
    ref = simulator.prepare_reference(4, {0, 1})
    out = simulator.apply(circ, [theta], ref)
    oracle = expm(g_dense) @ ref.amplitudes
    np.testing.assert_allclose(out.amplitudes, oracle, atol=1e-10)


def test_circuit_preserves_sector(rng):
    exc = enumerate_excitations(_space(4, 2), 2)
    circ = trotter_circuit(exc)
    out = simulator.apply(circ, 0.1 * rng.normal(size=len(exc)),
                          simulator.prepare_reference(8, {0, 1}))
    for k in np.flatnonzero(np.abs(out.amplitudes) > 1e-10):
        k = int(k)
        assert k.bit_count() == 2
        alpha = (k & 0x55).bit_count()
        assert alpha == 1  # Sz preserved


def test_resource_report_matches_real_circuit():
    for n_orb, nelec in [(2, 2), (3, 2), (4, 2), (4, 4)]:
        space = _space(n_orb, nelec)
        exc = enumerate_excitations(space, nelec)
        circ = trotter_circuit(exc)
        rep = resource_report(exc, space)
        assert rep.gate_count == circ.gate_count
        assert rep.depth == circ.depth()
        assert rep.n_parameters == len(exc)


def test_gate_count_monotone():
    space = _space(4, 2)
    exc = enumerate_excitations(space, 2)
    counts = []
    for k in range(len(exc.doubles) + 1):
        sub = ExcitationList(8, exc.singles, exc.doubles[:k])
        counts.append(resource_report(sub, space).gate_count)
    assert counts == sorted(counts)


def test_circuit_unitary_dense(rng):
    exc = enumerate_excitations(_space(3, 2), 2)
    circ = trotter_circuit(exc)
    params = rng.normal(size=len(exc))
    dim = 1 << 6
    u = np.zeros((dim, dim), dtype=complex)
    for k in range(dim):
        basis = np.zeros(dim, dtype=complex)
        basis[k] = 1.0
        u[:, k] = simulator.apply(circ, params,
                                  simulator.StateVector(6, basis)).amplitudes
    np.testing.assert_allclose(u.conj().T @ u, np.eye(dim), atol=1e-10)


def test_text_round_trip_and_validation():
    exc = enumerate_excitations(_space(3, 2), 2)
    circ = trotter_circuit(exc)
    back = Circuit.from_text(circ.n_qubits, circ.n_params, circ.to_text())
    assert back.gates == circ.gates
    with pytest.raises(AnsatzError, match="off the"):
        Circuit(2, 0, [Gate("H", (5,))])
    with pytest.raises(AnsatzError, match="slot"):
        Circuit(2, 1, [Gate("RZ", (0,), slot=3)])
    with pytest.raises(AnsatzError, match="bad gate"):
        Circuit.from_text(2, 0, "FOO 1\n")


def test_screen_excitations():
    from duccvqe.amplitudes import ClusterAmplitudes
    exc = enumerate_excitations(_space(4, 2), 2)
    t = ClusterAmplitudes.empty((0, 1), tuple(range(2, 8)))
    t.set_t2(0, 1, 2, 3, 0.2)
    kept = screen_excitations(exc, t, 1e-5)
    assert kept.doubles == ((0, 1, 2, 3),)
    assert kept.singles == exc.singles
