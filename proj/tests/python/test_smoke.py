import numpy as np
import pytest

import qoc


def test_matrix_kernels():
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sy = np.array([[0, -1j], [1j, 0]])
    assert np.allclose(qoc.commutator(sx, sy), 2j * np.diag([1, -1]))
    u = qoc.expm_hermitian_generator(sx, np.pi / 2)
    assert np.allclose(u, -1j * sx)
    assert np.allclose(qoc.kron(np.eye(2), np.eye(2)), np.eye(4))
    assert abs(qoc.overlap_trace(u, u) - 2) < 1e-14


def test_benchmark_and_targets():
    sys = qoc.build_two_spin_benchmark()
    assert sys.dim == 4 and sys.num_controls == 2
    assert np.allclose(sys.drift, sys.drift.conj().T)
    cnot = qoc.cnot_target()
    assert cnot.label == "cnot"
    assert np.allclose(cnot.unitary @ cnot.unitary, 1j * np.eye(4))


def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(3)
    sys = qoc.build_two_spin_benchmark()
    grid = qoc.ControlGrid(rng.uniform(-1, 1, size=(2, 8)), 0.2)
    target = qoc.swap_target()
    fd = qoc.finite_difference_gradient(sys, grid, target, 1e-5)
    rhs = qoc.flow_rhs(sys, grid, target, "exact")
    assert np.allclose(fd, -grid.dt * rhs, rtol=1e-5, atol=1e-10)
    assert np.array_equal(qoc.flow_rhs(sys, grid, target, 0),
                          qoc.flow_rhs(sys, grid, target, order=0))


def test_propagate_prefixes_are_unitary():
    sys = qoc.build_two_spin_benchmark()
    prefixes = qoc.propagate(sys, qoc.ControlGrid(2, 10, 1.0))
    assert len(prefixes) == 11
    assert np.allclose(prefixes[0], np.eye(4))
    for p in prefixes:
        assert qoc.unitarity_defect(p) < 1e-12


def test_integrate_flow_cnot():
    sys = qoc.build_two_spin_benchmark()
    cfg = qoc.FlowConfig()
    cfg.s_max = 1000.0
    result = qoc.integrate_flow(sys, qoc.ControlGrid(2, 150, 5.0), qoc.cnot_target(), 1, cfg)
    assert result.stop_reason == "j_reached"
    assert result.s_stop <= 400
    assert result.final_objective <= 1e-7
    assert result.final_grid.amplitudes.shape == (2, 150)
    s = [t[0] for t in result.trace]
    assert all(b > a for a, b in zip(s, s[1:]))
    assert qoc.error_tolerance_check(result, cfg)


def test_experiment_round_trip():
    specs = qoc.parse_experiments("gate: cnot\nT: 5\nL: 150\norder: 1\n")
    assert specs[0].order == "1"
    records = qoc.run_experiments(specs)
    assert records[0].converged and records[0].s_reported == 400
    csv = qoc.format_csv(records).splitlines()
    assert csv[0].startswith("gate,T,L,order,S_reported")
    assert csv[1].startswith("cnot,5,150,1,400,")


def test_errors_raise_value_error():
    with pytest.raises(ValueError):
        qoc.parse_experiments("gate: cnot\nT: -1\nL: 3\n")
    with pytest.raises(ValueError):
        qoc.QuantumSystem(np.eye(2), [])
    with pytest.raises(ValueError):
        qoc.flow_rhs(qoc.build_two_spin_benchmark(), qoc.ControlGrid(2, 2, 1.0),
                     qoc.cnot_target(), 9)
