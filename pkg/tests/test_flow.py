import csv
import io

import numpy as np
import pytest

from confgeo.errors import ConfGeoError
from confgeo.expr import PHASE, parse
from confgeo.flow import (
    conservation_report, convergence_order, geodesic_field, integrate_field, integrate_geodesic,
    integrate_hamiltonian, minkowski_crosscheck, open_box,
)
from confgeo.geometry import minkowski, schwarzschild
from confgeo.hj import flrw_fields, schwarzschild_fields
from confgeo.poisson.bracket import ALPHA
from confgeo.poisson.builtins import builtin, flrw_hamiltonian, schwarzschild_hamiltonian
from confgeo.poisson.tensors import ScalarField
from confgeo.recursion.operators import minkowski_recursion, trace_power

SX0 = (1.0, 10.0, 1.2, 1.0, -0.6, 0.3, 0.5, 0.4)
FX0 = (2.0, 0.5, 1.2, 1.0, -1.0, 0.2, 0.3, 0.3)
MX0 = (5.0, 1.0, 1.2, 0.8, 0.5, 0.3, 0.4, 0.2)


def _drifts(traj, tol=1e-6):
    return {k: v.relative_drift for k, v in conservation_report(traj, tol).items()}


@pytest.mark.parametrize("alpha", [0.7, 1.0])
def test_schwarzschild_constants_conserved(alpha):
    tr = integrate_hamiltonian(schwarzschild_hamiltonian(1), SX0, 1e-3, 10_000, box=open_box("schwarzschild"),
                               alpha=alpha, monitors=schwarzschild_fields(1))
    assert tr.complete and tr.steps == 10_000
    d = _drifts(tr)
    assert set(d) == {"E_S", "a", "K", "G"}
    assert max(d.values()) < 1e-6, d


@pytest.mark.parametrize("alpha", [0.7, 1.0])
@pytest.mark.parametrize("k", [0, 1])
def test_flrw_constants_conserved(alpha, k):
    tr = integrate_hamiltonian(flrw_hamiltonian(k), FX0, 1e-3, 10_000, box=open_box("flrw", k=k),
                               alpha=alpha, monitors=flrw_fields(k))
    assert tr.complete
    d = _drifts(tr)
    assert set(d) == {"E_F", "K", "L", "G"}
    assert max(d.values()) < 1e-6, d


def test_minkowski_integrals_conserved():
    T = minkowski_recursion()
    mon = {"H": builtin("H_alpha"), "L": builtin("L_alpha"), "L~": builtin("L_tilde")}
    mon.update({f"Tr{h}": trace_power(T, h) for h in (1, 2, 3)})
    tr = integrate_hamiltonian(builtin("H_alpha"), MX0, 1e-3, 10_000, box=open_box("minkowski"),
                               alpha=0.7, monitors=mon)
    assert tr.complete
    d = _drifts(tr)
    assert d["H"] < 1e-8
    assert max(d.values()) < 1e-6, d


def test_free_particle_at_alpha_one():
    tr = integrate_hamiltonian(builtin("H_alpha"), MX0, 1e-3, 1000, box=open_box("minkowski"), alpha=1.0)
    assert np.all(tr.states[:, 4:] == np.asarray(MX0[4:]))
    # straight lines: q(t) = q0 + t * (-p1, p2, p3, p4)
    v = np.array([-MX0[4], *MX0[5:]])
    assert np.allclose(tr.states[:, :4], np.asarray(MX0[:4]) + np.outer(tr.times, v), atol=1e-12)


def test_convergence_order():
    X = ALPHA.hamiltonian_vector_field(schwarzschild_hamiltonian(1))
    order, (d1, d2) = convergence_order(X, (1.0, 5.0, 1.2, 1.0, -4.0, 3.0, 4.0, 4.0), open_box("schwarzschild"),
                                        alpha=0.7, t_end=1.0)
    assert 3.7 <= order <= 4.3, (order, d1, d2)


def test_energy_drift_shrinks_with_dt():
    H = schwarzschild_hamiltonian(1)
    box = open_box("schwarzschild")
    x0 = (1.0, 5.0, 1.2, 1.0, -4.0, 3.0, 4.0, 4.0)
    d = []
    for dt in (2e-2, 1e-2):
        tr = integrate_hamiltonian(H, x0, dt, int(round(1 / dt)), box=box, alpha=0.7, monitors={"H": H})
        d.append(conservation_report(tr)["H"].max_drift)
    assert d[0] / d[1] > 8


def test_minkowski_geodesic_crosscheck():
    err, g, h = minkowski_crosscheck(alpha=0.7)
    assert err < 1e-6
    assert g.names[4] == "v1" and h.names[4] == "p1"


def test_geodesic_field_at_alpha_one_minkowski_is_straight():
    tr = integrate_geodesic(minkowski(), (1, 1, 1, 1), (0.3, -0.2, 0.1, 0.5), 1e-3, 500, alpha=1.0)
    assert np.all(tr.states[:, 4:] == np.array([0.3, -0.2, 0.1, 0.5]))
    X = geodesic_field(schwarzschild(1))
    assert not X[4].is_zero()


def test_halts_on_domain_exit():
    # radial infall toward the horizon
    tr = integrate_hamiltonian(schwarzschild_hamiltonian(1), (1, 2.3, 1.2, 1, -1, -5, 0.1, 0.1), 1e-3, 10_000,
                               box=open_box("schwarzschild"), alpha=0.7)
    assert not tr.complete and tr.halted in ("left the domain box", "non-finite state")
    assert tr.steps == tr.halt_step - 1 < 10_000
    assert open_box("schwarzschild").contains(tr.states[-1])
    # free particle at alpha = 1 reaches the open bound q2 = 1e-3 at step 499
    tr = integrate_hamiltonian(builtin("H_alpha"), (1, 0.5, 1, 1, 0, -1, 0, 0), 1e-3, 10_000,
                               box=open_box("minkowski"), alpha=1.0)
    assert tr.halted == "left the domain box" and tr.halt_step == 499


def test_initial_state_outside_box():
    with pytest.raises(ConfGeoError, match="outside the domain box"):
        integrate_hamiltonian(schwarzschild_hamiltonian(1), (1, 1.5, 1, 1, 0, 0, 0, 0), box=open_box("schwarzschild"))
    with pytest.raises(ConfGeoError):
        integrate_field(ALPHA.hamiltonian_vector_field(builtin("H_alpha")), MX0, dt=0, box=open_box("minkowski"))
    with pytest.raises(ConfGeoError):
        open_box("de sitter")


def test_monitors_constant_and_non_invariant():
    tr = integrate_hamiltonian(builtin("H_alpha"), MX0, 1e-3, 2000, box=open_box("minkowski"), alpha=0.7,
                               monitors={"one": ScalarField(parse("3", PHASE)), "q1": ScalarField(parse("q1", PHASE))})
    rep = conservation_report(tr, 1e-6)
    assert rep["one"].max_drift == 0 and rep["one"].first_failure_step is None
    assert rep["q1"].relative_drift > 1e-2 and rep["q1"].first_failure_step is not None


def test_csv_round_trip():
    tr = integrate_hamiltonian(schwarzschild_hamiltonian(1), SX0, 1e-3, 50, box=open_box("schwarzschild"),
                               alpha=0.7, monitors={"H": schwarzschild_hamiltonian(1)})
    rows = list(csv.reader(io.StringIO(tr.to_csv())))
    assert rows[0] == ["t", "q1", "q2", "q3", "q4", "p1", "p2", "p3", "p4", "H"]
    data = np.array([[float(x) for x in r] for r in rows[1:]])
    assert data.shape == (51, 10)
    assert np.array_equal(data[:, 1:9], tr.states)
    assert np.array_equal(data[:, 0], tr.times)
    assert np.array_equal(data[:, 9], tr.monitors["H"])


def test_open_box_excludes_singular_sets():
    b = open_box("schwarzschild", M=2)
    assert not b.contains([1, 4.0, 1, 1, 0, 0, 0, 0])
    assert b.contains([1, 4.01, 1, 1, 0, 0, 0, 0])
    f = open_box("flrw", k=1)
    assert not f.contains([1, 1.0, 1, 1, 0, 0, 0, 0])
