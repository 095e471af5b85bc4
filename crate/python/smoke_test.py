"""Smoke test for the pyholonomy extension module.

Build the module first, e.g.

    cd crates/python && maturin develop --release

or copy target/release/libpyholonomy.so to pyholonomy.so somewhere on
PYTHONPATH, then run `python python/smoke_test.py`.
"""

import math

import pyholonomy as ph


def close(a, b, tol):
    return ph.phase_distance(a, b) <= tol


def main():
    # Example I: phi_g = pi (1 - r cos theta)
    r, theta = 0.5, math.pi / 3
    spec = ph.example_one(r, theta)
    path = spec.schedule.propagate()
    rep = ph.geometric_phase(spec.rho0, path)
    assert close(rep.geometric, math.pi * (1 - r * math.cos(theta)), 1e-9), rep
    assert path.global_phase() is not None

    # every route agrees
    for interp in ("linear", "cubic", "smoothstep"):
        assert close(ph.one_form_integral(spec.rho0, path, interp), rep.geometric, 1e-6)
    assert close(ph.weighted_decomposition_phase(spec.rho0, path), rep.geometric, 1e-6)

    # parallel transport reproduces the geometric phase
    lift = ph.parallel_lift(spec.rho0, path)
    assert abs(lift.xi_final + rep.dynamical) < 1e-8
    assert close(lift.sjoqvist_phase(), rep.geometric, 1e-6)
    assert lift.residual() < 1e-8

    # Example II geodesic triangle encloses solid angle pi/2
    tri = ph.example_two(1.0, math.pi / 2, math.pi / 2)
    tri_rep = ph.geometric_phase(tri.rho0, tri.schedule.propagate())
    assert close(tri_rep.geometric, -math.pi / 4, 1e-9), tri_rep
    pts = tri.bloch_path(50)
    assert len(pts) == 50 and abs(pts[0][1][2] - 1.0) < 1e-12

    # a user-built schedule: H = -sigma_z for tau = pi
    sz = [[-1 + 0j, 0j], [0j, 1 + 0j]]
    sched = ph.HamiltonianSchedule.piecewise([(math.pi, sz)])
    rho = ph.DensityOperator.qubit(0.8, 0.4)
    own = ph.geometric_phase(rho, sched.propagate(64))
    assert close(own.geometric, math.pi * (1 - 0.8 * math.cos(0.4)), 1e-9)

    # counterexample: parallel in the eigenbasis sense but the wrong phase
    ce = ph.counterexample_lift(0.5, math.pi / 4)
    assert ce["residual_plus"] < 1e-8 and ce["residual_minus"] < 1e-8
    assert ph.phase_distance(ce["phase"], ce["geometric"]) > 0.5

    # composite theorem
    states = [
        ph.DensityOperator([[0.9, 0], [0, 0.1]]),
        ph.DensityOperator([[0.2, 0], [0, 0.8]]),
    ]
    ab, b, agreement = ph.theorem_check([0.3, 0.7], states, path)
    assert agreement <= 1e-8 and close(ab.total, b.total, 1e-8)

    # error mapping
    tilted = ph.DensityOperator.qubit(0.5, math.pi / 3)
    geodesic = ph.example_two(0.5, 1.0, 2.0).schedule.propagate()
    try:
        ph.geometric_phase(tilted, geodesic)
    except ph.NotCyclicError:
        pass
    else:
        raise AssertionError("expected NotCyclicError")
    sx = [[0j, 1 + 0j], [1 + 0j, 0j]]
    swap = ph.HamiltonianSchedule.piecewise([(math.pi / 2, sx)]).propagate()
    try:
        ph.geometric_phase(ph.DensityOperator.maximally_mixed(2), swap)
    except ph.NodalPointError:
        pass
    else:
        raise AssertionError("expected NodalPointError")
    try:
        ph.DensityOperator([[1, 1], [0, 0]])
    except ph.HolonomyError:
        pass
    else:
        raise AssertionError("expected HolonomyError")

    print("pyholonomy smoke test passed")


if __name__ == "__main__":
    main()
