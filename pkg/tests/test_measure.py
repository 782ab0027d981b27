import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from delta_riemann import (GasLaw, GasState, NoMeasureSolution, Region, RiemannData, classify, sample_solution,
                           solve_classical, solve_measure, solve_singular)
from delta_riemann.classical import sample_classical_array
from delta_riemann.gas import eigenvalues
from delta_riemann.measure import admissible_intermediate, in_q1, in_q2
from delta_riemann.verify import random_pair

LAW = GasLaw(2.0)
U1 = GasState(0.0, 1.0)


def test_single_delta_for_equal_densities():
    sol = solve_measure(LAW, U1, GasState(-3.0, 1.0), 0.9)
    assert sol.kind == "delta" and sol.entropic
    p = sol.delta_paths[0]
    assert p.x(2.0) == pytest.approx(-3.0, rel=1e-15)
    assert p.w_rho(2.0) == pytest.approx(6.0, rel=1e-15)


def test_delta_then_fan_example():
    U2 = GasState(0.0, 4.0)
    pick = admissible_intermediate(LAW, U1, U2, "delta+R2", 0.5)
    lo, hi = pick.admissible_rho_interval
    assert lo == pytest.approx(1.0, abs=1e-9)
    sel = (1.5 - lo) / (hi - lo)
    sol = solve_measure(LAW, U1, U2, sel)
    Um = sol.pick.state
    assert Um.rho == pytest.approx(1.5, rel=1e-12)
    assert Um.u == pytest.approx(-2.1927, abs=1e-4)
    xp = float(sol.delta_paths[0].xprime(1.0))
    assert xp == pytest.approx(-1.446, abs=1e-3)
    assert U1.u >= xp >= Um.u
    assert xp <= eigenvalues(LAW, Um)[1]
    # fan between U~ and U2 follows xi = u + c
    t = 1.0
    x = np.linspace(eigenvalues(LAW, Um)[1], eigenvalues(LAW, U2)[1], 9)[1:-1]
    rho, u = sol.state(x, t)
    assert np.allclose(u + np.sqrt(2.0 * rho), x / t, atol=1e-12)


def test_vacuum_region_has_no_delta_plan():
    with pytest.raises(NoMeasureSolution) as exc:
        solve_measure(LAW, U1, GasState(6.0, 1.0))
    assert exc.value.region.tag == Region.V


def test_nonentropic_delta_on_request():
    U2 = GasState(3.5, 4.0)  # region I0 above the S22 curve, a single delta exists
    with pytest.raises(NoMeasureSolution):
        solve_measure(LAW, U1, U2)
    sol = solve_measure(LAW, U1, U2, allow_nonentropic=True)
    assert sol.kind == "delta" and not sol.entropic


def test_selection_must_be_a_fraction():
    with pytest.raises(ValueError):
        solve_measure(LAW, U1, GasState(0.0, 4.0), 1.5)


def test_sample_stationary_delta_with_mass():
    sol = solve_singular(LAW, RiemannData(GasState(1, 1), GasState(-1, 1), 1.0, 0.0))
    prof = sample_solution(sol, 1.0, -1.0, 1.0, 3)
    assert prof.rho[0] == 1.0 and prof.rho[2] == 1.0
    assert prof.u[0] == 1.0 and prof.u[2] == -1.0
    (atom,) = prof.atoms
    assert (atom.x, atom.w, atom.v) == (0.0, 3.0, 0.0)


def test_continuation_after_extinction():
    data = RiemannData(U1, GasState(0.0, 4.0), 1.0, 0.0)
    sol = solve_singular(LAW, data)
    p = sol.delta_paths[0]
    t_star, x_star = p.lifespan, p.front_at_end()
    assert len(sol.stages()) == 2
    prof = sample_solution(sol, 2 * t_star, -3.0, 3.0, 301)
    assert prof.atoms == ()
    fresh = solve_classical(LAW, U1, GasState(0.0, 4.0))
    rr, uu = sample_classical_array(fresh, (prof.grid - x_star) / t_star)
    assert np.array_equal(prof.rho, rr) and np.array_equal(prof.u, uu)
    assert any("momentum" in n for n in sol.notes)


def test_blow_up_ends_the_solution():
    sol = solve_singular(LAW, RiemannData(GasState(-1, 1), GasState(1, 1), 1.0, 0.5))
    assert sol.horizon == 0.5 and len(sol.stages()) == 1
    with pytest.raises(ValueError):
        sample_solution(sol, 0.6, -1, 1, 5)
    assert any("blows up" in n for n in sol.notes)


def test_solve_singular_needs_mass():
    with pytest.raises(ValueError):
        solve_singular(LAW, RiemannData(U1, GasState(0.0, 4.0)))


def test_points_on_a_jump_take_the_right_state():
    sol = solve_measure(LAW, U1, GasState(-3.0, 1.0))
    rho, u = sol.state(np.array([-1.5]), 1.0)
    assert u[0] == -3.0


@pytest.mark.parametrize("region,kind", [("IV1", "delta+R2"), ("III", "delta+R2"),
                                         ("IV2", "R1+delta"), ("II", "R1+delta")])
def test_composite_intermediate_states(region, kind):
    rng = np.random.default_rng(7)
    for i in range(15):
        law = GasLaw((1.4, 2.0, 3.0)[i % 3])
        A, B = random_pair(law, rng, region)
        rhos = []
        for sel in (0.0, 0.3, 0.7, 1.0):
            sol = solve_measure(law, A, B, sel)
            assert sol.kind == kind
            Um = sol.pick.state
            rhos.append(Um.rho)
            p = sol.delta_paths[0]
            lam1, lam2 = eigenvalues(law, Um)
            xp = np.asarray(p.xprime(np.geomspace(1e-3, 1e3, 50)))
            tol = 1e-9 * max(1.0, abs(lam1), abs(lam2))
            if kind == "delta+R2":
                inner = classify(law, A, Um)
                assert np.all(xp <= lam2 + tol)
                assert in_q1(law, A, Um, tol=1e-9)
            else:
                inner = classify(law, Um, B)
                assert np.all(xp >= lam1 - tol)
                assert in_q2(law, A, B, Um, tol=1e-9)
            assert inner.tag == Region.IV0 or (inner.tag == Region.ON_CURVE and str(inner.curve) in ("D1", "D2"))
        assert rhos == sorted(rhos)


def test_region_iv0_never_uses_composites():
    rng = np.random.default_rng(3)
    for _ in range(30):
        A, B = random_pair(LAW, rng, "IV0")
        assert solve_measure(LAW, A, B, float(rng.random())).kind == "delta"


@settings(max_examples=100, deadline=None)
@given(u2=st.floats(-6, 6), r2=st.floats(0.05, 20))
def test_solve_measure_matches_region(u2, r2):
    U2 = GasState(u2, r2)
    tag = classify(LAW, U1, U2).tag
    try:
        kind = solve_measure(LAW, U1, U2).kind
    except NoMeasureSolution:
        kind = None
    expected = {Region.IV0: "delta", Region.IV1: "delta+R2", Region.III: "delta+R2",
                Region.IV2: "R1+delta", Region.II: "R1+delta"}.get(tag)
    if tag != Region.ON_CURVE:
        assert kind == expected
