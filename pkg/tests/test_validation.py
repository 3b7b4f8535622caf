import math

import numpy as np
import pytest
from scipy.optimize import brentq

import physics
import riemann
import validation
import wave_curves
from errors import HyperbolicityError, NumericalError, VacuumError
from models import (
    CurveBranch, Invariants, Params, PrimitiveState, SpaceTimeBox, ValidateBlock, WaveFamily, WaveKind,
)


def _depth_function(h, h_k, g):
    if h <= h_k:
        return 2.0 * (math.sqrt(g * h) - math.sqrt(g * h_k))
    return (h - h_k) * math.sqrt(0.5 * g * (h + h_k) / (h * h_k))


def test_sv_exact_trivial_cases():
    star = validation.sv_exact(1.5, 0.4, 1.5, 0.4, 9.81)
    assert star.h_star == pytest.approx(1.5, rel=1e-14)
    assert star.u_star == pytest.approx(0.4, rel=1e-14)
    assert star.left_wave == star.right_wave == CurveBranch.ZERO_AMPLITUDE

    star = validation.sv_exact(1.0, -1.0, 1.0, 1.0, 9.81)
    assert star.u_star == 0.0
    assert star.left_wave == star.right_wave == CurveBranch.RAREFACTION


def test_sv_exact_matches_bracketed_root(rng):
    g = 9.81
    for _ in range(20):
        h_l, h_r = np.exp(rng.uniform(math.log(0.1), math.log(10.0), size=2))
        u_l, u_r = rng.uniform(-1.0, 1.0, size=2)
        star = validation.sv_exact(h_l, u_l, h_r, u_r, g)
        h_ref = brentq(lambda h: _depth_function(h, h_l, g) + _depth_function(h, h_r, g) + u_r - u_l,
                       1e-12, 1e3, xtol=1e-15, rtol=1e-15)
        assert star.h_star == pytest.approx(h_ref, rel=1e-10)


def test_sv_exact_converges_where_absolute_tolerance_is_below_spacing():
    g = 9.81
    left = PrimitiveState(h=6.4776, u=1.5165, sxx=1.0, szz=1.0)
    right = PrimitiveState(h=9.0287, u=-1.9164, sxx=1.0, szz=1.0)
    star = validation.sv_exact(left.h, left.u, right.h, right.u, g)
    sol = riemann.solve(left, right, Params(g=g, G=0.0, zeta=0.0))
    assert star.h_star == pytest.approx(sol.star_left.h, rel=1e-10)
    assert star.u_star == pytest.approx(sol.u_star, rel=1e-10)


def test_sv_exact_flags_vacuum():
    star = validation.sv_exact(1.0, -10.0, 1.0, 10.0, 9.81)
    assert star.vacuum
    assert math.isnan(star.u_star)


def test_sv_sample_dam_break():
    g = 9.81
    star = validation.sv_exact(2.0, 0.0, 1.0, 0.0, g)
    assert star.left_wave == CurveBranch.RAREFACTION and star.right_wave == CurveBranch.SHOCK
    assert validation.sv_sample(star, 2.0, 0.0, 1.0, 0.0, g, -10.0) == (2.0, 0.0)
    assert validation.sv_sample(star, 2.0, 0.0, 1.0, 0.0, g, 10.0) == (1.0, 0.0)
    assert validation.sv_sample(star, 2.0, 0.0, 1.0, 0.0, g, star.u_star) == (star.h_star, star.u_star)
    h, u = validation.sv_sample(star, 2.0, 0.0, 1.0, 0.0, g, -math.sqrt(2 * g) + 1e-12)
    assert h == pytest.approx(2.0, rel=1e-9) and u == pytest.approx(0.0, abs=1e-9)


def test_weak_form_residual_of_constant_state(gsv_params):
    U = PrimitiveState(h=1.2, u=0.5, sxx=1.1, szz=0.9)
    sol = riemann.solve(U, U, gsv_params)
    box = SpaceTimeBox(t0=0.5, t1=1.5, x0=-5.0, x1=5.0)
    assert validation.weak_form_residual(sol, box, 3, np.random.default_rng(1)) <= 1e-8


def test_weak_form_residual_of_exact_solutions(gsv_params):
    cases = [
        (PrimitiveState(h=2.0, u=0.0, sxx=1.0, szz=1.0), PrimitiveState(h=1.0, u=0.0, sxx=1.0, szz=1.0)),
        (PrimitiveState(h=1.0, u=0.5, sxx=1.4, szz=0.6), PrimitiveState(h=1.5, u=-0.5, sxx=0.8, szz=1.2)),
    ]
    for left, right in cases:
        sol = riemann.solve(left, right, gsv_params)
        residual = validation.weak_form_residual(sol, validation.riemann_box(sol), 3, np.random.default_rng(2))
        assert residual <= 1e-6


def test_weak_form_detects_wrong_shock_speed(gsv_params):
    left, right = PrimitiveState(h=2.0, u=0.0, sxx=1.0, szz=1.0), PrimitiveState(h=1.0, u=0.0, sxx=1.0, szz=1.0)
    sol = riemann.solve(left, right, gsv_params)
    shock = sol.waves[2]
    slowed = shock.model_copy(update={"speed_head": 0.8 * shock.speed, "speed_tail": 0.8 * shock.speed})
    wrong = sol.model_copy(update={"waves": (sol.waves[0], sol.waves[1], slowed)})
    # narrow box centred on the displaced shock ray
    box = SpaceTimeBox(t0=0.9, t1=1.1, x0=0.7 * shock.speed, x1=0.9 * shock.speed)
    assert validation.weak_form_residual(wrong, box, 20, np.random.default_rng(3)) > 1e-3


def _specific_energy(tau, inv, p):
    U = physics.state_from_invariants(1.0 / tau, 0.3, inv, p)
    return physics.free_energy(U, p) * tau


def test_free_energy_hessian_matches_finite_difference():
    for zeta in (0.0, 0.25, 0.5):
        p = Params(g=9.81, G=2.0, zeta=zeta)
        inv = Invariants(X=1.7, Zinv=0.4)
        for tau in (0.1, 1.0, 7.0):
            e = 1e-4 * tau
            fd = (
                _specific_energy(tau + e, inv, p) - 2 * _specific_energy(tau, inv, p)
                + _specific_energy(tau - e, inv, p)
            ) / (e * e)
            assert validation.free_energy_hessian(tau, inv, p) == pytest.approx(fd, rel=1e-5)


def test_convexity_holds_in_hyperbolic_range():
    inv = Invariants(X=3.0, Zinv=0.2)
    assert validation.convexity_check(inv, Params(g=9.81, G=0.0, zeta=0.3)).passed
    for zeta in (0.0, 0.25, 0.5):
        report = validation.convexity_check(inv, Params(g=9.81, G=10.0, zeta=zeta))
        assert report.passed
        assert report.min_eigenvalue > 0.0


def test_convexity_negative_control():
    p = Params.unchecked(g=9.81, G=1.0, zeta=0.6)
    with pytest.raises(HyperbolicityError):
        validation.convexity_check(Invariants(X=1.0, Zinv=1.0), p)
    report = validation.convexity_check(Invariants(X=1.0, Zinv=1.0), p, diagnostic=True)
    assert not report.passed
    assert report.worst_h < 1.0


def test_aitken_limit():
    assert validation.aitken_limit([1.0, 2.0]) is None
    assert validation.aitken_limit([1 - 0.5**k for k in range(1, 6)]) == pytest.approx(1.0, abs=1e-14)
    assert validation.aitken_limit([3.0, 3.0, 3.0]) == 3.0


def test_vacuum_divergence():
    anchor = PrimitiveState(h=1.0, u=0.0, sxx=1.0, szz=1.0)
    depths = [2.0 ** (-k) for k in range(1, 31)]

    p = Params(g=9.81, G=1.0, zeta=0.25)
    report = validation.vacuum_divergence(wave_curves.make_side(anchor, WaveFamily.MINUS, p), depths, p)
    assert report.strictly_increasing
    assert report.magnitudes[-1] > 1e3 * math.sqrt(p.g)

    sv = Params(g=9.81, G=0.0, zeta=0.25)
    control = validation.vacuum_divergence(wave_curves.make_side(anchor, WaveFamily.MINUS, sv), depths, sv)
    assert control.magnitudes[-1] < 2.0 * math.sqrt(sv.g)
    assert control.extrapolated_limit == pytest.approx(2.0 * math.sqrt(sv.g), abs=1e-6)


def test_g_limit_study_rejects_vacuum_data():
    with pytest.raises(VacuumError):
        validation.g_limit_study(
            PrimitiveState(h=1.0, u=-10.0, sxx=1.0, szz=1.0),
            PrimitiveState(h=1.0, u=10.0, sxx=1.0, szz=1.0),
            Params(g=9.81, G=1.0, zeta=0.25),
            [1e-1, 1e-2],
        )


def test_g_limit_study_of_identical_states():
    U = PrimitiveState(h=1.0, u=0.3, sxx=1.2, szz=0.8)
    table = validation.g_limit_study(U, U, Params(g=9.81, G=1.0, zeta=0.25), [1.0, 0.1])
    assert list(table.columns) == ["G", "h_star_left", "h_star_right", "u_star", "err_h", "err_u", "rate_h"]
    assert np.all(table["err_h"] <= 1e-14)


def test_random_riemann_problem_avoids_shallow_water_vacuum(rng):
    for _ in range(50):
        p, left, right = validation.random_riemann_problem(rng, G_values=(0.0,))
        assert right.u - left.u < 2.0 * (math.sqrt(p.g * left.h) + math.sqrt(p.g * right.h))
        assert p.zeta in validation.RIEMANN_ZETA_SWEEP


def test_check_eigenstructure(rng):
    results = validation.check_eigenstructure(rng, 200)
    assert all(r.passed for r in results), [r for r in results if not r.passed]


def test_check_riemann(rng):
    results = validation.check_riemann(rng, 20)
    assert all(r.passed for r in results), [r for r in results if not r.passed]
    assert next(r for r in results if r.name == "entropy-strong-shock").informational


def test_lax_margin_requires_shock_on_its_side_of_the_contact(gsv_params):
    sol = riemann.solve(PrimitiveState(h=1.0, u=0.0, sxx=1.0, szz=1.0),
                        PrimitiveState(h=2.0, u=0.0, sxx=1.0, szz=1.0), gsv_params)
    minus = sol.waves[0]
    assert minus.kind == WaveKind.SHOCK
    assert validation._lax_margin(sol) > 0.0

    # fast enough left state that both characteristic inequalities still hold
    speed = sol.u_star + 0.5
    c_l = minus.left_state.u - physics.eigenvalues(minus.left_state, gsv_params)[0]
    fast = minus.left_state.model_copy(update={"u": speed + c_l + 1.0})
    crossed = minus.model_copy(update={"left_state": fast, "speed_head": speed, "speed_tail": speed})
    wrong = sol.model_copy(update={"waves": (crossed, sol.waves[1], sol.waves[2])})
    lam_l, lam_star = (physics.eigenvalues(U, gsv_params)[0] for U in (fast, sol.star_left))
    assert lam_l > speed > lam_star
    assert validation._lax_margin(wrong) < 0.0


def test_check_riemann_is_deterministic():
    first = validation.check_riemann(np.random.default_rng(7), 5)
    second = validation.check_riemann(np.random.default_rng(7), 5)
    assert [r.observed for r in first] == [r.observed for r in second]


def test_check_sv_oracle(rng):
    results = validation.check_sv_oracle(rng, 5)
    assert all(r.passed for r in results), [r for r in results if not r.passed]


def test_check_limits_and_relaxation():
    results = validation.check_g_limit() + validation.check_vacuum() + validation.check_relaxation()
    assert all(r.passed for r in results), [r for r in results if not r.passed]


def test_check_weak_form(rng):
    results = validation.check_weak_form(rng, 2, 3)
    assert all(r.passed for r in results), [r for r in results if not r.passed]


def test_check_convexity(rng):
    results = validation.check_convexity(rng, 5)
    assert [r.name for r in results][-1] == "convexity-negative-control-zeta-0.6"
    assert all(r.passed for r in results), [r for r in results if not r.passed]


def test_run_suite_reports_failing_group(monkeypatch):
    def broken():
        raise NumericalError("quadrature diverged")

    monkeypatch.setattr(validation, "check_vacuum", broken)
    block = ValidateBlock(n_states=10, n_riemann=2, n_weak_form=1, n_test_functions=2, n_convexity=2,
                          convergence_cells=[10, 20])
    results = validation.run_suite(block, seed=3)
    vacuum = next(r for r in results if r.name == "vacuum")
    assert not vacuum.passed
    assert "NumericalError" in vacuum.detail
    assert {"eigen-residual", "rankine-hugoniot", "godunov-conservation", "godunov-smooth-self-convergence"} <= {
        r.name for r in results
    }


@pytest.mark.slow
def test_full_validation_suite_passes():
    results = validation.run_suite(ValidateBlock(), seed=12345)
    assert all(r.passed for r in results), [r for r in results if not r.passed]
