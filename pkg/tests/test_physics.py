import math

import numpy as np
import pytest
from pydantic import ValidationError

import physics
import wave_curves
from errors import InputError
from models import ConservedState, Invariants, Params, PrimitiveState


def test_params_defaults():
    p = Params(G=1.0, zeta=0.25)
    assert p.g == 9.81
    assert math.isinf(p.lam)
    assert not p.relaxing


def test_params_reject_non_hyperbolic_zeta():
    with pytest.raises(ValidationError, match="hyperbolicity"):
        Params(g=9.81, G=1.0, zeta=0.7)


@pytest.mark.parametrize("kwargs", [{"g": 0.0}, {"G": -1.0}, {"zeta": -0.1}, {"lam": 0.0}])
def test_params_reject_out_of_range(kwargs):
    values = {"g": 9.81, "G": 1.0, "zeta": 0.25, **kwargs}
    with pytest.raises(ValidationError):
        Params(**values)


def test_params_lambda_alias():
    assert Params(G=1.0, zeta=0.0, **{"lambda": 2.0}).lam == 2.0


@pytest.mark.parametrize("h", [0.0, -1.0, 1e-301, 1e301, math.nan])
def test_state_domain_guards(h):
    with pytest.raises(ValidationError):
        PrimitiveState(h=h, u=0.0, sxx=1.0, szz=1.0)


def test_normal_stress():
    assert physics.normal_stress(PrimitiveState(h=1, u=0, sxx=1, szz=1), Params(G=5, zeta=0)) == 0.0
    assert physics.normal_stress(PrimitiveState(h=2, u=3, sxx=1, szz=3), Params(G=2, zeta=0)) == 4.0


def test_total_pressure():
    U = PrimitiveState(h=1, u=0, sxx=1, szz=3)
    assert physics.total_pressure(U, Params(g=10, G=2, zeta=0)) == pytest.approx(9.0)
    iso = PrimitiveState(h=1, u=0, sxx=2.5, szz=2.5)
    assert physics.total_pressure(iso, Params(g=10, G=7, zeta=0.3)) == pytest.approx(5.0)


def test_total_pressure_matches_invariant_form(random_state, gsv_params):
    for _ in range(50):
        U = random_state()
        inv = physics.invariants(U, gsv_params)
        assert wave_curves.p_of_h(U.h, inv, gsv_params) == pytest.approx(
            physics.total_pressure(U, gsv_params), rel=1e-12, abs=1e-12
        )


def test_invariants_examples():
    inv = physics.invariants(PrimitiveState(h=2, u=0, sxx=1.5, szz=0.5), Params(G=1, zeta=0))
    assert inv.X == pytest.approx(6.0)
    assert inv.Zinv == pytest.approx(0.125)
    half = physics.invariants(PrimitiveState(h=2, u=0, sxx=3, szz=1), Params(G=1, zeta=0.5))
    assert half.X == pytest.approx(6.0)
    unit = physics.invariants(PrimitiveState(h=1, u=0, sxx=0.7, szz=1.9), Params(G=1, zeta=0.1))
    assert (unit.X, unit.Zinv) == (0.7, 1.9)


def test_state_from_invariants():
    U = physics.state_from_invariants(2.0, 0.0, Invariants(X=6.0, Zinv=0.125), Params(G=1, zeta=0))
    assert U.sxx == pytest.approx(1.5)
    assert U.szz == pytest.approx(0.5)
    with pytest.raises(InputError):
        physics.state_from_invariants(0.0, 0.0, Invariants(X=1.0, Zinv=1.0), Params(G=1, zeta=0))


def test_state_from_invariants_round_trip(random_state, gsv_params):
    for _ in range(50):
        U = random_state()
        inv = physics.invariants(U, gsv_params)
        back = physics.invariants(physics.state_from_invariants(U.h, U.u, inv, gsv_params), gsv_params)
        assert back.X == pytest.approx(inv.X, rel=1e-13)
        assert back.Zinv == pytest.approx(inv.Zinv, rel=1e-13)


def test_dP_dh_examples(rest):
    p = Params(g=9.81, G=1.0, zeta=0.0)
    assert physics.dP_dh(1.0, physics.invariants(rest, p), p) == pytest.approx(13.81)
    sv = Params(g=9.81, G=0.0, zeta=0.3)
    assert physics.dP_dh(2.0, Invariants(X=3.0, Zinv=0.2), sv) == pytest.approx(9.81 * 2.0)


def test_dP_dh_matches_finite_difference(random_state):
    for zeta in (0.0, 0.25, 0.5):
        p = Params(g=9.81, G=1.0, zeta=zeta)
        for _ in range(20):
            U = random_state()
            inv = physics.invariants(U, p)
            eps = 1e-6 * U.h
            fd = (wave_curves.p_of_h(U.h + eps, inv, p) - wave_curves.p_of_h(U.h - eps, inv, p)) / (2 * eps)
            assert physics.dP_dh(U.h, inv, p) == pytest.approx(fd, rel=1e-6)


def test_dP_dh_positive_over_wide_range(rng):
    for _ in range(2000):
        p = Params(g=9.81, G=float(rng.choice([0.0, 0.1, 1.0, 10.0])), zeta=float(rng.uniform(0.0, 0.5)))
        h, sxx, szz = np.exp(rng.uniform(math.log(1e-4), math.log(1e4), size=3))
        U = PrimitiveState(h=h, u=0.0, sxx=sxx, szz=szz)
        assert physics.dP_dh(U.h, physics.invariants(U, p), p) > 0.0


def test_eigenvalues_example(rest):
    lam = physics.eigenvalues(rest, Params(g=9.81, G=1.0, zeta=0.0))
    assert lam[0] == pytest.approx(-3.71618, abs=1e-5)
    assert lam[1] == lam[2] == 0.0
    assert lam[3] == pytest.approx(3.71618, abs=1e-5)


def test_eigenvalues_shallow_water_limit(sv_params):
    U = PrimitiveState(h=2.0, u=0.5, sxx=3.0, szz=0.1)
    lam = physics.eigenvalues(U, sv_params)
    c = math.sqrt(9.81 * 2.0)
    assert lam[0] == pytest.approx(0.5 - c)
    assert lam[3] == pytest.approx(0.5 + c)


def test_eigenvalues_match_matrix(random_state):
    for zeta in (0.0, 0.1, 0.4, 0.5):
        p = Params(g=9.81, G=1.0, zeta=zeta)
        for _ in range(20):
            U = random_state()
            A = physics.quasilinear_matrix(U, p)
            numeric = np.sort(np.linalg.eigvals(A).real)
            assert np.allclose(numeric, physics.eigenvalues(U, p), rtol=0, atol=1e-9 * (1 + np.linalg.norm(A)))


def test_char_fields_are_eigenvectors(random_state):
    for zeta in (0.0, 0.25, 0.5):
        for G in (0.0, 1.0, 10.0):
            p = Params(g=9.81, G=G, zeta=zeta)
            U = random_state()
            A = physics.quasilinear_matrix(U, p)
            lam = physics.eigenvalues(U, p)
            fields = physics.char_fields(U, p)
            for key, speed in (("r_minus", lam[0]), ("r0_1", lam[1]), ("r0_2", lam[2]), ("r_plus", lam[3])):
                r = fields[key]
                if np.linalg.norm(r) == 0.0:
                    continue
                residual = np.linalg.norm(A @ r - speed * r) / np.linalg.norm(r)
                assert residual <= 1e-9 * (1 + np.linalg.norm(A))


def _directional(func, U: PrimitiveState, r: np.ndarray, eps: float = 1e-6) -> float:
    base = U.as_array()
    plus = PrimitiveState(**dict(zip(["h", "u", "sxx", "szz"], base + eps * r)))
    minus = PrimitiveState(**dict(zip(["h", "u", "sxx", "szz"], base - eps * r)))
    return (func(plus) - func(minus)) / (2 * eps)


def test_riemann_invariance_of_fields(random_state, gsv_params):
    p = gsv_params
    U = random_state(h=(0.5, 2.0), s=(0.5, 2.0))
    fields = physics.char_fields(U, p)
    inv = physics.invariants(U, p)
    for key in ("r_minus", "r_plus"):
        r = fields[key]
        assert abs(_directional(lambda V: physics.invariants(V, p).X, U, r)) <= 1e-6 * inv.X * np.linalg.norm(r)
        assert abs(_directional(lambda V: physics.invariants(V, p).Zinv, U, r)) <= 1e-6 * inv.Zinv * np.linalg.norm(r)
    scale = abs(physics.total_pressure(U, p)) + p.g * U.h**2
    for key in ("r0_1", "r0_2"):
        r = fields[key]
        assert r[1] == 0.0
        assert abs(_directional(lambda V: physics.total_pressure(V, p), U, r)) <= 1e-6 * scale * np.linalg.norm(r)


def test_genuine_nonlinearity_limits():
    U = PrimitiveState(h=2.0, u=0.0, sxx=1.3, szz=0.7)
    minus, plus = physics.genuine_nonlinearity(U, Params(g=9.81, G=0.0, zeta=0.2))
    assert plus == pytest.approx(1.5 * math.sqrt(9.81 * 2.0))
    assert minus == -plus

    p = Params(g=9.81, G=1.0, zeta=0.5)
    c = physics.sound_speed(U, p)
    _, plus = physics.genuine_nonlinearity(U, p)
    assert plus == pytest.approx((3 * 9.81 * 2.0 + 6 * 0.7) / (2 * c))


def test_genuine_nonlinearity_matches_finite_difference(random_state):
    for zeta in (0.0, 0.25, 0.5):
        p = Params(g=9.81, G=1.0, zeta=zeta)
        U = random_state(h=(0.5, 2.0), s=(0.5, 2.0))
        fields = physics.char_fields(U, p)
        minus, plus = physics.genuine_nonlinearity(U, p)
        fd_minus = _directional(lambda V: physics.eigenvalues(V, p)[0], U, fields["r_minus"])
        fd_plus = _directional(lambda V: physics.eigenvalues(V, p)[3], U, fields["r_plus"])
        assert minus < 0.0 < plus
        assert fd_minus == pytest.approx(minus, rel=1e-6)
        assert fd_plus == pytest.approx(plus, rel=1e-6)


def test_free_energy_examples():
    rest = PrimitiveState(h=1, u=0, sxx=1, szz=1)
    assert physics.free_energy(rest, Params(g=9.81, G=3, zeta=0)) == pytest.approx(4.905)
    moving = PrimitiveState(h=1, u=2, sxx=1, szz=1)
    assert physics.free_energy(moving, Params.unchecked(g=0.0, G=1.0, zeta=0.0)) == pytest.approx(2.0)
    stretched = PrimitiveState(h=1, u=0, sxx=math.e, szz=1)
    assert physics.free_energy(stretched, Params.unchecked(g=0.0, G=2.0, zeta=0.0)) == pytest.approx(math.e - 2)


def test_free_energy_minimized_at_unit_stress(rng, gsv_params):
    base = physics.free_energy(PrimitiveState(h=1.3, u=0.4, sxx=1, szz=1), gsv_params)
    for sxx, szz in np.exp(rng.uniform(-3, 3, size=(50, 2))):
        assert physics.free_energy(PrimitiveState(h=1.3, u=0.4, sxx=sxx, szz=szz), gsv_params) >= base


def test_entropy_flux():
    U = PrimitiveState(h=1, u=1, sxx=1, szz=1)
    assert physics.entropy_flux(U, Params(g=2.0, G=4.0, zeta=0.1)) == pytest.approx(2.5)
    assert physics.entropy_flux(PrimitiveState(h=3, u=0, sxx=2, szz=1), Params(G=1, zeta=0)) == 0.0


def test_quasilinear_matrix_rows():
    U = PrimitiveState(h=2.0, u=0.3, sxx=1.5, szz=0.5)
    p = Params(g=9.81, G=1.0, zeta=0.25)
    A = physics.quasilinear_matrix(U, p)
    assert list(A[0]) == [0.3, 2.0, 0.0, 0.0]
    assert A[2, 2] == A[3, 3] == 0.3
    assert A[2, 1] == pytest.approx(2 * (0.25 - 1) * 1.5)
    assert A[3, 1] == pytest.approx(2 * (1 - 0.25) * 0.5)


def test_relaxation_rate():
    p = Params(G=1.0, zeta=0.0, lam=1.0)
    assert physics.relaxation_rate(PrimitiveState(h=1, u=0, sxx=1, szz=1), p) == (0.0, 0.0)
    assert physics.relaxation_rate(PrimitiveState(h=1, u=0, sxx=2, szz=1), p)[0] == -1.0
    slow = Params(G=1.0, zeta=0.0, lam=2.0)
    assert physics.relaxation_rate(PrimitiveState(h=1, u=0, sxx=0.5, szz=1), slow)[0] == 0.25
    with pytest.raises(InputError):
        physics.relaxation_rate(PrimitiveState(h=1, u=0, sxx=2, szz=1), Params(G=1.0, zeta=0.0))


def test_entropy_source_is_dissipative(random_state):
    p = Params(g=9.81, G=2.0, zeta=0.25, lam=0.5)
    for _ in range(20):
        assert physics.entropy_source(random_state(), p) <= 0.0
    assert physics.entropy_source(random_state(), Params(G=2.0, zeta=0.25)) == 0.0


def test_conserved_round_trip(random_state, gsv_params):
    for _ in range(50):
        U = random_state()
        V = physics.to_conserved(U, gsv_params)
        back = physics.from_conserved(V, gsv_params)
        assert np.allclose(back.as_array(), U.as_array(), rtol=1e-13, atol=0)


def test_conserved_rejects_nonpositive_components():
    with pytest.raises(ValidationError):
        ConservedState(m0=1.0, m1=0.0, m2=-1.0, m3=1.0)


def test_array_kernels_match_scalar(random_state, gsv_params):
    states = [random_state() for _ in range(10)]
    V = np.array([physics.to_conserved(U, gsv_params).as_array() for U in states])
    W = physics.primitive_array(V, gsv_params)
    assert np.allclose(W, [U.as_array() for U in states], rtol=1e-13)
    assert np.allclose(physics.conserved_array(W, gsv_params), V, rtol=1e-13)
    F = physics.flux_array(V, gsv_params)
    assert np.allclose(F, [physics.conserved_flux(U, gsv_params) for U in states], rtol=1e-13)
    speeds = physics.max_wave_speed_array(V, gsv_params)
    expected = [max(abs(physics.eigenvalues(U, gsv_params)[0]), abs(physics.eigenvalues(U, gsv_params)[3])) for U in states]
    assert np.allclose(speeds, expected, rtol=1e-13)


def test_log_conserved_variant(gsv_params):
    U = PrimitiveState(h=2.0, u=0.5, sxx=1.5, szz=0.5)
    values, flux = physics.log_conserved(U, gsv_params)
    inv = physics.invariants(U, gsv_params)
    assert values[2] == pytest.approx(2.0 * math.log(inv.X))
    assert flux[3] == pytest.approx(2.0 * 0.5 * math.log(inv.Zinv))
    assert flux[1] == pytest.approx(physics.conserved_flux(U, gsv_params)[1])


def test_strict_hyperbolicity(rest, gsv_params):
    assert physics.is_strictly_hyperbolic(rest, gsv_params)
