import math

import pytest

import nopair


def test_kappa_constants_at_zero_coupling():
    k = nopair.kappa_constants(0.0)
    assert k.c_lower == pytest.approx(1.0)
    assert k.upper == pytest.approx(1.0)


def test_base_region_is_admissible():
    assert nopair.is_admissible(0.5, 0.3)
    assert nopair.is_admissible(0.5, -0.9)


def test_admissible_region_shape():
    cells, boundary = nopair.admissible_region([0.25, 0.5, 0.75], [-0.5, 0.0, 0.5])
    assert len(cells) == 3 and all(len(row) == 3 for row in cells)
    assert cells[1][0] and cells[1][1]
    assert len(boundary) > 0


def test_dirac_ground_state_closed_form():
    kappa = 0.5
    assert nopair.dirac_level(kappa, 1, -1) == pytest.approx(math.sqrt(1 - kappa**2), rel=1e-14)


def test_scott_furry_below_nonrelativistic_value():
    estimate, err = nopair.scott_furry(0.5, 200)
    assert 0.0 < estimate < 0.5
    assert err < 1e-3


def test_thomas_fermi_scaling():
    c = nopair.tf_coefficient()
    assert c < 0
    for z in (1.0, 10.0, 100.0):
        assert nopair.tf_energy(z) / z ** (7.0 / 3.0) == pytest.approx(c, rel=1e-10)


def test_single_electron_scf_matches_dirac_ground_state():
    state = nopair.scf_solve(z=2.0, n=1.0, kappa=0.5)
    c = state.c
    exact = c * c * math.sqrt(1 - 0.25) - c * c
    assert state.converged
    assert state.energy == pytest.approx(exact, rel=1e-6)


def test_helium_scf_and_pictures():
    state = nopair.scf_solve(z=2.0, kappa=0.5, grid_n=300)
    assert state.converged
    assert state.occupations["total"] == pytest.approx(2.0, abs=1e-10)
    assert len(state.r) == len(state.radial_charge) == 300
    reports = nopair.analyze_pictures(state, ["meanfield", "coulomb:0"])
    same = reports[0]
    assert same["II"] == pytest.approx(0.0, abs=1e-9)
    assert same["e_h_gamma_a"] == pytest.approx(same["e_h_star"], rel=1e-10)
    assert reports[1]["III"] >= 0.0


def test_fit_scott_exact_synthetic_rows():
    zs = [20.0, 30.0, 40.0, 55.0, 70.0, 90.0]
    es = [-0.7687 * z ** (7 / 3) + 0.3 * z**2 for z in zs]
    estimate, stderr, slope, tf = nopair.fit_scott(zs, es, -0.7687)
    assert estimate == pytest.approx(0.3, abs=1e-10)
    assert slope == pytest.approx(0.0, abs=1e-9)


def test_config_errors_raise_value_error():
    with pytest.raises(ValueError):
        nopair.config_hash('{"grid": {"nodes": 10}}')
    assert len(nopair.config_hash("{}")) == 16


def test_invalid_coupling_raises():
    with pytest.raises(ValueError):
        nopair.scf_solve(z=2.0, kappa=1.5)
