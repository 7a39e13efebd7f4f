import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracscatter.core import DomainError, LevyContext
from fracscatter.delta import delta_ss_energy
from fracscatter.scan import (
    LOG_CAP,
    ScanGrid,
    alpha_profile,
    evaluate,
    find_cpa,
    find_minima,
    find_ss,
    local_maxima,
    resolve_workers,
    scan_field,
    scan_fields,
    track_subpeaks,
)
from fracscatter.transfer import ComplexBarrier, ComplexDelta, barrier_matrix

from conftest import CPA_BARRIER_V, SS_BARRIER_V, WIDTH, rel_err

SS_BARRIER = ComplexBarrier(SS_BARRIER_V, WIDTH)
CPA_BARRIER = ComplexBarrier(CPA_BARRIER_V, WIDTH)


def mp_m22_zero(V, b, guess):
    """Complex zero of m22 for the square-root case, in the textbook cos/sin form."""
    mpmath.mp.dps = 30
    V = mpmath.mpc(V)

    def m22(E):
        k, q = mpmath.sqrt(2 * E), mpmath.sqrt(2 * (E - V))
        return (mpmath.cos(q * b) + 0.5j * (q / k + k / q) * mpmath.sin(q * b)) * mpmath.exp(-1j * k * b)

    g = mpmath.mpc(guess)
    return complex(mpmath.findroot(m22, (g - 0.01j, g + 0.01 - 0.02j, g - 0.05j), solver="muller"))


# -- grid --------------------------------------------------------------------------------


@pytest.mark.parametrize("kwargs", [
    dict(e_min=0.0, e_max=1.0),
    dict(e_min=2.0, e_max=1.0),
    dict(e_min=1.0, e_max=2.0, e_points=1),
    dict(e_min=1.0, e_max=1.0, e_points=5),
    dict(e_min=1.0, e_max=2.0, e_scale="cubic"),
    dict(e_min=1.0, e_max=2.0, alpha_min=1.0),
    dict(e_min=1.0, e_max=2.0, alpha_min=1.9, alpha_max=1.8),
    dict(e_min=1.0, e_max=2.0, alpha_min=1.9, alpha_points=1),
    dict(e_min=1.0, e_max=2.0, alpha_values=()),
    dict(e_min=1.0, e_max=2.0, alpha_values=(2.0, 2.1)),
])
def test_grid_rejects_bad_axes(kwargs):
    with pytest.raises(DomainError):
        ScanGrid(**kwargs)


def test_grid_axes():
    g = ScanGrid(1.0, 100.0, 3, "logarithmic", alpha_min=1.9, alpha_max=2.0, alpha_points=3)
    assert g.e_scale == "log"
    np.testing.assert_allclose(g.energies(), [1.0, 10.0, 100.0])
    np.testing.assert_allclose(g.alphas(), [2.0, 1.95, 1.9])
    assert ScanGrid(5.0, 5.0, 1).energies().tolist() == [5.0]
    assert ScanGrid(1.0, 2.0, alpha_values=(2, 1.9)).alphas().tolist() == [2.0, 1.9]


def test_workers_from_environment(monkeypatch):
    monkeypatch.setenv("FRACSCATTER_THREADS", "3")
    assert resolve_workers() == 3
    assert resolve_workers(1) == 1
    monkeypatch.setenv("FRACSCATTER_THREADS", "")
    assert resolve_workers() >= 1


# -- fields ------------------------------------------------------------------------------


def test_transparent_potential_field_is_capped():
    fld = scan_fields(ComplexBarrier(0.0, 1.0), LevyContext(2.0), ScanGrid(1.0, 10.0, 50, alpha_values=(2.0, 1.5)))
    assert fld.values.shape == (4, 2, 50)
    assert np.all(fld.observable("R") == -LOG_CAP)
    np.testing.assert_allclose(fld.observable("T"), 0.0, atol=1e-14)
    np.testing.assert_allclose(fld.observable("m22"), 0.0, atol=1e-14)


def test_flagged_point_where_energy_meets_real_barrier():
    g = ScanGrid(4.0, 6.0, 3)
    fld = scan_fields(ComplexBarrier(5.0, 1.0), LevyContext(2.0), g)
    assert fld.flagged.tolist() == [[False, True, False]]
    assert np.isnan(fld.values[:, 0, 1]).all()


def test_scan_field_aliases_and_unknown_name():
    g = ScanGrid(100.0, 110.0, 11)
    a = scan_field(SS_BARRIER, LevyContext(2.0), g, "|m22|")
    b = scan_field(SS_BARRIER, LevyContext(2.0), g, "m22")
    assert np.array_equal(a, b)
    with pytest.raises(ValueError):
        scan_field(SS_BARRIER, LevyContext(2.0), g, "phase")


def test_field_rows_match_single_alpha_evaluation():
    g = ScanGrid(100.0, 600.0, 64, alpha_values=(2.0, 1.97))
    fld = scan_fields(SS_BARRIER, LevyContext(2.0), g, workers=2)
    for j, a in enumerate(g.alphas()):
        want = evaluate(SS_BARRIER, LevyContext(a), g.energies())
        assert np.array_equal(fld.values[:, j], np.clip(want, -LOG_CAP, LOG_CAP))


def test_field_is_identical_for_any_worker_count():
    g = ScanGrid(40.0, 200.0, 300, alpha_min=1.95, alpha_max=2.0, alpha_points=9)
    ref = scan_fields(CPA_BARRIER, LevyContext(2.0), g, workers=1).values
    for w in (2, 5):
        assert np.array_equal(scan_fields(CPA_BARRIER, LevyContext(2.0), g, workers=w).values, ref, equal_nan=True)


# -- singularities -----------------------------------------------------------------------


def test_delta_field_has_single_minimum_at_closed_form():
    fld = scan_fields(ComplexDelta(-1.5j), LevyContext(2.0), ScanGrid(0.1, 5.0, 500))
    row = fld.observable("m22")[0]
    interior = np.flatnonzero((row[1:-1] < row[:-2]) & (row[1:-1] <= row[2:])) + 1
    assert interior.size == 1
    assert abs(fld.energies[interior[0]] - 1.125) < 5.0 / 500


def test_find_ss_delta_refines_to_closed_form():
    ctx = LevyContext(1.85)
    (rep,) = find_ss(ComplexDelta(-1.5j), ctx, (1.0, 20.0))
    assert rel_err(rep.e_star, delta_ss_energy(ctx, 1.5)) < 1e-9
    assert rep.residual < 1e-8
    assert rep.depth >= 6
    assert rep.bracket[0] < rep.e_star < rep.bracket[1]
    assert rep.certificate is None


@settings(max_examples=20)
@given(st.floats(1.3, 2.0), st.floats(0.01, 100.0))
def test_find_ss_delta_agrees_with_closed_form(alpha, rho):
    ctx = LevyContext(alpha, v=1e-5)
    want = delta_ss_energy(ctx, rho)
    reps = find_ss(ComplexDelta(-1j * rho), ctx, (0.5 * want, 2.0 * want), e_points=400)
    assert len(reps) == 1
    assert rel_err(reps[0].e_star, want) < 1e-6


def test_delta_with_wrong_phase_has_no_ss():
    assert find_ss(ComplexDelta(1.5j), LevyContext(1.9), (0.1, 50.0)) == []
    assert find_ss(ComplexDelta(-1.5), LevyContext(1.9), (0.1, 50.0)) == []


def test_barrier_ss_minimum_sits_at_real_part_of_complex_zero():
    ctx = LevyContext(2.0)
    reps = find_minima(SS_BARRIER, ctx, (100.0, 600.0), "SS", threshold=-math.inf)
    deepest = min(reps, key=lambda r: r.residual)
    z = mp_m22_zero(SS_BARRIER_V, WIDTH, deepest.e_star)
    assert abs(deepest.e_star - z.real) < 1e-4
    # the zero is off the real axis, so the residual stays finite
    assert z.imag < 0 and deepest.residual > 1e-5


def test_refined_minimum_beats_its_neighbourhood():
    ctx = LevyContext(2.0)
    rep = min(find_minima(SS_BARRIER, ctx, (100.0, 600.0), "SS", threshold=-math.inf), key=lambda r: r.residual)
    e = rep.e_star
    side = evaluate(SS_BARRIER, ctx, [e * (1 - 1e-6), e * (1 + 1e-6)])[2]
    assert np.all(side > math.log10(rep.residual))


def test_find_minima_rejects_bad_input():
    with pytest.raises(ValueError):
        find_minima(SS_BARRIER, LevyContext(2.0), (1.0, 2.0), "XX")
    with pytest.raises(DomainError):
        find_ss(SS_BARRIER, LevyContext(2.0), (2.0, 1.0))


def test_free_space_has_no_cpa():
    assert find_cpa(ComplexBarrier(0.0, 1.0), LevyContext(1.9), (1.0, 100.0)) == []


def test_cpa_certificate_vanishes_at_developed_point():
    # a (E, alpha) pair where the residual reaches machine level
    trk = track_subpeaks(
        CPA_BARRIER, LevyContext(2.0),
        ScanGrid(60.0, 80.0, 800, alpha_min=1.995, alpha_max=2.0, alpha_points=26), "CPA",
        window=2.0,
    )
    dev = [t for t in trk if t.developed_at is not None]
    assert dev
    t = dev[0]
    ctx = LevyContext(t.developed_at)
    (rep,) = [r for r in find_cpa(CPA_BARRIER, ctx, (t.developed_energy - 0.5, t.developed_energy + 0.5),
                                  e_points=101)]
    assert rep.certificate < 1e-4
    assert rep.depth >= 6
    M = barrier_matrix(ctx, CPA_BARRIER_V, WIDTH, rep.e_star)
    assert abs(M.m12 * M.m21 - 1) < 1e-4


def test_cpa_delta_certificate_uses_matrix_products():
    ctx = LevyContext(2.0)
    reps = find_minima(ComplexDelta(0.3 - 0.2j), ctx, (0.01, 10.0), "CPA", threshold=-math.inf, e_points=200)
    for r in reps:
        assert r.certificate is not None and r.certificate >= 0


def test_deepest_minima_blue_shift():
    deepest = []
    for a in (2.0, 1.99, 1.98, 1.95):
        reps = find_minima(SS_BARRIER, LevyContext(a), (100.0, 600.0), "SS", threshold=-math.inf)
        deepest.append(min(reps, key=lambda r: r.residual).e_star)
    assert all(x < y for x, y in zip(deepest, deepest[1:]))
    assert deepest[0] == pytest.approx(270.1076, abs=1e-3)


# -- tracking ----------------------------------------------------------------------------

TRACK_GRID = ScanGrid(200.0, 300.0, 1500, alpha_min=1.99, alpha_max=2.0, alpha_points=41)


@pytest.fixture(scope="module")
def ss_tracks():
    return track_subpeaks(SS_BARRIER, LevyContext(2.0), TRACK_GRID, "SS")


def test_tracks_start_at_main_peak_and_go_up(ss_tracks):
    assert ss_tracks[0].main and not any(t.main for t in ss_tracks[1:])
    assert ss_tracks[0].e_start == pytest.approx(270.11, abs=0.1)
    starts = [t.e_start for t in ss_tracks]
    assert starts == sorted(starts)
    assert [t.peak_id for t in ss_tracks] == list(range(len(ss_tracks)))


def test_track_samples_follow_alpha_down(ss_tracks):
    for t in ss_tracks:
        a = [s.alpha for s in t.samples]
        assert a[0] == 2.0
        assert all(x > y for x, y in zip(a, a[1:]))
        for s in t.samples:
            assert 200.0 <= s.e_peak <= 300.0


def test_developed_tracks_reach_threshold(ss_tracks):
    dev = [t for t in ss_tracks if t.developed_at is not None]
    assert dev
    for t in dev:
        assert t.developed_depth >= 6
        assert 1.99 <= t.developed_at <= 2.0
        ctx = LevyContext(t.developed_at)
        m22 = barrier_matrix(ctx, SS_BARRIER_V, WIDTH, t.developed_energy).m22
        assert abs(m22) < 1e-4


def test_sub_peaks_develop_in_order(ss_tracks):
    dev = [t for t in ss_tracks if t.developed_at is not None and not t.main]
    at = [t.developed_at for t in dev]
    assert at == sorted(at, reverse=True)


def test_include_below_adds_tracks_that_never_develop():
    base = track_subpeaks(SS_BARRIER, LevyContext(2.0), TRACK_GRID, "SS")
    full = track_subpeaks(SS_BARRIER, LevyContext(2.0), TRACK_GRID, "SS", include_below=True)
    below = [t for t in full if t.e_start < base[0].e_start]
    assert below
    assert all(t.developed_at is None for t in below)


def test_tracking_requires_alpha_two_first():
    with pytest.raises(DomainError):
        track_subpeaks(SS_BARRIER, LevyContext(2.0), ScanGrid(200.0, 300.0, 100, alpha_values=(1.99, 1.98)), "SS")
    with pytest.raises(ValueError):
        track_subpeaks(SS_BARRIER, LevyContext(2.0), TRACK_GRID, "BOTH")


def test_track_json_shape(ss_tracks):
    d = ss_tracks[0].to_json()
    assert set(d) == {"peak_id", "kind", "main", "e_start", "developed_at", "developed_energy",
                      "developed_depth", "samples"}
    assert len(d["samples"][0]) == 5


# -- alpha profiles ----------------------------------------------------------------------


def test_profile_columns_and_order():
    p = alpha_profile(SS_BARRIER, LevyContext(2.0), 280.0, (1.98, 2.0), points=50)
    assert p.shape == (50, 4)
    assert p[0, 0] == 2.0 and p[-1, 0] == 1.98
    assert np.all(np.diff(p[:, 0]) < 0)


def test_profile_of_ss_barrier_oscillates():
    p = alpha_profile(SS_BARRIER, LevyContext(2.0), 280.0, (1.98, 2.0), points=2000)
    assert local_maxima(p[:, 2]).size >= 2


def test_profile_of_transparent_potential_is_flat():
    p = alpha_profile(ComplexBarrier(0.0, 3.0), LevyContext(2.0), 50.0, (1.5, 2.0), points=30)
    np.testing.assert_allclose(p[:, 2], 0.0, atol=1e-14)


def test_cpa_profile_minima_move_to_lower_alpha_with_energy():
    where = []
    for E in (200.0, 300.0, 400.0):
        p = alpha_profile(CPA_BARRIER, LevyContext(2.0), E, (1.7, 2.0), points=2000)
        where.append(p[np.argmin(p[:, 3]), 0])
    assert where[0] > where[1] > where[2]


def test_profile_rejects_bad_energy():
    with pytest.raises(DomainError):
        alpha_profile(SS_BARRIER, LevyContext(2.0), 0.0, (1.9, 2.0))


def test_local_maxima():
    assert local_maxima([0, 2, 1, 3, 3, 0]).tolist() == [1, 3]
