import math

import numpy as np
import pytest

from ifmsim.analysis import (
    efficiency_sweep,
    knife_edge_resolution,
    phase_profile,
    width_fwhm,
)
from ifmsim.errors import (
    AmbiguousFeatureError,
    DomainError,
    NoFeatureError,
    NotAnEdgeError,
    WrongModeError,
)
from ifmsim.interferometer import EVConfig, ObjectSample, efficiency_ideal
from ifmsim.objects import Absent, Filament, KnifeEdge, Wire, amplitude_at
from ifmsim.scan import ScanPlan, run_scan

WIRE_CFG = EVConfig(0.525, 0.462)
BALANCED = EVConfig(0.5, 0.5)


def wire_scan(width, beam_fwhm=9.1, config=WIRE_CFG, step=0.91, visibility=1.0, mode="intensity-averaged"):
    cfg = EVConfig(config.t1, config.t2, visibility=visibility)
    half_span = width / 2 + 60.0
    return run_scan(ScanPlan(-half_span, half_span, step, mode=mode), cfg, Wire(0.0, width), beam_fwhm)


class TestWidthFwhm:
    def test_thin_wire_both_channels(self):
        scan = wire_scan(95.5)
        tr = width_fwhm(scan, "transmission")
        ifm = width_fwhm(scan, "ifm")
        assert tr.fwhm == pytest.approx(95.5, rel=0.02)
        assert ifm.fwhm == pytest.approx(95.5, rel=0.02)

    def test_thick_wire_ifm_channel(self):
        scan = wire_scan(159.1)
        assert width_fwhm(scan, "ifm").fwhm == pytest.approx(159.1, rel=0.02)

    def test_half_max_crossings_sit_at_edges(self):
        # analytic oracle: a top-hat convolved with any symmetric beam crosses
        # half-maximum exactly at the geometric edges, so the estimate is the
        # true width up to interpolation error
        scan = wire_scan(50.0)
        assert width_fwhm(scan, "transmission").fwhm == pytest.approx(50.0, abs=0.2)

    def test_desk_scale_width_set(self):
        for width in (20.0, 50.0, 95.5, 159.1, 207.9):
            scan = wire_scan(width)
            for channel in ("transmission", "ifm"):
                est = width_fwhm(scan, channel)
                assert abs(est.fwhm - width) / width < 0.02

    def test_noise_floor_baseline_removed(self):
        scan = wire_scan(95.5, visibility=0.96)
        est = width_fwhm(scan, "ifm")
        assert est.fwhm == pytest.approx(95.5, rel=0.02)
        assert est.half_max_level > 0.02  # sits above the subtracted floor

    def test_absent_object_no_feature(self):
        scan = run_scan(ScanPlan(-30, 30, 1.0), WIRE_CFG, Absent(), 9.1)
        with pytest.raises(NoFeatureError):
            width_fwhm(scan, "transmission")

    def test_edge_profile_is_ambiguous(self):
        scan = run_scan(ScanPlan(-40, 40, 0.5), WIRE_CFG, KnifeEdge(0.0, "right"), 9.1)
        with pytest.raises(AmbiguousFeatureError):
            width_fwhm(scan, "transmission")

    def test_bad_channel(self):
        scan = wire_scan(20.0)
        with pytest.raises(DomainError):
            width_fwhm(scan, "reflection")


class TestKnifeEdgeResolution:
    def edge_scan(self, beam_fwhm, step):
        span = max(40.0, 6 * beam_fwhm)
        return run_scan(
            ScanPlan(-span, span, step), WIRE_CFG, KnifeEdge(0.0, "right"), beam_fwhm
        )

    def test_reference_beam(self):
        res = knife_edge_resolution(self.edge_scan(9.1, 0.5))
        assert res.spot_fwhm == pytest.approx(9.1, abs=0.1)
        assert res.rayleigh == pytest.approx(10.7, abs=0.2)

    def test_predicted_beam(self):
        res = knife_edge_resolution(self.edge_scan(8.3, 0.5))
        assert res.rayleigh == pytest.approx(9.8, abs=0.2)

    @pytest.mark.parametrize("beam", [5.0, 8.3, 9.1, 15.0])
    def test_recovery_within_one_percent(self, beam):
        res = knife_edge_resolution(self.edge_scan(beam, beam / 10))
        assert abs(res.spot_fwhm - beam) / beam < 0.01

    def test_rayleigh_ratio(self):
        res = knife_edge_resolution(self.edge_scan(9.1, 0.5))
        assert res.rayleigh / res.spot_fwhm == pytest.approx(1.18, rel=1e-12)

    def test_wire_scan_rejected(self):
        scan = run_scan(ScanPlan(-80, 80, 0.91), WIRE_CFG, Wire(0.0, 95.5), 9.1)
        with pytest.raises(NotAnEdgeError):
            knife_edge_resolution(scan)

    def test_partial_edge_rejected(self):
        scan = run_scan(ScanPlan(-40, 2, 0.5), WIRE_CFG, KnifeEdge(0.0, "right"), 9.1)
        with pytest.raises(NotAnEdgeError):
            knife_edge_resolution(scan)


class TestPhaseProfile:
    FIBER = Filament(0.0, 40.0, min_t=math.sqrt(0.69), peak_phase=1.8078)

    def fiber_scan(self, visibility=1.0):
        cfg = EVConfig(0.5, 0.5, visibility=visibility)
        return run_scan(ScanPlan(-30, 30, 1.0, mode="point-sampled"), cfg, self.FIBER, 9.1), cfg

    def test_fiber_center_recovered(self):
        scan, cfg = self.fiber_scan()
        points = {p.x: p.phi for p in phase_profile(scan, cfg)}
        assert math.degrees(points[0.0]) == pytest.approx(103.6, abs=0.2)

    def test_round_trip_against_profile(self):
        scan, cfg = self.fiber_scan()
        for p in phase_profile(scan, cfg):
            t, phi_true = amplitude_at(self.FIBER, p.x)
            if t > 0.15 and p.phi is not None:
                assert math.degrees(abs(p.phi - phi_true)) < 0.5

    def test_noise_floor_inverted_first(self):
        scan, cfg = self.fiber_scan(visibility=0.95)
        points = {p.x: p.phi for p in phase_profile(scan, cfg)}
        assert math.degrees(points[0.0]) == pytest.approx(103.6, abs=0.2)

    def test_absent_object_zero_phase(self):
        cfg = EVConfig(0.5, 0.5, visibility=0.933)
        scan = run_scan(ScanPlan(0, 20, 1.0, mode="point-sampled"), cfg, Absent(), 9.1)
        for p in phase_profile(scan, cfg):
            assert math.degrees(p.phi) == pytest.approx(0.0, abs=1.0)

    def test_opaque_points_undefined(self):
        cfg = WIRE_CFG
        scan = run_scan(ScanPlan(-20, 20, 1.0, mode="point-sampled"), cfg, Wire(0.0, 200.0), 9.1)
        for p in phase_profile(scan, cfg):
            assert p.phi is None

    def test_convolved_scan_rejected(self):
        scan = run_scan(ScanPlan(-10, 10, 1.0, mode="coherent-convolved"), BALANCED, self.FIBER, 9.1)
        with pytest.raises(WrongModeError):
            phase_profile(scan, BALANCED)


class TestEfficiencySweep:
    def test_balanced_point(self):
        table = efficiency_sweep([0.5], ObjectSample(t=0.0))
        row = table.rows[0]
        assert row.p_ifm == pytest.approx(0.25, abs=1e-12)
        assert row.eta == pytest.approx(1 / 3, abs=1e-12)

    def test_high_reflectance_point(self):
        table = efficiency_sweep([0.9], ObjectSample(t=0.0))
        assert table.rows[0].p_ifm == pytest.approx(0.09, abs=1e-12)
        assert table.rows[0].eta == pytest.approx(1 / 11, abs=1e-12)

    def test_ideal_identity_over_grid(self):
        rs = [i / 20 for i in range(1, 20)]
        table = efficiency_sweep(rs, ObjectSample(t=0.0))
        for row in table.rows:
            assert row.eta == pytest.approx(efficiency_ideal(row.r), abs=1e-12)
            assert row.p_ifm == pytest.approx(row.r * (1 - row.r), abs=1e-12)

    def test_crosstalk_collapse_at_low_reflectance(self):
        table = efficiency_sweep([0.001, 0.01, 0.1], ObjectSample(t=0.0), eps=0.01)
        eta = {row.r: row.eta for row in table.rows}
        assert eta[0.001] < eta[0.01] < eta[0.1]
        assert eta[0.001] < efficiency_ideal(0.001) / 2

    def test_validation(self):
        with pytest.raises(DomainError):
            efficiency_sweep([], ObjectSample(t=0.0))
        with pytest.raises(DomainError):
            efficiency_sweep([0.5, 0.4], ObjectSample(t=0.0))
        with pytest.raises(DomainError):
            efficiency_sweep([0.0, 0.5], ObjectSample(t=0.0))
