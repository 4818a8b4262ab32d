import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ifmsim.errors import (
    DomainError,
    InconsistentDataError,
    UndefinedEfficiencyError,
    UndefinedPhaseError,
)
from ifmsim.interferometer import (
    EVConfig,
    ObjectSample,
    ProbabilityTriple,
    apply_noise_floor,
    dark_port_condition,
    efficiency,
    efficiency_ideal,
    invert_noise_floor,
    invert_phase,
    measure,
    p_ifm_balanced,
)
from ifmsim.jones import analyzer_project, linear_polarized, object_operator

BALANCED = EVConfig(0.5, 0.5)
WIRE_CFG = EVConfig(0.525, 0.462)

couplings = st.floats(0.05, 0.95)
phases = st.floats(0.0, math.pi)


def closed_form(t1, t2, t, phi):
    """Independent expansion of the dark-port probability (no complex arithmetic)."""
    tt, rr = t1 * t2, (1 - t1) * (1 - t2)
    return tt + rr * t * t - 2.0 * t * math.cos(phi) * math.sqrt(tt * rr)


class TestMeasure:
    def test_opaque_wire_point(self):
        triple = measure(WIRE_CFG, ObjectSample(t=0.0))
        assert triple.p_ifm == pytest.approx(0.525 * 0.462, abs=1e-12)
        assert triple.p_ifm == pytest.approx(0.2426, abs=1e-4)
        assert triple.p_abs == pytest.approx(0.475, abs=1e-12)

    def test_absent_object_dark_port_nulled(self):
        triple = measure(BALANCED, ObjectSample(t=1.0, phi=0.0))
        assert triple.p_ifm == pytest.approx(0.0, abs=1e-15)
        assert triple.p_abs == 0.0
        assert triple.p_noresult == pytest.approx(1.0, abs=1e-15)

    def test_partial_transparency_point(self):
        triple = measure(WIRE_CFG, ObjectSample(t=math.sqrt(0.15)))
        assert triple.p_ifm == pytest.approx(0.08803491380820966, abs=1e-12)
        assert triple.p_ifm == pytest.approx(0.0880, abs=1e-4)

    def test_pi_shifted_transparent_object_saturates(self):
        triple = measure(BALANCED, ObjectSample(t=1.0, phi=math.pi))
        assert triple.p_ifm == pytest.approx(1.0, abs=1e-12)
        assert triple.p_abs == 0.0
        assert efficiency(triple) == pytest.approx(1.0, abs=1e-12)

    def test_crosstalk_raises_absorption_floor(self):
        cfg = EVConfig(0.99, 0.01, crosstalk_eps=0.01)
        triple = measure(cfg, ObjectSample(t=0.0))
        assert triple.p_abs == pytest.approx(0.01 + 0.01 * 0.99, abs=1e-12)

    @given(t1=couplings, t2=couplings, t=st.floats(0.0, 1.0), phi=phases)
    def test_matches_independent_expansion(self, t1, t2, t, phi):
        triple = measure(EVConfig(t1, t2), ObjectSample(t, phi))
        assert triple.p_ifm == pytest.approx(closed_form(t1, t2, t, phi), abs=1e-12)

    @given(t1=st.floats(0.0, 1.0), t2=st.floats(0.0, 1.0), t=st.floats(0.0, 1.0), phi=phases)
    def test_conservation_without_crosstalk(self, t1, t2, t, phi):
        triple = measure(EVConfig(t1, t2), ObjectSample(t, phi))
        assert triple.p_ifm + triple.p_abs + triple.p_noresult == pytest.approx(1.0, abs=1e-12)
        # the no-result flux is what physically reaches the bright port
        expected_nr = t1 + (1 - t1) * t * t - triple.p_ifm
        assert triple.p_noresult == pytest.approx(expected_nr, abs=1e-12)

    @given(t1=couplings, t2=couplings, t=st.floats(0.0, 1.0), phi=phases)
    def test_probabilities_in_range(self, t1, t2, t, phi):
        triple = measure(EVConfig(t1, t2), ObjectSample(t, phi))
        for p in (triple.p_ifm, triple.p_abs, triple.p_noresult):
            assert -1e-12 <= p <= 1.0 + 1e-12

    def test_opaque_limit_exact(self):
        cfg = EVConfig(0.3, 0.8)
        triple = measure(cfg, ObjectSample(t=0.0))
        assert triple.p_ifm == pytest.approx(0.3 * 0.8, abs=1e-15)
        assert triple.p_abs == 0.7


class TestBalanced:
    def test_opaque_quarter(self):
        assert p_ifm_balanced(0.0, 1.234) == 0.25

    def test_absent_zero(self):
        assert p_ifm_balanced(1.0, 0.0) == pytest.approx(0.0, abs=1e-15)

    def test_fiber_center(self):
        assert p_ifm_balanced(0.69, 1.8078) == pytest.approx(0.52, abs=1e-3)

    def test_domain(self):
        with pytest.raises(DomainError):
            p_ifm_balanced(1.5, 0.0)

    @given(t=st.floats(0.0, 1.0), phi=phases)
    def test_consistent_with_measure(self, t, phi):
        triple = measure(BALANCED, ObjectSample(t, phi))
        assert triple.p_ifm == pytest.approx(p_ifm_balanced(t * t, phi), abs=1e-12)


class TestInvertPhase:
    def test_fiber_center_value(self):
        phi = invert_phase(0.52, 0.69, BALANCED)
        assert math.degrees(phi) == pytest.approx(103.577, abs=1e-2)

    def test_bisection_oracle(self):
        # independent inversion of the balanced formula by bisection
        target, p_norm = 0.52, 0.69
        lo, hi = 0.0, math.pi
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if p_ifm_balanced(p_norm, mid) < target:
                lo = mid
            else:
                hi = mid
        assert invert_phase(target, p_norm, BALANCED) == pytest.approx(lo, abs=1e-9)

    def test_opaque_has_no_phase(self):
        with pytest.raises(UndefinedPhaseError):
            invert_phase(0.25, 0.0, BALANCED)

    def test_absent_object_zero_phase(self):
        assert invert_phase(0.0, 1.0, BALANCED) == 0.0

    def test_inconsistent_data_rejected(self):
        # at p_norm = 0.01 the balanced dark port is confined to
        # [(1 - 0.1)^2, (1 + 0.1)^2]/4; values outside imply |cos(phi)| > 1
        with pytest.raises(InconsistentDataError):
            invert_phase(0.9, 0.01, BALANCED)
        with pytest.raises(InconsistentDataError):
            invert_phase(0.01, 0.01, BALANCED)

    def test_clamps_float_noise_at_extremes(self):
        p = p_ifm_balanced(1.0, 0.0)
        assert invert_phase(p - 1e-12, 1.0, BALANCED) == pytest.approx(0.0, abs=1e-5)

    @given(t1=couplings, t2=couplings, t=st.floats(0.05, 1.0), phi=st.floats(0.01, math.pi - 0.01))
    def test_round_trip(self, t1, t2, t, phi):
        # acos conditioning quantizes recoverable phases near the endpoints
        # (~1.5e-8 granularity at phi = 0), hence the bounded draw; the
        # endpoints themselves are exact and tested above.
        cfg = EVConfig(t1, t2)
        sample = ObjectSample(t, phi)
        triple = measure(cfg, sample)
        assert invert_phase(triple.p_ifm, sample.p_norm, cfg) == pytest.approx(phi, abs=1e-9)

    def test_round_trip_endpoints(self):
        # acos quantization near |cos| = 1 bounds endpoint recovery at
        # sqrt(2 * eps) ~ 2e-8 even for exact inputs
        for phi in (0.0, math.pi):
            triple = measure(WIRE_CFG, ObjectSample(0.7, phi))
            rec = invert_phase(triple.p_ifm, 0.49, WIRE_CFG)
            assert rec == pytest.approx(phi, abs=1e-7)


class TestEfficiency:
    def test_balanced_third(self):
        assert efficiency(ProbabilityTriple(0.25, 0.5, 0.25)) == pytest.approx(1 / 3, abs=1e-15)

    def test_wire_experiment_value(self):
        assert efficiency(ProbabilityTriple(0.2426, 0.46, 0.2974)) == pytest.approx(0.345, abs=1e-3)
        assert efficiency(ProbabilityTriple(0.2426, 0.46, 0.2974)) == pytest.approx(0.34, abs=0.01)

    def test_saturated(self):
        assert efficiency(ProbabilityTriple(1.0, 0.0, 0.0)) == 1.0

    def test_undefined(self):
        with pytest.raises(UndefinedEfficiencyError):
            efficiency(ProbabilityTriple(0.0, 0.0, 1.0))

    def test_ideal_values(self):
        assert efficiency_ideal(0.5) == pytest.approx(1 / 3, abs=1e-15)
        assert efficiency_ideal(1e-9) == pytest.approx(0.5, abs=1e-8)
        assert efficiency_ideal(0.9) == pytest.approx(1 / 11, abs=1e-15)
        with pytest.raises(DomainError):
            efficiency_ideal(0.0)

    def test_sweep_shape_and_ideal_match(self):
        rs = np.linspace(0.02, 0.98, 49)
        p = [measure(EVConfig(1 - r, r), ObjectSample(0.0)).p_ifm for r in rs]
        assert np.allclose(p, rs * (1 - rs), atol=1e-12)
        assert max(p) == pytest.approx(0.25, abs=1e-12)
        assert rs[int(np.argmax(p))] == pytest.approx(0.5, abs=0.011)
        for r in rs:
            triple = measure(EVConfig(1 - r, r), ObjectSample(0.0))
            assert efficiency(triple) == pytest.approx(efficiency_ideal(r), abs=1e-13)

    def test_crosstalk_breakdown_shape(self):
        # with cross-talk the efficiency peaks at moderate R and collapses
        # as R -> 0 instead of approaching 1/2
        def eta(r):
            triple = measure(EVConfig(1 - r, r, crosstalk_eps=0.01), ObjectSample(0.0))
            return efficiency(triple)

        assert eta(0.01) < eta(0.10)
        rs = np.linspace(0.002, 0.9, 200)
        etas = [eta(r) for r in rs]
        peak = int(np.argmax(etas))
        assert 0 < peak < len(rs) - 1
        assert all(b <= a + 1e-12 for a, b in zip(etas[peak:], etas[peak + 1:]))
        assert all(b >= a - 1e-12 for a, b in zip(etas[:peak], etas[1:peak + 1]))


class TestNoiseFloor:
    def test_floor_value(self):
        cfg = EVConfig(0.5, 0.5, visibility=0.933)
        assert cfg.noise_floor == pytest.approx(0.0347, abs=1e-4)
        assert apply_noise_floor(0.0, cfg) == pytest.approx(0.035, abs=5e-4)

    def test_perfect_visibility_identity(self):
        cfg = EVConfig(0.5, 0.5, visibility=1.0)
        assert apply_noise_floor(0.37, cfg) == 0.37

    def test_saturation(self):
        cfg = EVConfig(0.5, 0.5, visibility=0.7)
        assert apply_noise_floor(1.0, cfg) == pytest.approx(1.0, abs=1e-15)

    @given(p=st.floats(0.0, 1.0), v=st.floats(0.05, 1.0))
    def test_monotone_and_invertible(self, p, v):
        cfg = EVConfig(0.5, 0.5, visibility=v)
        out = apply_noise_floor(p, cfg)
        assert out >= p - 1e-15
        assert invert_noise_floor(out, cfg) == pytest.approx(p, abs=1e-9)


class TestDarkPortCondition:
    def test_balanced(self):
        assert dark_port_condition(EVConfig(0.5, 0.5))

    def test_wire_config_slightly_off(self):
        assert not dark_port_condition(WIRE_CFG)
        leak = measure(WIRE_CFG, ObjectSample(1.0, 0.0)).p_ifm
        assert leak == pytest.approx(1.7e-4, abs=2e-5)

    def test_complementary(self):
        assert dark_port_condition(EVConfig(0.3, 0.7))


class TestJonesEquivalence:
    @given(t=st.floats(0.0, 1.0), phi=st.floats(0.0, 2 * math.pi))
    def test_pipeline_matches_closed_form_at_balance(self, t, phi):
        state = object_operator(t, phi).apply(linear_polarized(math.pi / 4))
        amp = analyzer_project(state, math.pi / 4)
        triple = measure(BALANCED, ObjectSample(t, phi))
        assert abs(amp) ** 2 == pytest.approx(triple.p_ifm, abs=1e-12)


class TestValidation:
    def test_config_bounds(self):
        with pytest.raises(DomainError):
            EVConfig(1.2, 0.5)
        with pytest.raises(DomainError):
            EVConfig(0.5, 0.5, visibility=0.0)
        with pytest.raises(DomainError):
            EVConfig(0.5, 0.5, crosstalk_eps=0.6)

    def test_sample_bounds(self):
        with pytest.raises(DomainError):
            ObjectSample(t=1.01)
        with pytest.raises(DomainError):
            ObjectSample(t=0.5, phi=math.inf)
