import numpy as np
import pytest
from hypothesis import given, strategies as st

from pawpcn import model
from pawpcn.model import (EhParams, Scenario, SystemConfig, channel_state,
                          harvested_power, noma_rates, noma_sum_rate,
                          pa_channel, tdma_rates)


def make_scenario(pa_x, devices, eh=EhParams(), pc=0.0):
    k = len(devices)
    return Scenario(pa_positions_m=tuple(pa_x),
                    device_positions_m=tuple(devices),
                    eh=(eh,) * k,
                    circuit_power_w=(pc,) * k)


class TestPaChannel:
    def test_delta_zero_kills_channel(self):
        cfg = SystemConfig(delta=0.0)
        sc = make_scenario([1.0, 2.0], [(3.0, 1.0)])
        assert pa_channel(1, sc, cfg, 1) == 0j
        assert pa_channel(2, sc, cfg, 1) == 0j

    def test_single_pa_at_feed_over_device(self):
        # PA at the feed, device right below: no guide loss or guide phase
        cfg = SystemConfig(delta=0.6, mu_db_per_m=5.0, waveguide_height_m=3.0)
        sc = make_scenario([0.0], [(0.0, 0.0)])
        h = pa_channel(1, sc, cfg, 1)
        expected_mag = cfg.eta_sqrt * 0.6 / 3.0
        assert abs(h) == pytest.approx(expected_mag, rel=1e-12)
        assert expected_mag == pytest.approx(1.7048e-4, rel=1e-3)
        expected_phase = (-2 * np.pi * 3.0 / cfg.wavelength_m) % (2 * np.pi)
        assert np.angle(h) % (2 * np.pi) == pytest.approx(expected_phase, abs=1e-9)

    def test_second_pa_power_fraction(self):
        # beta_2 = delta^2 (1 - delta^2) = 0.2304 for delta = 0.6
        beta = model.beta_fractions(2, 0.6)
        assert beta[1] == pytest.approx(0.36 * 0.64, rel=1e-15)
        assert np.sqrt(beta[1]) == pytest.approx(0.48, rel=1e-12)

    def test_degenerate_geometry_raises(self):
        cfg = SystemConfig(waveguide_height_m=3.0)
        sc = Scenario(pa_positions_m=(1.0,), device_positions_m=((1.0, 0.0),),
                      eh=(EhParams(),), circuit_power_w=(0.0,))
        # a device cannot physically sit at antenna height, force it
        object.__setattr__(sc, "device_positions_m", ((1.0, 0.0),))
        import dataclasses
        cfg0 = dataclasses.replace(cfg, waveguide_height_m=1e-300)
        with pytest.raises(model.DegenerateGeometryError):
            pa_channel(1, sc, cfg0, 1)

    def test_index_bounds(self):
        cfg = SystemConfig()
        sc = make_scenario([1.0], [(2.0, 1.0)])
        with pytest.raises(IndexError):
            pa_channel(2, sc, cfg, 1)
        with pytest.raises(IndexError):
            pa_channel(1, sc, cfg, 2)


class TestChannelState:
    def test_single_pa_aggregate(self):
        cfg = SystemConfig()
        sc = make_scenario([2.0], [(1.0, 0.5), (4.0, -2.0)])
        cs = channel_state(sc, cfg)
        np.testing.assert_allclose(cs.aggregate, cs.per_pa[0])
        np.testing.assert_allclose(cs.gain, np.abs(cs.aggregate) ** 2)

    def test_aggregate_is_sum_of_rows(self):
        cfg = SystemConfig()
        sc = make_scenario([1.0, 3.0, 5.0], [(2.0, 1.0), (7.0, -1.5)])
        cs = channel_state(sc, cfg)
        np.testing.assert_allclose(cs.aggregate, cs.per_pa.sum(axis=0),
                                   rtol=1e-15)

    def test_coherent_sum_of_equal_amplitude_paths(self):
        # mirror-symmetric PAs about a centered feed, device in the middle,
        # mu = 0: channels differ only through beta_n
        cfg = SystemConfig(mu_db_per_m=0.0, feed_x_m=5.0)
        sc = make_scenario([5.0 - 0.3, 5.0 + 0.3], [(5.0, 1.0)])
        cs = channel_state(sc, cfg)
        base = cs.per_pa[0, 0] / np.sqrt(model.beta_fractions(2, cfg.delta)[0])
        b1, b2 = model.beta_fractions(2, cfg.delta)
        expected = (np.sqrt(b1) + np.sqrt(b2)) ** 2 * abs(base) ** 2
        assert cs.gain[0] == pytest.approx(expected, rel=1e-12)

    def test_triangle_inequality_on_gain(self):
        cfg = SystemConfig()
        rng = np.random.default_rng(3)
        from pawpcn.placement import repair
        for _ in range(20):
            xs = repair(np.sort(rng.uniform(0, 10, 4)), cfg.waveguide_span_m,
                        cfg.min_spacing_m)
            devices = [(rng.uniform(0, 10), rng.uniform(-3, 3)) for _ in range(5)]
            cs = channel_state(make_scenario(list(xs), devices), cfg)
            upper = np.abs(cs.per_pa).sum(axis=0) ** 2
            assert np.all(cs.gain <= upper * (1 + 1e-12))

    def test_beta_telescoping(self):
        for delta in (0.1, 0.3, 0.6, 0.9):
            for n in (1, 3, 6, 12):
                total = model.beta_fractions(n, delta).sum()
                assert total == pytest.approx(1 - (1 - delta ** 2) ** n, rel=1e-12)
                assert total < 1.0

    def test_moving_one_pa_changes_only_its_row(self):
        cfg = SystemConfig()
        devices = [(2.0, 1.0), (6.0, -2.0), (9.0, 0.5)]
        sc_a = make_scenario([1.0, 4.0, 8.0], devices)
        sc_b = make_scenario([1.0, 4.7, 8.0], devices)
        cs_a = channel_state(sc_a, cfg)
        cs_b = channel_state(sc_b, cfg)
        np.testing.assert_array_equal(cs_a.per_pa[0], cs_b.per_pa[0])
        np.testing.assert_array_equal(cs_a.per_pa[2], cs_b.per_pa[2])
        assert np.all(cs_a.per_pa[1] != cs_b.per_pa[1])
        # incremental update of the aggregate matches a full recompute
        incremental = cs_a.aggregate - cs_a.per_pa[1] + cs_b.per_pa[1]
        np.testing.assert_allclose(incremental, cs_b.aggregate, rtol=1e-12)


class TestHarvestedPower:
    EH = EhParams(a=150.0, b=0.014, z=0.024)

    def test_zero_input_zero_output(self):
        assert harvested_power(0.0, self.EH) == 0.0

    def test_saturation(self):
        assert harvested_power(10.0, self.EH) == pytest.approx(0.024, rel=1e-6)

    def test_spot_value_at_b(self):
        # omega = 1/(1+e^2.1), psi = z/2, phi = (psi - z*omega)/(1-omega)
        assert harvested_power(0.014, self.EH) == pytest.approx(0.010531, abs=1e-6)

    def test_bounded_and_monotone(self):
        p = np.linspace(0.0, 0.2, 1000)
        phi = harvested_power(p, self.EH)
        assert np.all(phi >= 0.0)
        assert np.all(phi <= self.EH.z)
        assert np.all(np.diff(phi) >= 0.0)

    @given(st.floats(min_value=1e-9, max_value=0.05),
           st.floats(min_value=1e-9, max_value=0.05))
    def test_strictly_increasing(self, p1, p2):
        # below hard float saturation of the sigmoid
        lo, hi = sorted((p1, p2))
        if hi - lo < 1e-9:
            return
        assert harvested_power(hi, self.EH) > harvested_power(lo, self.EH)

    def test_negative_input_rejected(self):
        with pytest.raises(ValueError):
            harvested_power(-1e-9, self.EH)


class _Tdma:
    def __init__(self, t, p):
        self.t = np.asarray(t, float)
        self.p = np.asarray(p, float)


class _Noma:
    def __init__(self, t1, p):
        self.t1 = t1
        self.p = np.asarray(p, float)


class TestRates:
    def test_tdma_zero_slot(self):
        r = tdma_rates(_Tdma([0.0], [5.0]), np.array([1.0]), 1.0)
        assert r[0] == 0.0

    def test_tdma_unit_snr(self):
        r = tdma_rates(_Tdma([1.0], [1.0]), np.array([1.0]), 1.0)
        assert r[0] == pytest.approx(1.0, rel=1e-15)

    def test_tdma_half_slot_snr3(self):
        r = tdma_rates(_Tdma([0.5], [3.0]), np.array([1.0]), 1.0)
        assert r[0] == pytest.approx(1.0, rel=1e-15)

    def test_noma_single_device_reduces_to_tdma(self):
        gains = np.array([2.5])
        rn = noma_rates(_Noma(0.7, [1.3]), gains, 1.0, [0])
        rt = tdma_rates(_Tdma([0.7], [1.3]), gains, 1.0)
        assert rn[0] == pytest.approx(rt[0], rel=1e-15)

    def test_noma_zero_powers(self):
        r = noma_rates(_Noma(0.5, [0.0, 0.0]), np.array([1.0, 2.0]), 1.0, [0, 1])
        assert np.all(r == 0.0)

    def test_noma_two_equal_receptions(self):
        # both devices received at the noise level: rates log2(1.5), log2(2)
        alloc = _Noma(1.0, [1.0, 1.0])
        gains = np.array([1.0, 1.0])
        r = noma_rates(alloc, gains, 1.0, [0, 1])
        assert r[0] == pytest.approx(np.log2(1.5), rel=1e-12)
        assert r[1] == pytest.approx(1.0, rel=1e-12)
        assert r.sum() == pytest.approx(np.log2(3.0), rel=1e-12)
        assert noma_sum_rate(alloc, gains, 1.0) == pytest.approx(np.log2(3.0),
                                                                 rel=1e-12)

    def test_noma_order_invariance_k4(self):
        from itertools import permutations
        rng = np.random.default_rng(11)
        gains = rng.uniform(0.1, 3.0, 4)
        alloc = _Noma(0.6, rng.uniform(0.0, 2.0, 4))
        closed = noma_sum_rate(alloc, gains, 1.0)
        sums = [noma_rates(alloc, gains, 1.0, list(order)).sum()
                for order in permutations(range(4))]
        np.testing.assert_allclose(sums, closed, rtol=1e-12)

    def test_noma_rejects_non_permutation(self):
        with pytest.raises(ValueError):
            noma_rates(_Noma(1.0, [1.0, 1.0]), np.array([1.0, 1.0]), 1.0, [0, 0])


class TestTypes:
    def test_config_validation(self):
        with pytest.raises(ValueError):
            SystemConfig(delta=1.5)
        with pytest.raises(ValueError):
            SystemConfig(hap_power_w=0.0)
        with pytest.raises(ValueError):
            SystemConfig(mu_db_per_m=-0.1)

    def test_default_spacing_is_half_wavelength(self):
        cfg = SystemConfig()
        assert cfg.min_spacing_m == pytest.approx(cfg.wavelength_m / 2)

    def test_eh_validation(self):
        with pytest.raises(ValueError):
            EhParams(a=-1.0)

    def test_scenario_geometry_validation(self):
        cfg = SystemConfig()
        sc = make_scenario([0.0, 0.001], [(1.0, 1.0)])  # spacing < lambda/2
        with pytest.raises(ValueError):
            sc.validate_geometry(cfg)
        sc2 = make_scenario([0.0, 11.0], [(1.0, 1.0)])  # beyond the span
        with pytest.raises(ValueError):
            sc2.validate_geometry(cfg)

    def test_dbm_round_trip(self):
        assert model.dbm_to_watts(40.0) == pytest.approx(10.0, rel=1e-12)
        assert model.watts_to_dbm(1e-15) == pytest.approx(-120.0, abs=1e-9)
