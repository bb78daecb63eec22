import math

import numpy as np
import pytest

from zfdmt.channel import (
    RateSchedule,
    equivalent_channel,
    estimate_array_gain,
    make_config,
    read_manifest,
    secrecy_rate,
    write_manifest,
)
from zfdmt.errors import ConfigError
from zfdmt.matrix_kernel import sample_complex_gaussian
from zfdmt.rng import sample_standard_complex

from conftest import batched_null_space


class TestConfig:
    def test_four_two_one(self):
        cfg = make_config(4, 2, 1)
        assert (cfg.m, cfg.k) == (2, 3)
        assert cfg.n_streams == 3
        assert cfg.zf_feasible

    def test_three_two_one(self):
        cfg = make_config(3, 2, 1)
        assert (cfg.m, cfg.k) == (2, 2)
        assert cfg.zf_feasible

    def test_infeasible(self):
        assert not make_config(2, 2, 2).zf_feasible

    @pytest.mark.parametrize("triple", [(0, 1, 1), (1, 0, 1), (17, 2, 1), (4, 2, -1)])
    def test_validation(self, triple):
        with pytest.raises(ConfigError):
            make_config(*triple)


class TestArrayGain:
    def test_symmetric_single_antenna(self):
        # E[(X - Y)^+] = 1/2 for i.i.d. unit-mean exponentials
        est = estimate_array_gain(make_config(1, 1, 1), 1_000_000, seed=21)
        assert abs(est.value - 0.5) <= 0.01

    def test_no_eavesdropper(self):
        est = estimate_array_gain(make_config(1, 1, 0), 1_000_000, seed=22)
        assert abs(est.value - 1.0) <= 0.01

    def test_seed_consistency(self):
        cfg = make_config(4, 2, 1)
        a = estimate_array_gain(cfg, 200_000, seed=1)
        b = estimate_array_gain(cfg, 200_000, seed=2)
        assert abs(a.value - b.value) <= 3.0 * math.hypot(a.std_err, b.std_err)

    def test_deterministic(self):
        cfg = make_config(3, 2, 1)
        a = estimate_array_gain(cfg, 50_000, seed=5)
        b = estimate_array_gain(cfg, 50_000, seed=5)
        assert a == b

    def test_monotone_in_transmit_antennas(self):
        values = []
        for n_t in (2, 3, 4):
            est = estimate_array_gain(make_config(n_t, 2, 1), 100_000, seed=30 + n_t)
            values.append((est.value, est.std_err))
        for (lo, se_lo), (hi, se_hi) in zip(values, values[1:]):
            assert hi - lo >= -3.0 * math.hypot(se_lo, se_hi)


class TestSecrecyRate:
    def test_zero_multiplexing(self):
        assert secrecy_rate(RateSchedule(r_s=0.0, g=2.0), 5.0) == 0.0

    def test_unit_point(self):
        assert secrecy_rate(RateSchedule(r_s=1.0, g=1.0), math.e - 1.0) == pytest.approx(
            1.0, rel=1e-15
        )

    def test_hand_value(self):
        assert secrecy_rate(RateSchedule(r_s=0.5, g=2.0), 4.0) == pytest.approx(
            0.5 * math.log(9.0), rel=1e-15
        )

    def test_increasing_in_snr(self):
        sched = RateSchedule(r_s=0.7, g=3.0)
        vals = [secrecy_rate(sched, e) for e in np.linspace(0.1, 50, 30)]
        assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_schedule_validation(self):
        with pytest.raises(ValueError):
            RateSchedule(r_s=-0.1, g=1.0)
        with pytest.raises(ValueError):
            RateSchedule(r_s=0.5, g=0.0)
        with pytest.raises(ValueError):
            secrecy_rate(RateSchedule(r_s=0.5, g=1.0), 0.0)


class TestEquivalentChannel:
    def test_no_eavesdropper_is_identity(self):
        rng = np.random.default_rng(3)
        h_m = sample_complex_gaussian(2, 3, rng)
        assert np.array_equal(equivalent_channel(h_m, None), h_m)
        assert np.array_equal(equivalent_channel(h_m, np.zeros((0, 3))), h_m)

    def test_shape(self):
        rng = np.random.default_rng(4)
        h_m = sample_complex_gaussian(2, 4, rng)
        h_e = sample_complex_gaussian(1, 4, rng)
        assert equivalent_channel(h_m, h_e).shape == (2, 3)

    def test_entry_statistics(self):
        rng = np.random.default_rng(5)
        trials = 1_000_000
        acc, count = 0.0, 0
        for start in range(0, trials, 65536):
            n = min(65536, trials - start)
            h_m = sample_standard_complex(rng, (n, 2, 4))
            h_e = sample_standard_complex(rng, (n, 1, 4))
            h_eq = h_m @ batched_null_space(h_e)
            acc += float(np.sum(np.abs(h_eq) ** 2))
            count += h_eq.size
        assert abs(acc / count - 1.0) <= 0.01

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            equivalent_channel(np.eye(2, 3), np.eye(1, 4))


class TestManifest:
    def test_roundtrip(self, tmp_path):
        cfg = make_config(4, 2, 1)
        gain = estimate_array_gain(cfg, 50_000, seed=6)
        path = tmp_path / "manifest.txt"
        write_manifest(path, cfg, gain)
        cfg2, gain2 = read_manifest(path)
        assert cfg2 == cfg
        assert gain2 == gain

    def test_format(self, tmp_path):
        cfg = make_config(3, 2, 1)
        gain = estimate_array_gain(cfg, 50_000, seed=7)
        path = tmp_path / "manifest.txt"
        write_manifest(path, cfg, gain)
        keys = [line.split("=")[0].strip() for line in path.read_text().splitlines()]
        assert keys == ["n_t", "n_m", "n_e", "g", "g_std_err", "g_trials", "seed"]
