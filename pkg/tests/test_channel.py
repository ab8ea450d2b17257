"""Channel/detector arithmetic tests and mode-mismatch table handling."""

import math

import numpy as np
import pytest

from hdrrdps import (
    DomainError,
    EmisTableError,
    NoiseModel,
    ProtocolParams,
    detection_yield,
    load_emis_table,
    qber,
    rate_curve,
    sift_probability,
    transmission,
)


def yield_reference(L, d, eta, p_d):
    """Independent evaluation of the acceptance-model yield."""
    capture = (d / L) * eta
    return (1 - p_d) ** (d - 1) * (capture + (1 - capture) * d * p_d)


class TestTransmission:
    @pytest.mark.parametrize("loss,eta", [(0.0, 1.0), (10.0, 0.1), (30.0, 0.001)])
    def test_values(self, loss, eta):
        assert transmission(loss) == pytest.approx(eta, rel=1e-14)

    def test_negative_rejected(self):
        with pytest.raises(DomainError):
            transmission(-0.5)


class TestNoiseModel:
    @pytest.mark.parametrize("loss,pd,emis", [(-1, 0, 0), (0, 1.0, 0), (0, 0, 1.0), (0, -1e-9, 0)])
    def test_validation(self, loss, pd, emis):
        with pytest.raises(DomainError):
            NoiseModel(loss, pd, emis)


class TestYield:
    def test_lossless_ideal_detectors(self):
        assert detection_yield(ProtocolParams(8, 3), NoiseModel(0.0, 0.0, 0.0)) == 3 / 8

    def test_dark_count_floor_at_high_loss(self):
        p_d = 1e-4
        value = detection_yield(ProtocolParams(8, 3), NoiseModel(600.0, p_d, 0.0))
        assert value == pytest.approx((1 - p_d) ** 2 * 3 * p_d, rel=1e-9)

    def test_fig5_parameter_point(self):
        value = detection_yield(ProtocolParams(16, 4), NoiseModel(0.0, 1e-4, 0.05))
        assert value == pytest.approx(yield_reference(16, 4, 1.0, 1e-4), rel=1e-14)
        assert value == pytest.approx(0.25, abs=1e-3)

    def test_monotone_in_loss(self):
        p = ProtocolParams(16, 4)
        values = [
            detection_yield(p, NoiseModel(loss, 1e-4, 0.05)) for loss in np.linspace(0, 60, 61)
        ]
        assert all(b <= a for a, b in zip(values, values[1:]))


class TestQber:
    def test_no_dark_counts_gives_emis(self):
        assert qber(ProtocolParams(16, 4), NoiseModel(10.0, 0.0, 0.05)) == pytest.approx(
            0.05, rel=1e-12
        )

    def test_dark_dominated_limit_is_one(self):
        assert qber(ProtocolParams(16, 4), NoiseModel(600.0, 1e-4, 0.0)) == pytest.approx(
            1.0, abs=1e-9
        )

    def test_dark_only_errors_at_zero_loss(self):
        value = qber(ProtocolParams(16, 4), NoiseModel(0.0, 1e-4, 0.0))
        assert 0.0 < value < 1e-2

    def test_error_weight_identity(self):
        # qber * yield expands exactly to the (d/L) eta e_mis + dark term form.
        rng = np.random.default_rng(0)
        for _ in range(200):
            L = int(rng.integers(3, 65))
            d = int(rng.integers(2, min(L, 8)))
            loss = float(rng.random() * 60)
            p_d = float(rng.random() * 1e-2)
            e_mis = float(rng.random() * 0.3)
            p = ProtocolParams(L, d)
            noise = NoiseModel(loss, p_d, e_mis)
            eta = transmission(loss)
            capture = (d / L) * eta
            expected = (1 - p_d) ** (d - 1) * (capture * e_mis + (1 - capture) * d * p_d)
            assert qber(p, noise) * detection_yield(p, noise) == pytest.approx(
                expected, rel=1e-12, abs=1e-300
            )

    def test_monotone_in_loss(self):
        p = ProtocolParams(8, 2)
        values = [qber(p, NoiseModel(loss, 1e-4, 0.05)) for loss in np.linspace(0, 60, 61)]
        assert all(b >= a for a, b in zip(values, values[1:]))


class TestRateCurve:
    def test_grid_size_and_order(self):
        grid = [i * 0.5 for i in range(121)]
        points = rate_curve(ProtocolParams(16, 4), NoiseModel(0, 1e-4, 0.05), grid, True)
        assert len(points) == 121
        assert [p.loss_db for p in points] == grid

    def test_non_increasing_and_hits_zero(self):
        grid = [float(x) for x in range(0, 61)]
        for monitored in (False, True):
            points = rate_curve(ProtocolParams(16, 4), NoiseModel(0, 1e-4, 0.05), grid, monitored)
            rates = [p.rate_per_sifted for p in points]
            assert all(b <= a + 1e-12 for a, b in zip(rates, rates[1:]))
            assert rates[-1] == 0.0

    def test_packet_rate_composition(self):
        grid = [0.0, 20.0]
        points = rate_curve(ProtocolParams(8, 3), NoiseModel(0, 1e-4, 0.05), grid, True)
        for p in points:
            assert p.rate_per_packet == pytest.approx(
                sift_probability(3) * p.Y * p.rate_per_sifted, rel=1e-14
            )
            assert p.eta == pytest.approx(transmission(p.loss_db), rel=1e-14)

    def test_domain_overrun_total_clamp(self):
        points = rate_curve(ProtocolParams(16, 4), NoiseModel(0, 1e-4, 0.05), [60.0], True)
        assert points[0].domain_overrun
        assert points[0].rate_per_sifted == 0.0
        assert points[0].rate_per_packet == 0.0

    def test_zero_noise_monitored_rate_is_log2d(self):
        points = rate_curve(ProtocolParams(16, 4), NoiseModel(0, 0.0, 0.0), [0.0], True)
        assert points[0].rate_per_sifted == math.log2(4)

    def test_unsorted_grid_rejected(self):
        with pytest.raises(DomainError):
            rate_curve(ProtocolParams(8, 3), NoiseModel(0, 0, 0), [1.0, 0.5], True)


class TestEmisTable:
    def write(self, tmp_path, text):
        path = tmp_path / "emis.csv"
        path.write_text(text, encoding="utf-8")
        return path

    def test_round_trip(self, tmp_path):
        path = self.write(
            tmp_path,
            "# measured mode mismatch\nL,d,e_mis\n8,2,0.03\n8,4,0.05\n16,4,0.08\n",
        )
        table = load_emis_table(path)
        assert table.lookup(8, 2) == 0.03
        assert table.lookup(16, 4) == 0.08

    def test_missing_pair_names_it(self, tmp_path):
        table = load_emis_table(self.write(tmp_path, "L,d,e_mis\n8,2,0.03\n"))
        with pytest.raises(EmisTableError, match=r"L=16, d=4"):
            table.lookup(16, 4)

    def test_duplicate_names_line(self, tmp_path):
        path = self.write(tmp_path, "L,d,e_mis\n8,2,0.03\n8,2,0.04\n")
        with pytest.raises(EmisTableError, match=":3:"):
            load_emis_table(path)

    def test_out_of_range_value(self, tmp_path):
        with pytest.raises(EmisTableError, match=":2:"):
            load_emis_table(self.write(tmp_path, "L,d,e_mis\n8,2,1.2\n"))

    def test_invalid_dimensions(self, tmp_path):
        with pytest.raises(EmisTableError, match="2 <= d < L"):
            load_emis_table(self.write(tmp_path, "L,d,e_mis\n4,4,0.1\n"))

    def test_malformed_row_and_header(self, tmp_path):
        with pytest.raises(EmisTableError, match="3 fields"):
            load_emis_table(self.write(tmp_path, "L,d,e_mis\n8,2\n"))
        with pytest.raises(EmisTableError, match="header"):
            load_emis_table(self.write(tmp_path, "a,b,c\n8,2,0.5\n"))
        with pytest.raises(EmisTableError, match="empty"):
            load_emis_table(self.write(tmp_path, "# nothing\n"))
