"""Domain types, unit conversion, and config round-trips."""

import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ofdmphase import (
    ConstellationFrame,
    FiberLink,
    LaserSpec,
    OfdmGrid,
    QpskSymbol,
    SystemKind,
    SystemParams,
    capacity_gbit,
    parse_system_config,
    render_system_config,
)
from ofdmphase.core import SPEED_OF_LIGHT
from ofdmphase.errors import (
    BadUnit,
    DimensionMismatch,
    IndexOutOfRange,
    MissingKey,
    RangeViolation,
    UnknownKey,
)

BASE_CONFIG = """
# reference ten-channel system
channels = 10
symbol_time_ps = 100
linewidth_tx_hz = 1e6
linewidth_lo_hz = 1e6
dispersion_ps_nm_km = 16
length_km = 1000
wavelength_nm = 1550
"""


def base_params(**overrides):
    params = parse_system_config(BASE_CONFIG)
    if overrides:
        params = dataclasses.replace(params, **overrides)
    return params


class TestQpskSymbol:
    def test_constellation_points(self):
        assert [QpskSymbol(i).value for i in range(4)] == [1, 1j, -1, -1j]

    def test_unit_modulus(self):
        for i in range(4):
            assert abs(QpskSymbol(i).value) == 1.0

    @pytest.mark.parametrize("bad", [-1, 4, 7, 1.0, "2"])
    def test_rejects_bad_index(self, bad):
        with pytest.raises(IndexOutOfRange):
            QpskSymbol(bad)


class TestConstellationFrame:
    def test_base4_encoding_channel0_rightmost(self):
        frame = ConstellationFrame.from_base4("3210")
        assert list(frame.digits()) == [0, 1, 2, 3]
        assert frame.to_base4() == "3210"
        assert frame.symbols[0] == QpskSymbol(0)

    def test_index_packs_two_bits_per_channel(self):
        frame = ConstellationFrame.from_digits([3, 2, 1])
        assert frame.index == 3 + (2 << 2) + (1 << 4)
        assert ConstellationFrame.from_index(frame.index, 3) == frame

    @given(st.integers(min_value=1, max_value=8), st.data())
    def test_index_round_trip(self, n, data):
        value = data.draw(st.integers(min_value=0, max_value=4 ** n - 1))
        frame = ConstellationFrame.from_index(value, n)
        assert frame.index == value
        assert ConstellationFrame.from_base4(frame.to_base4()) == frame

    def test_uniform(self):
        frame = ConstellationFrame.uniform(4, index=2)
        assert frame.to_base4() == "2222"
        assert len(frame) == 4

    def test_values_match_symbols(self):
        frame = ConstellationFrame.from_digits([0, 1, 2, 3])
        assert np.array_equal(frame.values(), [1, 1j, -1, -1j])

    def test_rejects_empty_and_bad_text(self):
        with pytest.raises(DimensionMismatch):
            ConstellationFrame(())
        with pytest.raises(DimensionMismatch):
            ConstellationFrame.from_base4("01a")
        with pytest.raises(DimensionMismatch):
            ConstellationFrame.from_base4("")
        with pytest.raises(IndexOutOfRange):
            ConstellationFrame.from_index(16, 2)
        with pytest.raises(IndexOutOfRange):
            ConstellationFrame.from_digits([4, 0])


class TestOfdmGrid:
    def test_spacing_defaults_to_inverse_symbol_time(self):
        grid = OfdmGrid(10, 1e-10)
        assert grid.channel_spacing == 1e10
        assert not grid.non_orthogonal

    def test_flags_non_orthogonal_grid(self):
        # 25 GS/s on a 10 GHz grid: spacing * T = 0.4
        grid = OfdmGrid(10, 4e-11, 1e10)
        assert grid.non_orthogonal

    def test_orthogonal_within_tolerance(self):
        grid = OfdmGrid(10, 1e-10, 1e10 * (1 + 1e-12))
        assert not grid.non_orthogonal

    @pytest.mark.parametrize("kwargs", [
        dict(n_channels=0, symbol_time=1e-10),
        dict(n_channels=-3, symbol_time=1e-10),
        dict(n_channels=2.0, symbol_time=1e-10),
        dict(n_channels=2, symbol_time=0.0),
        dict(n_channels=2, symbol_time=-1e-10),
        dict(n_channels=2, symbol_time=math.inf),
        dict(n_channels=2, symbol_time=1e-10, channel_spacing=0.0),
        dict(n_channels=2, symbol_time=1e-10, channel_spacing=-1e9),
    ])
    def test_rejects_bad_grid(self, kwargs):
        with pytest.raises(RangeViolation):
            OfdmGrid(**kwargs)

    def test_immutable(self):
        grid = OfdmGrid(2, 1e-10)
        with pytest.raises(dataclasses.FrozenInstanceError):
            grid.n_channels = 3


class TestValidation:
    def test_laser_linewidths_non_negative(self):
        LaserSpec(0.0, 0.0)
        with pytest.raises(RangeViolation):
            LaserSpec(-1.0, 1e6)
        with pytest.raises(RangeViolation):
            LaserSpec(1e6, math.nan)

    def test_fiber_ranges(self):
        FiberLink(0.0, 0.0, 1.55e-6)
        with pytest.raises(RangeViolation):
            FiberLink(-1e-6, 1e5, 1.55e-6)
        with pytest.raises(RangeViolation):
            FiberLink(1.6e-5, -1.0, 1.55e-6)
        with pytest.raises(RangeViolation):
            FiberLink(1.6e-5, 1e5, 0.0)

    def test_light_speed_is_the_round_convention(self):
        assert SPEED_OF_LIGHT == 3.0e8


class TestEffectiveSymbolTime:
    def test_ofdm_uses_frame_time(self):
        assert base_params().effective_symbol_time == 1e-10

    def test_single_qpsk_divides_by_channel_count(self):
        params = base_params(kind=SystemKind.SINGLE_QPSK)
        assert params.effective_symbol_time == 1e-10 / 10
        assert params.effective_symbol_time == pytest.approx(1e-11, rel=1e-15)


class TestCapacity:
    def test_reference_rates(self):
        assert capacity_gbit(base_params()) == 400.0
        fast = dataclasses.replace(
            base_params(), grid=OfdmGrid(10, 4e-11, 1e10))
        assert capacity_gbit(fast) == 1000.0
        single = SystemParams(
            grid=OfdmGrid(1, 1e-11),
            lasers=LaserSpec(1e6, 1e6),
            fiber=FiberLink(1.6e-5, 1e6, 1.55e-6),
            kind=SystemKind.SINGLE_QPSK)
        assert capacity_gbit(single) == 400.0

    @given(st.integers(min_value=1, max_value=64),
           st.floats(min_value=1e-12, max_value=1e-8))
    def test_linear_in_channels_and_rate(self, n, symbol_time):
        one = SystemParams(grid=OfdmGrid(1, symbol_time),
                           lasers=LaserSpec(1e6, 1e6),
                           fiber=FiberLink(1.6e-5, 1e5, 1.55e-6))
        many = dataclasses.replace(one, grid=OfdmGrid(n, symbol_time))
        assert capacity_gbit(many) == pytest.approx(n * capacity_gbit(one),
                                                    rel=1e-12)


class TestParseConfig:
    def test_si_conversion_is_exact(self):
        params = parse_system_config(BASE_CONFIG)
        assert params.grid.n_channels == 10
        assert params.grid.symbol_time == 1e-10
        assert params.grid.channel_spacing == 1e10
        assert params.lasers.linewidth_tx == 1e6
        assert params.lasers.linewidth_lo == 1e6
        assert params.fiber.dispersion == 1.6e-5
        assert params.fiber.length == 1e6
        assert params.fiber.wavelength == 1.55e-6
        assert params.kind is SystemKind.OFDM_WORST_CASE

    def test_explicit_spacing_and_kind(self):
        text = BASE_CONFIG + "channel_spacing_ghz = 10\nsystem_kind = single_qpsk\n"
        params = parse_system_config(text)
        assert params.grid.channel_spacing == 1e10
        assert params.kind is SystemKind.SINGLE_QPSK

    def test_non_orthogonal_config_parses_with_flag(self):
        text = BASE_CONFIG.replace("symbol_time_ps = 100", "symbol_time_ps = 40")
        text += "channel_spacing_ghz = 10\n"
        params = parse_system_config(text)
        assert params.grid.non_orthogonal

    def test_duplicate_key_last_wins(self):
        params = parse_system_config(BASE_CONFIG + "length_km = 2000\n")
        assert params.fiber.length == 2e6

    def test_comments_and_blank_lines_ignored(self):
        text = "\n".join("  " + line + "  # tail comment"
                         for line in BASE_CONFIG.splitlines() if line.strip())
        assert parse_system_config(text) == parse_system_config(BASE_CONFIG)

    def test_scientific_notation(self):
        text = BASE_CONFIG.replace("length_km = 1000", "length_km = 1.0E3")
        assert parse_system_config(text).fiber.length == 1e6

    @pytest.mark.parametrize("key", [
        "channels", "symbol_time_ps", "linewidth_tx_hz", "linewidth_lo_hz",
        "dispersion_ps_nm_km", "length_km", "wavelength_nm",
    ])
    def test_missing_required_key_is_named(self, key):
        lines = [line for line in BASE_CONFIG.splitlines()
                 if not line.startswith(key)]
        with pytest.raises(MissingKey) as info:
            parse_system_config("\n".join(lines))
        assert info.value.key == key

    def test_unknown_key_is_named(self):
        with pytest.raises(UnknownKey) as info:
            parse_system_config(BASE_CONFIG + "attenuation_db = 3\n")
        assert info.value.key == "attenuation_db"

    def test_bad_number_is_named(self):
        text = BASE_CONFIG.replace("length_km = 1000", "length_km = twelve")
        with pytest.raises(BadUnit) as info:
            parse_system_config(text)
        assert info.value.key == "length_km"

    def test_non_finite_number_rejected(self):
        text = BASE_CONFIG.replace("length_km = 1000", "length_km = Infinity")
        with pytest.raises(BadUnit):
            parse_system_config(text)

    def test_bad_channels_and_range(self):
        with pytest.raises(BadUnit) as info:
            parse_system_config(BASE_CONFIG.replace("channels = 10",
                                                    "channels = ten"))
        assert info.value.key == "channels"
        with pytest.raises(RangeViolation) as info:
            parse_system_config(BASE_CONFIG.replace("channels = 10",
                                                    "channels = 0"))
        assert info.value.key == "channels"

    def test_bad_kind_and_malformed_line(self):
        with pytest.raises(BadUnit) as info:
            parse_system_config(BASE_CONFIG + "system_kind = qam\n")
        assert info.value.key == "system_kind"
        with pytest.raises(BadUnit):
            parse_system_config(BASE_CONFIG + "just a stray line\n")


class TestRenderRoundTrip:
    def test_reference_config_round_trips(self):
        params = parse_system_config(BASE_CONFIG)
        assert parse_system_config(render_system_config(params)) == params

    def test_awkward_binary_values_round_trip(self):
        # 1e-10 s is not exactly representable; the renderer must emit
        # text that parses back to the identical float.
        params = SystemParams(
            grid=OfdmGrid(7, 1e-10, 9.999999999e9),
            lasers=LaserSpec(1234567.891, 0.1),
            fiber=FiberLink(1.6e-5, 123456.789, 1.55e-6))
        assert parse_system_config(render_system_config(params)) == params

    @given(st.integers(min_value=1, max_value=1000),
           st.floats(min_value=1e-13, max_value=1e-8),
           st.floats(min_value=1e6, max_value=1e12),
           st.floats(min_value=0, max_value=1e8),
           st.floats(min_value=0, max_value=1e8),
           st.floats(min_value=0, max_value=1e-3),
           st.floats(min_value=0, max_value=1e7),
           st.floats(min_value=1e-7, max_value=1e-5),
           st.sampled_from(list(SystemKind)))
    def test_round_trip_is_exact_for_any_params(self, n, t, spacing, tx, lo,
                                                disp, length, wavelength, kind):
        params = SystemParams(grid=OfdmGrid(n, t, spacing),
                              lasers=LaserSpec(tx, lo),
                              fiber=FiberLink(disp, length, wavelength),
                              kind=kind)
        assert parse_system_config(render_system_config(params)) == params

    def test_render_emits_every_key(self):
        text = render_system_config(base_params())
        for key in ("channels", "symbol_time_ps", "channel_spacing_ghz",
                    "linewidth_tx_hz", "linewidth_lo_hz", "dispersion_ps_nm_km",
                    "length_km", "wavelength_nm", "system_kind"):
            assert f"{key} = " in text
