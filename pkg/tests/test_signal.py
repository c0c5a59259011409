import numpy as np
import pytest
from hypothesis import given, strategies as st

from herdlab.exceptions import ConfigError, DomainError, IngestionError
from herdlab.signal import (
    InformationSignal, load_signal_csv, synth_signal, value_at, write_signal_csv,
)


def test_value_at_segments(two_month_signal):
    assert value_at(two_month_signal, 10) == 0.5
    assert value_at(two_month_signal, 20) == -0.3
    assert value_at(two_month_signal, 39.99) == -0.3
    assert value_at(two_month_signal, 40) == -0.3  # closed end


@pytest.mark.parametrize("t", [-0.1, 40.01])
def test_value_at_outside_domain(two_month_signal, t):
    with pytest.raises(DomainError):
        value_at(two_month_signal, t)


def test_daily_expansion(two_month_signal):
    d = two_month_signal.daily()
    assert d.size == 41
    assert np.all(d[:20] == 0.5) and np.all(d[20:] == -0.3)


def test_constructor_validation():
    with pytest.raises(ConfigError):
        InformationSignal(np.array([1.0, 2.0]), np.array([0.0, 0.0]))
    with pytest.raises(ConfigError):
        InformationSignal(np.array([0.0, 0.0]), np.array([0.0, 0.0]))
    with pytest.raises(ConfigError):
        InformationSignal.from_monthly([0.2, 1.5])


def test_rounding_excess_is_clamped_with_warning():
    with pytest.warns(UserWarning):
        s = InformationSignal.from_monthly([1.0 + 1e-12, -0.5])
    assert s.values[0] == 1.0


def _write(tmp_path, rows, header="label,value"):
    path = tmp_path / "sig.csv"
    path.write_text(header + "\n" + "\n".join(rows) + "\n")
    return path


def test_load_264_months_gives_5280_days(tmp_path):
    rows = [f"m{k},{(k % 7) - 3}" for k in range(264)]
    s = load_signal_csv(_write(tmp_path, rows), "percent")
    assert s.end == 5280
    assert s.values.size == 264


def test_percent_scaling(tmp_path):
    s = load_signal_csv(_write(tmp_path, ["Dec 1991,100"]), "percent")
    assert s.values.tolist() == [1.0]


def test_auto_scaling(tmp_path):
    assert load_signal_csv(_write(tmp_path, ["a,50", "b,-20"]), "auto").values.tolist() == [0.5, -0.2]
    assert load_signal_csv(_write(tmp_path, ["a,0.5", "b,-0.2"]), "auto").values.tolist() == [0.5, -0.2]


def test_unit_range_error_names_row(tmp_path):
    with pytest.raises(IngestionError, match="row 1"):
        load_signal_csv(_write(tmp_path, ["a,1.5"]), "unit")


def test_unparsable_row(tmp_path):
    with pytest.raises(IngestionError, match="row 2"):
        load_signal_csv(_write(tmp_path, ["a,0.1", "b,abc"]), "unit")


def test_bad_header_and_missing_file(tmp_path):
    with pytest.raises(IngestionError):
        load_signal_csv(_write(tmp_path, ["a,0.1"], header="date,val"))
    with pytest.raises(IngestionError, match="missing.csv"):
        load_signal_csv(tmp_path / "missing.csv")


def test_synth_deterministic():
    assert synth_signal(7, 264, "uniform") == synth_signal(7, 264, "uniform")
    assert synth_signal(7, 264, "uniform") != synth_signal(8, 264, "uniform")


def test_synth_square_wave():
    assert synth_signal(0, 2, "square-wave").values.tolist() == [1.0, -1.0]


def test_synth_random_walk_bounded():
    v = synth_signal(7, 264, "random-walk").values
    assert np.all(np.abs(v) <= 1.0)
    assert np.ptp(v) > 0


def test_synth_unknown_kind():
    with pytest.raises(ConfigError):
        synth_signal(0, 3, "sawtooth")


def test_bundled_fixture_matches_generator(bundled_signal):
    assert bundled_signal == synth_signal(7, 264, "uniform")
    assert bundled_signal.end == 5280


@given(st.lists(st.floats(-1, 1), min_size=1, max_size=40))
def test_csv_round_trip(tmp_path_factory, values):
    path = tmp_path_factory.mktemp("rt") / "s.csv"
    s = InformationSignal.from_monthly(values)
    write_signal_csv(s, path)
    back = load_signal_csv(path, "unit")
    assert np.array_equal(back.release_times, s.release_times)
    assert np.array_equal(back.values, s.values)


@given(st.integers(0, 263), st.floats(0, 0.999))
def test_piecewise_constant(k, frac):
    s = synth_signal(3, 264)
    start = 20.0 * k
    assert s.value_at(start + 20.0 * frac) == s.value_at(start)
