import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from lrdkit.core import (
    GapPolicy,
    IngestConfig,
    TimeSeries,
    first_difference,
    format_timestamp,
    integrate,
    load_csv,
    parse_timestamp,
    slice_calendar,
    to_csv,
)
from lrdkit.errors import (
    DuplicateTimestampError,
    EmptySelectionError,
    GapError,
    InsufficientDataError,
    ParseError,
)

finite = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)


def _csv(rows, header="timestamp,value"):
    return io.StringIO(header + "\n" + "\n".join(rows) + "\n")


def test_three_hourly_rows():
    s = load_csv(_csv(["2009-01-01T00:00:00Z,1", "2009-01-01T01:00:00Z,2", "2009-01-01T02:00:00Z,3"]))
    assert len(s) == 3
    assert s.gaps == ()
    assert s.spacing == 3600
    np.testing.assert_array_equal(s.values, [1.0, 2.0, 3.0])


def test_drop_and_flag_records_position_after_hole():
    s = load_csv(_csv(["2009-01-01T00:00:00,1", "2009-01-01T01:00:00,2", "2009-01-01T03:00:00,3"]))
    assert len(s) == 3
    assert s.gaps == (2,)
    assert not s.gaps_filled


def test_interpolate_fills_grid():
    cfg = IngestConfig(gap_policy="linear-interpolate")
    s = load_csv(_csv(["0,1", "3600,2", "14400,5"]), cfg)
    np.testing.assert_array_equal(s.values, [1.0, 2.0, 3.0, 4.0, 5.0])
    assert s.gaps == (2, 3)
    assert s.gaps_filled


def test_reject_policy_names_first_gap():
    cfg = IngestConfig(gap_policy=GapPolicy.REJECT)
    with pytest.raises(GapError) as info:
        load_csv(_csv(["0,1", "3600,2", "10800,3", "21600,4"]), cfg)
    assert info.value.position == 2
    assert "position 2" in str(info.value)


def test_malformed_row_reports_row_number():
    with pytest.raises(ParseError) as info:
        load_csv(_csv(["0,1", "3600,abc", "7200,3"]))
    assert info.value.row == 3
    assert "row 3" in str(info.value)


def test_bad_timestamp_is_parse_error():
    with pytest.raises(ParseError, match="row 2"):
        load_csv(_csv(["yesterday,1"]))


def test_duplicate_timestamp_rejected():
    with pytest.raises(DuplicateTimestampError):
        load_csv(_csv(["0,1", "3600,2", "3600,3"]))


def test_rows_sorted_ascending():
    s = load_csv(_csv(["7200,3", "0,1", "3600,2"]))
    np.testing.assert_array_equal(s.values, [1.0, 2.0, 3.0])


def test_named_columns_and_delimiter():
    text = "price;when\n5.5;2010-06-01T00:00:00+02:00\n-1.25;2010-06-01T01:00:00+02:00\n"
    s = load_csv(io.StringIO(text), IngestConfig(timestamp_column="when", value_column="price", delimiter=";"))
    assert s.timestamps[0] == parse_timestamp("2010-05-31T22:00:00Z")
    np.testing.assert_array_equal(s.values, [5.5, -1.25])


def test_bytes_input_with_bom():
    s = load_csv(io.BytesIO(b"\xef\xbb\xbftimestamp,value\n0,1\n3600,2\n"))
    assert len(s) == 2


def test_empty_input():
    with pytest.raises(ParseError):
        load_csv(io.StringIO(""))
    with pytest.raises(InsufficientDataError):
        load_csv(io.StringIO("timestamp,value\n"))


def test_timestamp_parsing():
    assert parse_timestamp("1230768000") == 1230768000
    assert parse_timestamp("2009-01-01T00:00:00Z") == 1230768000
    assert parse_timestamp("2009-01-01 01:00:00+01:00") == 1230768000
    assert format_timestamp(1230768000) == "2009-01-01T00:00:00Z"
    with pytest.raises(ValueError):
        parse_timestamp("1.5")


def test_timeseries_invariants():
    with pytest.raises(ValueError, match="strictly increasing"):
        TimeSeries([0, 0], [1.0, 2.0])
    with pytest.raises(ValueError, match="unflagged"):
        TimeSeries([0, 3600, 10800], [1.0, 2.0, 3.0], spacing=3600)
    with pytest.raises(ValueError, match="off the"):
        TimeSeries([0, 3600, 5400], [1.0, 2.0, 3.0], spacing=3600)
    s = TimeSeries.from_values([1.0, 2.0])
    with pytest.raises(ValueError):
        s.values[0] = 5.0


def test_first_difference_examples():
    np.testing.assert_array_equal(first_difference(TimeSeries.from_values([5, 5, 5])).values, [0, 0])
    d = first_difference(TimeSeries.from_values([1, 3, 2]))
    np.testing.assert_array_equal(d.values, [2, -1])
    assert d.timestamps[0] == 3600
    with pytest.raises(InsufficientDataError):
        first_difference(TimeSeries.from_values([1.0]))


def test_first_difference_shifts_gaps():
    s = TimeSeries([0, 3600, 10800, 14400], [1.0, 2.0, 4.0, 5.0], spacing=3600, gaps=(2,))
    assert first_difference(s).gaps == (1,)


def test_integrate_examples():
    np.testing.assert_array_equal(integrate(TimeSeries.from_values([1, 1, 1])).values, [1, 2, 3])
    np.testing.assert_array_equal(integrate(TimeSeries.from_values([0, 0, 0])).values, [0, 0, 0])


def test_round_trip_oracle_on_random_series():
    rng = np.random.default_rng(11)
    for _ in range(1000):
        x = rng.standard_normal(rng.integers(2, 200)) * 10.0 ** rng.integers(-3, 4)
        s = TimeSeries.from_values(x)
        back = first_difference(integrate(s)).values
        np.testing.assert_allclose(back, x[1:], rtol=0, atol=1e-9 * max(1.0, np.abs(np.cumsum(x)).max()))


@given(arrays(np.float64, st.integers(2, 100), elements=finite))
def test_integrate_difference_inverse(x):
    s = TimeSeries.from_values(x)
    back = first_difference(integrate(s)).values
    scale = max(1.0, float(np.abs(np.cumsum(x)).max()))
    np.testing.assert_allclose(back, x[1:], rtol=0, atol=1e-12 * scale * x.size)


@settings(max_examples=50)
@given(arrays(np.float64, st.integers(1, 50), elements=finite), st.sampled_from([60, 3600, 86400]))
def test_ingestion_idempotent(x, spacing):
    s = TimeSeries.from_values(x, start=1230768000, spacing=spacing)
    again = load_csv(io.StringIO(to_csv(s)))
    if len(s) > 1:
        assert again == s
    np.testing.assert_array_equal(again.values, s.values)
    assert to_csv(again) == to_csv(s)


def test_ingestion_idempotent_with_gaps():
    s = TimeSeries([0, 3600, 10800, 14400], [1.0, 0.1, -3.5, 2.0], spacing=3600, gaps=(2,))
    assert load_csv(io.StringIO(to_csv(s))) == s


def _two_years():
    start = parse_timestamp("2010-01-01T00:00:00Z")
    stop = parse_timestamp("2012-01-01T00:00:00Z")
    n = (stop - start) // 3600
    return TimeSeries.from_values(np.arange(n, dtype=float), start=start)


def test_slice_first_year_exact_boundaries():
    s = _two_years()
    y = slice_calendar(s, 2010)
    assert len(y) == 8760
    assert format_timestamp(int(y.timestamps[0])) == "2010-01-01T00:00:00Z"
    assert format_timestamp(int(y.timestamps[-1])) == "2010-12-31T23:00:00Z"


def test_slice_outside_span():
    with pytest.raises(EmptySelectionError):
        slice_calendar(_two_years(), 2015)


def test_slices_concatenate_to_original():
    start = parse_timestamp("2009-11-15T00:00:00Z")
    s = TimeSeries.from_values(np.random.default_rng(0).standard_normal(24 * 500), start=start)
    drop = s.timestamps.size // 2
    ts = np.delete(s.timestamps, drop)
    vals = np.delete(s.values, drop)
    s = TimeSeries(ts, vals, spacing=3600, gaps=(drop,))
    parts = [slice_calendar(s, y) for y in s.years()]
    np.testing.assert_array_equal(np.concatenate([p.values for p in parts]), s.values)
    np.testing.assert_array_equal(np.concatenate([p.timestamps for p in parts]), s.timestamps)
    offsets = np.cumsum([0] + [len(p) for p in parts[:-1]])
    assert tuple(g + o for p, o in zip(parts, offsets) for g in p.gaps) == s.gaps
