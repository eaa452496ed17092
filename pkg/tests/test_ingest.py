import math
import os

import numpy as np
import pytest

from fsir import load_bike_csv
from fsir.errors import SchemaError
from fsir.ingest import BikeDayRecord, default_data_path

HEADER = "instant,dteday,season,yr,mnth,hr,holiday,weekday,workingday,weathersit,temp,atemp,hum,windspeed,casual,registered,cnt"


def day_rows(date, weekday, temps, counts, hours=None, start=1):
    hours = range(24) if hours is None else hours
    rows = []
    for i, h in enumerate(hours):
        rows.append(
            f"{start + i},{date},1,0,1,{h},0,{weekday},0,1,"
            f"{temps[i]},{temps[i]},0.5,0.1,0,{counts[i]},{counts[i]}"
        )
    return rows


def write_csv(path, rows):
    path.write_text("\n".join([HEADER] + rows) + "\n")
    return path


@pytest.fixture()
def two_saturdays(tmp_path):
    rows = day_rows("2011-01-01", 6, [0.5] * 24, [f"{math.e:.12f}"] * 24)
    rows += day_rows("2011-01-08", 6, [0.3] * 24, [10] * 24, start=100)
    return write_csv(tmp_path / "hour.csv", rows)


class TestLoadBikeCsv:
    def test_constant_day_semantics(self, two_saturdays):
        s = load_bike_csv(two_saturdays)
        assert s.n == 2
        assert np.allclose(s.values[0], 0.5)
        assert s.responses[0] == pytest.approx(1.0, abs=1e-9)  # log(e) = 1
        assert s.responses[1] == pytest.approx(math.log(10.0), abs=1e-12)

    def test_grid_is_hourly(self, two_saturdays):
        s = load_bike_csv(two_saturdays)
        assert s.grid.size == 24
        assert np.allclose(s.grid.nodes, np.arange(24) / 23.0)

    def test_incomplete_day_excluded(self, tmp_path):
        rows = day_rows("2011-01-01", 6, [0.5] * 24, [5] * 24)
        rows += day_rows("2011-01-08", 6, [0.4] * 23, [5] * 23, hours=range(23), start=50)
        rows += day_rows("2011-01-15", 6, [0.6] * 24, [7] * 24, start=100)
        s = load_bike_csv(write_csv(tmp_path / "hour.csv", rows))
        assert s.n == 2
        assert s.meta["excluded_incomplete"] == 1
        assert "2011-01-08" not in s.meta["dates"]

    def test_zero_count_day_dropped(self, tmp_path, caplog):
        rows = day_rows("2011-01-01", 6, [0.5] * 24, [0] * 24)
        rows += day_rows("2011-01-08", 6, [0.4] * 24, [5] * 24, start=50)
        rows += day_rows("2011-01-15", 6, [0.6] * 24, [7] * 24, start=100)
        with caplog.at_level("WARNING", logger="fsir.ingest"):
            s = load_bike_csv(write_csv(tmp_path / "hour.csv", rows))
        assert s.n == 2
        assert s.meta["excluded_zero_count"] == 1
        assert any("zero mean" in r.message for r in caplog.records)

    def test_other_weekdays_ignored(self, tmp_path):
        rows = day_rows("2011-01-01", 6, [0.5] * 24, [5] * 24)
        rows += day_rows("2011-01-03", 1, [0.9] * 24, [5] * 24, start=50)
        rows += day_rows("2011-01-08", 6, [0.4] * 24, [5] * 24, start=100)
        s = load_bike_csv(write_csv(tmp_path / "hour.csv", rows))
        assert s.n == 2
        assert set(s.meta["dates"]) == {"2011-01-01", "2011-01-08"}

    def test_weekday_filter_configurable(self, tmp_path):
        rows = day_rows("2011-01-03", 1, [0.9] * 24, [5] * 24)
        rows += day_rows("2011-01-10", 1, [0.8] * 24, [5] * 24, start=50)
        s = load_bike_csv(write_csv(tmp_path / "hour.csv", rows), weekday_filter=1)
        assert s.n == 2

    def test_feeling_temperature_flag(self, tmp_path):
        rows = []
        for i, h in enumerate(range(24)):
            rows.append(f"{i},2011-01-01,1,0,1,{h},0,6,0,1,0.5,0.7,0.5,0.1,0,5,5")
        for i, h in enumerate(range(24)):
            rows.append(f"{100+i},2011-01-08,1,0,1,{h},0,6,0,1,0.5,0.7,0.5,0.1,0,5,5")
        path = write_csv(tmp_path / "hour.csv", rows)
        s = load_bike_csv(path, use_feeling_temp=True)
        assert np.allclose(s.values, 0.7)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_bike_csv(tmp_path / "nope.csv")

    def test_missing_columns(self, tmp_path):
        path = tmp_path / "hour.csv"
        path.write_text("a,b,c\n1,2,3\n")
        with pytest.raises(SchemaError):
            load_bike_csv(path)

    def test_reload_is_bitwise_identical(self, two_saturdays):
        a = load_bike_csv(two_saturdays)
        b = load_bike_csv(two_saturdays)
        assert np.array_equal(a.values, b.values)
        assert np.array_equal(a.responses, b.responses)


class TestBikeDayRecord:
    def test_needs_24_hours(self):
        with pytest.raises(ValueError):
            BikeDayRecord(date="d", temperatures=np.full(23, 0.5), counts=np.full(23, 1.0))

    def test_temperature_range(self):
        temps = np.full(24, 0.5)
        temps[3] = 1.2
        with pytest.raises(ValueError):
            BikeDayRecord(date="d", temperatures=temps, counts=np.full(24, 1.0))

    def test_counts_nonnegative(self):
        counts = np.full(24, 1.0)
        counts[0] = -1.0
        with pytest.raises(ValueError):
            BikeDayRecord(date="d", temperatures=np.full(24, 0.5), counts=counts)

    def test_mean_count(self):
        rec = BikeDayRecord(
            date="d", temperatures=np.full(24, 0.5), counts=np.arange(24, dtype=float)
        )
        assert rec.mean_count == pytest.approx(11.5)


class TestReferenceFile:
    def test_reference_file_has_102_saturdays(self):
        path = default_data_path()
        if not path.exists():
            pytest.skip(f"reference dataset not present at {path}")
        s = load_bike_csv(path)
        assert s.n == 102
