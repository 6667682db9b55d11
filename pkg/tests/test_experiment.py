import math

import numpy as np
import pytest

from qudit_rac.errors import InvalidArgument, ParseError
from qudit_rac.experiment import (
    COLUMNS,
    OpticsSetting,
    analyze,
    dump_table2,
    ideal_success,
    load_table2,
    parse_table2,
    prepare_optics_state,
    to_logical,
)


@pytest.fixture(scope="module")
def records():
    return load_table2()


def test_optics_state_normalized_on_grid():
    grid = np.arange(-90, 91, 1.0)
    rng = np.random.default_rng(0)
    for t1 in grid[::5]:
        for t2, t3, phi in zip(rng.choice(grid, 8), rng.choice(grid, 8), rng.uniform(0, 2 * np.pi, 8)):
            psi = prepare_optics_state(OpticsSetting(t1, t2, t3, phi))
            assert np.linalg.norm(psi) == pytest.approx(1.0, abs=1e-12)


def test_optics_state_routes_to_path_b():
    psi = prepare_optics_state(OpticsSetting(45.0, 0.0, 45.0, 0.0))
    np.testing.assert_allclose(np.abs(psi), [0, 0, 1, 0], atol=1e-15)
    # (H,b) is logical |3>
    np.testing.assert_allclose(np.abs(to_logical(psi)), [0, 0, 0, 1], atol=1e-15)


def test_optics_state_path_a():
    psi = prepare_optics_state(OpticsSetting(0.0, 0.0, 12.0, 1.0))
    np.testing.assert_allclose(to_logical(psi), [0, 1, 0, 0], atol=1e-15)


def test_ideal_success_everywhere():
    for x0 in range(4):
        for x1 in range(4):
            for q in "ZX":
                assert ideal_success(x0, x1, q) == pytest.approx(0.75, abs=1e-12)
    with pytest.raises(InvalidArgument):
        ideal_success(0, 0, "Y")


def test_bundled_table(records):
    assert len(records) == 16
    first, last = records[0], records[-1]
    assert (first.label, first.pz, first.px) == ("psi00", 0.747, 0.752)
    assert (last.label, last.pz, last.px) == ("psi33", 0.733, 0.703)
    assert records[13].setting.theta1 == -22.5
    assert {(r.x0, r.x1) for r in records} == {(a, b) for a in range(4) for b in range(4)}


def test_round_trip(records):
    assert parse_table2(dump_table2(records)) == records


def test_bad_number_reports_line(records):
    text = dump_table2(records).replace("12.05", "1.2.", 1)
    with pytest.raises(ParseError, match="line 2"):
        parse_table2(text)


def test_wrong_field_count(records):
    lines = dump_table2(records).splitlines()
    lines[3] = lines[3] + ",0.1"
    with pytest.raises(ParseError, match="line 4"):
        parse_table2("\n".join(lines))


def test_probability_out_of_range(records):
    lines = dump_table2(records).splitlines()
    fields = lines[5].split(",")
    fields[COLUMNS.index("pz")] = "1.2"
    lines[5] = ",".join(fields)
    with pytest.raises(ParseError, match="line 6"):
        parse_table2("\n".join(lines))


def test_truncated_table(records):
    text = "\n".join(dump_table2(records).splitlines()[:10])
    with pytest.raises(ParseError, match="16 records"):
        parse_table2(text)


def test_missing_header():
    with pytest.raises(ParseError):
        parse_table2("psi00,0,0,1,2,3,0,0.7,0.1,0.7,0.1\n")


def test_analysis(records):
    report = analyze(records)
    assert report.mean == pytest.approx(0.7534375, abs=1e-12)
    assert report.mean_row_first == pytest.approx(report.mean, abs=1e-12)
    assert report.mean_uncertainty == pytest.approx(0.037375, abs=1e-12)
    assert report.classical_bound == 0.625
    assert report.classical_violated
    assert report.consistent_with_ideal
    assert len(report.rows) == 16
    assert all(0 <= r.fidelity <= 1 + 1e-12 for r in report.rows)
    assert "violated: yes" in report.to_text()


def test_analysis_needs_all_records(records):
    with pytest.raises(InvalidArgument):
        analyze(records[:15])


def test_load_from_path(tmp_path, records):
    path = tmp_path / "t.csv"
    path.write_text(dump_table2(records))
    assert load_table2(path) == records


def test_non_finite_angle():
    with pytest.raises(InvalidArgument):
        OpticsSetting(math.nan, 0, 0, 0)
