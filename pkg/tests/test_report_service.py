import json

import pytest
from openpyxl import load_workbook

from models.estimate import TracePoint
from models.run_report import RunReport
from services.report_service import export_workbook, render_human, summary_frame, to_json_line, trace_frame


@pytest.fixture
def sample_record():
    report = RunReport(
        command='sample', method='wedge', estimate=0.1 + 0.2, exact=3, iterations=4,
        elapsed_seconds=0.25, seed=7, params={'groups': '1', 'iterations': '4'},
        trace=[TracePoint(1, 0.1, 2.25, 25.0), TracePoint(4, 0.25, 0.30000000000000004, 90.0)],
    )
    return report.to_dict()


def test_record_key_order(sample_record):
    assert list(sample_record) == ['command', 'method', 'estimate', 'exact', 'relativeErrorPct',
                                   'iterations', 'elapsedSeconds', 'seed', 'params', 'trace']


def test_record_without_timing():
    record = RunReport(command='exact', estimate=1, exact=1, elapsed_seconds=0.5,
                       trace=[TracePoint(1, 0.5, 1.0)]).to_dict(include_timing=False)
    assert 'elapsedSeconds' not in record
    assert 'elapsedSeconds' not in record['trace'][0]
    assert record['relativeErrorPct'] == 0.0


def test_relative_error_absent_without_positive_exact():
    assert RunReport(command='sample', estimate=2.0).relative_error_pct is None
    assert RunReport(command='sample', estimate=2.0, exact=0).relative_error_pct is None


def test_json_line_round_trips_floats(sample_record):
    line = to_json_line(sample_record)
    assert '\n' not in line
    assert ' ' not in line
    assert json.loads(line)['estimate'] == 0.1 + 0.2


def test_json_line_rejects_nan():
    with pytest.raises(ValueError):
        to_json_line({'estimate': float('nan')})


def test_summary_flattens_nested_maps(sample_record):
    frame = summary_frame([sample_record, {**sample_record, 'seed': 8}])
    assert len(frame) == 2
    assert 'params.groups' in frame.columns
    assert 'trace' not in frame.columns


def test_trace_frame(sample_record):
    frame = trace_frame([sample_record])
    assert frame['iterations'].tolist() == [1, 4]
    assert set(frame['method']) == {'wedge'}


def test_human_rendering(sample_record):
    text = render_human(sample_record)
    assert 'field' in text
    assert 'relativeErrorPct' in text
    assert 'iterations' in text.split('\n\n')[1]


def test_workbook_export(tmp_path, sample_record):
    path = export_workbook([sample_record], str(tmp_path / 'out' / 'runs.xlsx'))
    workbook = load_workbook(path)
    assert workbook.sheetnames == ['Summary', 'Trace']
    summary = workbook['Summary']
    headers = [cell.value for cell in summary[1]]
    assert headers[:3] == ['command', 'method', 'estimate']
    assert summary.cell(row=2, column=1).value == 'sample'
    assert workbook['Trace'].max_row == 3


def test_workbook_without_trace(tmp_path):
    record = {'command': 'stats', 'n': 5, 'm': 6}
    workbook = load_workbook(export_workbook([record], str(tmp_path / 'stats.xlsx')))
    assert workbook.sheetnames == ['Summary']
