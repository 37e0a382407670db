import json
import logging

import pytest

from cli.app import EXIT_GUARD, EXIT_IO, EXIT_PARSE, EXIT_USAGE, build_parser, main
from services.graph_service import complete_biclique, random_bipartite
from services.import_service import serialize_edge_list, write_edge_list

K22_TEXT = "1 1\n1 2\n2 1\n2 2\n"


@pytest.fixture(autouse=True)
def restore_root_logging():
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)


@pytest.fixture
def biclique_file(tmp_path):
    def write(a: int, b: int) -> str:
        return write_edge_list(complete_biclique(a, b), str(tmp_path / f"k{a}_{b}.txt"))
    return write


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def records(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return [json.loads(line) for line in out.splitlines() if line]


def test_parser_requires_command():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])


def test_stats(capsys, biclique_file):
    (record,) = records(capsys, 'stats', biclique_file(3, 2))
    assert record == {'command': 'stats', 'n': 5, 'left': 3, 'right': 2, 'm': 6,
                      'sumDegSqL': 12, 'sumDegSqR': 18, 'wedges': 9, 'maxDeg': 3}


def test_stats_large_biclique(capsys, biclique_file):
    (record,) = records(capsys, 'stats', biclique_file(10000, 10))
    assert record['sumDegSqL'] == 10 ** 6
    assert record['sumDegSqR'] == 10 ** 9


def test_empty_file(capsys, edge_file):
    code, out, err = run(capsys, 'stats', edge_file("% bip\n"))
    assert code == EXIT_PARSE
    assert out == ""
    assert err.startswith("error:")


def test_bad_token(capsys, edge_file):
    code, _, err = run(capsys, 'exact', edge_file("1 1\n2 q\n"))
    assert code == EXIT_PARSE
    assert "line 2" in err


def test_missing_file(capsys, tmp_path):
    code, _, _ = run(capsys, 'stats', str(tmp_path / 'absent.txt'))
    assert code == EXIT_IO


def test_exact_single_butterfly(capsys, edge_file):
    (record,) = records(capsys, 'exact', edge_file(K22_TEXT))
    assert record['estimate'] == 1
    assert record['relativeErrorPct'] == 0.0
    assert record['details']['side'] == 'left'


def test_exact_large_biclique(capsys, biclique_file):
    (record,) = records(capsys, 'exact', biclique_file(10000, 10))
    assert record['estimate'] == 2249775000
    assert record['details']['side'] == 'right'
    assert record['details']['counterUpdates'] == 10000 * 45
    assert record['details']['triplesVisited'] == 10000 * 90


def test_exact_sides_agree(capsys, tmp_path):
    path = write_edge_list(random_bipartite(12, 9, 0.5, 3), str(tmp_path / 'r.txt'))
    (left,) = records(capsys, 'exact', path, '--side', 'left')
    (right,) = records(capsys, 'exact', path, '--side', 'right')
    assert left['estimate'] == right['estimate']
    assert (left['details']['side'], right['details']['side']) == ('left', 'right')


def test_wedge_sample_exact_on_three_by_three(capsys, biclique_file):
    (record,) = records(capsys, 'sample', biclique_file(3, 3), '--method', 'wedge', '--iterations', '1',
                        '--seed', '0', '--exact-for-error')
    assert record['estimate'] == 9.0
    assert record['exact'] == 9
    assert record['relativeErrorPct'] == 0.0


def test_fast_edge_sample(capsys, edge_file):
    (record,) = records(capsys, 'sample', edge_file(K22_TEXT), '--method', 'fast-edge', '--iterations', '5',
                        '--fast-repeats', '1', '--seed', '1')
    assert record['estimate'] == 1.0
    assert record['params']['fastEdgeRepeats'] == '1'
    assert record['iterations'] == 5


def test_sample_needs_budget(capsys, edge_file):
    with pytest.raises(SystemExit):
        main(['sample', edge_file(K22_TEXT), '--method', 'edge'])


def test_sample_trace(capsys, biclique_file):
    (record,) = records(capsys, 'sample', biclique_file(4, 3), '--method', 'vertex', '--iterations', '20',
                        '--trace', '--exact', '18')
    assert [point['iterations'] for point in record['trace']] == [1, 2, 4, 8, 16, 20]
    assert all(point['relativeErrorPct'] is not None for point in record['trace'])


def test_seeded_output_is_byte_identical(capsys, tmp_path):
    path = write_edge_list(random_bipartite(14, 14, 0.4, 8), str(tmp_path / 'r.txt'))
    argv = ['sample', path, '--method', 'edge', '--iterations', '300', '--groups', '3',
            '--seed', '21', '--no-timing', '--trace', '--exact-for-error']
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    threaded = run(capsys, *argv, '--threads', '4')
    assert first == second == threaded
    assert 'elapsedSeconds' not in first[1]


def test_sparsify_full_retention(capsys, biclique_file):
    (record,) = records(capsys, 'sparsify', biclique_file(4, 4), '--method', 'edge', '--p', '1.0',
                        '--exact-for-error')
    assert record['estimate'] == 36.0
    assert record['relativeErrorPct'] == 0.0


def test_sparsify_single_color(capsys, biclique_file):
    (record,) = records(capsys, 'sparsify', biclique_file(5, 5), '--method', 'color', '--colors', '1',
                        '--trials', '2')
    assert record['estimate'] == 100.0
    assert record['details']['trialValues'] == [100.0, 100.0]


def test_sparsify_reproducible(capsys, edge_file):
    argv = ['sparsify', edge_file(K22_TEXT), '--method', 'edge', '--p', '0.5', '--trials', '4',
            '--seed', '9', '--no-timing']
    assert run(capsys, *argv) == run(capsys, *argv)


def test_sparsify_pilot_threshold(capsys, biclique_file):
    path = biclique_file(30, 30)
    code, out, err = run(capsys, 'sparsify', path, '--method', 'edge', '--p', '0.05', '--pilot', str(435 ** 2))
    assert code == 0
    assert json.loads(out)['method'] == 'edge'
    assert 'suggested threshold' in err
    code, _, err = run(capsys, 'sparsify', path, '--method', 'edge', '--p', '0.5', '--pilot', str(435 ** 2))
    assert code == 0
    assert 'suggested threshold' not in err


def test_sparsify_bad_probability(capsys, edge_file):
    code, _, _ = run(capsys, 'sparsify', edge_file(K22_TEXT), '--method', 'edge', '--p', '0')
    assert code == EXIT_USAGE


def test_generate_biclique_to_stdout(capsys):
    code, out, _ = run(capsys, 'generate', 'biclique', '2', '2')
    assert code == 0
    edges = [line for line in out.splitlines() if not line.startswith('%')]
    assert len(edges) == 4
    assert out == serialize_edge_list(complete_biclique(2, 2))


def test_generate_random_is_reproducible(capsys, tmp_path):
    first, second = tmp_path / 'a.txt', tmp_path / 'b.txt'
    (record,) = records(capsys, 'generate', 'random', '8', '8', '0.5', '--seed', '42', '-o', str(first))
    records(capsys, 'generate', 'random', '8', '8', '0.5', '--seed', '42', '-o', str(second))
    assert first.read_bytes() == second.read_bytes()
    assert record['params']['seed'] == '42'


def test_generate_rejects_empty_side(capsys):
    code, _, _ = run(capsys, 'generate', 'biclique', '0', '3')
    assert code == EXIT_USAGE


def test_local_vertex_and_edge(capsys, biclique_file):
    path = biclique_file(3, 3)
    (vertex,) = records(capsys, 'local', path, '--vertex', 'left:0')
    (edge,) = records(capsys, 'local', path, '--edge', '0', '0')
    assert vertex['estimate'] == 6
    assert edge['estimate'] == 4
    (pendant,) = records(capsys, 'local', biclique_file(1, 3), '--edge', '0', '0')
    assert pendant['estimate'] == 0


def test_local_unknown_subject(capsys, biclique_file):
    path = biclique_file(2, 2)
    assert run(capsys, 'local', path, '--vertex', 'left:7')[0] == EXIT_USAGE
    assert run(capsys, 'local', path)[0] == EXIT_USAGE


def test_pairs(capsys, biclique_file, edge_file):
    (k32,) = records(capsys, 'pairs', biclique_file(3, 2))
    assert k32['butterflies'] == 3
    assert k32['p1w'] == 3
    assert (k32['bounds']['vsamp'], k32['bounds']['esamp'], k32['bounds']['wsamp']) == (7.5, 9.0, 13.5)
    assert k32['observation']['holds'] is True
    (disjoint,) = records(capsys, 'pairs', edge_file("1 1\n1 2\n2 1\n2 2\n3 3\n3 4\n4 3\n4 4\n"))
    assert disjoint['p0v'] == 1
    (k24,) = records(capsys, 'pairs', biclique_file(2, 4))
    assert (k24['p1w'], k24['p2v']) == (12, 3)


def test_pairs_guard(capsys, biclique_file):
    code, _, err = run(capsys, 'pairs', biclique_file(65, 2))
    assert code == EXIT_GUARD
    assert "oracle" in err


def test_compare(capsys, biclique_file):
    rows = records(capsys, 'compare', biclique_file(3, 3), '--methods', 'edge,wedge,espar',
                   '--iterations', '10', '--p', '1.0', '--trials', '2', '--no-timing', '--target-error', '1')
    assert [row['method'] for row in rows] == ['edge', 'wedge', 'espar']
    assert all(row['estimate'] == 9.0 and row['exact'] == 9 for row in rows)
    assert rows[0]['details']['medianRelativeErrorPct'] == 0.0
    assert rows[0]['details']['medianIterationsToTarget'] == 1
    assert 'targetErrorPct' not in rows[2]['details']


def test_compare_rejects_unknown_method(capsys, biclique_file):
    with pytest.raises(SystemExit):
        main(['compare', biclique_file(2, 2), '--methods', 'edge,bogus', '--iterations', '3'])


def test_human_output(capsys, biclique_file):
    code, out, _ = run(capsys, 'stats', biclique_file(2, 2), '--human')
    assert code == 0
    assert 'field' in out and 'wedges' in out


def test_workbook_export(capsys, biclique_file, tmp_path):
    target = tmp_path / 'report.xlsx'
    records(capsys, 'exact', biclique_file(3, 3), '--xlsx', str(target))
    assert target.exists()


def test_config_flag(capsys, biclique_file, tmp_path):
    config = tmp_path / 'toolkit.json'
    config.write_text('{"output": {"timing": false}}', encoding='utf-8')
    (record,) = records(capsys, 'exact', biclique_file(2, 2), '--config', str(config))
    assert 'elapsedSeconds' not in record
