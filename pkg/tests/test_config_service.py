import json

from services.config_service import (
    CONFIG_ENV_VAR,
    ToolkitConfigService,
    get_toolkit_config,
    reset_toolkit_config,
)


def write_config(tmp_path, data, name='config.json'):
    path = tmp_path / name
    path.write_text(json.dumps(data), encoding='utf-8')
    return str(path)


def test_repository_defaults():
    service = ToolkitConfigService()
    assert service.sampling.fast_edge_repeats == 1000
    assert service.sampling.clock_check_interval == 64
    assert service.oracle.max_side_vertices == 64
    assert service.oracle.max_butterflies_for_pairs == 2000
    assert service.sparsify.edge_threshold_constant == 24.0
    assert service.sparsify.color_threshold_constant == 32.0
    assert service.logging.level == 'WARNING'
    assert service.timing_enabled


def test_partial_override_keeps_other_defaults(tmp_path):
    service = ToolkitConfigService(write_config(tmp_path, {'oracle': {'maxSideVertices': 10}}))
    assert service.oracle.max_side_vertices == 10
    assert service.oracle.max_butterflies_for_pairs == 2000
    assert service.sampling.fast_edge_repeats == 1000
    assert service.loaded_from.endswith('config.json')


def test_environment_variable(tmp_path, monkeypatch):
    path = write_config(tmp_path, {'sampling': {'fastEdgeRepeats': 50, 'threads': 3}})
    monkeypatch.setenv(CONFIG_ENV_VAR, path)
    service = ToolkitConfigService()
    assert service.sampling.fast_edge_repeats == 50
    assert service.sampling.threads == 3


def test_explicit_path_wins_over_environment(tmp_path, monkeypatch):
    monkeypatch.setenv(CONFIG_ENV_VAR, write_config(tmp_path, {'logging': {'level': 'debug'}}, 'env.json'))
    service = ToolkitConfigService(write_config(tmp_path, {'logging': {'level': 'info'}}, 'cli.json'))
    assert service.logging.level == 'INFO'


def test_unreadable_file_falls_through(tmp_path, caplog):
    broken = tmp_path / 'broken.json'
    broken.write_text('{not json', encoding='utf-8')
    service = ToolkitConfigService(str(broken))
    assert service.oracle.max_side_vertices == 64
    assert any('Ignoring unreadable config' in record.getMessage() for record in caplog.records)


def test_raw_is_a_copy():
    service = ToolkitConfigService()
    raw = service.raw()
    raw['oracle']['maxSideVertices'] = 1
    assert service.oracle.max_side_vertices == 64


def test_singleton_reset(tmp_path):
    first = get_toolkit_config()
    assert get_toolkit_config() is first
    replaced = reset_toolkit_config(write_config(tmp_path, {'output': {'timing': False}}))
    assert get_toolkit_config() is replaced
    assert not replaced.timing_enabled
