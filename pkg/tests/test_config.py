import json
import logging

import pytest

from config.config_manager import DEFAULT_CONFIG, ConfigManager
from config.constants import BENCH_DIR_ENV_VAR, DEFAULT_TIME_LIMIT
from config.settings import SolverSettings


def write_config(path, data):
    path.write_text(json.dumps(data), encoding='utf-8')
    return path


def test_missing_file_is_created_with_defaults(tmp_path):
    path = tmp_path / 'bench_config.json'
    manager = ConfigManager(str(path))
    assert path.exists()
    assert json.loads(path.read_text())['version'] == DEFAULT_CONFIG['version']
    assert [p['algo'] for p in manager.get_profiles()] == \
        [p['algo'] for p in DEFAULT_CONFIG['profiles']]


def test_invalid_json_falls_back(tmp_path, caplog):
    path = tmp_path / 'broken.json'
    path.write_text('{not json')
    with caplog.at_level(logging.WARNING):
        manager = ConfigManager(str(path))
    assert 'loaded from defaults' in caplog.text
    assert path.read_text() == '{not json'
    assert manager.get_profile('aecbs')['res'] == '1'


def test_profiles_are_validated_and_repaired(tmp_path):
    path = write_config(tmp_path / 'c.json', {
        'benchmark_dir': '/data/mapf',
        'profiles': [
            {'algo': 'aecbs', 'eps0': 3, 'res': 'sometimes', 'cic': 'yes'},
            {'algo': 'dijkstra'},
            {'eps0': 2.0},
            'not a profile',
            {'algo': 'bcbs', 'eps_high': 0.5, 'eps_low': 1.5, 'label': '  '},
        ],
    })
    manager = ConfigManager(str(path))
    profiles = manager.get_profiles()
    assert [p['algo'] for p in profiles] == ['aecbs', 'bcbs']
    aecbs, bcbs = profiles
    assert aecbs['eps0'] == 3.0
    assert 'res' not in aecbs
    assert aecbs['cic'] is True
    assert aecbs['time_limit'] == DEFAULT_TIME_LIMIT
    assert 'eps_high' not in bcbs
    assert bcbs['eps_low'] == 1.5
    assert 'label' not in bcbs
    assert manager.benchmark_dir == '/data/mapf'


def test_get_profile_returns_copy(tmp_path):
    manager = ConfigManager(str(tmp_path / 'c.json'))
    manager.get_profile('abcbs')['eps0'] = 99.0
    assert manager.get_profile('abcbs')['eps0'] == 10.0
    assert manager.get_profile('cbs') is None


@pytest.mark.parametrize('explicit, env, config_dir, expected', [
    ('/explicit', '/env', '/config', '/explicit'),
    (None, '/env', '/config', '/env'),
    (None, None, '/config', '/config'),
    (None, None, None, None),
])
def test_benchmark_dir_precedence(tmp_path, monkeypatch, explicit, env, config_dir, expected):
    if env is None:
        monkeypatch.delenv(BENCH_DIR_ENV_VAR, raising=False)
    else:
        monkeypatch.setenv(BENCH_DIR_ENV_VAR, env)
    path = write_config(tmp_path / 'c.json', {'benchmark_dir': config_dir, 'profiles': []})
    settings = SolverSettings.from_environment(ConfigManager(str(path)), explicit)
    assert settings.benchmark_dir == expected

