"""
Tests for experiment configuration: validation, serialization and layered resolution.
"""

import json

import pytest

from config import Config
from core.errors import ConfigError
from core.modes import AggregationRule, TrainingMode
from models.experiment import ExperimentConfig, PartitionConfig
from models.federation import TrainingConfig
from utils.config_loader import ConfigLoader, deep_merge, parse_assignment


@pytest.fixture
def loader():
    return ConfigLoader()


class TestTrainingConfig:

    def test_defaults(self):
        cfg = TrainingConfig().validate()
        assert (cfg.lr, cfg.lr_decay, cfg.weight_decay) == (0.01, 0.998, 5e-4)
        assert (cfg.batch_size, cfg.local_epochs, cfg.tau) == (64, 5, 0.5)
        assert (cfg.lambda_a, cfg.lambda_u) == (0.9, 0.1)
        assert cfg.mode is TrainingMode.PROTOTYPE_WISE
        assert cfg.aggregation is AggregationRule.UNIFORM
        assert cfg.prototype_centering is True

    def test_lr_schedule(self):
        cfg = TrainingConfig()
        for t in (0, 1, 10, 99):
            assert abs(cfg.lr_at(t) - 0.01 * 0.998 ** t) < 1e-12

    @pytest.mark.parametrize("changes", [
        {'lambda_a': 0.5, 'lambda_u': 0.4},
        {'lambda_a': 1.0, 'lambda_u': 0.0},
        {'tau': 0.0},
        {'participation': 0.0},
        {'participation': 1.5},
        {'n_clients': 10, 'participation': 0.05},
        {'batch_size': 1},
        {'mu': -1.0},
        {'lr_decay': 0.0},
        {'rounds': -1},
        {'prototype_centering': 'yes'},
    ])
    def test_invalid_values(self, changes):
        with pytest.raises(ConfigError):
            TrainingConfig(**changes).validate()

    def test_lambdas_unchecked_without_decoupled_loss(self):
        TrainingConfig(mode='supcon_baseline', lambda_a=0.5, lambda_u=0.2).validate()

    def test_unknown_mode(self):
        with pytest.raises(ValueError):
            TrainingConfig(mode='fedprox')


class TestExperimentConfig:

    def test_dict_round_trip(self):
        cfg = ExperimentConfig(seed=4)
        assert ExperimentConfig.from_dict(cfg.to_dict()) == cfg

    def test_seed_reaches_training(self):
        assert ExperimentConfig.from_dict({'seed': 11}).training.seed == 11

    def test_unknown_keys(self):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict({'nonsense': 1})
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict({'training': {'nonsense': 1}})
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict({'data': {'nonsense': 1}})

    def test_min_size_defaults_to_batch_size(self):
        cfg = ExperimentConfig.from_dict({'training': {'batch_size': 16}})
        assert cfg.min_size == 16
        assert ExperimentConfig.from_dict({'partition': {'min_size': 3}}).min_size == 3

    @pytest.mark.parametrize("alpha", ['iid', 'inf', float('inf')])
    def test_iid_markers(self, alpha):
        assert PartitionConfig(alpha=alpha).is_iid

    def test_bad_alpha(self):
        with pytest.raises(ConfigError):
            PartitionConfig(alpha='lots')
        with pytest.raises(ConfigError):
            PartitionConfig(alpha=-1.0).validate()

    def test_cifar_needs_paths(self):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict({'data': {'source': 'cifar10'}}).validate(check_paths=False)

    def test_grid_must_increase(self):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict({'asymptotics': {'m_grid': [100, 10]}}).validate(check_paths=False)

    def test_output_dir_created(self, tmp_path):
        cfg = ExperimentConfig(output_dir=str(tmp_path / "a" / "b")).validate()
        assert (tmp_path / "a" / "b").is_dir()
        assert cfg.output_dir.endswith("b")

    def test_output_dir_not_creatable(self, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("x")
        with pytest.raises(ConfigError):
            ExperimentConfig(output_dir=str(blocker / "sub")).validate()


class TestAssignments:

    def test_json_values(self):
        assert parse_assignment("training.mu=1") == (['training', 'mu'], 1)
        assert parse_assignment("asymptotics.m_grid=[10,100]") == (['asymptotics', 'm_grid'], [10, 100])

    def test_string_fallback(self):
        assert parse_assignment("training.mode=sample_wise") == (['training', 'mode'], 'sample_wise')

    def test_missing_equals(self):
        with pytest.raises(ConfigError):
            parse_assignment("training.mu")

    def test_deep_merge_keeps_siblings(self):
        merged = deep_merge({'a': {'b': 1, 'c': 2}}, {'a': {'c': 3}})
        assert merged == {'a': {'b': 1, 'c': 3}}


class TestResolution:

    def test_precedence(self, loader, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({'seed': 1, 'workers': 1, 'training': {'mu': 5, 'rounds': 7}}))
        cfg = loader.resolve(
            str(path),
            flags={'training.mu': 2.0, 'seed': None},
            assignments=['training.mu=3', 'training.mode=sample_wise'],
            env={'workers': 4},
            check_paths=False,
        )
        assert cfg.seed == 1
        assert cfg.workers == 4
        assert cfg.training.rounds == 7
        assert cfg.training.mu == 3
        assert cfg.training.mode is TrainingMode.SAMPLE_WISE

    def test_flags_beat_environment(self, loader):
        cfg = loader.resolve(None, flags={'workers': 2}, env={'workers': 4}, check_paths=False)
        assert cfg.workers == 2

    def test_output_root_reroots_run_directory(self, loader, tmp_path):
        cfg = loader.resolve(None, flags={}, env={'output_root': str(tmp_path)}, check_paths=False)
        assert cfg.output_dir == str(tmp_path / "default")

    def test_missing_file(self, loader, tmp_path):
        with pytest.raises(ConfigError):
            loader.resolve(str(tmp_path / "absent.json"), env={}, check_paths=False)

    def test_malformed_file(self, loader, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(ConfigError):
            loader.resolve(str(path), env={}, check_paths=False)

    def test_environment_settings(self, monkeypatch, tmp_path):
        monkeypatch.setenv('FEDCONTRAST_OUTPUT_ROOT', str(tmp_path))
        monkeypatch.setenv('FEDCONTRAST_WORKERS', '3')
        Config.reload()
        try:
            assert Config.env_overrides() == {'output_root': str(tmp_path), 'workers': 3}
        finally:
            monkeypatch.delenv('FEDCONTRAST_OUTPUT_ROOT')
            monkeypatch.delenv('FEDCONTRAST_WORKERS')
            Config.reload()
