"""
End-to-end tests for the command-line interface on a tiny synthetic problem.
"""

import csv
import json

import numpy as np
import pytest

from cli import ExperimentCLI
from models.partition_plan import PartitionPlan
from models.records import ROUND_CSV_HEADER
from utils.results_writer import read_rounds

TINY = {
    'seed': 0,
    'data': {'n_classes': 3, 'dim': 4, 'n_per_class': 30, 'spread': 0.3},
    'partition': {'alpha': 'iid'},
    'training': {
        'rounds': 2, 'n_clients': 3, 'participation': 1.0, 'local_epochs': 1,
        'batch_size': 8, 'mu': 1.0, 'lr': 0.05,
    },
    'model': {'hidden_dims': [8], 'feature_dim': 6, 'embedding_dim': 5},
    'metrics': {'histogram_max_pairs': 500, 'metric_sample_size': 50},
    'asymptotics': {'dim': 4, 'trials': 20, 'inner_samples': 2000},
}


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "tiny.json"
    path.write_text(json.dumps(TINY))
    return path


def run(config_file, command, output_dir, *extra):
    return ExperimentCLI().run([command, '--config', str(config_file), '--output-dir', str(output_dir), *extra])


def read_csv(path):
    with open(path, newline='') as f:
        return list(csv.DictReader(f))


class TestPartitionCommand:

    def test_writes_plan(self, config_file, tmp_path):
        out = tmp_path / "part"
        assert run(config_file, 'partition', out, '--alpha', '0.5') == 0
        plan = PartitionPlan.load(out / "plan.json")
        assert plan.n_clients == 3
        assert plan.alpha == 0.5
        assert plan.is_disjoint_cover(72)
        assert (out / "config_resolved.json").exists()

    def test_iid_flag(self, config_file, tmp_path):
        out = tmp_path / "iid"
        assert run(config_file, 'partition', out, '--alpha', 'iid') == 0
        plan = PartitionPlan.load(out / "plan.json")
        assert plan.is_iid
        assert plan.client_sizes() == [24, 24, 24]

    def test_export_data(self, config_file, tmp_path):
        out = tmp_path / "export"
        assert run(config_file, 'partition', out, '--export-data') == 0
        assert len(read_csv(out / "dataset_train.csv")) == 72

    def test_impossible_min_size(self, config_file, tmp_path):
        assert run(config_file, 'partition', tmp_path / "bad", '--alpha', '0.01', '--min-size', '25') == 1


class TestTrainCommand:

    def test_outputs(self, config_file, tmp_path):
        out = tmp_path / "run"
        assert run(config_file, 'train', out) == 0
        with open(out / "rounds.csv", newline='') as f:
            assert next(csv.reader(f)) == list(ROUND_CSV_HEADER)
        records = read_rounds(out / "rounds.csv")
        assert [r.round for r in records] == [1, 2]
        assert all(r.client_ids == (0, 1, 2) for r in records)
        summary = json.loads((out / "summary.json").read_text())
        assert summary['rounds_completed'] == 2
        assert summary['mode'] == 'prototype_wise'
        assert not summary['diverged']
        assert summary['max_acc'] == max(r.test_acc for r in records)
        assert summary['final_ema_acc'] == records[-1].ema_acc
        for name in ("final.ckpt", "plan.json", "config_resolved.json", "fedcontrast.log"):
            assert (out / name).exists()

    def test_rerun_is_byte_identical(self, config_file, tmp_path):
        assert run(config_file, 'train', tmp_path / "a") == 0
        assert run(config_file, 'train', tmp_path / "b") == 0
        assert (tmp_path / "a" / "rounds.csv").read_bytes() == (tmp_path / "b" / "rounds.csv").read_bytes()

    def test_resolved_config_reproduces_run(self, config_file, tmp_path):
        assert run(config_file, 'train', tmp_path / "a", '--set', 'training.mode=sample_wise') == 0
        resolved = tmp_path / "a" / "config_resolved.json"
        assert run(resolved, 'train', tmp_path / "b") == 0
        assert (tmp_path / "a" / "rounds.csv").read_bytes() == (tmp_path / "b" / "rounds.csv").read_bytes()

    def test_worker_count_does_not_change_output(self, config_file, tmp_path):
        assert run(config_file, 'train', tmp_path / "one", '--workers', '1') == 0
        assert run(config_file, 'train', tmp_path / "two", '--workers', '2') == 0
        assert (tmp_path / "one" / "rounds.csv").read_bytes() == (tmp_path / "two" / "rounds.csv").read_bytes()

    def test_saved_plan_is_reused(self, config_file, tmp_path):
        assert run(config_file, 'partition', tmp_path / "p", '--alpha', '1.0') == 0
        plan_path = tmp_path / "p" / "plan.json"
        assert run(config_file, 'train', tmp_path / "t", '--plan', str(plan_path)) == 0
        assert PartitionPlan.load(tmp_path / "t" / "plan.json").same_as(PartitionPlan.load(plan_path))

    @pytest.mark.parametrize("mode", ['fedavg_plain', 'supcon_baseline', 'sample_wise', 'prototype_wise'])
    def test_every_mode_runs(self, config_file, tmp_path, mode):
        assert run(config_file, 'train', tmp_path / mode, '--mode', mode, '--rounds', '1') == 0
        assert json.loads((tmp_path / mode / "summary.json").read_text())['mode'] == mode

    def test_divergence_exit_code(self, config_file, tmp_path):
        out = tmp_path / "diverge"
        assert run(config_file, 'train', out, '--set', 'training.divergence_threshold=1e-9') == 2
        assert read_rounds(out / "rounds.csv") == []
        assert json.loads((out / "summary.json").read_text())['diverged'] is True

    def test_invalid_config(self, config_file, tmp_path):
        assert run(config_file, 'train', tmp_path / "x", '--set', 'training.lambda_a=0.5') == 1
        assert run(config_file, 'train', tmp_path / "y", '--set', 'training.bogus=1') == 1

    def test_missing_config_file(self, tmp_path):
        assert run(tmp_path / "absent.json", 'train', tmp_path / "z") == 1

    def test_no_command(self):
        assert ExperimentCLI().run([]) == 1


class TestAsymptoticsCommand:

    def test_rows_and_bound(self, config_file, tmp_path):
        out = tmp_path / "asym"
        assert run(config_file, 'asymptotics', out) == 0
        rows = read_csv(out / "asymptotics.csv")
        assert [int(r['M']) for r in rows] == [10, 100, 1000, 10_000, 100_000]
        for row in rows:
            assert float(row['bound']) == pytest.approx(np.exp(2.0 / 0.5) / int(row['M']), rel=1e-12)
        summary = json.loads((out / "asymptotics.json").read_text())
        assert summary['m_grid'] == [10, 100, 1000, 10_000, 100_000]
        assert 'slope' in summary

    def test_grid_flag(self, config_file, tmp_path):
        out = tmp_path / "grid"
        assert run(config_file, 'asymptotics', out, '--m-grid', '5,50', '--tau', '1.0') == 0
        rows = read_csv(out / "asymptotics.csv")
        assert [int(r['M']) for r in rows] == [5, 50]
        assert float(rows[0]['bound']) == pytest.approx(np.exp(2.0) / 5, rel=1e-12)

    def test_decreasing_grid_rejected(self, config_file, tmp_path):
        assert run(config_file, 'asymptotics', tmp_path / "bad", '--m-grid', '50,5') == 1


class TestReportCommand:

    @pytest.fixture
    def trained(self, config_file, tmp_path):
        out = tmp_path / "trained"
        assert run(config_file, 'train', out) == 0
        return out

    def test_checkpoint_report(self, config_file, trained):
        assert run(config_file, 'report', trained) == 0
        metrics = {row['metric']: float(row['value']) for row in read_csv(trained / "metrics.csv")}
        assert 0.0 <= metrics['accuracy'] <= 1.0
        assert metrics['uniformity'] <= 0.0
        histogram = read_csv(trained / "histogram.csv")
        assert [r['category'] for r in histogram].count('intra') == 40
        assert [r['category'] for r in histogram].count('inter') == 40
        assert sum(int(r['count']) for r in histogram if r['category'] == 'intra') == metrics['intra_pairs']

    def test_untrained_report(self, config_file, trained):
        assert run(config_file, 'report', trained, '--untrained') == 0
        assert (trained / "metrics_untrained.csv").exists()
        assert (trained / "histogram_untrained.csv").exists()

    def test_architecture_mismatch(self, config_file, trained):
        assert run(config_file, 'report', trained, '--set', 'model.feature_dim=7') == 1

    def test_missing_checkpoint(self, config_file, tmp_path):
        assert run(config_file, 'report', tmp_path / "empty") == 1

    def test_report_metrics_use_the_training_metric_sample(self, config_file, tmp_path):
        out = tmp_path / "sampled"
        assert run(config_file, 'train', out, '--set', 'metrics.metric_sample_size=7') == 0
        assert run(config_file, 'report', out, '--set', 'metrics.metric_sample_size=7') == 0
        metrics = {row['metric']: float(row['value']) for row in read_csv(out / "metrics.csv")}
        last = read_rounds(out / "rounds.csv")[-1]
        assert metrics['uniformity'] == pytest.approx(last.uniform_metric, rel=1e-12)
        assert metrics['alignment'] == pytest.approx(last.align_metric, rel=1e-12, nan_ok=True)
