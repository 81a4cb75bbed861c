"""
Report command - evaluates a checkpoint (or an untrained model) on the test set.
"""

from pathlib import Path

from config import Config
from federation.checkpoint import load_checkpoint
from metrics.accuracy import accuracy
from metrics.histogram import cosine_histogram
from metrics.representation import metric_sample_indices, representation_metrics
from models.embeddings import EmbeddingBatch
from utils.seeding import derive_rng


class ReportCommand:
    """
    Handles 'report' command.
    """

    def cmd_report(self, args) -> int:
        """Write accuracy, alignment/uniformity and intra/inter similarity histograms."""
        cfg, writer = self.prepare_run(args, {})
        train, test = self._load_datasets(cfg)
        model = self._build_model(cfg, train)

        if args.untrained:
            params = model.init_params(derive_rng(cfg.seed, "model", "init"))
            suffix = '_untrained'
            self.info("[ExperimentCLI] Evaluating the untrained model")
        else:
            path = Path(args.checkpoint) if args.checkpoint else writer.path(Config.CHECKPOINT_FILE)
            params = load_checkpoint(path, expected=model.architecture).params
            suffix = ''
            self.info(f"[ExperimentCLI] Evaluating checkpoint {path}")

        embeddings = model.embed(params, test.inputs)
        idx = metric_sample_indices(test.n_samples, cfg.metrics.metric_sample_size, cfg.seed)
        align, uniform = representation_metrics(
            embeddings[idx], test.labels[idx],
            a_exp=cfg.metrics.align_exponent,
            t=cfg.metrics.uniform_t,
            max_pairs=cfg.metrics.histogram_max_pairs,
            rng=derive_rng(cfg.seed, "metrics", "pairs"),
        )
        histogram = cosine_histogram(
            EmbeddingBatch.from_array(embeddings, test.labels, test.n_classes),
            max_pairs=cfg.metrics.histogram_max_pairs,
            seed=cfg.seed,
        )
        metrics = {
            'accuracy': accuracy(params, test, model),
            'alignment': align,
            'uniformity': uniform,
            'intra_mean': histogram.intra_mean,
            'inter_mean': histogram.inter_mean,
            'similarity_gap': histogram.mean_gap,
            'intra_pairs': float(histogram.intra_counts.sum()),
            'inter_pairs': float(histogram.inter_counts.sum()),
        }
        writer.write_metrics(metrics, name=Config.METRICS_CSV.replace(".csv", f"{suffix}.csv"))
        writer.write_histogram(histogram, name=Config.HISTOGRAM_CSV.replace(".csv", f"{suffix}.csv"))
        self.display.show_key_values("Report" + (" (untrained)" if args.untrained else ""), metrics)
        return 0
