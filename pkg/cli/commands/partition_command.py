"""
Partition command - draws a client partition and writes it as JSON.
"""

from config import Config
from core.errors import PartitionError
from data.export import export_dataset_csv


class PartitionCommand:
    """
    Handles 'partition' command.
    """

    def cmd_partition(self, args) -> int:
        """Draw the partition plan, save it, and print per-client class histograms."""
        cfg, writer = self.prepare_run(args, {
            'partition.alpha': args.alpha,
            'training.n_clients': args.n_clients,
            'partition.min_size': args.min_size,
        })
        train, _ = self._load_datasets(cfg)
        try:
            plan = self._make_plan(cfg, train)
        except PartitionError as exc:
            raise PartitionError(
                f"{exc}. Try a larger alpha, fewer clients or a smaller --min-size "
                f"(alpha={cfg.partition.alpha}, min_size={cfg.min_size})"
            ) from exc

        path = plan.save(writer.path(Config.PLAN_JSON))
        self.info(f"[ExperimentCLI] Partition plan with {plan.n_clients} clients written to {path}")
        if args.export_data:
            export_dataset_csv(train, writer.path(Config.DATASET_CSV))
        self.display.show_partition(plan)
        return 0
