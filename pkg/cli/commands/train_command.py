"""
Train command - runs federated training end to end.
"""

from config import Config
from federation.checkpoint import Checkpoint, save_checkpoint
from federation.server import FederatedServer


class TrainCommand:
    """
    Handles 'train' command.
    """

    def cmd_train(self, args) -> int:
        """
        Train and write the round CSV, final checkpoint and summary JSON.

        Returns:
            0 when every round completed, 2 when training diverged
        """
        cfg, writer = self.prepare_run(args, {
            'training.mode': args.mode,
            'training.aggregation': args.aggregation,
            'training.rounds': args.rounds,
            'training.n_clients': args.n_clients,
            'training.participation': args.participation,
            'training.mu': args.mu,
            'partition.alpha': args.alpha,
        })
        train, test = self._load_datasets(cfg)
        plan = self._make_plan(cfg, train, args.plan)
        plan.save(writer.path(Config.PLAN_JSON))
        model = self._build_model(cfg, train)

        server = FederatedServer(
            cfg.training, model, train, test, plan,
            metrics=cfg.metrics, workers=cfg.workers, round_callback=writer.append_round,
        )
        writer.open_rounds()
        try:
            result = server.run()
        finally:
            writer.close_rounds()

        save_checkpoint(writer.path(Config.CHECKPOINT_FILE), Checkpoint(
            params=result.state.params,
            architecture=model.architecture,
            round=result.state.round,
            lr=result.state.lr,
            prototypes=result.state.prototypes,
            metadata={'mode': cfg.training.mode.value, 'seed': cfg.seed},
        ))
        summary = result.summary(cfg.training.mode)
        writer.write_summary(summary)
        self.display.show_training(result.records, summary)

        if result.diverged:
            self.display.show_error(f"{result.error} ({result.rounds_completed} rounds kept)")
            return 2
        return 0
