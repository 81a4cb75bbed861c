"""
Asymptotics command - Monte-Carlo convergence report.
"""

from asymptotics.monte_carlo import convergence_experiment


class AsymptoticsCommand:
    """
    Handles 'asymptotics' command.
    """

    def cmd_asymptotics(self, args) -> int:
        cfg, writer = self.prepare_run(args, {
            'asymptotics.tau': args.tau,
            'asymptotics.trials': args.trials,
            'asymptotics.inner_samples': args.inner_samples,
            'asymptotics.m_grid': args.m_grid,
        })
        report = convergence_experiment(cfg.asymptotics, cfg.seed, workers=cfg.workers)
        writer.write_asymptotics(report)
        self.display.show_asymptotics(report)
        return 0
