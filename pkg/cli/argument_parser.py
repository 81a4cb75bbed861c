"""
Argument parser for CLI commands.
"""

import argparse

from config import Config
from core.modes import AggregationRule, TrainingMode


def alpha_type(text: str):
    """Dirichlet concentration: a positive number, or 'iid' / 'inf' for the IID split."""
    if text.lower() in ('iid', 'inf', 'infinity'):
        return 'iid'
    try:
        value = float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"alpha must be a number or 'iid', got {text!r}") from exc
    if value == float('inf'):
        return 'iid'
    return value


def int_list_type(text: str):
    try:
        return [int(part) for part in text.split(',') if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


class CLIArgumentParser:
    """
    Creates and manages command-line argument parser.
    """

    @staticmethod
    def _common_options() -> argparse.ArgumentParser:
        """Options accepted by every subcommand."""
        common = argparse.ArgumentParser(add_help=False)
        common.add_argument('--config', type=str, help='Experiment config JSON (e.g., experiment_config.json)')
        common.add_argument('--output-dir', type=str, help='Directory for all outputs of this run')
        common.add_argument('--seed', type=int, help='Top-level seed for every random stream')
        common.add_argument('--workers', type=int, help='Worker threads (default: 1 or FEDCONTRAST_WORKERS)')
        common.add_argument('--set', dest='assignments', action='append', default=[], metavar='KEY.PATH=VALUE',
                            help='Override any config value, e.g. --set training.mu=1 (repeatable, applied last)')
        common.add_argument('--log-level', type=str, default=None,
                            help=f'Logging level (default: {Config.LOG_LEVEL})')
        return common

    @staticmethod
    def create_parser() -> argparse.ArgumentParser:
        """Create argument parser."""
        common = CLIArgumentParser._common_options()
        parser = argparse.ArgumentParser(
            description='fedcontrast: federated decoupled contrastive learning simulator',
            formatter_class=argparse.RawDescriptionHelpFormatter
        )
        subparsers = parser.add_subparsers(dest='command', help='Commands')

        # Partition command
        partition_parser = subparsers.add_parser('partition', parents=[common],
                                                 help='Split the training set across clients')
        partition_parser.add_argument('--alpha', type=alpha_type, help="Dirichlet alpha, or 'iid'")
        partition_parser.add_argument('--n-clients', type=int, help='Number of clients')
        partition_parser.add_argument('--min-size', type=int, help='Minimum samples per client (default: batch size)')
        partition_parser.add_argument('--export-data', action='store_true',
                                      help='Also export the training set as CSV')

        # Train command
        train_parser = subparsers.add_parser('train', parents=[common], help='Run federated training')
        train_parser.add_argument('--mode', type=str, choices=[m.value for m in TrainingMode],
                                  help='Local objective')
        train_parser.add_argument('--aggregation', type=str, choices=[a.value for a in AggregationRule],
                                  help='Server aggregation rule')
        train_parser.add_argument('--rounds', type=int, help='Communication rounds T')
        train_parser.add_argument('--n-clients', type=int, help='Number of clients')
        train_parser.add_argument('--participation', type=float, help='Fraction of clients per round')
        train_parser.add_argument('--mu', type=float, help='Regularizer weight')
        train_parser.add_argument('--alpha', type=alpha_type, help="Dirichlet alpha, or 'iid'")
        train_parser.add_argument('--plan', type=str, help='Existing partition plan JSON')

        # Asymptotics command
        asym_parser = subparsers.add_parser('asymptotics', parents=[common],
                                            help='Monte-Carlo convergence of the contrastive loss in M')
        asym_parser.add_argument('--tau', type=float, help='Temperature')
        asym_parser.add_argument('--trials', type=int, help='Anchor/positive pairs per estimate')
        asym_parser.add_argument('--inner-samples', type=int, help='Negatives per anchor for the limit estimate')
        asym_parser.add_argument('--m-grid', type=int_list_type, help='Comma-separated negative counts M')

        # Report command
        report_parser = subparsers.add_parser('report', parents=[common],
                                              help='Accuracy, alignment/uniformity and similarity histograms')
        report_parser.add_argument('--checkpoint', type=str,
                                   help=f'Checkpoint file (default: <output-dir>/{Config.CHECKPOINT_FILE})')
        report_parser.add_argument('--untrained', action='store_true',
                                   help='Evaluate a freshly initialized model instead of the checkpoint')

        return parser
