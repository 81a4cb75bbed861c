"""
Main ExperimentCLI class - combines all command functionality.
"""

import sys

from cli.argument_parser import CLIArgumentParser
from cli.base import BaseCommand, CLIHelpers
from cli.commands import AsymptoticsCommand, PartitionCommand, ReportCommand, TrainCommand
from core.errors import FedContrastError


class ExperimentCLI(
    BaseCommand,
    CLIHelpers,
    PartitionCommand,
    TrainCommand,
    AsymptoticsCommand,
    ReportCommand
):
    """
    Command-line interface for the simulator.
    Combines all command functionality through multiple inheritance.

    Inheritance hierarchy:
    - BaseCommand: config resolution, logging, results writer
    - CLIHelpers: dataset, model and partition construction
    - PartitionCommand: partition
    - TrainCommand: train
    - AsymptoticsCommand: asymptotics
    - ReportCommand: report
    """

    def __init__(self):
        """Initialize the CLI."""
        BaseCommand.__init__(self)

    def create_parser(self):
        """Create argument parser."""
        return CLIArgumentParser.create_parser()

    def run(self, argv=None) -> int:
        """
        Run the CLI.

        Returns:
            Process exit code: 0 on success, 1 on error, 2 on a divergence abort
        """
        parser = self.create_parser()
        args = parser.parse_args(argv)

        if not args.command:
            parser.print_help()
            return 1

        # Dispatch to command handler
        command_handlers = {
            'partition': self.cmd_partition,
            'train': self.cmd_train,
            'asymptotics': self.cmd_asymptotics,
            'report': self.cmd_report,
        }

        handler = command_handlers.get(args.command)
        if handler is None:
            print(f"Unknown command: {args.command}")
            parser.print_help()
            return 1

        try:
            return handler(args)
        except FedContrastError as exc:
            self.error(f"[ExperimentCLI] {args.command} failed: {exc}")
            self.display.show_error(str(exc))
            return 1
        finally:
            self.close_logging()


def main(argv=None):
    """Main entry point."""
    cli = ExperimentCLI()
    sys.exit(cli.run(argv))


if __name__ == '__main__':
    main()
