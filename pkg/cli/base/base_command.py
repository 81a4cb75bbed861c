"""
Base command class providing core functionality for all CLI commands.
"""

import logging
from pathlib import Path
from typing import Any, Dict, Optional

from silantui import ModernLogger

from config import Config
from models.experiment import ExperimentConfig
from utils.config_loader import config_loader
from utils.results_writer import ResultsWriter
from utils.run_display import run_display


class BaseCommand(ModernLogger):
    """
    Base class for all CLI commands.
    Provides config resolution, logging and the results writer.
    """

    def __init__(self):
        """Initialize the base command."""
        super().__init__("ExperimentCLI")
        self.display = run_display
        self.config_loader = config_loader
        self._file_handler: Optional[logging.FileHandler] = None

    def setup_logging(self, output_dir: Path, level: Optional[str] = None):
        """Setup logging configuration."""
        # Only configure file handler, ModernLogger already handles console output
        root_logger = logging.getLogger()
        root_logger.setLevel(getattr(logging, (level or Config.LOG_LEVEL).upper(), logging.INFO))

        if self._file_handler is not None:
            root_logger.removeHandler(self._file_handler)
            self._file_handler.close()
        output_dir.mkdir(parents=True, exist_ok=True)
        self._file_handler = logging.FileHandler(output_dir / Config.LOG_FILE)
        self._file_handler.setFormatter(logging.Formatter(Config.LOG_FORMAT))
        root_logger.addHandler(self._file_handler)

    def close_logging(self):
        if self._file_handler is not None:
            logging.getLogger().removeHandler(self._file_handler)
            self._file_handler.close()
            self._file_handler = None

    def resolve_config(self, args, flags: Dict[str, Any]) -> ExperimentConfig:
        """Merge defaults, config file, environment, flags and --set overrides, then validate."""
        common = {
            'seed': args.seed,
            'output_dir': args.output_dir,
            'workers': args.workers,
        }
        common.update(flags)
        return self.config_loader.resolve(args.config, common, args.assignments)

    def prepare_run(self, args, flags: Dict[str, Any]):
        """
        Resolve the config, open the run directory and record the resolved config.

        Returns:
            Tuple of (config, writer)
        """
        cfg = self.resolve_config(args, flags)
        writer = ResultsWriter(cfg.output_dir)
        self.setup_logging(writer.output_dir, args.log_level)
        writer.write_resolved_config(cfg)
        self.info(f"[ExperimentCLI] {args.command}: output in {writer.output_dir}")
        return cfg, writer
