"""
Process-level configuration for fedcontrast.
"""

import os
from pathlib import Path

# Load .env file if it exists
try:
    from dotenv import load_dotenv
    load_dotenv()
except ImportError:
    # python-dotenv not installed, skip
    pass


class Config:
    """
    Settings read from the environment.
    Experiment hyperparameters live in ExperimentConfig, not here.
    """

    # ==============================================
    # Output Settings
    # ==============================================

    # Root directory for run outputs (overrides the config file's output_dir root)
    OUTPUT_ROOT = os.getenv('FEDCONTRAST_OUTPUT_ROOT')

    # Default output directory when neither config nor flags name one
    DEFAULT_OUTPUT_DIR = Path('runs') / 'default'

    # File names inside a run directory
    ROUNDS_CSV = 'rounds.csv'
    SUMMARY_JSON = 'summary.json'
    RESOLVED_CONFIG_JSON = 'config_resolved.json'
    PLAN_JSON = 'plan.json'
    CHECKPOINT_FILE = 'final.ckpt'
    HISTOGRAM_CSV = 'histogram.csv'
    METRICS_CSV = 'metrics.csv'
    ASYMPTOTICS_CSV = 'asymptotics.csv'
    ASYMPTOTICS_JSON = 'asymptotics.json'
    DATASET_CSV = 'dataset_train.csv'

    # ==============================================
    # Execution Settings
    # ==============================================

    # Worker threads for client updates and Monte-Carlo chunks (None = from config file)
    WORKERS = os.getenv('FEDCONTRAST_WORKERS')

    # ==============================================
    # Logging Settings
    # ==============================================

    LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO')
    LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    LOG_FILE = 'fedcontrast.log'

    @classmethod
    def env_overrides(cls) -> dict:
        """Experiment-config keys set from the environment."""
        overrides = {}
        if cls.OUTPUT_ROOT:
            overrides['output_root'] = cls.OUTPUT_ROOT
        if cls.WORKERS:
            overrides['workers'] = int(cls.WORKERS)
        return overrides

    @classmethod
    def reload(cls):
        """Re-read the environment (tests patch variables after import)."""
        cls.OUTPUT_ROOT = os.getenv('FEDCONTRAST_OUTPUT_ROOT')
        cls.WORKERS = os.getenv('FEDCONTRAST_WORKERS')
        cls.LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO')
