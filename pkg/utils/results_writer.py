"""
Results Writer
CSV and JSON outputs of a run directory.
"""

import csv
import json
from pathlib import Path
from typing import Any, Dict, List, Optional, TextIO, Union

from silantui import ModernLogger

from config import Config
from models.experiment import ExperimentConfig
from models.records import ROUND_CSV_HEADER, AsymptoticsReport, RoundRecord, SimilarityHistogram

HISTOGRAM_CSV_HEADER = ('category', 'bin_left', 'bin_right', 'count')
METRICS_CSV_HEADER = ('metric', 'value')
ASYMPTOTICS_CSV_HEADER = ('M', 'empirical', 'limit', 'gap', 'bound')


def write_json(path: Union[str, Path], payload: Dict[str, Any]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(payload, f, indent=2, sort_keys=True)
        f.write('\n')
    return path


def read_rounds(path: Union[str, Path]) -> List[RoundRecord]:
    with open(path, 'r', newline='', encoding='utf-8') as f:
        return [RoundRecord.from_csv_row(row) for row in csv.DictReader(f)]


class ResultsWriter(ModernLogger):
    """
    Writes everything a command produces into one output directory.
    The round CSV is appended and flushed after every round, so a run that
    aborts keeps the rounds it completed.
    """

    def __init__(self, output_dir: Union[str, Path]):
        super().__init__("ResultsWriter")
        self.output_dir = Path(output_dir)
        self.output_dir.mkdir(parents=True, exist_ok=True)
        self._rounds_file: Optional[TextIO] = None
        self._rounds_writer = None

    def path(self, name: str) -> Path:
        return self.output_dir / name

    def write_resolved_config(self, cfg: ExperimentConfig) -> Path:
        path = write_json(self.path(Config.RESOLVED_CONFIG_JSON), cfg.to_dict())
        self.debug(f"[ResultsWriter] Resolved config written to {path}")
        return path

    # ==============================================
    # Round CSV
    # ==============================================

    def open_rounds(self) -> Path:
        path = self.path(Config.ROUNDS_CSV)
        self._rounds_file = open(path, 'w', newline='', encoding='utf-8')
        self._rounds_writer = csv.writer(self._rounds_file, lineterminator='\n')
        self._rounds_writer.writerow(ROUND_CSV_HEADER)
        self._rounds_file.flush()
        return path

    def append_round(self, record: RoundRecord, *_) -> None:
        if self._rounds_writer is None:
            self.open_rounds()
        self._rounds_writer.writerow(record.csv_row())
        self._rounds_file.flush()

    def close_rounds(self) -> None:
        if self._rounds_file is not None:
            self._rounds_file.close()
            self._rounds_file = None
            self._rounds_writer = None

    # ==============================================
    # Other outputs
    # ==============================================

    def write_summary(self, summary: Dict[str, Any], name: str = Config.SUMMARY_JSON) -> Path:
        return write_json(self.path(name), summary)

    def _write_rows(self, name: str, header, rows) -> Path:
        path = self.path(name)
        with open(path, 'w', newline='', encoding='utf-8') as f:
            writer = csv.writer(f, lineterminator='\n')
            writer.writerow(header)
            writer.writerows(rows)
        self.info(f"[ResultsWriter] Wrote {path}")
        return path

    def write_histogram(self, histogram: SimilarityHistogram, name: str = Config.HISTOGRAM_CSV) -> Path:
        rows = [(category, repr(left), repr(right), count) for category, left, right, count in histogram.rows()]
        return self._write_rows(name, HISTOGRAM_CSV_HEADER, rows)

    def write_metrics(self, metrics: Dict[str, float], name: str = Config.METRICS_CSV) -> Path:
        rows = [(key, repr(float(value))) for key, value in metrics.items()]
        return self._write_rows(name, METRICS_CSV_HEADER, rows)

    def write_asymptotics(self, report: AsymptoticsReport) -> Path:
        rows = [(m, repr(e), repr(l), repr(g), repr(b)) for m, e, l, g, b in report.rows()]
        path = self._write_rows(Config.ASYMPTOTICS_CSV, ASYMPTOTICS_CSV_HEADER, rows)
        write_json(self.path(Config.ASYMPTOTICS_JSON), report.summary())
        return path
