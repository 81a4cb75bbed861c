"""
Run Display Helper
Terminal tables and panels for CLI results using Rich library.
"""

from typing import Any, Dict, List, Optional, Sequence

try:
    from rich.console import Console
    from rich.panel import Panel
    from rich.table import Table
    from rich import box
    RICH_AVAILABLE = True
except ImportError:
    RICH_AVAILABLE = False
    print("⚠️  Rich library not installed. Install with: pip install rich>=13.7.0")

from models.partition_plan import PartitionPlan
from models.records import AsymptoticsReport, RoundRecord


def _fmt(value: Optional[float], digits: int = 4) -> str:
    if value is None:
        return "-"
    return f"{value:.{digits}f}"


class RunDisplay:
    """Renders partitions, training summaries, reports and errors."""

    def __init__(self):
        self.console = Console() if RICH_AVAILABLE else None

    def _print_table(self, title: str, columns: Sequence[str], rows: List[Sequence[str]]) -> None:
        if not RICH_AVAILABLE or not self.console:
            print(f"\n{title}")
            print("  ".join(columns))
            for row in rows:
                print("  ".join(row))
            return
        table = Table(title=title, box=box.ROUNDED)
        for i, column in enumerate(columns):
            table.add_column(column, style="cyan bold" if i == 0 else "white", justify="right" if i else "left")
        for row in rows:
            table.add_row(*row)
        self.console.print(table)

    def show_partition(self, plan: PartitionPlan, max_clients: int = 20) -> None:
        """Per-client class histogram (first ``max_clients`` clients)."""
        n_classes = plan.n_classes or (len(plan.class_histograms[0]) if plan.class_histograms else 0)
        columns = ["client", "size"] + [f"c{c}" for c in range(n_classes)]
        rows = []
        for k, indices in enumerate(plan.assignments[:max_clients]):
            histogram = plan.class_histograms[k] if plan.class_histograms else []
            rows.append([str(k), str(indices.size)] + [str(v) for v in histogram])
        alpha = "iid" if plan.is_iid else f"{plan.alpha:g}"
        self._print_table(f"Partition (alpha={alpha}, seed={plan.seed})", columns, rows)
        if plan.n_clients > max_clients:
            self.message(f"... {plan.n_clients - max_clients} more clients")

    def show_training(self, records: List[RoundRecord], summary: Dict[str, Any]) -> None:
        tail = records[-5:]
        rows = [[str(r.round), _fmt(r.train_loss), _fmt(r.test_acc), _fmt(r.ema_acc),
                 _fmt(r.align_metric), _fmt(r.uniform_metric)] for r in tail]
        self._print_table("Last rounds", ["round", "loss", "acc", "ema", "align", "uniform"], rows)
        self.show_key_values("Summary", summary)

    def show_asymptotics(self, report: AsymptoticsReport) -> None:
        rows = [[str(m), _fmt(e, 6), _fmt(l, 6), f"{g:.3e}", f"{b:.3e}"] for m, e, l, g, b in report.rows()]
        self._print_table(f"Convergence (tau={report.tau:g}, trials={report.trials})",
                          ["M", "empirical", "limit", "gap", "bound"], rows)
        self.show_key_values("Fit", {'slope': report.slope, 'fitted_constant': report.fitted_constant})

    def show_key_values(self, title: str, values: Dict[str, Any]) -> None:
        rows = []
        for key, value in values.items():
            text = _fmt(value) if isinstance(value, float) else str(value)
            rows.append([key, text])
        self._print_table(title, ["key", "value"], rows)

    def message(self, text: str) -> None:
        if self.console:
            self.console.print(f"[dim]{text}[/dim]")
        else:
            print(text)

    def show_error(self, text: str) -> None:
        if not RICH_AVAILABLE or not self.console:
            print(f"❌ {text}")
            return
        self.console.print(Panel(text, title="Error", border_style="red"))


run_display = RunDisplay()
