"""
Experiment Runner

Sets up logging, dispatches the configured experiment, runs its work items
on a bounded process pool and writes the output tables.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Sequence

from .aggregate import PLOTDATA_FIELDS
from .config import ExperimentConfig
from .experiments import EXPERIMENTS, ExperimentResult
from .records import CsvSerializer


@dataclass
class RunSummary:
    """What a run produced"""
    experiment: str
    outputs: List[Path] = field(default_factory=list)
    rows: int = 0
    flagged: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "experiment": self.experiment,
            "outputs": [str(p) for p in self.outputs],
            "rows": self.rows,
            "flagged": self.flagged,
        }


class ExperimentRunner:
    """
    Runs one configured experiment end to end.

    Usage:
        runner = ExperimentRunner(ExperimentConfig.from_yaml("config.yaml"))
        summary = runner.run()
    """

    def __init__(self, config: ExperimentConfig):
        self.config = config
        self._setup_logging()
        self.logger.info(f"Runner initialized with config: {self.config.to_dict()}")

    def _setup_logging(self) -> None:
        """Setup logging"""
        self.logger = logging.getLogger("jitterlab")
        self.logger.setLevel(getattr(logging, self.config.log_level.upper()))

        if not self.logger.handlers:
            handler = logging.StreamHandler()
            handler.setFormatter(
                logging.Formatter("[%(asctime)s] %(levelname)s: %(message)s")
            )
            self.logger.addHandler(handler)

        if self.config.log_file:
            file_handler = logging.FileHandler(self.config.log_file)
            file_handler.setFormatter(
                logging.Formatter("[%(asctime)s] %(levelname)s: %(message)s")
            )
            self.logger.addHandler(file_handler)

    def map(self, fn: Callable[[Any], Any], tasks: Sequence[Any]) -> List[Any]:
        """Run tasks inline or on the process pool; results keep task order"""
        if self.config.workers == 1 or len(tasks) <= 1:
            return [fn(task) for task in tasks]
        with ProcessPoolExecutor(max_workers=self.config.workers) as pool:
            return list(pool.map(fn, tasks))

    def execute(self) -> ExperimentResult:
        """Run the experiment without writing anything"""
        experiment = EXPERIMENTS[self.config.experiment]
        self.logger.info(f"Starting experiment {self.config.experiment.value} (seed {self.config.seed})")
        return experiment(self.config, self.map)

    def run(self) -> RunSummary:
        """Run the experiment and write every table"""
        result = self.execute()
        summary = RunSummary(self.config.experiment.value)

        for table in result.tables:
            path = CsvSerializer(table.fieldnames).write(self.config.output_path(table.suffix), table.rows)
            summary.outputs.append(path)
            summary.rows += len(table.rows)
            self.logger.info(f"Wrote {len(table.rows)} rows to {path}")

        if self.config.emit_plotdata:
            if result.summaries:
                path = CsvSerializer(PLOTDATA_FIELDS).write(
                    Path(self.config.emit_plotdata), (s.to_dict() for s in result.summaries)
                )
                summary.outputs.append(path)
                self.logger.info(f"Wrote plot data to {path}")
            else:
                self.logger.warning(f"{self.config.experiment.value} has no per-trial MSE to aggregate")

        summary.flagged = sum(r.failed for r in result.records)
        if summary.flagged:
            self.logger.warning(f"{summary.flagged} trial rows were flagged as failed")
        self.logger.info(f"Experiment {self.config.experiment.value} finished")
        return summary
