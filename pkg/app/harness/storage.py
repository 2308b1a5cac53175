"""
Run Storage Module

Persists one directory per run and reads it back:

    <root>/<experiment>/<variant>/seed-<seed>/
        metrics.csv       one row per PPO update
        episodes.csv      one row per finished episode
        tasks.csv         one row per task boundary
        scaling.csv       one row per optimizer step (TRAC-family only)
        oco.csv           one row per OCO round (oco_bench only)
        equivalence.csv   one row per step (simplified_equivalence only)
        summary.json      status, error and the terminal summary

Every CSV starts with `# ` comment lines documenting its columns. Floats are
written with repr precision so aggregates recomputed from the files match the
in-memory ones exactly.
"""

import csv
import json
from pathlib import Path

from pydantic import BaseModel

from app.core.exceptions import ExperimentError
from app.core.schema.record import (
    EpisodeRow,
    EquivalenceRow,
    OcoRow,
    RunRecord,
    ScalingRow,
    TaskRow,
    UpdateRow,
)
from app.harness.templates import TemplateManager
from app.logging.factory import logger

SUMMARY_FILE = "summary.json"


class Column(BaseModel):
    """Documented CSV column."""

    name: str
    description: str


def _columns(model: type[BaseModel]) -> list[Column]:
    return [
        Column(name=name, description=field.description or name)
        for name, field in model.model_fields.items()
        if name != "s"
    ]


class RunFile(BaseModel):
    """One CSV file of a run directory."""

    name: str
    title: str
    attribute: str
    row_model: type[BaseModel]

    @property
    def columns(self) -> list[Column]:
        return _columns(self.row_model)


RUN_FILES: list[RunFile] = [
    RunFile(
        name="metrics.csv", title="Per-update metrics", attribute="updates", row_model=UpdateRow,
    ),
    RunFile(
        name="episodes.csv", title="Finished episodes", attribute="episodes", row_model=EpisodeRow,
    ),
    RunFile(name="tasks.csv", title="Task boundaries", attribute="tasks", row_model=TaskRow),
    RunFile(
        name="scaling.csv",
        title="TRAC scaling trace; s_1..s_n are the per-tuner outputs",
        attribute="scaling",
        row_model=ScalingRow,
    ),
    RunFile(name="oco.csv", title="OCO rounds", attribute="oco", row_model=OcoRow),
    RunFile(
        name="equivalence.csv",
        title="Simplified recursion against its closed form",
        attribute="equivalence",
        row_model=EquivalenceRow,
    ),
]


def format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(
    path: Path,
    header: list[str],
    rows: list[list],
    title: str,
    columns: list[Column],
    notes: list[str] | None = None,
) -> Path:
    """Write a CSV whose first lines are the rendered `csv_header` comment block."""
    path.parent.mkdir(parents=True, exist_ok=True)
    comment = TemplateManager.render_comment(
        "csv_header", title=title, columns=columns, notes=notes or []
    )
    with path.open("w", newline="") as handle:
        for line in comment:
            handle.write(line + "\n")
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(value) for value in row])
    return path


def read_csv(path: Path) -> list[dict[str, str]]:
    """Rows of a CSV written by write_csv, comment lines skipped."""
    with path.open(newline="") as handle:
        lines = [line for line in handle if not line.startswith("#")]
    return list(csv.DictReader(lines))


def _rows_for(run_file: RunFile, record: RunRecord) -> tuple[list[str], list[list]]:
    items = getattr(record, run_file.attribute)
    header = [column.name for column in run_file.columns]
    if run_file.row_model is ScalingRow:
        n_tuners = max((len(item.s) for item in items), default=0)
        header += [f"s_{j}" for j in range(1, n_tuners + 1)]
        rows = [[item.step, item.update, item.task_index, item.S, *item.s] for item in items]
        return header, rows
    return header, [[getattr(item, name) for name in header] for item in items]


def run_dir(root: Path, record: RunRecord) -> Path:
    return Path(root) / record.experiment / record.variant / f"seed-{record.seed}"


def write_run(root: str | Path, record: RunRecord) -> Path:
    """Persist every non-empty row stream plus summary.json; returns the run directory."""
    directory = run_dir(Path(root), record)
    directory.mkdir(parents=True, exist_ok=True)
    for run_file in RUN_FILES:
        if not getattr(record, run_file.attribute):
            continue
        header, rows = _rows_for(run_file, record)
        write_csv(
            directory / run_file.name,
            header,
            rows,
            f"{run_file.title} ({record.run_id})",
            run_file.columns,
        )

    meta = record.model_dump(
        mode="json",
        include={"experiment", "variant", "seed", "status", "error", "summary", "extra"},
    )
    (directory / SUMMARY_FILE).write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    logger.debug("Stored run %s in %s", record.run_id, directory)
    return directory


def _parse_row(run_file: RunFile, raw: dict[str, str]) -> BaseModel:
    values: dict = {key: (None if value == "" else value) for key, value in raw.items()}
    if run_file.row_model is ScalingRow:
        tuner_keys = sorted((k for k in values if k.startswith("s_")), key=lambda k: int(k[2:]))
        values["s"] = [float(values.pop(key)) for key in tuner_keys]
    return run_file.row_model.model_validate(values)


def load_record(directory: str | Path) -> RunRecord:
    """Rebuild a RunRecord from its run directory.

    Raises:
        ExperimentError: If summary.json is missing
    """
    directory = Path(directory)
    summary_path = directory / SUMMARY_FILE
    if not summary_path.is_file():
        raise ExperimentError(f"No {SUMMARY_FILE} in {directory}")
    record = RunRecord.model_validate(json.loads(summary_path.read_text()))
    for run_file in RUN_FILES:
        path = directory / run_file.name
        if path.is_file():
            rows = [_parse_row(run_file, raw) for raw in read_csv(path)]
            setattr(record, run_file.attribute, rows)
    return record


def load_records(root: str | Path) -> list[RunRecord]:
    """Every run found below `root`, in sorted path order."""
    return [load_record(path.parent) for path in sorted(Path(root).rglob(SUMMARY_FILE))]
