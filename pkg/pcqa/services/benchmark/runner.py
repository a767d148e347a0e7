"""Join objective scores with DMOS and evaluate every metric per session."""

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from pcqa.exceptions import DataError
from pcqa.models.ratings import DmosTable
from pcqa.models.report import BenchmarkReport, BenchmarkRow, Session
from pcqa.schemas.import_schemas import ObjectiveRecord
from pcqa.services.benchmark.evaluation import evaluate_metric
from pcqa.services.benchmark.logistic import DEFAULT_MAX_ITERATIONS, DEFAULT_TOLERANCE
from pcqa.services.iqa import available_metrics, get_metric
from pcqa.services.workers import parallel_map

logger = logging.getLogger(__name__)

LOWER_IS_BETTER_SUFFIXES = ("_mse", "_hausdorff")


def higher_is_better(metric: str) -> bool:
    """Direction of merit for a metric name from any of the toolkit's tables."""
    if metric in available_metrics():
        return get_metric(metric).higher_is_better
    return not metric.endswith(LOWER_IS_BETTER_SUFFIXES)


def check_sample_ids(records: Sequence[ObjectiveRecord], dmos: DmosTable) -> None:
    """Every objective sample must appear in the DMOS table and vice versa.

    Raises:
        DataError: Naming the first orphan id, objective file order first.
    """
    known = dmos.by_sample()
    for record in records:
        if record.sample_id not in known:
            raise DataError(f"sample_id {record.sample_id!r} has objective scores but no DMOS row")
    scored = {record.sample_id for record in records}
    for row in dmos.rows:
        if row.retained and row.sample_id not in scored:
            raise DataError(f"sample_id {row.sample_id!r} has a DMOS value but no objective scores")


def assign_sessions(
    records: Sequence[ObjectiveRecord],
    dmos: DmosTable,
    human_sequences: Iterable[str] = (),
    object_sequences: Iterable[str] = (),
) -> dict[str, Session | None]:
    """Session of every sample: the objective table's session column, else the sequence lists."""
    human, objects = set(human_sequences), set(object_sequences)
    by_sample = dmos.by_sample()
    sessions: dict[str, Session | None] = {}
    for record in records:
        if record.session is not None:
            sessions[record.sample_id] = record.session
            continue
        sequence = by_sample[record.sample_id].sequence
        sessions.setdefault(
            record.sample_id,
            "human" if sequence in human else "object" if sequence in objects else None,
        )
    return sessions


@dataclass(frozen=True)
class EvaluationJob:
    """Inputs of one report row."""

    metric: str
    pooling: str
    gamma: float | None
    session: Session
    x: tuple[float, ...]
    y: tuple[float, ...]
    max_iterations: int
    tolerance: float


def _run_job(job: EvaluationJob) -> BenchmarkRow:
    return evaluate_metric(
        job.x,
        job.y,
        metric=job.metric,
        session=job.session,
        pooling=job.pooling,
        gamma=job.gamma,
        higher_is_better=higher_is_better(job.metric),
        max_iterations=job.max_iterations,
        tolerance=job.tolerance,
    )


def run_benchmark(
    records: Sequence[ObjectiveRecord],
    dmos: DmosTable,
    sessions: Sequence[Session] = ("all",),
    human_sequences: Iterable[str] = (),
    object_sequences: Iterable[str] = (),
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
    tolerance: float = DEFAULT_TOLERANCE,
    workers: int = 1,
) -> BenchmarkReport:
    """Evaluate every (metric, pooling, gamma) group against DMOS for each requested session.

    Samples rejected during DMOS processing are skipped.

    Raises:
        DataError: Mismatched sample ids or a sample without a session when
            a per-session report is requested.
    """
    if not records:
        raise DataError("no objective scores")
    check_sample_ids(records, dmos)
    by_sample = dmos.by_sample()
    sample_sessions = assign_sessions(records, dmos, human_sequences, object_sequences)

    groups: dict[tuple[str, str, float | None], list[ObjectiveRecord]] = {}
    for record in records:
        groups.setdefault((record.metric, record.pooling, record.gamma), []).append(record)

    jobs = []
    for (metric, pooling, gamma), members in groups.items():
        for session in sessions:
            if session != "all":
                unassigned = [r.sample_id for r in members if sample_sessions[r.sample_id] is None]
                if unassigned:
                    raise DataError(f"sample_id {unassigned[0]!r} belongs to no session")
            selected = [
                r
                for r in members
                if by_sample[r.sample_id].retained and (session == "all" or sample_sessions[r.sample_id] == session)
            ]
            jobs.append(
                EvaluationJob(
                    metric=metric,
                    pooling=pooling,
                    gamma=gamma,
                    session=session,
                    x=tuple(r.value for r in selected),
                    y=tuple(by_sample[r.sample_id].dmos for r in selected),
                    max_iterations=max_iterations,
                    tolerance=tolerance,
                )
            )

    logger.info("Evaluating %d metric groups over %d sessions", len(groups), len(sessions))
    rows = parallel_map(_run_job, jobs, workers)
    return BenchmarkReport(rows=sorted(rows, key=BenchmarkRow.sort_key))
