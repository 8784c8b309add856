"""Instance model and schedule evaluation for 1|r_j|L_max with delivery times.

Jobs and schedule positions are 0-based throughout. Times are exact: integers
where possible, :class:`fractions.Fraction` otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence, Union

from ..errors import DomainError

Number = Union[int, Fraction]


def exact(value) -> Number:
    """Convert ``value`` to an exact number (int when integral).

    Floats go through their shortest repr so that ``0.1`` becomes ``1/10``.
    """
    if isinstance(value, bool):
        raise DomainError(f"not a number: {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        value = Fraction(repr(value))
    else:
        value = Fraction(value)
    return int(value) if value.denominator == 1 else value


def format_number(value: Number) -> str:
    """Render an exact number as a decimal when it terminates, ``p/q`` otherwise."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    den = value.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{value.numerator}/{value.denominator}"
    digits = max(twos, fives)
    scaled = value * 10**digits
    sign = "-" if scaled < 0 else ""
    whole, frac = divmod(abs(scaled.numerator), 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}"


@dataclass(frozen=True)
class Job:
    release: Number
    processing: Number
    delivery: Number


@dataclass(frozen=True)
class SchedulingInstance:
    jobs: tuple[Job, ...]

    def __post_init__(self):
        if not self.jobs:
            raise DomainError("an instance needs at least one job")
        for idx, job in enumerate(self.jobs):
            if min(job.release, job.processing, job.delivery) < 0:
                raise DomainError(f"job {idx} has a negative time: {job}")

    @classmethod
    def from_triples(cls, triples: Iterable[Sequence]) -> "SchedulingInstance":
        return cls(tuple(Job(*(exact(v) for v in t)) for t in triples))

    @property
    def n(self) -> int:
        return len(self.jobs)

    @property
    def total_processing(self) -> Number:
        return sum(job.processing for job in self.jobs)

    def triples(self) -> list[tuple[Number, Number, Number]]:
        return [(j.release, j.processing, j.delivery) for j in self.jobs]

    def to_text(self) -> str:
        lines = [str(self.n)]
        for j in self.jobs:
            lines.append(" ".join(format_number(v) for v in (j.release, j.processing, j.delivery)))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "SchedulingInstance":
        rows = [line.split() for line in text.splitlines() if line.strip() and not line.lstrip().startswith("#")]
        if not rows:
            raise DomainError("empty instance text")
        try:
            n = int(rows[0][0])
        except ValueError as exc:
            raise DomainError(f"bad job count {rows[0][0]!r}") from exc
        body = rows[1:]
        if len(body) != n:
            raise DomainError(f"expected {n} job lines, found {len(body)}")
        for lineno, row in enumerate(body, start=2):
            if len(row) != 3:
                raise DomainError(f"line {lineno}: expected 'r p q', got {' '.join(row)!r}")
        try:
            return cls.from_triples(body)
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"unparseable job time: {exc}") from exc

    def save(self, path) -> None:
        Path(path).write_text(self.to_text())

    @classmethod
    def load(cls, path) -> "SchedulingInstance":
        return cls.from_text(Path(path).read_text())


@dataclass(frozen=True)
class Schedule:
    order: tuple[int, ...]
    starts: tuple[Number, ...]  # indexed by position
    lateness: Number


def check_permutation(perm: Sequence[int], n: int) -> tuple[int, ...]:
    perm = tuple(perm)
    if len(perm) != n or sorted(perm) != list(range(n)):
        raise DomainError(f"not a permutation of 0..{n - 1}: {perm}")
    return perm


def evaluate_schedule(instance: SchedulingInstance, perm: Sequence[int]) -> Schedule:
    """Start times without deliberate idling and the maximal lateness J."""
    order = check_permutation(perm, instance.n)
    starts = []
    clock: Number = 0
    lateness: Number = 0
    for job_id in order:
        job = instance.jobs[job_id]
        start = max(job.release, clock)
        clock = start + job.processing
        starts.append(start)
        lateness = max(lateness, clock + job.delivery)
    return Schedule(order, tuple(starts), lateness)


def lateness(instance: SchedulingInstance, perm: Sequence[int]) -> Number:
    """Maximal lateness of ``perm`` without validating it."""
    clock: Number = 0
    worst: Number = 0
    jobs = instance.jobs
    for job_id in perm:
        job = jobs[job_id]
        clock = max(job.release, clock) + job.processing
        if clock + job.delivery > worst:
            worst = clock + job.delivery
    return worst
