"""Variable-drift runtime bounds and an exact hitting-time oracle.

Levels follow the AuxMax convention: level k = 0..M-1 is left with
probability at least l_k per generation, and a population at AuxMax = a has
distance D = M - a from the target set. Starting at distance d, the expected
time to reach the top is at most sum(1 / l_k for k in M-d .. M-1).
"""

from __future__ import annotations

import math
import statistics
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import DegenerateDesignError, DomainError, UnreachableTargetError

RESIDUAL_TOL = 1e-9
ROW_TOL = 1e-12


def recombination_hit_probability(m: int) -> float:
    """1 - (1 - 1/m)^m: chance that m uniform draws pick a fixed member at least once."""
    return -math.expm1(m * math.log1p(-1.0 / m))


LIMIT_HIT_PROBABILITY = -math.expm1(-1.0)


def level_improvement_bound(k: int, m: int, p_rec: float, p_mut: float) -> tuple[float, float]:
    """(l_k(m), l_k): per-generation improvement floors at level k.

    ``p_rec`` is the recombination improvement floor at level k and ``p_mut``
    the mutation preservation floor at level k+1.
    """
    if m < 2:
        raise DomainError(f"m must be >= 2, got {m}")
    for name, p in (("p_rec", p_rec), ("p_mut", p_mut)):
        if p <= 0:
            raise DegenerateDesignError(f"{name} at level {k} is {p}; every improvement floor must be positive")
        if p > 1:
            raise DomainError(f"{name} at level {k} exceeds 1: {p}")
    return recombination_hit_probability(m) * p_rec * p_mut, LIMIT_HIT_PROBABILITY * p_rec * p_mut


@dataclass(frozen=True)
class DriftLevelTable:
    bounds: tuple[float, ...]  # l_k for k = 0..M-1
    m: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "bounds", tuple(float(b) for b in self.bounds))
        if not self.bounds:
            raise DomainError("a level table needs M >= 1 levels")
        for k, b in enumerate(self.bounds):
            if not 0.0 < b <= 1.0:
                raise DomainError(f"l_{k} = {b} is not in (0, 1]")

    @property
    def M(self) -> int:
        return len(self.bounds)

    @classmethod
    def from_floors(cls, m: int, p_rec: Sequence[float], p_mut: Sequence[float], limit=False) -> "DriftLevelTable":
        """Table of l_k(m) (or the m-free l_k with ``limit=True``)."""
        if len(p_rec) != len(p_mut):
            raise DomainError("p_rec and p_mut need one entry per level")
        pick = 1 if limit else 0
        return cls(tuple(level_improvement_bound(k, m, r, u)[pick] for k, (r, u) in enumerate(zip(p_rec, p_mut))), m)


def variable_drift_bound(table: DriftLevelTable, start_distance: int) -> float:
    """Upper bound on the expected time to the top level from distance ``start_distance``."""
    if not 0 <= start_distance <= table.M:
        raise DomainError(f"start distance {start_distance} outside 0..{table.M}")
    return math.fsum(1.0 / l for l in table.bounds[table.M - start_distance:])


@dataclass(frozen=True)
class RuntimeBoundReport:
    drift_bound: float
    top_level_walk_bound: float
    total: float
    gamma: float
    lam: float
    constant: float = 1.0


def total_runtime_bound(table: DriftLevelTable, start_distance: int, n: int, gamma: float, lam: float,
                        constant: float = 1.0) -> RuntimeBoundReport:
    """Drift part plus ``constant * n**(gamma + lam)`` for the top-level walk."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if gamma < 0 or lam < 0:
        raise DomainError("gamma and lambda must be non-negative")
    drift = variable_drift_bound(table, start_distance)
    walk = constant * float(n) ** (gamma + lam)
    return RuntimeBoundReport(drift, walk, drift + walk, gamma, lam, constant)


# -- Markov chains -------------------------------------------------------------

@dataclass(frozen=True)
class ChainSpec:
    matrix: np.ndarray
    target: frozenset[int]
    distance: tuple[float, ...] = field(default=())
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        P = np.asarray(self.matrix, dtype=float)
        if P.ndim != 2 or P.shape[0] != P.shape[1]:
            raise DomainError(f"transition matrix must be square, got shape {P.shape}")
        if (P < 0).any() or np.abs(P.sum(axis=1) - 1.0).max() > ROW_TOL:
            raise DomainError("rows must be non-negative and sum to 1")
        object.__setattr__(self, "matrix", P)
        object.__setattr__(self, "target", frozenset(int(s) for s in self.target))
        if not self.target or not self.target <= set(range(len(P))):
            raise DomainError("target set must be a non-empty set of state indices")
        if not self.distance:
            object.__setattr__(self, "distance", tuple(float(d) for d in hop_distance(P, self.target)))
        if len(self.distance) != len(P):
            raise DomainError("one distance value per state")
        for s, d in enumerate(self.distance):
            if d < 0 or (d == 0) != (s in self.target):
                raise DomainError(f"distance must be 0 exactly on the target (state {s}: {d})")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(s) for s in range(len(P))))

    @property
    def size(self) -> int:
        return len(self.matrix)

    @classmethod
    def from_text(cls, text: str) -> "ChainSpec":
        """Rows of probabilities, then ``target: i j ...`` and optionally ``distance: d0 d1 ...``."""
        rows, target, distance = [], None, ()
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, _, rest = line.partition(":")
            if rest or line.endswith(":"):
                key = key.strip().lower()
                if key == "target":
                    target = [int(tok) for tok in rest.split()]
                elif key == "distance":
                    distance = tuple(float(tok) for tok in rest.split())
                else:
                    raise DomainError(f"unknown chain directive {key!r}")
            else:
                rows.append([float(tok) for tok in line.split()])
        if target is None:
            raise DomainError("chain file lacks a 'target:' line")
        return cls(np.array(rows), frozenset(target), distance)

    @classmethod
    def load(cls, path) -> "ChainSpec":
        return cls.from_text(Path(path).read_text())


def hop_distance(matrix: np.ndarray, target: Iterable[int]) -> list[int]:
    """Fewest transitions from each state to the target (len(matrix) if none)."""
    size = len(matrix)
    dist = [size] * size
    queue = deque()
    for s in target:
        dist[s] = 0
        queue.append(s)
    while queue:
        y = queue.popleft()
        for x in np.nonzero(matrix[:, y] > 0)[0]:
            if dist[x] > dist[y] + 1:
                dist[x] = dist[y] + 1
                queue.append(int(x))
    return dist


def exact_expected_hitting_time(chain: ChainSpec) -> dict[int, float]:
    """Solve E_x = 1 + sum_y p_xy E_y off the target, E = 0 on it."""
    size = chain.size
    reach = hop_distance(chain.matrix, chain.target)
    stuck = [s for s in range(size) if reach[s] >= size]
    if stuck:
        raise UnreachableTargetError(f"states {stuck} never reach the target")
    free = [s for s in range(size) if s not in chain.target]
    times = np.zeros(size)
    if free:
        Q = chain.matrix[np.ix_(free, free)]
        A = np.eye(len(free)) - Q
        b = np.ones(len(free))
        sol = np.linalg.solve(A, b)
        residual = np.abs(A @ sol - b).max()
        if residual > RESIDUAL_TOL * max(1.0, np.abs(sol).max()):
            raise ArithmeticError(f"hitting-time solve residual {residual:.3g}")
        times[free] = sol
    return {s: float(times[s]) for s in range(size)}


def chain_drift_floors(chain: ChainSpec) -> dict[int, float]:
    """Largest l_k satisfying the drift condition, k = 1..ceil(max D).

    l_k = min over non-target x with ceil(D(x)) >= k of D(x) - sum_y p_xy D(y).
    Values may be non-positive, in which case the drift bound does not apply.
    """
    D = np.asarray(chain.distance, dtype=float)
    drift = D - chain.matrix @ D
    ceil_d = np.ceil(D - 1e-12).astype(int)
    floors = {}
    for k in range(1, int(ceil_d.max()) + 1):
        mask = (ceil_d >= k) & (D > 0)
        floors[k] = float(drift[mask].min())
    return floors


def chain_drift_bound(chain: ChainSpec, start: int) -> float:
    """sum_{k=1}^{ceil D(start)} 1/l_k with the floors of :func:`chain_drift_floors`."""
    floors = chain_drift_floors(chain)
    top = math.ceil(chain.distance[start] - 1e-12)
    if any(floors[k] <= 0 for k in range(1, top + 1)):
        raise DegenerateDesignError("drift condition fails: some floor l_k is not positive")
    return math.fsum(1.0 / floors[k] for k in range(1, top + 1))


# -- measured hitting times ----------------------------------------------------

@dataclass(frozen=True)
class HitStats:
    count: int
    missing: int
    mean: Optional[float]
    median: Optional[float]
    max: Optional[int]


def _stats(values: Sequence[Optional[int]]) -> HitStats:
    hit = [v for v in values if v is not None]
    if not hit:
        return HitStats(0, len(values), None, None, None)
    return HitStats(len(hit), len(values) - len(hit), statistics.fmean(hit), statistics.median(hit), max(hit))


@dataclass(frozen=True)
class HittingTimeSummary:
    top_level: HitStats
    satisfactory: HitStats


def measure_empirical_hitting_times(traces) -> HittingTimeSummary:
    traces = list(traces)
    if not traces:
        raise DomainError("no traces to summarise")
    return HittingTimeSummary(_stats([t.aux_hit for t in traces]), _stats([t.satisfactory_hit for t in traces]))
