"""Empirical sweep and jump complexity.

For every length n the profiler runs all words of Σ^n when there are at
most ``budget`` of them and otherwise a uniform random sample. Worst cases
are taken over all inputs, accepted or not. Ties between witnesses go to
the lexicographically least word, so exhaustive profiles are reproducible.

Growth classification is a heuristic on finite data and says nothing about
asymptotics.
"""

from __future__ import annotations

import csv
import hashlib
import io
import itertools
import random
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .core import Automaton, serialize
from .engines import _owj_fast, run_classical
from .errors import BoundViolation, InsufficientData, UnsupportedEngine

DEFAULT_BUDGET = 100_000
DEFAULT_SAMPLES = 10_000
DEFAULT_SEED = 20240812

EXHAUSTIVE = "exhaustive"
SAMPLED = "sampled"

CSV_COLUMNS = ("n", "max_sweeps", "witness", "max_jumps", "mean_jumps", "words_examined", "mode", "seed")


@dataclass(frozen=True)
class LengthRecord:
    n: int
    max_sweeps: int
    witness: tuple
    max_jumps: int
    mean_jumps: float
    words_examined: int
    mode: str
    max_steps: int = 0
    steps_witness: tuple = ()


@dataclass(frozen=True)
class SweepProfile:
    automaton_id: str
    alphabet: object
    engine: str
    seed: int
    records: tuple[LengthRecord, ...]

    def record(self, n) -> LengthRecord:
        for r in self.records:
            if r.n == n:
                return r
        raise KeyError(n)

    def lengths(self):
        return [r.n for r in self.records]

    def max_sweeps(self):
        return [r.max_sweeps for r in self.records]

    def to_csv(self) -> str:
        out = io.StringIO()
        wr = csv.writer(out, lineterminator="\n")
        wr.writerow(CSV_COLUMNS)
        for r in self.records:
            wr.writerow([
                r.n, r.max_sweeps, self.alphabet.decode(r.witness), r.max_jumps,
                f"{r.mean_jumps:.6f}", r.words_examined, r.mode, self.seed,
            ])
        return out.getvalue()

    def to_json(self):
        return {
            "automaton_id": self.automaton_id,
            "engine": self.engine,
            "seed": self.seed,
            "records": [
                {
                    "n": r.n,
                    "max_sweeps": r.max_sweeps,
                    "witness": self.alphabet.decode(r.witness),
                    "max_jumps": r.max_jumps,
                    "mean_jumps": round(r.mean_jumps, 6),
                    "words_examined": r.words_examined,
                    "mode": r.mode,
                }
                for r in self.records
            ],
        }


def automaton_id(a: Automaton) -> str:
    return hashlib.sha256(serialize(a).encode()).hexdigest()[:16]


def _runner(a, engine):
    if engine == "owj":
        return lambda w: _owj_fast(a, w)
    if engine == "classical":
        return lambda w: run_classical(a, w)
    raise UnsupportedEngine(f"profiling needs sweep counters; engine {engine!r} has none")


@dataclass
class _Stats:
    max_sweeps: int = -1
    witness: tuple = ()
    max_jumps: int = 0
    sum_jumps: int = 0
    count: int = 0
    max_steps: int = -1
    steps_witness: tuple = ()

    def add(self, w, o):
        if o.sweeps > self.max_sweeps or (o.sweeps == self.max_sweeps and w < self.witness):
            self.max_sweeps, self.witness = o.sweeps, w
        if o.steps > self.max_steps or (o.steps == self.max_steps and w < self.steps_witness):
            self.max_steps, self.steps_witness = o.steps, w
        if o.jumps > self.max_jumps:
            self.max_jumps = o.jumps
        self.sum_jumps += o.jumps
        self.count += 1

    def merge(self, other):
        # max/sum reductions with lexicographic tie-break: independent of merge order
        if other.count == 0:
            return self
        if other.max_sweeps > self.max_sweeps or (
            other.max_sweeps == self.max_sweeps and other.witness < self.witness
        ):
            self.max_sweeps, self.witness = other.max_sweeps, other.witness
        if other.max_steps > self.max_steps or (
            other.max_steps == self.max_steps and other.steps_witness < self.steps_witness
        ):
            self.max_steps, self.steps_witness = other.max_steps, other.steps_witness
        self.max_jumps = max(self.max_jumps, other.max_jumps)
        self.sum_jumps += other.sum_jumps
        self.count += other.count
        return self


def _scan(a, engine, ws):
    run = _runner(a, engine)
    st = _Stats()
    for w in ws:
        st.add(w, run(w))
    return st


def _scan_range(a, engine, n, lo, hi):
    k = len(a.alphabet)
    return _scan(a, engine, itertools.islice(itertools.product(range(k), repeat=n), lo, hi))


def _sample(k, n, count, seed):
    rng = random.Random(f"{seed}:{n}")
    return [tuple(rng.randrange(k) for _ in range(n)) for _ in range(count)]


def _measure(a, engine, n, budget, samples, seed, pool):
    k = len(a.alphabet)
    total = k**n
    exhaustive = total <= budget
    if exhaustive:
        if pool is None:
            st = _scan_range(a, engine, n, 0, total)
        else:
            chunk = max(1, -(-total // (pool._max_workers * 4)))
            futures = [pool.submit(_scan_range, a, engine, n, lo, min(lo + chunk, total))
                       for lo in range(0, total, chunk)]
            st = _Stats()
            for f in futures:
                st.merge(f.result())
    else:
        ws = _sample(k, n, min(samples, budget), seed)
        if pool is None:
            st = _scan(a, engine, ws)
        else:
            chunk = max(1, -(-len(ws) // (pool._max_workers * 4)))
            futures = [pool.submit(_scan, a, engine, ws[i:i + chunk]) for i in range(0, len(ws), chunk)]
            st = _Stats()
            for f in futures:
                st.merge(f.result())
    return LengthRecord(
        n=n,
        max_sweeps=st.max_sweeps,
        witness=st.witness,
        max_jumps=st.max_jumps,
        mean_jumps=st.sum_jumps / st.count if st.count else 0.0,
        words_examined=st.count,
        mode=EXHAUSTIVE if exhaustive else SAMPLED,
        max_steps=st.max_steps,
        steps_witness=st.steps_witness,
    )


def _profile(a, n_min, n_max, budget, samples, seed, engine, workers):
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    _runner(a, engine)
    pool = ProcessPoolExecutor(workers) if workers and workers > 1 else None
    try:
        records = tuple(_measure(a, engine, n, budget, samples, seed, pool) for n in range(n_min, n_max + 1))
    finally:
        if pool is not None:
            pool.shutdown()
    return SweepProfile(automaton_id(a), a.alphabet, engine, seed, records)


def sweep_complexity(a: Automaton, n_max: int, budget: int = DEFAULT_BUDGET, *,
                     samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED,
                     engine: str = "owj", workers: int = 1) -> SweepProfile:
    """Worst-case sweep count SC(n) for n = 0..n_max.

    ``budget`` caps the words examined per length: Σ^n is enumerated when
    it fits, otherwise ``min(samples, budget)`` words are drawn uniformly
    with a generator seeded from ``(seed, n)``.
    """
    return _profile(a, 0, n_max, budget, samples, seed, engine, workers)


def jump_statistics(a: Automaton, n_max: int, budget: int = DEFAULT_BUDGET, **kw):
    """``{n: (max_jumps, mean_jumps)}``; jumps count skipped letters."""
    p = sweep_complexity(a, n_max, budget, **kw)
    return {r.n: (r.max_jumps, r.mean_jumps) for r in p.records}


@dataclass(frozen=True)
class GrowthReport:
    automaton_id: str
    growth: str
    slope: float
    plateau: bool
    monotone: bool
    top_lengths: tuple
    note: str = field(default="heuristic on measured data, not a proof")


def classify_growth(p: SweepProfile, *, min_lengths: int = 6,
                    linear_slope: tuple[float, float] = (0.05, 1.0)) -> GrowthReport:
    """Label the measured SC(n) as constant, sublinear, linear or unclassified.

    Only the top half of the measured lengths is used. ``constant`` means
    the values there are all equal; otherwise the least-squares slope of
    max_sweeps against n decides, provided the values never decrease.
    """
    recs = sorted(p.records, key=lambda r: r.n)
    if len(recs) < min_lengths:
        raise InsufficientData(f"need at least {min_lengths} measured lengths, got {len(recs)}")
    top = recs[len(recs) - (len(recs) + 1) // 2:]
    xs = [r.n for r in top]
    ys = [r.max_sweeps for r in top]
    plateau = len(set(ys)) == 1
    if plateau:
        return GrowthReport(p.automaton_id, "constant", 0.0, True, True, tuple(xs))
    slope = statistics.linear_regression(xs, ys).slope
    monotone = all(y0 <= y1 for y0, y1 in zip(ys, ys[1:])) and ys[-1] > ys[0]
    lo, hi = linear_slope
    if monotone and lo <= slope <= hi:
        growth = "linear"
    elif monotone and 0 < slope < lo:
        growth = "sublinear"
    else:
        growth = "unclassified"
    return GrowthReport(p.automaton_id, growth, slope, False, monotone, tuple(xs))


@dataclass(frozen=True)
class StepBound:
    holds: bool
    max_ratio: float
    witness: tuple
    words_examined: int


def verify_step_bound(a: Automaton, n_max: int, budget: int = DEFAULT_BUDGET, *,
                      samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED,
                      workers: int = 1) -> StepBound:
    """Check steps ≤ n² on every examined OWJ run of length 1..n_max.

    Raises BoundViolation with the offending word; a violation means the
    engine is broken.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    p = _profile(a, 1, n_max, budget, samples, seed, "owj", workers)
    best, witness, examined = 0.0, (), 0
    for r in p.records:
        examined += r.words_examined
        if r.max_steps > r.n * r.n:
            raise BoundViolation(
                f"{r.max_steps} steps on a word of length {r.n}", word=r.steps_witness
            )
        ratio = r.max_steps / (r.n * r.n)
        if ratio > best:
            best, witness = ratio, r.steps_witness
    return StepBound(True, best, witness, examined)
