"""Seeded Monte Carlo check of the Gaussian success-probability formula.

Only error *counts* are sampled: a block of ``m`` digits with BER ``e_ab``
has ``X ~ Binomial(m, e_ab)`` errors and decodes when ``X <= floor(m*e_rec)``.

Stream layout (bit-exact, independent of the worker count): trials are cut
into consecutive chunks of ``CHUNK_TRIALS``; chunk ``i`` draws from
``numpy.random.Generator(PCG64(SeedSequence(seed, spawn_key=(i,))))`` using
``Generator.binomial``, which is an exact sampler.  Workers only decide who
evaluates which chunk, so any worker count yields the same counts.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace
from typing import Any

import numpy as np

from .errors import DomainError, ParameterMismatchError, ResourceCapError
from .numerics import binomial_tail_exact, gaussian_tail

GENERATOR_ID = "numpy-pcg64-seedseq-chunk65536-binomial"
CHUNK_TRIALS = 65536
WORK_CAP_ENV = "CVRECON_MC_WORK_CAP"
DEFAULT_WORK_CAP = 10**9
SEED_MAX = 2**64 - 1


@dataclass(frozen=True)
class MonteCarloReport:
    block_size: int
    ber: float
    threshold: float
    trials: int
    successes: int
    beta_hat: float
    beta_gaussian: float
    beta_exact: float
    std_error: float
    seed: int
    generator_id: str = GENERATOR_ID

    def __post_init__(self):
        self.check()

    def check(self, tol: float = 0.0) -> None:
        if not (0 <= self.successes <= self.trials):
            raise DomainError("need 0 <= successes <= trials")
        if not (0 <= self.seed <= SEED_MAX):
            raise DomainError("seed must be a 64-bit unsigned integer")
        if self.trials:
            beta = self.successes / self.trials
            se = math.sqrt(beta * (1.0 - beta) / self.trials)
        else:
            beta = se = 0.0
        if abs(self.beta_hat - beta) > tol or abs(self.std_error - se) > tol:
            raise DomainError("beta_hat/std_error inconsistent with counts")

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict[str, Any], tol: float = 0.0) -> "MonteCarloReport":
        obj = object.__new__(cls)
        for name in cls.__dataclass_fields__:
            object.__setattr__(obj, name, d[name])
        obj.check(tol)
        return obj

    @property
    def params(self) -> tuple:
        return (self.block_size, self.ber, self.threshold, self.generator_id)


def _check_args(m: int, e_ab: float, e_rec: float) -> None:
    if isinstance(m, bool) or int(m) != m or m < 1:
        raise DomainError(f"m must be a positive integer, got {m!r}")
    if not (0.0 <= e_ab <= 1.0):
        raise DomainError(f"ber must lie in [0, 1], got {e_ab!r}")
    if not (math.isfinite(e_rec) and e_rec >= 0.0):
        raise DomainError(f"threshold must be finite and >= 0, got {e_rec!r}")


def beta_gaussian(m: int, e_ab: float, e_rec: float) -> float:
    """Gaussian-approximation probability that at most ``m*e_rec`` errors occur.

    No continuity correction is applied.
    """
    _check_args(m, e_ab, e_rec)
    if not (0.0 < e_ab < 1.0):
        raise DomainError(f"ber must lie in (0, 1), got {e_ab!r}")
    z = m * (e_rec - e_ab) / math.sqrt(m * e_ab * (1.0 - e_ab))
    return gaussian_tail(-z)


def error_threshold(m: int, e_rec: float) -> int:
    """Largest correctable error count ``floor(m*e_rec)``, clamped to ``m``."""
    # rounding first keeps e.g. 100 * 0.29 from landing on 28.999999999999996
    return min(int(m), math.floor(round(m * e_rec, 9)))


def _report(m, e_ab, e_rec, trials, successes, seed, b_gauss, b_exact) -> MonteCarloReport:
    if trials:
        beta = successes / trials
        se = math.sqrt(beta * (1.0 - beta) / trials)
    else:
        beta = se = 0.0
    return MonteCarloReport(m, e_ab, e_rec, trials, successes, beta, b_gauss, b_exact, se, seed)


def _analytic(m: int, e_ab: float, e_rec: float) -> tuple[float, float]:
    k = error_threshold(m, e_rec)
    b_exact = binomial_tail_exact(m, e_ab, k)
    if 0.0 < e_ab < 1.0:
        b_gauss = beta_gaussian(m, e_ab, e_rec)
    else:
        # point mass: the "Gaussian" collapses onto the exact answer
        b_gauss = b_exact
    return b_gauss, b_exact


def empty_report(m: int, e_ab: float, e_rec: float, seed: int = 0) -> MonteCarloReport:
    """Zero-trial report; the identity element of :func:`merge_reports`."""
    _check_args(m, e_ab, e_rec)
    return _report(m, e_ab, e_rec, 0, 0, seed, *_analytic(m, e_ab, e_rec))


def chunk_generator(seed: int, chunk: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(chunk,))))


def _count_chunk(args: tuple[int, float, int, int, int, int]) -> int:
    m, e_ab, k, n, seed, chunk = args
    counts = chunk_generator(seed, chunk).binomial(m, e_ab, size=n)
    return int(np.count_nonzero(counts <= k))


def work_cap() -> int:
    raw = os.environ.get(WORK_CAP_ENV)
    if raw is None or raw == "":
        return DEFAULT_WORK_CAP
    try:
        return int(float(raw))
    except ValueError as exc:
        raise DomainError(f"{WORK_CAP_ENV} must be a number, got {raw!r}") from exc


def estimated_work(m: int, trials: int) -> int:
    return int(trials) * max(1, math.ceil(math.log2(m + 1)))


def simulate_error_counts(
    m: int,
    e_ab: float,
    e_rec: float,
    trials: int,
    seed: int,
    workers: int = 1,
) -> MonteCarloReport:
    """Sample ``trials`` binomial error counts and estimate the success rate.

    The report also carries the Gaussian and exact-binomial values of the
    same probability for comparison.
    """
    _check_args(m, e_ab, e_rec)
    if isinstance(trials, bool) or int(trials) != trials or trials < 1:
        raise DomainError(f"trials must be a positive integer, got {trials!r}")
    if isinstance(seed, bool) or int(seed) != seed or not (0 <= seed <= SEED_MAX):
        raise DomainError(f"seed must be a 64-bit unsigned integer, got {seed!r}")
    if workers < 1:
        raise DomainError("workers must be >= 1")
    m, trials, seed = int(m), int(trials), int(seed)
    cap = work_cap()
    if estimated_work(m, trials) > cap:
        raise ResourceCapError(
            f"{trials} trials at m={m} exceed the work cap {cap} (set {WORK_CAP_ENV})"
        )

    k = error_threshold(m, e_rec)
    b_gauss, b_exact = _analytic(m, e_ab, e_rec)
    n_chunks = -(-trials // CHUNK_TRIALS)
    jobs = [
        (m, e_ab, k, min(CHUNK_TRIALS, trials - i * CHUNK_TRIALS), seed, i)
        for i in range(n_chunks)
    ]
    if workers == 1 or n_chunks == 1:
        counts = [_count_chunk(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=min(workers, n_chunks)) as pool:
            counts = list(pool.map(_count_chunk, jobs))

    report = empty_report(m, e_ab, e_rec, seed)
    for job, successes in zip(jobs, counts):
        part = _report(m, e_ab, e_rec, job[3], successes, seed, b_gauss, b_exact)
        report = merge_reports(report, part)
    return report


def merge_reports(a: MonteCarloReport, b: MonteCarloReport) -> MonteCarloReport:
    """Pool the trials of two reports for the same experiment.

    Zero-trial reports are identities.  Otherwise the merged seed is the
    smaller of the two, which keeps merging commutative, associative and
    idempotent on seeds; chunks of one run all carry the run's seed.
    """
    if a.params != b.params:
        raise ParameterMismatchError(f"cannot merge {a.params} with {b.params}")
    if b.trials == 0:
        return a
    if a.trials == 0:
        return b
    if (a.beta_gaussian, a.beta_exact) != (b.beta_gaussian, b.beta_exact):
        raise ParameterMismatchError("analytic fields differ between reports")
    merged = _report(
        a.block_size,
        a.ber,
        a.threshold,
        a.trials + b.trials,
        a.successes + b.successes,
        min(a.seed, b.seed),
        a.beta_gaussian,
        a.beta_exact,
    )
    return replace(merged, generator_id=a.generator_id)
