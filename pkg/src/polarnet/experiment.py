"""Vaccine-allocation scenarios and Monte Carlo ensembles.

Two allocations are compared at equal dose counts on the same graph:
``POLARIZED`` vaccinates exactly the pro-opinion nodes, ``HOMOGENEOUS``
spreads the same number of doses uniformly at random over all nodes.
Ensembles derive one independent RNG stream per run from a master seed, so
results are bit-identical regardless of how runs are scheduled.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .epidemic import EpidemicParams, RunRecord, Seeding, run_epidemic
from .errors import DataError
from .graph import AnnotatedGraph, Opinion

SUBPOPS = ("unvaccinated", "vaccinated", "all")


class AllocationStrategy(Enum):
    POLARIZED = "polarized"
    HOMOGENEOUS = "homogeneous"


def allocate_vaccines(
    g: AnnotatedGraph, strategy: AllocationStrategy, rng
) -> np.ndarray:
    """Per-node vaccination flags; dose count always equals the pro count."""
    if not isinstance(rng, np.random.Generator):
        rng = np.random.Generator(np.random.PCG64(rng))
    pro = g.opinions == int(Opinion.PRO)
    if strategy is AllocationStrategy.POLARIZED:
        return pro.copy()
    doses = int(pro.sum())
    flags = np.zeros(g.n, dtype=bool)
    flags[rng.choice(g.n, size=doses, replace=False)] = True
    return flags


@dataclass(frozen=True)
class RunSummary:
    """Per-day new-infection fractions and end-of-run statistics of one run.

    Each daily series is normalized by its own subpopulation size, so the
    attack rate is exactly the series sum. ``ar_*`` is NaN for an empty
    subpopulation.
    """

    daily_frac_unvacc: np.ndarray
    daily_frac_vacc: np.ndarray
    daily_frac_all: np.ndarray
    ar_unvacc: float
    ar_vacc: float
    ar_all: float
    t_peak_unvacc: int
    n_unvacc: int
    n_vacc: int


def summarize_run(record: RunRecord) -> RunSummary:
    n_vacc = int(record.vaccinated.sum())
    n_unvacc = record.vaccinated.size - n_vacc
    new_all = record.new_unvacc + record.new_vacc

    def _frac(series, size):
        return series / size if size else np.zeros(series.size, dtype=np.float64)

    frac_unvacc = _frac(record.new_unvacc, n_unvacc)
    frac_vacc = _frac(record.new_vacc, n_vacc)
    frac_all = new_all / record.vaccinated.size
    return RunSummary(
        daily_frac_unvacc=frac_unvacc,
        daily_frac_vacc=frac_vacc,
        daily_frac_all=frac_all,
        ar_unvacc=float(frac_unvacc.sum()) if n_unvacc else float("nan"),
        ar_vacc=float(frac_vacc.sum()) if n_vacc else float("nan"),
        ar_all=float(frac_all.sum()),
        t_peak_unvacc=int(np.argmax(record.new_unvacc)) if record.new_unvacc.any() else 0,
        n_unvacc=n_unvacc,
        n_vacc=n_vacc,
    )


def _series(run: RunSummary, subpop: str) -> np.ndarray:
    try:
        return {
            "unvaccinated": run.daily_frac_unvacc,
            "vaccinated": run.daily_frac_vacc,
            "all": run.daily_frac_all,
        }[subpop]
    except KeyError:
        raise DataError(f"subpop must be one of {SUBPOPS}") from None


def _subpop_size(run: RunSummary, subpop: str) -> int:
    return {
        "unvaccinated": run.n_unvacc,
        "vaccinated": run.n_vacc,
        "all": run.n_unvacc + run.n_vacc,
    }[subpop]


def attack_rate(run: RunSummary, subpop: str) -> float:
    """Cumulative infected fraction of the subpopulation at run end."""
    series = _series(run, subpop)
    if _subpop_size(run, subpop) == 0:
        raise DataError(f"subpopulation {subpop!r} is empty")
    return float(series.sum())


def time_to_peak(run: RunSummary, subpop: str) -> int:
    """Day of the maximum daily new-infection count; earliest day on ties."""
    series = _series(run, subpop)
    if not series.any():
        raise DataError(f"no infections in subpopulation {subpop!r}")
    return int(np.argmax(series))


@dataclass(frozen=True)
class EnsembleSummary:
    """Aggregates over an ensemble; every field is recomputable from runs."""

    strategy: AllocationStrategy
    runs: list[RunSummary]
    mean_curves: dict[str, np.ndarray]  # subpop -> padded daily mean fractions
    band_low: dict[str, np.ndarray]  # pointwise 10th percentile
    band_high: dict[str, np.ndarray]  # pointwise 90th percentile
    mean_attack_rate: dict[str, float]
    mean_t_peak: dict[str, float]

    @property
    def days(self) -> int:
        return self.mean_curves["all"].size


def _pad(series: np.ndarray, length: int) -> np.ndarray:
    out = np.zeros(length, dtype=np.float64)
    out[: series.size] = series
    return out


def _aggregate(strategy: AllocationStrategy, runs: list[RunSummary]) -> EnsembleSummary:
    length = max(r.daily_frac_all.size for r in runs)
    ar_field = {"unvaccinated": "ar_unvacc", "vaccinated": "ar_vacc", "all": "ar_all"}
    mean_curves, lo, hi, mean_ar, mean_tp = {}, {}, {}, {}, {}
    for subpop in SUBPOPS:
        stack = np.vstack([_pad(_series(r, subpop), length) for r in runs])
        mean_curves[subpop] = stack.mean(axis=0)
        lo[subpop] = np.quantile(stack, 0.1, axis=0)
        hi[subpop] = np.quantile(stack, 0.9, axis=0)
        mean_ar[subpop] = float(np.mean([getattr(r, ar_field[subpop]) for r in runs]))
        # runs where the subpop saw no infection have no peak; average the rest
        peaks = [
            int(np.argmax(_series(r, subpop))) for r in runs if _series(r, subpop).any()
        ]
        mean_tp[subpop] = float(np.mean(peaks)) if peaks else float("nan")
    return EnsembleSummary(
        strategy=strategy,
        runs=runs,
        mean_curves=mean_curves,
        band_low=lo,
        band_high=hi,
        mean_attack_rate=mean_ar,
        mean_t_peak=mean_tp,
    )


def _one_run(
    g: AnnotatedGraph,
    params: EpidemicParams,
    strategy: AllocationStrategy,
    seeding: Seeding,
    seed_seq: np.random.SeedSequence,
    fixed_allocation: np.ndarray | None,
) -> RunSummary:
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    if fixed_allocation is not None:
        vaccinated = fixed_allocation
    else:
        vaccinated = allocate_vaccines(g, strategy, rng)
    record = run_epidemic(g, params, seeding, rng, vaccinated=vaccinated)
    return summarize_run(record)


def run_ensemble(
    g: AnnotatedGraph,
    params: EpidemicParams,
    strategy: AllocationStrategy,
    n_runs: int,
    master_seed,
    seeding: Seeding = Seeding(),
    threads: int = 1,
    homogeneous_redraw: bool = True,
) -> EnsembleSummary:
    """n_runs independent runs with per-run seeds derived from master_seed.

    Homogeneous allocations are redrawn every run by default so ensemble
    variance includes allocation randomness; ``homogeneous_redraw=False``
    freezes a single random allocation for the whole ensemble instead.
    """
    if n_runs < 1:
        raise DataError("ensemble needs n_runs >= 1")
    ss = (
        master_seed
        if isinstance(master_seed, np.random.SeedSequence)
        else np.random.SeedSequence(master_seed)
    )
    children = ss.spawn(n_runs + 1)
    fixed = None
    if strategy is AllocationStrategy.HOMOGENEOUS and not homogeneous_redraw:
        fixed = allocate_vaccines(g, strategy, np.random.Generator(np.random.PCG64(children[0])))
    elif strategy is AllocationStrategy.POLARIZED:
        fixed = allocate_vaccines(g, strategy, 0)  # deterministic, share across runs

    def job(i: int) -> RunSummary:
        return _one_run(g, params, strategy, seeding, children[i + 1], fixed)

    if threads == 1:
        runs = [job(i) for i in range(n_runs)]
    else:
        workers = threads if threads > 0 else None  # None lets the pool decide
        with ThreadPoolExecutor(max_workers=workers) as pool:
            runs = list(pool.map(job, range(n_runs)))
    return _aggregate(strategy, runs)


@dataclass(frozen=True)
class Comparison:
    """Paired polarized-vs-homogeneous ensembles on one graph."""

    polarized: EnsembleSummary
    homogeneous: EnsembleSummary
    ar_ratio: dict[str, float]  # polarized mean AR / homogeneous mean AR
    t_peak_diff: dict[str, float]  # polarized mean minus homogeneous mean


def compare_scenarios(
    g: AnnotatedGraph,
    params: EpidemicParams,
    n_runs: int,
    master_seed,
    seeding: Seeding = Seeding(),
    threads: int = 1,
    homogeneous_redraw: bool = True,
) -> Comparison:
    """Run both strategies on the same graph and report paired statistics."""
    ss = (
        master_seed
        if isinstance(master_seed, np.random.SeedSequence)
        else np.random.SeedSequence(master_seed)
    )
    pol_ss, hom_ss = ss.spawn(2)
    pol = run_ensemble(
        g, params, AllocationStrategy.POLARIZED, n_runs, pol_ss, seeding, threads
    )
    hom = run_ensemble(
        g, params, AllocationStrategy.HOMOGENEOUS, n_runs, hom_ss, seeding, threads,
        homogeneous_redraw=homogeneous_redraw,
    )
    ratio = {
        s: pol.mean_attack_rate[s] / hom.mean_attack_rate[s]
        if hom.mean_attack_rate[s]
        else float("nan")
        for s in SUBPOPS
    }
    diff = {s: pol.mean_t_peak[s] - hom.mean_t_peak[s] for s in SUBPOPS}
    return Comparison(polarized=pol, homogeneous=hom, ar_ratio=ratio, t_peak_diff=diff)
