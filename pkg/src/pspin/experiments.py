"""Monte Carlo campaigns over (p, alpha, n1) cells.

Each cell stores n2 = round(alpha * n1^(p+/2)) patterns; each trial draws a
fresh pattern matrix from a seed derived from (master seed, cell, trial),
so record streams are reproducible and thread-count independent.  Records
are canonicalized by (cell, trial) order before writing.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .dynamics import DescentPolicy, descend, perturb
from .energy import energy_full
from .landscape import MODE_SAMPLED, BarrierProfile, sphere_scan
from .model import entropy, exponents, threshold_t
from .patterns import generate, hamming, sym_hamming

CSV_HEADER = (
    "p,q,alpha,n1,n2,r,trial,seed,init_dist,final_dist,nearest_mu,flips,"
    "converged,endpoint_energy,pattern_energy,cond_theorem1,cond_theorem2"
)

BARRIER_CSV_HEADER = "p,q,alpha,n1,n2,mu,radius,min_gap,mode,samples,seed,threshold"


@dataclass(frozen=True)
class SweepConfig:
    p_values: tuple
    alpha_values: tuple
    n1_values: tuple
    r: float
    trials: int
    master_seed: int
    policy: DescentPolicy = DescentPolicy()
    out_dir: Optional[str] = None

    def __post_init__(self):
        if not 0.0 <= self.r <= 0.5:
            raise ValueError("perturbation r must lie in [0, 1/2]")
        if self.trials < 0:
            raise ValueError("trials must be >= 0")


@dataclass(frozen=True)
class CellSpec:
    index: int
    p: float
    q: float
    alpha: float
    n1: int
    n2: int  # 0 marks an invalid cell


@dataclass
class TrialRecord:
    p: float
    q: float
    alpha: float
    n1: int
    n2: int
    r: float
    trial: int  # -1 marks a warning record for a skipped cell
    seed: int
    init_dist: int
    final_dist: int
    nearest_mu: int
    flips: int
    converged: bool
    endpoint_energy: float
    pattern_energy: float
    cond_theorem1: bool
    cond_theorem2: bool
    dist_first: int = field(default=-1)  # symmetric distance to pattern 0 (not in CSV)

    def csv_row(self):
        return (
            _fmt(self.p), _fmt(self.q), _fmt(self.alpha), _fmt(self.n1),
            _fmt(self.n2), _fmt(self.r), _fmt(self.trial), _fmt(self.seed),
            _fmt(self.init_dist), _fmt(self.final_dist), _fmt(self.nearest_mu),
            _fmt(self.flips), _fmt(self.converged), _fmt(self.endpoint_energy),
            _fmt(self.pattern_energy), _fmt(self.cond_theorem1),
            _fmt(self.cond_theorem2),
        )


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, float):
        return repr(float(v))
    return str(v)


def cells(config: SweepConfig) -> list[CellSpec]:
    """Cell grid in (p, alpha, n1) product order.

    alpha = 0 is the degenerate single-pattern control (n2 forced to 1);
    any other alpha rounding to n2 = 0 yields an invalid cell that is
    skipped with a warning record.
    """
    out = []
    idx = 0
    for p in config.p_values:
        ex = exponents(float(p))
        for alpha in config.alpha_values:
            for n1 in config.n1_values:
                if alpha == 0.0:
                    n2 = 1
                else:
                    n2 = int(alpha * n1 ** (ex.p_plus / 2.0) + 0.5)
                out.append(
                    CellSpec(
                        index=idx, p=ex.p, q=ex.q, alpha=float(alpha),
                        n1=int(n1), n2=n2,
                    )
                )
                idx += 1
    return out


def cond_theorem1(q: float, alpha: float, r: float) -> bool:
    """Whether the retrieval-side hypothesis holds for the cell.

    q < 2: no load condition; q = 2: r < 3/8 and
    alpha < min(sqrt(r/(1-r))/3, sqrt(r)/(25 S(r))); q > 2: not applicable.
    """
    if q < 2.0:
        return True
    if q == 2.0:
        if not 0.0 < r < 0.375:
            return False
        s = entropy(r)
        cap = math.sqrt(r / (1.0 - r)) / 3.0
        if s > 0.0:
            cap = min(cap, math.sqrt(r) / (25.0 * s))
        return alpha < cap
    return False


def cond_theorem2(q: float, alpha: float, r: float) -> bool:
    """Whether the non-retrieval-side load condition alpha >= alpha_q(r) holds.

    alpha_q(r) = S(r)/(1-2r)^2 at q = 2 and S(r) otherwise; the unknown
    numerical prefactor of the condition is taken as 1.
    """
    if q < 2.0:
        return False
    s = entropy(r)
    if q == 2.0:
        if r >= 0.5:
            return False
        return alpha >= s / (1.0 - 2.0 * r) ** 2
    return alpha >= s


def _trial_seed(master_seed: int, cell_index: int, trial: int) -> int:
    ss = np.random.SeedSequence((master_seed, cell_index, trial))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _trial_rng(master_seed: int, cell_index: int, trial: int) -> np.random.Generator:
    ss = np.random.SeedSequence((master_seed, cell_index, trial, 1))
    return np.random.Generator(np.random.Philox(ss))


def _warning_record(cell: CellSpec, r: float) -> TrialRecord:
    return TrialRecord(
        p=cell.p, q=cell.q, alpha=cell.alpha, n1=cell.n1, n2=cell.n2, r=r,
        trial=-1, seed=0, init_dist=-1, final_dist=-1, nearest_mu=-1, flips=0,
        converged=False, endpoint_energy=math.nan, pattern_energy=math.nan,
        cond_theorem1=cond_theorem1(cell.q, cell.alpha, r),
        cond_theorem2=cond_theorem2(cell.q, cell.alpha, r),
    )


def _run_trial(
    cell: CellSpec,
    trial: int,
    r: float,
    master_seed: int,
    policy: DescentPolicy,
    from_pattern: bool,
) -> TrialRecord:
    ex = exponents(cell.p)
    seed = _trial_seed(master_seed, cell.index, trial)
    xi = generate(cell.n1, cell.n2, seed)
    rng = _trial_rng(master_seed, cell.index, trial)
    pattern = xi.row_state(0)
    sigma0 = pattern.copy() if from_pattern else perturb(pattern, r, rng)
    init_dist = hamming(sigma0, pattern)
    res = descend(sigma0, xi, ex, policy, rng)
    dists = [sym_hamming(res.endpoint, xi.row_state(mu)) for mu in range(cell.n2)]
    nearest = int(np.argmin(dists))
    return TrialRecord(
        p=cell.p, q=cell.q, alpha=cell.alpha, n1=cell.n1, n2=cell.n2, r=r,
        trial=trial, seed=seed, init_dist=init_dist,
        final_dist=int(dists[nearest]), nearest_mu=nearest, flips=res.flips,
        converged=res.converged,
        endpoint_energy=energy_full(res.endpoint, xi, ex),
        pattern_energy=energy_full(pattern, xi, ex),
        cond_theorem1=cond_theorem1(cell.q, cell.alpha, r),
        cond_theorem2=cond_theorem2(cell.q, cell.alpha, r),
        dist_first=int(dists[0]),
    )


def _run_campaign(
    config: SweepConfig, from_pattern: bool, threads: int = 1
) -> list[TrialRecord]:
    tasks = []
    records = []
    for cell in cells(config):
        if cell.n2 < 1:
            records.append(_warning_record(cell, config.r))
            continue
        for trial in range(config.trials):
            tasks.append((cell, trial))

    def work(task):
        cell, trial = task
        return _run_trial(
            cell, trial, config.r, config.master_seed, config.policy, from_pattern
        )

    if threads <= 1:
        records.extend(work(t) for t in tasks)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records.extend(pool.map(work, tasks))
    records.sort(key=lambda rec: (rec.p, rec.alpha, rec.n1, rec.trial))
    return records


def retrieval_sweep(config: SweepConfig, threads: int = 1) -> list[TrialRecord]:
    """Descents from r-perturbed first patterns across all cells."""
    return _run_campaign(config, from_pattern=False, threads=threads)


def non_retrieval_probe(config: SweepConfig, threads: int = 1) -> list[TrialRecord]:
    """Descents initialized exactly at the first pattern across all cells."""
    return _run_campaign(config, from_pattern=True, threads=threads)


def barrier_profile_experiment(
    config: SweepConfig,
    radii: Optional[list[int]] = None,
    mode: str = MODE_SAMPLED,
    samples: int = 2000,
    mu: int = 0,
) -> list[tuple[CellSpec, BarrierProfile]]:
    """Per-cell minimum energy gap over Hamming spheres around pattern mu."""
    out = []
    for cell in cells(config):
        if cell.n2 < 1:
            continue
        ex = exponents(cell.p)
        seed = _trial_seed(config.master_seed, cell.index, 0)
        xi = generate(cell.n1, cell.n2, seed)
        rng = _trial_rng(config.master_seed, cell.index, 0)
        cell_radii = radii
        if cell_radii is None:
            top = max(1, int(0.3 * cell.n1))
            cell_radii = sorted({int(round(x)) for x in np.linspace(0, top, 13)})
        gaps = [
            sphere_scan(xi, ex, mu, radius, mode=mode, samples=samples, rng=rng)
            for radius in cell_radii
        ]
        out.append(
            (
                cell,
                BarrierProfile(
                    mu=mu, radii=list(cell_radii), min_gap=gaps, mode=mode,
                    samples_per_radius=samples, seed=seed,
                ),
            )
        )
    return out


def write_records_csv(records, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(CSV_HEADER + "\n")
        writer = csv.writer(fh, lineterminator="\n")
        for rec in records:
            writer.writerow(rec.csv_row())


def write_barrier_csv(profiles, path) -> None:
    """Cell-extended barrier CSV with the theoretical threshold column."""
    with open(path, "w", newline="") as fh:
        fh.write(BARRIER_CSV_HEADER + "\n")
        writer = csv.writer(fh, lineterminator="\n")
        for cell, prof in profiles:
            for mu, radius, gap, mode, samples, seed in prof.csv_rows():
                rr = radius / cell.n1
                if cell.p >= 2.0 and 0.0 < rr <= 0.5:
                    thr = _fmt(threshold_t(rr, cell.p))
                else:
                    thr = ""
                writer.writerow(
                    (
                        _fmt(cell.p), _fmt(cell.q), _fmt(cell.alpha),
                        _fmt(cell.n1), _fmt(cell.n2), _fmt(mu), _fmt(radius),
                        _fmt(gap), mode, _fmt(samples), _fmt(seed), thr,
                    )
                )
