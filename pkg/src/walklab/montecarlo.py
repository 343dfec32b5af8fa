"""Stochastic oracle: direct simulation of the hopping process.

Each walker starts at the origin and performs `steps` independent +-1 hops.
Randomness is SplitMix64 with per-walker streams derived from
(seed, walker index) by the splitting rule documented in the backend, so a
run is reproducible bit-for-bit regardless of block decomposition or
thread count. One hop consumes the lowest bit of one fresh 64-bit draw.
"""

import csv
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ._backends import core
from .errors import DomainError, ResourceLimitError

__all__ = ["McHistogram", "simulate", "histogram_compare", "chi2_pvalue",
           "write_histogram_csv"]

_BLOCK = 1 << 16
_EXPECTED_MIN = 10.0  # Pearson validity threshold; smaller cells pool into tails


@dataclass
class McHistogram:
    steps: int
    walkers: int
    seed: int
    counts: dict = field(repr=False)

    def count_array(self) -> np.ndarray:
        """Counts indexed by position offset: index i holds x = i - steps."""
        arr = np.zeros(2 * self.steps + 1, dtype=np.int64)
        for x, c in self.counts.items():
            arr[x + self.steps] = c
        return arr


def _threads_from_env():
    raw = os.environ.get("WALKLAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def simulate(walkers: int, steps: int, seed: int,
             max_table_bytes: int = 1 << 28,
             threads: int | None = None) -> McHistogram:
    """Simulate `walkers` independent walks of `steps` hops from the origin."""
    walkers = int(walkers)
    steps = int(steps)
    if walkers < 1:
        raise DomainError(f"simulate requires walkers >= 1, got {walkers}")
    if steps < 0:
        raise DomainError(f"simulate requires steps >= 0, got {steps}")
    table_bytes = (2 * steps + 1) * 8
    if table_bytes > max_table_bytes:
        raise ResourceLimitError(
            f"count table needs {table_bytes} bytes > bound {max_table_bytes}")
    seed = int(seed) & 0xFFFFFFFFFFFFFFFF
    if threads is None:
        threads = _threads_from_env()
    blocks = [(start, min(_BLOCK, walkers - start))
              for start in range(0, walkers, _BLOCK)]
    total = np.zeros(2 * steps + 1, dtype=np.int64)
    if threads <= 1 or len(blocks) == 1:
        for start, n in blocks:
            total += core.mc_block(seed, start, n, steps)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for part in pool.map(
                    lambda b: core.mc_block(seed, b[0], b[1], steps), blocks):
                total += part
    counts = {int(i - steps): int(c) for i, c in enumerate(total) if c > 0}
    return McHistogram(steps=steps, walkers=walkers, seed=seed, counts=counts)


def _site_probability(x: int, t: int) -> float:
    if abs(x) > t or (x + t) % 2 != 0:
        return 0.0
    if t == 0:
        return 1.0
    return 2.0 * core.rho_rw(float(x), float(t))


def histogram_compare(h: McHistogram):
    """Goodness of fit of a histogram against the exact lattice law.

    Returns (max_z, chi2, dof): max_z over sites with expected count >= 10
    of (observed - N P)/sqrt(N P (1-P)); Pearson chi-square with the
    under-populated cone edges pooled into two tail bins.
    """
    t = h.steps
    n = h.walkers
    for x in h.counts:
        if abs(x) > t or (x + t) % 2 != 0:
            raise DomainError(f"histogram occupies impossible site x={x}")
    sites = list(range(-t, t + 1, 2)) if t > 0 else [0]
    obs = np.array([h.counts.get(x, 0) for x in sites], dtype=float)
    p = np.array([_site_probability(x, t) for x in sites])
    exp = n * p
    max_z = 0.0
    for o, e, pi in zip(obs, exp, p):
        if e >= _EXPECTED_MIN and pi < 1.0:
            z = abs(o - e) / math.sqrt(e * (1.0 - pi))
            if z > max_z:
                max_z = z
    # chi-square with pooled tails
    keep = exp >= _EXPECTED_MIN
    if not np.any(keep):
        return max_z, 0.0, 0
    first = int(np.argmax(keep))
    last = len(keep) - 1 - int(np.argmax(keep[::-1]))
    chi2 = 0.0
    nbins = 0
    lo_o, lo_e = obs[:first].sum(), exp[:first].sum()
    hi_o, hi_e = obs[last + 1:].sum(), exp[last + 1:].sum()
    for o, e in zip(obs[first:last + 1], exp[first:last + 1]):
        chi2 += (o - e) ** 2 / e
        nbins += 1
    for o, e in ((lo_o, lo_e), (hi_o, hi_e)):
        if e > 0.0:
            chi2 += (o - e) ** 2 / e
            nbins += 1
    return max_z, chi2, nbins - 1


def chi2_pvalue(chi2: float, dof: int) -> float:
    """Upper-tail p-value of a chi-square statistic."""
    if dof < 1:
        return 1.0
    return core.gammainc_q(0.5 * dof, 0.5 * chi2)


def write_histogram_csv(h: McHistogram, path):
    """CSV export: x, count, expected, z (z blank where expected is tiny)."""
    t = h.steps
    n = h.walkers
    sites = list(range(-t, t + 1, 2)) if t > 0 else [0]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "count", "expected", "z"])
        for x in sites:
            p = _site_probability(x, t)
            e = n * p
            o = h.counts.get(x, 0)
            if e > 0.0 and p < 1.0:
                z = (o - e) / math.sqrt(e * (1.0 - p))
                zs = f"{z:.17g}"
            else:
                zs = "nan"
            w.writerow([x, o, f"{e:.17g}", zs])
