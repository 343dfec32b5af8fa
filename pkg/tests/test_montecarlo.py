"""Monte Carlo oracle: determinism, statistics, goodness of fit."""

import math

import numpy as np
import pytest
from scipy import stats as sstats

from walklab import kernels, montecarlo
from walklab.errors import DomainError, ResourceLimitError
from walklab.montecarlo import McHistogram

# frozen regression goldens for simulate(1_000_000, 100, seed=42)
GOLDEN_MAX_Z = 2.0081242343578865
GOLDEN_CHI2 = 33.84817001138755
GOLDEN_DOF = 42


def test_zero_steps_all_mass_at_origin():
    h = montecarlo.simulate(1000, 0, 1)
    assert h.counts == {0: 1000}


def test_determinism_same_seed():
    h1 = montecarlo.simulate(70000, 30, 9)  # > one 65536-walker block
    h2 = montecarlo.simulate(70000, 30, 9)
    assert h1.counts == h2.counts


def test_determinism_thread_count_invariant():
    h1 = montecarlo.simulate(200000, 25, 123, threads=1)
    h2 = montecarlo.simulate(200000, 25, 123, threads=4)
    assert h1.counts == h2.counts


def test_different_seeds_differ():
    h1 = montecarlo.simulate(10000, 20, 1)
    h2 = montecarlo.simulate(10000, 20, 2)
    assert h1.counts != h2.counts


def test_parity_and_cone_invariants():
    for steps in (1, 7, 40):
        h = montecarlo.simulate(20000, steps, 5)
        assert sum(h.counts.values()) == 20000
        for x in h.counts:
            assert abs(x) <= steps
            assert (x + steps) % 2 == 0


def test_two_step_origin_probability():
    # exact enumeration: P(0, 2) = 1/2; 4-sigma band at N=1e6 is 2e-3
    n = 1_000_000
    h = montecarlo.simulate(n, 2, 42)
    phat = h.counts.get(0, 0) / n
    assert abs(phat - 0.5) < 4.0 * math.sqrt(0.25 / n)


def test_mean_and_variance():
    n, steps = 1_000_000, 100
    h = montecarlo.simulate(n, steps, 42)
    xs = np.array(sorted(h.counts))
    cs = np.array([h.counts[x] for x in xs], dtype=float)
    mean = (xs * cs).sum() / n
    var = ((xs - mean) ** 2 * cs).sum() / n
    assert abs(mean) < 4.0 * math.sqrt(steps / n)
    assert var == pytest.approx(steps, rel=0.05)


def test_histogram_compare_perfect_synthetic():
    # counts = rounded N*P cannot trip the z statistic
    n, t = 1_000_000, 50
    counts = {}
    for x in range(-t, t + 1, 2):
        e = n * 2.0 * kernels.rho_rw_lattice(x, t)
        if round(e) > 0:
            counts[x] = int(round(e))
    h = McHistogram(steps=t, walkers=sum(counts.values()), seed=0, counts=counts)
    max_z, chi2, dof = montecarlo.histogram_compare(h)
    assert max_z < 1.0
    assert montecarlo.chi2_pvalue(chi2, dof) > 0.999


def test_histogram_compare_detects_corruption():
    h = montecarlo.simulate(1_000_000, 100, 42)
    bad = dict(h.counts)
    bad[0] *= 2
    hb = McHistogram(steps=100, walkers=sum(bad.values()), seed=42, counts=bad)
    max_z, chi2, dof = montecarlo.histogram_compare(hb)
    assert max_z > 4.5
    assert montecarlo.chi2_pvalue(chi2, dof) < 1e-6


def test_histogram_compare_rejects_impossible_sites():
    h = McHistogram(steps=10, walkers=1, seed=0, counts={3: 1})
    with pytest.raises(DomainError):
        montecarlo.histogram_compare(h)


def test_max_z_does_not_grow_with_n():
    for n in (10_000, 100_000, 1_000_000):
        h = montecarlo.simulate(n, 100, 42)
        max_z, chi2, dof = montecarlo.histogram_compare(h)
        assert max_z < 4.5, n
        assert montecarlo.chi2_pvalue(chi2, dof) > 1e-3, n


def test_regression_goldens_seed42():
    h = montecarlo.simulate(1_000_000, 100, 42)
    max_z, chi2, dof = montecarlo.histogram_compare(h)
    assert max_z == pytest.approx(GOLDEN_MAX_Z, abs=1e-12)
    assert chi2 == pytest.approx(GOLDEN_CHI2, abs=1e-9)
    assert dof == GOLDEN_DOF


def test_chi2_pvalue_vs_scipy():
    for (c, k) in [(33.8, 42), (10.0, 3), (100.0, 50)]:
        assert montecarlo.chi2_pvalue(c, k) == pytest.approx(
            sstats.chi2.sf(c, k), rel=1e-10)


def test_resource_and_domain_errors():
    with pytest.raises(ResourceLimitError):
        montecarlo.simulate(10, 10 ** 9, 1, max_table_bytes=1 << 20)
    with pytest.raises(DomainError):
        montecarlo.simulate(0, 10, 1)
    with pytest.raises(DomainError):
        montecarlo.simulate(10, -1, 1)


def test_csv_export(tmp_path):
    h = montecarlo.simulate(5000, 8, 3)
    path = tmp_path / "hist.csv"
    montecarlo.write_histogram_csv(h, path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "x,count,expected,z"
    assert len(lines) == 1 + 9  # sites -8..8 step 2
    total = sum(int(line.split(",")[1]) for line in lines[1:])
    assert total == 5000
