"""Population-dynamics solvers for the tree recursive distributional equations.

A population of pop_size values in [0,1] approximates the law mu; each
sweep resamples the whole population through the tree operator.  All
randomness (offspring counts and resampling indices) is drawn outside the
kernels from a seeded Generator, so numba and fallback paths agree exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._accel import maybe_njit
from .errors import InvalidParameterError

MEAN_MOVE_TOL = 1e-4
MEAN_MOVE_WINDOW = 10


@maybe_njit
def _sweep_z(x, ns, idx, z):
    out = np.empty_like(x)
    z2 = z * z
    ptr = 0
    for i in range(len(x)):
        s = z2
        for _ in range(ns[i]):
            s += x[idx[ptr]]
            ptr += 1
        out[i] = z2 / s
    return out


@maybe_njit
def _sweep_zero(x, ns, ms, idx):
    out = np.empty_like(x)
    p = 0
    q = 0
    for i in range(len(x)):
        acc = 0.0
        dead = False
        for _ in range(ns[i]):
            m = ms[p]
            p += 1
            s = 0.0
            for _ in range(m):
                s += x[idx[q]]
                q += 1
            if s <= 0.0:
                dead = True  # (sum=0)^-1 = inf kills the whole sample
            else:
                acc += 1.0 / s
        out[i] = 0.0 if dead else 1.0 / (1.0 + acc)
    return out


def _draw_counts(rng, dist, size):
    return rng.choice(len(dist.pmf), size=size, p=dist.pmf).astype(np.int64)


@dataclass
class PopulationResult:
    population: np.ndarray
    root_mean: float
    sweep_means: list
    sweeps_run: int
    mass_positive: float


def _converged(means):
    if len(means) <= MEAN_MOVE_WINDOW:
        return False
    return abs(means[-1] - means[-1 - MEAN_MOVE_WINDOW]) < MEAN_MOVE_TOL


def population_dynamics_z(d, z, pop_size=100_000, sweeps=200, seed=0):
    """Iterate the temperature-z operator with offspring law hat-pi; returns
    the population and the root-law mean (one application with law pi)."""
    if z <= 0:
        raise InvalidParameterError("z must be > 0")
    if pop_size < 1000:
        raise InvalidParameterError("pop_size must be >= 1000")
    rng = np.random.default_rng(seed)
    hat = d.size_biased()
    x = np.ones(pop_size)
    means = []
    run = 0
    for _ in range(sweeps):
        ns = _draw_counts(rng, hat, pop_size)
        idx = rng.integers(0, pop_size, size=int(ns.sum()))
        x = _sweep_z(x, ns, idx, float(z))
        means.append(float(x.mean()))
        run += 1
        if _converged(means):
            break
    ns = _draw_counts(rng, d, pop_size)
    idx = rng.integers(0, pop_size, size=int(ns.sum()))
    root = _sweep_z(x, ns, idx, float(z))
    return PopulationResult(
        population=x,
        root_mean=float(root.mean()),
        sweep_means=means,
        sweeps_run=run,
        mass_positive=float((x > 0).mean()),
    )


def population_dynamics_zero(
    da, db=None, p_init=None, pop_size=100_000, sweeps=200, seed=0
):
    """Solve the zero-temperature RDE by monotone iteration from
    Bernoulli(p_init); p_init defaults to the largest historical-record
    location, which makes the sweep means nonincreasing and the limit the
    relevant largest solution.

    Returns the population mu_* and the root-law mean (outer offspring pi^a,
    inner hat-pi^b), which targets the F-value at the record.
    """
    from .rde import historical_records

    if db is None:
        db = da
    if pop_size < 1000:
        raise InvalidParameterError("pop_size must be >= 1000")
    if p_init is None:
        import warnings

        # tie candidates cannot move the largest record, so skip their warning
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            p_init = historical_records(da, db).last
    if not 0 <= p_init <= 1:
        raise InvalidParameterError("p_init must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    da_hat = da.size_biased()
    db_hat = db.size_biased()
    x = (rng.random(pop_size) < p_init).astype(np.float64)
    means = [float(x.mean())]
    run = 0
    for _ in range(sweeps):
        ns = _draw_counts(rng, da_hat, pop_size)
        ms = _draw_counts(rng, db_hat, int(ns.sum()))
        idx = rng.integers(0, pop_size, size=int(ms.sum()))
        x = _sweep_zero(x, ns, ms, idx)
        means.append(float(x.mean()))
        run += 1
        if _converged(means):
            break
    ns = _draw_counts(rng, da, pop_size)
    ms = _draw_counts(rng, db_hat, int(ns.sum()))
    idx = rng.integers(0, pop_size, size=int(ms.sum()))
    root = _sweep_zero(x, ns, ms, idx)
    return PopulationResult(
        population=x,
        root_mean=float(root.mean()),
        sweep_means=means,
        sweeps_run=run,
        mass_positive=float((x > 0).mean()),
    )
