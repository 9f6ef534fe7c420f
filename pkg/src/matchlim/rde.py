"""Degree distributions, the Galton-Watson limit formulas, historical
records, and the cuckoo-hashing load threshold.

F(t) = t phi'(1-t) + phi(1-t) + phi(1 - phi'(1-t)/phi'(1)) - 1 drives the
unimodular tree limit gamma = (1 - max F)/2; the bipartite variant uses the
pair (F^a, F^b).  Record locations are the fixed points of the composed
size-biased map x -> hat-phi^a(1 - hat-phi^b(1 - x)) at which F strictly
exceeds all earlier values.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .errors import InvalidParameterError

_MASS_TOL = 1e-12
RECORD_GRID = 10_000
RECORD_TOL = 1e-12


class DegreeDistribution:
    """pmf on {0, 1, ...} with generating function phi; Poisson keeps its
    closed form so F never sees truncation error."""

    def __init__(self, pmf, kind="pmf", param=None):
        pmf = np.asarray(pmf, dtype=np.float64)
        if pmf.ndim != 1 or len(pmf) == 0:
            raise InvalidParameterError("pmf must be a nonempty vector")
        if (pmf < -_MASS_TOL).any():
            raise InvalidParameterError("pmf entries must be nonnegative")
        if abs(pmf.sum() - 1.0) > 1e-9:
            raise InvalidParameterError("pmf must sum to 1")
        self.pmf = np.clip(pmf, 0.0, None)
        self.pmf = self.pmf / self.pmf.sum()
        self.pmf.setflags(write=False)
        self.kind = kind
        self.param = param

    # constructors ---------------------------------------------------------

    @classmethod
    def dirac(cls, k):
        if k < 0:
            raise InvalidParameterError("k must be >= 0")
        pmf = np.zeros(k + 1)
        pmf[k] = 1.0
        return cls(pmf, kind="dirac", param=k)

    @classmethod
    def poisson(cls, c):
        if c < 0:
            raise InvalidParameterError("c must be >= 0")
        if c == 0:
            return cls.dirac(0)
        # truncate adaptively to tail mass < 1e-12
        k = max(20, int(c + 12 * math.sqrt(c) + 12))
        while True:
            ks = np.arange(k + 1)
            logp = ks * math.log(c) - c - np.cumsum(np.concatenate([[0.0], np.log(np.maximum(ks[1:], 1))]))
            pmf = np.exp(logp)
            if 1.0 - pmf.sum() < _MASS_TOL:
                break
            k *= 2
        return cls(pmf / pmf.sum(), kind="poisson", param=float(c))

    @classmethod
    def from_pmf(cls, values):
        return cls(np.asarray(values, dtype=np.float64))

    @classmethod
    def parse(cls, text):
        """Parse "dirac k" | "poisson c" | "pmf p0 p1 ..."."""
        parts = text.split()
        if not parts:
            raise InvalidParameterError("empty distribution spec")
        tag = parts[0].lower()
        try:
            if tag == "dirac" and len(parts) == 2:
                return cls.dirac(int(parts[1]))
            if tag == "poisson" and len(parts) == 2:
                return cls.poisson(float(parts[1]))
            if tag == "pmf" and len(parts) >= 2:
                return cls.from_pmf([float(x) for x in parts[1:]])
        except ValueError as exc:
            raise InvalidParameterError(f"bad distribution spec {text!r}: {exc}") from exc
        raise InvalidParameterError(
            f"bad distribution spec {text!r}; expected 'dirac k', 'poisson c' or 'pmf p0 p1 ...'"
        )

    # generating function --------------------------------------------------

    @property
    def mean(self):
        if self.kind == "poisson":
            return self.param
        return float(np.dot(np.arange(len(self.pmf)), self.pmf))

    @property
    def max_degree(self):
        return int(np.flatnonzero(self.pmf > 0).max())

    def phi(self, t):
        if self.kind == "poisson":
            return np.exp(self.param * (np.asarray(t, dtype=float) - 1.0))
        t = np.asarray(t, dtype=float)
        return np.polynomial.polynomial.polyval(t, self.pmf)

    def phi_prime(self, t):
        if self.kind == "poisson":
            return self.param * np.exp(self.param * (np.asarray(t, dtype=float) - 1.0))
        t = np.asarray(t, dtype=float)
        d = self.pmf[1:] * np.arange(1, len(self.pmf))
        return np.polynomial.polynomial.polyval(t, d) if len(d) else np.zeros_like(t)

    def phi_hat(self, t):
        """Generating function of the size-biased transform: phi'(t)/phi'(1)."""
        return self.phi_prime(t) / self.mean

    def size_biased(self):
        """hat-pi_n = (n+1) pi_{n+1} / mean."""
        if self.mean <= 0:
            raise InvalidParameterError("size-biasing needs positive mean")
        if self.kind == "poisson":
            return DegreeDistribution.poisson(self.param)
        if self.kind == "dirac":
            return DegreeDistribution.dirac(self.param - 1)
        ns = np.arange(1, len(self.pmf))
        pmf = ns * self.pmf[1:] / self.mean
        return DegreeDistribution(pmf / pmf.sum())

    def spec_string(self):
        if self.kind == "dirac":
            return f"dirac {self.param}"
        if self.kind == "poisson":
            return f"poisson {self.param}"
        return "pmf " + " ".join(repr(p) for p in self.pmf)

    def __repr__(self):
        return f"DegreeDistribution({self.spec_string()})"


# ---------------------------------------------------------------------------
# limit formulas


def eval_F(d, t):
    """F(t) = t phi'(1-t) + phi(1-t) + phi(1 - phi'(1-t)/phi'(1)) - 1."""
    t = np.asarray(t, dtype=float)
    s = 1.0 - t
    return t * d.phi_prime(s) + d.phi(s) + d.phi(1.0 - d.phi_hat(s)) - 1.0


def stationarity_residual(d, t):
    """phi'(1) t - phi'(1 - phi'(1-t)/phi'(1)); zero at F's stationary points."""
    t = np.asarray(t, dtype=float)
    return d.mean * t - d.phi_prime(1.0 - d.phi_hat(1.0 - t))


def eval_F_bipartite(da, db, t):
    """(F^a(t), F^b(t)) for the two-type tree limit."""
    if da.mean <= 0 or db.mean <= 0:
        raise InvalidParameterError("both means must be positive")
    t = np.asarray(t, dtype=float)
    s = 1.0 - t
    fa = da.phi(1.0 - db.phi_hat(s)) - (da.mean / db.mean) * (
        1.0 - db.phi(s) - t * db.phi_prime(s)
    )
    fb = db.phi(1.0 - da.phi_hat(s)) - (db.mean / da.mean) * (
        1.0 - da.phi(s) - t * da.phi_prime(s)
    )
    return fa, fb


def eval_g(d, x):
    """g(x) = 1 - (1-x)phi'(x)/2 - phi(x)/2 - phi(1 - phi'(x)/phi'(1))/2.

    Satisfies g(1-t) = (1 - F(t))/2.
    """
    x = np.asarray(x, dtype=float)
    return (
        1.0
        - 0.5 * (1.0 - x) * d.phi_prime(x)
        - 0.5 * d.phi(x)
        - 0.5 * d.phi(1.0 - d.phi_hat(x))
    )


# ---------------------------------------------------------------------------
# historical records


@dataclass
class RecordSet:
    locations: list
    f_values: list
    warnings: list = field(default_factory=list)

    def __len__(self):
        return len(self.locations)

    @property
    def last(self):
        return self.locations[-1]


def _composed_residual(da_hat, db_hat, x):
    return da_hat.phi(1.0 - db_hat.phi(1.0 - np.asarray(x, dtype=float))) - x


def historical_records(da, db=None, grid=RECORD_GRID, tol=RECORD_TOL):
    """Fixed points of x = hat-phi^a(1 - hat-phi^b(1 - x)) filtered to
    locations where F^a strictly exceeds every earlier value.

    Dense sign-change scan plus bisection refinement; an identically-zero
    residual (a continuum of fixed points, e.g. 2-regular) collapses to the
    single record at 0.
    """
    if db is None:
        db = da
    da_hat = da.size_biased()
    db_hat = db.size_biased()
    xs = np.linspace(0.0, 1.0, grid + 1)
    res = _composed_residual(da_hat, db_hat, xs)
    if np.max(np.abs(res)) < tol:
        return RecordSet(locations=[0.0], f_values=[float(eval_F_bipartite(da, db, 0.0)[0])])

    def fun(x):
        return float(_composed_residual(da_hat, db_hat, x))

    candidates = []
    if abs(res[0]) < 1e-11:
        candidates.append(0.0)
    if abs(res[-1]) < 1e-11:
        candidates.append(1.0)
    for i in range(grid):
        a, b = res[i], res[i + 1]
        if a == 0.0 and 0 < i:
            candidates.append(float(xs[i]))
        elif a * b < 0:
            candidates.append(float(optimize.bisect(fun, xs[i], xs[i + 1], xtol=tol)))
    candidates = sorted(set(round(c, 13) for c in candidates))
    f_grid = np.asarray(eval_F_bipartite(da, db, xs)[0])
    locations = []
    f_values = []
    warns = []
    for x in candidates:
        fx = float(eval_F_bipartite(da, db, x)[0])
        before = f_grid[xs < x - 1e-9]
        prev = max(
            [float(before.max())] if len(before) else [],
            default=-math.inf,
        )
        prev = max([prev] + f_values) if f_values else prev
        if x == candidates[0] and x <= tol:
            locations.append(x)
            f_values.append(fx)
            continue
        if fx > prev + 1e-12:
            locations.append(x)
            f_values.append(fx)
        elif abs(fx - prev) <= 1e-12 and prev > -math.inf:
            warns.append(
                f"degenerate record candidate at x={x:.6f}: F ties the running maximum"
            )
    if not locations:
        # no strict improvement anywhere: fall back to the argmax candidate
        best = max(candidates, key=lambda x: float(eval_F_bipartite(da, db, x)[0]))
        locations = [best]
        f_values = [float(eval_F_bipartite(da, db, best)[0])]
    for w in warns:
        warnings.warn(w, stacklevel=2)
    return RecordSet(locations=locations, f_values=f_values, warnings=warns)


# ---------------------------------------------------------------------------
# gamma


def _max_F_single(d):
    # tie candidates cannot change the maximum, so their warning is noise here
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        recs = historical_records(d, d)
    cands = list(recs.locations) + [0.0, 1.0]
    return max(float(eval_F(d, x)) for x in cands), recs


def gamma_ugw(d):
    """gamma = (1 - max F)/2 for the unimodular Galton-Watson limit."""
    if not math.isfinite(d.mean) or d.mean < 0:
        raise InvalidParameterError("finite mean required")
    if d.mean == 0:
        return 0.0
    best, _ = _max_F_single(d)
    return (1.0 - best) / 2.0


def gamma_uhgw(da, db):
    """Per-total-vertex gamma for the two-type tree, via both the asymmetric
    and the symmetric formula; they must agree to 1e-9."""
    if da.mean <= 0 or db.mean <= 0:
        raise InvalidParameterError("both means must be positive")
    lam = db.mean / (da.mean + db.mean)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        recs_a = historical_records(da, db)
        recs_b = historical_records(db, da)
    cand_a = list(recs_a.locations) + [0.0, 1.0]
    cand_b = list(recs_b.locations) + [0.0, 1.0]
    max_fa = max(float(eval_F_bipartite(da, db, x)[0]) for x in cand_a)
    max_fb = max(float(eval_F_bipartite(da, db, x)[1]) for x in cand_b)
    g1 = lam * (1.0 - max_fa)
    g2 = (lam * (1.0 - max_fa) + (1.0 - lam) * (1.0 - max_fb)) / 2.0
    if abs(g1 - g2) > 1e-9:  # pragma: no cover
        raise ArithmeticError(
            f"asymmetric/symmetric gamma formulas disagree: {g1} vs {g2}"
        )
    return g1


# ---------------------------------------------------------------------------
# cuckoo hashing


def _xi_equation(z):
    em = math.exp(-z)
    return z * (1.0 - em) / (1.0 - em - z * em)


def cuckoo_threshold(k, method="bisect"):
    """(xi, alpha_c) for left-k-regular hashing, k >= 3.

    xi solves k = xi(1 - e^-xi)/(1 - e^-xi - xi e^-xi), a strictly
    increasing map; alpha_c = xi / (k (1 - e^-xi)^(k-1)).
    """
    if k < 3:
        raise InvalidParameterError("cuckoo threshold requires k >= 3")
    f = lambda z: _xi_equation(z) - k
    if method == "bisect":
        lo, hi = 1e-9, 2.0
        while f(hi) < 0:
            hi *= 2.0
        xi = float(optimize.bisect(f, lo, hi, xtol=1e-12, maxiter=500))
    elif method == "secant":
        xi = float(optimize.newton(f, x0=float(k), x1=float(k) + 0.5, tol=1e-12, maxiter=200))
    else:
        raise InvalidParameterError(f"unknown method {method!r}")
    alpha_c = xi / (k * (1.0 - math.exp(-xi)) ** (k - 1))
    return xi, alpha_c


def _largest_fixed_point_x(k, alpha, grid=10_000):
    """Largest solution of x = (1 - e^{-k alpha x})^{k-1}, descending scan."""
    f = lambda x: (1.0 - math.exp(-k * alpha * x)) ** (k - 1) - x
    xs = np.linspace(1.0, 0.0, grid + 1)
    prev = f(xs[0])
    for i in range(1, len(xs)):
        cur = f(xs[i])
        if prev == 0.0:
            return float(xs[i - 1])
        if prev * cur < 0:
            return float(optimize.bisect(f, xs[i], xs[i - 1], xtol=1e-13))
        prev = cur
    return 0.0


def cuckoo_matched_fraction(k, alpha):
    """Limiting matched fraction of items (a-vertices): 1 below the load
    threshold, the explicit defect formula above it."""
    if k < 3:
        raise InvalidParameterError("cuckoo analysis requires k >= 3")
    if alpha <= 0:
        raise InvalidParameterError("alpha must be > 0")
    _, alpha_c = cuckoo_threshold(k)
    if alpha <= alpha_c:
        return 1.0
    x_star = _largest_fixed_point_x(k, alpha)
    xi_star = k * alpha * x_star
    em = math.exp(-xi_star)
    return 1.0 - (em + xi_star * em + xi_star / k * (1.0 - em) - 1.0) / alpha
