"""Analytic bound curves and their numeric oracles.

The central object is the nonincreasing curve xi(x) bounding the two-qubit
entanglement of formation of the internal state by the amount x of
correlations with an external system. For the Bures and Hellinger
correlation measures the curve is u(y(x)) with a piecewise closed form u;
the g4 grid search recomputes it as an infimum of the spectral entropy
s22 over iso-correlation slices of the probability simplex, which also
covers the mutual-information case where no closed form is available.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .qcore import DomainError, random_spectrum, validate_spectrum, worker_rng

LN2 = math.log(2.0)

_DOMAIN_SLACK = 1e-12


def _check_domain(y, lo: float, hi: float, name: str) -> np.ndarray:
    arr = np.asarray(y, dtype=float)
    if np.any(arr < lo - _DOMAIN_SLACK) or np.any(arr > hi + _DOMAIN_SLACK):
        raise DomainError(f"{name} must lie in [{lo}, {hi}]")
    return np.clip(arr, lo, hi)


def _scalar_like(y, arr: np.ndarray):
    arr = arr + 0.0  # normalize -0.0
    return float(arr) if np.isscalar(y) or np.ndim(y) == 0 else arr


# ---------------------------------------------------------------------------
# w, v, u
# ---------------------------------------------------------------------------

def w_pm(y, sign: int):
    """One branch of the concurrence-to-entropy kernel.

    w_[+-](y) = -(1 +- sqrt(1-y^2)) ln[(1 +- sqrt(1-y^2))/2] / 2 in nats,
    with 0 ln 0 = 0.
    """
    if sign not in (+1, -1):
        raise DomainError("sign must be +1 or -1")
    yy = _check_domain(y, 0.0, 1.0, "y")
    s = np.sqrt(np.clip(1.0 - yy * yy, 0.0, None))
    a = (1.0 + sign * s) / 2.0
    out = -np.where(a > 0.0, a * np.log(np.where(a > 0.0, a, 1.0)), 0.0)
    return _scalar_like(y, out)


def v(y):
    """v(y) = w_+(y) + w_-(y): entanglement of formation at concurrence y."""
    yy = _check_domain(y, 0.0, 1.0, "y")
    s = np.sqrt(np.clip(1.0 - yy * yy, 0.0, None))
    a = (1.0 + s) / 2.0
    b = 1.0 - a
    out = -a * np.log(a) - np.where(b > 0.0, b * np.log(np.where(b > 0.0, b, 1.0)), 0.0)
    return _scalar_like(y, out)


def u(y):
    """Piecewise bound kernel on [0, 3/4].

    v(1-y) on [0, 1/2], v(2-3y) on [1/2, 2/3], and 0 on [2/3, 3/4];
    continuous at both break points and nonincreasing.
    """
    yy = _check_domain(y, 0.0, 0.75, "y")
    first = yy <= 0.5
    second = (~first) & (yy <= 2.0 / 3.0)
    args = np.where(first, 1.0 - yy, np.where(second, np.clip(2.0 - 3.0 * yy, 0.0, 1.0), 0.0))
    vals = np.asarray(v(args), dtype=float)
    out = np.where(first | second, vals, 0.0)
    return _scalar_like(y, out)


# ---------------------------------------------------------------------------
# xi, zeta, thresholds
# ---------------------------------------------------------------------------

def _y_of_x(kind: str, x) -> np.ndarray:
    xx = np.asarray(x, dtype=float)
    if kind == "bures":
        _check_domain(x, 0.0, 1.0, "x")
        return np.clip(xx * xx - xx ** 4 / 4.0, 0.0, 0.75)
    if kind == "hellinger":
        _check_domain(x, 0.0, math.sqrt(1.5), "x")
        return np.clip(xx * xx / 2.0, 0.0, 0.75)
    raise DomainError(f"no closed-form curve for kind {kind!r}")


def xi_ef(kind: str, x):
    """Upper bound on internal E_f at correlation level x (2x2 system).

    xi(x) = u(x^2 - x^4/4) for the Bures measure on [0, 1] and
    u(x^2 / 2) for the Hellinger measure on [0, sqrt(3/2)].
    """
    out = u(_y_of_x(str(kind), x))
    return _scalar_like(x, np.asarray(out, dtype=float))


def zeta_ef(kind: str, x):
    """Classical-classical counterpart of xi; Hellinger only.

    For the Hellinger measure the CC bound coincides with the Bures xi.
    """
    if str(kind) != "hellinger":
        raise DomainError(f"no classical-classical curve for kind {kind!r}")
    return xi_ef("bures", x)


def zeta_mi_of_xi(xi, x):
    """CC bound for the mutual information: zeta(x) = xi(2x)."""
    return xi(2.0 * np.asarray(x, dtype=float) if np.ndim(x) else 2.0 * float(x))


def threshold(kind: str) -> float:
    """Smallest correlation level beyond which the bound is zero (y = 2/3)."""
    kind = str(kind)
    if kind == "hellinger":
        return math.sqrt(4.0 / 3.0)
    if kind == "bures":
        return math.sqrt(2.0 - math.sqrt(4.0 / 3.0))
    raise DomainError(f"no threshold for kind {kind!r}")


def renyi_threshold(d1: int, d2: int, alpha: float) -> float:
    """Correlation level above which the bound vanishes for f = Renyi entropy.

    Via the generalized Pinsker inequality every spectrum on the slice
    f(p) = x with x >= ln d - alpha / (2 d (d-1)), d = d1*d2, lies in the
    ball of spectra all of whose states are separable.
    """
    if d1 < 2 or d2 < d1:
        raise DomainError("need d1 >= 2 and d2 >= d1")
    if not (0.0 < alpha <= 1.0):
        raise DomainError("alpha must lie in (0, 1]")
    d = d1 * d2
    return math.log(d) - alpha / (2.0 * d * (d - 1))


# ---------------------------------------------------------------------------
# Beta deformation family
# ---------------------------------------------------------------------------

_TIE_RTOL = 1e-12


def beta_deform(p, beta: float) -> np.ndarray:
    """Interpolate a spectrum toward the point mass; beta = 1 is the identity.

    Without a tie at the top the components are proportional to
    (p_i / p_1)^beta. When the leading value is repeated j times, an eta
    branch first breaks the tie: the top component grows by eta = beta - 1
    and the j-1 tied ones shrink by eta/(j-1), up to the largest eta* that
    keeps the order; beyond beta = 1 + eta* the power branch continues from
    the tie-broken vector with exponent beta - eta*. The result majorizes
    the input for every beta >= 1 and is continuous in beta.
    """
    p = validate_spectrum(p)
    beta = float(beta)
    if beta < 1.0 - 1e-12:
        raise DomainError("beta must be >= 1")
    beta = max(beta, 1.0)
    r = p.size
    ties = np.nonzero(p >= p[0] * (1.0 - _TIE_RTOL))[0]
    j = int(ties[-1]) + 1  # length of the leading tie run

    if r == 1 or j == 1:
        return _power_branch(p, beta)

    p_next = p[j] if j < r else 0.0
    eta_star = (j - 1) * (p[0] - p_next)
    eta = min(beta - 1.0, eta_star)
    broken = p.copy()
    broken[0] = p[0] + eta
    broken[1:j] = p[0] - eta / (j - 1)
    broken = broken[broken > 0.0]
    broken = np.sort(broken)[::-1] / broken.sum()
    if beta <= 1.0 + eta_star:
        return broken
    return _power_branch(broken, beta - eta_star)


def _power_branch(p: np.ndarray, beta: float) -> np.ndarray:
    ratios = p / p[0]
    with np.errstate(under="ignore"):
        q = np.exp(beta * np.log(ratios))
    q = q[q > 0.0]
    return q / q.sum()


def spectrum_at_f(kind: str, x: float, base=None, tol: float = 1e-12) -> np.ndarray:
    """Spectrum p with f_kind(p) = x, found by bisection on beta_deform.

    ``base`` must have f_kind(base) >= x; by default the uniform 4-spectrum,
    whose beta family sweeps every correlation value down to zero.
    """
    from .correlations import f_value  # local import to avoid a cycle

    kind = str(kind)
    if base is None:
        base = np.full(4, 0.25)
    base = validate_spectrum(base)
    fx = f_value(kind, base)
    if x < -tol or x > fx + 1e-9:
        raise DomainError(f"target {x} outside the reachable range [0, {fx}]")
    x = min(max(x, 0.0), fx)

    lo, hi = 1.0, 2.0
    while f_value(kind, beta_deform(base, hi)) > x and hi < 1e6:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f_value(kind, beta_deform(base, mid)) > x:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-16 * max(1.0, hi):
            break
    best = None
    for b in (lo, hi, 0.5 * (lo + hi)):
        q = beta_deform(base, b)
        err = abs(f_value(kind, q) - x)
        if best is None or err < best[0]:
            best = (err, q)
    return best[1]


# ---------------------------------------------------------------------------
# g4: infimum of s22 over an iso-correlation slice
# ---------------------------------------------------------------------------

def _z_feasible(p2: np.ndarray, p4: np.ndarray, y: float) -> np.ndarray:
    """Ordering constraints of the slice maximization, taken verbatim."""
    eps = 1e-12
    return (
        (p4 >= -eps)
        & (p2 <= 1.0 - y + eps)
        & (2.0 * p2 + p4 >= y - eps)
        & (2.0 * p4 + p2 <= y + eps)
    )


def _g4_distance(kind: str, x: float, grid_resolution: int) -> float:
    from .measures import s22_ef

    y = float(_y_of_x(kind, x))
    if y <= 0.0:
        return 0.0
    p2_hi = min(1.0 - y, y)
    p4_hi = y / 3.0

    lo2, hi2, lo4, hi4 = 0.0, p2_hi, 0.0, p4_hi
    best = None
    for _ in range(3):  # grid search with refinement around the best cell
        g2 = np.linspace(lo2, hi2, grid_resolution)
        g4 = np.linspace(lo4, hi4, grid_resolution)
        p2, p4 = np.meshgrid(g2, g4, indexing="ij")
        z = 1.0 - 2.0 * y + (np.sqrt(p2) - np.sqrt(p4)) ** 2
        z = np.where(_z_feasible(p2, p4, y), z, -np.inf)
        flat = int(np.argmax(z))  # lowest index wins ties
        i, k = divmod(flat, grid_resolution)
        if best is None or z[i, k] > best[0]:
            best = (float(z[i, k]), float(g2[i]), float(g4[k]))
        span2 = (hi2 - lo2) / (grid_resolution - 1)
        span4 = (hi4 - lo4) / (grid_resolution - 1)
        lo2, hi2 = max(0.0, g2[i] - span2), min(p2_hi, g2[i] + span2)
        lo4, hi4 = max(0.0, g4[k] - span4), min(p4_hi, g4[k] + span4)

    z_best, p2b, p4b = best
    if not np.isfinite(z_best):
        raise DomainError(f"no feasible spectrum on the slice at x = {x}")
    p = np.array([1.0 - y, p2b, y - p2b - p4b, p4b])
    p = np.sort(np.clip(p, 0.0, None))[::-1]
    p = p[p > 0.0] / p.sum()
    return float(s22_ef(p))


def _h4(q) -> float:
    total = 0.0
    for t in q:
        if t > 0.0:
            total -= t * math.log(t)
    return total


def _project_to_entropy(p, target: float) -> list[float]:
    """Move p along a mixing path until its Shannon entropy hits target.

    Mixing toward the uniform vector raises the entropy monotonically,
    mixing toward the point mass lowers it, so a bisection on the mixing
    weight always lands on the target level.
    """
    p = sorted((max(t, 0.0) for t in p), reverse=True)
    norm = sum(p)
    p = [t / norm for t in p]
    cur = _h4(p)
    if abs(cur - target) < 1e-13:
        return p
    below = cur < target
    if below:
        other = [1.0 / len(p)] * len(p)
    else:
        other = [0.0] * len(p)
        other[0] = 1.0
    lo, hi = 0.0, 1.0
    for _ in range(48):
        mid = 0.5 * (lo + hi)
        q = [(1.0 - mid) * a + mid * b for a, b in zip(p, other)]
        if (_h4(q) < target) == below:
            lo = mid
        else:
            hi = mid
    q = [(1.0 - hi) * a + hi * b for a, b in zip(p, other)]
    norm = sum(q)
    return [t / norm for t in q]


def _s22_of_desc4(q) -> float:
    """s22 of a descending probability 4-list (zeros allowed); scalar path."""
    p = list(q) + [0.0] * (4 - len(q))
    cap = p[0] - p[2] - 2.0 * math.sqrt(p[1] * p[3])
    if cap <= 0.0:
        return LN2
    s = math.sqrt(max(0.0, 1.0 - cap * cap))
    a = (1.0 + s) / 2.0
    b = 1.0 - a
    ent = -a * math.log(a) - (b * math.log(b) if b > 0.0 else 0.0)
    return LN2 - ent


def _g4_mutual_information(
    x: float,
    restarts: int,
    steps: int,
    rng: np.random.Generator,
    candidates=(),
) -> float:
    target_h = x / 2.0
    if target_h < 0.0 or target_h > math.log(4.0) + 1e-9:
        raise DomainError(f"infeasible mutual-information level {x}")
    target_h = min(target_h, math.log(4.0))
    if target_h <= 0.0:
        return 0.0

    starts = [[0.25] * 4, [0.5, 0.5, 0.0, 0.0], [0.4, 0.3, 0.3, 0.0]]
    starts += [list(random_spectrum(4, rng)) for _ in range(max(0, restarts - len(starts)))]
    best = math.inf
    for q0 in starts:
        q = _project_to_entropy(q0, target_h)
        cur = _s22_of_desc4(sorted(q, reverse=True))
        step = 0.25
        rejected = 0
        for _ in range(steps):
            noise = rng.standard_normal(4)
            trial = [max(a + step * n, 0.0) for a, n in zip(q, noise)]
            if sum(trial) <= 0.0:
                continue
            trial = _project_to_entropy(trial, target_h)
            val = _s22_of_desc4(sorted(trial, reverse=True))
            if val < cur - 1e-15:
                q, cur, rejected = trial, val, 0
            else:
                rejected += 1
                if rejected >= 20:
                    step *= 0.5
                    rejected = 0
        best = min(best, cur)
    for cand in candidates:
        cand = [float(t) for t in cand if t > 0.0]
        if abs(_h4(cand) - target_h) < 1e-6:
            best = min(best, _s22_of_desc4(sorted(cand, reverse=True)))
    return best


def g_d_numeric(
    kind: str,
    d: int,
    x: float,
    grid_resolution: int = 200,
    restarts: int = 10,
    rng: np.random.Generator | None = None,
    candidates=(),
    steps: int | None = None,
) -> float:
    """Approximate infimum of s22 over spectra with correlation value x.

    For the distance measures the slice fixes p1, reducing the problem to a
    two-variable grid search; for the mutual information a projected random
    search with local refinement is used. Always an over-estimate of the
    true infimum (it reports the best feasible point found).
    """
    from .correlations import c_max

    kind = str(kind)
    if d != 4:
        raise DomainError("only d = 4 (two-qubit internal system) is supported")
    if grid_resolution < 100:
        raise DomainError("grid_resolution must be >= 100")
    if x < -1e-12 or x > c_max(kind, 4) + 1e-9:
        raise DomainError(f"infeasible correlation level {x} for kind {kind!r}")
    x = min(max(x, 0.0), c_max(kind, 4))
    if kind in ("bures", "hellinger"):
        return _g4_distance(kind, x, grid_resolution)
    if kind == "mutual_information":
        if rng is None:
            rng = worker_rng(0, 0)
        if steps is None:
            steps = 2 * grid_resolution
        return _g4_mutual_information(x, restarts, steps, rng, candidates)
    raise DomainError(f"unknown kind {kind!r}")


# ---------------------------------------------------------------------------
# Curve sampling
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundCurve:
    """Sampled nonincreasing bound curve on [0, x_max]."""

    kind: str
    xs: np.ndarray = field(repr=False)
    bounds: np.ndarray = field(repr=False)


def bound_curve(kind: str, grid: int = 201, seed: int = 0) -> BoundCurve:
    """Sample the bound curve on an equally spaced grid including endpoints.

    Distance kinds sample the closed form xi; the mutual-information kind
    samples the classical-classical curve zeta(x) = xi(2x) with xi obtained
    from the g4 search (no closed form exists for it).
    """
    from .correlations import c_max

    kind = str(kind)
    if grid < 2:
        raise DomainError("grid must have at least 2 points")
    if kind in ("bures", "hellinger"):
        xs = np.linspace(0.0, c_max(kind, 4), grid)
        return BoundCurve(kind, xs, np.asarray(xi_ef(kind, xs), dtype=float))
    if kind == "mutual_information":
        xs = np.linspace(0.0, math.log(4.0), grid)
        rng = worker_rng(seed, 0)
        vals = np.array(
            [LN2 - g_d_numeric(kind, 4, 2.0 * x, restarts=6, rng=rng) for x in xs]
        )
        vals = np.minimum.accumulate(vals)  # enforce the known monotone shape
        return BoundCurve(kind, xs, vals)
    raise DomainError(f"unknown kind {kind!r}")
