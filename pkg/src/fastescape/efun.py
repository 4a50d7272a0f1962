"""Entire-function representations with maximum/minimum modulus oracles.

Three representations are supported:

* ``ExpFamily(lam)``       -- f(z) = lam * e^z,
* ``LacunaryProduct``      -- f(z) = prod_m (1 - z / r_m) over widely spaced
                              positive zeros (consecutive ratios > 4),
* ``TruncatedSeries``      -- finite power series with a declared tail bound.

All modulus work is done on ``log |f|`` so radii far beyond float overflow of
the value itself remain usable.  On a circle |z| = r every factor
``|1 - z/r_m|`` of a lacunary product is maximised at z = -r and minimised at
z = r simultaneously, so M(r) and m(r) have closed forms there; ExpFamily is
closed-form everywhere; series fall back to circle sampling.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from .errors import RangeError
from .xreal import TowerReal, normalize

#: zeros beyond this multiple of |z| contribute only through the tail bound
TRUNCATION_FACTOR = 2.0 ** 20

#: circle sampling: number of uniform angles, and the refinement tolerance
CIRCLE_SAMPLES = 1024
REFINE_ANGLE_TOL = 1e-12


@dataclass(frozen=True)
class ExpFamily:
    """f(z) = lam * e^z with lam > 0."""

    lam: float = 1.0
    name: str = "exp"

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lam) and self.lam > 0):
            raise ValueError("lam must be positive and finite")


@dataclass(frozen=True)
class LacunaryProduct:
    """f(z) = prod (1 - z/r_m) with stored zeros; ``tail_ratio`` continues the
    zero sequence geometrically for tail bounding (None means the product is
    exactly the stored finite one)."""

    zeros: tuple[float, ...]
    tail_ratio: float | None = None
    name: str = "lacunary"

    def __post_init__(self) -> None:
        if not self.zeros:
            raise ValueError("need at least one zero")
        prev = 0.0
        for r in self.zeros:
            if not (math.isfinite(r) and r > 0):
                raise ValueError(f"zero {r!r} must be positive and finite")
            if prev and r <= 4.0 * prev:
                raise ValueError(f"zero spacing violated: {r} <= 4 * {prev}")
            prev = r
        if self.tail_ratio is not None and self.tail_ratio <= 4.0:
            raise ValueError("tail_ratio must exceed 4")


@dataclass(frozen=True)
class TruncatedSeries:
    """Finite series sum a_k z^k, valid for r <= r_max with |tail| <= tail_bound(r)."""

    coeffs: tuple[complex, ...]
    tail_bound: Callable[[float], float] = field(compare=False)
    r_max: float = math.inf
    name: str = "series"

    def __post_init__(self) -> None:
        if not self.coeffs:
            raise ValueError("need at least one coefficient")


EntireFunction = Union[ExpFamily, LacunaryProduct, TruncatedSeries]


@dataclass(frozen=True)
class ModulusResult:
    """One modulus value.  ``value is None`` is the exact-zero sentinel
    (a stored zero lies on the circle); ``err_log`` bounds the absolute error
    of log(value), which is 0 for closed forms up to float rounding."""

    value: TowerReal | None
    err_log: float
    method: str

    @property
    def is_zero(self) -> bool:
        return self.value is None


def exp_series(degree: int) -> TruncatedSeries:
    """Taylor truncation of e^z with a geometric tail bound, valid r < degree/2."""
    coeffs = []
    c = 1.0
    for k in range(degree + 1):
        coeffs.append(complex(c))
        c /= (k + 1)

    fact = math.factorial(degree + 1)

    def tail(r: float) -> float:
        # sum_{k>degree} r^k/k! <= r^{degree+1}/(degree+1)! * 1/(1 - r/(degree+2))
        q = r / (degree + 2)
        if q >= 0.5:
            return math.inf
        return r ** (degree + 1) / fact / (1.0 - q)

    return TruncatedSeries(tuple(coeffs), tail, r_max=degree / 2.0, name=f"exp_series{degree}")


# --------------------------------------------------------------------------
# evaluation
# --------------------------------------------------------------------------

def _lac_check_coverage(f: LacunaryProduct, r: float) -> None:
    if f.tail_ratio is not None and r > f.zeros[-1]:
        raise RangeError(
            f"radius {r} beyond stored zero coverage (last zero {f.zeros[-1]})")


def _lac_included(f: LacunaryProduct, r: float) -> tuple[int, float]:
    """Index count of zeros kept at radius r, and the log-scale tail bound.

    Excluded zeros satisfy r_k > TRUNCATION_FACTOR * r; with gap ratio > 4 the
    neglected log-factors sum to at most (4/3) * r / r_first_excluded.
    """
    _lac_check_coverage(f, r)
    cutoff = TRUNCATION_FACTOR * r
    n = 0
    for rk in f.zeros:
        if rk <= cutoff:
            n += 1
        else:
            break
    if n < len(f.zeros):
        r_next = f.zeros[n]
    elif f.tail_ratio is not None:
        r_next = f.zeros[-1] * f.tail_ratio
    else:
        return n, 0.0
    return n, (4.0 / 3.0) * r / r_next


def _softplus(u: float) -> float:
    """log(1 + e^u), stable for all u."""
    if u > 35.0:
        return u + math.log1p(math.exp(-u))
    if u < -700.0:
        return 0.0
    return math.log1p(math.exp(u))


def _log_abs_expm1(u: float) -> float:
    """log |1 - e^u|, stable away from u = 0 (caller handles u == 0)."""
    if u > 0.0:
        return u + math.log1p(-math.exp(-u)) if u <= 35.0 else u
    return math.log1p(-math.exp(u)) if u > -700.0 else 0.0


def _lac_tail_terms(f: LacunaryProduct, lr: float, minimum: bool) -> float:
    """Sum of log-factors over the conceptual zeros beyond the stored list.

    At the modulus extrema the tail factors are exactly 1 +- r / r_k with
    r_k = z_last * ratio^j < infinity, all larger than r by coverage."""
    if f.tail_ratio is None:
        return 0.0
    lz = math.log(f.zeros[-1])
    lq = math.log(f.tail_ratio)
    s = 0.0
    j = 1
    while True:
        u = lr - lz - j * lq
        term = math.log1p(-math.exp(u)) if minimum else _softplus(u)
        s += term
        if abs(term) < 1e-18 or j > 10_000:
            break
        j += 1
    return s


def lac_log_max_from_log_r(f: LacunaryProduct, lr: float) -> float:
    """log M(e^lr) = sum log(1 + e^lr / r_k); exact closed form."""
    if f.tail_ratio is not None and lr > math.log(f.zeros[-1]):
        raise RangeError(f"log-radius {lr} beyond stored zero coverage")
    s = sum(_softplus(lr - math.log(rk)) for rk in f.zeros)
    return s + _lac_tail_terms(f, lr, minimum=False)


def lac_log_min_from_log_r(f: LacunaryProduct, lr: float) -> float | None:
    """log m(e^lr) = sum log |1 - e^lr / r_k|; None when e^lr hits a zero."""
    if f.tail_ratio is not None and lr > math.log(f.zeros[-1]):
        raise RangeError(f"log-radius {lr} beyond stored zero coverage")
    s = 0.0
    for rk in f.zeros:
        u = lr - math.log(rk)
        if u == 0.0:
            return None
        s += _log_abs_expm1(u)
    return s + _lac_tail_terms(f, lr, minimum=True)


def evaluate(f: EntireFunction, z: complex) -> complex:
    """f(z) within the representation's certified range (raises RangeError outside)."""
    z = complex(z)
    if isinstance(f, ExpFamily):
        if z.real > 700.0:
            raise RangeError(f"exp overflow at Re z = {z.real}")
        return f.lam * cmath.exp(z)
    if isinstance(f, LacunaryProduct):
        r = abs(z)
        n, _tail = _lac_included(f, r) if r > 0 else (len(f.zeros), 0.0)
        out = complex(1.0)
        for rk in f.zeros[:n]:
            out *= (1.0 - z / rk)
            if not (math.isfinite(out.real) and math.isfinite(out.imag)):
                raise RangeError(f"product overflow at |z| = {r}")
        return out
    r = abs(z)
    if r > f.r_max:
        raise RangeError(f"|z| = {r} beyond series validity r_max = {f.r_max}")
    out = complex(0.0)
    for a in reversed(f.coeffs):
        out = out * z + a
    return out


def log_abs(f: EntireFunction, r: float, theta: float) -> float:
    """log |f(r e^{i theta})|; -inf exactly at a zero."""
    if r < 0:
        raise ValueError("radius must be nonnegative")
    if isinstance(f, ExpFamily):
        return math.log(f.lam) + r * math.cos(theta)
    if isinstance(f, LacunaryProduct):
        n, _ = _lac_included(f, r)
        z = cmath.rect(r, theta)
        s = 0.0
        for rk in f.zeros[:n]:
            w = z / rk
            aw = abs(w)
            if aw > 1e8:
                # |1 - w| = |w| |1/w - 1|; keeps the log finite for huge |w|
                s += math.log(aw) + math.log(abs(1.0 / w - 1.0))
            else:
                a2 = aw * aw - 2.0 * w.real + 1.0
                if a2 <= 0.0:
                    return -math.inf
                s += 0.5 * math.log(a2)
        return s
    v = evaluate(f, cmath.rect(r, theta))
    av = abs(v)
    return math.log(av) if av > 0 else -math.inf


# --------------------------------------------------------------------------
# circle sampling with golden-section refinement
# --------------------------------------------------------------------------

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_refine(g: Callable[[float], float], lo: float, hi: float,
                   maximize: bool) -> tuple[float, float]:
    sign = -1.0 if maximize else 1.0
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = sign * g(c), sign * g(d)
    while (b - a) > REFINE_ANGLE_TOL:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = sign * g(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = sign * g(d)
    t = 0.5 * (a + b)
    return t, g(t)


def circle_extremum(f: EntireFunction, r: float, maximize: bool,
                    samples: int = CIRCLE_SAMPLES) -> tuple[float, float, float]:
    """(theta*, log|f|*, err_bound) of the circle extremum of log |f| at radius r."""
    thetas = np.arange(samples) * (2.0 * math.pi / samples)
    vals = np.array([log_abs(f, r, t) for t in thetas])
    i = int(np.argmax(vals) if maximize else np.argmin(vals))
    step = 2.0 * math.pi / samples
    lo, hi = thetas[i] - step, thetas[i] + step

    def g(t: float) -> float:
        return log_abs(f, r, t)

    theta, best = _golden_refine(g, lo, hi, maximize)
    if not math.isfinite(best):
        return theta, best, 0.0
    # curvature estimate for the residual-bracket error
    d = 1e-4
    second = abs(g(theta - d) - 2.0 * best + g(theta + d)) / (d * d)
    err = 0.5 * second * REFINE_ANGLE_TOL ** 2 + 1e-13
    return theta, best, err


# --------------------------------------------------------------------------
# modulus oracles
# --------------------------------------------------------------------------

def log_max_modulus(f: EntireFunction, r: float) -> float:
    """log M(r) via the closed form (exp, lacunary) or circle sampling (series)."""
    if r <= 0:
        raise ValueError("radius must be positive")
    if isinstance(f, ExpFamily):
        return math.log(f.lam) + r
    if isinstance(f, LacunaryProduct):
        _lac_check_coverage(f, r)
        return lac_log_max_from_log_r(f, math.log(r))
    _, v, _ = circle_extremum(f, r, maximize=True)
    return v


def log_min_modulus(f: EntireFunction, r: float) -> float | None:
    """log m(r); None is the exact-zero sentinel (a stored zero on the circle)."""
    if r <= 0:
        raise ValueError("radius must be positive")
    if isinstance(f, ExpFamily):
        return math.log(f.lam) - r
    if isinstance(f, LacunaryProduct):
        _lac_check_coverage(f, r)
        if r in f.zeros:
            return None
        return lac_log_min_from_log_r(f, math.log(r))
    _, v, _ = circle_extremum(f, r, maximize=False)
    return v if math.isfinite(v) else None


def _series_err_log(f: TruncatedSeries, r: float, log_val: float) -> float:
    t = f.tail_bound(r)
    if not math.isfinite(t):
        return math.inf
    rel = t / math.exp(min(log_val, 700.0)) if log_val > -700.0 else math.inf
    return rel if rel < 0.5 else math.inf


def max_modulus(f: EntireFunction, r: float, method: str = "auto") -> ModulusResult:
    """M(r) as a ModulusResult.  ``method='sample'`` forces circle sampling,
    keeping an independent route beside the closed forms."""
    if method == "sample" or isinstance(f, TruncatedSeries):
        theta, v, err = circle_extremum(f, r, maximize=True)
        if isinstance(f, TruncatedSeries):
            err += _series_err_log(f, r, v)
        elif isinstance(f, LacunaryProduct):
            err += _lac_included(f, r)[1]
        return ModulusResult(normalize(1, v), err, "circle-sample")
    if isinstance(f, ExpFamily):
        return ModulusResult(normalize(1, log_max_modulus(f, r)), 0.0, "closed-form")
    # stored factors plus the analytic tail sum: exact up to float rounding
    return ModulusResult(normalize(1, log_max_modulus(f, r)), 0.0, "product-partial")


def min_modulus(f: EntireFunction, r: float, method: str = "auto") -> ModulusResult:
    """m(r) as a ModulusResult; the exact-zero sentinel has value None."""
    if method == "sample" or isinstance(f, TruncatedSeries):
        theta, v, err = circle_extremum(f, r, maximize=False)
        if not math.isfinite(v):
            return ModulusResult(None, 0.0, "circle-sample")
        if isinstance(f, TruncatedSeries):
            err += _series_err_log(f, r, v)
        elif isinstance(f, LacunaryProduct):
            err += _lac_included(f, r)[1]
        return ModulusResult(normalize(1, v), err, "circle-sample")
    lv = log_min_modulus(f, r)
    if lv is None:
        return ModulusResult(None, 0.0,
                             "closed-form" if isinstance(f, ExpFamily) else "product-partial")
    if isinstance(f, ExpFamily):
        return ModulusResult(normalize(1, lv), 0.0, "closed-form")
    return ModulusResult(normalize(1, lv), 0.0, "product-partial")


def supports_tower_mode(f: EntireFunction) -> bool:
    """True when f(x) = M(x) on the positive axis (nonnegative series coefficients),
    so modulus orbits can continue past float range."""
    if isinstance(f, ExpFamily):
        return True
    if isinstance(f, TruncatedSeries):
        return all(c.imag == 0 and c.real >= 0 for c in f.coeffs)
    return False


# --------------------------------------------------------------------------
# product sandwich check
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SandwichReport:
    m: int
    window: tuple[float, float]
    log_min_g: float
    log_max_g: float
    ratio: float
    bound: float
    passed: bool


#: universal window constants for gap ratio 4: every factor of
#: f(z) / (z^m / prod_{k<=m} r_k) lies in [1 - u_j, 1 + u_j] with u_j = 4^{-j}/2
def _universal_window_constants() -> tuple[float, float]:
    lo, hi = 1.0, 1.0
    for j in range(60):
        u = 0.5 * 0.25 ** j
        lo *= (1.0 - u)
        hi *= (1.0 + u)
    return lo, hi


LOWER_HALF, UPPER_HALF = _universal_window_constants()
#: g = |f(z)|/|z|^m varies over a window by at most this universal factor
UNIVERSAL_SANDWICH_RATIO = (UPPER_HALF / LOWER_HALF) ** 2
#: admissible lower-sandwich constant: |f| > SANDWICH_DELTA * c_m |z|^m
SANDWICH_DELTA = (LOWER_HALF / UPPER_HALF) ** 2


def modulus_sandwich_check(f: LacunaryProduct, m: int, samples: int = 64,
                           bound: float | None = None) -> SandwichReport:
    """Sample g(z) = |f(z)| / |z|^m on the annulus 2 r_m < |z| < r_{m+1}/2.

    The spread max g / min g must stay below ``bound`` (default: the universal
    constant valid for any gap ratio > 4).
    """
    if not (1 <= m <= len(f.zeros)):
        raise ValueError(f"zero index {m} out of range")
    rm = f.zeros[m - 1]
    if m < len(f.zeros):
        rm1 = f.zeros[m]
    elif f.tail_ratio is not None:
        rm1 = rm * f.tail_ratio
    else:
        raise ValueError("no successor zero: window undefined")
    lo, hi = 2.0 * rm, 0.5 * rm1
    if not lo < hi:
        raise ValueError(f"empty window: 2 r_m = {lo} >= r_(m+1)/2 = {hi}")
    if bound is None:
        bound = UNIVERSAL_SANDWICH_RATIO
    llo, lhi = math.log(lo) + 1e-6, math.log(hi) - 1e-6
    radii = np.exp(np.linspace(llo, lhi, samples))
    thetas = np.arange(samples) * (2.0 * math.pi / samples)
    gmin, gmax = math.inf, -math.inf
    for r in radii:
        lr = math.log(r)
        for t in thetas:
            g = log_abs(f, r, t) - m * lr
            if g < gmin:
                gmin = g
            if g > gmax:
                gmax = g
    ratio = math.exp(gmax - gmin)
    return SandwichReport(m, (lo, hi), gmin, gmax, ratio, bound, ratio <= bound)


# --------------------------------------------------------------------------
# descriptors
# --------------------------------------------------------------------------

def to_descriptor(f: EntireFunction) -> dict:
    if isinstance(f, ExpFamily):
        return {"variant": "exp", "lambda": f.lam}
    if isinstance(f, LacunaryProduct):
        d: dict = {"variant": "lacunary", "zeros": list(f.zeros)}
        if f.tail_ratio is not None:
            d["tail_ratio"] = f.tail_ratio
        return d
    return {"variant": "series",
            "coeffs": [[c.real, c.imag] for c in f.coeffs],
            "r_max": f.r_max}


def from_descriptor(d: dict) -> EntireFunction:
    v = d.get("variant")
    if v == "exp":
        return ExpFamily(float(d.get("lambda", 1.0)))
    if v == "lacunary":
        return LacunaryProduct(tuple(float(z) for z in d["zeros"]),
                               tail_ratio=d.get("tail_ratio"))
    if v == "series":
        coeffs = tuple(complex(c[0], c[1]) for c in d["coeffs"])
        # file-loaded series are exact polynomials: zero tail
        return TruncatedSeries(coeffs, lambda r: 0.0,
                               r_max=float(d.get("r_max", math.inf)))
    raise ValueError(f"unknown descriptor variant {v!r}")
