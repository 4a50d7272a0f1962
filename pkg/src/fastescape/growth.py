"""Log-coordinate growth: phi(t) = log M(e^t), scaled maps, orbits, thresholds.

Orbits run in TowerReal so iterated growth maps stay comparable far past float
overflow.  Three maps are supported:

* ``phi``       t -> phi(t)                    (log of the modulus map),
* ``psi_eps``   t -> eps * phi(t)              (log of r -> M(r)^eps),
* ``eps_shift`` t -> phi(t) + log(eps)         (log of r -> eps * M(r)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Protocol, Union, runtime_checkable

import numpy as np

from . import efun
from .efun import EntireFunction
from .errors import RangeError, ThresholdNotFound
from .xreal import (TowerReal, add_scalar, apply_exp, apply_log, from_float,
                    mul_by, normalize)

MAP_TAGS = ("phi", "psi_eps", "eps_shift")


@runtime_checkable
class GrowthModel(Protocol):
    name: str
    provenance: str

    def phi(self, t: Union[float, TowerReal]) -> TowerReal: ...


def _as_tower(t: Union[float, TowerReal]) -> TowerReal:
    return t if isinstance(t, TowerReal) else from_float(float(t))


def tower_log_as_float(t: TowerReal) -> float:
    """log of a tower value as a float; RangeError when it does not fit."""
    if t.h == 0:
        if t.x <= 0.0:
            raise ValueError(f"log of nonpositive value {t.x}")
        return math.log(t.x)
    lt = apply_log(t).to_float()
    if not math.isfinite(lt):
        raise RangeError("logarithm exceeds float range")
    return lt


@dataclass(frozen=True)
class FunctionGrowthModel:
    """phi backed by a function's modulus oracle.

    ExpFamily admits tower-height arguments through the closed form
    phi(t) = e^t + log(lam); sampled representations refuse beyond float range
    rather than fabricate values.
    """

    f: EntireFunction
    provenance: str = "derived-from-function"

    @property
    def name(self) -> str:
        return self.f.name

    def phi(self, t: Union[float, TowerReal]) -> TowerReal:
        tt = _as_tower(t)
        if isinstance(self.f, efun.ExpFamily):
            return add_scalar(apply_exp(tt), math.log(self.f.lam))
        tf = tt.to_float()
        if not math.isfinite(tf):
            raise RangeError(f"{self.f.name}: sampled evaluator refused tower argument {tt}")
        if isinstance(self.f, efun.LacunaryProduct):
            # closed form in log space: valid for any float t within zero coverage
            return normalize(0, efun.lac_log_max_from_log_r(self.f, tf))
        r = math.exp(tf) if tf < 700.0 else math.inf
        if not (math.isfinite(r) and r <= self.f.r_max):
            raise RangeError(f"series evaluator refused radius e^{tf}")
        return normalize(0, efun.log_max_modulus(self.f, r))


@dataclass(frozen=True)
class ClosedFormModel:
    """Synthetic phi given by a float callable, optionally with a tower-exact form."""

    name: str
    fn: Callable[[float], float] = field(compare=False)
    tower_fn: Callable[[TowerReal], TowerReal] | None = field(default=None, compare=False)
    domain: tuple[float, float] = (-math.inf, math.inf)
    provenance: str = "synthetic-model"

    def phi(self, t: Union[float, TowerReal]) -> TowerReal:
        tt = _as_tower(t)
        tf = tt.to_float()
        if math.isfinite(tf) and self.domain[0] <= tf <= self.domain[1]:
            v = self.fn(tf)
            if math.isfinite(v):
                return from_float(v)
        if self.tower_fn is not None:
            return self.tower_fn(tt)
        raise RangeError(f"model {self.name}: argument outside evaluable range")


def as_growth_model(g: Union[GrowthModel, EntireFunction]) -> GrowthModel:
    if isinstance(g, (efun.ExpFamily, efun.LacunaryProduct, efun.TruncatedSeries)):
        return FunctionGrowthModel(g)
    return g


def phi(g: Union[GrowthModel, EntireFunction], t: Union[float, TowerReal]) -> TowerReal:
    return as_growth_model(g).phi(t)


# --------------------------------------------------------------------------
# orbits
# --------------------------------------------------------------------------

@dataclass
class OrbitSequence:
    start: float
    map_tag: str
    eps: float | None
    values: list[TowerReal]
    status: str  # "complete" | "range-truncated"
    notes: list[str] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.values)


def _step(g: GrowthModel, tag: str, eps: float | None, t: TowerReal) -> TowerReal:
    v = g.phi(t)
    if tag == "phi":
        return v
    if tag == "psi_eps":
        return mul_by(v, eps)
    if tag == "eps_shift":
        return add_scalar(v, math.log(eps))
    raise ValueError(f"unknown map tag {tag!r}")


def iterate_map(g: Union[GrowthModel, EntireFunction], map_tag: str,
                t0: float, n: int, eps: float | None = None) -> OrbitSequence:
    """Orbit [t0, map(t0), ..., map^n(t0)] in TowerReal; truncates on refusal."""
    if n < 0:
        raise ValueError("orbit length must be nonnegative")
    if map_tag not in MAP_TAGS:
        raise ValueError(f"unknown map tag {map_tag!r}")
    if map_tag != "phi":
        if eps is None or not (0.0 < eps < 1.0):
            raise ValueError("eps in (0,1) required for scaled maps")
    model = as_growth_model(g)
    notes: list[str] = []
    t0t = from_float(t0)
    try:
        if not model.phi(t0t) > t0t:
            notes.append("phi(t0) <= t0: orbit may not escape")
    except RangeError:
        pass
    values = [t0t]
    status = "complete"
    for _ in range(n):
        try:
            values.append(_step(model, map_tag, eps, values[-1]))
        except (RangeError, ValueError) as exc:
            status = "range-truncated"
            notes.append(f"truncated after {len(values) - 1} steps: {exc}")
            break
    return OrbitSequence(t0, map_tag, eps, values, status, notes)


# --------------------------------------------------------------------------
# threshold search
# --------------------------------------------------------------------------

def _probe_grid(lo: float, hi: float, probes: int) -> np.ndarray:
    if hi <= lo:
        raise ValueError("empty search window")
    linear_hi = min(hi, 10.0)
    parts = []
    if lo < linear_hi:
        parts.append(np.linspace(lo, linear_hi, max(probes // 2, 2)))
    if hi > 10.0:
        parts.append(np.exp(np.linspace(math.log(max(lo, 10.0)), math.log(hi),
                                        max(probes // 2, 2))))
    return np.unique(np.concatenate(parts))


def map_threshold(g: Union[GrowthModel, EntireFunction], scale: float = 1.0,
                  lo: float = -10.0, hi: float = 1e6, probes: int = 10_000) -> float:
    """Smallest probe t* with scale*phi > identity certified for all t >= t*.

    Certificate: two consecutive probes t1 < t2 with scale*phi(t) > t at both
    and chord slope > 1; convexity of phi then pushes the map above the
    identity on [t2, inf).
    """
    model = as_growth_model(g)
    grid = _probe_grid(lo, hi, probes)

    def val(t: float) -> float | None:
        try:
            v = mul_by(model.phi(t), scale) if scale != 1.0 else model.phi(t)
        except (RangeError, ValueError):
            return None
        fv = v.to_float()
        return fv  # inf allowed: certainly above the identity

    prev_t: float | None = None
    prev_v: float | None = None
    for t in grid:
        v = val(float(t))
        if v is None or not v > t:
            prev_t, prev_v = None, None
            continue
        if prev_t is not None:
            slope = math.inf if math.isinf(v) else (v - prev_v) / (t - prev_t)
            if slope > 1.0:
                return float(t)
        if math.isfinite(v):
            prev_t, prev_v = float(t), v
        else:
            prev_t, prev_v = None, None
    raise ThresholdNotFound(
        f"no certified threshold for {model.name} in [{lo}, {hi}]")


def threshold_R(g: Union[GrowthModel, EntireFunction], lo: float = -10.0,
                hi: float = 1e6, probes: int = 10_000) -> float:
    """t_R with phi(t) > t certified for all t >= t_R."""
    return map_threshold(g, 1.0, lo, hi, probes)


# --------------------------------------------------------------------------
# order estimates
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class OrderEstimates:
    rho_hat: float     # tail sup of log log M(r) / log r
    lambda_hat: float  # tail inf
    skipped: int       # grid points with M(r) <= 1


def order_estimates(f: EntireFunction, r_grid) -> OrderEstimates:
    r_grid = [float(r) for r in r_grid]
    if len(r_grid) < 10 or any(b <= a for a, b in zip(r_grid, r_grid[1:])):
        raise ValueError("need an increasing grid of at least 10 radii")
    ratios = []
    skipped = 0
    for r in r_grid:
        lm = efun.log_max_modulus(f, r)
        if lm <= 0.0:
            skipped += 1
            continue
        ratios.append((r, math.log(lm) / math.log(r)))
    if len(ratios) < 2:
        raise ValueError("growth too slow on this grid: nothing to estimate")
    tail = [v for _, v in ratios[len(ratios) // 2:]]
    return OrderEstimates(max(tail), min(tail), skipped)
