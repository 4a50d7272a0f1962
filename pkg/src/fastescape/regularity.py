"""Numerical classifiers for growth-regularity criteria.

Semantics are strictly finite-horizon.  A condition quantified over all n can
only come back ``consistent-to-horizon``; its negation (a failure at every lag)
only ``violation-all-lags``, always carrying the horizon (L, N) that was
actually checked.  Every ``violated`` verdict carries at least one concrete
witness whose inequality re-verifies by direct recomputation, and comparisons
inside the indistinguishability band never produce certificates.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Sequence, Union

import numpy as np

from . import efun, growth
from .efun import EntireFunction
from .errors import RangeError, ThresholdNotFound
from .xreal import (Ordering, TowerReal, at_least, compare, definitely_greater,
                    definitely_less, from_float, mul_by)

# fixed constants of the criteria family
MINMOD_K = 4.0 * math.log(4.0)
BEURLING_C = math.pi / (4.0 * math.sqrt(2.0))
CASCADE_A = 1.0 - 1.0 / (4.0 * BEURLING_C)  # = 1 - sqrt(2)/pi

HOLDS = "holds-on-grid"
VIOLATED = "violated"
CONSISTENT = "consistent-to-horizon"
VIOLATION_ALL_LAGS = "violation-all-lags"
INCONCLUSIVE = "inconclusive"

DEFAULT_LAG_BOUND = 8
DEFAULT_HORIZON = 64
DEFAULT_GRID_POINTS = 256
DERIVATIVE_STEP_REL = 1e-7


@dataclass
class Witness:
    where: float
    lhs: TowerReal
    rhs: TowerReal

    def to_json(self) -> dict:
        return {"where": self.where, "lhs": self.lhs.to_json(), "rhs": self.rhs.to_json()}


@dataclass
class RegularityVerdict:
    criterion: str
    params: dict
    status: str
    witnesses: list[Witness] = field(default_factory=list)
    grid: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "criterion": self.criterion,
            "params": self.params,
            "status": self.status,
            "witnesses": [w.to_json() for w in self.witnesses],
            "grid": self.grid,
            "notes": self.notes,
            "extra": self.extra,
        }


def log_grid(lo: float, hi: float, n: int = DEFAULT_GRID_POINTS) -> np.ndarray:
    if not (0 < lo < hi):
        raise ValueError("grid bounds must be positive and increasing")
    return np.exp(np.linspace(math.log(lo), math.log(hi), n))


def _grid_spec(grid: Sequence[float]) -> dict:
    return {"lo": float(grid[0]), "hi": float(grid[-1]), "count": len(grid)}


# --------------------------------------------------------------------------
# derivative-quotient criterion:  t phi'(t) / phi(t) >= 1 + c on the tail
# --------------------------------------------------------------------------

def derivative_quotient(g, t: float, next_spacing: float,
                        step_rel: float = DERIVATIVE_STEP_REL) -> float:
    """D(t) = t * (phi(t+h) - phi(t)) / (h * phi(t)) by a forward difference.

    Computed through the log-ratio of phi values so tower-sized phi stays
    exact: D = (t/h) * expm1(log phi(t+h) - log phi(t)).
    """
    model = growth.as_growth_model(g)
    h = min(step_rel * abs(t), next_spacing) if next_spacing > 0 else step_rel * abs(t)
    if h <= 0:
        raise ValueError("nonpositive step")
    p0 = model.phi(t)
    if p0.h == 0 and p0.x <= 0.0:
        raise ValueError(f"phi({t}) <= 0: derivative quotient undefined")
    delta = growth.tower_log_as_float(model.phi(t + h)) - growth.tower_log_as_float(p0)
    return (t / h) * math.expm1(delta)


def check_log_regular_derivative(g, t_grid: Sequence[float], c_min: float,
                                 step_rel: float = DERIVATIVE_STEP_REL,
                                 tail_fraction: float = 0.5) -> RegularityVerdict:
    """Tail check of t phi'(t)/phi(t) >= 1 + c_min with forward differences."""
    t_grid = [float(t) for t in t_grid]
    tail_start = int(len(t_grid) * (1.0 - tail_fraction))
    notes: list[str] = []
    worst: tuple[float, float] | None = None  # (D, t)
    for i in range(tail_start, len(t_grid)):
        t = t_grid[i]
        spacing = t_grid[i + 1] - t if i + 1 < len(t_grid) else 0.0
        try:
            d = derivative_quotient(g, t, spacing, step_rel)
        except RangeError as exc:
            notes.append(f"skipped t={t}: {exc}")
            continue
        if worst is None or d < worst[0]:
            worst = (d, t)
    verdict = RegularityVerdict(
        criterion="log-regular-derivative",
        params={"c_min": c_min, "step_rel": step_rel, "tail_fraction": tail_fraction},
        status=INCONCLUSIVE, grid=_grid_spec(t_grid), notes=notes)
    if worst is None:
        verdict.notes.append("no evaluable tail points")
        return verdict
    d_min, t_min = worst
    verdict.extra = {"witness_c": d_min - 1.0, "at": t_min}
    if d_min >= 1.0 + c_min:
        verdict.status = HOLDS
    else:
        verdict.status = VIOLATED
        verdict.witnesses.append(Witness(t_min, from_float(d_min), from_float(1.0 + c_min)))
    return verdict


# --------------------------------------------------------------------------
# dilation criteria:  phi(k t) >= k d phi(t)
# --------------------------------------------------------------------------

def _dilation_check(g, k: float, factor: float, t_grid: Sequence[float],
                    criterion: str, params: dict) -> RegularityVerdict:
    model = growth.as_growth_model(g)
    verdict = RegularityVerdict(criterion=criterion, params=params,
                                status=HOLDS, grid=_grid_spec(t_grid))
    for t in t_grid:
        t = float(t)
        lhs = model.phi(k * t)
        rhs = mul_by(model.phi(t), factor)
        if definitely_less(lhs, rhs):
            verdict.status = VIOLATED
            verdict.witnesses.append(Witness(t, lhs, rhs))
    return verdict


def check_log_regular_hadamard(g, k: float, d: float,
                               t_grid: Sequence[float]) -> RegularityVerdict:
    """phi(k t) >= k d phi(t) pointwise on the grid (k > 1, d > 1)."""
    if not (k > 1 and d > 1):
        raise ValueError("need k > 1 and d > 1")
    return _dilation_check(g, k, k * d, t_grid, "log-regular-hadamard",
                           {"k": k, "d": d})


def check_psi_regularity(g, k: float, m: float,
                         r_grid: Sequence[float]) -> RegularityVerdict:
    """Power comparison M(r^k) >= (M(r)^k)^m on a radius grid, i.e.
    phi(k t) >= m k phi(t) with t = log r; requires r >= 1 so r^k >= r."""
    if not (k > 1 and m > 1):
        raise ValueError("need k > 1 and m > 1")
    r_grid = [float(r) for r in r_grid]
    if min(r_grid) < 1.0:
        raise ValueError("grid radii must be >= 1 so that r^k >= r")
    t_grid = [math.log(r) for r in r_grid]
    v = _dilation_check(g, k, k * m, t_grid, "psi-regularity",
                        {"k": k, "m": m, "map": "r -> r^k"})
    v.grid = _grid_spec(r_grid)
    return v


def constants_c_from_kd(k: float, d: float) -> float:
    """Derivative constant induced by a dilation pair: (1 - 1/(kd))/(1 - 1/k) - 1."""
    if not (k > 1 and d > 1):
        raise ValueError("need k > 1 and d > 1")
    return (1.0 - 1.0 / (k * d)) / (1.0 - 1.0 / k) - 1.0


def constants_d_from_c(k: float, c: float) -> float:
    """Dilation constant induced by a derivative constant: d = k^c."""
    if not (k > 1 and c > 0):
        raise ValueError("need k > 1 and c > 0")
    return k ** c


# --------------------------------------------------------------------------
# iterated-threshold regularity
# --------------------------------------------------------------------------

def check_eps_regularity(g, eps: float, t_R: float,
                         lag_bound: int = DEFAULT_LAG_BOUND,
                         horizon: int = DEFAULT_HORIZON,
                         auto_advance: bool = True) -> RegularityVerdict:
    """Compare the eps-scaled orbit against the phi orbit through all lags <= L.

    S(n) iterates t -> eps*phi(t) and P(n) iterates phi from a common start.
    Lag l certifies when S(n+l) >= P(n) for every n <= horizon; the verdict is
    ``violation-all-lags`` only when every lag shows a distinguishable failure.
    The start must also satisfy eps*phi(t) > t (otherwise the scaled orbit
    stalls and the comparison is vacuous); ``auto_advance`` moves it up to the
    first certified such point, which leaves the verdict semantics unchanged.
    """
    if not (0.0 < eps < 1.0):
        raise ValueError("eps must lie in (0,1)")
    model = growth.as_growth_model(g)
    notes: list[str] = []
    if not model.phi(t_R) > from_float(t_R):
        raise ValueError(f"phi(t_R) > t_R required, failed at t_R = {t_R}")
    t_start = t_R
    psi0 = mul_by(model.phi(t_R), eps)
    if not psi0 > from_float(t_R):
        if not auto_advance:
            raise ValueError(f"eps*phi(t_R) > t_R required, failed at t_R = {t_R}")
        t_start = growth.map_threshold(model, eps, lo=t_R)
        notes.append(f"start advanced from {t_R} to {t_start} so that eps*phi(t) > t")

    P = growth.iterate_map(model, "phi", t_start, horizon)
    S = growth.iterate_map(model, "psi_eps", t_start, horizon + lag_bound, eps)
    truncated = P.status != "complete" or S.status != "complete"
    notes.extend(P.notes + S.notes)

    first_fail: dict[int, int | None] = {}
    certified: list[int] = []
    witnesses: list[Witness] = []
    for lag in range(lag_bound + 1):
        fail_n = None
        all_certified = not truncated
        n_max = min(len(P) - 1, len(S) - 1 - lag)
        for n in range(n_max + 1):
            c = compare(S.values[n + lag], P.values[n])
            if c is Ordering.LESS:
                fail_n = n
                all_certified = False
                witnesses.append(Witness(float(n), S.values[n + lag], P.values[n]))
                break
            if c is Ordering.INDISTINGUISHABLE:
                all_certified = False
        first_fail[lag] = fail_n
        if fail_n is None and all_certified and n_max == horizon:
            certified.append(lag)

    verdict = RegularityVerdict(
        criterion="eps-regularity",
        params={"eps": eps, "t_R": t_R, "lag_bound": lag_bound, "horizon": horizon},
        status=INCONCLUSIVE, witnesses=witnesses, notes=notes,
        grid={"t_start": t_start},
        extra={"first_fail": {str(k): v for k, v in first_fail.items()},
               "certificate_lag": certified[0] if certified else None,
               "truncated": truncated})
    if certified:
        verdict.status = CONSISTENT
    elif all(v is not None for v in first_fail.values()):
        verdict.status = VIOLATION_ALL_LAGS
    return verdict


_STATUS_SEVERITY = {VIOLATION_ALL_LAGS: 3, VIOLATED: 3, INCONCLUSIVE: 2,
                    CONSISTENT: 1, HOLDS: 1}


def check_weak_regularity(g, eps_grid: Sequence[float], t_R: float,
                          lag_bound: int = DEFAULT_LAG_BOUND,
                          horizon: int = DEFAULT_HORIZON) -> RegularityVerdict:
    """Worst per-eps verdict of check_eps_regularity over the grid."""
    eps_grid = [float(e) for e in eps_grid]
    if not eps_grid:
        raise ValueError("empty eps grid")
    sub = {}
    worst = None
    witnesses: list[Witness] = []
    for eps in eps_grid:
        v = check_eps_regularity(g, eps, t_R, lag_bound, horizon)
        sub[str(eps)] = v.status
        witnesses.extend(v.witnesses if v.status == VIOLATION_ALL_LAGS else [])
        if worst is None or _STATUS_SEVERITY[v.status] > _STATUS_SEVERITY[worst]:
            worst = v.status
    return RegularityVerdict(
        criterion="weak-regularity",
        params={"eps_grid": eps_grid, "t_R": t_R, "lag_bound": lag_bound,
                "horizon": horizon},
        status=worst, witnesses=witnesses, grid={"eps_count": len(eps_grid)},
        extra={"per_eps": sub})


# --------------------------------------------------------------------------
# minimum-modulus criterion:  m(r) <= M(r)^(1 - K/log r),  K = 4 log 4
# --------------------------------------------------------------------------

def check_minmod_criterion(f: EntireFunction,
                           r_grid: Sequence[float]) -> RegularityVerdict:
    r_grid = [float(r) for r in r_grid]
    if min(r_grid) <= 1.0:
        raise ValueError("grid radii must exceed 1 (log r > 0 needed)")
    verdict = RegularityVerdict(
        criterion="minimum-modulus", params={"K": MINMOD_K},
        status=HOLDS, grid=_grid_spec(r_grid))
    zeros_hit = 0
    for r in r_grid:
        lm = efun.log_min_modulus(f, r)
        if lm is None:
            zeros_hit += 1
            continue  # m(r) = 0 satisfies any upper bound
        rhs = (1.0 - MINMOD_K / math.log(r)) * efun.log_max_modulus(f, r)
        if definitely_greater(from_float(lm), from_float(rhs)):
            verdict.status = VIOLATED
            verdict.witnesses.append(Witness(r, from_float(lm), from_float(rhs)))
    if zeros_hit:
        verdict.notes.append(f"{zeros_hit} grid radii hit a zero circle (pass trivially)")
    return verdict


# --------------------------------------------------------------------------
# minimum-modulus growth inequality on an interval (logarithmic-measure form)
# --------------------------------------------------------------------------

def _log_measure_sublevel(f: EntireFunction, lo: float, hi: float, log_mu: float,
                          t_samples: int) -> tuple[float, int]:
    """Logarithmic measure of {t in (lo,hi): m(t) <= mu} as a union of grid
    subintervals whose BOTH endpoints satisfy the inequality (conservative
    under-approximation)."""
    grid = np.exp(np.linspace(math.log(lo), math.log(hi), t_samples))
    ok = []
    for t in grid:
        lm = efun.log_min_modulus(f, float(t))
        ok.append(lm is None or lm <= log_mu)
    measure = 0.0
    pieces = 0
    for i in range(len(grid) - 1):
        if ok[i] and ok[i + 1]:
            measure += math.log(grid[i + 1] / grid[i])
            pieces += 1
    return measure, pieces


@dataclass
class BeurlingReport:
    r1: float
    r2: float
    mu: float
    log_measure: float
    lhs: float     # log(M(r2)/mu)
    rhs: float     # c * exp(log_measure/2) * log(M(r1)/mu)
    confirmed: bool
    trivial: bool  # mu >= M(r1): right side nonpositive
    pieces: int

    def to_json(self) -> dict:
        return asdict(self)


def beurling_check(f: EntireFunction, r1: float, r2: float, mu: float,
                   t_samples: int = DEFAULT_GRID_POINTS) -> BeurlingReport:
    """Sampled check of the minimum-modulus growth inequality

        log(M(r2)/mu) > c * exp(m_l(E)/2) * log(M(r1)/mu),  c = pi/(4 sqrt 2),

    with E = {t in (r1, r2): m(t) <= mu}.  The sampled E under-approximates the
    true sublevel set, which only weakens the right-hand side, so a confirmed
    report is trustworthy.  This inequality is a theorem: a numerical failure
    indicates a sampling bug, and the test suite treats it as such.
    """
    if not (0.0 <= r1 < r2):
        raise ValueError("need 0 <= r1 < r2")
    if mu <= 0.0:
        raise ValueError("mu must be positive")
    log_mu = math.log(mu)
    if log_mu >= efun.log_max_modulus(f, r2):
        raise ValueError("mu must be less than M(r2)")
    lo = r1 if r1 > 0 else r2 * 1e-9
    measure, pieces = _log_measure_sublevel(f, lo, r2, log_mu, t_samples)
    lm1 = efun.log_max_modulus(f, r1) if r1 > 0 else math.log(
        abs(evaluate_origin(f)))
    lhs = efun.log_max_modulus(f, r2) - log_mu
    rhs = BEURLING_C * math.exp(0.5 * measure) * (lm1 - log_mu)
    return BeurlingReport(r1, r2, mu, measure, lhs, rhs,
                          confirmed=lhs > rhs, trivial=lm1 <= log_mu,
                          pieces=pieces)


def evaluate_origin(f: EntireFunction) -> complex:
    v = efun.evaluate(f, 0.0)
    return v if v != 0 else complex(1e-300)


# --------------------------------------------------------------------------
# sublevel-measure criterion on (r, r^k)
# --------------------------------------------------------------------------

def fr_threshold(k: float, alpha: float, beta: float) -> float:
    """Required logarithmic measure: 2 log((k - alpha) / (c (beta - alpha)))."""
    if not (0.0 < alpha < beta < 1.0 < k):
        raise ValueError("need 0 < alpha < beta < 1 < k")
    return 2.0 * math.log((k - alpha) / (BEURLING_C * (beta - alpha)))


def check_Fr_criterion(f: EntireFunction, k: float, alpha: float, beta: float,
                       r_grid: Sequence[float],
                       t_samples: int = DEFAULT_GRID_POINTS) -> RegularityVerdict:
    """Per grid radius r: the set F_r = {rho in (r, r^k): m(rho) <= M(r^k)^(alpha/k)}
    must carry logarithmic measure >= the fixed threshold.  Sufficient, not
    necessary: failures are reported honestly per grid point."""
    thresh = fr_threshold(k, alpha, beta)
    r_grid = [float(r) for r in r_grid]
    if min(r_grid) <= 1.0:
        raise ValueError("grid radii must exceed 1")
    verdict = RegularityVerdict(
        criterion="sublevel-measure", status=HOLDS, grid=_grid_spec(r_grid),
        params={"k": k, "alpha": alpha, "beta": beta, "threshold": thresh})
    measures = []
    for r in r_grid:
        rk = r ** k
        if not math.isfinite(rk):
            raise RangeError(f"r^k overflows at r = {r}")
        log_mu = (alpha / k) * efun.log_max_modulus(f, rk)
        measure, _ = _log_measure_sublevel(f, r, rk, log_mu, t_samples)
        measures.append(measure)
        if measure < thresh:
            verdict.status = VIOLATED
            verdict.witnesses.append(Witness(r, from_float(max(measure, -700.0)),
                                             from_float(thresh)))
    verdict.extra = {"measures": measures}
    return verdict


# --------------------------------------------------------------------------
# interval-cascade constants
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class CascadeConstants:
    delta: float    # K / log(r^k)
    lam: float      # 16 / (1 - delta)^2
    a: float        # 1 - sqrt(2)/pi
    n: int          # largest n with lam^n r <= r^k
    p_lower: float  # a delta / log(4/(1 - delta))

    def to_json(self) -> dict:
        return asdict(self)


def cascade_constants(r: float, k: float) -> CascadeConstants:
    """Constants of the interval-cascade argument at radius r, exponent k.

    Requires delta = K/log(r^k) < 1 and lam < r^(k-1): below that radius the
    cascade has no room and the caller is outside the admissible regime."""
    if not (r > 1.0 and k > 1.0):
        raise ValueError("need r > 1 and k > 1")
    delta = MINMOD_K / (k * math.log(r))
    if delta >= 1.0:
        raise ValueError(f"delta(r^k) = {delta:.4f} >= 1: radius too small")
    lam = 16.0 / (1.0 - delta) ** 2
    if not lam < r ** (k - 1.0):
        raise ValueError(
            f"lambda = {lam:.4f} >= r^(k-1) = {r ** (k - 1):.4f}: radius too small")
    n = math.floor((k - 1.0) * math.log(r) / math.log(lam))
    p_lower = CASCADE_A * delta / math.log(4.0 / (1.0 - delta))
    return CascadeConstants(delta, lam, CASCADE_A, n, p_lower)


def cascade_conclusion_check(f: EntireFunction, r: float, k: float) -> dict:
    """Verify log M(r^k) > (r^((k-1)/2))^(p n/(n+1)) * log M(r) with the
    cascade constants, for a function satisfying the minimum-modulus bound."""
    consts = cascade_constants(r, k)
    exponent = consts.p_lower * consts.n / (consts.n + 1) * (k - 1.0) / 2.0
    log_lhs = math.log(efun.log_max_modulus(f, r ** k))
    log_rhs = exponent * math.log(r) + math.log(efun.log_max_modulus(f, r))
    minmod_ok = check_minmod_criterion(f, [r, r ** k]).status == HOLDS
    return {"constants": consts.to_json(), "log_lhs": log_lhs, "log_rhs": log_rhs,
            "holds": log_lhs > log_rhs, "minmod_hypothesis_on_endpoints": minmod_ok}


# --------------------------------------------------------------------------
# doubling statistics
# --------------------------------------------------------------------------

def doubling_stats(f: EntireFunction, r_grid: Sequence[float]) -> tuple[float, float]:
    """Tail (inf, sup) of log M(2r) / log M(r) over the grid; points with
    M <= 1 are skipped."""
    ratios = []
    for r in r_grid:
        r = float(r)
        a = efun.log_max_modulus(f, r)
        b = efun.log_max_modulus(f, 2.0 * r)
        if a <= 0.0 or b <= 0.0:
            continue
        ratios.append(b / a)
    if len(ratios) < 2:
        raise ValueError("too few usable grid points")
    tail = ratios[len(ratios) // 2:]
    return min(tail), max(tail)


# --------------------------------------------------------------------------
# iterated-exponential growth floor:  phi(t) >= exp^h((log^(h-1) t)^q)
# --------------------------------------------------------------------------

def tower_growth_check(g, height: int, q: float,
                       t_grid: Sequence[float]) -> RegularityVerdict:
    """Growth floor M(r) >= exp^(h+1)((log^h r)^q) expressed in log coordinates:
    phi(t) >= exp^h((log^(h-1) t)^q) for h = ``height`` >= 1 and 0 < q < 1."""
    if height < 1:
        raise ValueError("height must be >= 1")
    if not (0.0 < q < 1.0):
        raise ValueError("q must lie in (0,1)")
    from .xreal import apply_exp, apply_log, scale_pow
    model = growth.as_growth_model(g)
    verdict = RegularityVerdict(
        criterion="tower-growth-floor", params={"height": height, "q": q},
        status=HOLDS, grid=_grid_spec(list(t_grid)))
    for t in t_grid:
        lhs = model.phi(float(t))
        v = from_float(float(t))
        for _ in range(height - 1):
            v = apply_log(v)
        v = scale_pow(v, q)
        for _ in range(height):
            v = apply_exp(v)
        if definitely_less(lhs, v):
            verdict.status = VIOLATED
            verdict.witnesses.append(Witness(float(t), lhs, v))
    return verdict


# --------------------------------------------------------------------------
# witness re-verification
# --------------------------------------------------------------------------

def reverify_witness(verdict: RegularityVerdict, g_or_f) -> bool:
    """Recompute a violation witness's inequality from scratch.

    Returns True when every stored witness still violates under independent
    recomputation (used by the test suite at doubled resolution)."""
    if verdict.status not in (VIOLATED, VIOLATION_ALL_LAGS):
        return True
    model = None
    crit = verdict.criterion
    for w in verdict.witnesses:
        if crit == "log-regular-hadamard" or crit == "psi-regularity":
            model = growth.as_growth_model(g_or_f)
            k = verdict.params["k"]
            factor = k * verdict.params.get("d", verdict.params.get("m"))
            t = w.where if crit == "log-regular-hadamard" else math.log(w.where)
            if not definitely_less(model.phi(k * t), mul_by(model.phi(t), factor)):
                return False
        elif crit == "minimum-modulus":
            lm = efun.log_min_modulus(g_or_f, w.where)
            rhs = (1.0 - MINMOD_K / math.log(w.where)) * efun.log_max_modulus(g_or_f, w.where)
            if lm is None or not lm > rhs:
                return False
        elif crit == "log-regular-derivative":
            d = derivative_quotient(g_or_f, w.where, 0.0,
                                    verdict.params.get("step_rel", DERIVATIVE_STEP_REL))
            if not d < 1.0 + verdict.params["c_min"]:
                return False
        else:
            # orbit-based witnesses re-verify through their stored orbits
            if not definitely_less(w.lhs, w.rhs):
                return False
    return True
