"""Finite-horizon classification of point orbits against growth thresholds.

An orbit certificate for a threshold family T(n) is the minimal lag l <= L
such that |f^(n+l)(z)| >= T(n) for every n checkable within the horizon.
Membership language is deliberately "certified through horizon": the defining
conditions quantify over all n and cannot be decided from finite data.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from typing import Sequence, Union

from . import efun, growth
from .efun import EntireFunction
from .errors import RangeError
from .xreal import (Ordering, TowerReal, add_scalar, apply_exp, apply_log,
                    compare, from_float, mul_by, normalize)

#: complex iteration stops before |f| would overflow native floats
_COMPLEX_LOG_LIMIT = 690.0


@dataclass
class OrbitRecord:
    start: complex
    moduli: list[TowerReal]   # moduli[n] = |f^n(z0)|; exact zeros appear as (0, 0.0)
    horizon: int
    status: str               # "complete" | "range-truncated"
    mode: str                 # "complex" | "tower"
    certificates: dict | None = None
    notes: list[str] = field(default_factory=list)


def _tower_step(f: EntireFunction, v: TowerReal) -> TowerReal:
    """Modulus map x -> f(x) = M(x) on the positive axis, in TowerReal."""
    if isinstance(f, efun.ExpFamily):
        return mul_by(apply_exp(v), f.lam)
    x = v.to_float()
    if not math.isfinite(x):
        raise RangeError("tower step beyond float range for this representation")
    val = efun.evaluate(f, complex(x)).real
    if val <= 0.0:
        raise RangeError("modulus map left the positive axis")
    return from_float(val)


def compute_orbit(f: EntireFunction, z0: complex, n: int) -> OrbitRecord:
    """Orbit of z0 under f with modulus tracking.

    For a positive real start of a function whose power series has nonnegative
    coefficients, f(x) = M(x) on the positive axis, so the orbit continues in
    TowerReal past float range (tower mode).  Complex orbits are never
    extrapolated: |f^(n+1)(z)| is not a function of |f^n(z)| alone, so they
    truncate at the float boundary with status "range-truncated".
    """
    if n < 0:
        raise ValueError("horizon must be nonnegative")
    z0 = complex(z0)
    tower = z0.imag == 0.0 and z0.real > 0.0 and efun.supports_tower_mode(f)
    if tower:
        moduli = [from_float(z0.real)]
        status = "complete"
        notes: list[str] = []
        for _ in range(n):
            try:
                moduli.append(_tower_step(f, moduli[-1]))
            except (RangeError, ValueError) as exc:
                status = "range-truncated"
                notes.append(f"tower step refused after {len(moduli) - 1} iterates: {exc}")
                break
        return OrbitRecord(z0, moduli, n, status, "tower", notes=notes)

    moduli = [from_float(abs(z0))]
    z = z0
    status = "complete"
    notes = []
    for _ in range(n):
        try:
            la = efun.log_abs(f, abs(z), cmath.phase(z) if z != 0 else 0.0)
            if la > _COMPLEX_LOG_LIMIT:
                raise RangeError(f"|f| ~ exp({la:.1f}) exceeds complex range")
            z = efun.evaluate(f, z)
        except RangeError as exc:
            status = "range-truncated"
            notes.append(f"complex iteration truncated after {len(moduli) - 1} steps: {exc}")
            break
        moduli.append(from_float(abs(z)))
    return OrbitRecord(z0, moduli, n, status, "complex", notes=notes)


def _log_modulus(m: TowerReal) -> TowerReal | None:
    """log of a modulus entry; None for an exact zero (below every threshold)."""
    if m.h == 0 and m.x <= 0.0:
        return None
    return apply_log(m)


def _certificate(log_moduli: list[TowerReal | None], thresh: list[TowerReal],
                 lag_bound: int) -> int | None:
    """Minimal lag l <= lag_bound with log|f^(n+l)| >= thresh(n) for all
    checkable n; ties never certify."""
    n_total = len(log_moduli) - 1
    for lag in range(lag_bound + 1):
        ok = True
        checked = 0
        for n_idx in range(min(len(thresh), n_total - lag + 1)):
            lm = log_moduli[n_idx + lag]
            if lm is None or compare(lm, thresh[n_idx]) not in (
                    Ordering.GREATER, Ordering.EQUAL):
                ok = False
                break
            checked += 1
        if ok and checked > 0:
            return lag
    return None


def classify(record: OrbitRecord, g, t_R: float, eps_list: Sequence[float],
             lag_bound: int = 8) -> OrbitRecord:
    """Attach per-criterion lag certificates to an orbit record.

    Thresholds (all started at t_R, in log coordinates):

    * ``A``:          phi-orbit                (iterated maximum modulus),
    * ``Q_eps``:      eps*phi orbits per eps   (iterated M(r)^eps),
    * ``eps_shift``:  phi + log(eps) orbits    (iterated eps*M(r)),
    * ``escaping_proxy``: tail monotonicity and final size (no certificate).
    """
    model = growth.as_growth_model(g)
    n = len(record.moduli) - 1
    log_moduli = [_log_modulus(m) for m in record.moduli]
    notes = list(record.notes)
    if record.status != "complete":
        notes.append("range-truncated record: certificates cover the available range only")

    def orbit_values(tag: str, eps: float | None) -> list[TowerReal]:
        o = growth.iterate_map(model, tag, t_R, n, eps)
        if o.status != "complete":
            notes.append(f"threshold orbit {tag}({eps}) truncated at {len(o) - 1}")
        return o.values

    certs: dict = {"A": _certificate(log_moduli, orbit_values("phi", None), lag_bound)}
    certs["Q_eps"] = {}
    certs["eps_shift"] = {}
    for eps in eps_list:
        certs["Q_eps"][repr(float(eps))] = _certificate(
            log_moduli, orbit_values("psi_eps", eps), lag_bound)
        certs["eps_shift"][repr(float(eps))] = _certificate(
            log_moduli, orbit_values("eps_shift", eps), lag_bound)

    tail = record.moduli[len(record.moduli) // 2:]
    increasing = all(b > a for a, b in zip(tail, tail[1:]))
    final_above_R = record.moduli[-1] > apply_exp(from_float(t_R))
    certs["escaping_proxy"] = {"tail_strictly_increasing": increasing,
                               "final_above_threshold_radius": final_above_R,
                               "final_modulus": record.moduli[-1].to_json()}
    return replace(record, certificates=certs, notes=notes)
