"""Builders and verifiers for the counterexample growth models.

Three constructions:

* a slow-growth model with flattened chords (``Example61Model``): convex, order
  zero, passes an iterated-exponential growth floor, yet its dilation ratio
  phi(t)/phi(t/k) collapses to k along the chord right endpoints;
* a piecewise-linear knot-doubling model (``Example62Model``): the eps-scaled
  orbit keeps pace for large eps but drops one knot index after another for
  small eps;
* a lacunary-product recipe (``LacunaryRecipe``): window markers, iteration
  counts and zero positions chosen so that the eps-scaled orbit provably lags
  the modulus orbit by any fixed number of steps.  The product's zeros are
  tower-sized, so all recipe verification runs against the power-law window
  model with the sandwich constants absorbed as a delta tolerance; small
  windows with float-range zeros are additionally cross-checked against the
  actual product in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import growth, regularity
from .efun import SANDWICH_DELTA, UPPER_HALF
from .errors import RangeError
from .xreal import (Ordering, TowerReal, apply_exp, apply_log, compare,
                    from_float, mul_by, normalize, scale_pow)

LOG2 = math.log(2.0)


def _exp_or_inf(x: float) -> float:
    return math.exp(x) if x < 709.0 else math.inf


# ==========================================================================
# Example model 1: square-root-exponential growth with flattening chords
# ==========================================================================

@dataclass
class Example61Model:
    """Model value exp(sqrt(t)) away from the chords; on each chord
    [t_(n+1)^(3/4), t_(n+1)] the linear interpolant of the endpoints.

    Knot recursion: t_(n+1) = exp(sqrt(t_n)), flattening width k_n = t_(n+1)^(1/4).
    """

    t0: float
    knots: list[TowerReal]          # t_0 .. t_levels
    name: str = "e61"
    provenance: str = "synthetic-model"

    @property
    def levels(self) -> int:
        return len(self.knots) - 1

    def k_level(self, n: int) -> TowerReal:
        return scale_pow(self.knots[n + 1], 0.25)

    def chord(self, n: int) -> tuple[TowerReal, TowerReal]:
        """(a_n, b_n) = (t_(n+1)^(3/4), t_(n+1))."""
        b = self.knots[n + 1]
        return scale_pow(b, 0.75), b

    def inv_k_float(self, n: int) -> float:
        v = self.k_level(n).to_float()
        return 0.0 if math.isinf(v) else 1.0 / v

    def rho(self, n: int) -> float:
        """mu(a_n)/mu(b_n) = exp(b^(3/8) - b^(1/2)); 0 once below float resolution."""
        b = self.knots[n + 1]
        sa = scale_pow(b, 0.375).to_float()
        sb = scale_pow(b, 0.5).to_float()
        if math.isinf(sb):
            return 0.0
        return math.exp(sa - sb) if sa - sb > -745.0 else 0.0

    def dilation_ratio(self, n: int, k: float) -> float:
        """phi(b_n) / phi(b_n / k) for 1 < k < k_n, by the exact chord algebra:
        1 / (rho + (1/k - 1/k_n)(1 - rho)/(1 - 1/k_n))."""
        invk = self.inv_k_float(n)
        if not 1.0 / k > invk:
            raise ValueError(f"need k < k_{n}")
        rho = self.rho(n)
        return 1.0 / (rho + (1.0 / k - invk) * (1.0 - rho) / (1.0 - invk))

    def chord_log_ratio_max(self, n: int) -> float:
        """max over the chord of log(phi)/t; equals 1/k_n = t_(n+1)^(-1/4)."""
        return self.inv_k_float(n)

    # -- evaluation --------------------------------------------------------

    def _mu(self, t: TowerReal) -> TowerReal:
        return apply_exp(scale_pow(t, 0.5))

    def phi(self, t) -> TowerReal:
        tt = t if isinstance(t, TowerReal) else from_float(float(t))
        if tt.h == 0 and tt.x <= 0.0:
            raise RangeError("model defined for t > 0")
        if tt > self.knots[-1]:
            raise RangeError("beyond built knot range")
        for n in range(self.levels):
            a, b = self.chord(n)
            if tt < a:
                return self._mu(tt)
            if tt <= b:
                ca = compare(tt, a)
                if ca in (Ordering.EQUAL, Ordering.INDISTINGUISHABLE):
                    return self._mu(a)
                cb = compare(tt, b)
                if cb in (Ordering.EQUAL, Ordering.INDISTINGUISHABLE):
                    return self._mu(b)
                return self._chord_interior(n, tt)
        return self._mu(tt)

    def _chord_interior(self, n: int, tt: TowerReal) -> TowerReal:
        # log Phi = logaddexp(sqrt(a) + log(1-w), sqrt(b) + log(w)),
        # w = (t-a)/(b-a); needs sqrt(b) and the logs in float range.
        b = self.knots[n + 1]
        lb = apply_log(b).to_float()
        lt = growth.tower_log_as_float(tt)
        if math.isinf(lb):
            raise RangeError("chord interior beyond representable resolution")
        la = 0.75 * lb
        sa, sb = _exp_or_inf(0.5 * la), _exp_or_inf(0.5 * lb)
        if math.isinf(sb):
            raise RangeError("chord interior beyond representable resolution")
        log_w = (lt + math.log1p(-math.exp(min(la - lt, -1e-320)))
                 - lb - math.log1p(-math.exp(la - lb)))
        log_1mw = math.log1p(-math.exp(min(log_w, -1e-320))) if log_w < 0 else -math.inf
        lo = sa + log_1mw
        hi = sb + log_w
        m = max(lo, hi)
        return normalize(0, m + math.log1p(math.exp(min(lo, hi) - m)))


def build_example61(t0: float = 20.0, levels: int = 8) -> Example61Model:
    """Build the chord model from a start point in the certified-monotone region.

    Requires exp(0.75 sqrt(t0)) > t0 and t0 >= 64/9 (where 0.75 sqrt(t) - log t
    is increasing, so the first condition propagates to all larger t).
    """
    if t0 < 64.0 / 9.0:
        raise ValueError(f"t0 = {t0} below the certified-monotone region (64/9)")
    if not math.exp(0.75 * math.sqrt(t0)) > t0:
        raise ValueError(f"growth hypothesis fails at t0 = {t0}")
    knots = [from_float(t0)]
    for _ in range(levels):
        knots.append(apply_exp(scale_pow(knots[-1], 0.5)))
    model = Example61Model(t0, knots)
    for n in range(model.levels):
        a, _ = model.chord(n)
        if not a > model.knots[n]:
            raise ValueError(f"chord {n} would overlap knot {n}")
    return model


def _convexity_at_chord(model: Example61Model, n: int) -> dict:
    """Slope ordering mu'(a) <= chord slope <= mu'(b) in the best evaluable regime."""
    b = model.knots[n + 1]
    lb = apply_log(b).to_float()
    out = {"n": n}
    if math.isfinite(lb):
        la = 0.75 * lb
        sa, sb = _exp_or_inf(0.5 * la), _exp_or_inf(0.5 * lb)
        if math.isfinite(sb):
            rho = math.exp(sa - sb) if sa - sb > -745.0 else 0.0
            invk = math.exp(-0.25 * lb) if lb < 2800.0 else 0.0  # underflow -> 0
            ls_left = sa - LOG2 - 0.5 * la
            ls_right = sb - LOG2 - 0.5 * lb
            ls_chord = sb + math.log1p(-rho) - lb - math.log1p(-invk)
            tol = 1e-9 * max(1.0, abs(ls_chord))
            out["regime"] = "log-exact"
            out["ok"] = (ls_left <= ls_chord + tol) and (ls_chord <= ls_right + tol)
            return out
        # sqrt(b) beyond floats: chord log-slope collapses onto sqrt(b);
        # the left inequality still has tower-sized slack.
        lhs = mul_by(scale_pow(b, 0.5), 0.5)
        rhs = from_float(0.625 * lb + 10.0)
        out["regime"] = "leading-order"
        out["ok"] = lhs > rhs and lb >= 4.0
        return out
    # beyond representable resolution the three log-slopes collapse onto the
    # same leading term; pass unless a violation is distinguishable
    out["regime"] = "tower"
    out["ok"] = not scale_pow(b, 0.375) > scale_pow(b, 0.5)
    return out


def verify_example61(model: Example61Model, k: float = 2.0,
                     n_range: range | None = None,
                     kn_threshold: float = 40.0, ratio_tol: float = 0.05) -> dict:
    """Convexity at knots, chord log-ratio decay, dilation-ratio convergence,
    and the tower growth floor phi(t) >= exp(t^(1/4)) on the built range."""
    if k <= 1.0:
        raise ValueError("need k > 1")
    ns = list(n_range) if n_range is not None else list(range(model.levels))
    convexity = [_convexity_at_chord(model, n) for n in ns]
    log_ratio_bounds = [model.chord_log_ratio_max(n) for n in ns]
    decay_ok = all(b2 <= b1 * (1 + 1e-12) for b1, b2 in
                   zip(log_ratio_bounds, log_ratio_bounds[1:]))

    ratios = []
    for n in ns:
        invk = model.inv_k_float(n)
        if invk == 0.0 or 1.0 / invk > max(kn_threshold, k):
            r = model.dilation_ratio(n, k)
            ratios.append({"n": n, "ratio": r, "k_n_inv": invk,
                           "within_tol": abs(r / k - 1.0) <= ratio_tol})

    floor_checks = []
    # off-chord floor: sqrt(t) >= t^(1/4) for t >= 1 -- checked at the knots
    for n in ns:
        t = model.knots[n]
        floor_checks.append(
            {"n": n, "where": "knot",
             "ok": not scale_pow(t, 0.5) < scale_pow(t, 0.25)})
        # chord floor: Phi >= mu(a_n) = exp(b^(3/8)) >= exp(b^(1/4)) on the chord
        b = model.knots[n + 1]
        floor_checks.append(
            {"n": n, "where": "chord",
             "ok": not scale_pow(b, 0.375) < scale_pow(b, 0.25)})
    # dense float-range sample of the actual evaluator
    t_hi = min(model.knots[-1].to_float(), 1e250)
    if math.isfinite(t_hi) and t_hi > model.t0:
        for t in regularity.log_grid(model.t0, t_hi, 64):
            v = model.phi(float(t))
            floor_ok = not v < apply_exp(scale_pow(from_float(float(t)), 0.25))
            if not floor_ok:
                floor_checks.append({"n": -1, "where": float(t), "ok": False})

    ok = (all(c["ok"] for c in convexity) and decay_ok
          and all(r["within_tol"] for r in ratios)
          and all(c["ok"] for c in floor_checks))
    return {"construction": "e61", "t0": model.t0, "levels": model.levels,
            "convexity": convexity, "chord_log_ratio_bounds": log_ratio_bounds,
            "chord_log_ratio_decreasing": decay_ok,
            "dilation_ratios": ratios, "floor_checks_ok":
                all(c["ok"] for c in floor_checks), "ok": ok}


# ==========================================================================
# Example model 2: piecewise-linear knot-doubling growth
# ==========================================================================

@dataclass
class Example62Model:
    """Piecewise-linear model with Phi(t_n) = t_(n+1) and knot ratios growing
    geometrically: t_(n+2)/t_(n+1) = (1/c) t_(n+1)/t_n, t_0 = 1, t_1 = 2.

    ``a < alpha < c < beta < b`` are the scaled-orbit parameters: the beta- and
    alpha-scaled orbits bracket the behaviours the verifier asserts.
    """

    a: float
    b: float
    c: float
    alpha: float
    beta: float
    exact_knots: list[float] = field(repr=False)     # t_n while float-representable
    name: str = "e62"
    provenance: str = "synthetic-model"

    def knot_log(self, n: int) -> float:
        """log t_n = n log 2 + n(n-1)/2 log(1/c)."""
        return n * LOG2 + 0.5 * n * (n - 1) * math.log(1.0 / self.c)

    def knot(self, n: int) -> TowerReal:
        if n < len(self.exact_knots):
            return from_float(self.exact_knots[n])
        return normalize(1, self.knot_log(n))

    def ratio(self, n: int) -> float:
        """q_n = t_(n+1)/t_n = 2 (1/c)^n (inf once past float range)."""
        lq = LOG2 + n * math.log(1.0 / self.c)
        return math.exp(lq) if lq < 709.0 else math.inf

    def _locate(self, lt: float) -> int:
        n = max(0, int(math.sqrt(max(2.0 * lt / math.log(1.0 / self.c), 0.0))))
        while n > 0 and self.knot_log(n) > lt:
            n -= 1
        while self.knot_log(n + 1) < lt:
            n += 1
        return n

    def phi(self, t) -> TowerReal:
        tt = t if isinstance(t, TowerReal) else from_float(float(t))
        if tt.h == 0 and tt.x <= 1.0:
            return from_float(2.0 * tt.x)  # linear through (0,0) and (t_0, t_1)
        lt = growth.tower_log_as_float(tt)
        n = self._locate(lt)
        if n + 2 < len(self.exact_knots) and tt.h == 0:
            t0, t1, t2 = self.exact_knots[n:n + 3]
            return from_float(t1 + (tt.x - t0) * (t2 - t1) / (t1 - t0))
        l0, l1 = self.knot_log(n), self.knot_log(n + 1)
        rho = math.exp(lt - l0)
        if l1 - l0 < 709.0:
            q1, q2 = math.exp(l1 - l0), math.exp(self.knot_log(n + 2) - l1)
            f = (q2 - 1.0) / (q1 - 1.0)
        else:
            f = 1.0 / self.c  # q2/q1 with corrections below resolution
        return normalize(1, l1 + math.log1p((rho - 1.0) * f))

    def window_lo(self, n: int) -> float:
        """Lower end of the certified start window above knot n."""
        return 4.0 * (1.0 - self.c) / (self.b - self.c) * self.exact_knots[n]

    def first_window_index(self) -> int:
        """Smallest N with t_(N+1)/t_N above the certified-window ratio."""
        need = 4.0 * (1.0 - self.c) / (self.b - self.c)
        n = 0
        while not self.ratio(n) > need:
            n += 1
        return n


def build_example62(a: float, b: float) -> Example62Model:
    """Knot-doubling model with c the midpoint of (a, b)."""
    if not (0.0 < a < b < 1.0):
        raise ValueError("need 0 < a < b < 1")
    c = 0.5 * (a + b)
    exact = [1.0, 2.0]
    q = 2.0
    while True:
        q = q / c
        t_next = exact[-1] * q
        if not math.isfinite(t_next):
            break
        exact.append(t_next)
    return Example62Model(a, b, c, alpha=0.5 * (a + c), beta=0.5 * (c + b),
                          exact_knots=exact)


def verify_example62(model: Example62Model, lag_bound: int = 5,
                     horizon_consistent: int = 8, horizon_violation: int = 40,
                     seg_samples: int = 9, seg_count: int = 10) -> dict:
    """Scaled-map bounds, certified-window index, the two regularity runs, and
    exactness of the iterated model at the knots."""
    c = model.c
    bounds_ok = True
    worst = 0.0
    for s in (model.alpha, model.beta):
        for n in range(seg_count):
            t0, t1 = model.exact_knots[n], model.exact_knots[n + 1]
            for i in range(seg_samples):
                t = t0 + (t1 - t0) * i / (seg_samples - 1)
                psi = mul_by(model.phi(t), s).to_float() / model.exact_knots[n + 1]
                hi = (s / c) * (t / t0)
                lo = hi - (1.0 - c) / c
                tol = 1e-9 * max(1.0, abs(hi))
                err = max(lo - psi, psi - hi, 0.0)
                worst = max(worst, err)
                if err > tol:
                    bounds_ok = False

    n1 = model.first_window_index()
    window_start = model.window_lo(n1)
    run_b = regularity.check_eps_regularity(
        model, model.b, window_start, lag_bound, horizon_consistent)
    # violation run starts at the first knot where the scaled map exceeds identity
    j = 0
    while not model.a * model.ratio(j) > 1.0:
        j += 1
    run_a = regularity.check_eps_regularity(
        model, model.a, model.exact_knots[j], lag_bound, horizon_violation)

    # iterating the model from knot n1 must reproduce the knots exactly
    orbit = growth.iterate_map(model, "phi", model.exact_knots[n1],
                               horizon_consistent)
    knots_exact = all(
        compare(orbit.values[i], model.knot(n1 + i)) in
        (Ordering.EQUAL, Ordering.INDISTINGUISHABLE)
        and orbit.values[i] > model.knot(n1 + i - 1)
        for i in range(1, len(orbit.values)))

    ok = (bounds_ok and run_b.status == regularity.CONSISTENT
          and run_a.status == regularity.VIOLATION_ALL_LAGS and knots_exact)
    return {"construction": "e62",
            "params": {"a": model.a, "b": model.b, "c": c,
                       "alpha": model.alpha, "beta": model.beta},
            "scaled_bounds_ok": bounds_ok, "scaled_bounds_worst_err": worst,
            "window_index": n1, "window_start": window_start,
            "run_large_eps": run_b.to_json(), "run_small_eps": run_a.to_json(),
            "knot_orbit_exact": knots_exact, "ok": ok}


# ==========================================================================
# lacunary-product recipe
# ==========================================================================

@dataclass(frozen=True)
class RecipeWindow:
    m: int
    log_zero: float       # log r_m
    log_coeff: float      # log c_m of the window law  M(r) ~ c_m r^m
    log_marker: float     # log R_m: power-law behaviour certified from here
    n_iter: int           # N_m: scaled-orbit handicap accumulated in window m
    log_m_iter: float     # log of the window-model M iterated N_m times from R_m


@dataclass(frozen=True)
class LacunaryRecipe:
    eps: float
    eps_prime: float
    windows: tuple[RecipeWindow, ...]
    log_zero_last: float  # log r_(mMax+1)

    def zeros(self) -> list[TowerReal]:
        zs = [normalize(1, w.log_zero) for w in self.windows]
        zs.append(normalize(1, self.log_zero_last))
        return zs

    def markers(self) -> list[TowerReal]:
        return [normalize(1, w.log_marker) for w in self.windows]

    def to_json(self) -> dict:
        return {"eps": self.eps, "eps_prime": self.eps_prime,
                "windows": [{"m": w.m, "zero": normalize(1, w.log_zero).to_json(),
                             "coeff_log": w.log_coeff,
                             "marker": normalize(1, w.log_marker).to_json(),
                             "n_iter": w.n_iter, "m_iter_log": w.log_m_iter}
                            for w in self.windows],
                "zero_last": normalize(1, self.log_zero_last).to_json()}


def handicap_steps(eps: float, eps_prime: float, m: int) -> int:
    """Smallest N with (eps m)^(N+m) < (eps' m)^N; degenerates to 1 for eps*m <= 1."""
    if not (0.0 < eps < eps_prime < 1.0):
        raise ValueError("need 0 < eps < eps' < 1")
    if eps * m <= 1.0:
        return 1
    return math.floor(m * math.log(eps * m) / math.log(eps_prime / eps)) + 1


def build_lacunary_recipe(eps: float, eps_prime: float, m_max: int,
                          r1: float = 8.0) -> LacunaryRecipe:
    """Choose zeros, window markers and iteration counts so every recorded
    inequality of the construction holds at the power-law window level.

    Window law: delta c_m r^m < M(r) < c_m r^m on 2 r_m < r < r_(m+1)/2 with
    c_m the universal window coefficient over the zero product.  Markers R_m
    make M(r) > r^(eps' m) and M(r)^eps < r^(eps m) from R_m on; zeros grow by
    max(4 r_m, 2 M^(N_m)(R_m)) with margin.
    """
    if not (0.0 < eps < eps_prime < 1.0):
        raise ValueError("need 0 < eps < eps' < 1")
    if m_max < 1:
        raise ValueError("need m_max >= 1")
    if r1 <= UPPER_HALF ** 2:
        raise ValueError(f"first zero must exceed {UPPER_HALF ** 2:.3f} so c_1 < 1")
    log_delta = math.log(SANDWICH_DELTA)
    lr = math.log(r1)
    lprod = lr
    windows = []
    for m in range(1, m_max + 1):
        lcm = 2.0 * math.log(UPPER_HALF) - lprod
        l_marker = max(LOG2 + lr, (-log_delta - lcm) / ((1.0 - eps_prime) * m)) + 0.05
        n_m = handicap_steps(eps, eps_prime, m)
        u = l_marker
        for _ in range(n_m):
            u = m * u + lcm
        l_next = max(math.log(4.0) + lr, LOG2 + u) + 0.1
        windows.append(RecipeWindow(m, lr, lcm, l_marker, n_m, u))
        lr = l_next
        lprod += l_next
    return LacunaryRecipe(eps, eps_prime, tuple(windows), lr)


@dataclass(frozen=True)
class RecipeGrowthModel:
    """Piecewise-linear log-log growth of the recipe's product: slope m with
    intercept log c_m on window m, slope m + 1/2 on the transition annuli."""

    recipe: LacunaryRecipe
    name: str = "lacunary-recipe"
    provenance: str = "synthetic-model"

    def _segments(self) -> list[tuple[float, float, float, float]]:
        segs = []
        ws = self.recipe.windows
        for i, w in enumerate(ws):
            end_log_zero = (ws[i + 1].log_zero if i + 1 < len(ws)
                            else self.recipe.log_zero_last)
            segs.append((w.log_zero + LOG2, end_log_zero - LOG2,
                         float(w.m), w.log_coeff))
        return segs

    def phi(self, t) -> TowerReal:
        tt = t if isinstance(t, TowerReal) else from_float(float(t))
        tf = tt.to_float()
        if not math.isfinite(tf):
            raise RangeError("recipe model takes float log-radii")
        segs = self._segments()
        if tf <= segs[0][0]:
            return from_float(segs[0][2] * tf + segs[0][3])
        for i, (a, b, m, lcm) in enumerate(segs):
            if tf <= b:
                if tf >= a:
                    return from_float(m * tf + lcm)
                pa, pb, pm, plc = segs[i - 1]
                v0 = pm * pb + plc
                v1 = m * a + lcm
                return from_float(v0 + (tf - pb) * (v1 - v0) / (a - pb))
        raise RangeError("beyond the built window range")


def verify_recipe_invariants(recipe: LacunaryRecipe) -> dict:
    """Re-check every recorded inequality from the stored data alone."""
    ws = recipe.windows
    eps, epsp = recipe.eps, recipe.eps_prime
    log_delta = math.log(SANDWICH_DELTA)
    gaps, coeffs, markers, handicaps, containments, lags = [], [], [], [], [], []
    for i, w in enumerate(ws):
        nxt = ws[i + 1].log_zero if i + 1 < len(ws) else recipe.log_zero_last
        gaps.append(nxt > math.log(4.0) + w.log_zero)
        coeffs.append(w.log_coeff < 0.0)
        markers.append((1.0 - epsp) * w.m * w.log_marker > -log_delta - w.log_coeff)
        if eps * w.m > 1.0:
            handicaps.append(
                (w.n_iter + w.m) * math.log(eps * w.m)
                < w.n_iter * math.log(epsp * w.m))
        else:
            handicaps.append(w.n_iter == 1)
        containments.append(w.log_m_iter < nxt - LOG2)
        # scaled-orbit lag at the window level: the one-sided power laws give
        # mu^(N_m + m)(R_m) < M^(N_m)(R_m) whenever log R_m > 0
        if eps * w.m > 1.0:
            lo = w.log_marker * (eps * w.m) ** (w.n_iter + w.m)
            hi = w.log_marker * (epsp * w.m) ** w.n_iter
            lags.append(w.log_marker > 0.0 and lo < hi)
        else:
            lags.append(w.log_marker > 0.0)
    ok = all(gaps) and all(coeffs) and all(markers) and all(handicaps) \
        and all(containments) and all(lags)
    return {"gaps_ok": gaps, "coeffs_below_one": coeffs, "marker_bounds": markers,
            "handicap_inequalities": handicaps, "containments": containments,
            "window_lags": lags, "ok": ok}


def verify_nonregularity(recipe: LacunaryRecipe, R: float | None = None,
                         lag_bound: int = 3, horizon: int = 64) -> dict:
    """Run the scaled-orbit comparison against the recipe's window model.

    Expected outcome is failure at every lag; the report cross-references the
    per-lag first failures with the windows' (m, N_m, N'_m) bookkeeping, where
    N'_m counts scaled-orbit steps from the start to window marker m.
    """
    model = RecipeGrowthModel(recipe)
    t_R = math.log(R) if R is not None else growth.threshold_R(model, lo=0.1)
    verdict = regularity.check_eps_regularity(
        model, recipe.eps, t_R, lag_bound, horizon)
    t_start = verdict.grid["t_start"]
    s_orbit = growth.iterate_map(model, "psi_eps", t_start,
                                 horizon + lag_bound, recipe.eps)
    s_floats = [v.to_float() for v in s_orbit.values]
    bookkeeping = []
    for w in recipe.windows:
        n_prime = None
        for j in range(len(s_floats) - 1):
            if s_floats[j] <= w.log_marker < s_floats[j + 1]:
                n_prime = j
                break
        bookkeeping.append({"m": w.m, "n_iter": w.n_iter, "marker_steps": n_prime})
    report = {"construction": "lacunary-recipe", "t_R": t_R,
              "verdict": verdict.to_json(), "bookkeeping": bookkeeping,
              "ok": verdict.status == regularity.VIOLATION_ALL_LAGS}
    if not report["ok"]:
        # smallest horizon that would show a failure for the worst lag
        report["adequate_horizon_estimate"] = _estimate_adequate_horizon(
            model, recipe.eps, t_start, lag_bound)
    return report


def _estimate_adequate_horizon(model, eps: float, t_start: float,
                               lag_bound: int, cap: int = 4096) -> int | None:
    p = growth.iterate_map(model, "phi", t_start, cap)
    s = growth.iterate_map(model, "psi_eps", t_start, cap + lag_bound, eps)
    for n in range(min(len(p), len(s) - lag_bound)):
        if compare(s.values[n + lag_bound], p.values[n]) is Ordering.LESS:
            return n + 1
    return None


# ==========================================================================
# dilation-equivalence pattern test
# ==========================================================================

def thm43_equivalence_test(g, k: float, t_grid, d: float | None = None,
                           c: float | None = None) -> dict:
    """Evaluate the three dilation/derivative conditions with derived constants
    and report the implication pattern observed on the grid:

    (a) t phi'(t)/phi(t) >= 1 + c,  (b) phi(kt) >= k k^c phi(t) for the same c,
    (c) phi(kt) >= k d phi(t) for the given pair (k, d).
    """
    if d is None and c is None:
        raise ValueError("supply d or c")
    if c is None:
        c = regularity.constants_c_from_kd(k, d)
    if d is None:
        d = k ** c
    t_grid = [float(t) for t in t_grid]
    eps_slack = 1e-9
    verdict_a = regularity.check_log_regular_derivative(g, t_grid, c - eps_slack)
    verdict_b = regularity.check_log_regular_hadamard(
        g, k, regularity.constants_d_from_c(k, c), t_grid)
    verdict_c = regularity.check_log_regular_hadamard(g, k, d, t_grid)

    implications = {}
    # a dilation bound on a tail forces the derivative bound from k * tail start
    shifted = [t for t in t_grid if t >= k * t_grid[0]]
    for name, v, const in (("b_implies_a", verdict_b, c),
                           ("c_implies_a", verdict_c,
                            regularity.constants_c_from_kd(k, d))):
        if v.status == regularity.HOLDS and len(shifted) >= 2:
            va = regularity.check_log_regular_derivative(
                g, shifted, const - eps_slack)
            implications[name] = {"antecedent": v.status,
                                  "consequent": va.status,
                                  "consistent": va.status == regularity.HOLDS}
        else:
            implications[name] = {"antecedent": v.status, "consequent": None,
                                  "consistent": True}
    return {"k": k, "d": d, "c": c,
            "derivative": verdict_a.to_json(),
            "dilation_same_c": verdict_b.to_json(),
            "dilation_given_d": verdict_c.to_json(),
            "implications": implications}
