"""Orlicz functions: catalog, Young conjugates, doubling classification.

An Orlicz function here is convex, increasing, left-continuous, vanishes at
zero, is not identically zero and may take the value ``+inf`` (modelled by
``math.inf``). The catalog covers the workhorse cases:

* ``power(p)``           -- t**p, p > 1
* ``scaled_power(p, c)`` -- c * t**p; default c = 1/p (the normalized family)
* ``linear()``           -- t (the boundary case with limit slope 1)
* ``exp_young()``        -- exp(t) - t - 1
* ``linf_step()``        -- 0 on [0, 1], +inf beyond (sup-norm geometry)
* ``custom(...)``        -- user evaluator with a declared finiteness horizon
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Literal

import numpy as np

from ._search import bisect_predicate, expand_max_bracket, golden_max
from .errors import NumericFailure

POWER = "power"
SCALED_POWER = "scaled_power"
LINEAR = "linear"
EXP_YOUNG = "exp_young"
LINF_STEP = "linf_step"
CUSTOM = "custom"

HOLDS = "holds"
FAILS = "fails"
INCONCLUSIVE = "inconclusive"

Regime = Literal["at_zero", "at_infinity"]

_REGIMES = ("at_zero", "at_infinity")


@dataclass(frozen=True, eq=False)
class OrliczFunction:
    """A member of the catalog above, or a custom evaluator.

    ``horizon`` is the finiteness horizon: the function is finite on
    ``[0, horizon]`` (left continuity pins the value at the horizon) and
    ``+inf`` strictly beyond it.
    """

    kind: str
    p: float = 0.0
    scale: float = 1.0
    evaluator: Callable[[float], float] | None = None
    horizon: float = math.inf
    label: str = ""

    # -- constructors ------------------------------------------------------

    @staticmethod
    def power(p: float) -> "OrliczFunction":
        if not p > 1.0:
            raise ValueError(f"power exponent must exceed 1, got {p}")
        return OrliczFunction(POWER, p=float(p), label=f"power(p={p})")

    @staticmethod
    def scaled_power(p: float, c: float | None = None) -> "OrliczFunction":
        if not p > 1.0:
            raise ValueError(f"power exponent must exceed 1, got {p}")
        c = 1.0 / p if c is None else float(c)
        if not c > 0.0:
            raise ValueError(f"scale must be positive, got {c}")
        return OrliczFunction(
            SCALED_POWER, p=float(p), scale=c, label=f"scaled_power(p={p}, c={c})"
        )

    @staticmethod
    def linear() -> "OrliczFunction":
        return OrliczFunction(LINEAR, label="linear")

    @staticmethod
    def exp_young() -> "OrliczFunction":
        return OrliczFunction(EXP_YOUNG, label="exp_young")

    @staticmethod
    def linf_step() -> "OrliczFunction":
        return OrliczFunction(LINF_STEP, horizon=1.0, label="linf_step")

    @staticmethod
    def custom(
        evaluator: Callable[[float], float],
        horizon: float = math.inf,
        label: str = "custom",
        spot_check: bool = True,
    ) -> "OrliczFunction":
        if horizon <= 0.0:
            raise ValueError("finiteness horizon must be positive")
        fn = OrliczFunction(
            CUSTOM, evaluator=evaluator, horizon=float(horizon), label=label
        )
        if spot_check:
            _spot_check_custom(fn)
        return fn

    # -- evaluation --------------------------------------------------------

    def __call__(self, t: float) -> float:
        if t < 0.0:
            raise ValueError(f"Orlicz functions are defined on t >= 0, got {t}")
        k = self.kind
        if k == POWER:
            return _safe_pow(t, self.p)
        if k == SCALED_POWER:
            return self.scale * _safe_pow(t, self.p)
        if k == LINEAR:
            return t
        if k == EXP_YOUNG:
            try:
                return math.expm1(t) - t
            except OverflowError:
                return math.inf
        if k == LINF_STEP:
            return 0.0 if t <= 1.0 else math.inf
        return self.evaluator(t)

    def values(self, ts: np.ndarray) -> np.ndarray:
        """Vectorized evaluation (used by modular sums)."""
        ts = np.asarray(ts, dtype=float)
        if np.any(ts < 0.0):
            raise ValueError("Orlicz functions are defined on t >= 0")
        k = self.kind
        with np.errstate(over="ignore"):
            if k == POWER:
                return np.power(ts, self.p)
            if k == SCALED_POWER:
                return self.scale * np.power(ts, self.p)
            if k == LINEAR:
                return ts.copy()
            if k == EXP_YOUNG:
                return np.expm1(ts) - ts
            if k == LINF_STEP:
                return np.where(ts <= 1.0, 0.0, math.inf)
        out = np.empty(ts.shape, dtype=float)
        flat = ts.reshape(-1)
        dst = out.reshape(-1)
        for i, t in enumerate(flat):
            dst[i] = self.evaluator(float(t))
        return out

    @property
    def finite_horizon(self) -> float:
        return self.horizon

    @property
    def is_finite_everywhere(self) -> bool:
        return math.isinf(self.horizon)

    def __repr__(self) -> str:  # pragma: no cover - debugging nicety
        return f"OrliczFunction<{self.label or self.kind}>"


def _safe_pow(t: float, p: float) -> float:
    try:
        return t**p
    except OverflowError:
        return math.inf


def _spot_check_custom(fn: OrliczFunction) -> None:
    """Cheap sanity sweep for user evaluators.

    Full convexity/left-continuity is the caller's contract; we check the
    anchor value at 0, monotonicity and midpoint convexity on a sample grid,
    non-triviality, and that the declared horizon actually separates finite
    from infinite values.
    """
    ev = fn.evaluator
    v0 = ev(0.0)
    if not abs(v0) <= 1e-12:
        raise ValueError(f"custom Orlicz function must vanish at 0, got {v0}")
    top = fn.horizon if math.isfinite(fn.horizon) else 8.0
    grid = np.geomspace(top / 4096.0, top, 25)
    vals = [ev(float(t)) for t in grid]
    if not any(0.0 < v < math.inf for v in vals):
        raise ValueError("custom Orlicz function must be finite and positive somewhere")
    for a, b in zip(vals, vals[1:]):
        if b < a - 1e-9 * max(1.0, abs(a)):
            raise ValueError("custom Orlicz function is not increasing on the sample grid")
    for i in range(len(grid) - 2):
        t1, t2 = grid[i], grid[i + 2]
        v1, v2 = vals[i], vals[i + 2]
        if math.isinf(v2):
            continue
        mid = ev(float(0.5 * (t1 + t2)))
        if mid > 0.5 * (v1 + v2) + 1e-9 * max(1.0, abs(v2)):
            raise ValueError("custom Orlicz function fails midpoint convexity on the sample grid")
    if math.isfinite(fn.horizon):
        beyond = ev(fn.horizon * (1.0 + 1e-9) + 1e-12)
        if beyond < math.inf:
            raise ValueError(
                "declared finiteness horizon is not a horizon: function is finite beyond it"
            )


def evaluate(phi: OrliczFunction, t: float) -> float:
    """Functional form of ``phi(t)``."""
    return phi(t)


# -- Young conjugation -----------------------------------------------------


def conjugate(phi: OrliczFunction) -> OrliczFunction:
    """Closed-form Young conjugate ``psi(s) = sup_t (t*s - phi(t))``.

    Catalog pairs are returned in closed form:

    * ``c * t**p``  <->  ``c' * s**q`` with 1/p + 1/q = 1 (the normalized
      family t**p / p maps to s**q / q),
    * ``linear``    <->  ``linf_step`` and back,
    * ``exp_young`` ->   ``(1+s) log(1+s) - s`` (closed form, custom kind).

    Custom functions get a pointwise numeric conjugate built on
    :func:`conjugate_value`.
    """
    k = phi.kind
    if k in (POWER, SCALED_POWER):
        p, c = phi.p, phi.scale if k == SCALED_POWER else 1.0
        q = p / (p - 1.0)
        c_dual = c * (p - 1.0) * (c * p) ** (-q)
        return OrliczFunction.scaled_power(q, c_dual)
    if k == LINEAR:
        return OrliczFunction.linf_step()
    if k == LINF_STEP:
        return OrliczFunction.linear()
    if k == EXP_YOUNG:
        def _exp_young_dual(s: float) -> float:
            if s < 0.0:
                raise ValueError("conjugates are defined on s >= 0")
            return (1.0 + s) * math.log1p(s) - s

        return OrliczFunction.custom(
            _exp_young_dual, label="exp_young_conjugate", spot_check=False
        )
    # custom: numeric pointwise conjugate; its finiteness horizon is the
    # limit slope of phi (the conjugate is finite exactly up to that slope).
    slope = limit_slope(phi)
    hz = math.inf if slope.is_infinite else slope.limit
    base = phi

    def _numeric_dual(s: float) -> float:
        return conjugate_value(base, s)

    return OrliczFunction.custom(
        _numeric_dual, horizon=hz, label=f"conjugate({phi.label})", spot_check=False
    )


def conjugate_value(phi: OrliczFunction, s: float) -> float:
    """Numeric ``sup_t (t*s - phi(t))`` over ``t >= 0``.

    Bracket expansion along a doubling ray followed by golden-section search
    (relative tolerance 1e-10). The objective is declared unbounded -- and
    ``+inf`` returned -- after 40 consecutive strict increases along the ray.
    Since the evaluations approach the supremum from below, the result never
    overshoots.
    """
    if s < 0.0:
        raise ValueError(f"conjugate argument must be >= 0, got {s}")

    def obj(t: float) -> float:
        return s * t - phi(t)

    if math.isfinite(phi.horizon):
        res = golden_max(obj, 0.0, phi.horizon)
        return max(res.value, 0.0)
    hi, unbounded, _ = expand_max_bracket(obj, start=1.0)
    if unbounded:
        return math.inf
    res = golden_max(obj, 0.0, hi)
    # sup >= value at t=0, which is 0
    return max(res.value, 0.0)


# -- doubling condition ----------------------------------------------------


@dataclass(frozen=True)
class Delta2Verdict:
    status: str  # holds | fails | inconclusive
    regime: str
    k: float | None = None
    witness: float | None = None
    exact: bool = False
    note: str = ""


def check_delta2(
    phi: OrliczFunction, regime: Regime, sample_count: int = 64
) -> Delta2Verdict:
    """Does ``phi(2u) <= k * phi(u)`` hold near the regime's end?

    ``at_zero`` asks for some k on all small u, ``at_infinity`` on all large
    u. Catalog kinds answer exactly; custom evaluators are probed on
    geometric grids pushed successively deeper into the regime, reporting
    ``holds`` with an estimated k when the ratio stays bounded, ``fails``
    with a witness when it blows up (or hits +inf over finite values), and
    ``inconclusive`` otherwise. Vanishing stretches contribute a vacuous
    0 <= k*0 and are skipped.
    """
    if regime not in _REGIMES:
        raise ValueError(f"regime must be one of {_REGIMES}, got {regime!r}")
    if sample_count < 16:
        raise ValueError("sample_count must be at least 16")
    k = phi.kind
    if k in (POWER, SCALED_POWER):
        return Delta2Verdict(HOLDS, regime, k=2.0**phi.p, exact=True)
    if k == LINEAR:
        return Delta2Verdict(HOLDS, regime, k=2.0, exact=True)
    if k == EXP_YOUNG:
        if regime == "at_zero":
            # ratio tends to 4 at 0 and is increasing; k below is valid on u <= 1
            k_est = (math.expm1(2.0) - 2.0) / (math.expm1(1.0) - 1.0)
            return Delta2Verdict(HOLDS, regime, k=k_est, exact=True,
                                 note="ratio tends to 4 at zero; bound valid on u <= 1")
        return Delta2Verdict(FAILS, regime, witness=32.0, exact=True,
                             note="ratio grows like exp(u)")
    if k == LINF_STEP:
        if regime == "at_zero":
            return Delta2Verdict(HOLDS, regime, k=1.0, exact=True,
                                 note="vacuous: the function vanishes near zero")
        return Delta2Verdict(FAILS, regime, witness=0.75, exact=True,
                             note="phi(2u)=+inf while phi(u)=0 for u in (1/2, 1]")
    return _delta2_heuristic(phi, regime, sample_count)


def _delta2_heuristic(
    phi: OrliczFunction, regime: Regime, m: int
) -> Delta2Verdict:
    if regime == "at_infinity":
        spans = [(1.0, 2.0**10), (1.0, 2.0**20), (1.0, 2.0**30)]
    else:
        spans = [(2.0**-10, 1.0), (2.0**-20, 1.0), (2.0**-30, 1.0)]

    sups: list[float] = []
    witnesses: list[float | None] = []
    for lo, hi in spans:
        us = np.geomspace(lo, hi, m)
        if regime == "at_zero":
            us = us[::-1]  # order toward the regime limit
        tail = us[m // 2 :]
        sup = 0.0
        witness = None
        for u in tail:
            u = float(u)
            a = phi(u)
            b = phi(2.0 * u)
            if math.isinf(b) and not math.isinf(a):
                return Delta2Verdict(
                    FAILS, regime, witness=u,
                    note="phi(2u) = +inf over a finite phi(u) inside the regime",
                )
            if a == 0.0:
                continue  # vacuous (0 <= k*0) or transient kink; deeper passes decide
            if math.isinf(a):
                continue
            r = b / a
            if r > sup:
                sup, witness = r, u
        sups.append(sup)
        witnesses.append(witness)

    s1, s2, s3 = sups
    if s3 > 4.0 * max(s2, 1e-300) and s3 > 64.0:
        return Delta2Verdict(FAILS, regime, witness=witnesses[2],
                             note=f"doubling ratio grows across refinements: {sups}")
    if s3 <= 2.0 * max(s1, s2, 1.0) + 1e-9:
        k_est = max(s3, 1.0)
        return Delta2Verdict(HOLDS, regime, k=k_est,
                             note=f"ratio bounded across refinements: {sups}")
    return Delta2Verdict(INCONCLUSIVE, regime,
                         note=f"doubling ratios neither stabilize nor clearly grow: {sups}")


# -- generalized inverse ---------------------------------------------------


def generalized_inverse(phi: OrliczFunction, y: float) -> float:
    """Right-continuous generalized inverse ``inf{t >= 0 : phi(t) >= y}``.

    Bisection to absolute tolerance 1e-12. When phi jumps to ``+inf`` before
    reaching ``y`` the jump point (finiteness horizon) is returned.
    """
    if y < 0.0:
        raise ValueError(f"generalized inverse needs y >= 0, got {y}")
    if y == 0.0:
        return 0.0
    lo, hi = 0.0, 1.0
    found = phi(hi) >= y
    for _ in range(1100):
        if found:
            break
        lo = hi
        hi *= 2.0
        found = phi(hi) >= y
    if not found:
        raise ValueError(f"phi never reaches y={y} (bounded function)")
    _, hi, _ = bisect_predicate(lambda t: phi(t) >= y, lo, hi, rel_tol=0.0, abs_floor=1e-12)
    return hi


# -- limit slope -----------------------------------------------------------


@dataclass(frozen=True)
class SlopeClass:
    limit: float
    is_infinite: bool
    estimated: bool = False


def limit_slope(phi: OrliczFunction) -> SlopeClass:
    """``lim phi(t)/t`` as t grows (the ratio is nondecreasing by convexity).

    Catalog kinds are exact. Custom evaluators are probed along a doubling
    ray; the answer carries ``estimated=True`` when it comes from the probe.
    """
    k = phi.kind
    if k in (POWER, SCALED_POWER, EXP_YOUNG):
        return SlopeClass(math.inf, True)
    if k == LINF_STEP:
        return SlopeClass(math.inf, True)
    if k == LINEAR:
        return SlopeClass(1.0, False)
    if math.isfinite(phi.horizon):
        return SlopeClass(math.inf, True)  # +inf beyond the horizon
    ratios = []
    t = 1.0
    for _ in range(51):
        v = phi(t)
        if math.isinf(v):
            return SlopeClass(math.inf, True)
        ratios.append(v / t)
        t *= 2.0
    last, prev = ratios[-1], ratios[-2]
    if last > 1e9 or (prev > 0 and last > 1.05 * prev):
        return SlopeClass(math.inf, True, estimated=True)
    return SlopeClass(last, False, estimated=True)


# -- space classification --------------------------------------------------


@dataclass(frozen=True)
class SpaceClassification:
    reflexive: str
    order_continuous: str
    c_property_for_sigma_n: str
    phi_delta2: tuple[Delta2Verdict, ...]
    conjugate_delta2: tuple[Delta2Verdict, ...]
    finite_measure: bool


def _combine(verdicts: list[Delta2Verdict]) -> str:
    if any(v.status == FAILS for v in verdicts):
        return FAILS
    if all(v.status == HOLDS for v in verdicts):
        return HOLDS
    return INCONCLUSIVE


def classify_space(phi: OrliczFunction, finite_measure: bool = True) -> SpaceClassification:
    """Reflexivity / order continuity / countable-supremum-property verdicts.

    The relevant doubling regimes are ``at_infinity`` alone on a finite
    measure and both regimes otherwise. Reflexivity requires the doubling
    condition of both the function and its conjugate in those regimes; order
    continuity requires it of the function itself. The third verdict equals
    the reflexivity verdict when the conjugate's doubling condition (the
    standing hypothesis of the dual-representation machinery) holds, and is
    inconclusive when that hypothesis cannot be certified.
    """
    regimes: tuple[Regime, ...] = (
        ("at_infinity",) if finite_measure else ("at_zero", "at_infinity")
    )
    psi = conjugate(phi)
    d_phi = [check_delta2(phi, r) for r in regimes]
    d_psi = [check_delta2(psi, r) for r in regimes]
    order_cont = _combine(d_phi)
    hypothesis = _combine(d_psi)
    reflexive = _combine(d_phi + d_psi)
    c_prop = reflexive if hypothesis == HOLDS else INCONCLUSIVE
    return SpaceClassification(
        reflexive=reflexive,
        order_continuous=order_cont,
        c_property_for_sigma_n=c_prop,
        phi_delta2=tuple(d_phi),
        conjugate_delta2=tuple(d_psi),
        finite_measure=finite_measure,
    )
