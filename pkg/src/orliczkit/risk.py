"""Catalog of convex risk functionals on discrete probability spaces.

Each functional carries declared structure flags, a properness witness and
-- where known -- a closed-form Fenchel conjugate and maximizing density, so
the duality engine can certify representations without numeric search.
Conjugates take a candidate density ``g`` and return the conjugate value,
``+inf`` off the effective domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import logsumexp, xlogy

from .measure import MeasureSpace, Rv, zeros

FEAS_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class RiskFunctional:
    name: str
    space: MeasureSpace
    evaluate: Callable[[Rv], float]
    is_monotone: bool
    is_convex: bool
    proper_witness: Rv
    closed_form_conjugate: Callable[[Rv], float] | None = None
    closed_form_maximizer: Callable[[Rv], Rv] | None = None


def _check_probability(space: MeasureSpace, what: str) -> None:
    if not space.is_probability(FEAS_TOL):
        raise ValueError(f"{what} requires a probability space (total mass "
                         f"{space.total_mass!r})")


def entropic(beta: float, space: MeasureSpace) -> RiskFunctional:
    """``(1/beta) * log E[exp(beta f)]``.

    Conjugate: relative entropy ``(1/beta) * E[g log g]`` on densities
    (g >= 0, E[g] = 1; 0 log 0 = 0), +inf elsewhere. The maximizing density
    is the Gibbs reweighting ``exp(beta f) / E[exp(beta f)]``.
    """
    if not beta > 0.0:
        raise ValueError(f"entropic index must be positive, got {beta}")
    _check_probability(space, "entropic")
    w = space.weights

    def ev(f: Rv) -> float:
        return float(logsumexp(beta * f.values, b=w)) / beta

    def conj(g: Rv) -> float:
        gv = g.values
        if gv.min() < -FEAS_TOL or abs(float(np.dot(w, gv)) - 1.0) > FEAS_TOL:
            return math.inf
        gv = np.maximum(gv, 0.0)
        return float(np.dot(w, xlogy(gv, gv))) / beta

    def maximizer(f: Rv) -> Rv:
        z = beta * f.values
        z = z - z.max()
        e = np.exp(z)
        return Rv(space, e / float(np.dot(w, e)))

    return RiskFunctional(
        name=f"entropic(beta={beta})",
        space=space,
        evaluate=ev,
        is_monotone=True,
        is_convex=True,
        proper_witness=zeros(space),
        closed_form_conjugate=conj,
        closed_form_maximizer=maximizer,
    )


def _avar_density(values: np.ndarray, weights: np.ndarray, alpha: float) -> np.ndarray:
    """Greedy mass filling: cap 1/alpha on the largest outcomes first."""
    cap = 1.0 / alpha
    order = np.argsort(-values, kind="stable")
    g = np.zeros_like(values)
    remaining = 1.0
    for i in order:
        if remaining <= 0.0:
            break
        gi = min(cap, remaining / weights[i])
        g[i] = gi
        remaining -= weights[i] * gi
    return g


def average_value_at_risk(alpha: float, space: MeasureSpace) -> RiskFunctional:
    """Tail average over the worst ``alpha`` fraction of outcomes.

    ``sup { E[f g] : 0 <= g <= 1/alpha, E[g] = 1 }``; the greedy filling of
    the cap along descending outcomes attains the supremum, so evaluation and
    maximizer share one code path. Conjugate: indicator of that density box.
    """
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"tail level must lie in (0, 1], got {alpha}")
    _check_probability(space, "average_value_at_risk")
    w = space.weights
    cap = 1.0 / alpha

    def maximizer(f: Rv) -> Rv:
        return Rv(space, _avar_density(f.values, w, alpha))

    def ev(f: Rv) -> float:
        g = _avar_density(f.values, w, alpha)
        return float(np.dot(w, f.values * g))

    def conj(g: Rv) -> float:
        gv = g.values
        feasible = (
            gv.min() >= -FEAS_TOL
            and gv.max() <= cap + FEAS_TOL
            and abs(float(np.dot(w, gv)) - 1.0) <= FEAS_TOL
        )
        return 0.0 if feasible else math.inf

    return RiskFunctional(
        name=f"average_value_at_risk(alpha={alpha})",
        space=space,
        evaluate=ev,
        is_monotone=True,
        is_convex=True,
        proper_witness=zeros(space),
        closed_form_conjugate=conj,
        closed_form_maximizer=maximizer,
    )


def worst_case(space: MeasureSpace) -> RiskFunctional:
    """``max_i f_i``; conjugate is the indicator of all densities."""
    w = space.weights

    def ev(f: Rv) -> float:
        return float(f.values.max())

    def conj(g: Rv) -> float:
        gv = g.values
        feasible = gv.min() >= -FEAS_TOL and abs(float(np.dot(w, gv)) - 1.0) <= FEAS_TOL
        return 0.0 if feasible else math.inf

    def maximizer(f: Rv) -> Rv:
        i = int(np.argmax(f.values))
        g = np.zeros_like(f.values)
        g[i] = 1.0 / w[i]
        return Rv(space, g)

    return RiskFunctional(
        name="worst_case",
        space=space,
        evaluate=ev,
        is_monotone=True,
        is_convex=True,
        proper_witness=zeros(space),
        closed_form_conjugate=conj,
        closed_form_maximizer=maximizer,
    )


def expectation(space: MeasureSpace) -> RiskFunctional:
    """``E[f]``; conjugate is the indicator of the single density 1."""
    w = space.weights

    def ev(f: Rv) -> float:
        return float(np.dot(w, f.values))

    def conj(g: Rv) -> float:
        return 0.0 if np.all(np.abs(g.values - 1.0) <= FEAS_TOL) else math.inf

    def maximizer(f: Rv) -> Rv:
        return Rv(space, np.ones_like(f.values))

    return RiskFunctional(
        name="expectation",
        space=space,
        evaluate=ev,
        is_monotone=True,
        is_convex=True,
        proper_witness=zeros(space),
        closed_form_conjugate=conj,
        closed_form_maximizer=maximizer,
    )


def non_monotone_control(space: MeasureSpace) -> RiskFunctional:
    """``E[f^2]`` -- convex and proper but *not* increasing.

    Negative control: dual-representation machinery must refuse it.
    """
    w = space.weights

    def ev(f: Rv) -> float:
        return float(np.dot(w, f.values * f.values))

    return RiskFunctional(
        name="non_monotone_control",
        space=space,
        evaluate=ev,
        is_monotone=False,
        is_convex=True,
        proper_witness=zeros(space),
    )


# -- sampled validation ------------------------------------------------------


@dataclass(frozen=True)
class ValidationReport:
    monotone_ok: bool
    convex_ok: bool
    proper_ok: bool
    trials: int
    seed: int
    monotone_witness: tuple[np.ndarray, np.ndarray, float, float] | None = None
    convex_witness: tuple[np.ndarray, np.ndarray, float, float] | None = None

    @property
    def all_ok(self) -> bool:
        return self.monotone_ok and self.convex_ok and self.proper_ok


def validate(phi: RiskFunctional, trials: int = 200, seed: int = 0) -> ValidationReport:
    """Sampled check of monotonicity, convexity and properness (slack 1e-9).

    Violations are recorded with witnesses, never raised.
    """
    rng = np.random.default_rng(seed)
    space = phi.space
    n = space.n_atoms
    slack = 1e-9
    monotone_ok, convex_ok = True, True
    mono_wit = conv_wit = None
    proper_ok = math.isfinite(phi.evaluate(phi.proper_witness))
    for _ in range(trials):
        a = rng.normal(0.0, 2.0, n)
        b = a + rng.exponential(1.0, n)
        fa, fb = phi.evaluate(Rv(space, a)), phi.evaluate(Rv(space, b))
        if fa > fb + slack and monotone_ok:
            monotone_ok, mono_wit = False, (a, b, fa, fb)
        c = rng.normal(0.0, 2.0, n)
        theta = rng.uniform(0.05, 0.95)
        mix = phi.evaluate(Rv(space, theta * a + (1.0 - theta) * c))
        fc = phi.evaluate(Rv(space, c))
        if mix > theta * fa + (1.0 - theta) * fc + slack and convex_ok:
            convex_ok, conv_wit = False, (a, c, theta, mix)
        if not math.isfinite(fa) and fa < 0:
            proper_ok = False
    return ValidationReport(
        monotone_ok=monotone_ok,
        convex_ok=convex_ok,
        proper_ok=proper_ok,
        trials=trials,
        seed=seed,
        monotone_witness=mono_wit,
        convex_witness=conv_wit,
    )


def increasing_catalog(space: MeasureSpace, beta: float = 1.0, alpha: float = 0.5):
    """The four proper convex increasing catalog members on ``space``."""
    return [
        entropic(beta, space),
        average_value_at_risk(alpha, space),
        worst_case(space),
        expectation(space),
    ]
