"""Fenchel conjugation and certified dual representations.

Everything here is derivative-free: conjugates and dual suprema are computed
by per-coordinate golden-section ascent with deterministic multi-starts, plus
mass-preserving pairwise transfers so the search can move along density
simplices that single-coordinate steps cannot leave. Divergence of a
conjugate (the +inf case) is detected by ray probes before any ascent runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import SlopeConditionError, SpaceMismatchError
from .measure import AeVerdict, MeasureSpace, Rv, ae_converges
from .norms import dual_pairing, heart_member
from .orlicz import OrliczFunction
from .risk import RiskFunctional, validate

_INV = (math.sqrt(5.0) - 1.0) / 2.0

# A single ray probe beyond this value is conclusive divergence on its own.
DIVERGENCE_HARD = 1e10
# A strictly increasing probe trace must clear this by the last exponent.
DIVERGENCE_SOFT = 1e4
PROBE_EXPONENTS = (1, 2, 3, 4, 5, 6)


# ---------------------------------------------------------------------------
# line search: golden-section maximum with a known finite anchor
# ---------------------------------------------------------------------------


def _anchored_line_max(h, lo: float, hi: float, t0: float, v0: float,
                       iters: int) -> tuple[float, float, int]:
    """Maximize a concave ``h`` on [lo, hi] where ``h`` may be -inf off its
    effective domain.

    ``(t0, v0)`` is the current point, known to lie in [lo, hi]; when both
    interior probes are -inf the retained interval is the one containing the
    anchor, so a feasible region around ``t0`` is never discarded. Endpoints
    are evaluated, which makes suprema attained at clamped boundaries exact.
    Returns (best_t, best_v, evaluations); never worse than the anchor.
    """
    best_t, best_v = t0, v0
    evals = 0

    def probe(t: float) -> float:
        nonlocal best_t, best_v, evals
        v = h(t)
        evals += 1
        if v > best_v:
            best_t, best_v = t, v
        return v

    probe(lo)
    probe(hi)
    a, b = lo, hi
    c = b - _INV * (b - a)
    d = a + _INV * (b - a)
    fc = probe(c)
    fd = probe(d)
    for _ in range(iters):
        if b - a <= 1e-15 * (1.0 + abs(a) + abs(b)):
            break
        if fc == -math.inf and fd == -math.inf:
            keep_left = t0 < d
        else:
            keep_left = fc >= fd
        if keep_left:
            b, d, fd = d, c, fc
            c = b - _INV * (b - a)
            fc = probe(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV * (b - a)
            fd = probe(d)
    return best_t, best_v, evals


# ---------------------------------------------------------------------------
# multi-start ascent engine
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AscentResult:
    g: np.ndarray
    value: float
    start_index: int
    sweeps: int
    evaluations: int


def _line_infeasible(h, lo: float, hi: float) -> bool:
    """Two shoulder probes; used to skip moves whose whole line (bar the
    current point) sits outside the objective's domain, as single-coordinate
    and additive moves do under an equality constraint."""
    return (h(lo + 0.25 * (hi - lo)) == -math.inf
            and h(lo + 0.75 * (hi - lo)) == -math.inf)


def maximize_dual(objective: Callable[[np.ndarray], float],
                  space: MeasureSpace,
                  *,
                  seed: int = 0,
                  restarts: int = 8,
                  nonneg: bool = True,
                  sweep_cap: int = 500,
                  line_iters: int = 32,
                  extra_pairs: int = 2,
                  starts: Sequence[np.ndarray] | None = None) -> AscentResult:
    """Maximize a concave ``objective`` over coordinate vectors ``g``.

    Move set per sweep: single-coordinate line searches (projected to g >= 0
    when ``nonneg``), pairwise transfers g_i += s/w_i, g_j -= s/w_j that keep
    the weighted mass fixed (all pairs for small spaces, a ring plus seeded
    extra pairs otherwise), a global additive shift, and a global rescaling.
    Objectives are free to return -inf off their domain; moves apply only on
    strict improvement. Deterministic in ``seed``: restart r draws from
    default_rng([seed, r]) and ties prefer the lowest start index.
    """
    w = space.weights
    n = space.n_atoms
    total = float(space.total_mass)
    if n <= 8:
        base_pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    else:
        base_pairs = [(i, (i + 1) % n) for i in range(n)]
    best: AscentResult | None = None
    for r in range(restarts):
        rng = np.random.default_rng([seed, r])
        if starts is not None and r < len(starts):
            g = np.array(starts[r], dtype=float)
        elif r == 0:
            g = np.full(n, 1.0 / total)
        else:
            raw = np.abs(rng.normal(0.0, 1.0, n)) + 0.05
            g = raw / float(np.dot(w, raw))
        v = objective(g)
        evals = 1
        sweeps = 0
        flat = 0
        for _ in range(sweep_cap):
            sweeps += 1
            v_before = v
            span = 2.0 * (1.0 + float(np.max(np.abs(g)))) if n else 1.0

            for i in range(n):
                t0 = g[i]
                lo = max(0.0, t0 - span) if nonneg else t0 - span
                hi = t0 + span
                if hi <= lo:
                    continue

                def h(t, i=i):
                    old = g[i]
                    g[i] = t
                    val = objective(g)
                    g[i] = old
                    return val

                if _line_infeasible(h, lo, hi):
                    evals += 2
                    continue
                t, val, ev = _anchored_line_max(h, lo, hi, t0, v, line_iters)
                evals += ev + 2
                if val > v:
                    g[i] = t
                    v = val

            pairs = list(base_pairs)
            if n > 8 and extra_pairs:
                for _k in range(extra_pairs):
                    i, j = rng.choice(n, size=2, replace=False)
                    pairs.append((int(i), int(j)))
            for i, j in pairs:
                wi, wj = float(w[i]), float(w[j])
                if nonneg:
                    lo, hi = -g[i] * wi, g[j] * wj
                else:
                    s_span = 1.0 + float(np.dot(w, np.abs(g)))
                    lo, hi = -s_span, s_span
                if hi - lo <= 1e-300:
                    continue

                def h(s, i=i, j=j, wi=wi, wj=wj):
                    oi, oj = g[i], g[j]
                    g[i] = oi + s / wi
                    g[j] = oj - s / wj
                    val = objective(g)
                    g[i], g[j] = oi, oj
                    return val

                s, val, ev = _anchored_line_max(h, lo, hi, 0.0, v, line_iters)
                evals += ev
                if val > v:
                    g[i] += s / wi
                    g[j] -= s / wj
                    if nonneg:
                        # transfers that land on a clamp boundary should sit
                        # on it exactly, not a rounding error below zero
                        if g[i] < 0.0 and g[i] > -1e-13:
                            g[i] = 0.0
                        if g[j] < 0.0 and g[j] > -1e-13:
                            g[j] = 0.0
                    v = val

            def h_add(t):
                return objective(g + t)

            lo = max(-float(np.min(g)), -span) if nonneg else -span
            hi = span
            if hi > lo:
                if _line_infeasible(h_add, lo, hi):
                    evals += 2
                else:
                    t, val, ev = _anchored_line_max(h_add, lo, hi, 0.0, v,
                                                    line_iters)
                    evals += ev + 2
                    if val > v:
                        g += t
                        if nonneg:
                            np.maximum(g, 0.0, out=g)
                        v = val

            def h_scale(c):
                return objective(c * g)

            if _line_infeasible(h_scale, 0.25, 4.0):
                evals += 2
            else:
                c, val, ev = _anchored_line_max(h_scale, 0.25, 4.0, 1.0, v,
                                                line_iters)
                evals += ev + 2
                if val > v:
                    g *= c
                    v = val

            gain = v - v_before
            if gain <= 1e-11 * (1.0 + abs(v)):
                flat += 1
                if flat >= 2:
                    break
            else:
                flat = 0
        cand = AscentResult(g=g.copy(), value=v, start_index=r, sweeps=sweeps,
                            evaluations=evals)
        if best is None or cand.value > best.value:
            best = cand
    assert best is not None
    return best


# ---------------------------------------------------------------------------
# Fenchel conjugate values
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConjugateEstimate:
    value: float
    numeric: bool
    best_f: Rv | None = None
    diverged_ray: Rv | None = None


def _strictly_increasing(trace: Sequence[float]) -> bool:
    return all(b > a for a, b in zip(trace, trace[1:]))


def fenchel_conjugate_value(phi: RiskFunctional, g: Rv, *, seed: int = 0,
                            restarts: int = 8, force_numeric: bool = False,
                            line_iters: int = 32) -> ConjugateEstimate:
    """``phi*(g) = sup_f (<f, g> - phi(f))``, extended-real valued.

    Uses the declared closed form when available (unless ``force_numeric``).
    The numeric path first fires divergence probes along +-10^k rays through
    every coordinate axis and through the constant vector, k = 1..6: a probe
    value beyond 1e10, or a strictly increasing trace ending above 1e4, is
    reported as +inf together with the offending ray. Otherwise a multi-start
    sign-free coordinate ascent over f estimates the supremum.
    """
    space = phi.space
    if not space.same_space(g.space):
        raise SpaceMismatchError("dual candidate lives on a different space")
    if phi.closed_form_conjugate is not None and not force_numeric:
        return ConjugateEstimate(float(phi.closed_form_conjugate(g)),
                                 numeric=False)
    w = space.weights
    gv = g.values
    n = space.n_atoms

    def obj(fv: np.ndarray) -> float:
        val = phi.evaluate(Rv._wrap(space, fv))
        if val == math.inf:
            return -math.inf
        return float(np.dot(w, fv * gv)) - val

    rays: list[np.ndarray] = []
    for i in range(n):
        e = np.zeros(n)
        e[i] = 1.0
        rays.append(-e)
        rays.append(e)
    rays.append(-np.ones(n))
    rays.append(np.ones(n))
    for ray in rays:
        trace = [obj((10.0 ** k) * ray) for k in PROBE_EXPONENTS]
        if (max(trace) > DIVERGENCE_HARD
                or (_strictly_increasing(trace)
                    and trace[-1] > DIVERGENCE_SOFT)):
            return ConjugateEstimate(math.inf, numeric=True,
                                     diverged_ray=Rv(space, ray))

    res = maximize_dual(obj, space, seed=seed, restarts=restarts,
                        nonneg=False, line_iters=line_iters)
    if res.value > 1e12:
        scale = max(1.0, float(np.max(np.abs(res.g))))
        return ConjugateEstimate(math.inf, numeric=True,
                                 diverged_ray=Rv(space, res.g / scale))
    return ConjugateEstimate(res.value, numeric=True,
                             best_f=Rv(space, res.g))


# ---------------------------------------------------------------------------
# positivity of finite-conjugate dual variables
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PositivityEvidence:
    """Divergence trace along the ray that punishes a negative coordinate.

    With f the indicator of the offending atom and f_tilde the functional's
    properness witness, records v_k = lambda_k <f,g> + <f_tilde,g>
    - phi(lambda_k f + f_tilde) at lambda_k = -10^k. For the catalog the
    trace is strictly increasing and clears 1e4 by k = 6, which certifies
    phi*(g) = +inf.
    """
    atom_id: int
    atom_index: int
    lambdas: tuple[float, ...]
    trace: tuple[float, ...]
    strictly_increasing: bool
    exceeds_threshold: bool

    @property
    def divergent(self) -> bool:
        return self.strictly_increasing and self.exceeds_threshold


def positivity_evidence(phi: RiskFunctional, g: Rv) -> PositivityEvidence:
    space = phi.space
    if not space.same_space(g.space):
        raise SpaceMismatchError("dual candidate lives on a different space")
    idx = int(np.argmin(g.values))
    if g.values[idx] >= 0.0:
        raise ValueError("g is nonnegative; there is no negative coordinate "
                         "to build divergence evidence from")
    f = np.zeros(space.n_atoms)
    f[idx] = 1.0
    ft = phi.proper_witness.values
    pair_f = float(np.dot(space.weights, f * g.values))
    pair_ft = float(np.dot(space.weights, ft * g.values))
    lambdas = tuple(-(10.0 ** k) for k in PROBE_EXPONENTS)
    trace = []
    for lam in lambdas:
        val = phi.evaluate(Rv(space, lam * f + ft))
        trace.append(lam * pair_f + pair_ft - val)
    trace = tuple(trace)
    return PositivityEvidence(
        atom_id=int(space.atom_ids[idx]),
        atom_index=idx,
        lambdas=lambdas,
        trace=trace,
        strictly_increasing=_strictly_increasing(trace),
        exceeds_threshold=trace[-1] > DIVERGENCE_SOFT,
    )


# ---------------------------------------------------------------------------
# dual representation certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DualCertificate:
    g: Rv
    conjugate_value: float
    achieved: float
    gap: float
    nonnegative_ok: bool
    heart_ok: bool
    heart_vacuous: bool
    start_index: int | None
    sweeps: int


def _conjugate_fn(phi: RiskFunctional, seed: int,
                  restarts: int) -> Callable[[Rv], float]:
    if phi.closed_form_conjugate is not None:
        return phi.closed_form_conjugate

    def numeric(g: Rv) -> float:
        return fenchel_conjugate_value(phi, g, seed=seed,
                                       restarts=restarts).value

    return numeric


def reconstruct(phi: RiskFunctional, f: Rv, psi: OrliczFunction, *,
                seed: int = 0, restarts: int = 8, force_numeric: bool = False,
                validation_trials: int = 120,
                line_iters: int = 32) -> tuple[float, DualCertificate]:
    """Recover ``phi(f)`` as ``sup_{g >= 0} (<f, g> - phi*(g))``.

    ``psi`` is the conjugate Young function whose heart the dual variable
    must inhabit; it must be finite everywhere (equivalently, the primal
    Young function grows superlinearly), else the representation hypothesis
    fails and a SlopeConditionError is raised. The functional must pass
    ``validate`` (convex, increasing, proper). With a declared closed-form
    maximizer the certificate is exact; otherwise projected multi-start
    coordinate ascent with mass-preserving transfers searches over g >= 0.
    Returns (dual value, certificate); certificate.gap = phi(f) - dual value.
    """
    space = phi.space
    if not space.same_space(f.space):
        raise SpaceMismatchError("f lives on a different space")
    report = validate(phi, trials=validation_trials, seed=seed + 101)
    if not report.all_ok:
        broken = [name for name, ok in (("monotone", report.monotone_ok),
                                        ("convex", report.convex_ok),
                                        ("proper", report.proper_ok)) if not ok]
        raise ValueError(
            f"{phi.name} failed validation ({', '.join(broken)}); a dual "
            "representation over nonnegative densities is not available")
    if not psi.is_finite_everywhere:
        raise SlopeConditionError(
            "conjugate Young function takes the value +inf, so the primal "
            "Young function is not superlinear and the representation "
            "hypothesis fails")
    primal = phi.evaluate(f)
    conj = _conjugate_fn(phi, seed, max(2, restarts // 2))

    if phi.closed_form_maximizer is not None and not force_numeric:
        g = phi.closed_form_maximizer(f)
        cval = float(conj(g))
        achieved = dual_pairing(f, g) - cval
        cert = DualCertificate(
            g=g,
            conjugate_value=cval,
            achieved=achieved,
            gap=primal - achieved,
            nonnegative_ok=bool(g.values.min() >= 0.0),
            heart_ok=heart_member(g, psi),
            heart_vacuous=psi.is_finite_everywhere,
            start_index=None,
            sweeps=0,
        )
        return achieved, cert

    w = space.weights
    fv = f.values

    def obj(garr: np.ndarray) -> float:
        cv = conj(Rv._wrap(space, garr))
        if cv == math.inf:
            return -math.inf
        return float(np.dot(w, fv * garr)) - cv

    res = maximize_dual(obj, space, seed=seed, restarts=restarts,
                        nonneg=True, line_iters=line_iters)
    g = Rv(space, res.g)
    cval = float(conj(g))
    achieved = dual_pairing(f, g) - cval if math.isfinite(cval) else -math.inf
    cert = DualCertificate(
        g=g,
        conjugate_value=cval,
        achieved=achieved,
        gap=primal - achieved,
        nonnegative_ok=bool(g.values.min() >= 0.0),
        heart_ok=heart_member(g, psi),
        heart_vacuous=psi.is_finite_everywhere,
        start_index=res.start_index,
        sweeps=res.sweeps,
    )
    return achieved, cert


# ---------------------------------------------------------------------------
# biconjugation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BiconjugateReport:
    max_deviation: float
    max_split: float
    deviations: tuple[float, ...]
    splits: tuple[float, ...]

    @property
    def probe_count(self) -> int:
        return len(self.deviations)


def biconjugate_check(phi: RiskFunctional, probes: Sequence[Rv], *,
                      seed: int = 0, restarts: int = 4,
                      line_iters: int = 32) -> BiconjugateReport:
    """Compare ``phi**`` with ``phi`` on the given probes.

    The biconjugate supremum is taken over sign-free g (the domain of phi*
    does any restricting), and again over g >= 0; ``max_split`` is the
    largest disagreement between the two, which vanishes exactly when the
    optimal dual variable is nonnegative. ``max_deviation`` compares the
    sign-free supremum against phi itself.
    """
    space = phi.space
    w = space.weights
    conj = _conjugate_fn(phi, seed, max(2, restarts // 2))
    deviations = []
    splits = []
    for f in probes:
        if not space.same_space(f.space):
            raise SpaceMismatchError("probe lives on a different space")
        fv = f.values

        def obj(garr: np.ndarray) -> float:
            cv = conj(Rv._wrap(space, garr))
            if cv == math.inf:
                return -math.inf
            return float(np.dot(w, fv * garr)) - cv

        free = maximize_dual(obj, space, seed=seed, restarts=restarts,
                             nonneg=False, line_iters=line_iters)
        cone = maximize_dual(obj, space, seed=seed, restarts=restarts,
                             nonneg=True, line_iters=line_iters)
        deviations.append(abs(free.value - phi.evaluate(f)))
        splits.append(abs(free.value - cone.value))
    return BiconjugateReport(
        max_deviation=max(deviations),
        max_split=max(splits),
        deviations=tuple(deviations),
        splits=tuple(splits),
    )


# ---------------------------------------------------------------------------
# level sets under a.e. limits
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LevelSetVerdict:
    status: str  # "holds" | "fails" | "inconclusive"
    threshold: float
    limit_value: float | None
    margin: float | None
    witness_atom_id: int | None
    ae: AeVerdict


def level_set_probe(phi: RiskFunctional, lam: float, boundary_f: Rv,
                    approx_seq: Sequence[Rv], *, ae_tol: float = 1e-8,
                    value_tol: float = 1e-9,
                    membership_tol: float = 1e-12) -> LevelSetVerdict:
    """Check that a.e. limits of sequences from {phi <= lam} stay inside.

    Every sequence member must already satisfy phi <= lam + membership_tol
    (precondition, raises ValueError). A sequence that fails to converge
    atomwise to ``boundary_f`` yields an inconclusive verdict rather than an
    error. On failure the verdict carries the limit value, the margin above
    the threshold and the slowest-settling atom as witness.
    """
    if not approx_seq:
        raise ValueError("empty approximating sequence")
    for k, member in enumerate(approx_seq):
        val = phi.evaluate(member)
        if val > lam + membership_tol:
            raise ValueError(
                f"sequence member {k} violates the level constraint: "
                f"phi = {val!r} > {lam!r} + {membership_tol!r}")
    ae = ae_converges(approx_seq, boundary_f, tol=ae_tol)
    if not ae.converged:
        return LevelSetVerdict(status="inconclusive", threshold=lam,
                               limit_value=None, margin=None,
                               witness_atom_id=None, ae=ae)
    limit_value = phi.evaluate(boundary_f)
    if limit_value <= lam + value_tol:
        return LevelSetVerdict(status="holds", threshold=lam,
                               limit_value=limit_value,
                               margin=limit_value - lam,
                               witness_atom_id=None, ae=ae)
    return LevelSetVerdict(status="fails", threshold=lam,
                           limit_value=limit_value,
                           margin=limit_value - lam,
                           witness_atom_id=ae.slowest_atom_id, ae=ae)
