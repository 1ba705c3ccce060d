"""Command line interface.

Exit codes: 0 success, 2 parse/usage error, 3 numeric failure, 4 hypothesis
refusal (slope condition, validation, hull membership), 5 property violation
(gap above tolerance, Fatou violation, failed verify-all rows). Reports are
deterministic: same inputs, same seed, same bytes.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass

import numpy as np

from .convergence import (SequenceFamily, closure_demo,
                          extract_ae_subsequence, fatou_check,
                          generate_sequence, non_lsc_control)
from .duality import (biconjugate_check, fenchel_conjugate_value,
                      positivity_evidence, reconstruct)
from .errors import (ClosureRefusal, NumericFailure, ParseError,
                     SlopeConditionError)
from .io import read_rv, read_space, read_stacked_rvs, render_record, render_table
from .measure import (DEFAULT_TRUNCATION, MeasureSpace, Rv,
                      strictly_positive_witness, uniform_probability, zeros)
from .norms import amemiya_norm, luxemburg_norm
from .orlicz import (FAILS, HOLDS, OrliczFunction, classify_space, conjugate,
                     conjugate_value, limit_slope)
from .risk import (average_value_at_risk, entropic, expectation,
                   increasing_catalog, validate)
from .specs import parse_orlicz_spec, parse_risk_spec

_GENERATOR_MODES = ("norm_convergent", "ae_only_traveling_spike",
                    "order_convergent")


@dataclass(frozen=True)
class RunConfig:
    """Run-wide knobs. ``tol_override`` replaces every subcommand's default
    tolerance when set; zero is allowed and runs checks in diagnostic mode
    (failures at tolerance zero are flagged as tolerance-induced when they
    would pass at the built-in default)."""
    seed: int = 0
    truncation: int = DEFAULT_TRUNCATION
    fmt: str = "json"
    tol_override: float | None = None
    max_iterations: int = 500

    def __post_init__(self):
        if self.tol_override is not None and self.tol_override < 0.0:
            raise ParseError("tolerance must be nonnegative")
        if self.truncation < 1:
            raise ParseError("truncation must be positive")
        if self.max_iterations < 1:
            raise ParseError("max_iterations must be positive")

    def tol(self, default: float) -> float:
        return default if self.tol_override is None else self.tol_override


def _config(args) -> RunConfig:
    return RunConfig(seed=args.seed, truncation=args.truncation,
                     fmt=args.format, tol_override=args.tol)


def _emit(text: str) -> None:
    sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_norm(args) -> int:
    cfg = _config(args)
    space = read_space(args.space)
    f = read_rv(args.rv, space)
    phi = parse_orlicz_spec(args.orlicz)
    lux = luxemburg_norm(f, phi)
    ame = amemiya_norm(f, phi)
    slack = cfg.tol(1e-9)
    sandwich = (lux.value <= ame.value + slack
                and ame.value <= 2.0 * lux.value + slack)
    record = {
        "command": "norm",
        "orlicz": args.orlicz,
        "luxemburg": lux.value,
        "amemiya": ame.value,
        "sandwich_ok": sandwich,
        "luxemburg_modular": lux.modular_at_value,
        "luxemburg_iterations": lux.iterations,
        "amemiya_iterations": ame.iterations,
    }
    _emit(render_record(record, cfg.fmt))
    return 0


def _cmd_conjugate(args) -> int:
    cfg = _config(args)
    phi = parse_orlicz_spec(args.orlicz)
    psi = conjugate(phi)
    if args.grid_max <= 0 or args.grid_count < 2:
        raise ParseError("grid must have positive extent and >= 2 points")
    grid = np.linspace(0.0, args.grid_max, args.grid_count)
    values = psi.values(grid)
    _emit(render_table({"s": [float(s) for s in grid],
                        "conjugate": [float(v) for v in values]}, cfg.fmt))
    return 0


def _cmd_classify(args) -> int:
    cfg = _config(args)
    phi = parse_orlicz_spec(args.orlicz)
    cls = classify_space(phi, finite_measure=(args.measure == "finite"))
    record = {
        "command": "classify",
        "orlicz": args.orlicz,
        "measure": args.measure,
        "reflexive": cls.reflexive,
        "order_continuous": cls.order_continuous,
        "c_property_for_sigma_n": cls.c_property_for_sigma_n,
    }
    for verdict in cls.phi_delta2:
        record[f"phi_delta2_{verdict.regime}"] = verdict.status
    for verdict in cls.conjugate_delta2:
        record[f"conjugate_delta2_{verdict.regime}"] = verdict.status
    _emit(render_record(record, cfg.fmt))
    return 0


def _cmd_represent(args) -> int:
    cfg = _config(args)
    space = read_space(args.space)
    f = read_rv(args.rv, space)
    phi_young = parse_orlicz_spec(args.orlicz)
    functional = parse_risk_spec(args.risk, space)
    slope = limit_slope(phi_young)
    if not slope.is_infinite:
        raise SlopeConditionError(
            "slope condition fails: the Young function grows at most "
            f"linearly (limit slope {slope.limit!r}); the dual "
            "representation requires superlinear growth")
    psi = conjugate(phi_young)
    value, cert = reconstruct(functional, f, psi, seed=cfg.seed)
    gap_tol = cfg.tol(1e-6)
    record = {
        "command": "represent",
        "risk": args.risk,
        "orlicz": args.orlicz,
        "value": value,
        "primal": functional.evaluate(f),
        "gap": cert.gap,
        "gap_tol": gap_tol,
        "conjugate_value": cert.conjugate_value,
        "g": [float(x) for x in cert.g.values],
        "nonnegative_ok": cert.nonnegative_ok,
        "heart_ok": cert.heart_ok,
        "heart_vacuous": cert.heart_vacuous,
        "start_index": cert.start_index,
        "sweeps": cert.sweeps,
    }
    _emit(render_record(record, cfg.fmt))
    return 0 if cert.gap <= gap_tol else 5


def _cmd_fatou_test(args) -> int:
    cfg = _config(args)
    space = read_space(args.space)
    phi_young = parse_orlicz_spec(args.orlicz)
    functional = parse_risk_spec(args.risk, space)
    f = read_rv(args.rv, space) if args.rv else zeros(space)
    modes = _GENERATOR_MODES if args.mode == "all" else (args.mode,)
    tol = cfg.tol(1e-9)
    families = []
    family_modes = []
    for m_idx, mode in enumerate(modes):
        for k in range(args.count):
            families.append(generate_sequence(
                space, phi_young, f, mode, length=args.length,
                seed=cfg.seed + 9973 * m_idx + k))
            family_modes.append(mode)
    report = fatou_check(functional, families, tol=tol)
    worst = report.rows[report.worst_family_index]
    record = {
        "command": "fatou-test",
        "risk": args.risk,
        "orlicz": args.orlicz,
        "modes": list(modes),
        "families": len(families),
        "tol": tol,
        "violations": report.violation_count,
        "worst_margin": report.worst_margin,
        "worst_family_index": report.worst_family_index,
        "worst_mode": worst.mode,
    }
    _emit(render_record(record, cfg.fmt))
    return 0 if report.violation_count == 0 else 5


def _witnesses(space: MeasureSpace, phi_young: OrliczFunction):
    psi = conjugate(phi_young)
    g0 = strictly_positive_witness(space, psi)
    f0 = strictly_positive_witness(space, phi_young)
    return g0, f0


def _cmd_extract_subseq(args) -> int:
    cfg = _config(args)
    space = read_space(args.space)
    phi_young = parse_orlicz_spec(args.orlicz)
    f = read_rv(args.rv, space)
    terms = read_stacked_rvs(args.family, space)
    family = SequenceFamily.from_terms(terms, f, phi_young)
    g0, f0 = _witnesses(space, phi_young)
    res = extract_ae_subsequence(family, f, g0, f0, ae_tol=cfg.tol(1e-8))
    trace_margin = 0.0
    for m, t in enumerate(res.trace, start=1):
        trace_margin = max(trace_margin, t - (2.0 ** (-(m - 1)) + 1e-12))
    record = {
        "command": "extract-subseq",
        "orlicz": args.orlicz,
        "status": res.status,
        "picks": len(res.indices),
        "indices": list(res.indices),
        "stalled_at": res.stalled_at,
        "trace_bound_ok": res.trace_bound_ok,
        "trace_margin": trace_margin,
        "pointwise_converged": res.pointwise_ok,
    }
    _emit(render_record(record, cfg.fmt))
    ok = res.status == "ok" and res.trace_bound_ok and res.pointwise_ok
    return 0 if ok else 5


def _cmd_closure_demo(args) -> int:
    cfg = _config(args)
    space = read_space(args.space)
    phi_young = parse_orlicz_spec(args.orlicz)
    f = read_rv(args.rv, space)
    vertices = read_stacked_rvs(args.vertices, space)
    report = closure_demo(vertices, f, phi_young, hull_tol=cfg.tol(1e-9),
                          length=args.length)
    g0, f0 = _witnesses(space, phi_young)
    extraction = extract_ae_subsequence(report.family, report.projection,
                                        g0, f0)
    pointwise_ok = extraction.pointwise_ok
    record = {
        "command": "closure-demo",
        "orlicz": args.orlicz,
        "distance_euclid": report.distance_euclid,
        "distance_lux": report.distance_lux,
        "hull_weights": list(report.weights),
        "envelope_ok": report.envelope_ok,
        "sweeps": report.sweeps,
        "vertex_shortcut": report.vertex_shortcut,
        "extraction_status": extraction.status,
        "extraction_trace_ok": extraction.trace_bound_ok,
        "extraction_pointwise": pointwise_ok,
    }
    _emit(render_record(record, cfg.fmt))
    ok = (report.envelope_ok and extraction.trace_bound_ok and pointwise_ok)
    return 0 if ok else 5


# ---------------------------------------------------------------------------
# verify-all battery
# ---------------------------------------------------------------------------


def _row(label: str, margin: float, default_tol: float, cfg: RunConfig,
         detail: str) -> dict:
    tol = cfg.tol(default_tol)
    passed = margin <= tol
    return {
        "label": label,
        "passed": passed,
        "margin": float(margin),
        "tol": tol,
        "tolerance_induced": bool((not passed) and margin <= default_tol),
        "detail": detail,
    }


def _feasible_dual(name: str, space: MeasureSpace,
                   rng: np.random.Generator) -> np.ndarray:
    n = space.n_atoms
    w = space.weights
    if name.startswith("expectation"):
        return np.ones(n)
    raw = np.abs(rng.normal(0.0, 1.0, n)) + 0.05
    g = raw / float(np.dot(w, raw))
    if name.startswith("average_value_at_risk"):
        alpha = 0.5
        cap = 1.0 / alpha
        peak = float(np.max(g))
        if peak > cap:
            t = (cap - 1.0) / (peak - 1.0)
            g = t * g + (1.0 - t) * np.ones(n)
    return g


def run_battery(cfg: RunConfig) -> list[dict]:
    """The verify-all rows; deterministic given the config."""
    rows: list[dict] = []
    sp = uniform_probability(6)
    sp_small = uniform_probability(4)
    power2 = OrliczFunction.power(2.0)
    psi2 = conjugate(power2)
    catalog = increasing_catalog(sp_small, beta=1.0, alpha=0.5)

    # properties of the catalog functionals themselves
    failing = [c.name for c in catalog
               if not validate(c, trials=60, seed=cfg.seed).all_ok]
    rows.append(_row("validate_catalog", float(len(failing)), 0.0, cfg,
                     "all increasing catalog members pass validate"
                     if not failing else "failing: " + ",".join(failing)))

    # Luxemburg norm against the analytic weighted 2-norm
    rng = np.random.default_rng([cfg.seed, 1])
    wspace = MeasureSpace.finite(rng.uniform(0.2, 2.0, 6))
    margin = 0.0
    for _ in range(20):
        v = rng.normal(0.0, 3.0, 6)
        f = Rv(wspace, v)
        pnorm = float(np.sqrt(np.dot(wspace.weights, v * v)))
        err = abs(luxemburg_norm(f, power2).value - pnorm) / (1.0 + pnorm)
        margin = max(margin, err)
    rows.append(_row("norm_power2_oracle", margin, 1e-8, cfg,
                     "luxemburg vs analytic weighted 2-norm, 20 draws"))

    # numeric conjugate against the analytic conjugate pair
    sp_phi = OrliczFunction.scaled_power(2.0)
    margin = max(abs(conjugate_value(sp_phi, s) - 0.5 * s * s)
                 for s in np.linspace(0.0, 10.0, 12))
    rows.append(_row("conjugate_roundtrip", margin, 1e-6, cfg,
                     "numeric vs analytic conjugate of t^2/2 on [0,10]"))

    # Young's inequality sweep
    rng = np.random.default_rng([cfg.seed, 2])
    violations = 0
    checked = 0
    for phi in (power2, sp_phi, OrliczFunction.linear(),
                OrliczFunction.exp_young(), OrliczFunction.linf_step()):
        psi = conjugate(phi)
        for _ in range(400):
            t = float(rng.uniform(0.0, 5.0))
            s = float(rng.uniform(0.0, 5.0))
            lhs = t * s
            rhs = phi(t) + psi(s)
            checked += 1
            if lhs > rhs + 1e-9:
                violations += 1
    rows.append(_row("young_inequality", float(violations), 0.0, cfg,
                     f"{checked} (t,s) pairs across the catalog"))

    # dual representation: entropic, closed form and numeric cold starts
    rng = np.random.default_rng([cfg.seed, 3])
    ent6 = entropic(1.0, sp)
    margin = 0.0
    for _ in range(8):
        f = Rv(sp, rng.normal(0.0, 1.5, 6))
        _, cert = reconstruct(ent6, f, psi2, seed=cfg.seed,
                              validation_trials=40)
        margin = max(margin, abs(cert.gap))
    rows.append(_row("represent_entropic_closed", margin, 1e-6, cfg,
                     "Gibbs-maximizer certificates, 8 draws, n=6"))

    sp3 = uniform_probability(3)
    ent3 = entropic(1.0, sp3)
    margin = 0.0
    for _ in range(4):
        f = Rv(sp3, rng.normal(0.0, 1.5, 3))
        _, cert = reconstruct(ent3, f, psi2, seed=cfg.seed, restarts=2,
                              force_numeric=True, validation_trials=40)
        margin = max(margin, abs(cert.gap))
    rows.append(_row("represent_entropic_numeric", margin, 1e-4, cfg,
                     "cold-start coordinate ascent, 4 draws, n=3"))

    exp4 = expectation(sp_small)
    f = Rv(sp_small, rng.normal(0.0, 1.0, 4))
    _, cert = reconstruct(exp4, f, psi2, seed=cfg.seed, validation_trials=40)
    rows.append(_row("represent_expectation_exact", abs(cert.gap), 1e-12, cfg,
                     "certificate g = 1 is exact"))

    avar4 = average_value_at_risk(0.5, sp_small)
    margin = 0.0
    for _ in range(6):
        f = Rv(sp_small, rng.normal(0.0, 2.0, 4))
        _, cert = reconstruct(avar4, f, psi2, seed=cfg.seed,
                              validation_trials=40)
        margin = max(margin, abs(cert.gap))
    rows.append(_row("represent_avar_closed", margin, 1e-10, cfg,
                     "greedy tail-density certificates, 6 draws"))

    # dual positivity, both directions
    rng = np.random.default_rng([cfg.seed, 4])
    mis_neg = 0
    mis_pos = 0
    trace_bad = 0
    for functional in catalog:
        for _ in range(8):
            g = _feasible_dual(functional.name, sp_small, rng)
            dip = int(rng.integers(0, 4))
            g_neg = g.copy()
            g_neg[dip] = -0.5
            est = fenchel_conjugate_value(functional, Rv(sp_small, g_neg),
                                          seed=cfg.seed, restarts=2,
                                          force_numeric=True)
            if est.value != math.inf:
                mis_neg += 1
            ev = positivity_evidence(functional, Rv(sp_small, g_neg))
            if not ev.divergent:
                trace_bad += 1
            est = fenchel_conjugate_value(functional, Rv(sp_small, g),
                                          seed=cfg.seed, restarts=2,
                                          force_numeric=True)
            if not math.isfinite(est.value):
                mis_pos += 1
    rows.append(_row("dual_positivity_negative", float(mis_neg + trace_bad),
                     0.0, cfg, "negative-dip duals diverge with evidence, "
                     "8 draws x 4 functionals"))
    rows.append(_row("dual_positivity_feasible", float(mis_pos), 0.0, cfg,
                     "feasible duals stay finite, 8 draws x 4 functionals"))

    # Fatou condition across generator modes, plus the non-lsc control
    rng = np.random.default_rng([cfg.seed, 5])
    base = Rv(sp_small, rng.normal(0.0, 1.0, 4))
    families = []
    for m_idx, mode in enumerate(_GENERATOR_MODES):
        for k in range(6):
            families.append(generate_sequence(
                sp_small, power2, base, mode, length=24,
                seed=cfg.seed + 31 * m_idx + k))
    worst = -math.inf
    violations = 0
    for functional in catalog:
        rep = fatou_check(functional, families, tol=cfg.tol(1e-9))
        worst = max(worst, rep.worst_margin)
        violations += rep.violation_count
    rows.append(_row("fatou_catalog", worst, 1e-9, cfg,
                     f"{len(families)} families x 4 functionals, "
                     f"{violations} violations"))

    control = non_lsc_control(expectation(sp_small), base)
    ctrl_rep = fatou_check(control, families, tol=cfg.tol(1e-9))
    shortfall = max(0.0, 0.5 - ctrl_rep.worst_margin)
    rows.append(_row("fatou_control_caught", shortfall, 0.0, cfg,
                     f"non-lsc control worst margin {ctrl_rep.worst_margin!r}"))

    # subsequence extraction on the truncated space
    big = uniform_probability(cfg.truncation, truncated=True)
    limit = zeros(big)
    fam = generate_sequence(big, power2, limit, "ae_only_traveling_spike",
                            length=cfg.truncation + 64, seed=cfg.seed)
    g0 = strictly_positive_witness(big, psi2)
    f0 = strictly_positive_witness(big, power2)
    res = extract_ae_subsequence(fam, limit, g0, f0)
    excess = 0.0
    for m, t in enumerate(res.trace, start=1):
        excess = max(excess, t - (2.0 ** (-(m - 1)) + 1e-12))
    penalty = 0.0 if (res.status == "ok" and res.pointwise_ok) else 1.0
    rows.append(_row("extraction_truncated", max(excess, penalty), 0.0, cfg,
                     f"N={cfg.truncation} spike family, "
                     f"{len(res.indices)} picks"))

    # biconjugation
    rng = np.random.default_rng([cfg.seed, 6])
    probes = [Rv(sp3, rng.normal(0.0, 1.5, 3)) for _ in range(12)]
    bi = biconjugate_check(ent3, probes, seed=cfg.seed, restarts=2)
    rows.append(_row("biconjugate_entropic", bi.max_deviation, 1e-5, cfg,
                     "sign-free double conjugate vs entropic, 12 probes"))
    rows.append(_row("biconjugate_split", bi.max_split, 1e-6, cfg,
                     "sign-free vs nonnegative dual suprema"))

    # space classification verdicts
    cls_p2 = classify_space(power2, finite_measure=True)
    cls_step = classify_space(OrliczFunction.linf_step(), finite_measure=True)
    cls_exp = classify_space(OrliczFunction.exp_young(), finite_measure=True)
    mismatches = sum([cls_p2.reflexive != HOLDS,
                      cls_step.reflexive != FAILS,
                      cls_exp.reflexive != FAILS])
    rows.append(_row("classification_verdicts", float(mismatches), 0.0, cfg,
                     "power2 reflexive, step and exp_young not"))

    # in-process determinism of a representative numeric search
    f = Rv(sp3, rng.normal(0.0, 1.0, 3))
    v1, _ = reconstruct(ent3, f, psi2, seed=cfg.seed, restarts=2,
                        force_numeric=True, validation_trials=40)
    v2, _ = reconstruct(ent3, f, psi2, seed=cfg.seed, restarts=2,
                        force_numeric=True, validation_trials=40)
    rows.append(_row("determinism_reprobe", 0.0 if v1 == v2 else 1.0, 0.0,
                     cfg, "same seed, same numeric supremum bits"))
    return rows


def _cmd_verify_all(args) -> int:
    cfg = _config(args)
    rows = run_battery(cfg)
    failures = sum(not r["passed"] for r in rows)
    if cfg.fmt == "csv":
        columns = {key: [r[key] for r in rows]
                   for key in ("label", "passed", "margin", "tol",
                               "tolerance_induced", "detail")}
        _emit(render_table(columns, "csv"))
    else:
        record = {
            "command": "verify-all",
            "seed": cfg.seed,
            "truncation": cfg.truncation,
            "tol_override": cfg.tol_override,
            "rows": rows,
            "failures": failures,
            "all_passed": failures == 0,
        }
        _emit(render_record(record, "json"))
    return 0 if failures == 0 else 5


# ---------------------------------------------------------------------------
# parser and dispatch
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orliczkit",
        description="Orlicz-space norms, Young conjugates, and dual "
                    "representations of convex risk functionals.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=None,
                        help="override the subcommand's default tolerance "
                             "(0 = diagnostic mode)")
    common.add_argument("--truncation", type=int, default=DEFAULT_TRUNCATION)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("norm", parents=[common],
                       help="Luxemburg and Amemiya norms of a scenario")
    p.add_argument("--space", required=True)
    p.add_argument("--rv", required=True)
    p.add_argument("--orlicz", required=True)
    p.set_defaults(func=_cmd_norm)

    p = sub.add_parser("conjugate", parents=[common],
                       help="tabulate the conjugate Young function")
    p.add_argument("--orlicz", required=True)
    p.add_argument("--grid-max", type=float, default=10.0)
    p.add_argument("--grid-count", type=int, default=50)
    p.set_defaults(func=_cmd_conjugate)

    p = sub.add_parser("classify", parents=[common],
                       help="doubling/reflexivity verdicts for the space")
    p.add_argument("--orlicz", required=True)
    p.add_argument("--measure", choices=("finite", "infinite"),
                   default="finite")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("represent", parents=[common],
                       help="dual representation certificate for a scenario")
    p.add_argument("--space", required=True)
    p.add_argument("--rv", required=True)
    p.add_argument("--risk", required=True)
    p.add_argument("--orlicz", required=True)
    p.set_defaults(func=_cmd_represent)

    p = sub.add_parser("fatou-test", parents=[common],
                       help="lower-semicontinuity check on generated families")
    p.add_argument("--space", required=True)
    p.add_argument("--risk", required=True)
    p.add_argument("--orlicz", required=True)
    p.add_argument("--rv", default=None, help="limit point (default zero)")
    p.add_argument("--mode", choices=_GENERATOR_MODES + ("all",),
                   default="all")
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--length", type=int, default=24)
    p.set_defaults(func=_cmd_fatou_test)

    p = sub.add_parser("extract-subseq", parents=[common],
                       help="a.e.-convergent subsequence extraction")
    p.add_argument("--space", required=True)
    p.add_argument("--family", required=True)
    p.add_argument("--rv", required=True, help="declared limit")
    p.add_argument("--orlicz", required=True)
    p.set_defaults(func=_cmd_extract_subseq)

    p = sub.add_parser("closure-demo", parents=[common],
                       help="project onto a hull and emit a certified sequence")
    p.add_argument("--space", required=True)
    p.add_argument("--vertices", required=True)
    p.add_argument("--rv", required=True)
    p.add_argument("--orlicz", required=True)
    p.add_argument("--length", type=int, default=32)
    p.set_defaults(func=_cmd_closure_demo)

    p = sub.add_parser("verify-all", parents=[common],
                       help="run the deterministic verification battery")
    p.set_defaults(func=_cmd_verify_all)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except ParseError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except NumericFailure as exc:
        sys.stderr.write(f"numeric failure: {exc}\n")
        return 3
    except (SlopeConditionError, ClosureRefusal) as exc:
        sys.stderr.write(f"refused: {exc}\n")
        return 4
    except ValueError as exc:
        sys.stderr.write(f"refused: {exc}\n")
        return 4


def run() -> None:
    sys.exit(main())
