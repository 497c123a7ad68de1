"""Command-line orchestration: measure evaluation, bound reports, figure
data, randomized verification suites, and parameter sweeps.

Subcommands: measure, bound, figure, verify, sweep.  All randomized audits
are seeded and write the seed into their output header; CSV and JSON
outputs are byte-deterministic for a fixed command line.

Exit codes: 0 pass, 1 suite violation, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import bounds as bnd
from . import measures as msr
from . import states as st
from .linalg import DensityMatrix, LinalgError, partial_trace
from .measures import RoofConfig
from .states import PureState

SQ6 = float(np.sqrt(6.0))

# Example data behind the figure jobs: the five-amplitude three-qubit
# state with l0 = l3 = 1/2, l1 = l2 = l4 = sqrt(6)/6 (concurrence data,
# measured from the state through the same path the sweep command uses)
# and the W-class state (1/2, 1/2, sqrt(2)/2), whose assisted-negativity
# squares are the exact values 3/4, 1/4, 1/2.
FIG_MONO_BUILDER = (f"schmidt:0.5,{SQ6 / 6.0!r},{SQ6 / 6.0!r},0.5,"
                    f"{SQ6 / 6.0!r}")
FIG_MONO_T = SQ6 / 2.0
FIG_POLY = {"q_ab": 0.25, "q_ac": 0.5, "lhs_base": 0.75, "t": 2.0 ** 0.6}


class UsageError(ValueError):
    """Bad command-line arguments or malformed input files."""


# ---------------------------------------------------------------------------
# parsing helpers
# ---------------------------------------------------------------------------

def parse_split(text: str, n_qubits: int) -> tuple[int, ...]:
    """Parse a bipartition like "A|BC" or "0|12" into first-block indices."""
    parts = text.split("|")
    if len(parts) != 2 or not parts[0] or not parts[1]:
        raise UsageError(f"split must look like 'A|BC' or '0|12', got {text!r}")

    def block(chars: str) -> list[int]:
        out = []
        for c in chars:
            if c.isdigit():
                out.append(int(c))
            elif c.isalpha():
                out.append(ord(c.upper()) - ord("A"))
            else:
                raise UsageError(f"bad split character {c!r}")
        return out

    first, second = block(parts[0]), block(parts[1])
    both = sorted(first + second)
    if both != list(range(n_qubits)):
        raise UsageError(
            f"split {text!r} must partition all {n_qubits} qubits exactly once")
    return tuple(first)


def build_state(spec: str) -> PureState:
    """Builder strings: schmidt:l0,l1,l2,l3,l4[,phase] or wclass:c1,c2,c3."""
    kind, _, rest = spec.partition(":")
    try:
        vals = [float(v) for v in rest.split(",") if v != ""]
    except ValueError as exc:
        raise UsageError(f"bad builder values in {spec!r}: {exc}") from exc
    if kind == "schmidt":
        if len(vals) == 5:
            vals.append(0.0)
        if len(vals) != 6:
            raise UsageError("schmidt builder needs 5 amplitudes plus optional phase")
        return st.generalized_schmidt_state(
            st.SchmidtParams(tuple(vals[:5]), vals[5]))
    if kind == "wclass":
        if len(vals) != 3:
            raise UsageError("wclass builder needs exactly 3 coefficients")
        return st.w_class_state(*vals)
    raise UsageError(f"unknown builder {kind!r} (want schmidt: or wclass:)")


def load_input_state(args) -> PureState | DensityMatrix:
    if getattr(args, "state", None):
        obj = st.load_state(args.state)
    elif getattr(args, "builder", None):
        obj = build_state(args.builder)
    else:
        raise UsageError("provide --state <path> or --builder <spec>")
    keep = getattr(args, "keep", None)
    if keep:
        idx = tuple(int(i) for i in keep.split(","))
        rho = st.to_density(obj) if isinstance(obj, PureState) else obj
        obj = partial_trace(rho, idx)
    return obj


def _roof_cfg(args) -> RoofConfig:
    return RoofConfig(restarts=args.roof_restarts, seed=args.seed)


def _write_text(text: str, out: str | None) -> None:
    if out and out != "-":
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))  # shortest round-trip decimal
    return str(v)


# ---------------------------------------------------------------------------
# measure
# ---------------------------------------------------------------------------

def cmd_measure(args) -> dict:
    obj = load_input_state(args)
    cfg = _roof_cfg(args)
    record = {"measure": args.measure, "seed": args.seed, "generator": st.RNG_NAME}
    name = args.measure
    diag = None

    if isinstance(obj, PureState):
        split = parse_split(args.split, obj.n_qubits) if args.split else (0,)
        record["split"] = list(split)
        if name == "concurrence":
            value = msr.concurrence_pure(obj, split)
        elif name == "negativity":
            value = msr.negativity_pure(obj, split)
        elif name in ("scren", "screnoa", "cren", "crenoa", "wootters"):
            if obj.n_qubits != 2:
                raise UsageError(f"{name} needs a two-qubit state")
            rho = st.to_density(obj)
            value, diag = _mixed_measure(name, rho, cfg)
        else:
            raise UsageError(f"unknown measure {name!r}")
    else:
        n_sub = len(obj.sig)
        split = parse_split(args.split, n_sub) if args.split else (0,)
        record["split"] = list(split)
        if name == "negativity":
            value = msr.negativity_mixed(obj, split)
        elif name == "concurrence":
            if obj.sig.dims == (2, 2):
                value = msr.concurrence_wootters(obj)
            else:
                res = msr.convex_roof(obj, msr.concurrence_functional(split), "min", cfg)
                value = res.value
                diag = _roof_diag(res)
        elif name in ("scren", "screnoa", "cren", "crenoa", "wootters"):
            value, diag = _mixed_measure(name, obj, cfg)
        else:
            raise UsageError(f"unknown measure {name!r}")

    record["value"] = float(value)
    if diag:
        record["optimizer"] = diag
    return record


def _roof_diag(res: msr.RoofResult) -> dict:
    return {
        "restarts_used": res.restarts_used,
        "converged": res.converged,
        "bound_side": res.bound_side,
        "ensemble_size": len(res.ensemble.members),
    }


def _mixed_measure(name: str, rho: DensityMatrix, cfg: RoofConfig):
    if rho.sig.dims != (2, 2):
        raise UsageError(f"{name} needs a two-qubit state, got {rho.sig.dims}")
    if name == "wootters":
        return msr.concurrence_wootters(rho), None
    direction = "min" if name in ("scren", "cren") else "max"
    res = msr.convex_roof(rho, msr.negativity_functional((0,)), direction, cfg)
    value = res.value ** 2 if name in ("scren", "screnoa") else res.value
    return value, _roof_diag(res)


# ---------------------------------------------------------------------------
# bound
# ---------------------------------------------------------------------------

def _measured_inputs(obj, kind: str, cfg: RoofConfig):
    """LHS and pairwise correlation values for a pure three-qubit state.

    Monogamy uses concurrence, polygamy uses SCRENoA; mixed total states
    are rejected because their bipartite LHS would need a roof value that
    is only one-sided."""
    if not isinstance(obj, PureState):
        raise UsageError("bound evaluation needs a pure total state")
    if obj.n_qubits != 3:
        raise UsageError("bound evaluation handles three-qubit states; "
                         "use the chain verify suite for larger registers")
    rho = st.to_density(obj)
    pair_b = st.reduce_pair(rho, 1)
    pair_c = st.reduce_pair(rho, 2)
    if kind == "monogamy":
        lhs_base = msr.concurrence_pure(obj, (0,))
        q_ab = msr.concurrence_wootters(pair_b)
        q_ac = msr.concurrence_wootters(pair_c)
    else:
        lhs_base = msr.negativity_pure(obj, (0,)) ** 2
        q_ab = msr.screnoa(pair_b, cfg)
        q_ac = msr.screnoa(pair_c, cfg)
    return lhs_base, q_ab, q_ac


def _resolve_q(qspec, t: float, q_ab: float, q_ac: float, power: float) -> float:
    """q may be numeric, 'edge' (data-dependent lower edge) or 'top'."""
    if qspec == "edge":
        if q_ac <= 0:
            raise UsageError("edge q undefined when the dominant value is 0")
        return 1.0 + (q_ab / q_ac) ** power
    if qspec == "top":
        return 1.0 + 1.0 / t
    return float(qspec)


def _resolve_t(tspec, q_ab: float, q_ac: float, power: float) -> float:
    if tspec == "sqrt":
        if q_ab <= 0 or q_ac <= 0:
            return 1.0
        x = (q_ac / q_ab) ** power
        return float(np.sqrt(x)) if x >= 1.0 else 1.0
    return float(tspec)


def evaluate_bound_report(kind: str, lhs_base: float, q_ab: float, q_ac: float,
                          *, variants, alpha=None, gamma=None, beta=None,
                          delta=None, t="sqrt", q="edge", k=None, p=None,
                          a=None) -> bnd.BoundReport:
    """Build a BoundReport for the requested variants at one parameter point."""
    if kind == "monogamy":
        exp_num, exp_den = float(alpha), float(gamma)
    elif kind == "polygamy":
        exp_num, exp_den = float(beta), float(delta)
    else:
        raise UsageError(f"kind must be monogamy or polygamy, got {kind!r}")
    t_val = _resolve_t(t, q_ab, q_ac, exp_den)
    q_val = _resolve_q(q, t_val, q_ab, q_ac, exp_den)
    lhs = bnd._pow(lhs_base, exp_num)

    variant_rhs: dict = {}
    pre_ok: dict = {}
    gaps: dict = {}
    theorem = "thm1" if kind == "monogamy" else "thm4"
    for v in variants:
        try:
            if v == theorem:
                if kind == "monogamy":
                    params = bnd.MonogamyParams(exp_num, exp_den, t_val, q_val)
                    rhs = bnd.thm1_lower_bound(q_ab, q_ac, params)
                else:
                    params = bnd.PolygamyParams(exp_num, exp_den, t_val, q_val)
                    rhs = bnd.thm4_upper_bound(q_ab, q_ac, params)
            elif v in ("ref16", "ref28", "ref29"):
                kw = dict(k=k if k is not None else t_val,
                          p=p, a=a if a is not None else t_val)
                if v == "ref28" and kw["p"] is None:
                    kw["p"] = 1.0
                if kind == "monogamy":
                    rhs = bnd.prior_monogamy_bound(
                        v, q_ab, q_ac, alpha=exp_num, gamma=exp_den, **kw)
                else:
                    rhs = bnd.prior_polygamy_bound(
                        v, q_ab, q_ac, beta=exp_num, delta=exp_den, **kw)
            else:
                raise UsageError(f"unknown bound variant {v!r}")
        except bnd.PreconditionError as exc:
            pre_ok[v] = False
            variant_rhs[v] = float("nan")
            continue
        pre_ok[v] = True
        variant_rhs[v] = float(rhs)
        gaps[v] = lhs - rhs if kind == "monogamy" else rhs - lhs
    return bnd.BoundReport(kind, lhs, variant_rhs, pre_ok, gaps)


def cmd_bound(args) -> dict:
    if args.kind == "monogamy" and (args.alpha is None or args.gamma is None):
        raise UsageError("monogamy bounds need --alpha and --gamma")
    if args.kind == "polygamy" and (args.beta is None or args.delta is None):
        raise UsageError("polygamy bounds need --beta and --delta")
    obj = load_input_state(args)
    cfg = _roof_cfg(args)
    lhs_base, q_ab, q_ac = _measured_inputs(obj, args.kind, cfg)
    variants = [v.strip() for v in args.variants.split(",") if v.strip()]
    report = evaluate_bound_report(
        args.kind, lhs_base, q_ab, q_ac, variants=variants,
        alpha=args.alpha, gamma=args.gamma, beta=args.beta, delta=args.delta,
        t=args.t, q=args.q, k=args.k, p=args.p, a=args.a)
    out = report.as_dict()
    out.update({
        "q_ab": q_ab, "q_ac": q_ac, "lhs_base": lhs_base,
        "seed": args.seed, "generator": st.RNG_NAME,
    })
    return out


# ---------------------------------------------------------------------------
# sweep and figures
# ---------------------------------------------------------------------------

AXIS_NAMES = ("alpha", "gamma", "beta", "delta", "t", "q")


@dataclass
class SweepSpec:
    """Up to two axes over exponent or window parameters, fixed values for
    the rest, and the bound variants to evaluate per grid point."""

    kind: str
    axes: list = field(default_factory=list)      # (name, start, stop, steps)
    fixed: dict = field(default_factory=dict)
    variants: list = field(default_factory=list)

    def __post_init__(self):
        if self.kind not in ("monogamy", "polygamy"):
            raise UsageError(f"bad sweep kind {self.kind!r}")
        if not 1 <= len(self.axes) <= 2:
            raise UsageError("sweep needs one or two axes")
        for name, start, stop, steps in self.axes:
            if name not in AXIS_NAMES:
                raise UsageError(f"unknown axis {name!r}")
            if steps < 2:
                raise UsageError(f"axis {name}: steps must be >= 2")
            if not np.isfinite(start) or not np.isfinite(stop):
                raise UsageError(f"axis {name}: non-finite range")
        if not self.variants:
            raise UsageError("sweep needs at least one variant")


def sweep_rows(spec: SweepSpec, lhs_base: float, q_ab: float, q_ac: float,
               seed: int):
    """Grid-evaluate the requested variants; returns (header_lines, rows)."""
    axis_vals = [(name, np.linspace(start, stop, steps))
                 for name, start, stop, steps in spec.axes]
    grid_desc = "x".join(
        f"{name}[{_fmt(float(a[0]))},{_fmt(float(a[-1]))},{len(a)}]"
        for name, a in axis_vals)
    theorem = "thm1" if spec.kind == "monogamy" else "thm4"
    exp_names = ("alpha", "gamma") if spec.kind == "monogamy" else ("beta", "delta")
    axis_names = [name for name, _ in axis_vals]
    # both exponent columns always appear, then any window-parameter axes
    value_cols = list(exp_names) + [n for n in axis_names if n not in exp_names]
    columns = value_cols + ["lhs"] + [f"rhs_{v}" for v in spec.variants] + [
        "gap", "admissible"]
    header = [f"# seed={seed} grid={grid_desc}", ",".join(columns)]

    if len(axis_vals) == 1:
        points = [(v,) for v in axis_vals[0][1]]
    else:
        points = [(u, v) for u in axis_vals[0][1] for v in axis_vals[1][1]]

    rows = []
    for pt in points:
        values = dict(spec.fixed)
        for (name, _), v in zip(axis_vals, pt):
            values[name] = float(v)
        kw = dict(variants=spec.variants, t=values.get("t", "sqrt"),
                  q=values.get("q", "edge"), k=values.get("k"),
                  p=values.get("p"), a=values.get("a"))
        kw[exp_names[0]] = values[exp_names[0]]
        kw[exp_names[1]] = values[exp_names[1]]
        mask_ok = True
        if spec.kind == "polygamy" and values["beta"] < values["delta"]:
            mask_ok = False
        if mask_ok:
            report = evaluate_bound_report(spec.kind, lhs_base, q_ab, q_ac, **kw)
            rhs_vals = [report.variant_rhs.get(v, float("nan"))
                        for v in spec.variants]
            admissible = all(report.preconditions_ok.get(v, False)
                             for v in spec.variants)
            lhs = report.lhs
        else:
            rhs_vals = [float("nan")] * len(spec.variants)
            admissible = False
            lhs = float("nan")
        if theorem in spec.variants and "ref29" in spec.variants and admissible:
            i_t = spec.variants.index(theorem)
            i_r = spec.variants.index("ref29")
            gap = (rhs_vals[i_t] - rhs_vals[i_r] if spec.kind == "monogamy"
                   else rhs_vals[i_r] - rhs_vals[i_t])
        else:
            gap = float("nan")
        lead = [float(values.get(c, float("nan"))) for c in value_cols]
        rows.append(lead + [lhs] + rhs_vals + [gap, admissible])
    return header, rows


def rows_to_csv(header, rows) -> str:
    lines = list(header)
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


FIGURE_SPECS = {
    1: ("monogamy", [("alpha", 0.0, 2.0, None), ("gamma", 2.0, 20.0, None)]),
    2: ("monogamy", [("alpha", 0.0, 2.0, None)]),
    3: ("monogamy", [("alpha", 0.0, 2.0, None), ("gamma", 2.0, 20.0, None)]),
    4: ("polygamy", [("delta", 0.6, 1.0, None), ("beta", 0.6, 3.0, None)]),
    5: ("polygamy", [("beta", 0.6, 3.0, None)]),
    6: ("polygamy", [("delta", 0.6, 1.0, None), ("beta", 0.6, 3.0, None)]),
}


@dataclass(frozen=True)
class FigureJob:
    """One figure-data request: id 1..6, output path, grid resolution."""

    fig_id: int
    out: str = "-"
    resolution: int = 101

    def __post_init__(self):
        if self.fig_id not in FIGURE_SPECS:
            raise UsageError(f"figure id must be 1..6, got {self.fig_id}")
        if self.resolution < 2:
            raise UsageError("resolution must be >= 2")


def figure_spec(fig_id: int, resolution: int = 101) -> tuple[SweepSpec, dict]:
    """Sweep specification and example data behind one figure id.

    Figures 1-3 plot the tightened and prior lower bounds on the
    generalized-Schmidt example (figure 2 is the gamma = 20 slice); figures
    4-6 mirror this for the W-class SCRENoA example (figure 5 is the
    delta = 0.8 slice).  Both use the data-edge q choice.
    """
    if fig_id not in FIGURE_SPECS:
        raise UsageError(f"figure id must be 1..6, got {fig_id}")
    kind, axes = FIGURE_SPECS[fig_id]
    axes = [(n, a, b, resolution) for n, a, b, _ in axes]
    if kind == "monogamy":
        lhs_base, q_ab, q_ac = _measured_inputs(
            build_state(FIG_MONO_BUILDER), "monogamy", RoofConfig())
        data = {"q_ab": q_ab, "q_ac": q_ac, "lhs_base": lhs_base,
                "t": FIG_MONO_T}
    else:
        data = dict(FIG_POLY)
    fixed = {"t": data["t"], "q": "edge"}
    if fig_id == 2:
        fixed["gamma"] = 20.0
    if fig_id == 5:
        fixed["delta"] = 0.8
    variants = ["thm1", "ref29"] if kind == "monogamy" else ["thm4", "ref29"]
    spec = SweepSpec(kind, axes, fixed, variants)
    return spec, data


def figure_csv(job: FigureJob, seed: int) -> str:
    spec, data = figure_spec(job.fig_id, job.resolution)
    header, rows = sweep_rows(spec, data["lhs_base"], data["q_ab"],
                              data["q_ac"], seed)
    return rows_to_csv(header, rows)


def cmd_figure(args) -> str:
    job = FigureJob(args.id, args.out, args.resolution)
    return figure_csv(job, args.seed)


def cmd_sweep(args) -> str:
    obj = load_input_state(args)
    cfg = _roof_cfg(args)
    axes = []
    for ax in args.axis:
        try:
            name, start, stop, steps = ax.split(":")
            axes.append((name, float(start), float(stop), int(steps)))
        except ValueError as exc:
            raise UsageError(f"bad axis {ax!r}, want name:start:stop:steps") from exc
    fixed = {}
    for fx in args.fix or []:
        name, _, val = fx.partition("=")
        if name not in AXIS_NAMES + ("k", "p", "a"):
            raise UsageError(f"cannot fix unknown parameter {name!r}")
        fixed[name] = val if val in ("edge", "top", "sqrt") else float(val)
    variants = [v.strip() for v in args.variants.split(",") if v.strip()]
    spec = SweepSpec(args.kind, axes, fixed, variants)
    missing = [n for n in (("alpha", "gamma") if args.kind == "monogamy"
                           else ("beta", "delta"))
               if n not in fixed and n not in [a[0] for a in axes]]
    if missing:
        raise UsageError(f"missing exponent parameters: {missing}")
    lhs_base, q_ab, q_ac = _measured_inputs(obj, args.kind, cfg)
    header, rows = sweep_rows(spec, lhs_base, q_ab, q_ac, args.seed)
    return rows_to_csv(header, rows)


# ---------------------------------------------------------------------------
# verify suites
# ---------------------------------------------------------------------------

def verify_lemma1(trials: int, seed: int) -> dict:
    """Fuzz both branches of the window inequality on admissible tuples.

    Samples x >= t >= 1 up to 50, q uniform in [1 + 1/x, 1 + 1/t],
    exponents m in [0, 1] and n in [1, 10]; flags any point where the
    claimed inequality fails by more than 1e-12.
    """
    rng = st.make_rng(seed)
    t = rng.uniform(1.0, 50.0, trials)
    x = rng.uniform(t, 50.0)
    q = rng.uniform(1.0 + 1.0 / x, 1.0 + 1.0 / t)
    m = rng.uniform(0.0, 1.0, trials)
    n = rng.uniform(1.0, 10.0, trials)

    def f(xx, mm):
        return (1.0 + xx) ** mm - q ** (mm - 1.0) * xx ** mm

    slack_m = f(x, m) - f(t, m)          # branch m claims >= 0
    slack_n = f(t, n) - f(x, n)          # branch n claims >= 0
    bad_m = np.where(slack_m < -1e-12)[0]
    bad_n = np.where(slack_n < -1e-12)[0]

    def dump(idx, which, slack):
        return [{"branch": which, "x": float(x[i]), "t": float(t[i]),
                 "q": float(q[i]),
                 "exponent": float(m[i] if which == "m" else n[i]),
                 "slack": float(slack[i])} for i in idx[:5]]

    violations = int(len(bad_m) + len(bad_n))
    return {
        "suite": "lemma1", "seed": seed, "trials_per_branch": trials,
        "violations": violations,
        "violations_m": int(len(bad_m)), "violations_n": int(len(bad_n)),
        "min_slack_m": float(slack_m.min()), "min_slack_n": float(slack_n.min()),
        "counterexamples": dump(bad_m, "m", slack_m) + dump(bad_n, "n", slack_n),
        "ok": violations == 0,
    }


def _sample_window(rng, q_small: float, q_big: float, power: float):
    """Admissible (t, q) for dominance q_big^power >= t * q_small^power."""
    if q_small <= 0.0:
        t = rng.uniform(1.0, 3.0)
        lo = 1.0 + 1e-9
    else:
        x = (q_big / q_small) ** power
        if x < 1.0 + 1e-9:
            return None
        t = rng.uniform(1.0, min(x, 1e6))
        lo = 1.0 + 1.0 / x
    hi = 1.0 + 1.0 / t
    return t, rng.uniform(lo, hi)


ALPHA_GRID = np.arange(0.0, 2.0 + 1e-9, 0.25)


def verify_monogamy(trials: int, seed: int) -> dict:
    """Haar-random three-qubit audit of the squared-concurrence monogamy
    base relation (alpha = 2) and the tightened lower bound across the
    alpha grid wherever its hypotheses hold."""
    root = np.random.SeedSequence(seed)
    gamma = 2.0
    ckw_viol, thm_viol, checks = [], [], 0
    min_ckw, min_thm = np.inf, np.inf
    for i, child in enumerate(root.spawn(trials)):
        rng = np.random.Generator(np.random.PCG64(child))
        psi = st.haar_random_from(rng, 3)
        rho = st.to_density(psi)
        lhs = msr.concurrence_pure(psi, (0,))
        c_b = msr.concurrence_wootters(st.reduce_pair(rho, 1))
        c_c = msr.concurrence_wootters(st.reduce_pair(rho, 2))
        ckw_slack = lhs ** 2 - c_b ** 2 - c_c ** 2
        min_ckw = min(min_ckw, ckw_slack)
        if ckw_slack < -1e-9:
            ckw_viol.append({"trial": i, "state": st.pure_state_to_json(psi),
                             "ckw_slack": float(ckw_slack)})
        q_small, q_big = sorted((c_b, c_c))
        if q_big <= 0.0:
            continue
        tw = _sample_window(rng, q_small, q_big, gamma)
        if tw is None:
            continue
        t, q = tw
        for alpha in ALPHA_GRID:
            params = bnd.MonogamyParams(float(alpha), gamma, t, q)
            if not bnd.validate_params("monogamy", q_small, q_big, params).ok:
                continue
            rhs = bnd.thm1_lower_bound(q_small, q_big, params)
            slack = lhs ** alpha - rhs
            checks += 1
            min_thm = min(min_thm, slack)
            if slack < -1e-9:
                thm_viol.append({
                    "trial": i, "state": st.pure_state_to_json(psi),
                    "alpha": float(alpha), "gamma": gamma, "t": t, "q": q,
                    "q_ab": q_small, "q_ac": q_big,
                    "lhs": float(lhs ** alpha), "rhs": float(rhs),
                    "slack": float(slack)})
    violations = len(ckw_viol) + len(thm_viol)
    return {
        "suite": "monogamy", "seed": seed, "trials": trials,
        "bound_checks": checks, "violations": violations,
        "ckw_violations": len(ckw_viol), "thm1_violations": len(thm_viol),
        "min_ckw_slack": float(min_ckw), "min_thm1_slack": float(min_thm),
        "counterexamples": (ckw_viol + thm_viol)[:5],
        "ok": violations == 0,
    }


POLY_BETAS = (0.2, 0.5, 1.0)


def verify_polygamy(trials: int, seed: int, restarts: int = 16) -> dict:
    """Additive SCRENoA polygamy audit on Haar and W-class three-qubit
    states.  Pair values come from the max roof, which can only
    under-estimate, so a failure beyond the optimizer tolerance would be a
    genuine candidate violation."""
    root = np.random.SeedSequence(seed)
    tol = 2e-3
    viol, checks = [], 0
    min_slack = np.inf
    for i, child in enumerate(root.spawn(trials)):
        rng = np.random.Generator(np.random.PCG64(child))
        if i % 5 == 0:
            # W-class states sit at the additivity boundary at beta = 1
            c = np.abs(rng.standard_normal(3))
            c /= np.linalg.norm(c)
            psi = st.w_class_state(*c)
        else:
            psi = st.haar_random_from(rng, 3)
        rho = st.to_density(psi)
        lhs_base = msr.negativity_pure(psi, (0,)) ** 2
        cfg = RoofConfig(restarts=restarts, seed=int(child.generate_state(1)[0]))
        n_ab = msr.screnoa(st.reduce_pair(rho, 1), cfg)
        n_ac = msr.screnoa(st.reduce_pair(rho, 2), cfg)
        for beta in POLY_BETAS:
            slack = (bnd._pow(n_ab, beta) + bnd._pow(n_ac, beta)
                     - bnd._pow(lhs_base, beta))
            checks += 1
            min_slack = min(min_slack, slack)
            if slack < -tol:
                viol.append({
                    "trial": i, "state": st.pure_state_to_json(psi),
                    "beta": beta, "lhs": float(bnd._pow(lhs_base, beta)),
                    "n_ab": n_ab, "n_ac": n_ac, "slack": float(slack)})
    return {
        "suite": "polygamy", "seed": seed, "trials": trials,
        "checks": checks, "violations": len(viol),
        "min_slack": float(min_slack), "tolerance": tol,
        "counterexamples": viol[:5], "ok": not viol,
    }


def verify_roof_oracle(trials: int, seed: int, restarts: int = 32) -> dict:
    """Min-roof concurrence against the closed two-qubit formula on random
    rank-2 states (marginals of Haar three-qubit states)."""
    root = np.random.SeedSequence(seed)
    worst = 0.0
    viol = []
    for i, child in enumerate(root.spawn(trials)):
        rng = np.random.Generator(np.random.PCG64(child))
        psi = st.haar_random_from(rng, 3)
        rho = st.reduce_pair(st.to_density(psi), 1)
        exact = msr.concurrence_wootters(rho)
        cfg = RoofConfig(restarts=restarts, seed=int(child.generate_state(1)[0]))
        res = msr.convex_roof(rho, msr.concurrence_functional((0,)), "min", cfg)
        diff = abs(res.value - exact)
        worst = max(worst, diff)
        if diff > 1e-3:
            viol.append({"trial": i, "state": st.pure_state_to_json(psi),
                         "exact": exact, "roof": res.value, "diff": diff})
    return {
        "suite": "roof-oracle", "seed": seed, "trials": trials,
        "violations": len(viol), "max_abs_diff": worst,
        "tolerance": 1e-3, "counterexamples": viol[:5], "ok": not viol,
    }


def verify_chain(trials: int, seed: int, restarts: int = 8) -> dict:
    """Chained lower bound audit on Haar four-qubit pure states.

    Pairs use the closed two-qubit formula; the one mixed residual is a
    min-roof value (an upper estimate, used only inside the step
    hypotheses), and peel order puts the weakest pair first.
    """
    root = np.random.SeedSequence(seed)
    gamma = 2.0
    viol, skipped, checks = [], 0, 0
    min_slack = np.inf
    for i, child in enumerate(root.spawn(trials)):
        rng = np.random.Generator(np.random.PCG64(child))
        psi = st.haar_random_from(rng, 4)
        rho = st.to_density(psi)
        lhs = msr.concurrence_pure(psi, (0,))
        pair_vals = {j: msr.concurrence_wootters(st.reduce_pair(rho, j))
                     for j in (1, 2, 3)}
        order = sorted(pair_vals, key=pair_vals.get)
        pairs = [pair_vals[j] for j in order]
        keep = tuple(sorted((0, order[1], order[2])))
        marginal = partial_trace(rho, keep)
        cfg = RoofConfig(restarts=restarts, seed=int(child.generate_state(1)[0]))
        res = msr.convex_roof(marginal, msr.concurrence_functional((0,)), "min", cfg)
        residuals = [res.value, pairs[2]]
        ts, qs, admissible = [], [], True
        for pair, resid in zip(pairs[:2], residuals):
            tw = _sample_window(rng, pair, resid, gamma)
            if tw is None:
                admissible = False
                break
            ts.append(tw[0])
            qs.append(tw[1])
        if not admissible:
            skipped += 1
            continue
        cp = bnd.ChainParams(tuple(ts), tuple(qs))
        alpha = float(rng.choice([0.5, 1.0, 1.5, 2.0]))
        try:
            rhs = bnd.chain_monogamy_bound(pairs, residuals, cp, alpha, gamma)
        except bnd.PreconditionError:
            skipped += 1
            continue
        slack = lhs ** alpha - rhs
        checks += 1
        min_slack = min(min_slack, slack)
        if slack < -1e-6:
            viol.append({
                "trial": i, "state": st.pure_state_to_json(psi),
                "alpha": alpha, "ts": ts, "qs": qs, "pairs": pairs,
                "residuals": residuals, "lhs": float(lhs ** alpha),
                "rhs": float(rhs), "slack": float(slack)})
    return {
        "suite": "chain", "seed": seed, "trials": trials, "checks": checks,
        "skipped": skipped, "violations": len(viol),
        "min_slack": float(min_slack if checks else np.nan),
        "counterexamples": viol[:5], "ok": not viol,
    }


VERIFY_SUITES = {
    "lemma1": (verify_lemma1, 100000),
    "monogamy": (verify_monogamy, 500),
    "polygamy": (verify_polygamy, 40),
    "roof-oracle": (verify_roof_oracle, 50),
    "chain": (verify_chain, 25),
}


def cmd_verify(args) -> tuple[str, int]:
    fn, default_trials = VERIFY_SUITES[args.suite]
    trials = args.trials if args.trials is not None else default_trials
    if trials < 1:
        raise UsageError("trials must be >= 1")
    report = fn(trials, args.seed)
    text = (f"# seed={args.seed} generator={st.RNG_NAME} suite={args.suite}\n"
            + json.dumps(report, indent=2, sort_keys=True) + "\n")
    return text, 0 if report["ok"] else 1


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="entbounds",
        description="Quantum-correlation measures and monogamy/polygamy "
                    "bound verification on small qubit registers.")
    ap.add_argument("--seed", type=int, default=0, help="RNG seed (pcg64)")
    ap.add_argument("--out", default="-", help="output path, '-' for stdout")
    ap.add_argument("--roof-restarts", type=int, default=32,
                    help="restarts for convex-roof optimizations")
    # accept the global flags after the subcommand as well
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--out", default=argparse.SUPPRESS)
    common.add_argument("--roof-restarts", type=int, default=argparse.SUPPRESS)
    sub = ap.add_subparsers(dest="command", required=True)

    def add_state_args(p):
        p.add_argument("--state", help="JSON state file")
        p.add_argument("--builder",
                       help="schmidt:l0,l1,l2,l3,l4[,phase] or wclass:c1,c2,c3")
        p.add_argument("--keep", help="comma-separated subsystems to keep "
                                      "(partial trace applied first)")

    pm = sub.add_parser("measure", parents=[common],
                        help="evaluate one measure on a state")
    add_state_args(pm)
    pm.add_argument("--measure", required=True,
                    choices=["concurrence", "negativity", "scren", "screnoa",
                             "cren", "crenoa", "wootters"])
    pm.add_argument("--split", default=None, help="bipartition, e.g. A|BC or 0|12")

    pb = sub.add_parser("bound", parents=[common],
                        help="evaluate bound variants on a state")
    add_state_args(pb)
    pb.add_argument("--kind", required=True, choices=["monogamy", "polygamy"])
    pb.add_argument("--variants", default="thm1,ref29")
    pb.add_argument("--alpha", type=float)
    pb.add_argument("--gamma", type=float)
    pb.add_argument("--beta", type=float)
    pb.add_argument("--delta", type=float)
    pb.add_argument("--t", default="sqrt",
                    help="t value, or 'sqrt' for the geometric window midpoint")
    pb.add_argument("--q", default="edge",
                    help="q value, or 'edge'/'top' for the window edges")
    pb.add_argument("--k", type=float, help="ref16/ref28 dominance factor")
    pb.add_argument("--p", type=float, help="ref28 interpolation parameter")
    pb.add_argument("--a", type=float, help="ref29 dominance factor")

    pf = sub.add_parser("figure", parents=[common],
                        help="emit CSV data for one figure id")
    pf.add_argument("--id", type=int, required=True, choices=range(1, 7))
    pf.add_argument("--resolution", type=int, default=101)

    pv = sub.add_parser("verify", parents=[common],
                        help="run a randomized verification suite")
    pv.add_argument("--suite", required=True, choices=sorted(VERIFY_SUITES))
    pv.add_argument("--trials", type=int, default=None)

    ps = sub.add_parser("sweep", parents=[common],
                        help="parameter sweep on a state")
    add_state_args(ps)
    ps.add_argument("--kind", required=True, choices=["monogamy", "polygamy"])
    ps.add_argument("--axis", action="append", required=True,
                    help="name:start:stop:steps (repeatable, max 2)")
    ps.add_argument("--fix", action="append",
                    help="name=value; q accepts edge/top, t accepts sqrt")
    ps.add_argument("--variants", default="thm1,ref29")
    return ap


def main(argv=None) -> int:
    ap = make_parser()
    args = ap.parse_args(argv)
    try:
        if args.command == "measure":
            _write_text(json.dumps(cmd_measure(args), sort_keys=True) + "\n",
                        args.out)
            return 0
        if args.command == "bound":
            _write_text(json.dumps(cmd_bound(args), sort_keys=True) + "\n",
                        args.out)
            return 0
        if args.command == "figure":
            _write_text(cmd_figure(args), args.out)
            return 0
        if args.command == "sweep":
            _write_text(cmd_sweep(args), args.out)
            return 0
        if args.command == "verify":
            text, code = cmd_verify(args)
            _write_text(text, args.out)
            return code
    except (UsageError, bnd.BoundsError, st.StateError, LinalgError,
            msr.MeasureError, OSError, json.JSONDecodeError) as exc:
        print(f"entbounds: error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
