"""Scenario runner: bracket tables, flows, quantum sweeps, lattice checks.

One JSON scenario per file, validated against a strict schema (unknown keys
rejected). Sampling is driven by numpy's seeded PCG64 generator so a fixed
(config, seed) pair reproduces every table bit for bit. Floats are printed
with 17 significant digits for round-trip exactness.

Exit codes: 0 success, 1 verification failure, 2 config error, 3 numerical
degeneracy.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

try:
    import jsonschema
except ImportError:  # pragma: no cover - declared dependency
    jsonschema = None

from .brackets import poisson_bracket
from .circle import (CircleState, SpectrumTable, evolve_time_dependent,
                     expect_cartesian, expect_phi, expect_phi_quadrature, expect_reduced)
from .constraints import ConstraintSet, dirac_bracket
from .dynamics import (DiracFlow, GaugeFlow, IntegratorConfig, NewtonProjection,
                       PoissonFlow, constraint_drift, evolve)
from .errors import (ConfigError, DegeneracyError, NumericDomainError,
                     UsageError)
from .fields import coordinate_field, polynomial_field
from .models import KlauderModel, KRamp, LatticeMaxwell, RadialPotential, RelativisticParticle
from .verify import available_suites, run_suite

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_DEGENERATE = 3

_POLY = {
    "type": "object",
    "properties": {"type": {"const": "poly"},
                   "coeffs": {"type": "array", "items": {"type": "number"}}},
    "required": ["type", "coeffs"],
    "additionalProperties": False,
}

_TERMS = {
    "type": "array",
    "items": {
        "type": "object",
        "properties": {"coeff": {"type": "number"},
                       "powers": {"type": "array", "items": {"type": "integer", "minimum": 0}}},
        "required": ["coeff", "powers"],
        "additionalProperties": False,
    },
}

_MODEL = {
    "type": "object",
    "properties": {
        "kind": {"enum": ["klauder", "particle", "maxwell", "custom"]},
        "alpha": {"type": "number", "exclusiveMinimum": 0},
        "k": {"oneOf": [{"type": "number"},
                        {"type": "array", "items": {"type": "number"},
                         "minItems": 2, "maxItems": 2}]},
        "hbar": {"type": "number", "exclusiveMinimum": 0},
        "potential": _POLY,
        "mass": {"type": "number", "exclusiveMinimum": 0},
        "spatial_dim": {"type": "integer", "minimum": 1},
        "side": {"type": "integer", "minimum": 2},
        "spacing": {"type": "number", "exclusiveMinimum": 0},
        "labels": {"type": "array", "items": {"type": "string"}},
        "constraints": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {"name": {"type": "string"}, "terms": _TERMS},
                "required": ["name", "terms"],
                "additionalProperties": False,
            },
        },
    },
    "required": ["kind"],
    "additionalProperties": False,
}

_INTEGRATOR = {
    "type": "object",
    "properties": {
        "dt": {"type": "number", "exclusiveMinimum": 0},
        "steps": {"type": "integer", "minimum": 0},
        "scheme": {"const": "rk4"},
        "projection": {
            "type": "object",
            "properties": {"tol": {"type": "number", "exclusiveMinimum": 0},
                           "max_iter": {"type": "integer", "minimum": 1}},
            "additionalProperties": False,
        },
    },
    "required": ["dt", "steps"],
    "additionalProperties": False,
}

_OUTPUT = {
    "type": "object",
    "properties": {"path": {"type": "string"}, "format": {"enum": ["csv", "json"]}},
    "additionalProperties": False,
}

SCENARIO_SCHEMA = {
    "type": "object",
    "properties": {
        "seed": {"type": "integer", "minimum": 0},
        "output": _OUTPUT,
        "model": _MODEL,
        "samples": {
            "type": "object",
            "properties": {"count": {"type": "integer", "minimum": 1},
                           "r_range": {"type": "array", "items": {"type": "number"},
                                       "minItems": 2, "maxItems": 2},
                           "momentum_range": {"type": "array", "items": {"type": "number"},
                                              "minItems": 2, "maxItems": 2}},
            "additionalProperties": False,
        },
        "flow": {
            "type": "object",
            "properties": {
                "kind": {"enum": ["poisson", "dirac", "gauge"]},
                "hamiltonian": _TERMS,
                "multiplier": {"oneOf": [{"type": "number"}, _POLY]},
            },
            "required": ["kind"],
            "additionalProperties": False,
        },
        "integrator": _INTEGRATOR,
        "initial": {
            "type": "object",
            "properties": {
                "coords": {"type": "array", "items": {"type": "number"}},
                "surface": {
                    "type": "object",
                    "properties": {"phi": {"type": "number"}, "p_phi": {"type": "number"}},
                    "required": ["p_phi"],
                    "additionalProperties": False,
                },
                "x": {"type": "array", "items": {"type": "number"}},
                "p": {"type": "array", "items": {"type": "number"}},
            },
            "additionalProperties": False,
        },
        "quantum": {
            "type": "object",
            "properties": {
                "m_max": {"type": "integer", "minimum": 1},
                "coeffs": {"type": "array",
                           "items": {"type": "array", "items": {"type": "number"},
                                     "minItems": 2, "maxItems": 2}},
                "single_mode": {"type": "integer"},
                "times": {"oneOf": [
                    {"type": "array", "items": {"type": "number"}},
                    {"type": "object",
                     "properties": {"start": {"type": "number"}, "stop": {"type": "number"},
                                    "count": {"type": "integer", "minimum": 1}},
                     "required": ["start", "stop", "count"],
                     "additionalProperties": False},
                ]},
                "time_dependent": {"type": "boolean"},
                "quadrature_steps": {"type": "integer", "minimum": 2},
            },
            "required": ["times"],
            "additionalProperties": False,
        },
        "maxwell": {
            "type": "object",
            "properties": {
                "initial": {"enum": ["lowest_mode", "random"]},
                "e_scale": {"type": "number", "minimum": 0},
            },
            "additionalProperties": False,
        },
    },
    "additionalProperties": False,
}


def load_config(path: str) -> dict:
    try:
        with open(path) as handle:
            config = json.load(handle)
    except OSError as err:
        raise ConfigError(f"cannot read config {path!r}: {err}") from err
    except json.JSONDecodeError as err:
        raise ConfigError(f"malformed JSON in {path!r}: {err}") from err
    try:
        jsonschema.validate(config, SCENARIO_SCHEMA)
    except jsonschema.ValidationError as err:
        location = "/".join(str(p) for p in err.absolute_path) or "<root>"
        raise ConfigError(f"invalid config at {location}: {err.message}") from err
    return config


def build_model(config: dict):
    block = config.get("model")
    if block is None:
        raise ConfigError("scenario needs a 'model' block")
    kind = block["kind"]
    if kind == "klauder":
        k = block.get("k", 1.0)
        if isinstance(k, list):
            k = KRamp(k[0], k[1])
        coeffs = block.get("potential", {}).get("coeffs", [])
        return KlauderModel(alpha=block.get("alpha", 1.0), k=k,
                            hbar=block.get("hbar", 1.0),
                            potential=RadialPotential(tuple(coeffs)))
    if kind == "particle":
        return RelativisticParticle(mass=block.get("mass", 1.0),
                                    spatial_dim=block.get("spatial_dim", 3))
    if kind == "maxwell":
        return LatticeMaxwell(side=block.get("side", 2), spacing=block.get("spacing", 1.0))
    if kind == "custom":
        labels = block.get("labels")
        if not labels:
            raise ConfigError("custom model needs 'labels'")
        from .phase import ChartSpec

        chart = ChartSpec(labels=tuple(labels), name="custom")
        constraints = []
        names = []
        for entry in block.get("constraints", []):
            terms = [(t["coeff"], t["powers"]) for t in entry["terms"]]
            constraints.append(polynomial_field(chart, terms, name=entry["name"]))
            names.append(entry["name"])
        return chart, ConstraintSet(chart, tuple(constraints), tuple(names))
    raise ConfigError(f"unknown model kind {kind!r}")


# --------------------------------------------------------------------------
# artifact writing


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def write_table(path: str, fmt: str, columns: list[str], rows: list[list],
                footer_rows: list[list] | None = None):
    out = Path(path)
    if out.parent != Path(""):
        out.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        with open(out, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(columns)
            for row in rows:
                writer.writerow([_fmt(v) for v in row])
            for row in footer_rows or []:
                writer.writerow([_fmt(v) for v in row])
    else:
        payload = {"columns": columns,
                   "rows": [[v if not isinstance(v, float) else float(_fmt(v)) for v in row]
                            for row in rows]}
        if footer_rows:
            payload["footer"] = [[_fmt(v) for v in row] for row in footer_rows]
        with open(out, "w") as handle:
            json.dump(payload, handle, indent=1)
            handle.write("\n")


def _resolve_output(config, args, default_name):
    block = config.get("output", {})
    path = args.out or block.get("path") or default_name
    fmt = args.format or block.get("format") or "csv"
    return path, fmt


# --------------------------------------------------------------------------
# subcommands


def cmd_brackets(config: dict, args) -> int:
    rng = np.random.default_rng(args.seed if args.seed is not None else config.get("seed", 0))
    model = build_model(config)
    samples_cfg = config.get("samples", {})
    count = samples_cfg.get("count", 100)
    columns = ["pair"]
    rows = []
    if isinstance(model, KlauderModel):
        chart = model.polar_chart
        columns += list(chart.labels) + ["poisson", "dirac", "oracle", "abs_diff"]
        coords = {l: coordinate_field(chart, l) for l in chart.labels}
        pairs = [("r", "p_r"), ("r", "p_phi"), ("r", "phi"),
                 ("phi", "p_r"), ("phi", "p_phi"), ("p_r", "p_phi")]
        points = model.sample_points(
            rng, count,
            r_range=tuple(samples_cfg.get("r_range", (0.1, 5.0))),
            other_range=tuple(samples_cfg.get("momentum_range", (-5.0, 5.0))))
        for x in points:
            for a, b in pairs:
                pb = poisson_bracket(coords[a], coords[b], x)
                db = dirac_bracket(coords[a], coords[b], model.constraint_set, x)
                oracle = model.dirac_oracle((a, b), x)
                rows.append([f"{{{a},{b}}}", *x.coords, pb, db, oracle, abs(db - oracle)])
    elif isinstance(model, RelativisticParticle):
        chart = model.full_chart
        columns += list(chart.labels) + ["poisson", "dirac", "oracle", "abs_diff"]
        d = model.spatial_dim
        coords = {l: coordinate_field(chart, l) for l in chart.labels}
        pairs = [(f"x{i}", f"p{j}") for i in range(d + 1) for j in range(d + 1)]
        for x in model.sample_on_shell(rng, count):
            cs = model.constraint_set(tau=x["x0"])
            for a, b in pairs:
                pb = poisson_bracket(coords[a], coords[b], x)
                db = dirac_bracket(coords[a], coords[b], cs, x)
                oracle = _particle_oracle(model, (a, b), x)
                rows.append([f"{{{a},{b}}}", *x.coords, pb, db, oracle, abs(db - oracle)])
    elif isinstance(model, tuple):  # custom chart
        chart, cs = model
        columns += list(chart.labels) + ["poisson", "dirac", "oracle", "abs_diff"]
        coords = [coordinate_field(chart, l) for l in chart.labels]
        for _ in range(count):
            x = chart.point(rng.uniform(-3.0, 3.0, chart.dim))
            for i in range(chart.dim):
                for j in range(i + 1, chart.dim):
                    pb = poisson_bracket(coords[i], coords[j], x)
                    db = dirac_bracket(coords[i], coords[j], cs, x)
                    oracle = pb if len(cs) == 0 else ""
                    diff = abs(db - pb) if len(cs) == 0 else ""
                    rows.append([f"{{{chart.labels[i]},{chart.labels[j]}}}",
                                 *x.coords, pb, db, oracle, diff])
    else:
        raise ConfigError("bracket tables support klauder, particle and custom models; "
                          "use the 'maxwell' subcommand for lattice matrices")
    path, fmt = _resolve_output(config, args, "brackets.csv")
    write_table(path, fmt, columns, rows)
    print(f"wrote {len(rows)} bracket rows to {path}")
    return EXIT_OK


def _particle_oracle(model: RelativisticParticle, pair, x) -> float:
    """Closed-form on-shell Dirac brackets: time is frozen, spatial pairs canonical."""
    a, b = pair
    if a == "x0":
        return 0.0
    if b == "p0":  # {x^i, p_0}_D = p_i / p_0
        return x[f"p{a[1:]}"] / x["p0"]
    return 1.0 if a[1:] == b[1:] else 0.0


def _build_integrator(config: dict) -> IntegratorConfig:
    block = config.get("integrator")
    if block is None:
        raise ConfigError("scenario needs an 'integrator' block")
    projection = None
    if "projection" in block:
        projection = NewtonProjection(**block["projection"])
    return IntegratorConfig(dt=block["dt"], steps=block["steps"],
                            scheme=block.get("scheme", "rk4"), projection=projection)


def _initial_point(config, model, chart):
    block = config.get("initial", {})
    if "coords" in block:
        return chart.point(block["coords"])
    if "surface" in block and isinstance(model, KlauderModel):
        surf = block["surface"]
        return model.embed_reduced(surf.get("phi", 0.0), surf["p_phi"])
    if "x" in block and isinstance(model, RelativisticParticle):
        return chart.point(list(block["x"]) + list(block["p"]))
    raise ConfigError("scenario needs an 'initial' block matching the model")


def cmd_evolve(config: dict, args) -> int:
    model = build_model(config)
    flow_cfg = config.get("flow")
    if flow_cfg is None:
        raise ConfigError("scenario needs a 'flow' block")
    kind = flow_cfg["kind"]
    monitor = None

    if isinstance(model, KlauderModel):
        if kind == "gauge":
            chart = model.cartesian_chart
            mult = flow_cfg.get("multiplier", 1.0)
            if isinstance(mult, dict):
                coeffs = tuple(mult["coeffs"])
                mult = RadialPotential(coeffs)  # reuse the Horner polynomial, now in t
            flow = GaugeFlow(model.cartesian_generator, mult)
            monitor = ConstraintSet(chart, (model.cartesian_generator,), ("C",))
        else:
            chart = model.polar_chart
            h = model.hamiltonian()
            if kind == "dirac":
                flow = DiracFlow(h, model.constraint_set)
            else:
                flow = PoissonFlow(h)
                monitor = model.constraint_set
    elif isinstance(model, RelativisticParticle):
        if kind != "poisson":
            raise ConfigError("particle scenarios evolve under the physical Hamiltonian "
                              "(flow kind 'poisson')")
        chart = model.spatial_chart
        flow = PoissonFlow(model.physical_hamiltonian)
    elif isinstance(model, tuple):
        chart, cs = model
        terms = flow_cfg.get("hamiltonian")
        if terms is None:
            raise ConfigError("custom flows need a polynomial 'hamiltonian'")
        h = polynomial_field(chart, [(t["coeff"], t["powers"]) for t in terms], name="H")
        if kind == "dirac":
            flow = DiracFlow(h, cs)
        elif kind == "gauge":
            flow = GaugeFlow(h, flow_cfg.get("multiplier", 1.0))
            monitor = cs if len(cs) else None
        else:
            flow = PoissonFlow(h)
            monitor = cs if len(cs) else None
    else:
        raise ConfigError("use the 'maxwell' subcommand for lattice evolution")

    cfg = _build_integrator(config)
    x0 = _initial_point(config, model, chart)
    path, fmt = _resolve_output(config, args, "trajectory.csv")

    try:
        traj = evolve(x0, flow, cfg, monitor=monitor)
    except DegeneracyError as err:
        if err.partial_trajectory is not None:
            _write_trajectory(path, fmt, err.partial_trajectory)
            print(f"degeneracy hit; wrote {len(err.partial_trajectory)} good steps to {path}",
                  file=sys.stderr)
        raise
    _write_trajectory(path, fmt, traj)
    print(f"wrote {len(traj)} trajectory rows to {path}")
    return EXIT_OK


def _write_trajectory(path, fmt, traj):
    res_names = list(traj.residuals.keys())
    columns = ["t", *traj.chart.labels, *[f"res_{n}" for n in res_names], "H"]
    rows = []
    for i in range(len(traj)):
        row = [float(traj.times[i]), *map(float, traj.states[i])]
        row += [float(traj.residuals[n][i]) for n in res_names]
        row.append(float(traj.generator_values[i]) if traj.generator_values is not None else "")
        rows.append(row)
    footer = []
    drift = constraint_drift(traj)
    for name, stats in drift.items():
        footer.append(["drift", name, stats.max_residual, stats.growth_rate])
    write_table(path, fmt, columns, rows, footer)


def cmd_quantum(config: dict, args) -> int:
    model = build_model(config)
    if not isinstance(model, KlauderModel):
        raise ConfigError("quantum scenarios use the klauder model")
    block = config.get("quantum")
    if block is None:
        raise ConfigError("scenario needs a 'quantum' block")
    m_max = block.get("m_max", 64)
    if "coeffs" in block:
        raw = block["coeffs"]
        if len(raw) != 2 * m_max + 1:
            raise ConfigError(f"need {2 * m_max + 1} coefficients for m_max={m_max}")
        coeffs = np.array([complex(re, im) for re, im in raw])
        if not np.any(coeffs):
            raise ConfigError("all-zero initial coefficients")
        state = CircleState(coeffs, model.hbar).normalized()
    elif "single_mode" in block:
        state = CircleState.single_mode(block["single_mode"], m_max, model.hbar)
    else:
        raise ConfigError("quantum block needs 'coeffs' or 'single_mode'")

    times = block["times"]
    if isinstance(times, dict):
        times = np.linspace(times["start"], times["stop"], times["count"])
    else:
        times = np.asarray(times, dtype=float)
    time_dependent = block.get("time_dependent", False)
    quad_steps = block.get("quadrature_steps", 2048)
    if time_dependent and not isinstance(model.k, KRamp):
        raise ConfigError("time-dependent evolution needs a ramped k: \"k\": [k0, k1]")

    columns = ["t", "r_mean", "pr_mean", "pphi_mean", "phi_mean_analytic",
               "phi_mean_quadrature", "re_xy", "im_xy", "re_pxy", "im_pxy", "norm"]
    rows = []
    for t in times:
        t = float(t)
        if time_dependent:
            evolved = evolve_time_dependent(state, model, 0.0, t, quad_steps) if t else state
            table_t = SpectrumTable.build(model, m_max, t=t)
            phi_t = 0.0  # phases already folded into the state
        else:
            evolved = state
            table_t = SpectrumTable.build(model, m_max)
            phi_t = t
        reduced = expect_reduced(evolved, table_t)
        phi_mean = expect_phi(evolved, table_t, phi_t)
        quad = expect_phi_quadrature(evolved, table_t, phi_t, nodes=4096)
        cart = expect_cartesian(evolved, table_t, phi_t)
        rows.append([t, reduced.r_mean, reduced.pr_mean, reduced.pphi_mean,
                     phi_mean.value, quad, cart.xy.real, cart.xy.imag,
                     cart.pxy.real, cart.pxy.imag, evolved.norm_squared()])
    path, fmt = _resolve_output(config, args, "quantum.csv")
    write_table(path, fmt, columns, rows)
    print(f"wrote {len(rows)} expectation rows to {path}")
    return EXIT_OK


def cmd_maxwell(config: dict, args) -> int:
    model = build_model(config)
    if not isinstance(model, LatticeMaxwell):
        raise ConfigError("the maxwell subcommand needs \"model\": {\"kind\": \"maxwell\", ...}")
    rng = np.random.default_rng(args.seed if args.seed is not None else config.get("seed", 0))
    block = config.get("maxwell", {})

    p = model.transverse_projector()
    matrices = model.dirac_bracket_matrices()
    checks = [
        ["check", "projector_idempotency", float(np.max(np.abs(p @ p - p))), ""],
        ["check", "projector_symmetry", float(np.max(np.abs(p - p.T))), ""],
        ["check", "projector_trace_deviation",
         abs(float(np.trace(p)) - (2 * model.sites + 1)), ""],
        ["check", "dirac_vs_projector", float(np.max(np.abs(matrices["ae"] - p))), ""],
        ["check", "dirac_aa_max", float(np.max(np.abs(matrices["aa"]))), ""],
        ["check", "dirac_ee_max", float(np.max(np.abs(matrices["ee"]))), ""],
    ]

    if block.get("initial", "lowest_mode") == "lowest_mode":
        a0, _ = model.lowest_standing_mode()
    else:
        a0 = model.random_transverse(rng)
    e0 = model.random_transverse(rng, block.get("e_scale", 0.0)) \
        if block.get("e_scale", 0.0) else np.zeros_like(a0)
    cfg = _build_integrator(config)
    traj = model.evolve(a0, e0, cfg)
    n = model.n_components
    columns = ["t", "energy", "gauss_residual", "transverse_residual"]
    rows = [[float(traj.times[i]),
             model.energy(traj.states[i, :n], traj.states[i, n:]),
             float(traj.residuals["gauss"][i]), float(traj.residuals["transverse"][i])]
            for i in range(len(traj))]
    path, fmt = _resolve_output(config, args, "maxwell.csv")
    write_table(path, fmt, columns, rows, checks)
    print(f"wrote {len(rows)} evolution rows and {len(checks)} checks to {path}")
    return EXIT_OK


def cmd_verify(args) -> int:
    results = run_suite(args.suite, seed=args.seed if args.seed is not None else 20250810,
                        inject_fault=args.inject_fault)
    for result in results:
        print(result.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_VERIFY_FAILED if failed else EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diracmech",
        description="Constrained-Hamiltonian scenario runner: bracket tables, "
                    "classification, flows, quantum evolution, invariant verification.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, needs_config=True):
        if needs_config:
            p.add_argument("--config", required=True, help="scenario JSON file")
        p.add_argument("--out", help="output artifact path (overrides config)")
        p.add_argument("--seed", type=int, help="64-bit seed for PCG64 sampling")
        p.add_argument("--format", choices=["csv", "json"], help="artifact format")

    add_common(sub.add_parser("brackets", help="Poisson/Dirac bracket tables vs oracles"))
    add_common(sub.add_parser("evolve", help="integrate a flow and record residuals"))
    add_common(sub.add_parser("quantum", help="expectation-value sweep on the circle"))
    add_common(sub.add_parser("maxwell", help="lattice projector checks and wave evolution"))

    verify = sub.add_parser("verify", help="run the invariant suites")
    verify.add_argument("suite", nargs="?", default="all", choices=available_suites())
    verify.add_argument("--seed", type=int, help="seed for the check sampler")
    verify.add_argument("--inject-fault", metavar="CHECK_ID",
                        help="negative control: shift the named check's oracle so it fails")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            return cmd_verify(args)
        config = load_config(args.config)
        if args.command == "brackets":
            return cmd_brackets(config, args)
        if args.command == "evolve":
            return cmd_evolve(config, args)
        if args.command == "quantum":
            return cmd_quantum(config, args)
        if args.command == "maxwell":
            return cmd_maxwell(config, args)
        raise ConfigError(f"unknown command {args.command!r}")
    except NumericDomainError as err:  # includes DegeneracyError
        print(f"error: {err}", file=sys.stderr)
        return EXIT_DEGENERATE
    except UsageError as err:  # includes ConfigError
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
