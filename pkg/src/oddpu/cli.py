"""Batch command-line interface: JSON in, JSON/CSV out.

Commands: ``spectrum`` (polynomial tables and identity report),
``structure`` (Poisson matrix as JSON), ``simulate`` (exact trajectory as
CSV), ``deform`` (RK4 trajectory of a deformed system as CSV), ``verify``
(full property suite).

Exit codes: 0 pass, 1 verification failure, 2 bad input, 3 degenerate
structure requested where nondegeneracy is needed.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import canonical, deformation, dynamics, poisson, verify
from .dynamics import PhaseState
from .poisson import DegeneracyError, GammaWeights
from .spectrum import (FrequencySpectrum, complete_homog, elementary_sigma,
                       reduced_sigma, rho, verify_identities)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_BAD_INPUT = 2
EXIT_DEGENERATE = 3


def _fmt(v) -> str:
    """Shortest round-trip float formatting; deterministic."""
    return repr(float(v))


def _write(text: str, out_path):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(obj, out_path):
    _write(json.dumps(obj, indent=2) + "\n", out_path)


def _emit_csv(header, rows, out_path):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    _write("\n".join(lines) + "\n", out_path)


def _merged_config(args) -> dict:
    """File config (if any) with flag values layered on top."""
    cfg = {}
    if args.config:
        with open(args.config) as fh:
            loaded = json.load(fh)
        if not isinstance(loaded, dict):
            raise ValueError("config file must hold a JSON object")
        cfg.update(loaded)
    for key in ("omegas", "gamma", "state", "t_end", "dt", "potential",
                "seed", "n_max", "trials"):
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    return cfg


def _require(cfg, key):
    if key not in cfg or cfg[key] is None:
        raise ValueError("missing required input: %s" % key)
    return cfg[key]


def _spectrum_from(cfg) -> FrequencySpectrum:
    return FrequencySpectrum(tuple(float(w) for w in _require(cfg, "omegas")))


def _gamma_from(cfg, spec) -> GammaWeights:
    g = GammaWeights.from_flat([float(v) for v in cfg["gamma"]])
    if g.n != spec.n:
        raise ValueError("gamma needs %d values for n=%d" % (2 * spec.n, spec.n))
    return g


def _state_from(cfg, spec) -> PhaseState:
    u = np.array([float(v) for v in _require(cfg, "state")])
    if u.size != spec.jet_dim:
        raise ValueError("state needs %d entries for n=%d" % (spec.jet_dim, spec.n))
    return PhaseState(u)


def _grid_from(cfg) -> np.ndarray:
    t_end = float(_require(cfg, "t_end"))
    dt = float(_require(cfg, "dt"))
    if t_end <= 0 or dt <= 0:
        raise ValueError("t_end and dt must be positive")
    steps = int(np.floor(t_end / dt + 1e-9))
    return np.arange(steps + 1) * dt


def cmd_spectrum(cfg, out_path) -> int:
    spec = _spectrum_from(cfg)
    n = spec.n
    report = verify_identities(spec)
    payload = {
        "n": n,
        "omegas": list(spec.omegas),
        "sorted_on_input": not spec.was_sorted,
        "sigma": [elementary_sigma(spec, k) for k in range(n + 1)],
        "sigma_reduced": [[reduced_sigma(spec, m, k) for k in range(n)]
                          for m in range(n)],
        "rho": [rho(spec, k) for k in range(n)],
        "P": {str(k): complete_homog(spec, k) for k in range(-n + 1, 7)},
        "identities": report.to_json_dict(),
    }
    _emit_json(payload, out_path)
    return EXIT_OK if report.all_passed else EXIT_FAIL


def cmd_structure(cfg, out_path) -> int:
    spec = _spectrum_from(cfg)
    if cfg.get("gamma") is not None:
        S = poisson.alt_structure(spec, _gamma_from(cfg, spec))
    else:
        S = poisson.dirac_structure(spec)
    payload = S.to_json_dict()
    payload["provenance"] = S.provenance
    payload["rank"] = S.rank()
    payload["degenerate"] = S.is_degenerate()
    _emit_json(payload, out_path)
    return EXIT_OK


def _state_header(n) -> list:
    cols = ["t", "x1", "x2"]
    for s in range(1, 2 * n + 1):
        cols += ["d%d_x1" % s, "d%d_x2" % s]
    return cols


def cmd_simulate(cfg, out_path) -> int:
    spec = _spectrum_from(cfg)
    state = _state_from(cfg, spec)
    grid = _grid_from(cfg)
    observables = [("H", canonical.energy_observable(spec))]
    gamma = None
    if cfg.get("gamma") is not None:
        gamma = _gamma_from(cfg, spec)
        observables.append(("Hcal", canonical.alt_hamiltonian_observable(spec, gamma)))
    observables += [("J_%d_%d" % ki, obs) for ki, obs in canonical.mode_integrals(spec)]
    flow = dynamics.modal_flow(spec, state)
    table = dynamics.trajectory(flow, state, grid, observables)
    header = _state_header(spec.n) + list(table.observable_names)
    rows = [np.concatenate(([t], u, v)) for t, u, v in
            zip(table.times, table.states, table.observable_values)]
    _emit_csv(header, rows, out_path)
    return EXIT_OK


def cmd_deform(cfg, out_path) -> int:
    spec = _spectrum_from(cfg)
    _require(cfg, "gamma")
    gamma = _gamma_from(cfg, spec)
    if poisson.gamma_is_degenerate(spec, gamma):
        raise DegeneracyError("degenerate structure: deformation needs |s| > 0")
    state = _state_from(cfg, spec)
    grid = _grid_from(cfg)
    dt = float(cfg["dt"])
    pot_cfg = cfg.get("potential")
    hcal = canonical.alt_hamiltonian_observable(spec, gamma)
    if pot_cfg is not None:
        potential = deformation.PotentialSpec.from_json_dict(pot_cfg)
        field, v1, v2 = deformation.deformed_field(spec, gamma, potential)
        total = deformation.deformed_energy(spec, gamma, potential, v1, v2)

        def u_value(u):
            return potential.value(float(v1 @ u), float(v2 @ u))
    else:
        omega_a = poisson.alt_structure(spec, gamma).omega

        def field(_t, u):
            return omega_a @ (hcal.A @ u)

        def total(u):
            return hcal.value(u)

        def u_value(_u):
            return 0.0
    flow = dynamics.rk4_flow(field, dt)
    table = dynamics.trajectory(flow, state, grid, [])
    header = _state_header(spec.n) + ["Hcal", "U", "Htot"]
    rows = []
    for t, u in zip(table.times, table.states):
        rows.append(np.concatenate(([t], u, [hcal.value(u), u_value(u), total(u)])))
    _emit_csv(header, rows, out_path)
    return EXIT_OK


def cmd_verify(cfg, out_path) -> int:
    n_max = int(cfg.get("n_max", 6))
    trials = int(cfg.get("trials", 20))
    seed = int(cfg.get("seed", 42))
    if n_max < 1 or trials < 1:
        raise ValueError("n_max and trials must be >= 1")
    summary = verify.run_all(n_max=n_max, trials=trials, seed=seed)
    _emit_json(summary, out_path)
    return EXIT_OK if summary["pass"] else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oddpu",
        description="Odd-order Pais-Uhlenbeck oscillator: construct, verify, "
                    "simulate, deform.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (
            ("spectrum", "symmetric-polynomial tables and identity report (JSON)"),
            ("structure", "Poisson structure matrix (JSON)"),
            ("simulate", "exact trajectory with conserved columns (CSV)"),
            ("deform", "RK4 trajectory of a deformed system (CSV)"),
            ("verify", "run the full property suite (JSON summary)")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--config", help="JSON config file; flags override it")
        p.add_argument("--omegas", type=float, nargs="+", help="frequencies")
        p.add_argument("--gamma", type=float, nargs="+",
                       help="2n weights: g01 g02 g11 g12 ...")
        p.add_argument("--state", type=float, nargs="+",
                       help="initial jet vector (4n+2 entries)")
        p.add_argument("--t-end", dest="t_end", type=float)
        p.add_argument("--dt", type=float)
        p.add_argument("--potential", type=json.loads,
                       help='JSON: {"degree":d,"coeffs":[{"i":..,"j":..,"value":..}]}')
        p.add_argument("--seed", type=int)
        p.add_argument("--n-max", dest="n_max", type=int)
        p.add_argument("--trials", type=int)
        p.add_argument("--out", help="output path (default stdout)")
    return parser


COMMANDS = {
    "spectrum": cmd_spectrum,
    "structure": cmd_structure,
    "simulate": cmd_simulate,
    "deform": cmd_deform,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _merged_config(args)
        return COMMANDS[args.command](cfg, args.out)
    except DegeneracyError as exc:
        print("error: degenerate structure: %s" % exc, file=sys.stderr)
        return EXIT_DEGENERATE
    except (ValueError, KeyError, TypeError, OSError, json.JSONDecodeError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
