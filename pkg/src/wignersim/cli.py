"""Command-line front end.

Subcommands: simulate, contextuality, paradox, ncycle, verify, preset.
Reports are JSON (deterministic for fixed inputs and seed; timings only
appear with --timings) or a short text rendering.

Exit codes: 0 success, 1 property failure in verify, 2 schema error,
3 invariant violation, 4 engine disagreement, 5 internal verification
failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time

from . import __version__, tolerances
from .contextuality import (
    EngineDisagreement,
    is_logically_contextual,
    model_from_setup,
)
from .ncycle import (
    find_ps_free_paradox,
    is_extremal_vertex,
    max_omega,
    ncycle_from_empirical,
)
from .presets import compat_demo_setups, fr_setup, kcbs_setup, pr_box_model
from .reasoning import (
    VerificationError,
    check_deterministic_endpoints,
    find_paradox,
    has_directed_cycle,
    reference_graph,
)
from .serialize import (
    SchemaError,
    certificate_to_json,
    graph_to_dot,
    graph_to_json,
    model_from_json,
    model_to_json,
    ncycle_from_json,
    ncycle_to_json,
    prob_to_json,
    setup_from_json,
    setup_to_json,
)
from .wigner_setup import SettingVector, default_settings, simulate

EXIT_OK = 0
EXIT_PROPERTY = 1
EXIT_SCHEMA = 2
EXIT_INVARIANT = 3
EXIT_ENGINES = 4
EXIT_VERIFICATION = 5


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _digest(path: str) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(EXIT_SCHEMA, f"cannot read {path}: {exc}") from exc


def _report(args, command: str, inputs: dict[str, str], results: dict) -> dict:
    report = {
        "command": command,
        "version": __version__,
        "tolerance": tolerances.EPS_PROB,
        "inputs": inputs,
        "results": results,
    }
    if getattr(args, "timings", False):
        report["timings"] = {"wall_seconds": time.monotonic() - args._t0}
    return report


def _emit(args, report: dict) -> None:
    if args.format == "json":
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        _emit_text(report)


def _emit_text(report: dict, prefix: str = "") -> None:
    print(f"# {report['command']} (v{report['version']})")
    _print_tree(report["results"], "")


def _print_tree(value, indent: str) -> None:
    if isinstance(value, dict):
        for k, v in value.items():
            if isinstance(v, (dict, list)):
                print(f"{indent}{k}:")
                _print_tree(v, indent + "  ")
            else:
                print(f"{indent}{k}: {v}")
    elif isinstance(value, list):
        for v in value:
            if isinstance(v, (dict, list)):
                _print_tree(v, indent + "  ")
            else:
                print(f"{indent}- {v}")
    else:
        print(f"{indent}{value}")


def _event_json(e) -> dict:
    return {a: v for a, v in e}


# ---------------------------------------------------------------------------
# subcommands


def cmd_simulate(args) -> int:
    setup = _load_setup(args.setup)
    if args.settings is not None:
        bits = tuple(int(c) for c in args.settings)
        if len(bits) != len(setup.agents):
            raise CliError(
                EXIT_SCHEMA,
                f"--settings needs {len(setup.agents)} bits, got {len(bits)}",
            )
        settings = SettingVector(bits)
    else:
        mentioned = set(filter(None, (args.mention or "").split(",")))
        try:
            settings = default_settings(setup, mentioned)
        except KeyError as exc:
            raise CliError(EXIT_SCHEMA, str(exc)) from exc
    branches = simulate(setup, settings)
    rows = []
    for br in branches:
        row = {
            "outcomes": _event_json(br.outcomes),
            "probability": prob_to_json(br.probability),
        }
        if args.dump_states:
            row["state"] = [[float(z.real), float(z.imag)] for z in br.state]
        rows.append(row)
    results = {
        "settings": list(settings.bits),
        "agents": list(setup.agent_names),
        "branches": rows,
    }
    _emit(args, _report(args, "simulate", {args.setup: _digest(args.setup)}, results))
    return EXIT_OK


def _load_setup(path: str):
    doc = _load_json(path)
    try:
        return setup_from_json(doc)
    except SchemaError as exc:
        raise CliError(EXIT_SCHEMA, str(exc)) from exc
    except ValueError as exc:
        raise CliError(EXIT_INVARIANT, str(exc)) from exc


def _load_model_or_setup(path: str):
    doc = _load_json(path)
    try:
        if "agents" in doc:
            return model_from_setup(setup_from_json(doc))
        return model_from_json(doc)
    except SchemaError as exc:
        raise CliError(EXIT_SCHEMA, str(exc)) from exc
    except ValueError as exc:
        raise CliError(EXIT_INVARIANT, str(exc)) from exc


def cmd_contextuality(args) -> int:
    model = _load_model_or_setup(args.file)
    engine = "both" if args.oracle else "backtracking"
    try:
        verdict = is_logically_contextual(model, engine)
    except EngineDisagreement as exc:
        raise CliError(EXIT_ENGINES, str(exc)) from exc
    results = {
        "verdict": verdict.verdict,
        "failing_section": (
            _event_json(verdict.failing_section.values)
            if verdict.failing_section
            else None
        ),
        "global_section": (
            _event_json(verdict.global_section.values)
            if verdict.global_section
            else None
        ),
    }
    _emit(args, _report(args, "contextuality", {args.file: _digest(args.file)}, results))
    return EXIT_OK


def cmd_paradox(args) -> int:
    setup = _load_setup(args.setup)
    cert = find_paradox(setup, args.max_chain_length)
    if cert is None:
        results = {"certificate": None}
    else:
        graph = reference_graph(cert)
        if not check_deterministic_endpoints(cert):
            raise CliError(
                EXIT_VERIFICATION,
                f"certificate has deterministic postselection p = {cert.p_postselection}",
            )
        if not has_directed_cycle(graph):
            raise CliError(EXIT_VERIFICATION, "certificate reference graph is acyclic")
        results = {
            "certificate": certificate_to_json(cert),
            "reference_graph": graph_to_json(graph),
        }
        if args.dot:
            with open(args.dot, "w") as fh:
                fh.write(graph_to_dot(graph))
    _emit(args, _report(args, "paradox", {args.setup: _digest(args.setup)}, results))
    return EXIT_OK


def cmd_ncycle(args) -> int:
    doc = _load_json(args.model)
    try:
        if "edge_tables" in doc:
            model = ncycle_from_json(doc)
        else:
            model = ncycle_from_empirical(model_from_json(doc))
    except SchemaError as exc:
        raise CliError(EXIT_SCHEMA, str(exc)) from exc
    except ValueError as exc:
        raise CliError(EXIT_INVARIANT, str(exc)) from exc
    from .ncycle import expectation

    omega_max, gamma_max = max_omega(model)
    gamma = is_extremal_vertex(model)
    try:
        chains = find_ps_free_paradox(model)
    except RuntimeError as exc:
        raise CliError(EXIT_VERIFICATION, str(exc)) from exc
    results = {
        "n": model.n,
        "expectations": [expectation(model, i) for i in range(1, model.n + 1)],
        "max_omega": omega_max,
        "max_omega_gamma": list(gamma_max.signs),
        "extremal_vertex": list(gamma.signs) if gamma else None,
        "ps_free_chains": (
            [
                [
                    {
                        "antecedent": _event_json(s.antecedent),
                        "consequent": _event_json(s.consequent),
                    }
                    for s in chain
                ]
                for chain in chains
            ]
            if chains
            else None
        ),
    }
    _emit(args, _report(args, "ncycle", {args.model: _digest(args.model)}, results))
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import ALL_SUITES, DEFAULT_CASES

    names = list(ALL_SUITES) if args.suite == "all" else [args.suite]
    results = {}
    failed = False
    for name in names:
        cases = args.cases or DEFAULT_CASES[name]
        res = ALL_SUITES[name](seed=args.seed, cases=cases)
        results[name] = {
            "cases": res.cases,
            "checks": res.checks,
            "passed": res.passed,
            "failures": res.failures[:20],
        }
        failed = failed or not res.passed
    _emit(args, _report(args, "verify", {}, {"seed": args.seed, "suites": results}))
    return EXIT_PROPERTY if failed else EXIT_OK


_PRESETS = {
    "fr": lambda: setup_to_json(fr_setup()),
    "kcbs": lambda: setup_to_json(kcbs_setup()),
    "compat-a": lambda: setup_to_json(compat_demo_setups()[0]),
    "compat-b": lambda: setup_to_json(compat_demo_setups()[1]),
    "compat-b-bell": lambda: setup_to_json(compat_demo_setups(ursula_bell=True)[1]),
    "prbox": lambda: ncycle_to_json(pr_box_model()),
    "fr-model": lambda: model_to_json(model_from_setup(fr_setup())),
    "kcbs-model": lambda: model_to_json(model_from_setup(kcbs_setup())),
}


def cmd_preset(args) -> int:
    doc = _PRESETS[args.name]()
    text = json.dumps(doc, indent=2, sort_keys=True)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tolerance", type=float, default=1e-9,
                        help="numerical tolerance for all comparisons")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--timings", action="store_true",
                        help="include wall-clock timing in the report "
                        "(breaks byte-determinism)")
    parser = argparse.ArgumentParser(
        prog="wignersim",
        description="Multi-agent Wigner's-Friend setups: simulation, "
        "contextuality, paradox search, n-cycle analysis.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("simulate", parents=[common],
                       help="run a setup and list record branches")
    p.add_argument("setup")
    p.add_argument("--mention", help="comma-separated agents whose settings are 1")
    p.add_argument("--settings", help="explicit bit string, one bit per agent")
    p.add_argument("--dump-states", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("contextuality", parents=[common], help="contextuality verdict of a model or setup")
    p.add_argument("file")
    p.add_argument("--oracle", action="store_true",
                   help="cross-check the backtracking engine against exhaustive search")
    p.set_defaults(func=cmd_contextuality)

    p = sub.add_parser("paradox", parents=[common], help="search a setup for an inference-chain paradox")
    p.add_argument("setup")
    p.add_argument("--max-chain-length", type=int, default=None)
    p.add_argument("--dot", help="write the reference graph as DOT to this file")
    p.set_defaults(func=cmd_paradox)

    p = sub.add_parser("ncycle", parents=[common], help="n-cycle analysis of a model")
    p.add_argument("model", help="n-cycle JSON or empirical-model JSON")
    p.set_defaults(func=cmd_ncycle)

    p = sub.add_parser("verify", parents=[common], help="run a randomized theorem property suite")
    p.add_argument("suite", choices=("all",) + tuple(
        ("negation", "reduction", "symmetric", "endpoints", "yablo",
         "theorem1", "oracle", "ncycle")
    ))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cases", type=int, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("preset", parents=[common], help="write a bundled setup or model as JSON")
    p.add_argument("name", choices=sorted(_PRESETS))
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_preset)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    args._t0 = time.monotonic()
    if args.tolerance != 1e-9:
        tolerances.set_all(args.tolerance)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except VerificationError as exc:
        print(f"internal verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION
    except EngineDisagreement as exc:
        print(f"engine disagreement: {exc}", file=sys.stderr)
        return EXIT_ENGINES


if __name__ == "__main__":
    sys.exit(main())
