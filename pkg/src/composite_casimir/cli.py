"""Command-line front end.

    composite-casimir epsilon-sweep --scenario S --out eps.csv
    composite-casimir force-vs-L    --scenario S --out force.csv
    composite-casimir eta-vs-f      --scenario S --out eta.csv
    composite-casimir compare bruggeman wiener-upper --scenario S --out cmp.csv
    composite-casimir validate      --scenario S

Exit status: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import io
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .dielectric import DivergentAtZeroError, IncompleteSpectrumError
from .ingestion import ConfigError, Scenario, load_scenario
from .lifshitz import IDEAL, ForceResult, SlabSystem, force_per_area, validity_check
from .mixing import RULE_NAMES, MixingRule, SingularSpectralDomainError, UnphysicalInputError, effective_epsilon
from .numerics import QuadratureSpec, NumericsError

log = logging.getLogger("composite_casimir")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

NUMERIC_ERRORS = (
    NumericsError,
    UnphysicalInputError,
    SingularSpectralDomainError,
    IncompleteSpectrumError,
    DivergentAtZeroError,
)

_RULE_ORDER = RULE_NAMES + (IDEAL,)


def _ordered_rules(rules) -> list[str]:
    return sorted(set(rules), key=_RULE_ORDER.index)


def _fmt(x: float) -> str:
    return format(x, ".12g")


def _header(verb: str, scenario: Scenario, quad: QuadratureSpec) -> list[str]:
    lines = [
        f"# composite-casimir {__version__} {verb}",
        f"# scenario: {scenario.name} sha256:{scenario.digest}",
        f"# rel_tol: {quad.rel_tol!r}",
    ]
    lines += [f"# material {note}" for note in scenario.provenance]
    return lines


def _write_atomic(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".partial")
    try:
        tmp.write_text(text)
        os.replace(tmp, path)
    finally:
        if tmp.exists():
            tmp.unlink()


def _force_job(args: tuple[SlabSystem, QuadratureSpec]) -> ForceResult:
    system, quad = args
    return force_per_area(system, quad)


def _run_forces(systems: list[SlabSystem], quad: QuadratureSpec, jobs: int) -> list[ForceResult]:
    work = [(s, quad) for s in systems]
    if jobs <= 1 or len(work) < 2:
        return [_force_job(w) for w in work]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_force_job, work))


def _require_axis(scenario: Scenario, axis: str, verb: str) -> None:
    if scenario.sweep.axis != axis:
        raise ConfigError(scenario.source, "[sweep] axis", f"{verb} needs axis = {axis}, got {scenario.sweep.axis!r}")


def cmd_epsilon_sweep(scenario: Scenario, quad: QuadratureSpec, jobs: int) -> str:
    _require_axis(scenario, "f", "epsilon-sweep")
    if not scenario.zetas_eV:
        raise ConfigError(scenario.source, "[sweep] zeta_eV", "epsilon-sweep needs zeta values")
    if scenario.slab1.composite is None:
        raise ConfigError(scenario.source, "[slab1]", "epsilon-sweep needs a composite slab")
    rules = [r for r in _ordered_rules(scenario.rules) if r != IDEAL]
    spectral = scenario.text.get("spectral_default")
    base = scenario.slab1.rule if isinstance(scenario.slab1.rule, MixingRule) else None
    orientation = base.orientation if base is not None else "average"
    out = _header("epsilon-sweep", scenario, quad) + ["f,rule,zeta_eV,eps_eff"]
    for f in scenario.sweep.values:
        spec = scenario.composites_for(f)
        for name in rules:
            rule = MixingRule(name, spectral=spectral if name == "spectral" else None, orientation=orientation)
            for zeta in scenario.zetas_eV:
                out.append(f"{_fmt(f)},{name},{_fmt(zeta)},{_fmt(effective_epsilon(spec, rule, zeta))}")
    return "\n".join(out) + "\n"


def _forces_by_rule(scenario: Scenario, rules, quad, jobs) -> dict[str, list[ForceResult]]:
    systems, index = [], []
    for name in rules:
        for i, s in enumerate(scenario.systems_for(name)):
            systems.append(s)
            index.append((name, i))
    results = _run_forces(systems, quad, jobs)
    table: dict[str, list] = {name: [None] * len(scenario.sweep.values) for name in rules}
    for (name, i), res in zip(index, results):
        table[name][i] = res
    return table


def cmd_force_vs_separation(scenario: Scenario, quad: QuadratureSpec, jobs: int) -> str:
    _require_axis(scenario, "L", "force-vs-L")
    rules = _ordered_rules(scenario.rules)
    table = _forces_by_rule(scenario, rules, quad, jobs)
    out = _header("force-vs-L", scenario, quad)
    out.append("# quad_err is the absolute error estimate of eta")
    out.append("L_nm,rule,eta,F_Pa,quad_err,validity_ok")
    for i, L in enumerate(scenario.sweep.values):
        for name in rules:
            r = table[name][i]
            out.append(f"{_fmt(L)},{name},{_fmt(r.eta)},{_fmt(r.force_pa)},{_fmt(r.eta_error)},{str(r.validity_ok).lower()}")
    return "\n".join(out) + "\n"


def cmd_eta_vs_filling(scenario: Scenario, quad: QuadratureSpec, jobs: int) -> str:
    _require_axis(scenario, "f", "eta-vs-f")
    rules = _ordered_rules(scenario.rules)
    table = _forces_by_rule(scenario, rules, quad, jobs)
    out = _header("eta-vs-f", scenario, quad)
    out.append(f"# L_nm: {_fmt(scenario.separation_nm)}")
    out.append("f,rule,eta")
    for i, f in enumerate(scenario.sweep.values):
        for name in rules:
            out.append(f"{_fmt(f)},{name},{_fmt(table[name][i].eta)}")
    return "\n".join(out) + "\n"


def relative_difference(eta_a: float, eta_b: float) -> float:
    """|eta_b - eta_a| / |eta_a|, rule A being the reference."""
    if eta_a == eta_b:
        return 0.0
    return abs(eta_b - eta_a) / abs(eta_a)


def cmd_compare_rules(scenario: Scenario, rule_a: str, rule_b: str, quad: QuadratureSpec, jobs: int) -> tuple[str, str]:
    for r in (rule_a, rule_b):
        if r not in _RULE_ORDER:
            raise ConfigError("command line", "rule", f"unknown rule {r!r}; expected one of {_RULE_ORDER}")
    rules = [rule_a] if rule_a == rule_b else [rule_a, rule_b]
    table = _forces_by_rule(scenario, rules, quad, jobs)
    out = _header("compare", scenario, quad)
    out.append(f"# rule_a: {rule_a}  rule_b: {rule_b}  rel_diff = |eta_b - eta_a| / |eta_a|")
    out.append("L_nm,f,eta_a,eta_b,rel_diff")
    best = None
    for i, system in enumerate(scenario.systems_for(rule_a)):
        ea, eb = table[rule_a][i].eta, table[rule_b][i].eta
        d = relative_difference(ea, eb)
        f = system.slab1.composite.f if system.slab1.composite is not None else float("nan")
        out.append(f"{_fmt(system.separation_nm)},{_fmt(f)},{_fmt(ea)},{_fmt(eb)},{_fmt(d)}")
        if best is None or d > best[0]:
            best = (d, system.separation_nm, f)
    summary = f"max rel_diff {_fmt(best[0])} at L_nm={_fmt(best[1])}, f={_fmt(best[2])}"
    out.append(f"# summary: {summary}")
    return "\n".join(out) + "\n", summary


def cmd_validate(scenario: Scenario) -> str:
    buf = io.StringIO()
    print(f"scenario {scenario.name} ({scenario.source}) sha256:{scenario.digest}", file=buf)
    print(f"sweep: {scenario.sweep.axis} x {len(scenario.sweep.values)} points; rules: {', '.join(scenario.rules)}", file=buf)
    if scenario.sweep.axis == "L" or scenario.separation_nm is not None:
        systems = scenario.systems
        n_invalid = sum(1 for s in systems if not validity_check(s))
        print(f"systems: {len(systems)}; points violating 4*pi*L > a: {n_invalid}", file=buf)
    for note in scenario.provenance:
        print(f"material {note}", file=buf)
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="composite-casimir", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(p, out=True):
        p.add_argument("--scenario", required=True, type=Path)
        if out:
            p.add_argument("--out", required=True, type=Path)
        p.add_argument("--rel-tol", type=float, default=1e-5)
        p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
        p.add_argument("-v", "--verbose", action="store_true")

    common(sub.add_parser("epsilon-sweep", help="effective permittivity versus filling fraction"))
    common(sub.add_parser("force-vs-L", help="reduction factor and force versus separation"))
    common(sub.add_parser("eta-vs-f", help="reduction factor versus filling fraction"))
    cmp_ = sub.add_parser("compare", help="relative eta difference between two rules")
    cmp_.add_argument("rule_a")
    cmp_.add_argument("rule_b")
    common(cmp_)
    common(sub.add_parser("validate", help="load and check a scenario"), out=False)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        quad = QuadratureSpec(rel_tol=args.rel_tol)
        scenario = load_scenario(args.scenario)
        if args.verb == "validate":
            sys.stdout.write(cmd_validate(scenario))
            return EXIT_OK
        if args.verb == "epsilon-sweep":
            text = cmd_epsilon_sweep(scenario, quad, args.jobs)
        elif args.verb == "force-vs-L":
            text = cmd_force_vs_separation(scenario, quad, args.jobs)
        elif args.verb == "eta-vs-f":
            text = cmd_eta_vs_filling(scenario, quad, args.jobs)
        else:
            text, summary = cmd_compare_rules(scenario, args.rule_a, args.rule_b, quad, args.jobs)
            print(summary)
        _write_atomic(args.out, text)
        log.info("wrote %s", args.out)
        return EXIT_OK
    except NUMERIC_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
