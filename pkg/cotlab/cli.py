"""
Command-line interface for cotlab.
This module provides the main entry point for the application.
"""

import os
import sys
import json
import logging
from typing import Any, Callable, Dict, List

import click
from rich.console import Console
from rich.markup import escape
from rich.panel import Panel
from rich.table import Table

from cotlab import __version__
from cotlab.config import LabConfig, get_config, set_config
from cotlab.algebra.common import ScenarioError
from cotlab.algebra.ring import Matrix, Ring, howell_form, smith_form, solve_linear
from cotlab.algebra.modules import FPModule, ModuleMorphism, cokernel, kernel
from cotlab.algebra.bifunctors import ext, hom_module, tensor
from cotlab.algebra.cotorsion import ClassSpec, baer_injective, enumerate_universe, is_projective
from cotlab.algebra.complexes import ChainComplex, homology
from cotlab.algebra.lemmas import LEMMAS
from cotlab.core import CHECKS, run_suite
from cotlab.generators import KINDS, gen_random
from cotlab.scenarios import CheckSpec, RunReport, Scenario, Status, bundled_scenarios, load_scenario

# Setup console and logger
console = Console()
logger = logging.getLogger(__name__)

STATUS_STYLE = {Status.PASSED: "green", Status.FAILED: "red", Status.REFUSED: "yellow"}


def setup_logging(verbose: bool = False, stream=None):
    """Set up logging configuration."""
    level = logging.DEBUG if verbose else logging.INFO
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[
            logging.StreamHandler(stream or sys.stdout)
        ]
    )


def _read_arg(text: str) -> str:
    """``@path`` reads the argument from a file."""
    if text.startswith("@"):
        with open(text[1:], "r", encoding="utf-8") as f:
            return f.read()
    return text


def parse_module(text: str, ring: Ring) -> FPModule:
    """A module from JSON, or from comma-separated invariant factors ('0' is the zero module)."""
    text = _read_arg(text).strip()
    if text.startswith("{"):
        return FPModule.from_json({"ring": ring.modulus, **json.loads(text)})
    if text in ("", "0"):
        return FPModule.zero(ring)
    return FPModule.from_invariants(ring, [int(x) for x in text.split(",")])


def parse_matrix(text: str, ring: Ring) -> Matrix:
    rows = json.loads(_read_arg(text))
    return Matrix.from_rows(ring, rows, len(rows[0]) if rows else 0)


def emit(data: Dict[str, Any], render: Callable[[], None]):
    """Write JSON (to --out or stdout) or render text with rich."""
    opts = click.get_current_context().obj
    payload = json.dumps(data, indent=2, ensure_ascii=False)
    if opts["out"]:
        with open(opts["out"], "w", encoding="utf-8") as f:
            f.write(payload + "\n")
    if opts["format"] == "json":
        if not opts["out"]:
            click.echo(payload)
    else:
        render()


def _rows_table(title: str, rows: List[List[int]]) -> Table:
    table = Table(title=title, show_header=False)
    for _ in range(max((len(r) for r in rows), default=0)):
        table.add_column(justify="right", style="green")
    for r in rows:
        table.add_row(*(str(x) for x in r))
    return table


def _value_table(title: str, values: Dict[str, Any]) -> Table:
    table = Table(title=title)
    table.add_column("Property", style="cyan")
    table.add_column("Value", style="green")
    for key, value in values.items():
        table.add_row(key, str(value))
    return table


def display_report(report: RunReport):
    """Render a run report as a rich table plus a summary panel."""
    table = Table(title=f"Scenario {report.scenario} (seed {report.seed})")
    table.add_column("Check", style="cyan")
    table.add_column("Kind")
    table.add_column("Status")
    table.add_column("Expected")
    table.add_column("Note")
    for o in report.outcomes:
        style = STATUS_STYLE[o.status]
        mark = "" if o.as_expected else " [bold red](unexpected)[/]"
        table.add_row(o.id, o.kind, f"[{style}]{o.status.value}[/]{mark}", o.expect, o.error or "")
    console.print(table)
    counts = report.counts()
    timing = report.timing
    console.print(Panel.fit(
        f"[green]{counts['passed']} passed[/], [red]{counts['failed']} failed[/], "
        f"[yellow]{counts['refused']} refused[/]\n"
        f"wall {timing.get('wall_seconds', 0)}s, cpu {timing.get('cpu_seconds', 0)}s, "
        f"peak RSS {timing.get('peak_rss_mb', 0)} MB",
        title="[bold green]OK[/]" if report.ok else "[bold red]NOT OK[/]",
        border_style="green" if report.ok else "red",
    ))


def finish(report: RunReport):
    emit(report.to_json(), lambda: display_report(report))
    sys.exit(report.exit_code())


def run_single(kind: str, params: Dict[str, Any], ring: int, max_factors: int = 2):
    """Run one check through the suite runner so exit codes match ``run``."""
    opts = click.get_current_context().obj
    scenario = Scenario(f"{kind}-check", ring, opts["seed"] or 0, max_factors, opts["trials"],
                        checks=[CheckSpec(kind, kind, params)], base_dir=os.getcwd())
    finish(run_suite(scenario, workers=1))


@click.group()
@click.version_option(__version__, prog_name="cotlab")
@click.option('--verbose', '-v', is_flag=True, help="Enable verbose logging")
@click.option('--format', 'fmt', type=click.Choice(["text", "json"]), default="text", help="Output format")
@click.option('--seed', type=int, default=None, help="Random seed for sampled checks (default 0, or the scenario's)")
@click.option('--trials', type=int, default=None, help="Trial count for sampled checks")
@click.option('--out', type=click.Path(dir_okay=False), default=None, help="Also write the JSON result here")
@click.option('--config', 'config_file', type=click.Path(exists=True, dir_okay=False), default=None,
              help="JSON configuration overrides")
@click.option('--thoroughness', type=click.Choice(["quick", "standard", "exhaustive"]), default=None,
              help="Trial budget level")
@click.pass_context
def cli(ctx, verbose, fmt, seed, trials, out, config_file, thoroughness):
    """Exact module theory over Z/nZ: cotorsion pairs, pushout products and their checks."""
    # JSON goes to stdout, so logs move to stderr
    setup_logging(verbose, sys.stderr if fmt == "json" else None)
    if config_file:
        set_config(LabConfig(config_file))
    if thoroughness:
        get_config().configs["suite"]["thoroughness"] = thoroughness
    ctx.obj = {"format": fmt, "seed": seed, "trials": trials, "out": out}


# ---------------------------------------------------------------------------
# compute
# ---------------------------------------------------------------------------

@cli.group()
@click.option('--ring', '-n', type=int, default=4, show_default=True, help="Modulus n of Z/nZ")
@click.pass_context
def compute(ctx, ring):
    """Single computations: normal forms, linear systems, Ext/Hom/tensor, kernels."""
    ctx.obj["ring"] = Ring(ring)


@compute.command()
@click.argument("matrix")
@click.pass_obj
def snf(obj, matrix):
    """Smith form of MATRIX (JSON rows)."""
    m = parse_matrix(matrix, obj["ring"])
    result = smith_form(m)
    diag = [int(d) for d in result.diag]
    emit({"diag": diag, "L": result.L.to_rows(), "R": result.R.to_rows()},
         lambda: console.print(_value_table(f"Smith form over {obj['ring']}", {"diagonal": diag})))


@compute.command()
@click.argument("matrix")
@click.pass_obj
def howell(obj, matrix):
    """Howell normal form of MATRIX (JSON rows)."""
    h, _ = howell_form(parse_matrix(matrix, obj["ring"]))
    emit({"howell": h.to_rows()}, lambda: console.print(_rows_table(f"Howell form over {obj['ring']}", h.to_rows())))


@compute.command()
@click.argument("a")
@click.argument("b")
@click.pass_obj
def solve(obj, a, b):
    """Solve A x = B over Z/nZ."""
    result = solve_linear(parse_matrix(a, obj["ring"]), parse_matrix(b, obj["ring"]))
    data = {
        "solvable": result.solvable,
        "solution": result.solution.to_rows() if result.solvable else None,
        "kernel": result.kernel.to_rows(),
    }

    def render():
        if result.solvable:
            console.print(_rows_table("Particular solution", data["solution"]))
        else:
            console.print("[yellow]No solution[/]")
        console.print(_rows_table("Kernel generators (columns)", data["kernel"]))

    emit(data, render)


def _module_result(op: str, value: FPModule):
    emit({"op": op, "invariants": list(value.invariants), "module": value.to_json()},
         lambda: console.print(_value_table(op, {"module": value.describe(), "cardinality": value.cardinality})))


@compute.command("ext")
@click.argument("a")
@click.argument("b")
@click.option('--degree', '-k', type=int, default=1, show_default=True)
@click.pass_obj
def ext_cmd(obj, a, b, degree):
    """Ext^k(A, B); modules as invariant lists like 2,4 or JSON."""
    ring = obj["ring"]
    _module_result(f"Ext^{degree}", ext(degree, parse_module(a, ring), parse_module(b, ring)))


@compute.command("hom")
@click.argument("a")
@click.argument("b")
@click.pass_obj
def hom_cmd(obj, a, b):
    """Hom(A, B) as a module."""
    ring = obj["ring"]
    _module_result("Hom", hom_module(parse_module(a, ring), parse_module(b, ring)))


@compute.command("tensor")
@click.argument("a")
@click.argument("b")
@click.pass_obj
def tensor_cmd(obj, a, b):
    """A ⊗ B."""
    ring = obj["ring"]
    _module_result("Tensor", tensor(parse_module(a, ring), parse_module(b, ring)))


def _morphism(ring: Ring, source: str, target: str, matrix: str) -> ModuleMorphism:
    src, tgt = parse_module(source, ring), parse_module(target, ring)
    rows = json.loads(_read_arg(matrix))
    return ModuleMorphism(src, tgt, Matrix.from_rows(ring, rows, tgt.generators))


@compute.command("kernel")
@click.argument("matrix")
@click.option('--source', required=True, help="Source module")
@click.option('--target', required=True, help="Target module")
@click.pass_obj
def kernel_cmd(obj, matrix, source, target):
    """Kernel of the morphism SOURCE -> TARGET given by MATRIX (row convention)."""
    sub = kernel(_morphism(obj["ring"], source, target, matrix))
    _module_result("Kernel", sub.module)


@compute.command("cokernel")
@click.argument("matrix")
@click.option('--source', required=True, help="Source module")
@click.option('--target', required=True, help="Target module")
@click.pass_obj
def cokernel_cmd(obj, matrix, source, target):
    """Cokernel of the morphism SOURCE -> TARGET given by MATRIX."""
    quo = cokernel(_morphism(obj["ring"], source, target, matrix))
    _module_result("Cokernel", quo.module)


@compute.command("homology")
@click.argument("complex_json")
@click.option('--degree', '-k', type=int, default=0, show_default=True)
@click.pass_obj
def homology_cmd(obj, complex_json, degree):
    """H^k of a complex given as JSON (or @file)."""
    c = ChainComplex.from_json({"ring": obj["ring"].modulus, **json.loads(_read_arg(complex_json))})
    _module_result(f"H^{degree}", homology(c, degree).homology)


# ---------------------------------------------------------------------------
# enumerate
# ---------------------------------------------------------------------------

@cli.command("enumerate")
@click.option('--ring', '-n', type=int, default=4, show_default=True)
@click.option('--max-factors', '-k', type=int, default=2, show_default=True)
@click.pass_obj
def enumerate_cmd(obj, ring, max_factors):
    """List the universe of modules over Z/nZ with at most k invariant factors."""
    r = Ring(ring)
    u = enumerate_universe(r, max_factors)
    flat = ClassSpec.of("flat", r)
    rows = [{
        "invariants": list(m.invariants),
        "cardinality": m.cardinality,
        "projective": is_projective(m),
        "injective": baer_injective(m),
        "flat": flat.contains(m),
    } for m in u.modules]

    def render():
        table = Table(title=f"Universe over {r} (max_factors={max_factors}, {len(u)} modules)")
        table.add_column("Module", style="cyan")
        table.add_column("Order", justify="right")
        table.add_column("Projective", style="green")
        table.add_column("Injective", style="green")
        table.add_column("Flat", style="green")
        for m, row in zip(u.modules, rows):
            table.add_row(m.describe(), str(row["cardinality"]), *("yes" if row[k] else "no"
                                                                   for k in ("projective", "injective", "flat")))
        console.print(table)

    emit({"universe": u.parameters(), "modules": rows}, render)


@cli.command()
@click.argument("kind", type=click.Choice(KINDS))
@click.option('--ring', '-n', type=int, default=4, show_default=True)
@click.option('--max-factors', '-k', type=int, default=2, show_default=True)
@click.option('--class', 'cls', default=None, help="Cokernel class (ses) or entry class (complex)")
@click.option('--length', type=int, default=3, show_default=True, help="Number of modules in a complex")
@click.option('--exact', is_flag=True, help="Generate an exact (spliced) complex")
@click.pass_obj
def generate(obj, kind, ring, max_factors, cls, length, exact):
    """Draw a seeded random module, morphism, short exact sequence or complex."""
    seed = obj["seed"] or 0
    params = {"ring": ring, "max_factors": max_factors, "length": length, "exact": exact}
    if cls:
        params["class"] = cls
    value = gen_random(kind, params, seed)
    text = value.describe() if hasattr(value, "describe") else repr(value)
    emit({"kind": kind, "seed": seed, "value": value.to_json()},
         lambda: console.print(Panel.fit(text, title=f"[bold]random {kind}[/] (seed {seed})")))


# ---------------------------------------------------------------------------
# check / verify / run
# ---------------------------------------------------------------------------

@cli.group()
def check():
    """Cotorsion pair, split-condition and Quillen-type checks."""


@check.command("pair")
@click.option('--ring', '-n', type=int, default=4, show_default=True)
@click.option('--max-factors', '-k', type=int, default=2, show_default=True)
@click.option('--d', 'd', default="flat", show_default=True, help="Left class")
@click.option('--e', 'e', default="all", show_default=True, help="Right class")
@click.option('--property', 'properties', multiple=True, default=("is_pair",),
              help="Report flags that must be true (is_pair, complete, hereditary, ...)")
def check_pair(ring, max_factors, d, e, properties):
    """Is (D, E) a cotorsion pair on the universe, and with which properties."""
    run_single("pair", {"d": d, "e": e, "properties": list(properties)}, ring, max_factors)


def _split_params(functor, source, target, mode) -> Dict[str, Any]:
    return {
        "functor": functor,
        "source": {"d": source[0], "e": source[1]},
        "target": {"d": target[0], "e": target[1]},
        "check": mode,
    }


@check.command("split1")
@click.option('--ring', '-n', type=int, default=4, show_default=True)
@click.option('--functor', '-f', default="identity", show_default=True,
              help="identity, fixedtensor:<order> or basechange:<m>:<n>")
@click.option('--source', nargs=2, default=("flat", "all"), help="Source pair D E")
@click.option('--target', nargs=2, default=("flat", "all"), help="Target pair D' E'")
@click.option('--equivalence', is_flag=True, help="Check that (1a)(1b) and (2a)(2b) agree instead")
def check_split1(ring, functor, source, target, equivalence):
    """The one-variable split conditions 1a, 1b, 2a, 2b."""
    run_single("split1", _split_params(functor, source, target, "equivalence" if equivalence else "holds"), ring)


@check.command("quillen")
@click.option('--ring', '-n', type=int, default=4, show_default=True)
@click.option('--functor', '-f', default="identity", show_default=True)
@click.option('--source', nargs=2, default=("flat", "all"), help="Source pair D E")
@click.option('--target', nargs=2, default=("flat", "all"), help="Target pair D' E'")
def check_quillen(ring, functor, source, target):
    """The lift of a one-variable adjunction to complexes."""
    run_single("quillen", _split_params(functor, source, target, "holds"), ring)


def _many_params(functor, target, sources, mode) -> Dict[str, Any]:
    params: Dict[str, Any] = {"functor": functor, "target": {"d": target[0], "e": target[1]}, "check": mode}
    if sources:
        params["sources"] = [{"d": d, "e": e} for d, e in sources]
    return params


@check.command("nsplit")
@click.option('--ring', '-n', type=int, default=4, show_default=True)
@click.option('--functor', '-f', default="tensor:2", show_default=True)
@click.option('--target', nargs=2, default=("flat", "all"), help="Target pair D E")
@click.option('--source', 'sources', nargs=2, multiple=True, help="Source pair D E, once per slot")
@click.option('--mode', type=click.Choice(["holds", "equivalence", "left", "right"]), default="holds",
              show_default=True)
def check_nsplit(ring, functor, target, sources, mode):
    """The n-variable split conditions (0a_k), (0b) and their duals."""
    run_single("nsplit", _many_params(functor, target, sources, mode), ring)


@check.command("cotmain")
@click.option('--ring', '-n', type=int, default=4, show_default=True)
@click.option('--functor', '-f', default="tensor:2", show_default=True)
@click.option('--target', nargs=2, default=("flat", "all"), help="Target pair D E")
@click.option('--source', 'sources', nargs=2, multiple=True, help="Source pair D E, once per slot")
def check_cotmain(ring, functor, target, sources):
    """The lift of an n-variable adjunction to complexes."""
    run_single("cotmain", _many_params(functor, target, sources, "holds"), ring)


@cli.group()
def verify():
    """Named lemma batteries."""


@verify.command("lemma")
@click.argument("name", type=click.Choice(sorted(LEMMAS)))
@click.option('--ring', '-n', type=int, default=4, show_default=True)
@click.option('--arity', type=int, default=None, help="Cube dimension for the cube lemmas")
def verify_lemma(name, ring, arity):
    """Run one lemma on seeded random instances."""
    params: Dict[str, Any] = {"name": name}
    if arity is not None:
        params["arity"] = arity
    run_single("lemma", params, ring)


@cli.command()
@click.argument("scenario")
@click.option('--workers', '-w', type=int, default=None, help="Parallel checks")
@click.pass_obj
def run(obj, scenario, workers):
    """Run a scenario file or a bundled scenario by name."""
    try:
        loaded = load_scenario(scenario)
    except ScenarioError as e:
        console.print(f"[bold red]Scenario error: {escape(str(e))}[/]")
        sys.exit(1)
    if obj["seed"] is not None:
        loaded.seed = obj["seed"]
    if obj["trials"]:
        loaded.trials = obj["trials"]
    report = run_suite(loaded, workers, show_progress=obj["format"] == "text")
    finish(report)


@cli.command()
def scenarios():
    """List bundled scenarios."""
    names = bundled_scenarios()
    entries = []
    for name in names:
        s = load_scenario(name)
        entries.append({"name": name, "ring": s.ring, "checks": len(s.checks), "description": s.description})

    def render():
        table = Table(title="Bundled scenarios")
        table.add_column("Name", style="cyan")
        table.add_column("Ring", justify="right")
        table.add_column("Checks", justify="right")
        table.add_column("Description", style="green")
        for e in entries:
            table.add_row(e["name"], f"Z/{e['ring']}", str(e["checks"]), e["description"])
        console.print(table)

    emit({"scenarios": entries, "check_kinds": sorted(CHECKS)}, render)


def main():
    """Main entry point."""
    try:
        cli()
    except Exception as e:
        console.print(f"[bold red]Error: {escape(str(e))}[/]")
        if logging.getLogger().level == logging.DEBUG:
            import traceback
            console.print(traceback.format_exc())
        sys.exit(1)


if __name__ == "__main__":
    main()
