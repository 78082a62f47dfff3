"""
Core functionality for cotlab.
This module runs scenarios: it maps each check kind onto the algebra checkers,
runs independent checks in parallel and aggregates the outcomes into a report.
"""

import os
import time
import random
import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import psutil
from rich.console import Console
from rich.progress import Progress, SpinnerColumn, TextColumn, BarColumn, TimeElapsedColumn

from cotlab.config import get_config
from cotlab.algebra.common import CotlabError, PreconditionError
from cotlab.algebra.ring import Ring
from cotlab.algebra.modules import FPModule, ModuleMorphism, cokernel, kernel, realize_extension
from cotlab.algebra.bifunctors import MultiAdjunction, adjunction_from_spec, ext, ext1_space, hom_module, tensor
from cotlab.algebra.cotorsion import (
    ClassPair, ClassSpec, check_completeness, check_hereditary, check_thm_assumptions, enumerate_universe,
    full_report,
)
from cotlab.algebra.complexes import ChainComplex, is_contractible
from cotlab.algebra.products import (
    check_cot_main, check_exact_sums, check_hovey_gen, check_nsplit_duality, check_quillen_1var, check_split_1var,
    pushout_product, verify_coker_formula,
)
from cotlab.algebra.lemmas import random_maps, run_lemma
from cotlab.scenarios import CheckOutcome, CheckSpec, RunReport, Scenario, Status

# Setup logger
logger = logging.getLogger(__name__)
console = Console()

CheckResult = Tuple[bool, Dict[str, Any]]


@dataclass(frozen=True)
class CheckContext:
    """What a check handler sees of its scenario."""

    ring: Ring
    max_factors: int
    seed: int
    trials: Optional[int]
    base_dir: Optional[str]

    def ring_for(self, params: Mapping[str, Any]) -> Ring:
        return Ring(int(params["ring"])) if "ring" in params else self.ring

    def pair(self, spec: Mapping[str, Any], ring: Optional[Ring] = None) -> ClassPair:
        """A class pair from ``{"d": ..., "e": ..., "ring": ..., "max_factors": ...}``; (Flat, All) by default."""
        ring = Ring(int(spec["ring"])) if "ring" in spec else (ring or self.ring)
        u = enumerate_universe(ring, int(spec.get("max_factors", self.max_factors)))
        d = ClassSpec.from_json(spec.get("d", "flat"), ring, self.base_dir)
        e = ClassSpec.from_json(spec.get("e", "all"), ring, self.base_dir)
        return ClassPair(d, e, u)

    def functor(self, params: Mapping[str, Any], default: str = "tensor") -> MultiAdjunction:
        return adjunction_from_spec(params.get("functor", default), self.ring_for(params))


def _conditions_match(reports, expected: Mapping[str, bool]) -> bool:
    return all(reports[label].holds == bool(value) for label, value in expected.items())


# ---------------------------------------------------------------------------
# Cotorsion pairs
# ---------------------------------------------------------------------------

def run_pair(ctx: CheckContext, params: Mapping[str, Any]) -> CheckResult:
    pair = ctx.pair(params)
    report = full_report(pair.d, pair.e, pair.universe, ctx.seed)
    properties = params.get("properties", ["is_pair"])
    details = report.to_json()
    return all(details.get(p) is True for p in properties), details


def run_completeness(ctx: CheckContext, params: Mapping[str, Any]) -> CheckResult:
    pair = ctx.pair(params)
    result = check_completeness(pair.d, pair.e, pair.universe)
    details = {
        "pair": pair.describe(),
        "enough_injectives": result.enough_injectives,
        "enough_projectives": result.enough_projectives,
        "witnesses": [w.to_json() for w in result.witnesses],
    }
    return result.enough_injectives and result.enough_projectives, details


def run_hereditary(ctx: CheckContext, params: Mapping[str, Any]) -> CheckResult:
    pair = ctx.pair(params)
    result = check_hereditary(pair.d, pair.e, pair.universe, ctx.seed)
    details = {
        "pair": pair.describe(),
        "hereditary": result.hereditary,
        "resolving": result.resolving,
        "coresolving": result.coresolving,
        "consistent": result.consistent,
        "witnesses": [w.to_json() for w in result.witnesses],
    }
    return result.hereditary and result.resolving and result.coresolving and result.consistent, details


def run_assumptions(ctx: CheckContext, params: Mapping[str, Any]) -> CheckResult:
    pair = ctx.pair(params)
    report = check_thm_assumptions(pair.d, pair.e, pair.universe, ctx.seed, params.get("samples"))
    return report.holds, report.to_json()


def run_exact_sums(ctx: CheckContext, params: Mapping[str, Any]) -> CheckResult:
    pair = ctx.pair(params)
    count = int(params.get("count", 3))
    holds, witnesses = check_exact_sums(pair, ctx.seed, count)
    return holds, {"pair": pair.describe(), "max_summands": count, "witnesses": [w.to_json() for w in witnesses]}


# ---------------------------------------------------------------------------
# Split conditions and Quillen-type criteria
# ---------------------------------------------------------------------------

def _one_variable_pairs(ctx: CheckContext, ma: MultiAdjunction,
                        params: Mapping[str, Any]) -> Tuple[ClassPair, ClassPair]:
    source = ctx.pair(params.get("source", {}), ma.source_rings[0])
    target = ctx.pair(params.get("target", {}), ma.target_ring)
    return source, target


def _many_variable_pairs(ctx: CheckContext, ma: MultiAdjunction,
                         params: Mapping[str, Any]) -> Tuple[ClassPair, List[ClassPair]]:
    target = ctx.pair(params.get("target", {}), ma.target_ring)
    raw = params.get("sources")
    if raw is None:
        raw = [{} for _ in range(ma.arity)]
    if len(raw) != ma.arity:
        raise CotlabError(f"{ma.name} takes {ma.arity} source pairs, got {len(raw)}")
    sources = [ctx.pair(s, r) for s, r in zip(raw, ma.source_rings)]
    return target, sources


def run_split1(ctx: CheckContext, params: Mapping[str, Any]) -> CheckResult:
    ma = ctx.functor(params, "identity")
    source, target = _one_variable_pairs(ctx, ma, params)
    result = check_split_1var(ma, source, target, ctx.seed)
    details = result.to_json()
    mode = params.get("check", "holds")
    passed = result.equivalence_holds if mode == "equivalence" else result.holds
    if "conditions" in params:
        passed = passed and _conditions_match(result, params["conditions"])
    return bool(passed), details


def run_nsplit(ctx: CheckContext, params: Mapping[str, Any]) -> CheckResult:
    ma = ctx.functor(params, f"tensor:{params.get('arity', 2)}")
    target, sources = _many_variable_pairs(ctx, ma, params)
    report = check_nsplit_duality(ma, target, sources, ctx.seed)
    details = report.to_json()
    mode = params.get("check", "holds")
    if mode == "equivalence":
        if report.equivalence_holds is None:
            raise PreconditionError(f"not every class pair for {ma.name} is a cotorsion pair", details)
        passed = report.equivalence_holds
    elif mode == "left":
        passed = report.left_holds
    elif mode == "right":
        passed = report.right_holds
    else:
        passed = report.holds
    if "conditions" in params:
        passed = passed and _conditions_match(report, params["conditions"])
    return bool(passed), details


def _hovey_maps(sources: Sequence[ClassPair], rng: random.Random) -> List[ModuleMorphism]:
    """Monomorphisms with cokernel in each source class, drawn from realized extensions."""
    maps = []
    for pair in sources:
        members = pair.d.members(pair.universe)
        if not members:
            raise CotlabError(f"{pair.d.name} has no member in the universe over {pair.ring}")
        d = rng.choice(members)
        x = rng.choice(list(pair.universe.modules))
        maps.append(realize_extension(d, x, ext1_space(d, x).random_class(rng)).inj)
    return maps


def run_hovey(ctx: CheckContext, params: Mapping[str, Any]) -> CheckResult:
    """
    Pushout products of monomorphisms with cokernels in the source classes.

    ``maps`` gives one explicit tuple; otherwise ``count`` random tuples are
    drawn. ``monic`` pins the expected monicity of explicit maps.
    """
    ma = ctx.functor(params, f"tensor:{params.get('arity', 2)}")
    target, sources = _many_variable_pairs(ctx, ma, params)
    rng = random.Random(ctx.seed)
    if "maps" in params:
        tuples = [[ModuleMorphism.from_json(m) for m in params["maps"]]]
    else:
        tuples = [_hovey_maps(sources, rng) for _ in range(int(params.get("count", ctx.trials or 10)))]
    trials = []
    passed = True
    for fs in tuples:
        result = check_hovey_gen(ma, target, sources, fs, seed=ctx.seed)
        pp = pushout_product(ma, fs)
        entry = {
            "monic": result.monic,
            "coker_iso": result.coker_iso,
            "hypotheses_met": result.hypotheses_met,
            "kernel": list(kernel(pp).module.invariants),
            "cokernel": list(cokernel(pp).module.invariants),
        }
        trials.append(entry)
        ok = result.coker_iso and (result.monic or not result.hypotheses_met)
        if "monic" in params:
            ok = ok and result.monic == bool(params["monic"])
        passed = passed and ok
    return passed, {"functor": ma.name, "trials": trials}


def run_quillen(ctx: CheckContext, params: Mapping[str, Any]) -> CheckResult:
    ma = ctx.functor(params, "identity")
    source, target = _one_variable_pairs(ctx, ma, params)
    report = check_quillen_1var(ma, source, target, seed=ctx.seed)
    return report.holds, report.to_json()


def run_cotmain(ctx: CheckContext, params: Mapping[str, Any]) -> CheckResult:
    ma = ctx.functor(params, f"tensor:{params.get('arity', 2)}")
    target, sources = _many_variable_pairs(ctx, ma, params)
    report = check_cot_main(ma, target, sources, seed=ctx.seed)
    return report.holds, report.to_json()


# ---------------------------------------------------------------------------
# Lemmas, formulas and direct computations
# ---------------------------------------------------------------------------

def run_lemma_check(ctx: CheckContext, params: Mapping[str, Any]) -> CheckResult:
    trials = params.get("trials", ctx.trials)
    result = run_lemma(params["name"], ctx.ring_for(params), ctx.seed, trials, params.get("arity"))
    return result.holds, result.to_json()


def run_coker_formula(ctx: CheckContext, params: Mapping[str, Any]) -> CheckResult:
    ma = ctx.functor(params, f"tensor:{params.get('arity', 2)}")
    if "maps" in params:
        tuples = [[ModuleMorphism.from_json(m) for m in params["maps"]]]
    else:
        rng = random.Random(ctx.seed)
        u = enumerate_universe(ma.target_ring, int(params.get("max_factors", 1)))
        count = int(params.get("trials", ctx.trials or 10))
        tuples = [random_maps(u, rng, ma.arity) for _ in range(count)]
    failures = [i for i, fs in enumerate(tuples) if not verify_coker_formula(ma, fs)]
    return not failures, {"functor": ma.name, "trials": len(tuples), "failures": failures}


def run_contractible(ctx: CheckContext, params: Mapping[str, Any]) -> CheckResult:
    c = ChainComplex.from_json({"ring": ctx.ring_for(params).modulus, **params["complex"]})
    return is_contractible(c), {"complex": c.describe()}


def _module(ctx: CheckContext, params: Mapping[str, Any], key: str) -> FPModule:
    return FPModule.from_json({"ring": ctx.ring_for(params).modulus, **params[key]})


def run_compute(ctx: CheckContext, params: Mapping[str, Any]) -> CheckResult:
    """Compare ext/hom/tensor of two modules against expected invariants."""
    op = params.get("op", "ext")
    a, b = _module(ctx, params, "a"), _module(ctx, params, "b")
    if op == "ext":
        value = ext(int(params.get("k", 1)), a, b)
    elif op == "hom":
        value = hom_module(a, b)
    elif op == "tensor":
        value = tensor(a, b)
    else:
        raise CotlabError(f"unknown operation {op!r}")
    got = list(value.invariants)
    return got == [int(x) for x in params["invariants"]], {"op": op, "value": value.describe(), "invariants": got}


CHECKS: Dict[str, Callable[[CheckContext, Mapping[str, Any]], CheckResult]] = {
    "pair": run_pair,
    "completeness": run_completeness,
    "hereditary": run_hereditary,
    "assumptions": run_assumptions,
    "exact-sums": run_exact_sums,
    "split1": run_split1,
    "nsplit": run_nsplit,
    "hovey": run_hovey,
    "quillen": run_quillen,
    "cotmain": run_cotmain,
    "lemma": run_lemma_check,
    "coker-formula": run_coker_formula,
    "contractible": run_contractible,
    "compute": run_compute,
}


def _jsonable(value: Any) -> Any:
    if hasattr(value, "to_json"):
        return value.to_json()
    if isinstance(value, list):
        return [_jsonable(v) for v in value]
    return value


class SuiteRunner:
    """Runs the checks of one scenario and collects a RunReport."""

    def __init__(self, scenario: Scenario, workers: Optional[int] = None, show_progress: bool = False):
        """
        Initialize the runner.

        Args:
            scenario: The scenario to run
            workers: Thread pool size (defaults to the configured suite workers)
            show_progress: Whether to render a rich progress bar
        """
        self.scenario = scenario
        self.workers = workers or get_config().workers
        self.show_progress = show_progress
        self._lock = threading.Lock()
        self._outcomes: List[CheckOutcome] = []

    def context(self) -> CheckContext:
        s = self.scenario
        return CheckContext(Ring(s.ring), s.max_factors, s.seed, s.trials, s.base_dir)

    def run_check(self, check: CheckSpec) -> CheckOutcome:
        """Run one check; a refused precondition is an outcome, not an error."""
        handler = CHECKS.get(check.kind)
        if handler is None:
            return CheckOutcome(check.id, check.kind, Status.FAILED, check.expect,
                                error=f"unknown check kind {check.kind!r}")
        logger.debug(f"running check {check.id} ({check.kind})")
        try:
            passed, details = handler(self.context(), check.params)
        except PreconditionError as e:
            logger.info(f"check {check.id} refused: {e}")
            return CheckOutcome(check.id, check.kind, Status.REFUSED, check.expect,
                                {"precondition": _jsonable(e.report)}, str(e))
        except (CotlabError, ValueError, KeyError) as e:
            logger.error(f"check {check.id} raised: {e}")
            return CheckOutcome(check.id, check.kind, Status.FAILED, check.expect, error=f"{type(e).__name__}: {e}")
        status = Status.PASSED if passed else Status.FAILED
        outcome = CheckOutcome(check.id, check.kind, status, check.expect, details)
        if not outcome.as_expected:
            logger.warning(f"check {check.id}: {status.value}, expected {check.expect}")
        return outcome

    def _record(self, outcome: CheckOutcome) -> None:
        with self._lock:
            self._outcomes.append(outcome)

    def run(self) -> RunReport:
        """Run every check and return the report, outcomes ordered by check id."""
        config = get_config()
        suite = config.configs["suite"]
        previous = suite["thoroughness"]
        if self.scenario.thoroughness:
            suite["thoroughness"] = self.scenario.thoroughness
        process = psutil.Process(os.getpid())
        cpu_before = process.cpu_times()
        rss_peak = process.memory_info().rss
        start = time.perf_counter()
        self._outcomes = []
        checks = self.scenario.checks
        try:
            with ThreadPoolExecutor(max_workers=max(1, self.workers)) as pool:
                futures = [pool.submit(self.run_check, c) for c in checks]
                if self.show_progress and checks:
                    with Progress(
                        SpinnerColumn(),
                        TextColumn("[bold blue]{task.description}"),
                        BarColumn(),
                        TimeElapsedColumn(),
                        console=console,
                        transient=True,
                    ) as progress:
                        task = progress.add_task(f"Running {self.scenario.name}...", total=len(checks))
                        for future in futures:
                            self._record(future.result())
                            rss_peak = max(rss_peak, process.memory_info().rss)
                            progress.update(task, advance=1)
                else:
                    for future in futures:
                        self._record(future.result())
                        rss_peak = max(rss_peak, process.memory_info().rss)
        finally:
            suite["thoroughness"] = previous
        cpu_after = process.cpu_times()
        timing = {
            "wall_seconds": round(time.perf_counter() - start, 3),
            "cpu_seconds": round((cpu_after.user - cpu_before.user) + (cpu_after.system - cpu_before.system), 3),
            "peak_rss_mb": round(rss_peak / (1024 * 1024), 1),
        }
        report = RunReport(self.scenario.name, self.scenario.seed, self._outcomes, timing)
        logger.info(f"scenario {self.scenario.name}: ok={report.ok} counts={report.counts()}")
        return report


def run_suite(scenario: Scenario, workers: Optional[int] = None, show_progress: bool = False) -> RunReport:
    """Run a scenario; an empty check list gives an empty passing report."""
    return SuiteRunner(scenario, workers, show_progress).run()
