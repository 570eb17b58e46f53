"""Command Line Interface and Verification Reports for Preproj-Verify"""

import argparse
import json
import logging
import os
import random
import sys
import time
from contextlib import contextmanager
from dataclasses import dataclass, field as dataclass_field
from typing import Callable, Dict, List, Optional

import networkx as nx

from enums import Construction, DynkinFamily, GradingKind, Orientation
from errors import HeightError, InputError, NotDynkinError, PreprojError
from MeshWindow import mesh_presentation, sigma_violations, verify_covering_iso
from ModuleHomology import all_paths, lambda_te, omega
from PathSpace import (CheckResult, GradedDimTable, Path, PathElement, StopPolicy, compare_tables,
                       dims, graded_quotient)
from PreprojConstants import *
from PreprojectiveRelations import QAssignment, lambda_co, multiply, standard_relations
from PreprojLoader import ProgressLoader
from QuiverModel import (Quiver, classify, double, export_dot, format_quiver, generate_quiver,
                         height_function, load_quiver, positive_roots)
from ScalarField import ScalarField
from ScalingEquivalence import check_ideal_transport, solve_scaling, verify_scaling

FAULTS = ('relation', 'table')


# ========================================
# REPORTS
# ========================================

@dataclass
class RunReport:
    """
    Everything one run produced. The header holds the quiver text and the
    options, so the report is enough to repeat the run.
    """
    command: str
    header: Dict[str, object]
    tables: Dict[str, GradedDimTable] = dataclass_field(default_factory=dict)
    checks: List[CheckResult] = dataclass_field(default_factory=list)
    data: Dict[str, object] = dataclass_field(default_factory=dict)
    timings: Dict[str, float] = dataclass_field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def exit_code(self) -> int:
        return EXIT_OK if self.passed else EXIT_CHECK_FAILED

    def add(self, check: CheckResult):
        self.checks.append(check)
        log = logging.info if check.passed else logging.warning
        log("  %s %s", PASS_MARK if check.passed else FAIL_MARK, check.name)

    def to_json_dict(self) -> dict:
        result = {
            "command": self.command,
            "input": self.header,
            "tables": {name: table.to_json_dict() for name, table in self.tables.items()},
            "checks": [check.to_json_dict() for check in self.checks],
            "data": self.data,
            "passed": self.passed,
        }
        if self.timings:
            result["timings"] = self.timings
        return result

    @classmethod
    def from_json_dict(cls, data: dict) -> 'RunReport':
        report = cls(
            data["command"],
            data["input"],
            {name: GradedDimTable.from_json_dict(t) for name, t in data.get("tables", {}).items()},
            [CheckResult(c["name"], c["passed"], c.get("detail", "")) for c in data.get("checks", [])],
            data.get("data", {}),
            data.get("timings", {}),
        )
        if "passed" in data and data["passed"] != report.passed:
            raise InputError("report 'passed' flag disagrees with its checks")
        return report

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True)


class Stages:
    """Stage bookkeeping for a run: optional timings and an optional spinner."""

    def __init__(self, report: RunReport, timings: bool = False, progress: bool = False,
                 total: int = 1):
        self.report = report
        self.timings = timings
        self.total = max(total, 1)
        self.done = 0
        self.loader = ProgressLoader() if progress else None
        if self.loader:
            self.loader.start()

    @contextmanager
    def step(self, name: str):
        if self.loader:
            self.loader.update_progress(int(100 * self.done / self.total), name)
        started = time.perf_counter()
        yield
        if self.timings:
            self.report.timings[name] = round(time.perf_counter() - started, 6)
        self.done += 1
        logging.debug("  Finished stage %s", name)

    def close(self):
        if self.loader:
            self.loader.stop(f"{self.done} stage(s) complete")


# ========================================
# INPUT
# ========================================

def quiver_from_args(args) -> Quiver:
    """Load --quiver FILE or generate from --type/--rank/--orientation."""
    if args.quiver and args.type:
        raise InputError("give either --quiver or --type/--rank, not both")
    if args.quiver:
        try:
            return load_quiver(args.quiver)
        except OSError as error:
            raise InputError(f"cannot read quiver file: {error}") from None
    if not args.type:
        raise InputError("no quiver given: use --quiver FILE or --type X --rank N")
    if args.rank is None:
        raise InputError("--type needs --rank")
    return generate_quiver(args.type, args.rank, args.orientation)


def parse_constructions(text: str) -> List[Construction]:
    if text.strip() == 'all':
        return list(Construction)
    chosen = []
    for item in text.split(','):
        try:
            construction = Construction(item.strip())
        except ValueError:
            raise InputError(f"unknown construction '{item.strip()}' (use co, ho, te or all)") from None
        if construction not in chosen:
            chosen.append(construction)
    return chosen


def make_header(args, quiver: Quiver, field: ScalarField, **options) -> Dict[str, object]:
    header = {"quiver": format_quiver(quiver), "field": field.name, "seed": args.seed}
    header.update({key: value for key, value in options.items() if value is not None})
    return header


def stop_policy(max_degree: Optional[int]) -> StopPolicy:
    return StopPolicy.auto() if max_degree is None else StopPolicy.bounded(max_degree)


# ========================================
# COMMANDS
# ========================================

def cmd_dims(args) -> RunReport:
    """Dimension tables for the requested constructions, compared entrywise."""
    q = quiver_from_args(args)
    field = ScalarField.parse(args.field)
    constructions = parse_constructions(args.construction)
    qa = None
    if args.q:
        if constructions != [Construction.CO]:
            raise InputError("--q only applies to --construction co")
        qa = QAssignment.parse(args.q, q, field, args.q_default_one)
        qa.require_nonzero()

    report = RunReport("dims", make_header(args, q, field,
                                           construction=','.join(c.value for c in constructions),
                                           max_degree=args.max_degree,
                                           q=qa.to_text() if qa else None))
    stages = Stages(report, args.timings, args.progress, len(constructions))
    try:
        for construction in constructions:
            with stages.step(construction.value):
                if construction is Construction.CO:
                    _, table = lambda_co(q, qa, field, stop_policy(args.max_degree))
                elif construction is Construction.HO:
                    table = mesh_presentation(q, args.max_degree, field)[2]
                else:
                    table = lambda_te(q, args.max_degree, field)
            report.tables[construction.value] = table
    finally:
        stages.close()

    names = list(report.tables)
    for other in names[1:]:
        report.add(compare_tables(f"{names[0]} equals {other}", report.tables[names[0]],
                                  report.tables[other]))
    return report


def degree_zero_check(q: Quiver, table: GradedDimTable) -> CheckResult:
    """Degree 0 of the algebra is the path algebra of q."""
    expected: Dict[tuple, int] = {}
    for path in all_paths(q):
        key = (path.source, path.target, 0)
        expected[key] = expected.get(key, 0) + 1
    degree_zero = {(i, j, 0): dim for (i, j), dim in table.restrict(0).items()}
    return compare_tables("degree 0 equals the path algebra",
                          GradedDimTable(table.grading, degree_zero, q.vertices),
                          GradedDimTable(table.grading, expected, q.vertices))


def root_total_check(q: Quiver, table: GradedDimTable) -> CheckResult:
    expected = sum(sum(root) for root in positive_roots(q))
    return CheckResult("total equals the positive-root count", table.total == expected,
                       f"{table.total} vs {expected}")


def associativity_check(pres, rng: random.Random, samples: int = ASSOCIATIVITY_SAMPLES) -> CheckResult:
    """
    Multiply random composable basis paths both ways round and check that
    vertex idempotents act as units.
    """
    field = pres.field
    basis = [path for i in pres.quiver.vertices for j in pres.quiver.vertices
             for path in pres.basis(i, j)]
    starting = {}
    for path in basis:
        starting.setdefault(path.source, []).append(path)

    failures = []
    for _ in range(samples):
        z = rng.choice(basis)
        y = rng.choice(starting[z.target])
        x = rng.choice(starting[y.target])
        ex, ey, ez = (PathElement.from_path(field, p) for p in (x, y, z))
        if multiply(multiply(ex, ey, pres), ez, pres) != multiply(ex, multiply(ey, ez, pres), pres):
            failures.append(f"({x})({y})({z})")
        source_unit = PathElement.from_path(field, Path.trivial(x.source))
        target_unit = PathElement.from_path(field, Path.trivial(x.target))
        if multiply(target_unit, ex, pres) != ex or multiply(ex, source_unit, pres) != ex:
            failures.append(f"units at {x}")
    return CheckResult(f"associativity on {samples} sampled triples", not failures,
                       ', '.join(failures[:5]))


def faulty_table(q: Quiver, field: ScalarField, fault: str, table: GradedDimTable, pres) -> GradedDimTable:
    """A deliberately wrong q=1 table, for exercising the failure path."""
    dq = double(q)
    relations = standard_relations(dq, field)
    if fault == 'relation' and not relations:
        logging.warning("  %s has no relation to drop; corrupting the table instead", q.name)
        fault = 'table'
    if fault == 'table':
        corrupted = dict(table.entries)
        first = next(iter(corrupted))
        corrupted[first] += 1
        return GradedDimTable(table.grading, corrupted, q.vertices)
    pres = graded_quotient(dq, relations[1:], StopPolicy.bounded(pres.computed_degree + 1), field)
    return dims(pres)


def cmd_verify(args) -> RunReport:
    """All three constructions on a Dynkin quiver, with every cross-check."""
    q = quiver_from_args(args)
    field = ScalarField.parse(args.field)
    info = classify(q)
    if not info.is_dynkin:
        raise NotDynkinError(f"verify needs a Dynkin quiver; {q.name} is not")

    report = RunReport("verify", make_header(args, q, field, dynkin_type=info.dynkin_type,
                                             fault=args.inject_fault))
    stages = Stages(report, args.timings, args.progress, 4)
    try:
        with stages.step("co(q=1)"):
            standard_pres, standard_table = lambda_co(q, QAssignment.constant(q, field, 1), field)
        if args.inject_fault:
            logging.warning("  Injecting fault '%s'", args.inject_fault)
            standard_table = faulty_table(q, field, args.inject_fault, standard_table, standard_pres)
        with stages.step("covering"):
            covering = verify_covering_iso(q, field)
        with stages.step("te"):
            tensor_table = lambda_te(q, None, field)
        with stages.step("associativity"):
            associativity = associativity_check(standard_pres, random.Random(args.seed))
    finally:
        stages.close()

    report.tables["co(q=1)"] = standard_table
    report.tables["co(q=-1)"] = covering.tables["co(q=-1)"]
    report.tables["ho"] = covering.tables["ho"]
    report.tables["te"] = tensor_table

    report.add(compare_tables("co(q=1) equals co(q=-1)", standard_table, covering.tables["co(q=-1)"]))
    report.add(compare_tables("co(q=1) equals ho", standard_table, covering.tables["ho"]))
    report.add(compare_tables("co(q=1) equals te", standard_table, tensor_table))
    for check in covering.checks:
        report.add(check)
    report.add(degree_zero_check(q, standard_table))
    report.add(root_total_check(q, standard_table))
    report.add(associativity)
    return report


def cmd_rescale(args) -> RunReport:
    """Solve for ε and λ and check the rescaling relations and ideal transport."""
    q = quiver_from_args(args)
    field = ScalarField.parse(args.field)
    qa = QAssignment.parse(args.q or '', q, field, args.q_default_one)
    solution = solve_scaling(q, qa)

    report = RunReport("rescale", make_header(args, q, field, q=qa.to_text(),
                                              max_degree=args.max_degree))
    scaling = verify_scaling(q, qa, solution)
    report.data["solution"] = solution.to_json_dict()
    report.data["vertices"] = scaling.to_json_dict()["vertices"]
    report.add(CheckResult("rescaled relations match", scaling.passed, ', '.join(scaling.failures())))
    for check in check_ideal_transport(q, qa, solution):
        report.add(check)

    if args.max_degree is not None or classify(q).is_dynkin:
        stop = stop_policy(args.max_degree)
        _, deformed = lambda_co(q, qa, field, stop)
        _, standard = lambda_co(q, QAssignment.constant(q, field, 1), field, stop)
        report.tables["co(q)"] = deformed
        report.tables["co(q=1)"] = standard
        report.add(compare_tables("co(q) equals co(q=1)", deformed, standard))
    return report


def cmd_mesh(args) -> RunReport:
    """Build a translation-quiver window and its mesh Hom table."""
    q = quiver_from_args(args)
    field = ScalarField.parse(args.field)
    if args.window < 0:
        raise InputError("--window must be at least 0")
    window, _, table = mesh_presentation(q, args.window, field)

    report = RunReport("mesh", make_header(args, q, field, window=args.window))
    report.tables["ho"] = table
    report.data["window"] = {
        "columns": [window.p_min, window.p_max],
        "vertices": len(window.quiver.vertices),
        "arrows": len(window.quiver.arrows),
        "meshes": [mesh.vertex for mesh in window.meshes],
        "longest_path": window.longest_path_length(),
    }
    violations = sigma_violations(window)
    report.add(CheckResult("sigma is bijective", not violations, ', '.join(violations)))
    if args.dot:
        try:
            with open(args.dot, 'w', encoding='utf-8') as f:
                f.write(export_dot(window))
        except OSError as error:
            raise InputError(f"cannot write DOT file: {error}") from None
        logging.info("  Wrote %s", args.dot)
    return report


def cmd_classify(args) -> RunReport:
    q = quiver_from_args(args)
    field = ScalarField.parse(args.field)
    info = classify(q)
    report = RunReport("classify", make_header(args, q, field))
    try:
        heights = height_function(q)
    except (HeightError, InputError):
        heights = None
    report.data["classification"] = {
        "dynkin_type": info.dynkin_type,
        "is_tree": info.is_tree,
        "is_acyclic": info.is_acyclic,
        "heights": heights,
        "positive_roots": len(positive_roots(q)) if info.is_dynkin else None,
    }
    return report


def cmd_omega(args) -> RunReport:
    """Ω = Ext¹(DA, A) with its actions, checked against degree 1 of the quotient."""
    q = quiver_from_args(args)
    field = ScalarField.parse(args.field)
    if not classify(q).is_acyclic:
        raise InputError(f"omega needs an acyclic quiver; {q.name} has a cycle")

    report = RunReport("omega", make_header(args, q, field))
    w = omega(q, field)
    report.data["omega"] = w.to_json_dict()
    report.tables["omega"] = GradedDimTable(
        GradingKind.STAR_DEGREE, {(i, j, 1): w.dimension(j, i) for j in q.vertices for i in q.vertices},
        q.vertices)
    failures = w.commutation_failures()
    report.add(CheckResult("left and right actions commute", not failures, ', '.join(failures)))

    # A star-degree-1 path has at most 2L + 1 arrows for L the longest path of q.
    longest = nx.dag_longest_path_length(nx.DiGraph(q.graph())) if q.arrows else 0
    _, table = lambda_co(q, None, field, StopPolicy.bounded(2 * longest + 1))
    degree_one = {(i, j, 1): dim for (i, j), dim in table.restrict(1).items()}
    report.add(compare_tables("omega equals degree 1 of the quotient", report.tables["omega"],
                              GradedDimTable(table.grading, degree_one, q.vertices)))
    return report


COMMANDS: Dict[str, Callable] = {
    "dims": cmd_dims,
    "verify": cmd_verify,
    "rescale": cmd_rescale,
    "mesh": cmd_mesh,
    "classify": cmd_classify,
    "omega": cmd_omega,
}


# ========================================
# OUTPUT
# ========================================

def use_color(stream=None) -> bool:
    setting = os.environ.get(COLOR_ENV_VAR)
    if setting is not None:
        return setting.strip() not in ('', '0')
    stream = stream or sys.stdout
    return hasattr(stream, 'isatty') and stream.isatty()


def paint(text: str, color: str, enabled: bool) -> str:
    if not enabled:
        return text
    return f"{COLORS[color]}{text}{COLORS['RESET']}"


def render_text(report: RunReport, color: bool = False) -> str:
    """Human-readable report: header, tables, then one line per check."""
    lines = ["=" * RULE_WIDTH, f"  Preproj-Verify {report.command}", "=" * RULE_WIDTH]
    quiver_lines = str(report.header.get("quiver", "")).strip().splitlines()
    lines.extend(f"  {line}" for line in quiver_lines)
    for key in sorted(report.header):
        if key != "quiver":
            lines.append(f"  {key}: {report.header[key]}")

    for name, table in report.tables.items():
        lines.append("")
        lines.append(paint(f"[{name}]", 'BOLD', color))
        lines.append(table.to_text())
    for key, value in report.data.items():
        lines.append("")
        lines.append(paint(f"[{key}]", 'BOLD', color))
        lines.append(json.dumps(value, indent=2, sort_keys=True))

    if report.checks:
        lines.append("")
    for check in report.checks:
        mark = paint(PASS_MARK, 'GREEN', color) if check.passed else paint(FAIL_MARK, 'RED', color)
        detail = f": {check.detail}" if check.detail else ""
        lines.append(f"  {mark} {check.name}{detail}")
    for name, seconds in report.timings.items():
        lines.append(f"  {name}: {seconds:.3f}s")

    lines.append("=" * RULE_WIDTH)
    verdict = paint("PASS", 'GREEN', color) if report.passed else paint("FAIL", 'RED', color)
    lines.append(f"  {verdict}")
    return '\n'.join(lines)


# ========================================
# ARGUMENTS
# ========================================

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    source = common.add_argument_group("quiver")
    source.add_argument('--quiver', metavar='FILE', help='quiver description file')
    source.add_argument('--type', choices=[f.value for f in DynkinFamily], help='built-in Dynkin family')
    source.add_argument('--rank', type=int, help='number of vertices for --type')
    source.add_argument('--orientation', choices=[o.value for o in Orientation],
                        help='orientation for --type')
    common.add_argument('--field', default=DEFAULT_FIELD, help="'q' or 'fp:<prime>'")
    common.add_argument('--json', action='store_true', help='print the report as JSON')
    common.add_argument('--seed', type=int, default=DEFAULT_SEED, help='seed for randomized checks')
    common.add_argument('--timings', action='store_true', help='include wall-clock timings')
    common.add_argument('--progress', action='store_true', help='show a progress bar on stderr')
    common.add_argument('-v', '--verbose', action='count', default=0, help='-v for INFO, -vv for DEBUG')

    parser = argparse.ArgumentParser(
        prog='preproj',
        description='Build preprojective algebras three ways and check that they agree.')
    sub = parser.add_subparsers(dest='command', required=True)

    dims_parser = sub.add_parser('dims', parents=[common], help='graded dimension tables')
    dims_parser.add_argument('--construction', default='co', help='co, ho, te, a comma list, or all')
    dims_parser.add_argument('--q', help='q values, e.g. a=2,b=-1/3 (co only)')
    dims_parser.add_argument('--q-default-one', action='store_true', help='unlisted arrows get q = 1')
    dims_parser.add_argument('--max-degree', type=int, help='explicit bound (required off Dynkin)')

    verify_parser = sub.add_parser('verify', parents=[common], help='run every cross-check')
    verify_parser.add_argument('--inject-fault', choices=FAULTS, help=argparse.SUPPRESS)

    rescale_parser = sub.add_parser('rescale', parents=[common], help='q-rescaling on a tree')
    rescale_parser.add_argument('--q', help='q values, e.g. a=2,b=3')
    rescale_parser.add_argument('--q-default-one', action='store_true', help='unlisted arrows get q = 1')
    rescale_parser.add_argument('--max-degree', type=int, help='bound for the table comparison')

    mesh_parser = sub.add_parser('mesh', parents=[common], help='translation-quiver window')
    mesh_parser.add_argument('--window', type=int, default=2, help='last column of the window')
    mesh_parser.add_argument('--dot', metavar='FILE', help='write the window as DOT')

    sub.add_parser('classify', parents=[common], help='Dynkin type, tree, heights')
    sub.add_parser('omega', parents=[common], help='dump the bimodule Ext¹(DA, A)')
    return parser


def configure_logging(verbosity: int):
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(level=level, format='%(message)s', stream=sys.stderr, force=True)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run one subcommand.

    Returns:
        0 when every check passed, 1 on a failed check, 2 on bad input,
        3 on an unexpected internal failure, 130 when interrupted
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose)

    try:
        report = COMMANDS[args.command](args)
    except KeyboardInterrupt:
        print(f"  {FAIL_MARK} Interrupted", file=sys.stderr)
        return EXIT_INTERRUPTED
    except PreprojError as error:
        print(f"  {FAIL_MARK} Error: {error}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except Exception as error:
        logging.debug("  Unexpected failure", exc_info=True)
        print(f"  {FAIL_MARK} Error: internal failure in {args.command}: {error!r}", file=sys.stderr)
        return EXIT_INTERNAL_ERROR

    if args.json:
        print(report.to_json())
    else:
        print(render_text(report, use_color()))
    return report.exit_code
