"""
Command-line interface for Groupoid Lab.

Every command reads GPD/PACT/FUNC/AUT files and prints a report. Exit codes:
0 when all checks pass, 1 when a mathematical check fails, 2 on input errors.
"""

import functools
import os
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

import click
import pydot
from loguru import logger
from pydantic import BaseModel

from .catequiv import (
    classify_functor,
    covering_correspondence,
    eta,
    induced_partial_action,
    projection_functor,
    tau,
)
from .closure import complete_closure
from .config import get_settings
from .core import GroupoidTable, ValidationReport, validate_groupoid
from .errors import AxiomError, FormatError, GpdError
from .formats import (
    dump_groupoid,
    dump_partial_action,
    load_autaction,
    load_functor,
    load_groupoid,
    load_partial_action,
    read_document,
)
from .glob import Globalization, check_full_dense, globalize, verify_universal
from .pact import (
    action_groupoid,
    graph_groupoid,
    graph_iso,
    is_global,
    is_strict,
    validate_partial_action,
)
from .prod import direct_product, semidirect_product, semidirect_trichotomy, validate_autaction
from .subgrp import (
    embed_direct,
    internal_direct_report,
    is_normal,
    is_normal_bw,
    is_subgroupoid,
    is_wide,
)

INPUT_ERROR = 2
CHECK_FAILED = 1


CONSOLE_FORMAT = (
    "<level>{level: <8}</level> | <cyan>gpdlab {extra[command]}</cyan> | <level>{message}</level>"
)
FILE_FORMAT = (
    "{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | gpdlab {extra[command]} | {name}:{function} - {message}"
)


def setup_logging(command: str = "-", verbose: bool = False) -> None:
    """
    Route loguru to stderr and the optional log file.

    Every record carries the subcommand name; -v lowers both sinks to DEBUG.
    """
    settings = get_settings()
    level = "DEBUG" if verbose else settings.log_level

    logger.remove()
    logger.configure(extra={"command": command})
    logger.add(sys.stderr, level=level, format=CONSOLE_FORMAT)

    if settings.log_file:
        logger.add(
            settings.log_file,
            level=level,
            rotation="10 MB",
            retention="30 days",
            format=FILE_FORMAT,
        )


def guarded(command: Callable) -> Callable:
    """Map library exceptions onto exit codes."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except FormatError as e:
            logger.error(f"Input error: {e}")
            click.echo(f"input error: {e}", err=True)
            sys.exit(INPUT_ERROR)
        except AxiomError as e:
            logger.error(f"Check failed: {e}")
            click.echo(f"FAILED: {e}")
            if e.report is not None:
                _echo_violations(e.report)
            elif e.witnesses:
                click.echo(f"witnesses: {', '.join(e.witnesses)}")
            sys.exit(CHECK_FAILED)
        except GpdError as e:
            logger.error(f"Internal error: {e}")
            click.echo(f"internal error: {e}", err=True)
            sys.exit(CHECK_FAILED)

    return wrapper


def _echo_violations(report: ValidationReport) -> None:
    if report.passed:
        return
    click.echo(report.to_frame().to_string(index=False))
    for tag, count in report.overflow.items():
        click.echo(f"... {count} more {tag} violations not shown")


def _finish(model: BaseModel, json_output: bool, ok: bool, lines: Sequence[str],
            report: Optional[ValidationReport] = None) -> None:
    """Print a report as JSON or text and exit 1 when it failed."""
    if json_output:
        click.echo(model.model_dump_json(indent=2))
    else:
        for line in lines:
            click.echo(line)
        if report is not None:
            _echo_violations(report)
        click.echo("PASSED" if ok else "FAILED")
    if not ok:
        sys.exit(CHECK_FAILED)


def parse_subsets(text: str) -> List[List[str]]:
    """'u,u-,x,y;v,v-,x,y' -> [['u','u-','x','y'], ['v','v-','x','y']]"""
    subsets = []
    for chunk in text.split(";"):
        ids = [g.strip() for g in chunk.split(",") if g.strip()]
        if not ids:
            raise FormatError(f"empty subset in '{text}'")
        subsets.append(ids)
    return subsets


def parse_point_map(text: str) -> Dict[str, str]:
    """'p=q,r=s' -> {'p': 'q', 'r': 's'}"""
    mapping = {}
    for chunk in text.split(","):
        source, eq, target = chunk.strip().partition("=")
        if not eq or not source.strip() or not target.strip():
            raise FormatError(f"bad map entry '{chunk}', expected point=point")
        mapping[source.strip()] = target.strip()
    return mapping


def _flag(value: bool) -> str:
    return "yes" if value else "no"


def _write_or_echo(text: str, output: Optional[Path]) -> None:
    if output is None:
        click.echo(text, nl=False)
        return
    output.parent.mkdir(parents=True, exist_ok=True)
    output.write_text(text, encoding="utf-8")
    logger.info(f"Wrote {output}")


def _groupoid_ref(pact_path: Path, output_dir: Path) -> str:
    """Reference from a file written in output_dir to the groupoid of a PACT file."""
    referenced = (pact_path.parent / read_document(pact_path).refs[0]).resolve()
    return os.path.relpath(referenced, output_dir.resolve())


@click.group()
@click.option('--verbose', '-v', is_flag=True, help='Log DEBUG records, including every witness')
@click.pass_context
def main(ctx: click.Context, verbose: bool) -> None:
    """Groupoid Lab: finite groupoids and partial actions, checked by brute force."""
    setup_logging(ctx.invoked_subcommand or "-", verbose)
    logger.debug(f"CLI started, log level {'DEBUG' if verbose else get_settings().log_level}")


# Groupoids --------------------------------------------------------------------


@main.command()
@click.argument('gpd_path', type=click.Path(exists=True, path_type=Path))
@click.option('--json', 'json_output', is_flag=True, help='Print the report as JSON')
@guarded
def validate(gpd_path: Path, json_output: bool) -> None:
    """Check every groupoid axiom on a GPD file."""
    t = load_groupoid(gpd_path)
    report = validate_groupoid(t)
    lines = [f"groupoid {t.name}: {len(t)} elements, {len(t.objects)} objects"]
    _finish(report, json_output, report.passed, lines, report)


@main.command()
@click.argument('gpd_path', type=click.Path(exists=True, path_type=Path))
@click.option('--output', '-o', type=click.Path(path_type=Path), help='Write the completed GPD here')
@guarded
def complete(gpd_path: Path, output: Optional[Path]) -> None:
    """Complete a partial composition table to the smallest groupoid."""
    t = load_groupoid(gpd_path)
    completed = complete_closure(t)
    added = len(completed) - len(t)
    logger.info(f"Completion of {t.name} added {added} elements")
    _write_or_echo(dump_groupoid(completed), output)
    if output is not None:
        click.echo(f"{t.name}: {len(t)} -> {len(completed)} elements")


@main.command('check-sub')
@click.argument('gpd_path', type=click.Path(exists=True, path_type=Path))
@click.argument('subset')
@guarded
def check_sub(gpd_path: Path, subset: str) -> None:
    """Is SUBSET (comma-separated ids) a subgroupoid?"""
    t = load_groupoid(gpd_path)
    members = parse_subsets(subset)[0]
    ok = is_subgroupoid(t, members)
    click.echo(f"subgroupoid: {_flag(ok)}")
    if not ok:
        sys.exit(CHECK_FAILED)


@main.command('check-wide')
@click.argument('gpd_path', type=click.Path(exists=True, path_type=Path))
@click.argument('subset')
@guarded
def check_wide(gpd_path: Path, subset: str) -> None:
    """Is SUBSET a wide subgroupoid?"""
    t = load_groupoid(gpd_path)
    ok = is_wide(t, parse_subsets(subset)[0])
    click.echo(f"wide: {_flag(ok)}")
    if not ok:
        sys.exit(CHECK_FAILED)


@main.command('check-normal')
@click.argument('gpd_path', type=click.Path(exists=True, path_type=Path))
@click.argument('subset')
@guarded
def check_normal(gpd_path: Path, subset: str) -> None:
    """Is SUBSET a normal subgroupoid? Both definitions are evaluated."""
    t = load_groupoid(gpd_path)
    members = parse_subsets(subset)[0]
    ok = is_normal(t, members)
    click.echo(f"normal: {_flag(ok)}")
    if is_subgroupoid(t, members) and is_wide(t, members):
        bw = is_normal_bw(t, members)
        click.echo(f"normal (isotropy form): {_flag(bw)}")
        if bw != ok:
            logger.error(f"{t.name}: the two normality tests disagree")
    if not ok:
        sys.exit(CHECK_FAILED)


@main.command('direct-report')
@click.argument('gpd_path', type=click.Path(exists=True, path_type=Path))
@click.option('--subs', required=True, help='Wide subgroupoids, e.g. "u,u-,x,y;v,v-,x,y"')
@click.option('--json', 'json_output', is_flag=True, help='Print the report as JSON')
@guarded
def direct_report(gpd_path: Path, subs: str, json_output: bool) -> None:
    """Evaluate the five internal-direct-product conditions."""
    t = load_groupoid(gpd_path)
    result = internal_direct_report(t, parse_subsets(subs))
    lines = [
        f"(i)   G = H1...Hn:            {result.product}",
        f"(ii)  each Hi normal:         {result.normal}",
        f"(iii) trivial intersections:  {result.trivial_intersection}",
        f"(iv)  unique factorization:   {result.unique_factorization}",
        f"(v)   cross commutation:      {result.commuting}",
    ]
    if result.left != result.right:
        logger.error(f"{t.name}: (i)-(iii) and (iv)-(v) disagree")
    _finish(result, json_output, result.all_true, lines, result.report)


@main.command()
@click.argument('gpd_path', type=click.Path(exists=True, path_type=Path))
@click.option('--subs', required=True, help='Wide subgroupoids, e.g. "u,u-,x,y;v,v-,x,y"')
@guarded
def embed(gpd_path: Path, subs: str) -> None:
    """Embed an internal direct product into the n-fold direct product."""
    t = load_groupoid(gpd_path)
    F = embed_direct(t, parse_subsets(subs))
    for g in t.elements:
        click.echo(f"map {g} = {F(g)}")


@main.command()
@click.argument('gpd_paths', nargs=-1, required=True, type=click.Path(exists=True, path_type=Path))
@click.option('--name', help='Name of the product table')
@click.option('--output', '-o', type=click.Path(path_type=Path), help='Write the product GPD here')
@guarded
def product(gpd_paths: Sequence[Path], name: Optional[str], output: Optional[Path]) -> None:
    """Direct product of one or more groupoids."""
    factors = [load_groupoid(path) for path in gpd_paths]
    t = direct_product(factors, name=name)
    validate_groupoid(t).raise_if_failed(AxiomError)
    _write_or_echo(dump_groupoid(t), output)


@main.command()
@click.argument('aut_path', type=click.Path(exists=True, path_type=Path))
@click.option('--name', help='Name of the product table')
@click.option('--output', '-o', type=click.Path(path_type=Path), help='Write the product GPD here')
@guarded
def semidirect(aut_path: Path, name: Optional[str], output: Optional[Path]) -> None:
    """Semidirect product of a groupoid by a group acting through automorphisms."""
    act = load_autaction(aut_path)
    validate_autaction(act).raise_if_failed(AxiomError)
    t = semidirect_product(act.target, act, name=name)
    validate_groupoid(t).raise_if_failed(AxiomError)
    _write_or_echo(dump_groupoid(t), output)


@main.command()
@click.argument('aut_path', type=click.Path(exists=True, path_type=Path))
@click.option('--json', 'json_output', is_flag=True, help='Print the report as JSON')
@guarded
def trichotomy(aut_path: Path, json_output: bool) -> None:
    """Evaluate the three semidirect-product conditions independently."""
    act = load_autaction(aut_path)
    validate_autaction(act).raise_if_failed(AxiomError)
    result = semidirect_trichotomy(act.target, act)
    lines = [
        f"identity map is a homomorphism:  {result.identity_homomorphism}",
        f"omega is trivial:                {result.omega_trivial}",
        f"G0 x group is normal:            {result.objects_group_normal}",
        f"omega fixes every object:        {result.objects_fixed}",
    ]
    _finish(result, json_output, result.agree, lines)


# Partial actions --------------------------------------------------------------


class PartialActionSummary(BaseModel):
    strict: bool
    global_: bool
    report: ValidationReport


@main.command('pact-validate')
@click.argument('pact_path', type=click.Path(exists=True, path_type=Path))
@click.option('--json', 'json_output', is_flag=True, help='Print the report as JSON')
@guarded
def pact_validate(pact_path: Path, json_output: bool) -> None:
    """Check the partial action axioms on a PACT file."""
    p = load_partial_action(pact_path)
    report = validate_partial_action(p)
    strict = report.passed and is_strict(p)
    global_ = report.passed and is_global(p)
    summary = PartialActionSummary(strict=strict, global_=global_, report=report)
    lines = [
        f"partial action {p.name} of {p.groupoid.name}: |X|={len(p.carrier)}, |D|={len(p.act)}",
        f"strict: {_flag(strict)}",
        f"global: {_flag(global_)}",
    ]
    _finish(summary, json_output, report.passed, lines, report)


@main.command('action-groupoid')
@click.argument('pact_path', type=click.Path(exists=True, path_type=Path))
@click.option('--graph', is_flag=True, help='Emit the graph groupoid of triples instead')
@click.option('--output', '-o', type=click.Path(path_type=Path), help='Write the GPD here')
@guarded
def action_groupoid_command(pact_path: Path, graph: bool, output: Optional[Path]) -> None:
    """The action groupoid (or graph groupoid) of a partial action."""
    p = load_partial_action(pact_path)
    t = graph_groupoid(p) if graph else action_groupoid(p)
    validate_groupoid(t).raise_if_failed(AxiomError)
    _write_or_echo(dump_groupoid(t), output)


@main.command('graph-iso')
@click.argument('pact_path', type=click.Path(exists=True, path_type=Path))
@guarded
def graph_iso_command(pact_path: Path) -> None:
    """Verify the isomorphism from the action groupoid onto the graph groupoid."""
    p = load_partial_action(pact_path)
    F = graph_iso(p)
    for g in F.source.elements:
        click.echo(f"map {g} = {F(g)}")
    click.echo("PASSED")


@main.command()
@click.argument('func_path', type=click.Path(exists=True, path_type=Path))
@click.option('--json', 'json_output', is_flag=True, help='Print the report as JSON')
@guarded
def classify(func_path: Path, json_output: bool) -> None:
    """Star-injective / star-surjective / covering flags of a functor."""
    F = load_functor(func_path)
    result = classify_functor(F)
    if json_output:
        click.echo(result.model_dump_json(indent=2))
        return
    click.echo(f"functor {F.name}: {F.source.name} -> {F.target.name}")
    click.echo(f"star-injective:  {_flag(result.star_injective)}")
    click.echo(f"star-surjective: {_flag(result.star_surjective)}")
    click.echo(f"covering:        {_flag(result.covering)}")


@main.command()
@click.argument('func_path', type=click.Path(exists=True, path_type=Path))
@click.option('--output', '-o', type=click.Path(path_type=Path), help='Write the PACT file here')
@guarded
def induce(func_path: Path, output: Optional[Path]) -> None:
    """The partial action induced by a star-injective functor."""
    F = load_functor(func_path)
    p = induced_partial_action(F)
    target = (func_path.parent / read_document(func_path).refs[1]).resolve()
    base = (output.parent if output is not None else Path.cwd()).resolve()
    _write_or_echo(dump_partial_action(p, os.path.relpath(target, base)), output)


@main.command()
@click.argument('pact_path', type=click.Path(exists=True, path_type=Path))
@guarded
def roundtrip(pact_path: Path) -> None:
    """Verify both round trips between a strict action and its projection functor."""
    p = load_partial_action(pact_path)
    validate_partial_action(p).raise_if_failed(AxiomError)
    mapping = tau(p)
    E = eta(projection_functor(p))
    global_, covering = covering_correspondence(p)
    for x in p.carrier:
        click.echo(f"tau {x} = {mapping[x]}")
    click.echo(f"eta verified on {len(E.source)} elements")
    click.echo(f"global: {_flag(global_)}  covering: {_flag(covering)}")
    if global_ != covering:
        logger.error(f"{p.name}: global and covering flags disagree")
        click.echo("FAILED")
        sys.exit(CHECK_FAILED)
    click.echo("PASSED")


# Globalization ----------------------------------------------------------------


def _classes_sidecar(gl: Globalization) -> str:
    lines = [f"classes {gl.beta.name} of {gl.base.name}"]
    for cid, reps in gl.classes.items():
        lines.append(f"class {cid} = " + " ".join(f"{g}@{x}" for g, x in reps))
    for x in gl.base.carrier:
        lines.append(f"iota {x} = {gl.iota[x]}")
    lines.append("end")
    return "\n".join(lines) + "\n"


@main.command('globalize')
@click.argument('pact_path', type=click.Path(exists=True, path_type=Path))
@click.option('--output-dir', type=click.Path(file_okay=False, path_type=Path),
              help='Write beta as a PACT file plus a .classes sidecar here')
@guarded
def globalize_command(pact_path: Path, output_dir: Optional[Path]) -> None:
    """Universal globalization of a strict partial action."""
    p = load_partial_action(pact_path)
    validate_partial_action(p).raise_if_failed(AxiomError)
    gl = globalize(p)
    click.echo(f"{p.name}: |X|={len(p.carrier)} -> |Y|={len(gl.carrier)}")
    if output_dir is None:
        click.echo(_classes_sidecar(gl), nl=False)
        return
    output_dir.mkdir(parents=True, exist_ok=True)
    stem = gl.beta.name.replace("(", "_").replace(")", "")
    ref = _groupoid_ref(pact_path, output_dir)
    (output_dir / f"{stem}.pact").write_text(dump_partial_action(gl.beta, ref), encoding="utf-8")
    (output_dir / f"{stem}.classes").write_text(_classes_sidecar(gl), encoding="utf-8")
    logger.success(f"Wrote {stem}.pact and {stem}.classes to {output_dir}")


@main.command('full-dense')
@click.argument('pact_path', type=click.Path(exists=True, path_type=Path))
@click.option('--json', 'json_output', is_flag=True, help='Print the report as JSON')
@guarded
def full_dense(pact_path: Path, json_output: bool) -> None:
    """Is the action groupoid full and dense inside that of its globalization?"""
    p = load_partial_action(pact_path)
    result = check_full_dense(globalize(p))
    _finish(result, json_output, result.passed,
            [f"full: {_flag(result.full)}", f"dense: {_flag(result.dense)}"], result.report)


@main.command()
@click.argument('pact_path', type=click.Path(exists=True, path_type=Path))
@click.argument('target_path', type=click.Path(exists=True, path_type=Path))
@click.option('--map', 'point_map', required=True, help='Morphism j as "x=j(x),..."')
@click.option('--exhaustive', is_flag=True, help='Also search every point map for uniqueness')
@guarded
def universal(pact_path: Path, target_path: Path, point_map: str, exhaustive: bool) -> None:
    """Find the unique mediating morphism from the globalization into TARGET."""
    p = load_partial_action(pact_path)
    q = load_partial_action(target_path)
    gl = globalize(p)
    k = verify_universal(gl, q, parse_point_map(point_map), exhaustive=exhaustive)
    for cid in gl.carrier:
        click.echo(f"k {cid} = {k[cid]}")
    click.echo("PASSED")


# Figures ----------------------------------------------------------------------


def groupoid_graph(t: GroupoidTable) -> pydot.Dot:
    """Objects as nodes, non-identity elements as labelled edges d(g) -> r(g)."""
    graph = pydot.Dot(t.name, graph_type="digraph", bgcolor="white")
    for e in t.object_list:
        graph.add_node(pydot.Node(f'"{e}"', label=f'"{e}"', shape="circle"))
    for g in t.elements:
        if not t.is_object(g):
            graph.add_edge(pydot.Edge(f'"{t.d(g)}"', f'"{t.r(g)}"', label=f'"{g}"'))
    return graph


@main.command()
@click.argument('gpd_path', type=click.Path(exists=True, path_type=Path))
@click.option('--output', '-o', type=click.Path(path_type=Path), help='Write the DOT file here')
@guarded
def dot(gpd_path: Path, output: Optional[Path]) -> None:
    """Emit a groupoid as a DOT graph."""
    t = load_groupoid(gpd_path)
    _write_or_echo(groupoid_graph(t).to_string(), output)


if __name__ == '__main__':
    main()
