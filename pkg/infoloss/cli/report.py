"""
Report assembly and rendering

Every report is a plain dict first (exact rationals as "p/q" strings next
to floats), then either dumped as JSON or drawn with rich.
"""

import json
import sys
from typing import Any, Dict, List, Optional, Sequence, TextIO

from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from infoloss.checks.base import CheckResult
from infoloss.core.analysis import (
    equal_outdegree_components,
    has_w_motif,
    is_ideal,
    naive_variance,
    nonnegative_weights,
)
from infoloss.core.ensembles import EnsembleResult
from infoloss.core.errors import ContractViolation, NoInformationError
from infoloss.core.estimation import SimulationResult, final_estimate, weight_profiles
from infoloss.core.linalg import format_rational
from infoloss.core.network import LayeredNetwork, PrecisionVector, validate


def analysis_report(net: LayeredNetwork, precisions: PrecisionVector) -> Dict[str, Any]:
    """Validity, ideality, W-motif witness and final estimate of one network"""
    verdict = is_ideal(net, precisions)
    witness = has_w_motif(net)
    report: Dict[str, Any] = {
        "layers": list(net.layer_sizes),
        "edges": net.edge_count(),
        "precisions": [format_rational(w) for w in precisions],
        "validation": validate(net).to_dict(),
        "validity": [list(profile.valid) for profile in weight_profiles(net, precisions)],
        "verdict": "ideal" if verdict.ideal else "non-ideal",
        "ideality": verdict.to_dict(),
        "w_motif_witness": witness.to_dict() if witness else None,
        "estimate": None,
    }
    try:
        estimate = final_estimate(net, precisions)
    except NoInformationError:
        return report

    report["estimate"] = estimate.to_dict()
    report["estimate"]["efficiency"] = format_rational(estimate.efficiency)
    report["estimate"]["nonnegative_weights"] = nonnegative_weights(estimate)
    if net.num_layers == 2:
        report["equal_outdegree_components"] = equal_outdegree_components(net)
        try:
            naive = naive_variance(net, precisions)
            report["naive_variance"] = format_rational(naive)
            report["naive_variance_float"] = float(naive)
        except ContractViolation:
            report["naive_variance"] = None
    return report


def simulation_report(result: SimulationResult, analytic_variance: Optional[Any] = None) -> Dict[str, Any]:
    report = result.to_dict()
    report["mean_stderr"] = result.mean_stderr
    if analytic_variance is not None:
        report["analytic_variance"] = format_rational(analytic_variance)
        report["analytic_variance_float"] = float(analytic_variance)
    return report


def print_json(data: Any, stream: Optional[TextIO] = None) -> None:
    stream = stream or sys.stdout
    stream.write(json.dumps(data, indent=2) + "\n")


def render_analysis(report: Dict[str, Any], console: Optional[Console] = None) -> None:
    console = console or Console()
    ideal = report["verdict"] == "ideal"
    colour = "green" if ideal else "red"
    console.print(Panel(
        f"[bold {colour}]{report['verdict']}[/bold {colour}]  "
        f"[dim]layers {report['layers']}, {report['edges']} edges[/dim]",
        title="infoloss analyze",
    ))

    validation = report["validation"]
    if validation["ok"]:
        console.print("[green]✓[/green] every agent sends and receives")
    else:
        for label in ("no_inputs", "no_outputs"):
            if validation[label]:
                console.print(f"[yellow]![/yellow] {label.replace('_', ' ')}: {validation[label]}")

    silent = [
        (layer, agent)
        for layer, flags in enumerate(report["validity"], start=1)
        for agent, valid in enumerate(flags, start=1)
        if not valid
    ]
    if silent:
        console.print(f"[yellow]![/yellow] agents without an estimate (layer, agent): {silent}")

    certificate = report["ideality"].get("certificate")
    if certificate:
        console.print(f"certificate: ({', '.join(certificate)})")

    witness = report["w_motif_witness"]
    if witness:
        console.print(
            f"W-motif at layer {witness['to_layer']}: agents {tuple(witness['agents'])}, "
            f"sources {tuple(witness['sources'])}"
        )
    else:
        console.print("no W-motif")

    estimate = report["estimate"]
    if estimate is None:
        console.print("[red]no last-layer agent carries an estimate[/red]")
        return

    table = Table(show_header=True, header_style="bold cyan")
    table.add_column("quantity")
    table.add_column("exact")
    table.add_column("float", justify="right")
    table.add_row("variance", estimate["variance"], f"{estimate['variance_float']:.6f}")
    table.add_row("ideal variance", estimate["ideal_variance"], f"{estimate['ideal_variance_float']:.6f}")
    if report.get("naive_variance"):
        table.add_row("naive variance", report["naive_variance"], f"{report['naive_variance_float']:.6f}")
    for j, (exact, value) in enumerate(zip(estimate["alpha"], estimate["alpha_float"]), start=1):
        table.add_row(f"alpha_{j}", exact, f"{value:.6f}")
    console.print(table)


def render_simulation(report: Dict[str, Any], console: Optional[Console] = None) -> None:
    console = console or Console()
    table = Table(show_header=True, header_style="bold cyan", title="infoloss simulate")
    table.add_column("quantity")
    table.add_column("value", justify="right")
    table.add_row("trials", str(report["trials"]))
    table.add_row("seed", str(report["seed"]))
    table.add_row("mean", f"{report['mean']:.6f} ± {report['mean_stderr']:.6f}")
    table.add_row("variance", f"{report['variance']:.6f} ± {report['variance_stderr']:.6f}")
    if "analytic_variance" in report:
        table.add_row("exact variance", f"{report['analytic_variance']} ({report['analytic_variance_float']:.6f})")
    console.print(table)


def render_sweep(results: Sequence[EnsembleResult], console: Optional[Console] = None) -> None:
    console = console or Console()
    table = Table(show_header=True, header_style="bold cyan", title="infoloss sweep")
    table.add_column("layers")
    table.add_column("p", justify="right")
    table.add_column("ideal", justify="right")
    table.add_column("fraction", justify="right")
    for r in results:
        table.add_row(
            str(list(r.layer_sizes)),
            f"{r.p:g}",
            f"{r.ideal_count}/{r.trials}",
            f"{r.fraction:.3f} ± {r.ci95_halfwidth:.3f}",
        )
    console.print(table)


def render_verification(results: List[CheckResult], console: Optional[Console] = None) -> None:
    console = console or Console()
    table = Table(show_header=True, header_style="bold cyan", title="infoloss verify")
    table.add_column("check")
    table.add_column("instances", justify="right")
    table.add_column("result")
    table.add_column("seconds", justify="right")
    for r in results:
        mark = "[green]✓ pass[/green]" if r.passed else "[red]✗ fail[/red]"
        table.add_row(r.name, str(r.instances), mark, f"{r.elapsed:.2f}")
    console.print(table)
    for r in results:
        if not r.passed:
            console.print(f"[red]{r.name}[/red]: {r.detail}")
        elif r.notes:
            console.print(f"[yellow]{r.name}[/yellow]: {r.notes} note(s), first: {r.detail}")
    passed = sum(r.passed for r in results)
    console.print(f"[bold]Total:[/bold] [cyan]{passed}/{len(results)}[/cyan] checks passed\n")
